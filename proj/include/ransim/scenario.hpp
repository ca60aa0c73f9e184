#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ransim/model.hpp"

namespace ransim {

// Command payloads. Each maps onto one control verb.
struct AddUe {
    UeId ue_id;  // empty: the engine assigns one
    ServiceClass service_class = ServiceClass::data;
    std::optional<TrafficProfile> profile;
    std::optional<SectorId> sector_id;
    friend bool operator==(const AddUe&, const AddUe&) = default;
};
struct DelUe {
    UeId ue_id;
    friend bool operator==(const DelUe&, const DelUe&) = default;
};
struct StartUeTraffic {
    UeId ue_id;
    friend bool operator==(const StartUeTraffic&, const StartUeTraffic&) = default;
};
struct StopUeTraffic {
    UeId ue_id;
    friend bool operator==(const StopUeTraffic&, const StopUeTraffic&) = default;
};
struct SetUeThroughput {
    UeId ue_id;
    BytesPerSecond value = 0.0;
    friend bool operator==(const SetUeThroughput&, const SetUeThroughput&) = default;
};
struct SetUeDelay {
    UeId ue_id;
    double value = 0.0;  // seconds
    friend bool operator==(const SetUeDelay&, const SetUeDelay&) = default;
};
struct SetProfile {
    UeId ue_id;
    TrafficProfile profile;
    friend bool operator==(const SetProfile&, const SetProfile&) = default;
};
struct SetSectorCapacity {
    SectorId sector_id;
    std::optional<std::uint32_t> ue_capacity;
    std::optional<BytesPerSecond> max_throughput;
    friend bool operator==(const SetSectorCapacity&, const SetSectorCapacity&) = default;
};
struct Pause {
    friend bool operator==(const Pause&, const Pause&) = default;
};
struct Resume {
    friend bool operator==(const Resume&, const Resume&) = default;
};
struct StepN {
    std::uint32_t n = 1;
    friend bool operator==(const StepN&, const StepN&) = default;
};

using CommandPayload = std::variant<AddUe, DelUe, StartUeTraffic, StopUeTraffic, SetUeThroughput,
                                    SetUeDelay, SetProfile, SetSectorCapacity, Pause, Resume, StepN>;

enum class CommandOrigin { console, api, scenario };

std::string_view to_string(CommandOrigin o) noexcept;
std::string_view command_kind(const CommandPayload& payload) noexcept;

/// Pause, resume and step steer the clock rather than the network.
bool is_control(const CommandPayload& payload) noexcept;

/// Payload checks that need no network state. Throws ValidationError.
void validate(const CommandPayload& payload);

/// {"kind": ..., ...payload fields}
nlohmann::json to_json(const CommandPayload& payload);
/// Inverse of to_json; throws ParseError / ValidationError.
CommandPayload command_from_json(const nlohmann::json& j);

enum class RampMode { multiplicative, additive };

/// Throughput ramp on one sector's UEs: every tick from `start_tick` each
/// attached UE's throughput grows by `step` (x(1+step) or +step*baseline)
/// until the sector's load first reaches `until_load`.
struct RampSpec {
    std::optional<SectorId> sector;  // unset: first sector in id order
    double step = 0.10;
    RampMode mode = RampMode::multiplicative;
    std::int64_t start_tick = 1;
    std::optional<double> until_load;  // unset: handover threshold

    friend bool operator==(const RampSpec&, const RampSpec&) = default;
};

struct TimedCommand {
    std::int64_t tick = 0;
    CommandPayload payload;
    friend bool operator==(const TimedCommand&, const TimedCommand&) = default;
};

struct Scenario {
    std::string name;
    std::int64_t duration = 0;
    std::vector<TimedCommand> commands;  // sorted by tick
    std::optional<RampSpec> ramp;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Throws ValidationError when a command falls outside the duration or the
/// list is unsorted.
void validate(const Scenario& scenario);

Scenario scenario_from_json(const nlohmann::json& j);
Scenario load_scenario(std::string_view document);
nlohmann::json to_json(const Scenario& scenario);

/// Built-in rush-hour ramp: 300 ticks, Sector A's throughput grows 10% per
/// tick until its load reaches the handover threshold.
Scenario rush_hour_scenario(std::optional<SectorId> sector = {},
                            RampMode mode = RampMode::multiplicative);

/// Scenario with no commands, just a duration.
Scenario idle_scenario(std::int64_t duration, std::string name = "idle");

}  // namespace ransim
