#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ransim {

using GnbId = std::string;
using CellId = std::string;
using SectorId = std::string;
using UeId = std::string;

/// Throughput in bytes per second.
using BytesPerSecond = double;

enum class ServiceClass { voice, video, gaming, iot, data };

inline constexpr ServiceClass kAllServiceClasses[] = {
    ServiceClass::voice, ServiceClass::video, ServiceClass::gaming,
    ServiceClass::iot, ServiceClass::data};

std::string_view to_string(ServiceClass c) noexcept;
/// Throws ValidationError on an unknown name.
ServiceClass parse_service_class(std::string_view name);

/// Rate-level description of one UE's traffic.
struct TrafficProfile {
    ServiceClass kind = ServiceClass::data;
    double packet_size = 1500.0;       // bytes
    double interval = 1500.0 / 8e6;    // seconds between packets
    BytesPerSecond bitrate = 8e6;
    double delay = 0.01;               // mean one-way delay, seconds
    double jitter_spread = 1e-4;       // seconds
    double loss_rate = 0.0;            // fraction

    friend bool operator==(const TrafficProfile&, const TrafficProfile&) = default;
};

struct UeQos {
    double delay = 0.0;        // seconds
    double jitter = 0.0;       // seconds
    double packet_loss = 0.0;  // fraction

    friend bool operator==(const UeQos&, const UeQos&) = default;
};

struct Ue {
    UeId id;
    ServiceClass service_class = ServiceClass::data;
    TrafficProfile profile;
    std::optional<SectorId> sector_id;
    BytesPerSecond current_throughput = 0.0;
    UeQos qos;
    bool traffic_active = true;
    // Set by an explicit throughput override; traffic generation leaves the
    // value alone until traffic is restarted.
    bool throughput_pinned = false;

    friend bool operator==(const Ue&, const Ue&) = default;
};

struct Sector {
    SectorId id;
    CellId cell_id;
    std::uint32_t ue_capacity = 0;
    BytesPerSecond max_throughput = 0.0;
    std::set<UeId> attached_ue_ids;

    bool has_room() const noexcept { return attached_ue_ids.size() < ue_capacity; }

    friend bool operator==(const Sector&, const Sector&) = default;
};

struct Cell {
    CellId id;
    GnbId gnb_id;
    std::vector<SectorId> sector_ids;

    friend bool operator==(const Cell&, const Cell&) = default;
};

struct Gnb {
    GnbId id;
    double latitude = 0.0;
    double longitude = 0.0;
    std::vector<CellId> cell_ids;

    friend bool operator==(const Gnb&, const Gnb&) = default;
};

}  // namespace ransim
