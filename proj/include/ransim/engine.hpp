#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ransim/config.hpp"
#include "ransim/handover.hpp"
#include "ransim/load.hpp"
#include "ransim/metrics.hpp"
#include "ransim/placement.hpp"
#include "ransim/rng.hpp"
#include "ransim/scenario.hpp"
#include "ransim/topology.hpp"
#include "ransim/traffic.hpp"

namespace ransim {

/// Where a queued command will take effect.
struct CommandTicket {
    std::uint64_t id = 0;
    std::int64_t apply_tick = 0;
};

/// Outcome of one applied command.
struct CommandRecord {
    std::uint64_t id = 0;
    std::int64_t tick = 0;
    CommandOrigin origin = CommandOrigin::scenario;
    CommandPayload payload;
    bool ok = true;
    std::string error;
    nlohmann::json result;  // kind-specific, e.g. assigned UE id and sector
};

nlohmann::json to_json(const CommandRecord& record);
nlohmann::json to_json(const HandoverEvent& event);
nlohmann::json to_json(const LoadReport& report);
nlohmann::json to_json(const HandoverStats& stats);

/// Thread-safe FIFO of pending commands. Draining tick t closes it: anything
/// pushed afterwards is stamped for t + 1.
class CommandQueue {
public:
    struct Entry {
        std::uint64_t id;
        std::int64_t apply_tick;
        CommandOrigin origin;
        CommandPayload payload;
    };

    CommandTicket push(CommandPayload payload, CommandOrigin origin);

    /// Removes everything queued for `tick` or earlier, ordered by origin
    /// (console, api, scenario) then arrival, and opens `tick + 1`.
    std::vector<Entry> drain(std::int64_t tick);

    /// Id for a command injected at drain time rather than pushed.
    std::uint64_t allocate_id();

    std::int64_t open_tick() const;
    std::size_t pending() const;

private:
    mutable std::mutex mutex_;
    std::deque<Entry> entries_;
    std::uint64_t next_id_ = 1;
    std::int64_t open_tick_ = 0;
};

/// Everything one tick did, for publishing to observers.
struct TickSummary {
    std::int64_t tick = 0;
    std::vector<CommandRecord> commands;
    std::vector<HandoverEvent> handovers;
    LoadReport report;
};

/// Complete, reproducible account of a run.
struct RunRecord {
    std::uint64_t seed = 0;
    std::string scenario;
    std::int64_t ticks = 0;
    std::vector<CommandRecord> commands;
    std::vector<HandoverEvent> handovers;
    LoadReport final_report;
    HandoverStats stats;
};

nlohmann::json to_json(const RunRecord& record);

struct EngineOptions {
    std::int64_t epoch_ns = 0;
    std::optional<std::int64_t> retention_ticks;
    std::size_t ue_log_depth = 16;
    StrategyRegistry strategies = StrategyRegistry::with_builtins();
};

/// The simulation: owns the clock, the network and the per-tick pipeline.
///
/// Each tick runs, in order: queued commands, traffic generation, load
/// computation, load balancing, metric recording, clock advance. Only the
/// command queue is safe to touch from other threads; everything else belongs
/// to whichever thread calls tick().
class Engine {
public:
    explicit Engine(const NetworkConfig& config, EngineOptions options = {});

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    /// Next tick to run (ticks completed so far).
    std::int64_t clock() const noexcept { return clock_; }

    /// Validates and queues a command; thread-safe.
    CommandTicket enqueue(CommandPayload payload, CommandOrigin origin);
    CommandQueue& queue() noexcept { return queue_; }

    /// Arms a scenario relative to the current clock.
    void schedule(const Scenario& scenario);

    TickSummary tick();

    const Network& network() const noexcept { return network_; }
    const NetworkConfig& config() const noexcept { return config_; }
    const LoadWeights& weights() const noexcept { return config_.weights; }
    const HandoverPolicy& policy() const noexcept { return config_.handover_policy; }
    const HandoverStrategy& strategy() const noexcept { return *strategy_; }

    /// Report computed on the most recent tick (before that tick's balancing);
    /// nullopt before the first tick.
    const std::optional<LoadReport>& last_report() const noexcept { return last_report_; }

    const MetricStore& metrics() const noexcept { return metrics_; }
    const std::vector<HandoverEvent>& handover_events() const noexcept { return handovers_; }
    const std::vector<CommandRecord>& command_log() const noexcept { return commands_; }
    const HandoverStats& stats() const noexcept { return stats_; }
    const std::vector<UeId>& unplaced_at_build() const noexcept { return unplaced_; }

    /// Most recent traffic samples of a UE, oldest first.
    std::vector<TrafficSample> ue_log(const UeId& ue) const;

    std::uint64_t seed() const noexcept { return config_.seed; }
    const std::string& scenario_name() const noexcept { return scenario_name_; }

    RunRecord run_record() const;

    /// Draw counters for audit.
    std::uint64_t traffic_draws() const noexcept { return loss_rng_.draws(); }
    std::uint64_t qos_draws() const noexcept { return qos_rng_.draws(); }
    std::uint64_t failure_draws() const noexcept { return failure_rng_.draws(); }

private:
    struct RampState {
        RampSpec spec;
        SectorId sector;
        double until_load = 0.0;
        std::int64_t start_tick = 0;
        bool done = false;
        std::map<UeId, BytesPerSecond> baseline;
    };

    CommandRecord apply(const CommandQueue::Entry& entry);
    std::vector<CommandQueue::Entry> collect_commands(std::int64_t tick);
    void generate_traffic(std::int64_t tick);
    void record_metrics(std::int64_t tick, const LoadReport& report,
                        const std::vector<HandoverEvent>& events);
    UeId next_ue_id();

    NetworkConfig config_;
    Network network_;
    PlacementCursor cursor_;
    std::vector<UeId> unplaced_;
    std::unique_ptr<HandoverStrategy> strategy_;

    RngStream loss_rng_;
    RngStream qos_rng_;
    RngStream failure_rng_;

    CommandQueue queue_;
    std::int64_t clock_ = 0;
    std::optional<LoadReport> last_report_;
    MetricStore metrics_;
    std::vector<HandoverEvent> handovers_;
    std::vector<CommandRecord> commands_;
    HandoverStats stats_;

    std::multimap<std::int64_t, CommandPayload> timed_;
    std::optional<RampState> ramp_;
    std::string scenario_name_;

    std::size_t ue_log_depth_;
    std::map<UeId, std::deque<TrafficSample>> ue_logs_;
    std::uint64_t added_ues_ = 0;
};

/// Runs `scenario` for its full duration on a fresh engine built from
/// `config` with `seed`.
RunRecord run(const Scenario& scenario, NetworkConfig config, std::uint64_t seed,
              EngineOptions options = {});

}  // namespace ransim
