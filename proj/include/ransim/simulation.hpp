#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "ransim/engine.hpp"

namespace ransim {

/// Read-only view of the simulation published at a tick boundary.
struct Snapshot {
    std::int64_t clock = 0;  // ticks completed; commands queued now apply at this tick
    Network network;
    std::optional<LoadReport> report;
    HandoverStats stats;
    HandoverPolicy policy;
    LoadWeights weights;
    bool paused = true;
};

/// One entry of the push stream.
struct StreamEvent {
    std::uint64_t seq = 0;
    std::int64_t tick = 0;
    std::string type;  // "command", "handover" or "loads"
    nlohmann::json data;
};

/// Append-only, sequence-numbered event history that readers can tail.
class EventLog {
public:
    explicit EventLog(std::size_t capacity = 100'000) : capacity_(capacity) {}

    std::uint64_t publish(std::string type, std::int64_t tick, nlohmann::json data);

    /// Events with seq > `after`, in order.
    std::vector<StreamEvent> since(std::uint64_t after) const;

    /// As since(), but blocks up to `timeout` for something new. Returns early
    /// with nothing once closed.
    std::vector<StreamEvent> wait_since(std::uint64_t after, std::chrono::milliseconds timeout) const;

    std::uint64_t last_seq() const;
    void close();
    bool closed() const;

private:
    mutable std::mutex mutex_;
    mutable std::condition_variable cv_;
    std::deque<StreamEvent> events_;
    std::size_t capacity_;
    std::uint64_t next_seq_ = 1;
    bool closed_ = false;
};

/// Hosts an Engine for concurrent control surfaces.
///
/// The engine is driven either by a background runner (start()) that ticks at
/// a fixed wall-clock interval, or manually via step(). Control surfaces only
/// submit commands and read published snapshots.
class Simulation {
public:
    explicit Simulation(std::unique_ptr<Engine> engine);
    ~Simulation();

    Simulation(const Simulation&) = delete;
    Simulation& operator=(const Simulation&) = delete;

    std::shared_ptr<const Snapshot> snapshot() const;

    /// Queues a command. pause/resume/step_n also take effect on the clock
    /// right away; they are still logged at the next tick.
    CommandTicket submit(CommandPayload payload, CommandOrigin origin);

    /// Blocks until the command has been applied or `timeout` passes.
    std::optional<CommandRecord> wait_for(std::uint64_t command_id,
                                          std::chrono::milliseconds timeout) const;

    /// Runs `n` ticks on the calling thread. Only valid without a runner.
    std::vector<TickSummary> step(std::uint32_t n = 1);

    /// Starts the background runner. `interval` of zero runs flat out.
    void start(std::chrono::milliseconds interval, bool paused = false);
    void stop();
    bool running() const;
    bool paused() const;

    /// Runner pauses itself once the clock reaches `ticks`.
    void set_tick_limit(std::optional<std::int64_t> ticks);

    void schedule(const Scenario& scenario);

    /// Runs `fn` against the engine under its lock. Keep it short; the tick
    /// loop waits for it.
    template <typename Fn>
    auto with_engine(Fn&& fn) const {
        std::lock_guard lock(engine_mutex_);
        return fn(static_cast<const Engine&>(*engine_));
    }

    EventLog& events() noexcept { return events_; }
    const EventLog& events() const noexcept { return events_; }

private:
    TickSummary tick_locked();
    void publish(const TickSummary& summary);
    void publish_snapshot();
    void runner_loop();

    std::unique_ptr<Engine> engine_;
    mutable std::mutex engine_mutex_;

    mutable std::mutex snapshot_mutex_;
    std::shared_ptr<const Snapshot> snapshot_;

    mutable std::mutex acks_mutex_;
    mutable std::condition_variable acks_cv_;
    std::map<std::uint64_t, CommandRecord> acks_;

    mutable std::mutex run_mutex_;
    std::condition_variable run_cv_;
    std::thread runner_;
    bool runner_active_ = false;
    bool stopping_ = false;
    bool paused_ = true;
    std::uint64_t pending_steps_ = 0;
    std::chrono::milliseconds interval_{1000};
    std::optional<std::int64_t> tick_limit_;

    EventLog events_;
};

}  // namespace ransim
