#include "ransim/simulation.hpp"

#include <algorithm>

#include "ransim/error.hpp"

namespace ransim {

using nlohmann::json;

namespace {
constexpr std::size_t kMaxAcks = 10'000;
}  // namespace

std::uint64_t EventLog::publish(std::string type, std::int64_t tick, json data) {
    std::uint64_t seq;
    {
        std::lock_guard lock(mutex_);
        seq = next_seq_++;
        events_.push_back({seq, tick, std::move(type), std::move(data)});
        while (events_.size() > capacity_) events_.pop_front();
    }
    cv_.notify_all();
    return seq;
}

std::vector<StreamEvent> EventLog::since(std::uint64_t after) const {
    std::lock_guard lock(mutex_);
    std::vector<StreamEvent> out;
    auto it = std::upper_bound(events_.begin(), events_.end(), after,
                               [](std::uint64_t s, const StreamEvent& e) { return s < e.seq; });
    out.assign(it, events_.end());
    return out;
}

std::vector<StreamEvent> EventLog::wait_since(std::uint64_t after,
                                              std::chrono::milliseconds timeout) const {
    {
        std::unique_lock lock(mutex_);
        cv_.wait_for(lock, timeout, [&] { return closed_ || next_seq_ - 1 > after; });
        if (closed_) return {};
    }
    return since(after);
}

std::uint64_t EventLog::last_seq() const {
    std::lock_guard lock(mutex_);
    return next_seq_ - 1;
}

void EventLog::close() {
    {
        std::lock_guard lock(mutex_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool EventLog::closed() const {
    std::lock_guard lock(mutex_);
    return closed_;
}

Simulation::Simulation(std::unique_ptr<Engine> engine) : engine_(std::move(engine)) {
    if (!engine_) throw Error("simulation needs an engine");
    publish_snapshot();
}

Simulation::~Simulation() {
    stop();
    events_.close();
}

std::shared_ptr<const Snapshot> Simulation::snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return snapshot_;
}

void Simulation::publish_snapshot() {
    auto snap = std::make_shared<Snapshot>();
    snap->clock = engine_->clock();
    snap->network = engine_->network();
    snap->report = engine_->last_report();
    snap->stats = engine_->stats();
    snap->policy = engine_->policy();
    snap->weights = engine_->weights();
    snap->paused = paused();
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = std::move(snap);
}

CommandTicket Simulation::submit(CommandPayload payload, CommandOrigin origin) {
    validate(payload);
    const bool control = is_control(payload);
    std::uint32_t steps = 0;
    if (const auto* s = std::get_if<StepN>(&payload)) steps = s->n;
    const bool is_pause = std::holds_alternative<Pause>(payload);
    const bool is_resume = std::holds_alternative<Resume>(payload);

    const CommandTicket ticket = engine_->enqueue(std::move(payload), origin);
    if (!control) return ticket;

    bool run_inline = false;
    {
        std::lock_guard lock(run_mutex_);
        if (is_pause) paused_ = true;
        if (is_resume) paused_ = false;
        if (steps > 0) {
            if (runner_active_) {
                pending_steps_ += steps;
            } else {
                run_inline = true;
            }
        }
    }
    run_cv_.notify_all();
    if (run_inline) {
        step(steps);
    } else {
        std::lock_guard lock(engine_mutex_);
        publish_snapshot();
    }
    return ticket;
}

std::optional<CommandRecord> Simulation::wait_for(std::uint64_t id,
                                                  std::chrono::milliseconds timeout) const {
    std::unique_lock lock(acks_mutex_);
    if (!acks_cv_.wait_for(lock, timeout, [&] { return acks_.count(id) > 0; })) return std::nullopt;
    return acks_.at(id);
}

TickSummary Simulation::tick_locked() {
    TickSummary summary = engine_->tick();
    publish(summary);
    publish_snapshot();
    return summary;
}

void Simulation::publish(const TickSummary& summary) {
    {
        std::lock_guard lock(acks_mutex_);
        for (const auto& rec : summary.commands) acks_[rec.id] = rec;
        while (acks_.size() > kMaxAcks) acks_.erase(acks_.begin());
    }
    acks_cv_.notify_all();

    for (const auto& rec : summary.commands) events_.publish("command", summary.tick, to_json(rec));
    for (const auto& e : summary.handovers) events_.publish("handover", summary.tick, to_json(e));

    const auto& r = summary.report;
    json loads{{"tick", r.tick}, {"network_load", r.network_load}, {"per_gnb", r.per_gnb}};
    if (!r.per_sector.empty()) {
        const auto max = std::max_element(r.per_sector.begin(), r.per_sector.end(),
                                          [](const auto& a, const auto& b) { return a.second < b.second; });
        loads["max_sector"] = {{"id", max->first}, {"load", max->second}};
    }
    events_.publish("loads", summary.tick, std::move(loads));
}

std::vector<TickSummary> Simulation::step(std::uint32_t n) {
    {
        std::lock_guard lock(run_mutex_);
        if (runner_active_) throw Error("cannot step manually while the runner is active");
    }
    std::vector<TickSummary> out;
    std::lock_guard lock(engine_mutex_);
    for (std::uint32_t i = 0; i < n; ++i) out.push_back(tick_locked());
    return out;
}

void Simulation::start(std::chrono::milliseconds interval, bool paused) {
    std::lock_guard lock(run_mutex_);
    if (runner_active_) return;
    interval_ = interval;
    paused_ = paused;
    stopping_ = false;
    runner_active_ = true;
    runner_ = std::thread([this] { runner_loop(); });
}

void Simulation::stop() {
    {
        std::lock_guard lock(run_mutex_);
        if (!runner_active_) return;
        stopping_ = true;
    }
    run_cv_.notify_all();
    if (runner_.joinable()) runner_.join();
    std::lock_guard lock(run_mutex_);
    runner_active_ = false;
}

bool Simulation::running() const {
    std::lock_guard lock(run_mutex_);
    return runner_active_;
}

bool Simulation::paused() const {
    std::lock_guard lock(run_mutex_);
    return paused_;
}

void Simulation::set_tick_limit(std::optional<std::int64_t> ticks) {
    {
        std::lock_guard lock(run_mutex_);
        tick_limit_ = ticks;
    }
    run_cv_.notify_all();
}

void Simulation::schedule(const Scenario& scenario) {
    std::lock_guard lock(engine_mutex_);
    engine_->schedule(scenario);
}

void Simulation::runner_loop() {
    auto next_due = std::chrono::steady_clock::now();
    for (;;) {
        {
            std::unique_lock lock(run_mutex_);
            run_cv_.wait(lock, [&] { return stopping_ || !paused_ || pending_steps_ > 0; });
            if (stopping_) return;
            if (!paused_ && pending_steps_ == 0 && interval_.count() > 0) {
                // Paced mode: sleep until the next tick is due, waking early
                // for stop or pause.
                if (run_cv_.wait_until(lock, next_due, [&] { return stopping_ || paused_; })) {
                    if (stopping_) return;
                    continue;
                }
            }
            if (pending_steps_ > 0) --pending_steps_;
        }

        std::int64_t clock;
        {
            std::lock_guard lock(engine_mutex_);
            tick_locked();
            clock = engine_->clock();
        }
        next_due = std::max(next_due + interval_, std::chrono::steady_clock::now());

        bool hit_limit = false;
        {
            std::lock_guard lock(run_mutex_);
            if (tick_limit_ && clock >= *tick_limit_ && !paused_) {
                paused_ = true;
                hit_limit = true;
            }
        }
        if (hit_limit) {
            std::lock_guard lock(engine_mutex_);
            publish_snapshot();
        }
    }
}

}  // namespace ransim
