#include "ransim/engine.hpp"

#include <algorithm>

#include "ransim/error.hpp"

namespace ransim {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double outcome_code(HandoverOutcome o) {
    switch (o) {
        case HandoverOutcome::success: return 0.0;
        case HandoverOutcome::failed: return 1.0;
        case HandoverOutcome::rolled_back: return 2.0;
    }
    return 1.0;
}

std::map<std::string, std::string> sector_tags(const Network& net, const SectorId& sector) {
    const Cell& cell = net.cell_of(sector);
    return {{"gnb", cell.gnb_id}, {"cell", cell.id}, {"sector", sector}};
}

}  // namespace

json to_json(const CommandRecord& r) {
    json j{{"id", r.id},
           {"tick", r.tick},
           {"origin", std::string(to_string(r.origin))},
           {"command", to_json(r.payload)},
           {"ok", r.ok}};
    if (!r.error.empty()) j["error"] = r.error;
    if (!r.result.is_null()) j["result"] = r.result;
    return j;
}

json to_json(const HandoverEvent& e) {
    json j{{"ue_id", e.ue_id},
           {"source_sector", e.source_sector},
           {"target_sector", e.target_sector},
           {"kind", std::string(to_string(e.kind))},
           {"softness", std::string(to_string(e.softness))},
           {"start_tick", e.start_tick},
           {"latency", e.latency},
           {"outcome", std::string(to_string(e.outcome))}};
    if (!e.reason.empty()) j["reason"] = e.reason;
    return j;
}

json to_json(const LoadReport& r) {
    return json{{"tick", r.tick},
                {"per_sector", r.per_sector},
                {"per_cell", r.per_cell},
                {"per_gnb", r.per_gnb},
                {"network_load", r.network_load}};
}

json to_json(const HandoverStats& s) {
    const auto opt = [](std::optional<double> v) { return v ? json(*v) : json(nullptr); };
    return json{{"attempts", s.attempts},     {"successes", s.successes}, {"failures", s.failures},
                {"hsr", opt(s.hsr())},        {"hfr", opt(s.hfr())},
                {"handover_count", s.handover_count}};
}

json to_json(const RunRecord& r) {
    json j{{"seed", r.seed},
           {"scenario", r.scenario},
           {"ticks", r.ticks},
           {"commands", json::array()},
           {"handovers", json::array()},
           {"final_report", to_json(r.final_report)},
           {"stats", to_json(r.stats)}};
    for (const auto& c : r.commands) j["commands"].push_back(to_json(c));
    for (const auto& e : r.handovers) j["handovers"].push_back(to_json(e));
    return j;
}

CommandTicket CommandQueue::push(CommandPayload payload, CommandOrigin origin) {
    std::lock_guard lock(mutex_);
    const CommandTicket ticket{next_id_++, open_tick_};
    entries_.push_back({ticket.id, ticket.apply_tick, origin, std::move(payload)});
    return ticket;
}

std::vector<CommandQueue::Entry> CommandQueue::drain(std::int64_t tick) {
    std::vector<Entry> out;
    {
        std::lock_guard lock(mutex_);
        auto split = std::stable_partition(entries_.begin(), entries_.end(),
                                           [&](const Entry& e) { return e.apply_tick <= tick; });
        out.assign(std::make_move_iterator(entries_.begin()), std::make_move_iterator(split));
        entries_.erase(entries_.begin(), split);
        open_tick_ = std::max(open_tick_, tick + 1);
    }
    std::stable_sort(out.begin(), out.end(), [](const Entry& a, const Entry& b) {
        return static_cast<int>(a.origin) < static_cast<int>(b.origin);
    });
    return out;
}

std::uint64_t CommandQueue::allocate_id() {
    std::lock_guard lock(mutex_);
    return next_id_++;
}

std::int64_t CommandQueue::open_tick() const {
    std::lock_guard lock(mutex_);
    return open_tick_;
}

std::size_t CommandQueue::pending() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

Engine::Engine(const NetworkConfig& config, EngineOptions options)
    : config_(config),
      loss_rng_(config.seed, "traffic"),
      qos_rng_(config.seed, "qos"),
      failure_rng_(config.seed, "failure"),
      metrics_(options.epoch_ns, options.retention_ticks),
      ue_log_depth_(options.ue_log_depth) {
    validate(config_);
    strategy_ = options.strategies.create(config_.handover_policy.strategy);
    NetworkBuild build = build_network(config_);
    network_ = std::move(build.network);
    cursor_ = build.cursor;
    unplaced_ = std::move(build.unplaced);
}

CommandTicket Engine::enqueue(CommandPayload payload, CommandOrigin origin) {
    validate(payload);
    return queue_.push(std::move(payload), origin);
}

void Engine::schedule(const Scenario& scenario) {
    validate(scenario);
    scenario_name_ = scenario.name;
    for (const auto& c : scenario.commands) timed_.emplace(clock_ + c.tick, c.payload);
    if (scenario.ramp) {
        RampState ramp;
        ramp.spec = *scenario.ramp;
        if (network_.sector_order().empty()) throw ValidationError("ramp needs at least one sector");
        ramp.sector = scenario.ramp->sector.value_or(network_.sector_order().front());
        network_.sector(ramp.sector);  // throws on an unknown id
        ramp.until_load = scenario.ramp->until_load.value_or(policy().threshold);
        ramp.start_tick = clock_ + scenario.ramp->start_tick;
        ramp_ = std::move(ramp);
    }
}

std::vector<CommandQueue::Entry> Engine::collect_commands(std::int64_t tick) {
    std::vector<CommandQueue::Entry> entries = queue_.drain(tick);

    auto [first, last] = timed_.equal_range(tick);
    for (auto it = first; it != last; ++it) {
        entries.push_back({queue_.allocate_id(), tick, CommandOrigin::scenario, it->second});
    }
    timed_.erase(first, last);

    if (ramp_ && !ramp_->done && tick >= ramp_->start_tick) {
        if (last_report_ && last_report_->per_sector.at(ramp_->sector) >= ramp_->until_load) {
            ramp_->done = true;
        } else {
            for (const auto& ue_id : network_.sector(ramp_->sector).attached_ue_ids) {
                const double current = network_.ue(ue_id).current_throughput;
                double next = current * (1.0 + ramp_->spec.step);
                if (ramp_->spec.mode == RampMode::additive) {
                    const double base = ramp_->baseline.try_emplace(ue_id, current).first->second;
                    next = current + ramp_->spec.step * base;
                }
                entries.push_back({queue_.allocate_id(), tick, CommandOrigin::scenario,
                                   SetUeThroughput{ue_id, next}});
            }
        }
    }

    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return static_cast<int>(a.origin) < static_cast<int>(b.origin);
    });
    return entries;
}

UeId Engine::next_ue_id() {
    for (;;) {
        std::string n = std::to_string(++added_ues_);
        if (n.size() < 4) n.insert(0, 4 - n.size(), '0');
        UeId id = "ue" + n;
        if (!network_.find_ue(id)) return id;
    }
}

CommandRecord Engine::apply(const CommandQueue::Entry& entry) {
    CommandRecord rec{entry.id, clock_, entry.origin, entry.payload, true, {}, nullptr};
    try {
        std::visit(
            overloaded{
                [&](const AddUe& c) {
                    Ue ue;
                    ue.id = c.ue_id.empty() ? next_ue_id() : c.ue_id;
                    ue.service_class = c.service_class;
                    ue.profile = c.profile.value_or(default_profile(c.service_class));
                    network_.add_ue(ue);
                    rec.result = {{"ue_id", ue.id}, {"sector_id", nullptr}};
                    if (c.sector_id) {
                        try {
                            network_.attach(ue.id, *c.sector_id);
                        } catch (...) {
                            network_.remove_ue(ue.id);
                            rec.result = nullptr;
                            throw;
                        }
                        rec.result["sector_id"] = *c.sector_id;
                    } else {
                        rec.result["sector_id"] = place_ue(network_, cursor_, ue.id);
                    }
                },
                [&](const DelUe& c) {
                    network_.ue(c.ue_id);
                    network_.remove_ue(c.ue_id);
                    ue_logs_.erase(c.ue_id);
                },
                [&](const StartUeTraffic& c) {
                    Ue& ue = network_.ue(c.ue_id);
                    ue.traffic_active = true;
                    ue.throughput_pinned = false;
                },
                [&](const StopUeTraffic& c) {
                    Ue& ue = network_.ue(c.ue_id);
                    ue.traffic_active = false;
                    ue.throughput_pinned = false;
                    ue.current_throughput = 0.0;
                },
                [&](const SetUeThroughput& c) { set_throughput(network_.ue(c.ue_id), c.value); },
                [&](const SetUeDelay& c) {
                    if (!(c.value >= 0.0)) throw ValidationError("delay must be non-negative", c.ue_id);
                    network_.ue(c.ue_id).profile.delay = c.value;
                },
                [&](const SetProfile& c) { set_profile(network_.ue(c.ue_id), c.profile); },
                [&](const SetSectorCapacity& c) {
                    network_.set_sector_capacity(c.sector_id, c.ue_capacity, c.max_throughput);
                },
                // Clock control is carried out by whoever drives tick(); the
                // engine only logs it.
                [&](const Pause&) {},
                [&](const Resume&) {},
                [&](const StepN&) {},
            },
            entry.payload);
    } catch (const Error& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

void Engine::generate_traffic(std::int64_t tick) {
    for (const auto& [id, ue_view] : network_.ues()) {
        Ue& ue = network_.ue(id);
        if (ue.traffic_active) {
            auto& log = ue_logs_[id];
            log.push_back(generate(ue, tick, loss_rng_, qos_rng_));
            while (log.size() > ue_log_depth_) log.pop_front();
        } else if (!ue.throughput_pinned) {
            ue.current_throughput = 0.0;
        }
    }
}

void Engine::record_metrics(std::int64_t tick, const LoadReport& report,
                            const std::vector<HandoverEvent>& events) {
    const std::int64_t ts = metrics_.timestamp_for(tick);
    for (const auto& [id, load] : report.per_sector) {
        metrics_.record({"sector_load", sector_tags(network_, id), {{"load", load}}, ts});
    }
    for (const auto& [id, load] : report.per_cell) {
        metrics_.record({"cell_load", {{"gnb", network_.cell(id).gnb_id}, {"cell", id}}, {{"load", load}}, ts});
    }
    for (const auto& [id, load] : report.per_gnb) {
        metrics_.record({"gnb_load", {{"gnb", id}}, {{"load", load}}, ts});
    }
    metrics_.record({"network_load", {}, {{"load", report.network_load}}, ts});
    for (const auto& [id, ue] : network_.ues()) {
        if (!ue.traffic_active) continue;
        std::map<std::string, std::string> tags{{"ue", id}};
        if (ue.sector_id) tags.merge(sector_tags(network_, *ue.sector_id));
        metrics_.record({"ue_kpis",
                         std::move(tags),
                         {{"throughput", ue.current_throughput},
                          {"delay", ue.qos.delay},
                          {"jitter", ue.qos.jitter},
                          {"packet_loss", ue.qos.packet_loss}},
                         ts});
    }
    for (const auto& e : events) {
        metrics_.record({"handover",
                         {{"kind", std::string(to_string(e.kind))},
                          {"softness", std::string(to_string(e.softness))},
                          {"source", e.source_sector},
                          {"target", e.target_sector},
                          {"ue", e.ue_id}},
                         {{"latency", e.latency}, {"outcome_code", outcome_code(e.outcome)}},
                         ts});
    }
}

TickSummary Engine::tick() {
    TickSummary summary;
    summary.tick = clock_;

    for (const auto& entry : collect_commands(clock_)) {
        summary.commands.push_back(apply(entry));
        commands_.push_back(summary.commands.back());
    }

    generate_traffic(clock_);

    LoadReport report = load_report(network_, weights(), clock_);

    summary.handovers =
        balance_step(network_, report, policy(), weights(), *strategy_, failure_rng_, clock_);
    for (const auto& e : summary.handovers) {
        stats_.record(e);
        handovers_.push_back(e);
    }

    record_metrics(clock_, report, summary.handovers);

    summary.report = report;
    last_report_ = std::move(report);
    ++clock_;
    return summary;
}

std::vector<TrafficSample> Engine::ue_log(const UeId& ue) const {
    auto it = ue_logs_.find(ue);
    if (it == ue_logs_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

RunRecord Engine::run_record() const {
    RunRecord r;
    r.seed = config_.seed;
    r.scenario = scenario_name_;
    r.ticks = clock_;
    r.commands = commands_;
    r.handovers = handovers_;
    if (last_report_) r.final_report = *last_report_;
    r.stats = stats_;
    return r;
}

RunRecord run(const Scenario& scenario, NetworkConfig config, std::uint64_t seed,
              EngineOptions options) {
    config.seed = seed;
    Engine engine(config, std::move(options));
    engine.schedule(scenario);
    for (std::int64_t t = 0; t < scenario.duration; ++t) engine.tick();
    return engine.run_record();
}

}  // namespace ransim
