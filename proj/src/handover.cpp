#include "ransim/handover.hpp"

#include <algorithm>

#include "ransim/error.hpp"

namespace ransim {

std::string_view to_string(HandoverKind k) noexcept {
    switch (k) {
        case HandoverKind::intra_gnb_du: return "intra_gnb_du";
        case HandoverKind::inter_gnb_du_intra_gnb_cu: return "inter_gnb_du_intra_gnb_cu";
        case HandoverKind::inter_gnb_cu: return "inter_gnb_cu";
    }
    return "intra_gnb_du";
}

std::string_view to_string(Softness s) noexcept {
    return s == Softness::soft ? "soft" : "hard";
}

std::string_view to_string(HandoverOutcome o) noexcept {
    switch (o) {
        case HandoverOutcome::success: return "success";
        case HandoverOutcome::failed: return "failed";
        case HandoverOutcome::rolled_back: return "rolled_back";
    }
    return "failed";
}

std::optional<double> HandoverStats::hsr() const {
    if (attempts == 0) return std::nullopt;
    return static_cast<double>(successes) / static_cast<double>(attempts);
}

std::optional<double> HandoverStats::hfr() const {
    if (attempts == 0) return std::nullopt;
    // Complement rather than failures/attempts so hsr + hfr == 1 exactly.
    return 1.0 - *hsr();
}

void HandoverStats::record(const HandoverEvent& event) {
    ++attempts;
    if (event.outcome == HandoverOutcome::success) {
        ++successes;
        ++handover_count;
    } else {
        ++failures;
    }
}

HandoverStats stats(std::span<const HandoverEvent> events) {
    HandoverStats s;
    for (const auto& e : events) s.record(e);
    return s;
}

StrategyRegistry StrategyRegistry::with_builtins() {
    StrategyRegistry r;
    r.add(std::string(ThresholdOffloadStrategy::kName),
          [] { return std::make_unique<ThresholdOffloadStrategy>(); });
    return r;
}

void StrategyRegistry::add(std::string name, Factory factory) {
    factories_[std::move(name)] = std::move(factory);
}

bool StrategyRegistry::contains(std::string_view name) const {
    return factories_.find(name) != factories_.end();
}

std::unique_ptr<HandoverStrategy> StrategyRegistry::create(std::string_view name) const {
    auto it = factories_.find(name);
    if (it == factories_.end()) {
        throw ValidationError("unknown handover strategy '" + std::string(name) + "'", std::string(name));
    }
    return it->second();
}

std::vector<std::string> StrategyRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, f] : factories_) out.push_back(name);
    return out;
}

bool check_congestion(double load, const HandoverPolicy& policy) {
    return load >= policy.threshold;
}

double projected_sector_load(const Network& network, const SectorId& target, const UeId& ue,
                             const LoadWeights& weights) {
    const Sector& s = network.sector(target);
    const Ue& u = network.ue(ue);
    const double count = static_cast<double>(s.attached_ue_ids.size() + 1);
    const double offered = offered_throughput(s, network) + u.current_throughput;
    const double count_load = count / static_cast<double>(s.ue_capacity) * 100.0;
    const double tp_load = std::min(offered, s.max_throughput) / s.max_throughput * 100.0;
    return weights.count_weight * count_load + weights.tp_weight * tp_load;
}

std::optional<SectorId> select_target(const Network& network, const LoadReport& report,
                                      const SectorId& source, const UeId& ue,
                                      const HandoverPolicy& policy, const LoadWeights& weights) {
    std::optional<SectorId> best;
    double best_load = 0.0;
    for (const auto& candidate : neighbors(network, source)) {
        const Sector& s = network.sector(candidate);
        if (!s.has_room()) continue;
        if (projected_sector_load(network, candidate, ue, weights) >= policy.threshold) continue;
        const double current = report.per_sector.at(candidate);
        if (!best || current < best_load) {
            best = candidate;
            best_load = current;
        }
    }
    return best;
}

UeId select_ue_to_move(const Network& network, const SectorId& source) {
    const Sector& s = network.sector(source);
    if (s.attached_ue_ids.empty()) {
        throw ValidationError("sector '" + source + "' has no attached UEs", source);
    }
    // attached_ue_ids iterates in id order, so strict > keeps the smallest id.
    const UeId* best = nullptr;
    double best_tp = 0.0;
    for (const auto& id : s.attached_ue_ids) {
        const double tp = network.ue(id).current_throughput;
        if (!best || tp > best_tp) {
            best = &id;
            best_tp = tp;
        }
    }
    return *best;
}

HandoverClass classify(const Network& network, const SectorId& source, const SectorId& target) {
    const Sector& a = network.sector(source);
    const Sector& b = network.sector(target);
    if (source == target) {
        throw ValidationError("handover source and target are both '" + source + "'", source);
    }
    if (a.cell_id == b.cell_id) return {HandoverKind::intra_gnb_du, Softness::soft};
    if (network.cell(a.cell_id).gnb_id == network.cell(b.cell_id).gnb_id) {
        return {HandoverKind::inter_gnb_du_intra_gnb_cu, Softness::soft};
    }
    return {HandoverKind::inter_gnb_cu, Softness::hard};
}

HandoverEvent execute_handover(Network& network, const UeId& ue, const SectorId& target,
                               const HandoverPolicy& policy, RngStream& failure_rng,
                               std::int64_t tick) {
    const Ue& u = network.ue(ue);
    if (!u.sector_id) throw ValidationError("UE '" + ue + "' is not attached", ue);
    const SectorId source = *u.sector_id;
    const HandoverClass cls = classify(network, source, target);

    HandoverEvent event;
    event.ue_id = ue;
    event.source_sector = source;
    event.target_sector = target;
    event.kind = cls.kind;
    event.softness = cls.softness;
    event.start_tick = tick;
    event.latency = policy.latency;

    const bool inject_failure = failure_rng.uniform() < policy.failure_injection;

    network.detach(ue);
    try {
        network.attach(ue, target);
    } catch (const CapacityError& e) {
        network.attach(ue, source);
        event.outcome = HandoverOutcome::rolled_back;
        event.reason = e.what();
        return event;
    }
    if (inject_failure) {
        network.detach(ue);
        network.attach(ue, source);
        event.outcome = HandoverOutcome::rolled_back;
        event.reason = "injected failure";
        return event;
    }
    event.outcome = HandoverOutcome::success;
    return event;
}

std::vector<Move> ThresholdOffloadStrategy::decide(const LoadReport& report, const Network& network,
                                                   const HandoverPolicy& policy,
                                                   const LoadWeights& weights) const {
    std::vector<std::pair<double, SectorId>> congested;
    for (const auto& [id, load] : report.per_sector) {
        if (check_congestion(load, policy)) congested.emplace_back(load, id);
    }
    std::stable_sort(congested.begin(), congested.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    if (congested.empty()) return {};

    // Moves are rehearsed on a scratch copy so later decisions see the load
    // earlier ones would cause.
    Network scratch = network;
    LoadReport projected = report;
    std::vector<Move> moves;
    for (const auto& [initial_load, source] : congested) {
        for (std::uint32_t n = 0; n < policy.max_ues_per_trigger; ++n) {
            if (!check_congestion(projected.per_sector.at(source), policy)) break;
            if (scratch.sector(source).attached_ue_ids.empty()) break;
            const UeId ue = select_ue_to_move(scratch, source);
            const auto target = select_target(scratch, projected, source, ue, policy, weights);
            if (!target) break;
            scratch.detach(ue);
            scratch.attach(ue, *target);
            refresh_load_report(projected, scratch, weights, {source, *target});
            moves.push_back({ue, source, *target});
        }
    }
    return moves;
}

std::vector<HandoverEvent> balance_step(Network& network, const LoadReport& report,
                                        const HandoverPolicy& policy, const LoadWeights& weights,
                                        const HandoverStrategy& strategy, RngStream& failure_rng,
                                        std::int64_t tick) {
    std::vector<HandoverEvent> events;
    for (const Move& move : strategy.decide(report, network, policy, weights)) {
        const Ue* ue = network.find_ue(move.ue);
        const Sector* target = network.find_sector(move.target);
        if (!ue || !target || ue->sector_id != move.source || move.source == move.target) {
            HandoverEvent rejected;
            rejected.ue_id = move.ue;
            rejected.source_sector = move.source;
            rejected.target_sector = move.target;
            if (target && network.find_sector(move.source) && move.source != move.target) {
                const HandoverClass cls = classify(network, move.source, move.target);
                rejected.kind = cls.kind;
                rejected.softness = cls.softness;
            }
            rejected.start_tick = tick;
            rejected.latency = policy.latency;
            rejected.outcome = HandoverOutcome::failed;
            rejected.reason = "strategy proposed an invalid move";
            events.push_back(std::move(rejected));
            continue;
        }
        events.push_back(execute_handover(network, move.ue, move.target, policy, failure_rng, tick));
    }
    return events;
}

}  // namespace ransim
