#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ransim/config.hpp"
#include "ransim/load.hpp"
#include "ransim/rng.hpp"
#include "ransim/topology.hpp"

namespace ransim {

/// Which disaggregated-unit boundary a handover crosses. Without explicit
/// DU/CU entities a cell stands in for a gNB-DU and a gNB for a gNB-CU.
enum class HandoverKind { intra_gnb_du, inter_gnb_du_intra_gnb_cu, inter_gnb_cu };
enum class Softness { soft, hard };
enum class HandoverOutcome { success, failed, rolled_back };

std::string_view to_string(HandoverKind k) noexcept;
std::string_view to_string(Softness s) noexcept;
std::string_view to_string(HandoverOutcome o) noexcept;

struct HandoverClass {
    HandoverKind kind;
    Softness softness;

    friend bool operator==(const HandoverClass&, const HandoverClass&) = default;
};

struct HandoverEvent {
    UeId ue_id;
    SectorId source_sector;
    SectorId target_sector;
    HandoverKind kind = HandoverKind::intra_gnb_du;
    Softness softness = Softness::soft;
    std::int64_t start_tick = 0;
    double latency = 0.0;
    HandoverOutcome outcome = HandoverOutcome::success;
    std::string reason;  // empty on success

    friend bool operator==(const HandoverEvent&, const HandoverEvent&) = default;
};

struct HandoverStats {
    std::uint64_t attempts = 0;
    std::uint64_t successes = 0;
    std::uint64_t failures = 0;
    std::uint64_t handover_count = 0;

    /// Undefined (nullopt) until the first attempt.
    std::optional<double> hsr() const;
    std::optional<double> hfr() const;

    void record(const HandoverEvent& event);

    friend bool operator==(const HandoverStats&, const HandoverStats&) = default;
};

HandoverStats stats(std::span<const HandoverEvent> events);

/// One proposed relocation.
struct Move {
    UeId ue;
    SectorId source;
    SectorId target;

    friend bool operator==(const Move&, const Move&) = default;
};

/// Pluggable decision logic. Strategies see read-only state and only propose
/// moves; execution and rollback stay with the load balancer.
class HandoverStrategy {
public:
    virtual ~HandoverStrategy() = default;
    virtual std::string_view name() const = 0;
    virtual std::vector<Move> decide(const LoadReport& report, const Network& network,
                                     const HandoverPolicy& policy,
                                     const LoadWeights& weights) const = 0;
};

/// Default strategy: relieve each congested sector by moving its heaviest UE
/// to the least loaded neighbour that stays under threshold after the move.
class ThresholdOffloadStrategy final : public HandoverStrategy {
public:
    static constexpr std::string_view kName = "threshold_offload";

    std::string_view name() const override { return kName; }
    std::vector<Move> decide(const LoadReport& report, const Network& network,
                             const HandoverPolicy& policy, const LoadWeights& weights) const override;
};

class StrategyRegistry {
public:
    using Factory = std::function<std::unique_ptr<HandoverStrategy>()>;

    /// Registry pre-populated with the built-in strategies.
    static StrategyRegistry with_builtins();

    void add(std::string name, Factory factory);
    bool contains(std::string_view name) const;
    /// Throws ValidationError for an unregistered name.
    std::unique_ptr<HandoverStrategy> create(std::string_view name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, Factory, std::less<>> factories_;
};

/// Inclusive threshold test.
bool check_congestion(double sector_load, const HandoverPolicy& policy);

/// Load `target` would have with `ue` attached to it.
double projected_sector_load(const Network& network, const SectorId& target, const UeId& ue,
                             const LoadWeights& weights);

/// Least currently-loaded neighbour of `source` that has room for `ue` and
/// whose projected load stays below threshold. Ties go to the earlier
/// neighbour. nullopt when nothing qualifies.
std::optional<SectorId> select_target(const Network& network, const LoadReport& report,
                                      const SectorId& source, const UeId& ue,
                                      const HandoverPolicy& policy, const LoadWeights& weights);

/// Attached UE with the highest current throughput; ties go to the smaller id.
/// Throws ValidationError when the sector is empty.
UeId select_ue_to_move(const Network& network, const SectorId& source);

/// Throws UnknownEntityError for unknown sectors, ValidationError when
/// source == target.
HandoverClass classify(const Network& network, const SectorId& source, const SectorId& target);

/// Moves `ue` to `target`. One failure draw is consumed per call. An injected
/// failure or a full target puts the UE back on its source and reports
/// rolled_back; either way the attachment map matches its prior state.
HandoverEvent execute_handover(Network& network, const UeId& ue, const SectorId& target,
                               const HandoverPolicy& policy, RngStream& failure_rng,
                               std::int64_t tick);

/// One load-balancing pass: ask the strategy for moves and execute them.
std::vector<HandoverEvent> balance_step(Network& network, const LoadReport& report,
                                        const HandoverPolicy& policy, const LoadWeights& weights,
                                        const HandoverStrategy& strategy, RngStream& failure_rng,
                                        std::int64_t tick);

}  // namespace ransim
