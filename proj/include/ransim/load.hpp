#pragma once

#include <cstdint>
#include <map>

#include "ransim/config.hpp"
#include "ransim/topology.hpp"

namespace ransim {

/// Load percentages at every level of the tree for one tick.
struct LoadReport {
    std::map<SectorId, double> per_sector;
    std::map<CellId, double> per_cell;
    std::map<GnbId, double> per_gnb;
    double network_load = 0.0;
    std::int64_t tick = 0;

    friend bool operator==(const LoadReport&, const LoadReport&) = default;
};

/// Attached UEs over capacity, in percent. Not clamped.
double ue_count_load(const Sector& sector);

/// Aggregate UE throughput, capped at the sector maximum, over that maximum,
/// in percent. Always within [0, 100].
double throughput_load(const Sector& sector, const Network& ues);

/// Sum of current throughput over the sector's attached UEs, uncapped.
BytesPerSecond offered_throughput(const Sector& sector, const Network& ues);

double sector_load(const Sector& sector, const LoadWeights& weights, const Network& ues);

/// Mean of the cell's sector loads.
double cell_load(const Cell& cell, const LoadWeights& weights, const Network& network);

/// Mean of the gNB's cell loads.
double gnb_load(const Gnb& gnb, const LoadWeights& weights, const Network& network);

/// All levels in one pass. The network load is the mean of the gNB loads.
LoadReport load_report(const Network& network, const LoadWeights& weights, std::int64_t tick = 0);

/// Recomputes the sector entries for `sectors` plus their cell, gNB and
/// network aggregates, leaving the rest of the report untouched.
void refresh_load_report(LoadReport& report, const Network& network, const LoadWeights& weights,
                         std::initializer_list<SectorId> sectors);

}  // namespace ransim
