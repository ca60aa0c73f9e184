#include "ransim/load.hpp"

#include <algorithm>
#include <set>

namespace ransim {

double ue_count_load(const Sector& sector) {
    return static_cast<double>(sector.attached_ue_ids.size()) /
           static_cast<double>(sector.ue_capacity) * 100.0;
}

BytesPerSecond offered_throughput(const Sector& sector, const Network& ues) {
    BytesPerSecond total = 0.0;
    for (const auto& id : sector.attached_ue_ids) total += ues.ue(id).current_throughput;
    return total;
}

double throughput_load(const Sector& sector, const Network& ues) {
    const BytesPerSecond capped = std::min(offered_throughput(sector, ues), sector.max_throughput);
    return capped / sector.max_throughput * 100.0;
}

double sector_load(const Sector& sector, const LoadWeights& weights, const Network& ues) {
    return weights.count_weight * ue_count_load(sector) +
           weights.tp_weight * throughput_load(sector, ues);
}

double cell_load(const Cell& cell, const LoadWeights& weights, const Network& network) {
    double sum = 0.0;
    for (const auto& s : cell.sector_ids) sum += sector_load(network.sector(s), weights, network);
    return sum / static_cast<double>(cell.sector_ids.size());
}

double gnb_load(const Gnb& gnb, const LoadWeights& weights, const Network& network) {
    double sum = 0.0;
    for (const auto& c : gnb.cell_ids) sum += cell_load(network.cell(c), weights, network);
    return sum / static_cast<double>(gnb.cell_ids.size());
}

namespace {

double mean_of(const std::vector<std::string>& ids, const std::map<std::string, double>& values) {
    double sum = 0.0;
    for (const auto& id : ids) sum += values.at(id);
    return sum / static_cast<double>(ids.size());
}

void aggregate_cell(LoadReport& r, const Cell& cell) {
    r.per_cell[cell.id] = mean_of(cell.sector_ids, r.per_sector);
}

void aggregate_gnb(LoadReport& r, const Gnb& gnb) {
    r.per_gnb[gnb.id] = mean_of(gnb.cell_ids, r.per_cell);
}

void aggregate_network(LoadReport& r) {
    if (r.per_gnb.empty()) {
        r.network_load = 0.0;
        return;
    }
    double sum = 0.0;
    for (const auto& [id, v] : r.per_gnb) sum += v;
    r.network_load = sum / static_cast<double>(r.per_gnb.size());
}

}  // namespace

LoadReport load_report(const Network& network, const LoadWeights& weights, std::int64_t tick) {
    LoadReport r;
    r.tick = tick;
    for (const auto& [id, s] : network.sectors()) r.per_sector[id] = sector_load(s, weights, network);
    for (const auto& [id, c] : network.cells()) aggregate_cell(r, c);
    for (const auto& [id, g] : network.gnbs()) aggregate_gnb(r, g);
    aggregate_network(r);
    return r;
}

void refresh_load_report(LoadReport& report, const Network& network, const LoadWeights& weights,
                         std::initializer_list<SectorId> sectors) {
    std::set<CellId> cells;
    std::set<GnbId> gnbs;
    for (const auto& id : sectors) {
        const Sector& s = network.sector(id);
        report.per_sector[id] = sector_load(s, weights, network);
        cells.insert(s.cell_id);
    }
    for (const auto& c : cells) {
        const Cell& cell = network.cell(c);
        aggregate_cell(report, cell);
        gnbs.insert(cell.gnb_id);
    }
    for (const auto& g : gnbs) aggregate_gnb(report, network.gnb(g));
    aggregate_network(report);
}

}  // namespace ransim
