#pragma once

// Brute-force recomputation of the load equations from flat maps. Shares no
// code with the library: it reads raw attachment and throughput tables and
// recomputes every level from scratch.

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace oracle {

struct RawSector {
    std::string id, cell, gnb;
    double capacity = 0;
    double max_tp = 0;
};

struct RawNetwork {
    std::vector<RawSector> sectors;
    std::map<std::string, std::string> attachment;  // ue -> sector
    std::map<std::string, double> throughput;       // ue -> bytes/s
};

struct RawLoads {
    std::map<std::string, double> sector, cell, gnb;
    double network = 0;
};

inline RawLoads recompute(const RawNetwork& n, double wc, double wt) {
    RawLoads out;
    std::map<std::string, std::vector<double>> by_cell;
    std::map<std::string, std::string> cell_gnb;
    for (const auto& s : n.sectors) {
        double count = 0, tp = 0;
        for (const auto& [ue, sec] : n.attachment) {
            if (sec != s.id) continue;
            count += 1;
            auto it = n.throughput.find(ue);
            if (it != n.throughput.end()) tp += it->second;
        }
        const double lu = count / s.capacity * 100.0;
        const double lt = (tp < s.max_tp ? tp : s.max_tp) / s.max_tp * 100.0;
        out.sector[s.id] = wc * lu + wt * lt;
        by_cell[s.cell].push_back(out.sector[s.id]);
        cell_gnb[s.cell] = s.gnb;
    }
    std::map<std::string, std::vector<double>> by_gnb;
    for (const auto& [cell, loads] : by_cell) {
        double sum = 0;
        for (double l : loads) sum += l;
        out.cell[cell] = sum / loads.size();
        by_gnb[cell_gnb[cell]].push_back(out.cell[cell]);
    }
    double total = 0;
    for (const auto& [gnb, loads] : by_gnb) {
        double sum = 0;
        for (double l : loads) sum += l;
        out.gnb[gnb] = sum / loads.size();
        total += out.gnb[gnb];
    }
    out.network = by_gnb.empty() ? 0.0 : total / by_gnb.size();
    return out;
}

/// Random raw network: up to 5 gNBs, 6 cells each, 3 sectors per cell and
/// 50 UEs with random throughputs, attached at random to sectors with room.
inline RawNetwork random_network(std::mt19937_64& gen) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); };
    RawNetwork n;
    const int gnbs = pick(1, 5);
    for (int g = 1; g <= gnbs; ++g) {
        const int cells = pick(1, 6);
        for (int c = 1; c <= cells; ++c) {
            const int sectors = pick(1, 3);
            for (int s = 1; s <= sectors; ++s) {
                RawSector rs;
                rs.gnb = "g" + std::to_string(g);
                rs.cell = rs.gnb + "c" + std::to_string(c);
                rs.id = rs.cell + "s" + std::to_string(s);
                rs.capacity = pick(1, 20);
                rs.max_tp = std::uniform_real_distribution<double>(1e6, 200e6)(gen);
                n.sectors.push_back(rs);
            }
        }
    }
    std::map<std::string, int> used;
    const int ues = pick(0, 50);
    for (int u = 0; u < ues; ++u) {
        const std::string id = "u" + std::to_string(u);
        n.throughput[id] = std::uniform_real_distribution<double>(0.0, 60e6)(gen);
        // Some UEs stay unattached.
        if (pick(0, 9) == 0) continue;
        const auto& s = n.sectors[pick(0, static_cast<int>(n.sectors.size()) - 1)];
        if (used[s.id] < s.capacity) {
            ++used[s.id];
            n.attachment[id] = s.id;
        }
    }
    return n;
}

}  // namespace oracle
