#pragma once

#include <string>
#include <vector>

#include "ransim/config.hpp"
#include "ransim/placement.hpp"
#include "ransim/topology.hpp"
#include "ransim/traffic.hpp"

namespace testing_support {

using namespace ransim;

struct SectorSpec {
    std::string gnb, cell, sector;
    std::uint32_t capacity = 10;
    double max_tp = 100e6;
};

inline NetworkConfig make_config(const std::vector<SectorSpec>& layout) {
    NetworkConfig cfg;
    for (const auto& s : layout) {
        bool have_gnb = false, have_cell = false;
        for (const auto& g : cfg.gnbs) have_gnb |= g.id == s.gnb;
        for (const auto& c : cfg.cells) have_cell |= c.id == s.cell;
        if (!have_gnb) cfg.gnbs.push_back({s.gnb, 0.0, 0.0});
        if (!have_cell) cfg.cells.push_back({s.cell, s.gnb});
        cfg.sectors.push_back({s.sector, s.cell, s.capacity, s.max_tp});
    }
    return cfg;
}

/// Pinned UE with a fixed throughput and no traffic generation.
inline UeConfig pinned_ue(std::string id, std::optional<std::string> sector, double tp) {
    UeConfig u;
    u.id = std::move(id);
    u.service_class = ServiceClass::data;
    u.profile = default_profile(ServiceClass::data);
    u.sector_id = std::move(sector);
    u.traffic_active = false;
    u.throughput = tp;
    return u;
}

inline Network build(const NetworkConfig& cfg) { return build_network(cfg).network; }

}  // namespace testing_support

#include "oracle/load_oracle.hpp"

namespace testing_support {

/// Library config mirroring an oracle network: every attached UE pinned to
/// its raw sector and throughput.
inline NetworkConfig to_config(const oracle::RawNetwork& raw) {
    std::vector<SectorSpec> layout;
    for (const auto& s : raw.sectors) {
        layout.push_back({s.gnb, s.cell, s.id, static_cast<std::uint32_t>(s.capacity), s.max_tp});
    }
    auto cfg = make_config(layout);
    for (const auto& [ue, tp] : raw.throughput) {
        // Unattached UEs would go through placement; leave them out.
        auto it = raw.attachment.find(ue);
        if (it != raw.attachment.end()) cfg.ues.push_back(pinned_ue(ue, it->second, tp));
    }
    return cfg;
}

}  // namespace testing_support
