#include "ransim/topology.hpp"

#include <algorithm>

#include "ransim/error.hpp"
#include "ransim/traffic.hpp"

namespace ransim {

namespace {

template <typename Map>
auto& lookup(Map& map, const std::string& id, const char* kind) {
    auto it = map.find(id);
    if (it == map.end()) throw UnknownEntityError(kind, id);
    return it->second;
}

}  // namespace

Network Network::from_topology(const NetworkConfig& cfg) {
    Network net;
    for (const auto& g : cfg.gnbs) net.gnbs_[g.id] = Gnb{g.id, g.latitude, g.longitude, {}};
    for (const auto& c : cfg.cells) {
        net.cells_[c.id] = Cell{c.id, c.gnb_id, {}};
        lookup(net.gnbs_, c.gnb_id, "gNB").cell_ids.push_back(c.id);
    }
    for (const auto& s : cfg.sectors) {
        net.sectors_[s.id] = Sector{s.id, s.cell_id, s.ue_capacity, s.max_throughput, {}};
        lookup(net.cells_, s.cell_id, "cell").sector_ids.push_back(s.id);
    }
    for (auto& [id, g] : net.gnbs_) std::sort(g.cell_ids.begin(), g.cell_ids.end());
    for (auto& [id, c] : net.cells_) std::sort(c.sector_ids.begin(), c.sector_ids.end());
    for (const auto& [id, s] : net.sectors_) net.sector_order_.push_back(id);
    return net;
}

const Gnb& Network::gnb(const GnbId& id) const { return lookup(gnbs_, id, "gNB"); }
const Cell& Network::cell(const CellId& id) const { return lookup(cells_, id, "cell"); }
const Sector& Network::sector(const SectorId& id) const { return lookup(sectors_, id, "sector"); }
const Ue& Network::ue(const UeId& id) const { return lookup(ues_, id, "UE"); }
Ue& Network::ue(const UeId& id) { return lookup(ues_, id, "UE"); }

const Ue* Network::find_ue(const UeId& id) const {
    auto it = ues_.find(id);
    return it == ues_.end() ? nullptr : &it->second;
}

const Sector* Network::find_sector(const SectorId& id) const {
    auto it = sectors_.find(id);
    return it == sectors_.end() ? nullptr : &it->second;
}

void Network::add_ue(Ue ue) {
    if (ues_.count(ue.id)) throw ValidationError("duplicate UE id '" + ue.id + "'", ue.id);
    ue.sector_id.reset();
    const UeId id = ue.id;
    ues_.emplace(id, std::move(ue));
}

void Network::remove_ue(const UeId& id) {
    detach(id);
    ues_.erase(id);
}

void Network::attach(const UeId& ue_id, const SectorId& sector_id) {
    Ue& u = ue(ue_id);
    Sector& s = lookup(sectors_, sector_id, "sector");
    if (u.sector_id) {
        throw ValidationError("UE '" + ue_id + "' is already attached to '" + *u.sector_id + "'",
                              ue_id);
    }
    if (!s.has_room()) {
        throw CapacityError("sector '" + sector_id + "' is at capacity (" +
                                std::to_string(s.ue_capacity) + " UEs)",
                            sector_id);
    }
    s.attached_ue_ids.insert(ue_id);
    u.sector_id = sector_id;
}

std::optional<SectorId> Network::detach(const UeId& ue_id) {
    Ue& u = ue(ue_id);
    if (!u.sector_id) return std::nullopt;
    std::optional<SectorId> left = std::move(u.sector_id);
    u.sector_id.reset();
    lookup(sectors_, *left, "sector").attached_ue_ids.erase(ue_id);
    return left;
}

void Network::set_sector_capacity(const SectorId& id, std::optional<std::uint32_t> ue_capacity,
                                  std::optional<BytesPerSecond> max_throughput) {
    Sector& s = lookup(sectors_, id, "sector");
    if (ue_capacity) {
        if (*ue_capacity == 0) throw ValidationError("ue_capacity must be positive", id);
        if (*ue_capacity < s.attached_ue_ids.size()) {
            throw CapacityError("sector '" + id + "' holds " +
                                    std::to_string(s.attached_ue_ids.size()) +
                                    " UEs; capacity cannot drop below that",
                                id);
        }
    }
    if (max_throughput && !(*max_throughput > 0.0)) {
        throw ValidationError("max_throughput must be positive", id);
    }
    if (ue_capacity) s.ue_capacity = *ue_capacity;
    if (max_throughput) s.max_throughput = *max_throughput;
}

std::map<UeId, SectorId> Network::attachment_map() const {
    std::map<UeId, SectorId> out;
    for (const auto& [id, u] : ues_) {
        if (u.sector_id) out.emplace(id, *u.sector_id);
    }
    return out;
}

std::size_t Network::attached_count() const {
    std::size_t n = 0;
    for (const auto& [id, s] : sectors_) n += s.attached_ue_ids.size();
    return n;
}

std::vector<SectorId> neighbors(const Network& network, const SectorId& sector_id) {
    const Sector& sector = network.sector(sector_id);
    const Cell& cell = network.cell(sector.cell_id);
    const Gnb& gnb = network.gnb(cell.gnb_id);

    std::vector<SectorId> out;
    out.reserve(network.sectors().size());
    for (const auto& s : cell.sector_ids) {
        if (s != sector_id) out.push_back(s);
    }
    std::vector<SectorId> group;
    for (const auto& c : gnb.cell_ids) {
        if (c == cell.id) continue;
        const auto& ids = network.cell(c).sector_ids;
        group.insert(group.end(), ids.begin(), ids.end());
    }
    std::sort(group.begin(), group.end());
    out.insert(out.end(), group.begin(), group.end());

    group.clear();
    for (const auto& [id, s] : network.sectors()) {
        if (network.cell(s.cell_id).gnb_id != gnb.id) group.push_back(id);
    }
    out.insert(out.end(), group.begin(), group.end());
    return out;
}

Ue make_ue(const UeConfig& cfg) {
    Ue ue;
    ue.id = cfg.id;
    ue.service_class = cfg.service_class;
    ue.profile = cfg.profile;
    ue.traffic_active = cfg.traffic_active;
    if (cfg.throughput) {
        ue.current_throughput = *cfg.throughput;
        ue.throughput_pinned = true;
    }
    return ue;
}

}  // namespace ransim
