#include "ransim/placement.hpp"

#include "ransim/error.hpp"

namespace ransim {

SectorId place_ue(Network& network, PlacementCursor& cursor, const UeId& ue) {
    const auto& ring = network.sector_order();
    if (network.ue(ue).sector_id) {
        throw ValidationError("UE '" + ue + "' is already attached", ue);
    }
    if (ring.empty()) throw NetworkFullError(ue);
    if (cursor.next_index >= ring.size()) cursor.next_index %= ring.size();

    for (std::size_t step = 0; step < ring.size(); ++step) {
        const std::size_t idx = (cursor.next_index + step) % ring.size();
        if (!network.sector(ring[idx]).has_room()) continue;
        network.attach(ue, ring[idx]);
        cursor.next_index = (idx + 1) % ring.size();
        return ring[idx];
    }
    throw NetworkFullError(ue);
}

PlacementResult place_all(Network& network, PlacementCursor& cursor, const std::vector<UeId>& ues) {
    PlacementResult result;
    for (const auto& ue : ues) {
        try {
            result.placed.emplace(ue, place_ue(network, cursor, ue));
        } catch (const NetworkFullError&) {
            result.unplaced.push_back(ue);
        }
    }
    return result;
}

NetworkBuild build_network(const NetworkConfig& cfg) {
    NetworkBuild build{Network::from_topology(cfg), {}, {}};
    std::vector<UeId> floating;
    for (const auto& ue_cfg : cfg.ues) {
        build.network.add_ue(make_ue(ue_cfg));
        if (ue_cfg.sector_id) {
            build.network.attach(ue_cfg.id, *ue_cfg.sector_id);
        } else {
            floating.push_back(ue_cfg.id);
        }
    }
    build.unplaced = place_all(build.network, build.cursor, floating).unplaced;
    return build;
}

}  // namespace ransim
