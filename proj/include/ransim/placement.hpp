#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "ransim/config.hpp"
#include "ransim/topology.hpp"

namespace ransim {

/// Position in the global id-sorted sector ring.
struct PlacementCursor {
    std::size_t next_index = 0;

    friend bool operator==(const PlacementCursor&, const PlacementCursor&) = default;
};

/// Round robin with fallback: try the cursor's sector, otherwise scan forward
/// around the ring (at most once) for the first sector with room. The cursor
/// moves past whichever sector was chosen. Throws NetworkFullError and leaves
/// the UE unattached when every sector is full.
SectorId place_ue(Network& network, PlacementCursor& cursor, const UeId& ue);

struct PlacementResult {
    std::map<UeId, SectorId> placed;
    std::vector<UeId> unplaced;
};

/// Places UEs in input order, continuing past network-full failures.
PlacementResult place_all(Network& network, PlacementCursor& cursor, const std::vector<UeId>& ues);

struct NetworkBuild {
    Network network;
    PlacementCursor cursor;
    std::vector<UeId> unplaced;
};

/// Materialises the network: pinned UEs attach to their sector (CapacityError
/// if that overflows it); the rest go through round-robin placement in config
/// order.
NetworkBuild build_network(const NetworkConfig& cfg);

}  // namespace ransim
