#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ransim/config.hpp"
#include "ransim/model.hpp"

namespace ransim {

/// Topology tree plus the mutable UE attachment map.
///
/// Cells, sectors and gNBs are fixed after construction (only sector capacity
/// parameters may be retuned); UEs come and go. Every container is ordered by
/// id so iteration order is deterministic. Network is a value type: copying it
/// is how snapshots are taken.
class Network {
public:
    Network() = default;

    /// Builds the tree only; UEs are added separately.
    static Network from_topology(const NetworkConfig& cfg);

    const std::map<GnbId, Gnb>& gnbs() const noexcept { return gnbs_; }
    const std::map<CellId, Cell>& cells() const noexcept { return cells_; }
    const std::map<SectorId, Sector>& sectors() const noexcept { return sectors_; }
    const std::map<UeId, Ue>& ues() const noexcept { return ues_; }

    /// Sector ids in ascending order; the placement ring.
    const std::vector<SectorId>& sector_order() const noexcept { return sector_order_; }

    // Lookups throw UnknownEntityError.
    const Gnb& gnb(const GnbId& id) const;
    const Cell& cell(const CellId& id) const;
    const Sector& sector(const SectorId& id) const;
    const Ue& ue(const UeId& id) const;
    Ue& ue(const UeId& id);

    const Ue* find_ue(const UeId& id) const;
    const Sector* find_sector(const SectorId& id) const;

    const Cell& cell_of(const SectorId& sector) const { return cell(this->sector(sector).cell_id); }
    const Gnb& gnb_of(const SectorId& sector) const { return gnb(cell_of(sector).gnb_id); }

    /// Adds an unattached UE. Throws ValidationError on a duplicate id.
    void add_ue(Ue ue);
    /// Detaches (if needed) and forgets the UE.
    void remove_ue(const UeId& id);

    /// Throws CapacityError when the sector is full, ValidationError when the
    /// UE is already attached.
    void attach(const UeId& ue, const SectorId& sector);
    /// Returns the sector the UE left, if it was attached.
    std::optional<SectorId> detach(const UeId& ue);

    /// Retunes sector capacity. A capacity below current occupancy throws
    /// CapacityError.
    void set_sector_capacity(const SectorId& id, std::optional<std::uint32_t> ue_capacity,
                             std::optional<BytesPerSecond> max_throughput);

    /// UE -> sector for every attached UE.
    std::map<UeId, SectorId> attachment_map() const;

    std::size_t attached_count() const;

    friend bool operator==(const Network&, const Network&) = default;

private:
    std::map<GnbId, Gnb> gnbs_;
    std::map<CellId, Cell> cells_;
    std::map<SectorId, Sector> sectors_;
    std::map<UeId, Ue> ues_;
    std::vector<SectorId> sector_order_;
};

/// Neighbours of a sector: same-cell siblings, then sectors of sibling cells
/// in the same gNB, then sectors of other gNBs. Each group is id-sorted.
std::vector<SectorId> neighbors(const Network& network, const SectorId& sector);

/// Materialises a UE from its configuration entry (unattached).
Ue make_ue(const UeConfig& cfg);

}  // namespace ransim
