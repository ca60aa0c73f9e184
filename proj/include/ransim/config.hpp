#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ransim/model.hpp"

namespace ransim {

/// Blend between UE-count load and throughput load in the sector load.
struct LoadWeights {
    double count_weight = 0.5;
    double tp_weight = 0.5;

    friend bool operator==(const LoadWeights&, const LoadWeights&) = default;
};

struct HandoverPolicy {
    double threshold = 80.0;      // percent, inclusive trigger
    double latency = 0.5;         // seconds recorded per event
    double failure_injection = 0.0;
    std::uint32_t max_ues_per_trigger = 1;
    std::string strategy = "threshold_offload";

    friend bool operator==(const HandoverPolicy&, const HandoverPolicy&) = default;
};

struct GnbConfig {
    GnbId id;
    double latitude = 0.0;
    double longitude = 0.0;
};

struct CellConfig {
    CellId id;
    GnbId gnb_id;
};

struct SectorConfig {
    SectorId id;
    CellId cell_id;
    std::uint32_t ue_capacity = 0;
    BytesPerSecond max_throughput = 0.0;
};

struct UeConfig {
    UeId id;
    ServiceClass service_class = ServiceClass::data;
    std::optional<SectorId> sector_id;
    bool traffic_active = true;
    TrafficProfile profile;
    // Initial pinned throughput, if any.
    std::optional<BytesPerSecond> throughput;
};

struct NetworkConfig {
    std::vector<GnbConfig> gnbs;
    std::vector<CellConfig> cells;
    std::vector<SectorConfig> sectors;
    std::vector<UeConfig> ues;
    LoadWeights weights;
    HandoverPolicy handover_policy;
    std::uint64_t seed = 0;
};

void validate(const LoadWeights& w);
void validate(const HandoverPolicy& p);

/// Cross-reference, uniqueness and range checks. Throws ValidationError naming
/// the offending id.
void validate(const NetworkConfig& cfg);

/// Parses a merged configuration document and validates it.
NetworkConfig load_config(std::string_view document);

/// Merges already-parsed documents (the four logical files) into one. Each
/// top-level key may appear in at most one document.
nlohmann::json merge_config_documents(std::span<const nlohmann::json> documents);

/// Loads one merged file or several partial files.
NetworkConfig load_config_files(std::span<const std::filesystem::path> paths);

NetworkConfig config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const NetworkConfig& cfg);

nlohmann::json to_json(const TrafficProfile& p);
/// Reads profile fields over `base`; missing fields keep base values and the
/// bitrate/interval pair is reconciled.
TrafficProfile profile_from_json(const nlohmann::json& j, const TrafficProfile& base);

/// Parameters of the built-in hexagonal reference deployment.
struct HexTopologyParams {
    std::uint32_t gnbs = 3;
    std::uint32_t cells_per_gnb = 6;
    std::uint32_t sectors_per_cell = 3;
    std::uint32_t ues_per_sector = 10;
    std::uint32_t sector_ue_capacity = 15;
    BytesPerSecond sector_max_throughput = 100e6;
    double intersite_distance_m = 500.0;
    std::uint64_t seed = 1;
};

/// Reference deployment: gNBs on a hexagonal grid, UEs left unplaced for
/// round-robin placement, service classes drawn from the seed.
NetworkConfig hex_topology_config(const HexTopologyParams& params = {});

}  // namespace ransim
