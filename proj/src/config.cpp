#include "ransim/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "ransim/error.hpp"
#include "ransim/rng.hpp"
#include "ransim/traffic.hpp"

namespace ransim {

using nlohmann::json;

namespace {

const std::set<std::string> kTopLevelKeys = {"gnbs", "cells", "sectors", "ues",
                                             "weights", "handover_policy", "seed"};

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    return it->get<T>();
}

std::string require_id(const json& j, const char* kind) {
    auto it = j.find("id");
    if (it == j.end() || !it->is_string() || it->get<std::string>().empty()) {
        throw ValidationError(std::string(kind) + " entry is missing a string 'id'");
    }
    return it->get<std::string>();
}

const json& array_at(const json& doc, const char* key) {
    static const json empty = json::array();
    auto it = doc.find(key);
    if (it == doc.end() || it->is_null()) return empty;
    if (!it->is_array()) throw ValidationError(std::string("'") + key + "' must be an array");
    return *it;
}

}  // namespace

void validate(const LoadWeights& w) {
    if (!(w.count_weight >= 0.0) || !(w.tp_weight >= 0.0)) {
        throw ValidationError("load weights must be non-negative");
    }
    if (std::abs(w.count_weight + w.tp_weight - 1.0) > 1e-12) {
        throw ValidationError("load weights must sum to 1");
    }
}

void validate(const HandoverPolicy& p) {
    if (!(p.threshold > 0.0 && p.threshold <= 100.0)) {
        throw ValidationError("handover threshold must lie in (0, 100]");
    }
    if (!(p.latency >= 0.0)) throw ValidationError("handover latency must be non-negative");
    if (!(p.failure_injection >= 0.0 && p.failure_injection <= 1.0)) {
        throw ValidationError("failure_injection must lie in [0, 1]");
    }
    if (p.max_ues_per_trigger == 0) throw ValidationError("max_ues_per_trigger must be at least 1");
    if (p.strategy.empty()) throw ValidationError("handover strategy name must not be empty");
}

void validate(const NetworkConfig& cfg) {
    validate(cfg.weights);
    validate(cfg.handover_policy);

    std::set<std::string> gnbs, cells, sectors, ues;
    for (const auto& g : cfg.gnbs) {
        if (!gnbs.insert(g.id).second) throw ValidationError("duplicate gNB id '" + g.id + "'", g.id);
    }
    for (const auto& c : cfg.cells) {
        if (!cells.insert(c.id).second) throw ValidationError("duplicate cell id '" + c.id + "'", c.id);
        if (!gnbs.count(c.gnb_id)) {
            throw ValidationError("cell '" + c.id + "' references unknown gNB '" + c.gnb_id + "'",
                                  c.gnb_id);
        }
    }
    for (const auto& s : cfg.sectors) {
        if (!sectors.insert(s.id).second) {
            throw ValidationError("duplicate sector id '" + s.id + "'", s.id);
        }
        if (!cells.count(s.cell_id)) {
            throw ValidationError("sector '" + s.id + "' references unknown cell '" + s.cell_id + "'",
                                  s.cell_id);
        }
        if (s.ue_capacity == 0) {
            throw ValidationError("sector '" + s.id + "' must have positive ue_capacity", s.id);
        }
        if (!(s.max_throughput > 0.0)) {
            throw ValidationError("sector '" + s.id + "' must have positive max_throughput", s.id);
        }
    }
    for (const auto& u : cfg.ues) {
        if (!ues.insert(u.id).second) throw ValidationError("duplicate UE id '" + u.id + "'", u.id);
        if (u.sector_id && !sectors.count(*u.sector_id)) {
            throw ValidationError("UE '" + u.id + "' references unknown sector '" + *u.sector_id + "'",
                                  *u.sector_id);
        }
        try {
            validate(u.profile);
        } catch (const ValidationError& e) {
            throw ValidationError("UE '" + u.id + "': " + e.what(), u.id);
        }
        if (u.throughput && !(*u.throughput >= 0.0)) {
            throw ValidationError("UE '" + u.id + "' has negative throughput", u.id);
        }
    }
    // Every gNB needs a cell and every cell a sector for the load means.
    std::set<std::string> gnbs_with_cells, cells_with_sectors;
    for (const auto& c : cfg.cells) gnbs_with_cells.insert(c.gnb_id);
    for (const auto& s : cfg.sectors) cells_with_sectors.insert(s.cell_id);
    for (const auto& g : cfg.gnbs) {
        if (!gnbs_with_cells.count(g.id)) throw ValidationError("gNB '" + g.id + "' has no cells", g.id);
    }
    for (const auto& c : cfg.cells) {
        if (!cells_with_sectors.count(c.id)) {
            throw ValidationError("cell '" + c.id + "' has no sectors", c.id);
        }
    }
}

json to_json(const TrafficProfile& p) {
    return json{{"kind", std::string(to_string(p.kind))},
                {"packet_size", p.packet_size},
                {"interval", p.interval},
                {"bitrate", p.bitrate},
                {"delay", p.delay},
                {"jitter_spread", p.jitter_spread},
                {"loss_rate", p.loss_rate}};
}

TrafficProfile profile_from_json(const json& j, const TrafficProfile& base) {
    if (!j.is_object()) throw ValidationError("profile must be an object");
    TrafficProfile p = base;
    if (j.contains("kind")) p.kind = parse_service_class(j.at("kind").get<std::string>());
    const bool has_size = j.contains("packet_size");
    const bool has_interval = j.contains("interval");
    const bool has_bitrate = j.contains("bitrate");
    p.packet_size = get_or(j, "packet_size", p.packet_size);
    p.interval = get_or(j, "interval", p.interval);
    p.bitrate = get_or(j, "bitrate", p.bitrate);
    if (has_bitrate && !has_interval && p.bitrate > 0.0) {
        p.interval = p.packet_size / p.bitrate;
    } else if ((has_size || has_interval) && !has_bitrate && p.interval > 0.0) {
        p.bitrate = p.packet_size / p.interval;
    }
    p.delay = get_or(j, "delay", p.delay);
    p.jitter_spread = get_or(j, "jitter_spread", p.jitter_spread);
    p.loss_rate = get_or(j, "loss_rate", p.loss_rate);
    return p;
}

NetworkConfig config_from_json(const json& doc) {
    if (!doc.is_object()) throw ValidationError("configuration document must be an object");
    NetworkConfig cfg;
    try {
        for (const auto& g : array_at(doc, "gnbs")) {
            cfg.gnbs.push_back({require_id(g, "gNB"), get_or(g, "latitude", 0.0),
                                get_or(g, "longitude", 0.0)});
        }
        for (const auto& c : array_at(doc, "cells")) {
            cfg.cells.push_back({require_id(c, "cell"), get_or<std::string>(c, "gnb_id", "")});
        }
        for (const auto& s : array_at(doc, "sectors")) {
            const std::string id = require_id(s, "sector");
            const auto capacity = get_or<std::int64_t>(s, "ue_capacity", 0);
            if (capacity < 0 || capacity > std::numeric_limits<std::uint32_t>::max()) {
                throw ValidationError("sector '" + id + "' has out-of-range ue_capacity", id);
            }
            cfg.sectors.push_back({id, get_or<std::string>(s, "cell_id", ""),
                                   static_cast<std::uint32_t>(capacity),
                                   get_or(s, "max_throughput", 0.0)});
        }
        for (const auto& u : array_at(doc, "ues")) {
            UeConfig ue;
            ue.id = require_id(u, "UE");
            ue.service_class = parse_service_class(get_or<std::string>(u, "service_class", "data"));
            if (auto it = u.find("sector_id"); it != u.end() && !it->is_null()) {
                ue.sector_id = it->get<std::string>();
            }
            ue.traffic_active = get_or(u, "traffic_active", true);
            ue.profile = default_profile(ue.service_class);
            if (auto it = u.find("profile"); it != u.end() && !it->is_null()) {
                ue.profile = profile_from_json(*it, ue.profile);
            }
            if (auto it = u.find("throughput"); it != u.end() && !it->is_null()) {
                ue.throughput = it->get<double>();
            }
            cfg.ues.push_back(std::move(ue));
        }
        if (auto it = doc.find("weights"); it != doc.end()) {
            cfg.weights.count_weight = get_or(*it, "count_weight", cfg.weights.count_weight);
            cfg.weights.tp_weight = get_or(*it, "tp_weight", cfg.weights.tp_weight);
        }
        if (auto it = doc.find("handover_policy"); it != doc.end()) {
            auto& p = cfg.handover_policy;
            p.threshold = get_or(*it, "threshold", p.threshold);
            p.latency = get_or(*it, "latency", p.latency);
            p.failure_injection = get_or(*it, "failure_injection", p.failure_injection);
            const auto max_ues = get_or<std::int64_t>(*it, "max_ues_per_trigger", p.max_ues_per_trigger);
            if (max_ues < 1) throw ValidationError("max_ues_per_trigger must be at least 1");
            p.max_ues_per_trigger = static_cast<std::uint32_t>(max_ues);
            p.strategy = get_or(*it, "strategy", p.strategy);
        }
        cfg.seed = get_or<std::uint64_t>(doc, "seed", 0);
    } catch (const json::exception& e) {
        throw ParseError(std::string("configuration field has the wrong type: ") + e.what());
    }
    validate(cfg);
    return cfg;
}

NetworkConfig load_config(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed configuration document: ") + e.what());
    }
    return config_from_json(doc);
}

json merge_config_documents(std::span<const json> documents) {
    json merged = json::object();
    for (const auto& doc : documents) {
        if (!doc.is_object()) throw ParseError("configuration document must be a JSON object");
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (!kTopLevelKeys.count(it.key())) {
                throw ParseError("unknown top-level configuration key '" + it.key() + "'");
            }
            if (merged.contains(it.key())) {
                throw ParseError("configuration key '" + it.key() + "' defined in more than one file");
            }
            merged[it.key()] = it.value();
        }
    }
    return merged;
}

NetworkConfig load_config_files(std::span<const std::filesystem::path> paths) {
    std::vector<json> docs;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) throw ParseError("cannot open configuration file " + path.string());
        try {
            docs.push_back(json::parse(in));
        } catch (const json::parse_error& e) {
            throw ParseError("malformed configuration file " + path.string() + ": " + e.what());
        }
    }
    return config_from_json(merge_config_documents(docs));
}

json to_json(const NetworkConfig& cfg) {
    json doc;
    doc["gnbs"] = json::array();
    for (const auto& g : cfg.gnbs) {
        doc["gnbs"].push_back({{"id", g.id}, {"latitude", g.latitude}, {"longitude", g.longitude}});
    }
    doc["cells"] = json::array();
    for (const auto& c : cfg.cells) doc["cells"].push_back({{"id", c.id}, {"gnb_id", c.gnb_id}});
    doc["sectors"] = json::array();
    for (const auto& s : cfg.sectors) {
        doc["sectors"].push_back({{"id", s.id},
                                  {"cell_id", s.cell_id},
                                  {"ue_capacity", s.ue_capacity},
                                  {"max_throughput", s.max_throughput}});
    }
    doc["ues"] = json::array();
    for (const auto& u : cfg.ues) {
        json ue{{"id", u.id},
                {"service_class", std::string(to_string(u.service_class))},
                {"sector_id", u.sector_id ? json(*u.sector_id) : json(nullptr)},
                {"traffic_active", u.traffic_active}};
        if (u.profile != default_profile(u.service_class)) ue["profile"] = to_json(u.profile);
        if (u.throughput) ue["throughput"] = *u.throughput;
        doc["ues"].push_back(std::move(ue));
    }
    doc["weights"] = {{"count_weight", cfg.weights.count_weight},
                      {"tp_weight", cfg.weights.tp_weight}};
    const auto& p = cfg.handover_policy;
    doc["handover_policy"] = {{"threshold", p.threshold},
                              {"latency", p.latency},
                              {"failure_injection", p.failure_injection},
                              {"max_ues_per_trigger", p.max_ues_per_trigger},
                              {"strategy", p.strategy}};
    doc["seed"] = cfg.seed;
    return doc;
}

NetworkConfig hex_topology_config(const HexTopologyParams& params) {
    NetworkConfig cfg;
    cfg.seed = params.seed;

    // gNB sites on a hexagonal lattice, walked ring by ring from the origin.
    constexpr double kBaseLat = 40.0;
    constexpr double kBaseLon = -74.0;
    constexpr double kMetersPerDegLat = 111'320.0;
    const double metres_per_deg_lon = kMetersPerDegLat * std::cos(kBaseLat * std::numbers::pi / 180.0);
    const auto site = [&](std::uint32_t i) -> std::pair<double, double> {
        if (i == 0) return {0.0, 0.0};
        // First ring holds 6 sites at 60 degree spacing; beyond that stay on
        // the same spiral with growing radius.
        const std::uint32_t ring = 1 + (i - 1) / 6;
        const double angle = ((i - 1) % 6) * std::numbers::pi / 3.0;
        const double r = ring * params.intersite_distance_m;
        return {r * std::cos(angle), r * std::sin(angle)};
    };

    const auto pad = [](std::uint32_t n, std::uint32_t width) {
        std::string s = std::to_string(n);
        return std::string(width > s.size() ? width - s.size() : 0, '0') + s;
    };
    const auto width = [](std::uint32_t count) {
        return static_cast<std::uint32_t>(std::to_string(count).size());
    };

    for (std::uint32_t g = 0; g < params.gnbs; ++g) {
        const auto [x, y] = site(g);
        const std::string gid = "gnb" + pad(g + 1, width(params.gnbs));
        cfg.gnbs.push_back({gid, kBaseLat + y / kMetersPerDegLat, kBaseLon + x / metres_per_deg_lon});
        for (std::uint32_t c = 0; c < params.cells_per_gnb; ++c) {
            const std::string cid = gid + "-c" + pad(c + 1, width(params.cells_per_gnb));
            cfg.cells.push_back({cid, gid});
            for (std::uint32_t s = 0; s < params.sectors_per_cell; ++s) {
                const std::string sid = cid + "-s" + pad(s + 1, width(params.sectors_per_cell));
                cfg.sectors.push_back({sid, cid, params.sector_ue_capacity, params.sector_max_throughput});
            }
        }
    }

    const std::uint32_t ue_count =
        params.gnbs * params.cells_per_gnb * params.sectors_per_cell * params.ues_per_sector;
    RngStream classes(params.seed, "service_classes");
    for (std::uint32_t u = 0; u < ue_count; ++u) {
        UeConfig ue;
        ue.id = "ue" + pad(u + 1, std::max<std::uint32_t>(4, width(ue_count)));
        ue.service_class = kAllServiceClasses[classes.below(std::size(kAllServiceClasses))];
        ue.profile = default_profile(ue.service_class);
        cfg.ues.push_back(std::move(ue));
    }
    validate(cfg);
    return cfg;
}

}  // namespace ransim
