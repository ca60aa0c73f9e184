#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "ransim/config.hpp"
#include "ransim/error.hpp"

using namespace ransim;
using nlohmann::json;

namespace {

json minimal() {
    return json::parse(R"({
      "gnbs": [{"id": "g1", "latitude": 1.5, "longitude": 2.5}],
      "cells": [{"id": "c1", "gnb_id": "g1"}],
      "sectors": [{"id": "s1", "cell_id": "c1", "ue_capacity": 10, "max_throughput": 1e8}],
      "ues": []
    })");
}

std::string entity_of(const json& doc) {
    try {
        config_from_json(doc);
    } catch (const ValidationError& e) {
        return e.entity();
    }
    return "<none>";
}

}  // namespace

TEST_CASE("minimal document loads") {
    const auto cfg = load_config(minimal().dump());
    CHECK(cfg.gnbs.size() == 1);
    CHECK(cfg.cells.size() == 1);
    CHECK(cfg.sectors.size() == 1);
    CHECK(cfg.ues.empty());
    CHECK(cfg.gnbs[0].latitude == 1.5);
    CHECK(cfg.weights == LoadWeights{});
    CHECK(cfg.handover_policy == HandoverPolicy{});
}

TEST_CASE("dangling references name the missing entity") {
    auto doc = minimal();
    doc["ues"] = json::array({{{"id", "u1"}, {"service_class", "data"}, {"sector_id", "s9"}}});
    CHECK_THROWS_AS(config_from_json(doc), ValidationError);
    CHECK(entity_of(doc) == "s9");

    doc = minimal();
    doc["cells"].push_back({{"id", "c2"}, {"gnb_id", "g7"}});
    CHECK(entity_of(doc) == "g7");
}

TEST_CASE("structural rules") {
    SUBCASE("duplicate sector id") {
        auto doc = minimal();
        doc["sectors"].push_back(doc["sectors"][0]);
        CHECK(entity_of(doc) == "s1");
    }
    SUBCASE("zero capacity") {
        auto doc = minimal();
        doc["sectors"][0]["ue_capacity"] = 0;
        CHECK(entity_of(doc) == "s1");
    }
    SUBCASE("non-positive max throughput") {
        auto doc = minimal();
        doc["sectors"][0]["max_throughput"] = 0;
        CHECK(entity_of(doc) == "s1");
    }
    SUBCASE("cell without sectors") {
        auto doc = minimal();
        doc["cells"].push_back({{"id", "c2"}, {"gnb_id", "g1"}});
        CHECK(entity_of(doc) == "c2");
    }
    SUBCASE("weights must sum to one") {
        auto doc = minimal();
        doc["weights"] = {{"count_weight", 0.7}, {"tp_weight", 0.7}};
        CHECK_THROWS_AS(config_from_json(doc), ValidationError);
    }
    SUBCASE("unknown service class") {
        auto doc = minimal();
        doc["ues"] = json::array({{{"id", "u1"}, {"service_class", "telepathy"}}});
        CHECK_THROWS(config_from_json(doc));
    }
}

TEST_CASE("json round trip") {
    auto cfg = hex_topology_config();
    const auto again = config_from_json(to_json(cfg));
    CHECK(to_json(again) == to_json(cfg));
}

TEST_CASE("reference deployment has 3/18/54/540 entities") {
    const auto cfg = hex_topology_config();
    CHECK(cfg.gnbs.size() == 3);
    CHECK(cfg.cells.size() == 18);
    CHECK(cfg.sectors.size() == 54);
    CHECK(cfg.ues.size() == 540);
    for (const auto& s : cfg.sectors) {
        CHECK(s.max_throughput == 100e6);
        CHECK(s.ue_capacity >= 10);
    }
    for (const auto& u : cfg.ues) CHECK_FALSE(u.sector_id.has_value());
    // Different seeds draw different class mixes.
    HexTopologyParams p;
    p.seed = 2;
    const auto other = hex_topology_config(p);
    int differ = 0;
    for (std::size_t i = 0; i < cfg.ues.size(); ++i) differ += cfg.ues[i].service_class != other.ues[i].service_class;
    CHECK(differ > 0);
}

TEST_CASE("partial documents merge; overlapping keys are rejected") {
    auto full = minimal();
    std::vector<json> parts{json{{"gnbs", full["gnbs"]}}, json{{"cells", full["cells"]}},
                            json{{"sectors", full["sectors"]}}, json{{"ues", full["ues"]}}};
    CHECK(merge_config_documents(parts) == full);
    parts.push_back(json{{"gnbs", json::array()}});
    CHECK_THROWS_AS(merge_config_documents(parts), ParseError);
}

TEST_CASE("shipped config files load") {
    const std::filesystem::path root = RANSIM_SOURCE_DIR;
    std::vector<std::filesystem::path> one{root / "configs" / "hex3.json"};
    const auto cfg = load_config_files(one);
    CHECK(cfg.sectors.size() == 54);
    CHECK(cfg.ues.size() == 540);
}
