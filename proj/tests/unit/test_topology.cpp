#include <doctest.h>

#include "ransim/error.hpp"
#include "support.hpp"

using namespace ransim;
using namespace testing_support;

TEST_CASE("pinned UE is attached to its sector") {
    auto cfg = make_config({{"g1", "c1", "s1"}, {"g1", "c1", "s2"}});
    cfg.ues.push_back(pinned_ue("u1", "s1", 1e6));
    const auto net = build(cfg);
    CHECK(net.sector("s1").attached_ue_ids.count("u1") == 1);
    CHECK(net.ue("u1").sector_id == "s1");
    CHECK(net.sector("s2").attached_ue_ids.empty());
}

TEST_CASE("over-pinning a sector is a capacity error") {
    auto cfg = make_config({{"g1", "c1", "s1", 10}});
    for (int i = 0; i < 11; ++i) cfg.ues.push_back(pinned_ue("u" + std::to_string(i), "s1", 0));
    CHECK_THROWS_AS(build_network(cfg), CapacityError);
}

TEST_CASE("unpinned UEs are spread round robin") {
    auto cfg = make_config({{"g1", "c1", "s1"}, {"g1", "c1", "s2"}, {"g1", "c1", "s3"}});
    for (int i = 0; i < 7; ++i) cfg.ues.push_back(pinned_ue("u" + std::to_string(i), std::nullopt, 0));
    const auto net = build(cfg);
    CHECK(net.sector("s1").attached_ue_ids.size() == 3);
    CHECK(net.sector("s2").attached_ue_ids.size() == 2);
    CHECK(net.sector("s3").attached_ue_ids.size() == 2);
}

TEST_CASE("neighbour ordering") {
    SUBCASE("single cell") {
        const auto net = build(make_config({{"g1", "c1", "sA"}, {"g1", "c1", "sB"}, {"g1", "c1", "sC"}}));
        CHECK(neighbors(net, "sA") == std::vector<SectorId>{"sB", "sC"});
    }
    SUBCASE("sibling cells come after the own cell") {
        const auto net = build(make_config({{"g1", "c1", "s1"}, {"g1", "c1", "s2"}, {"g1", "c2", "s3"}}));
        CHECK(neighbors(net, "s1") == std::vector<SectorId>{"s2", "s3"});
    }
    SUBCASE("other gNBs last, even when their ids sort first") {
        const auto net = build(make_config({{"g0", "c0", "a1"}, {"g1", "c1", "z1"}, {"g1", "c2", "m1"}, {"g1", "c1", "z2"}}));
        CHECK(neighbors(net, "z1") == std::vector<SectorId>{"z2", "m1", "a1"});
    }
    SUBCASE("lonely sector") {
        const auto net = build(make_config({{"g1", "c1", "s1"}}));
        CHECK(neighbors(net, "s1").empty());
    }
    SUBCASE("unknown sector") {
        const auto net = build(make_config({{"g1", "c1", "s1"}}));
        CHECK_THROWS_AS(neighbors(net, "nope"), UnknownEntityError);
    }
}

TEST_CASE("attachment bookkeeping stays consistent") {
    auto net = build(make_config({{"g1", "c1", "s1", 1}, {"g1", "c1", "s2", 2}}));
    Ue u;
    u.id = "u1";
    u.profile = default_profile(ServiceClass::data);
    net.add_ue(u);
    CHECK_THROWS_AS(net.add_ue(u), ValidationError);
    net.attach("u1", "s1");
    CHECK_THROWS_AS(net.attach("u1", "s2"), ValidationError);
    u.id = "u2";
    net.add_ue(u);
    CHECK_THROWS_AS(net.attach("u2", "s1"), CapacityError);
    CHECK(net.detach("u1") == "s1");
    CHECK_FALSE(net.detach("u1").has_value());
    net.attach("u2", "s1");
    CHECK(net.attachment_map() == std::map<UeId, SectorId>{{"u2", "s1"}});
    net.remove_ue("u2");
    CHECK(net.sector("s1").attached_ue_ids.empty());
    CHECK(net.attached_count() == 0);
    CHECK_THROWS_AS(net.ue("u2"), UnknownEntityError);
}

TEST_CASE("capacity can not drop below occupancy") {
    auto cfg = make_config({{"g1", "c1", "s1", 5}});
    cfg.ues.push_back(pinned_ue("u1", "s1", 0));
    cfg.ues.push_back(pinned_ue("u2", "s1", 0));
    auto net = build(cfg);
    CHECK_THROWS_AS(net.set_sector_capacity("s1", 1u, std::nullopt), CapacityError);
    net.set_sector_capacity("s1", 2u, 5e6);
    CHECK(net.sector("s1").ue_capacity == 2);
    CHECK(net.sector("s1").max_throughput == 5e6);
}

TEST_CASE("sector ring is id sorted") {
    const auto net = build(make_config({{"g1", "c1", "s3"}, {"g1", "c1", "s1"}, {"g1", "c2", "s2"}}));
    CHECK(net.sector_order() == std::vector<SectorId>{"s1", "s2", "s3"});
    CHECK(net.cell_of("s2").id == "c2");
    CHECK(net.gnb_of("s2").id == "g1");
}
