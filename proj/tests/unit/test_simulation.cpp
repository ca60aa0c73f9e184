#include <doctest.h>

#include <thread>

#include "ransim/error.hpp"
#include "ransim/simulation.hpp"
#include "support.hpp"

using namespace ransim;
using namespace testing_support;
using namespace std::chrono_literals;

namespace {

std::unique_ptr<Engine> small_engine() {
    auto cfg = make_config({{"g1", "c1", "s1"}, {"g1", "c1", "s2"}});
    cfg.ues.push_back(pinned_ue("u1", "s1", 1e6));
    return std::make_unique<Engine>(cfg);
}

}  // namespace

TEST_CASE("manual stepping publishes snapshots and events") {
    Simulation sim(small_engine());
    CHECK(sim.snapshot()->clock == 0);
    CHECK_FALSE(sim.snapshot()->report.has_value());
    const auto ticks = sim.step(3);
    CHECK(ticks.size() == 3);
    CHECK(sim.snapshot()->clock == 3);
    CHECK(sim.snapshot()->report->tick == 2);
    const auto events = sim.events().since(0);
    REQUIRE(events.size() == 3);
    for (std::size_t i = 0; i < events.size(); ++i) {
        CHECK(events[i].seq == i + 1);
        CHECK(events[i].type == "loads");
        CHECK(events[i].tick == static_cast<std::int64_t>(i));
    }
    CHECK(sim.events().since(2).front().seq == 3);
}

TEST_CASE("submitted commands are acknowledged after their tick") {
    Simulation sim(small_engine());
    const auto t = sim.submit(DelUe{"u1"}, CommandOrigin::api);
    CHECK_FALSE(sim.wait_for(t.id, 0ms).has_value());
    sim.step();
    const auto rec = sim.wait_for(t.id, 100ms);
    REQUIRE(rec);
    CHECK(rec->ok);
    CHECK(rec->tick == t.apply_tick);
    CHECK(sim.snapshot()->network.find_ue("u1") == nullptr);
    CHECK_THROWS_AS(sim.submit(StepN{0}, CommandOrigin::api), ValidationError);
}

TEST_CASE("step command runs inline without a runner") {
    Simulation sim(small_engine());
    sim.submit(StepN{4}, CommandOrigin::api);
    CHECK(sim.snapshot()->clock == 4);
}

TEST_CASE("runner respects pause, steps and tick limit") {
    Simulation sim(small_engine());
    sim.start(0ms, true);
    CHECK(sim.running());
    CHECK(sim.paused());
    CHECK_THROWS_AS(sim.step(), Error);
    std::this_thread::sleep_for(20ms);
    CHECK(sim.snapshot()->clock == 0);

    sim.submit(StepN{2}, CommandOrigin::console);
    for (int i = 0; i < 200 && sim.snapshot()->clock < 2; ++i) std::this_thread::sleep_for(5ms);
    std::this_thread::sleep_for(20ms);
    CHECK(sim.snapshot()->clock == 2);

    sim.set_tick_limit(10);
    sim.submit(Resume{}, CommandOrigin::console);
    for (int i = 0; i < 400 && !(sim.snapshot()->paused && sim.snapshot()->clock >= 10); ++i) {
        std::this_thread::sleep_for(5ms);
    }
    CHECK(sim.snapshot()->clock == 10);
    CHECK(sim.paused());
    sim.stop();
    CHECK_FALSE(sim.running());
}

TEST_CASE("event log waits and closes") {
    EventLog log(3);
    CHECK(log.wait_since(0, 10ms).empty());
    std::thread producer([&] {
        std::this_thread::sleep_for(20ms);
        log.publish("x", 0, nullptr);
    });
    const auto got = log.wait_since(0, 2000ms);
    producer.join();
    REQUIRE(got.size() == 1);
    CHECK(got[0].seq == 1);
    for (int i = 0; i < 5; ++i) log.publish("y", i, i);
    CHECK(log.since(0).size() == 3);  // bounded history
    CHECK(log.last_seq() == 6);
    log.close();
    CHECK(log.closed());
    CHECK(log.wait_since(0, 1000ms).empty());
}
