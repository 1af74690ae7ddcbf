#include <cstdint>
#include <vector>

#include "doctest.h"
#include "parksim/engine.hpp"
#include "parksim/population.hpp"
#include "parksim/reference.hpp"
#include "parksim/rng.hpp"
#include "parksim/schedule.hpp"
#include "parksim/traveltime.hpp"
#include "test_support.hpp"

using namespace parksim;
using test_support::make_micro_instance;

namespace {

void check_same_run(const RunResult& a, const RunResult& b) {
    CHECK(a.scenario == b.scenario);
    CHECK(a.np_final == b.np_final);
    CHECK(a.nc_final == b.nc_final);
    // Exact equality on purpose: both implementations must visit the events
    // in the same order and accumulate in the same order.
    CHECK(a.base_vmt_total == b.base_vmt_total);
    CHECK(a.extra_vmt_total == b.extra_vmt_total);
    CHECK(a.cap_overflow_legs == b.cap_overflow_legs);
    CHECK(a.cap_breaches == b.cap_breaches);
    CHECK(a.clamped_total == b.clamped_total);
    CHECK(a.invariant_violations == 0);
    CHECK(b.invariant_violations == 0);

    REQUIRE(a.days.size() == b.days.size());
    for (std::size_t d = 0; d < a.days.size(); ++d) {
        CAPTURE(d);
        CHECK(a.days[d].np_end == b.days[d].np_end);
        CHECK(a.days[d].nc_end == b.days[d].nc_end);
        CHECK(a.days[d].base_vmt == b.days[d].base_vmt);
        CHECK(a.days[d].extra_vmt == b.days[d].extra_vmt);
        CHECK(a.days[d].claim_legs == b.days[d].claim_legs);
        CHECK(a.days[d].start_misses == b.days[d].start_misses);
        CHECK(a.days[d].end_misses == b.days[d].end_misses);
        CHECK(a.days[d].cap_overflow_legs == b.days[d].cap_overflow_legs);
        CHECK(a.days[d].clamped == b.days[d].clamped);
    }

    CHECK(a.claim_hist.total == b.claim_hist.total);
    CHECK(a.claim_hist.counts == b.claim_hist.counts);
}

}  // namespace

TEST_CASE("engine matches the linear-scan reference on random micro instances") {
    const DepartureModel model = DepartureModel::uniform_window();
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        CAPTURE(seed);
        auto mi = make_micro_instance(seed, 10, 1);
        const auto fast = run_simulation(mi.commuters, mi.times, model, mi.params);
        const auto slow = reference::run_simulation(mi.commuters, mi.times, model, mi.params);
        check_same_run(fast, slow);
    }
}

TEST_CASE("engine matches the reference across multiple days with state carry-over") {
    const DepartureModel model = DepartureModel::uniform_window();
    for (std::uint64_t seed = 100; seed < 115; ++seed) {
        CAPTURE(seed);
        auto mi = make_micro_instance(seed, 12, 6);
        const auto fast = run_simulation(mi.commuters, mi.times, model, mi.params);
        const auto slow = reference::run_simulation(mi.commuters, mi.times, model, mi.params);
        check_same_run(fast, slow);
    }
}

TEST_CASE("engine matches the reference on a denser instance") {
    // More commuters in the same box so claims dominate over minting and the
    // tie-break and accumulation paths get real traffic.
    const DepartureModel model = DepartureModel::uniform_window();
    auto mi = make_micro_instance(7, 10, 1, false);
    mi.commuters.clear();
    Rng rng(seed_mix({99, 0x64656E7365ull}));
    for (std::size_t i = 0; i < 250; ++i) {
        Commuter c;
        c.id = i;
        c.home = {rng.uniform(-2500.0, 2500.0), rng.uniform(-2500.0, 2500.0)};
        c.work = {rng.uniform(-2500.0, 2500.0), rng.uniform(-2500.0, 2500.0)};
        mi.commuters.push_back(c);
    }
    const SpeedModel speeds = calibrate_speed_model(mi.commuters);
    mi.times = prepare_trip_times(mi.commuters, TravelTimeProvider(speeds));
    mi.params.n_days = 4;
    mi.params.r_max = 600.0;
    mi.params.seed = 4242;

    for (Scenario s : {Scenario::SharedParking, Scenario::SharedCars}) {
        CAPTURE(static_cast<int>(s));
        mi.params.scenario = s;
        mi.params.parking_cap.reset();
        const auto fast = run_simulation(mi.commuters, mi.times, model, mi.params);
        const auto slow = reference::run_simulation(mi.commuters, mi.times, model, mi.params);
        check_same_run(fast, slow);
    }

    mi.params.scenario = Scenario::SharedCars;
    mi.params.parking_cap = 150;
    const auto fast = run_simulation(mi.commuters, mi.times, model, mi.params);
    const auto slow = reference::run_simulation(mi.commuters, mi.times, model, mi.params);
    CHECK(fast.cap_overflow_legs > 0);
    check_same_run(fast, slow);
}

TEST_CASE("lower bound matches the reference implementation") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        CAPTURE(seed);
        auto mi = make_micro_instance(seed + 300, 15, 1);
        for (double r : {80.0, 400.0, 2000.0}) {
            CAPTURE(r);
            const auto fast = compute_lower_bound(mi.commuters, r, seed);
            const auto slow = reference::compute_lower_bound(mi.commuters, r, seed);
            CHECK(fast.np == slow.np);
            CHECK(fast.nc == slow.nc);
        }
    }
}
