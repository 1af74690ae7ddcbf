#include "doctest.h"

#include <stdexcept>

#include "parksim/geo.hpp"
#include "parksim/traveltime.hpp"
#include "test_support.hpp"

using namespace parksim;
using test_support::TempDir;
using test_support::commuters_at;
using test_support::write_file;

TEST_CASE("speed calibration hits the target mean durations") {
    // Straight-line distances 10 km and 20 km, mean 15 km.
    const auto pop = commuters_at({
        {{0.0, 0.0}, {10000.0, 0.0}},
        {{0.0, 0.0}, {20000.0, 0.0}},
    });
    const SpeedModel m = calibrate_speed_model(pop);
    CHECK(m.speed_morning_mps == doctest::Approx(15000.0 / 1199.0).epsilon(1e-12));
    CHECK(m.speed_evening_mps == doctest::Approx(15000.0 / 1027.0).epsilon(1e-12));

    // Mean durations over the population equal the targets by construction.
    double sum_m = 0.0, sum_e = 0.0;
    for (const auto& c : pop) {
        sum_m += m.seconds(dist(c.home, c.work), Period::Morning);
        sum_e += m.seconds(dist(c.work, c.home), Period::Evening);
    }
    CHECK(sum_m / 2.0 == doctest::Approx(kTargetMorningMeanS).epsilon(1e-12));
    CHECK(sum_e / 2.0 == doctest::Approx(kTargetEveningMeanS).epsilon(1e-12));

    // Evening target is shorter, so evening speed is higher.
    CHECK(m.speed_evening_mps > m.speed_morning_mps);
    CHECK_THROWS_AS(calibrate_speed_model({}), std::invalid_argument);
}

TEST_CASE("prepared trip times follow the provider") {
    const auto pop = commuters_at({
        {{0.0, 0.0}, {5000.0, 0.0}},
        {{0.0, 0.0}, {0.0, 8000.0}},
    });
    const SpeedModel m = calibrate_speed_model(pop);
    const TravelTimeProvider provider(m);
    const PreparedTripTimes times = prepare_trip_times(pop, provider);
    REQUIRE(times.morning_s.size() == 2);
    REQUIRE(times.evening_s.size() == 2);
    CHECK(times.fallback_count == 0);
    CHECK(times.morning_s[0] == doctest::Approx(5000.0 / m.speed_morning_mps));
    CHECK(times.evening_s[1] == doctest::Approx(8000.0 / m.speed_evening_mps));
}

namespace {

struct MatrixFixture {
    TempDir tmp{"ttmatrix"};
    std::string nodes = tmp.file("nodes.csv");
    std::string edges = tmp.file("edges.csv");

    MatrixFixture() {
        write_file(nodes, "node_id,lon,lat\n"
                          "10,103.80,1.35\n"
                          "20,103.90,1.35\n"
                          "30,103.80,1.45\n");
        write_file(edges, "from_id,to_id,seconds_morning,seconds_evening\n"
                          "10,20,600,500\n"
                          "20,10,650,550\n"
                          "10,30,900,800\n");
    }
};

}  // namespace

TEST_CASE("travel-time matrix lookup and fallback accounting") {
    MatrixFixture fx;
    const Projection proj = make_projection(103.8, 1.35);
    const TravelTimeMatrix matrix = TravelTimeMatrix::load(fx.nodes, fx.edges, proj);
    CHECK(matrix.node_count() == 3);
    CHECK(matrix.edge_count() == 3);

    const GeoPoint near10 = project(103.801, 1.351, proj);
    const GeoPoint near20 = project(103.899, 1.349, proj);
    const std::size_t i10 = matrix.nearest_node(near10);
    const std::size_t i20 = matrix.nearest_node(near20);
    CHECK(i10 == 0);
    CHECK(i20 == 1);
    CHECK(matrix.lookup(i10, i20, Period::Morning) == 600.0);
    CHECK(matrix.lookup(i10, i20, Period::Evening) == 500.0);
    CHECK(matrix.lookup(i20, i10, Period::Morning) == 650.0);
    CHECK(matrix.lookup(i10, i10, Period::Morning) == 0.0);
    CHECK(matrix.lookup(2, 1, Period::Morning) < 0.0);  // unlisted pair

    const SpeedModel speeds{10.0, 12.0};
    const TravelTimeProvider provider(speeds, matrix);
    CHECK(provider.has_matrix());

    bool fb = false;
    CHECK(provider.trip_seconds(near10, near20, Period::Morning, &fb) == 600.0);
    CHECK_FALSE(fb);

    // Node pair 30 -> 20 is unlisted: falls back to the speed model.
    const GeoPoint near30 = project(103.801, 1.449, proj);
    const double got = provider.trip_seconds(near30, near20, Period::Evening, &fb);
    CHECK(fb);
    CHECK(got == doctest::Approx(dist(near30, near20) / 12.0));

    const auto pop = commuters_at({{near10, near20}, {near30, near20}});
    const PreparedTripTimes times = prepare_trip_times(pop, provider);
    CHECK(times.fallback_count == 1);
    CHECK(times.fallback[0] == 0);
    CHECK(times.fallback[1] == 1);
}

TEST_CASE("nearest node ties resolve to the lowest index") {
    TempDir tmp("ttnodes");
    const std::string nodes = tmp.file("nodes.csv");
    const std::string edges = tmp.file("edges.csv");
    write_file(nodes, "node_id,lon,lat\n1,0.0,0.0\n2,0.002,0.0\n");
    write_file(edges, "from_id,to_id,seconds_morning,seconds_evening\n1,2,60,60\n");
    const Projection proj = make_projection(0.0, 0.0);
    const TravelTimeMatrix matrix = TravelTimeMatrix::load(nodes, edges, proj);
    // Exactly between the two nodes.
    CHECK(matrix.nearest_node(project(0.001, 0.0, proj)) == 0);
}

TEST_CASE("matrix loader rejects malformed files with locations") {
    TempDir tmp("ttbad");
    const Projection proj = make_projection(103.8, 1.35);
    const std::string good_nodes = tmp.file("nodes.csv");
    write_file(good_nodes, "node_id,lon,lat\n1,103.8,1.35\n2,103.9,1.35\n");

    const std::string bad_header = tmp.file("bh.csv");
    write_file(bad_header, "node,lon,lat\n1,103.8,1.35\n");
    CHECK_THROWS_WITH_AS(TravelTimeMatrix::load(bad_header, tmp.file("none.csv"), proj),
                         doctest::Contains("expected header"), std::runtime_error);

    const std::string dup_node = tmp.file("dup.csv");
    write_file(dup_node, "node_id,lon,lat\n1,103.8,1.35\n1,103.9,1.35\n");
    CHECK_THROWS_WITH_AS(TravelTimeMatrix::load(dup_node, tmp.file("none.csv"), proj),
                         doctest::Contains("duplicate"), std::runtime_error);

    const std::string unknown_edge = tmp.file("ue.csv");
    write_file(unknown_edge, "from_id,to_id,seconds_morning,seconds_evening\n1,9,60,60\n");
    CHECK_THROWS_WITH_AS(TravelTimeMatrix::load(good_nodes, unknown_edge, proj),
                         doctest::Contains("unknown"), std::runtime_error);

    const std::string negative = tmp.file("neg.csv");
    write_file(negative, "from_id,to_id,seconds_morning,seconds_evening\n1,2,-5,60\n");
    CHECK_THROWS_WITH_AS(TravelTimeMatrix::load(good_nodes, negative, proj),
                         doctest::Contains(":2:"), std::runtime_error);
}
