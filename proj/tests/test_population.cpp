#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "parksim/geo.hpp"
#include "parksim/population.hpp"
#include "test_support.hpp"

using namespace parksim;
using test_support::TempDir;
using test_support::write_file;

namespace {

PopulationParams small_params() {
    PopulationParams p;
    p.n_commuters = 2000;
    p.seed = 5;
    return p;
}

}  // namespace

TEST_CASE("synthetic city is deterministic, sized and separated") {
    const PopulationParams p = small_params();
    const auto a = generate_synthetic(p);
    const auto b = generate_synthetic(p);
    REQUIRE(a.size() == p.n_commuters);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].id == i);
        CHECK(a[i].home.x == b[i].home.x);
        CHECK(a[i].work.y == b[i].work.y);
        CHECK(dist(a[i].home, a[i].work) >= p.min_separation);
    }

    PopulationParams p2 = p;
    p2.seed = 6;
    const auto c = generate_synthetic(p2);
    bool any_differs = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].home.x != c[i].home.x) any_differs = true;
    }
    CHECK(any_differs);
}

TEST_CASE("homes stay near the town footprint") {
    PopulationParams p = small_params();
    const auto pop = generate_synthetic(p);
    const double bound = p.region_extent / 2.0 + 6.0 * p.cluster_sigma;
    for (const auto& c : pop) {
        CHECK(std::abs(c.home.x) < bound);
        CHECK(std::abs(c.home.y) < bound);
        CHECK(std::abs(c.work.x) < bound);
        CHECK(std::abs(c.work.y) < bound);
    }
}

TEST_CASE("imbalance concentrates work destinations") {
    PopulationParams mixed = small_params();
    mixed.imbalance = 0.0;
    PopulationParams lopsided = small_params();
    lopsided.imbalance = 1.0;
    lopsided.n_work_clusters = 1;

    auto spread = [](const std::vector<Commuter>& pop) {
        double mx = 0.0, my = 0.0;
        for (const auto& c : pop) {
            mx += c.work.x;
            my += c.work.y;
        }
        mx /= static_cast<double>(pop.size());
        my /= static_cast<double>(pop.size());
        double v = 0.0;
        for (const auto& c : pop) v += dist_sq(c.work, GeoPoint{mx, my});
        return std::sqrt(v / static_cast<double>(pop.size()));
    };
    // All work in one town must be far tighter than work spread like homes.
    CHECK(spread(generate_synthetic(lopsided)) < 0.5 * spread(generate_synthetic(mixed)));
}

TEST_CASE("generator rejects degenerate parameters") {
    PopulationParams p = small_params();
    p.cluster_sigma = 0.0;
    CHECK_THROWS_AS(generate_synthetic(p), std::invalid_argument);
    p = small_params();
    p.imbalance = 1.5;
    CHECK_THROWS_AS(generate_synthetic(p), std::invalid_argument);
    p = small_params();
    p.n_home_clusters = 0;
    CHECK_THROWS_AS(generate_synthetic(p), std::invalid_argument);
    // Separation impossible: region much smaller than the required distance.
    p = small_params();
    p.region_extent = 10.0;
    p.cluster_sigma = 1.0;
    p.min_separation = 10000.0;
    CHECK_THROWS_AS(generate_synthetic(p), std::runtime_error);
}

TEST_CASE("population csv round-trips through lon/lat") {
    TempDir tmp("pop_roundtrip");
    PopulationParams p = small_params();
    p.n_commuters = 300;
    const auto pop = generate_synthetic(p);
    const Projection proj = make_projection(103.8, 1.35);
    const std::string path = tmp.file("pop.csv");
    write_population_csv(pop, proj, path);

    const LoadedPopulation loaded = load_csv(path, p.min_separation);
    REQUIRE(loaded.commuters.size() == pop.size());
    CHECK(loaded.dropped_separation == 0);
    // The loader re-anchors at the data centroid. Distances survive the
    // anchor shift up to the longitude rescale by cos(new)/cos(old), about
    // tan(lat) * dlat ~ 2e-6 relative here, so allow 1e-5.
    for (std::size_t i = 1; i < pop.size(); i += 37) {
        CHECK(dist(loaded.commuters[i].home, loaded.commuters[i].work) ==
              doctest::Approx(dist(pop[i].home, pop[i].work)).epsilon(1e-5));
        CHECK(dist(loaded.commuters[i].home, loaded.commuters[0].home) ==
              doctest::Approx(dist(pop[i].home, pop[0].home)).epsilon(1e-5));
    }
}

TEST_CASE("csv loader reports malformed input with line numbers") {
    TempDir tmp("pop_errors");

    const std::string bad_header = tmp.file("h.csv");
    write_file(bad_header, "id,home_lon,home_lat,work_lon\n");
    CHECK_THROWS_WITH_AS(load_csv(bad_header, 0.0),
                         doctest::Contains("expected header"), std::runtime_error);

    const std::string bad_number = tmp.file("n.csv");
    write_file(bad_number, "id,home_lon,home_lat,work_lon,work_lat\n"
                           "0,103.8,1.35,103.9,1.36\n"
                           "1,103.8,oops,103.9,1.36\n");
    CHECK_THROWS_WITH_AS(load_csv(bad_number, 0.0), doctest::Contains(":3:"),
                         std::runtime_error);

    const std::string dup = tmp.file("d.csv");
    write_file(dup, "id,home_lon,home_lat,work_lon,work_lat\n"
                    "7,103.8,1.35,103.9,1.36\n"
                    "7,103.81,1.35,103.9,1.36\n");
    CHECK_THROWS_WITH_AS(load_csv(dup, 0.0), doctest::Contains("duplicate"),
                         std::runtime_error);

    CHECK_THROWS_AS(load_csv(tmp.file("missing.csv"), 0.0), std::runtime_error);
}

TEST_CASE("csv loader drops short commutes when asked") {
    TempDir tmp("pop_sep");
    const std::string path = tmp.file("p.csv");
    // Second row's home and work coincide.
    write_file(path, "id,home_lon,home_lat,work_lon,work_lat\n"
                     "0,103.80,1.35,103.90,1.36\n"
                     "1,103.85,1.35,103.85,1.35\n");
    const LoadedPopulation loaded = load_csv(path, 1000.0);
    CHECK(loaded.commuters.size() == 1);
    CHECK(loaded.dropped_separation == 1);
}

TEST_CASE("location noise perturbs but preserves the population") {
    PopulationParams p = small_params();
    p.n_commuters = 500;
    const auto pop = generate_synthetic(p);
    const NoiseResult noisy = apply_location_noise(pop, 166.0, 42, 0.0);
    REQUIRE(noisy.commuters.size() == pop.size());
    CHECK(noisy.dropped == 0);
    double mean_shift = 0.0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        CHECK(pop[i].home.x != noisy.commuters[i].home.x);
        mean_shift += dist(pop[i].home, noisy.commuters[i].home);
    }
    mean_shift /= static_cast<double>(pop.size());
    // Rayleigh mean for sigma = 166 is ~208 m.
    CHECK(mean_shift > 150.0);
    CHECK(mean_shift < 280.0);

    const NoiseResult again = apply_location_noise(pop, 166.0, 42, 0.0);
    CHECK(again.commuters[3].home.x == noisy.commuters[3].home.x);
    CHECK_THROWS_AS(apply_location_noise(pop, -1.0, 42, 0.0), std::invalid_argument);
}

TEST_CASE("adoption sampling takes a rounded uniform subset") {
    CHECK(sample_adoption_indices(101, 0.5, 9).size() == 51);  // llround(50.5)
    CHECK(sample_adoption_indices(100, 1.0, 9).size() == 100);
    CHECK(sample_adoption_indices(100, 0.0, 9).empty());
    CHECK_THROWS_AS(sample_adoption_indices(100, 1.2, 9), std::invalid_argument);

    const auto idx = sample_adoption_indices(1000, 0.25, 11);
    REQUIRE(idx.size() == 250);
    CHECK(std::is_sorted(idx.begin(), idx.end()));
    CHECK(std::set<std::uint32_t>(idx.begin(), idx.end()).size() == idx.size());
    CHECK(idx.back() < 1000);
    CHECK(sample_adoption_indices(1000, 0.25, 11) == idx);
    CHECK(sample_adoption_indices(1000, 0.25, 12) != idx);

    PopulationParams p = small_params();
    p.n_commuters = 400;
    const auto pop = generate_synthetic(p);
    const AdoptionSplit split = sample_adoption(pop, 0.3, 17);
    CHECK(split.adopters.size() == 120);
    CHECK(split.non_adopters.size() == 280);
}
