#include <chrono>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "parksim/engine.hpp"
#include "parksim/reference.hpp"
#include "parksim/rng.hpp"
#include "parksim/spatial_index.hpp"
#include "parksim/sweep.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Steady-state churn: claim the nearest item near a random point, then put a
// new one somewhere else. This is the access pattern of the scenario runs.
template <typename Pool>
double churn(Pool& pool, std::uint64_t first_free_id, std::size_t ops, double extent,
             double r_max, parksim::Rng& rng) {
    std::uint64_t next_id = first_free_id;
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < ops; ++i) {
        const parksim::GeoPoint q{rng.uniform(-extent / 2, extent / 2),
                                  rng.uniform(-extent / 2, extent / 2)};
        if (const auto hit = pool.nearest_within(q, r_max)) {
            pool.remove(hit->id);
            pool.insert(next_id++, {rng.uniform(-extent / 2, extent / 2),
                                    rng.uniform(-extent / 2, extent / 2)});
        }
    }
    return seconds_since(t0);
}

// Minimal stand-in for the naive pool so the comparison measures the same
// loop; mirrors the reference implementation's scan.
class FlatPool {
  public:
    void insert(std::uint64_t id, parksim::GeoPoint p) { items_.push_back({id, p}); }

    void remove(std::uint64_t id) {
        for (std::size_t i = 0; i < items_.size(); ++i) {
            if (items_[i].id == id) {
                items_[i] = items_.back();
                items_.pop_back();
                return;
            }
        }
    }

    std::optional<parksim::NearestHit> nearest_within(parksim::GeoPoint p, double r_max) const {
        const double limit = r_max * r_max;
        bool found = false;
        double best_d2 = 0.0;
        std::uint64_t best_id = 0;
        parksim::GeoPoint best_pos{};
        for (const auto& item : items_) {
            const double d2 = parksim::dist_sq(p, item.pos);
            if (d2 < limit && (!found || d2 < best_d2 || (d2 == best_d2 && item.id < best_id))) {
                found = true;
                best_d2 = d2;
                best_id = item.id;
                best_pos = item.pos;
            }
        }
        if (!found) return std::nullopt;
        return parksim::NearestHit{best_id, std::sqrt(best_d2), best_pos};
    }

  private:
    struct Item {
        std::uint64_t id;
        parksim::GeoPoint pos;
    };
    std::vector<Item> items_;
};

parksim::CityModel make_city(std::uint64_t n, std::uint64_t seed) {
    parksim::PopulationParams p;
    p.n_commuters = n;
    p.seed = seed;
    std::vector<parksim::Commuter> commuters = parksim::generate_synthetic(p);
    const parksim::SpeedModel speeds = parksim::calibrate_speed_model(commuters);
    return parksim::build_city_model(std::move(commuters), parksim::TravelTimeProvider(speeds));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Benchmarks: grid index vs linear scan, engine vs reference"};
    std::size_t items = 100000;
    std::size_t ops = 1000000;
    std::size_t flat_ops = 20000;
    std::uint64_t commuters = 5000;
    std::uint64_t ref_commuters = 1000;
    int days = 3;
    std::uint64_t seed = 1;
    double r_max = 500.0;
    app.add_option("--items", items, "Items in the pool benchmark");
    app.add_option("--ops", ops, "Churn operations against the grid pool");
    app.add_option("--flat-ops", flat_ops, "Churn operations against the linear pool");
    app.add_option("--commuters", commuters, "City size for the engine benchmark");
    app.add_option("--ref-commuters", ref_commuters, "City size for the reference benchmark");
    app.add_option("--days", days, "Days for the engine benchmark");
    app.add_option("--seed", seed, "Seed");
    app.add_option("--r-max", r_max, "Claim radius in meters");
    CLI11_PARSE(app, argc, argv);

    const double extent = 24000.0;
    parksim::Rng rng(seed);

    {
        parksim::ResourcePool grid(parksim::default_cell_size(r_max));
        FlatPool flat;
        std::vector<parksim::GeoPoint> pts;
        pts.reserve(items);
        for (std::size_t i = 0; i < items; ++i) {
            pts.push_back({rng.uniform(-extent / 2, extent / 2),
                           rng.uniform(-extent / 2, extent / 2)});
        }
        auto t0 = Clock::now();
        for (std::size_t i = 0; i < items; ++i) grid.insert(i, pts[i]);
        const double grid_insert = seconds_since(t0);
        t0 = Clock::now();
        for (std::size_t i = 0; i < items; ++i) flat.insert(i, pts[i]);
        const double flat_insert = seconds_since(t0);

        parksim::Rng rng_grid(seed + 1);
        parksim::Rng rng_flat(seed + 1);
        const double grid_churn = churn(grid, items, ops, extent, r_max, rng_grid);
        const double flat_churn = churn(flat, items, flat_ops, extent, r_max, rng_flat);

        std::printf("pool: %zu items, r_max=%.0fm\n", items, r_max);
        std::printf("  insert      grid %8.3fs   linear %8.3fs\n", grid_insert, flat_insert);
        std::printf("  churn       grid %8.3fs (%zu ops, %.2f Mops/s)\n", grid_churn, ops,
                    grid_churn > 0 ? static_cast<double>(ops) / grid_churn / 1e6 : 0.0);
        std::printf("              linear %6.3fs (%zu ops, %.3f Mops/s)\n", flat_churn, flat_ops,
                    flat_churn > 0 ? static_cast<double>(flat_ops) / flat_churn / 1e6 : 0.0);
        if (grid_churn > 0 && flat_churn > 0) {
            const double per_grid = grid_churn / static_cast<double>(ops);
            const double per_flat = flat_churn / static_cast<double>(flat_ops);
            std::printf("  per-op speedup: %.1fx\n", per_flat / per_grid);
        }
    }

    {
        const parksim::CityModel city = make_city(commuters, seed);
        const auto model = parksim::DepartureModel::uniform_window();
        parksim::SimulationParams p;
        p.scenario = parksim::Scenario::SharedCars;
        p.r_max = r_max;
        p.n_days = days;
        p.seed = seed;
        auto t0 = Clock::now();
        const auto run = parksim::run_simulation(city.commuters, city.times, model, p);
        const double engine_s = seconds_since(t0);
        std::printf("engine: %llu commuters, %d days: %.3fs (np=%llu nc=%llu)\n",
                    static_cast<unsigned long long>(commuters), days, engine_s,
                    static_cast<unsigned long long>(run.np_final),
                    static_cast<unsigned long long>(run.nc_final));

        const parksim::CityModel small = make_city(ref_commuters, seed);
        p.n_days = 1;
        t0 = Clock::now();
        const auto eng = parksim::run_simulation(small.commuters, small.times, model, p);
        const double eng_small_s = seconds_since(t0);
        t0 = Clock::now();
        const auto ref = parksim::reference::run_simulation(small.commuters, small.times, model, p);
        const double ref_small_s = seconds_since(t0);
        std::printf("engine vs reference: %llu commuters, 1 day: %.3fs vs %.3fs",
                    static_cast<unsigned long long>(ref_commuters), eng_small_s, ref_small_s);
        if (eng_small_s > 0) std::printf(" (%.1fx)", ref_small_s / eng_small_s);
        std::printf("  [match: np %llu/%llu nc %llu/%llu]\n",
                    static_cast<unsigned long long>(eng.np_final),
                    static_cast<unsigned long long>(ref.np_final),
                    static_cast<unsigned long long>(eng.nc_final),
                    static_cast<unsigned long long>(ref.nc_final));
    }
    return 0;
}
