#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "parksim/engine.hpp"
#include "parksim/population.hpp"
#include "parksim/rng.hpp"
#include "parksim/schedule.hpp"
#include "parksim/traveltime.hpp"

namespace test_support {

// Scratch directory removed on destruction.
class TempDir {
  public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        for (int i = 0; i < 10000; ++i) {
            auto candidate = base / (tag + "_" + std::to_string(i));
            std::error_code ec;
            if (std::filesystem::create_directory(candidate, ec)) {
                path_ = candidate;
                return;
            }
        }
        throw std::runtime_error("could not create temp dir for " + tag);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string file(const std::string& name) const { return (path_ / name).string(); }
    const std::filesystem::path& path() const { return path_; }

  private:
    std::filesystem::path path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

// Hand-positioned commuters for exactly traceable engine runs.
inline std::vector<parksim::Commuter> commuters_at(
    const std::vector<std::pair<parksim::GeoPoint, parksim::GeoPoint>>& home_work) {
    std::vector<parksim::Commuter> out;
    out.reserve(home_work.size());
    for (std::size_t i = 0; i < home_work.size(); ++i) {
        out.push_back(parksim::Commuter{i, home_work[i].first, home_work[i].second});
    }
    return out;
}

// Small random city in a box, plus trip times from the calibrated speed
// model. Used by the engine-vs-reference equivalence tests.
struct MicroInstance {
    std::vector<parksim::Commuter> commuters;
    parksim::PreparedTripTimes times;
    parksim::SimulationParams params;
};

inline MicroInstance make_micro_instance(std::uint64_t seed, std::size_t max_commuters = 10,
                                         int n_days = 1, bool allow_cap = true) {
    parksim::Rng rng(parksim::seed_mix({seed, 0x6D6963726Full}));
    MicroInstance mi;
    const std::size_t n = 1 + rng.below(max_commuters);
    const double box = 4000.0;
    for (std::size_t i = 0; i < n; ++i) {
        parksim::Commuter c;
        c.id = i;
        c.home = {rng.uniform(-box, box), rng.uniform(-box, box)};
        c.work = {rng.uniform(-box, box), rng.uniform(-box, box)};
        mi.commuters.push_back(c);
    }
    const parksim::SpeedModel speeds = parksim::calibrate_speed_model(mi.commuters);
    mi.times = parksim::prepare_trip_times(mi.commuters, parksim::TravelTimeProvider(speeds));

    const parksim::Scenario pick[] = {parksim::Scenario::SharedParking,
                                      parksim::Scenario::SharedCars,
                                      parksim::Scenario::SelfDriving};
    mi.params.scenario = pick[rng.below(3)];
    mi.params.r_max = rng.uniform(50.0, 3000.0);
    mi.params.n_days = n_days;
    mi.params.seed = parksim::seed_mix({seed, 0x72756E73ull});
    if (allow_cap && parksim::is_shared_fleet(mi.params.scenario) && rng.uniform() < 0.3) {
        mi.params.parking_cap = 1 + rng.below(2 * n);
    }
    return mi;
}

}  // namespace test_support
