#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "parksim/config.hpp"
#include "parksim/geo.hpp"
#include "parksim/schedule.hpp"
#include "parksim/sweep.hpp"

namespace parksim {

// Lon/lat anchor used when a synthetic city is exported or paired with a
// travel-time network.
inline constexpr double kDefaultAnchorLon = 103.8;
inline constexpr double kDefaultAnchorLat = 1.35;

// Everything the run/sweep/bound commands need, assembled from a config:
// population, calibrated speeds, precomputed trip times, departure model.
struct PreparedCity {
    CityModel city;
    Projection projection;
    std::optional<DepartureModel> empirical;
    std::uint64_t dropped_separation = 0;
    std::uint64_t noise_dropped = 0;
    std::size_t travel_fallbacks = 0;
    int renormalized_periods = 0;
};

PreparedCity prepare_city(const Config& cfg);

// Command bodies behind the CLI. They write human-readable progress to `out`
// and return a process exit code; invalid configs throw ConfigError.
int cmd_generate(const Config& cfg, std::ostream& out);
int cmd_run(const Config& cfg, std::ostream& out);
int cmd_sweep(const Config& cfg, std::ostream& out);
int cmd_bound(const Config& cfg, std::ostream& out);
int cmd_plot(const std::string& results_csv, const std::string& out_dir, std::ostream& out);

}  // namespace parksim
