#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parksim/config.hpp"
#include "parksim/engine.hpp"
#include "parksim/metrics.hpp"
#include "parksim/schedule.hpp"
#include "parksim/traveltime.hpp"

namespace parksim {

// A city prepared for simulation: trip durations are fixed per commuter, so
// every cell and replication reuses them.
struct CityModel {
    std::vector<Commuter> commuters;
    PreparedTripTimes times;
    SpeedModel speeds;
};

CityModel build_city_model(std::vector<Commuter> commuters, const TravelTimeProvider& provider);

// Cross product of the configured scenario / r_max / t_w / adoption axes.
std::vector<CellConfig> enumerate_cells(const Config& cfg);

struct SweepParams {
    int replications = 20;
    int n_days = 30;
    std::uint64_t master_seed = 1;
    int workers = 0;  // 0 = library default; PARKSIM_WORKERS env overrides that
};

// One replication of one cell. Fully deterministic in (master_seed, cell
// parameters, rep): safe to run cells and reps in any order or in parallel.
RepOutcome run_one_rep(const CityModel& city, const CellConfig& cell, int n_days,
                       std::uint64_t master_seed, int rep,
                       const std::optional<DepartureModel>& empirical);

// Runs every (cell, replication) pair, in parallel when built with OpenMP.
// Aggregation is sequential in cell order, so output is independent of the
// worker count.
ResultsFile run_sweep(const CityModel& city, const std::vector<CellConfig>& cells,
                      const SweepParams& params, const std::optional<DepartureModel>& empirical,
                      std::vector<std::pair<std::string, std::string>> config_echo_lines);

// Worker-count resolution: flag when positive, else PARKSIM_WORKERS, else 0
// (meaning the OpenMP default).
int resolve_workers(int flag_value);

}  // namespace parksim
