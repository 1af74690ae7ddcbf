#pragma once

#include "parksim/engine.hpp"

namespace parksim::reference {

// Deliberately naive re-implementation of the scenario dynamics: flat vectors
// and full linear scans instead of the grid index, written independently of
// the engine so the two can check each other. Outcomes must match the engine
// exactly, including tie-breaks and floating-point accumulation.
RunResult run_simulation(const std::vector<Commuter>& commuters, const PreparedTripTimes& times,
                         const DepartureModel& model, const SimulationParams& params);

LowerBound compute_lower_bound(const std::vector<Commuter>& commuters, double r_max,
                               std::uint64_t seed);

}  // namespace parksim::reference
