#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parksim/engine.hpp"
#include "parksim/histogram.hpp"

namespace parksim {

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation (n-1)
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

Stats compute_stats(const std::vector<double>& xs);

// Spearman rank correlation with average ranks on ties. NaN when either side
// has zero rank variance.
double spearman_rho(const std::vector<double>& x, const std::vector<double>& y);

// One sweep cell: a scenario at fixed parameters, run for many replications.
struct CellConfig {
    Scenario scenario = Scenario::SharedParking;
    double r_max = 500.0;
    double t_w = kDefaultWindowWidthS;
    double adoption = 1.0;
    std::optional<std::uint64_t> cap;
};

// Stable identity of a cell for seeding: depends on the parameter values
// only, never on the cell's position in an enumeration.
std::uint64_t cell_seed_component(const CellConfig& c);

// One replication's outcome.
struct RepOutcome {
    std::uint64_t np = 0;
    std::uint64_t nc = 0;
    double base_vmt = 0.0;
    double extra_vmt = 0.0;
    std::uint64_t bound_np = 0;
    std::uint64_t bound_nc = 0;
    std::uint64_t overflow_legs = 0;
    std::uint64_t cap_breaches = 0;
    std::uint64_t invariant_violations = 0;
    std::uint64_t clamped = 0;
    DistanceHistogram claim_hist;
};

struct CellResult {
    CellConfig config;
    std::size_t n_total = 0;     // commuters in the city
    std::size_t n_adopters = 0;  // commuters participating in the scenario
    std::size_t replications = 0;
    Stats np;
    Stats nc;
    Stats np_rel_adopters;  // np / (2 * n_adopters)
    Stats np_rel_citywide;  // (np + 2*(n_total - n_adopters)) / (2 * n_total)
    Stats nc_rel;           // nc / n_adopters
    Stats extra_vmt_rel;    // extra / base, per replication
    Stats bound_np;
    Stats overflow_legs;
    DistanceHistogram claim_hist;  // merged over replications
    std::uint64_t invariant_violations = 0;
    std::uint64_t cap_breaches = 0;
    std::uint64_t clamped = 0;
};

CellResult aggregate_cell(const CellConfig& config, std::size_t n_total, std::size_t n_adopters,
                          const std::vector<RepOutcome>& reps);

struct ResultsFile {
    std::vector<std::pair<std::string, std::string>> config_echo;  // "# key = value" lines
    std::vector<CellResult> cells;
};

void write_results_csv(const std::string& path, const ResultsFile& results);
void write_results_json(const std::string& path, const ResultsFile& results);

// Row of the results CSV, as downstream consumers (plots, checks) read it.
struct CsvRow {
    std::string scenario;
    double r_max = 0.0;
    double t_w = 0.0;
    double adoption = 1.0;
    std::size_t replications = 0;
    double np_mean = 0.0;
    double np_std = 0.0;
    double nc_mean = 0.0;
    double nc_std = 0.0;
    double np_rel_s1 = 0.0;
    double nc_rel = 0.0;
    double extra_vmt_rel = 0.0;
    double bound_np_mean = 0.0;
    std::optional<std::uint64_t> cap;
    double overflow_legs_mean = 0.0;
};

std::vector<CsvRow> read_results_csv(const std::string& path);

}  // namespace parksim
