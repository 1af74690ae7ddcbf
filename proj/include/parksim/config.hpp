#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace parksim {

// Invalid configuration (bad file, unknown key, out-of-range value). The CLI
// maps this to its own exit code, distinct from runtime failures.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Config {
    // synthetic city
    std::size_t n_commuters = 50000;
    int home_clusters = 16;
    int work_clusters = 3;
    double cluster_sigma = 800.0;
    double region_extent = 16000.0;
    double imbalance = 0.8;
    double min_separation = 1000.0;
    double location_noise_sigma = 0.0;  // meters; 0 disables the noise pass
    std::string population_csv;         // when set, load instead of generating

    // travel times
    std::string nodes_csv;  // optional network matrix (both or neither)
    std::string edges_csv;
    double target_morning_s = 1199.0;
    double target_evening_s = 1027.0;

    // departures
    std::string departures_csv;  // optional empirical distribution
    double t_w = 3600.0;
    std::vector<double> t_w_list;

    // simulation
    std::string scenario = "shared_parking";
    std::vector<std::string> scenario_list;
    double r_max = 500.0;
    std::vector<double> r_max_list;
    double adoption = 1.0;
    std::vector<double> adoption_list;
    int days = 30;
    int replications = 20;
    std::uint64_t seed = 1;
    std::optional<std::uint64_t> cap;

    // output
    std::string out = "results";
    int workers = 0;  // 0 = library default
    std::string format = "csv";  // csv | json | both
};

// Plain-text config: one `key = value` per line, `#` comments, blank lines
// ignored. List values are comma-separated. Unknown keys are an error that
// names every valid key.
Config load_config(const std::string& path);

// Applies one key=value pair; shared by the file loader. `where` prefixes
// error messages (e.g. "config.txt:12").
void apply_config_key(Config& cfg, const std::string& key, const std::string& value,
                      const std::string& where);

// Range checks that span several fields; throws ConfigError.
void validate_config(const Config& cfg);

// Effective settings as ordered key/value pairs, echoed into results files.
std::vector<std::pair<std::string, std::string>> config_echo(const Config& cfg);

// Sweep axes: the list when given, otherwise the scalar as a one-element list.
std::vector<std::string> effective_scenarios(const Config& cfg);
std::vector<double> effective_r_max(const Config& cfg);
std::vector<double> effective_t_w(const Config& cfg);
std::vector<double> effective_adoption(const Config& cfg);

}  // namespace parksim
