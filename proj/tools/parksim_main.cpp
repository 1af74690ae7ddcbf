#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "parksim/commands.hpp"

namespace {

using parksim::Config;

// One subcommand's shared flags. Values only land in the Config when the
// flag was actually passed, so config-file settings survive unless
// overridden.
struct CommonFlags {
    std::string config_path;
    std::uint64_t seed = 0;
    std::string scenario;
    std::string r_max;
    std::string t_w;
    std::string adoption;
    int days = 0;
    int replications = 0;
    std::uint64_t cap = 0;
    std::string out;
    int workers = 0;
    std::string format;
    std::string population;
    std::uint64_t n_commuters = 0;
    double noise = 0.0;

    CLI::Option* o_config = nullptr;
    CLI::Option* o_seed = nullptr;
    CLI::Option* o_scenario = nullptr;
    CLI::Option* o_r_max = nullptr;
    CLI::Option* o_t_w = nullptr;
    CLI::Option* o_adoption = nullptr;
    CLI::Option* o_days = nullptr;
    CLI::Option* o_replications = nullptr;
    CLI::Option* o_cap = nullptr;
    CLI::Option* o_out = nullptr;
    CLI::Option* o_workers = nullptr;
    CLI::Option* o_format = nullptr;
    CLI::Option* o_population = nullptr;
    CLI::Option* o_n = nullptr;
    CLI::Option* o_noise = nullptr;
};

void add_common_flags(CLI::App* cmd, CommonFlags& f, bool simulation) {
    f.o_config = cmd->add_option("--config", f.config_path, "Config file (key = value lines)");
    f.o_seed = cmd->add_option("--seed", f.seed, "Master random seed");
    f.o_out = cmd->add_option("--out", f.out, "Output path base");
    f.o_n = cmd->add_option("--n", f.n_commuters, "Synthetic city size");
    f.o_noise = cmd->add_option("--noise", f.noise, "Location noise sigma in meters");
    if (!simulation) return;
    f.o_scenario = cmd->add_option("--scenario", f.scenario,
                                   "private | shared_parking | shared_cars | self_driving");
    f.o_r_max = cmd->add_option("--r-max", f.r_max, "Claim radius in meters");
    f.o_t_w = cmd->add_option("--t-w", f.t_w, "Departure window width in seconds");
    f.o_adoption = cmd->add_option("--adoption", f.adoption, "Participation rate in (0, 1]");
    f.o_days = cmd->add_option("--days", f.days, "Days per replication");
    f.o_replications = cmd->add_option("--replications", f.replications,
                                       "Replications per cell");
    f.o_cap = cmd->add_option("--cap", f.cap, "Parking cap (shared fleets)");
    f.o_workers = cmd->add_option("--workers", f.workers, "Worker threads (0 = default)");
    f.o_format = cmd->add_option("--format", f.format, "csv | json | both");
    f.o_population = cmd->add_option("--population", f.population, "Population CSV to load");
}

// `lists` switches --scenario/--r-max/--t-w/--adoption to comma-separated
// sweep axes.
Config make_config(const CommonFlags& f, bool lists) {
    Config cfg;
    if (f.o_config && f.o_config->count()) cfg = parksim::load_config(f.config_path);
    const auto set = [&](CLI::Option* opt, const char* key, const std::string& value) {
        if (opt && opt->count()) {
            parksim::apply_config_key(cfg, key, value, std::string("--") + key);
        }
    };
    if (f.o_seed && f.o_seed->count()) cfg.seed = f.seed;
    if (f.o_out && f.o_out->count()) cfg.out = f.out;
    if (f.o_n && f.o_n->count()) cfg.n_commuters = f.n_commuters;
    if (f.o_noise && f.o_noise->count()) cfg.location_noise_sigma = f.noise;
    set(f.o_scenario, lists ? "scenario_list" : "scenario", f.scenario);
    set(f.o_r_max, lists ? "r_max_list" : "r_max", f.r_max);
    set(f.o_t_w, lists ? "t_w_list" : "t_w", f.t_w);
    set(f.o_adoption, lists ? "adoption_list" : "adoption", f.adoption);
    if (f.o_days && f.o_days->count()) cfg.days = f.days;
    if (f.o_replications && f.o_replications->count()) cfg.replications = f.replications;
    if (f.o_cap && f.o_cap->count()) cfg.cap = f.cap;
    if (f.o_workers && f.o_workers->count()) cfg.workers = f.workers;
    if (f.o_format && f.o_format->count()) cfg.format = f.format;
    if (f.o_population && f.o_population->count()) cfg.population_csv = f.population;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parking and fleet sizing simulator for commuting scenarios"};
    app.require_subcommand(1);
    int rc = 0;

    CommonFlags gen_flags;
    CLI::App* generate = app.add_subcommand("generate", "Write a synthetic population CSV");
    add_common_flags(generate, gen_flags, false);
    generate->callback(
        [&]() { rc = parksim::cmd_generate(make_config(gen_flags, false), std::cout); });

    CommonFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "Simulate a single parameter combination");
    add_common_flags(run, run_flags, true);
    run->callback([&]() { rc = parksim::cmd_run(make_config(run_flags, false), std::cout); });

    CommonFlags sweep_flags;
    CLI::App* sweep = app.add_subcommand("sweep", "Run a parameter sweep (axes accept lists)");
    add_common_flags(sweep, sweep_flags, true);
    sweep->callback(
        [&]() { rc = parksim::cmd_sweep(make_config(sweep_flags, true), std::cout); });

    CommonFlags bound_flags;
    CLI::App* bound = app.add_subcommand("bound", "Best-case spot count at instantaneous travel");
    add_common_flags(bound, bound_flags, true);
    bound->callback(
        [&]() { rc = parksim::cmd_bound(make_config(bound_flags, true), std::cout); });

    std::string results_csv;
    std::string plot_dir = "plots";
    CLI::App* plot = app.add_subcommand("plot", "Render SVG figures from a results CSV");
    plot->add_option("--results", results_csv, "Results CSV from run/sweep")->required();
    plot->add_option("--out-dir", plot_dir, "Directory for the SVG files");
    plot->callback([&]() { rc = parksim::cmd_plot(results_csv, plot_dir, std::cout); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const parksim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return rc;
}
