#include "parksim/commands.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "parksim/metrics.hpp"
#include "parksim/rng.hpp"
#include "parksim/svg.hpp"
#include "parksim/traveltime.hpp"

namespace parksim {

namespace {

std::string out_path(const Config& cfg, const char* ext) {
    const std::string& base = cfg.out;
    const std::string suffix = ext;
    if (base.size() >= suffix.size() &&
        base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return base;
    }
    return base + suffix;
}

std::string fmt2(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

void print_cell_line(std::ostream& out, const CellResult& c) {
    out << scenario_name(c.config.scenario) << " r_max=" << fmt2(c.config.r_max)
        << "m t_w=" << fmt2(c.config.t_w) << "s adoption=" << fmt2(c.config.adoption);
    if (c.config.cap) out << " cap=" << *c.config.cap;
    out << ": np=" << fmt2(c.np.mean) << " (rel " << fmt2(c.np_rel_adopters.mean)
        << ") nc=" << fmt2(c.nc.mean) << " (per adopter " << fmt2(c.nc_rel.mean)
        << ") extra_vmt=" << fmt2(c.extra_vmt_rel.mean) << " bound_np=" << fmt2(c.bound_np.mean);
    if (c.invariant_violations) out << " INVARIANT VIOLATIONS=" << c.invariant_violations;
    if (c.cap_breaches) out << " cap_breaches=" << c.cap_breaches;
    out << "\n";
}

int run_cells(const Config& cfg, const std::vector<CellConfig>& cells, std::ostream& out) {
    const PreparedCity prep = prepare_city(cfg);
    if (prep.dropped_separation) {
        out << "note: dropped " << prep.dropped_separation
            << " commuters below the home-work separation floor\n";
    }
    if (prep.noise_dropped) {
        out << "note: dropped " << prep.noise_dropped << " commuters after location noise\n";
    }
    if (prep.travel_fallbacks) {
        out << "note: " << prep.travel_fallbacks
            << " commuters fell back to straight-line travel times\n";
    }
    if (prep.renormalized_periods) {
        out << "note: renormalized " << prep.renormalized_periods
            << " empirical departure distribution(s)\n";
    }

    SweepParams params;
    params.replications = cfg.replications;
    params.n_days = cfg.days;
    params.master_seed = cfg.seed;
    params.workers = cfg.workers;

    const ResultsFile results =
        run_sweep(prep.city, cells, params, prep.empirical, config_echo(cfg));

    for (const CellResult& c : results.cells) print_cell_line(out, c);

    if (cfg.format == "csv" || cfg.format == "both") {
        const std::string path = out_path(cfg, ".csv");
        write_results_csv(path, results);
        out << "wrote " << path << "\n";
    }
    if (cfg.format == "json" || cfg.format == "both") {
        const std::string path = out_path(cfg, ".json");
        write_results_json(path, results);
        out << "wrote " << path << "\n";
    }
    return 0;
}

}  // namespace

PreparedCity prepare_city(const Config& cfg) {
    validate_config(cfg);
    PreparedCity prep;

    std::vector<Commuter> commuters;
    if (!cfg.population_csv.empty()) {
        LoadedPopulation loaded = load_csv(cfg.population_csv, cfg.min_separation);
        commuters = std::move(loaded.commuters);
        prep.projection = loaded.projection;
        prep.dropped_separation = loaded.dropped_separation;
    } else {
        PopulationParams p;
        p.n_commuters = cfg.n_commuters;
        p.n_home_clusters = cfg.home_clusters;
        p.n_work_clusters = cfg.work_clusters;
        p.cluster_sigma = cfg.cluster_sigma;
        p.region_extent = cfg.region_extent;
        p.imbalance = cfg.imbalance;
        p.seed = cfg.seed;
        p.min_separation = cfg.min_separation;
        commuters = generate_synthetic(p);
        prep.projection = make_projection(kDefaultAnchorLon, kDefaultAnchorLat);
    }
    if (cfg.location_noise_sigma > 0.0) {
        NoiseResult noised = apply_location_noise(commuters, cfg.location_noise_sigma, cfg.seed,
                                                  cfg.min_separation);
        prep.noise_dropped = noised.dropped;
        commuters = std::move(noised.commuters);
    }
    if (commuters.empty()) throw ConfigError("population is empty");

    const SpeedModel speeds =
        calibrate_speed_model(commuters, cfg.target_morning_s, cfg.target_evening_s);
    std::optional<TravelTimeProvider> provider;
    if (!cfg.nodes_csv.empty()) {
        TravelTimeMatrix matrix =
            TravelTimeMatrix::load(cfg.nodes_csv, cfg.edges_csv, prep.projection);
        provider.emplace(speeds, std::move(matrix));
    } else {
        provider.emplace(speeds);
    }

    if (!cfg.departures_csv.empty()) {
        prep.empirical = DepartureModel::load_empirical(cfg.departures_csv);
        prep.renormalized_periods = prep.empirical->renormalized_periods();
    }

    prep.city = build_city_model(std::move(commuters), *provider);
    prep.travel_fallbacks = prep.city.times.fallback_count;
    return prep;
}

int cmd_generate(const Config& cfg, std::ostream& out) {
    validate_config(cfg);
    PopulationParams p;
    p.n_commuters = cfg.n_commuters;
    p.n_home_clusters = cfg.home_clusters;
    p.n_work_clusters = cfg.work_clusters;
    p.cluster_sigma = cfg.cluster_sigma;
    p.region_extent = cfg.region_extent;
    p.imbalance = cfg.imbalance;
    p.seed = cfg.seed;
    p.min_separation = cfg.min_separation;
    std::vector<Commuter> pop = generate_synthetic(p);
    std::uint64_t noise_dropped = 0;
    if (cfg.location_noise_sigma > 0.0) {
        NoiseResult noised =
            apply_location_noise(pop, cfg.location_noise_sigma, cfg.seed, cfg.min_separation);
        noise_dropped = noised.dropped;
        pop = std::move(noised.commuters);
    }
    const Projection proj = make_projection(kDefaultAnchorLon, kDefaultAnchorLat);
    const std::string path = out_path(cfg, ".csv");
    write_population_csv(pop, proj, path);
    out << "wrote " << pop.size() << " commuters to " << path;
    if (noise_dropped) out << " (dropped " << noise_dropped << " after noise)";
    out << "\n";
    return 0;
}

int cmd_run(const Config& cfg, std::ostream& out) {
    validate_config(cfg);
    CellConfig cell;
    cell.scenario = parse_scenario(cfg.scenario);
    cell.r_max = cfg.r_max;
    cell.t_w = cfg.t_w;
    cell.adoption = cfg.adoption;
    cell.cap = cfg.cap;
    return run_cells(cfg, {cell}, out);
}

int cmd_sweep(const Config& cfg, std::ostream& out) {
    validate_config(cfg);
    return run_cells(cfg, enumerate_cells(cfg), out);
}

int cmd_bound(const Config& cfg, std::ostream& out) {
    const PreparedCity prep = prepare_city(cfg);
    const std::vector<Commuter>& commuters = prep.city.commuters;

    for (double r : effective_r_max(cfg)) {
        for (double adoption : effective_adoption(cfg)) {
            CellConfig cell;
            cell.scenario = Scenario::SharedCars;
            cell.r_max = r;
            cell.t_w = cfg.t_w;
            cell.adoption = adoption;
            std::vector<double> np_vals, nc_vals;
            np_vals.reserve(static_cast<std::size_t>(cfg.replications));
            nc_vals.reserve(static_cast<std::size_t>(cfg.replications));
            for (int rep = 0; rep < cfg.replications; ++rep) {
                const std::uint64_t rep_seed =
                    seed_mix({cfg.seed, cell_seed_component(cell),
                              static_cast<std::uint64_t>(rep), 0x626F756E64ull});
                std::vector<Commuter> participants;
                const std::vector<Commuter>* who = &commuters;
                if (adoption < 1.0) {
                    const auto idx =
                        sample_adoption_indices(commuters.size(), adoption, rep_seed);
                    participants.reserve(idx.size());
                    for (std::uint32_t i : idx) participants.push_back(commuters[i]);
                    who = &participants;
                }
                const LowerBound b = compute_lower_bound(*who, r, rep_seed);
                np_vals.push_back(static_cast<double>(b.np));
                nc_vals.push_back(static_cast<double>(b.nc));
            }
            const Stats np = compute_stats(np_vals);
            const Stats nc = compute_stats(nc_vals);
            out << "bound r_max=" << fmt2(r) << "m adoption=" << fmt2(adoption)
                << ": np=" << fmt2(np.mean) << " +- " << fmt2(np.stddev)
                << " nc=" << fmt2(nc.mean) << " +- " << fmt2(nc.stddev) << "\n";
        }
    }
    return 0;
}

int cmd_plot(const std::string& results_csv, const std::string& out_dir, std::ostream& out) {
    const auto written = write_standard_plots(results_csv, out_dir);
    for (const std::string& path : written) out << "wrote " << path << "\n";
    if (written.empty()) out << "nothing to plot (single-valued axes)\n";
    return 0;
}

}  // namespace parksim
