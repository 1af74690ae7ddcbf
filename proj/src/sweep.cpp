#include "parksim/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "parksim/rng.hpp"

namespace parksim {

namespace {

constexpr std::uint64_t kTagRep = 0x726570;  // per-replication seed stream

struct Subset {
    std::vector<Commuter> commuters;
    PreparedTripTimes times;
};

Subset select_participants(const CityModel& city, double adoption, std::uint64_t rep_seed) {
    Subset s;
    if (adoption >= 1.0) {
        s.commuters = city.commuters;
        s.times = city.times;
        return s;
    }
    const auto idx = sample_adoption_indices(city.commuters.size(), adoption, rep_seed);
    s.commuters.reserve(idx.size());
    s.times.morning_s.reserve(idx.size());
    s.times.evening_s.reserve(idx.size());
    s.times.fallback.reserve(idx.size());
    for (std::uint32_t i : idx) {
        s.commuters.push_back(city.commuters[i]);
        s.times.morning_s.push_back(city.times.morning_s[i]);
        s.times.evening_s.push_back(city.times.evening_s[i]);
        s.times.fallback.push_back(city.times.fallback[i]);
        if (city.times.fallback[i]) ++s.times.fallback_count;
    }
    return s;
}

}  // namespace

CityModel build_city_model(std::vector<Commuter> commuters, const TravelTimeProvider& provider) {
    CityModel city;
    city.times = prepare_trip_times(commuters, provider);
    city.speeds = provider.speeds();
    city.commuters = std::move(commuters);
    return city;
}

std::vector<CellConfig> enumerate_cells(const Config& cfg) {
    std::vector<CellConfig> cells;
    for (const std::string& sname : effective_scenarios(cfg)) {
        const Scenario scenario = parse_scenario(sname);
        for (double r : effective_r_max(cfg)) {
            for (double t : effective_t_w(cfg)) {
                for (double a : effective_adoption(cfg)) {
                    CellConfig c;
                    c.scenario = scenario;
                    c.r_max = r;
                    c.t_w = t;
                    c.adoption = a;
                    c.cap = cfg.cap;
                    cells.push_back(c);
                }
            }
        }
    }
    return cells;
}

RepOutcome run_one_rep(const CityModel& city, const CellConfig& cell, int n_days,
                       std::uint64_t master_seed, int rep,
                       const std::optional<DepartureModel>& empirical) {
    const std::uint64_t rep_seed = seed_mix(
        {master_seed, cell_seed_component(cell), static_cast<std::uint64_t>(rep), kTagRep});

    const Subset participants = select_participants(city, cell.adoption, rep_seed);

    RunResult run;
    if (cell.scenario == Scenario::Private) {
        run = run_scenario_private(participants.commuters, n_days);
    } else {
        const DepartureModel model =
            empirical ? *empirical : DepartureModel::uniform_window(cell.t_w);
        SimulationParams p;
        p.scenario = cell.scenario;
        p.r_max = cell.r_max;
        p.n_days = n_days;
        p.seed = rep_seed;
        p.parking_cap = cell.cap;
        run = run_simulation(participants.commuters, participants.times, model, p);
    }
    const LowerBound bound = compute_lower_bound(participants.commuters, cell.r_max, rep_seed);

    RepOutcome out;
    out.np = run.np_final;
    out.nc = run.nc_final;
    out.base_vmt = run.base_vmt_total;
    out.extra_vmt = run.extra_vmt_total;
    out.bound_np = bound.np;
    out.bound_nc = bound.nc;
    out.overflow_legs = run.cap_overflow_legs;
    out.cap_breaches = run.cap_breaches;
    out.invariant_violations = run.invariant_violations;
    out.clamped = run.clamped_total;
    out.claim_hist = run.claim_hist;
    return out;
}

ResultsFile run_sweep(const CityModel& city, const std::vector<CellConfig>& cells,
                      const SweepParams& params, const std::optional<DepartureModel>& empirical,
                      std::vector<std::pair<std::string, std::string>> config_echo_lines) {
    if (params.replications < 1) throw std::invalid_argument("replications must be at least 1");
    if (cells.empty()) throw std::invalid_argument("no cells to run");

    const std::size_t n_cells = cells.size();
    const auto n_reps = static_cast<std::size_t>(params.replications);
    std::vector<std::vector<RepOutcome>> slots(n_cells);
    for (auto& v : slots) v.resize(n_reps);

    const std::size_t n_jobs = n_cells * n_reps;
    std::string failure;

#ifdef _OPENMP
    const int workers = resolve_workers(params.workers);
    if (workers > 0) omp_set_num_threads(workers);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t job = 0; job < n_jobs; ++job) {
        const std::size_t cell_idx = job / n_reps;
        const int rep = static_cast<int>(job % n_reps);
        try {
            slots[cell_idx][rep] = run_one_rep(city, cells[cell_idx], params.n_days,
                                               params.master_seed, rep, empirical);
        } catch (const std::exception& e) {
#pragma omp critical
            if (failure.empty()) failure = e.what();
        }
    }
#else
    for (std::size_t job = 0; job < n_jobs; ++job) {
        const std::size_t cell_idx = job / n_reps;
        const int rep = static_cast<int>(job % n_reps);
        slots[cell_idx][rep] = run_one_rep(city, cells[cell_idx], params.n_days,
                                           params.master_seed, rep, empirical);
    }
#endif
    if (!failure.empty()) throw std::runtime_error(failure);

    ResultsFile out;
    out.config_echo = std::move(config_echo_lines);
    out.cells.reserve(n_cells);
    for (std::size_t i = 0; i < n_cells; ++i) {
        std::size_t n_adopters = city.commuters.size();
        if (cells[i].adoption < 1.0) {
            n_adopters = static_cast<std::size_t>(
                std::llround(cells[i].adoption * static_cast<double>(city.commuters.size())));
        }
        out.cells.push_back(
            aggregate_cell(cells[i], city.commuters.size(), n_adopters, slots[i]));
    }
    return out;
}

int resolve_workers(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("PARKSIM_WORKERS")) {
        int v = 0;
        const char* b = env;
        const char* e = env + std::char_traits<char>::length(env);
        auto [p, ec] = std::from_chars(b, e, v);
        if (ec == std::errc() && p == e && v > 0) return v;
    }
    return 0;
}

}  // namespace parksim
