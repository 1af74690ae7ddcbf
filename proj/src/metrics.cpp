#include "parksim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "parksim/rng.hpp"

namespace parksim {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<double> average_ranks(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double r = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double_field(const std::string& s, const std::string& path, std::size_t line_no) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad number '" + s +
                                 "'");
    }
    return v;
}

const char* kCsvHeader =
    "scenario,r_max_m,t_w_s,adoption,replications,np_mean,np_std,nc_mean,nc_std,np_rel_s1,"
    "nc_rel,extra_vmt_rel,bound_np_mean,cap,overflow_legs_mean";

nlohmann::ordered_json stats_json(const Stats& s) {
    return {{"mean", s.mean}, {"stddev", s.stddev}, {"min", s.min}, {"max", s.max}, {"n", s.n}};
}

}  // namespace

Stats compute_stats(const std::vector<double>& xs) {
    Stats s;
    s.n = xs.size();
    if (xs.empty()) return s;
    double sum = 0.0;
    s.min = xs[0];
    s.max = xs[0];
    for (double x : xs) {
        sum += x;
        s.min = std::min(s.min, x);
        s.max = std::max(s.max, x);
    }
    s.mean = sum / static_cast<double>(xs.size());
    if (xs.size() >= 2) {
        double ss = 0.0;
        for (double x : xs) ss += (x - s.mean) * (x - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return s;
}

double spearman_rho(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman_rho: length mismatch");
    const std::size_t n = x.size();
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

std::uint64_t cell_seed_component(const CellConfig& c) {
    constexpr std::uint64_t kNoCap = 0xFFFFFFFFFFFFFFFFull;
    return seed_mix({static_cast<std::uint64_t>(c.scenario), double_bits(c.r_max),
                     double_bits(c.t_w), double_bits(c.adoption), c.cap ? *c.cap : kNoCap});
}

CellResult aggregate_cell(const CellConfig& config, std::size_t n_total, std::size_t n_adopters,
                          const std::vector<RepOutcome>& reps) {
    if (n_adopters == 0 || n_total == 0) {
        throw std::invalid_argument("aggregate_cell: empty population");
    }
    CellResult out;
    out.config = config;
    out.n_total = n_total;
    out.n_adopters = n_adopters;
    out.replications = reps.size();

    std::vector<double> np, nc, npra, nprc, ncr, evr, bnp, ov;
    np.reserve(reps.size());
    nc.reserve(reps.size());
    npra.reserve(reps.size());
    nprc.reserve(reps.size());
    ncr.reserve(reps.size());
    evr.reserve(reps.size());
    bnp.reserve(reps.size());
    ov.reserve(reps.size());
    const double na = static_cast<double>(n_adopters);
    const double nt = static_cast<double>(n_total);
    for (const RepOutcome& r : reps) {
        const double rnp = static_cast<double>(r.np);
        np.push_back(rnp);
        nc.push_back(static_cast<double>(r.nc));
        npra.push_back(rnp / (2.0 * na));
        nprc.push_back((rnp + 2.0 * (nt - na)) / (2.0 * nt));
        ncr.push_back(static_cast<double>(r.nc) / na);
        evr.push_back(r.base_vmt > 0.0 ? r.extra_vmt / r.base_vmt : 0.0);
        bnp.push_back(static_cast<double>(r.bound_np));
        ov.push_back(static_cast<double>(r.overflow_legs));
        out.claim_hist.merge(r.claim_hist);
        out.invariant_violations += r.invariant_violations;
        out.cap_breaches += r.cap_breaches;
        out.clamped += r.clamped;
    }
    out.np = compute_stats(np);
    out.nc = compute_stats(nc);
    out.np_rel_adopters = compute_stats(npra);
    out.np_rel_citywide = compute_stats(nprc);
    out.nc_rel = compute_stats(ncr);
    out.extra_vmt_rel = compute_stats(evr);
    out.bound_np = compute_stats(bnp);
    out.overflow_legs = compute_stats(ov);
    return out;
}

void write_results_csv(const std::string& path, const ResultsFile& results) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    for (const auto& [key, value] : results.config_echo) {
        f << "# " << key << " = " << value << "\n";
    }
    f << kCsvHeader << "\n";
    for (const CellResult& c : results.cells) {
        f << scenario_name(c.config.scenario) << ',' << fmt_double(c.config.r_max) << ','
          << fmt_double(c.config.t_w) << ',' << fmt_double(c.config.adoption) << ','
          << c.replications << ',' << fmt_double(c.np.mean) << ',' << fmt_double(c.np.stddev)
          << ',' << fmt_double(c.nc.mean) << ',' << fmt_double(c.nc.stddev) << ','
          << fmt_double(c.np_rel_adopters.mean) << ',' << fmt_double(c.nc_rel.mean) << ','
          << fmt_double(c.extra_vmt_rel.mean) << ',' << fmt_double(c.bound_np.mean) << ',';
        if (c.config.cap) f << *c.config.cap;
        f << ',' << fmt_double(c.overflow_legs.mean) << "\n";
    }
    if (!f) throw std::runtime_error("error writing " + path);
}

void write_results_json(const std::string& path, const ResultsFile& results) {
    nlohmann::ordered_json root;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    for (const auto& [key, value] : results.config_echo) cfg[key] = value;
    root["config"] = std::move(cfg);
    root["cells"] = nlohmann::ordered_json::array();
    for (const CellResult& c : results.cells) {
        nlohmann::ordered_json j;
        j["scenario"] = scenario_name(c.config.scenario);
        j["r_max_m"] = c.config.r_max;
        j["t_w_s"] = c.config.t_w;
        j["adoption"] = c.config.adoption;
        if (c.config.cap) {
            j["cap"] = *c.config.cap;
        } else {
            j["cap"] = nullptr;
        }
        j["n_total"] = c.n_total;
        j["n_adopters"] = c.n_adopters;
        j["replications"] = c.replications;
        j["np"] = stats_json(c.np);
        j["nc"] = stats_json(c.nc);
        j["np_rel_adopters"] = stats_json(c.np_rel_adopters);
        j["np_rel_citywide"] = stats_json(c.np_rel_citywide);
        j["nc_rel"] = stats_json(c.nc_rel);
        j["extra_vmt_rel"] = stats_json(c.extra_vmt_rel);
        j["bound_np"] = stats_json(c.bound_np);
        j["overflow_legs"] = stats_json(c.overflow_legs);
        j["claim_histogram"] = {{"bin_width_m", c.claim_hist.bin_width},
                                {"counts", c.claim_hist.counts},
                                {"total", c.claim_hist.total}};
        j["invariant_violations"] = c.invariant_violations;
        j["cap_breaches"] = c.cap_breaches;
        j["clamped"] = c.clamped;
        root["cells"].push_back(std::move(j));
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << root.dump(2) << "\n";
    if (!f) throw std::runtime_error("error writing " + path);
}

std::vector<CsvRow> read_results_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    std::vector<CsvRow> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty() || line == "\r" || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            std::string stripped = line;
            if (!stripped.empty() && stripped.back() == '\r') stripped.pop_back();
            if (stripped != kCsvHeader) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": unexpected results header");
            }
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != 15) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 15 fields, got " +
                                     std::to_string(fields.size()));
        }
        CsvRow r;
        r.scenario = fields[0];
        r.r_max = parse_double_field(fields[1], path, line_no);
        r.t_w = parse_double_field(fields[2], path, line_no);
        r.adoption = parse_double_field(fields[3], path, line_no);
        r.replications =
            static_cast<std::size_t>(parse_double_field(fields[4], path, line_no));
        r.np_mean = parse_double_field(fields[5], path, line_no);
        r.np_std = parse_double_field(fields[6], path, line_no);
        r.nc_mean = parse_double_field(fields[7], path, line_no);
        r.nc_std = parse_double_field(fields[8], path, line_no);
        r.np_rel_s1 = parse_double_field(fields[9], path, line_no);
        r.nc_rel = parse_double_field(fields[10], path, line_no);
        r.extra_vmt_rel = parse_double_field(fields[11], path, line_no);
        r.bound_np_mean = parse_double_field(fields[12], path, line_no);
        if (!fields[13].empty()) {
            r.cap = static_cast<std::uint64_t>(parse_double_field(fields[13], path, line_no));
        }
        r.overflow_legs_mean = parse_double_field(fields[14], path, line_no);
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw std::runtime_error(path + ": missing results header");
    return rows;
}

}  // namespace parksim
