#include "parksim/population.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "parksim/rng.hpp"

namespace parksim {

namespace {

constexpr int kMaxSeparationRetries = 1000;

// Polycentric town model. Every town hosts both homes and jobs, which is what
// gives a work location housing in walking range and makes spot reuse
// possible in the first place. The imbalance knob shifts job mass away from
// the housing distribution and into the first n_work_clusters towns, so
// commuting stays directional without turning the map into separate
// dormitory and office zones.
struct Towns {
    std::vector<GeoPoint> center;
    std::vector<double> home_cdf;
    std::vector<double> work_cdf;
};

std::vector<double> to_cdf(std::vector<double> w) {
    double total = 0.0;
    for (double v : w) total += v;
    double acc = 0.0;
    for (double& v : w) {
        acc += v / total;
        v = acc;
    }
    w.back() = 1.0;
    return w;
}

Towns draw_towns(const PopulationParams& p, Rng& rng) {
    Towns t;
    const double half = p.region_extent / 2.0;
    const int n = p.n_home_clusters;
    std::vector<double> home_w(n);
    for (int i = 0; i < n; ++i) {
        t.center.push_back(GeoPoint{rng.uniform(-half, half), rng.uniform(-half, half)});
        home_w[i] = rng.uniform(0.5, 1.5);
    }
    const int n_emp = std::min(p.n_work_clusters, n);
    double total = 0.0;
    for (double w : home_w) total += w;
    std::vector<double> work_w(n);
    for (int i = 0; i < n; ++i) {
        const double concentrated = i < n_emp ? total / n_emp : 0.0;
        work_w[i] = (1.0 - p.imbalance) * home_w[i] + p.imbalance * concentrated;
    }
    t.home_cdf = to_cdf(std::move(home_w));
    t.work_cdf = to_cdf(std::move(work_w));
    return t;
}

GeoPoint draw_around(const Towns& t, const std::vector<double>& cdf, double sigma, Rng& rng) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t i = std::min<std::size_t>(it - cdf.begin(), cdf.size() - 1);
    const GeoPoint c = t.center[i];
    return GeoPoint{rng.normal(c.x, sigma), rng.normal(c.y, sigma)};
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& field, const std::string& path, std::size_t line_no) {
    double out = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end) {
        parse_fail(path, line_no, "not a number: '" + field + "'");
    }
    return out;
}

std::vector<std::string> split_csv_line(std::string line) {
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) {
        fields.push_back(cur);
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

} // namespace

std::vector<Commuter> generate_synthetic(const PopulationParams& p) {
    if (p.cluster_sigma <= 0.0 || p.region_extent <= 0.0) {
        throw std::invalid_argument("cluster_sigma and region_extent must be > 0");
    }
    if (p.imbalance < 0.0 || p.imbalance > 1.0) {
        throw std::invalid_argument("imbalance must be in [0, 1]");
    }
    if (p.n_home_clusters < 1 || p.n_work_clusters < 1) {
        throw std::invalid_argument("need at least one home and one work cluster");
    }

    Rng rng(seed_mix({p.seed, 0x706F70756C617465ull}));
    const Towns towns = draw_towns(p, rng);
    const double min_sep_sq = p.min_separation * p.min_separation;

    std::vector<Commuter> out;
    out.reserve(p.n_commuters);
    for (std::uint64_t i = 0; i < p.n_commuters; ++i) {
        Commuter c;
        c.id = i;
        bool ok = false;
        for (int attempt = 0; attempt < kMaxSeparationRetries; ++attempt) {
            c.home = draw_around(towns, towns.home_cdf, p.cluster_sigma, rng);
            c.work = draw_around(towns, towns.work_cdf, p.cluster_sigma, rng);
            if (dist_sq(c.home, c.work) >= min_sep_sq) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw std::runtime_error(
                "generate_synthetic: could not satisfy the min-separation filter after " +
                std::to_string(kMaxSeparationRetries) + " retries; geometry is degenerate");
        }
        out.push_back(c);
    }
    return out;
}

LoadedPopulation load_csv(const std::string& path, double min_separation) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open population file: " + path);
    }

    struct RawRow {
        std::uint64_t id;
        double home_lon, home_lat, work_lon, work_lat;
    };
    std::vector<RawRow> rows;
    std::unordered_set<std::uint64_t> seen_ids;

    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) {
            continue;
        }
        if (!header_seen) {
            auto fields = split_csv_line(line);
            for (auto& f : fields) {
                f.erase(std::remove_if(f.begin(), f.end(), [](char ch) { return ch == ' '; }),
                        f.end());
            }
            const std::vector<std::string> expected = {"id", "home_lon", "home_lat", "work_lon",
                                                       "work_lat"};
            if (fields != expected) {
                parse_fail(path, line_no,
                           "expected header 'id,home_lon,home_lat,work_lon,work_lat'");
            }
            header_seen = true;
            continue;
        }
        const auto fields = split_csv_line(line);
        if (fields.size() != 5) {
            parse_fail(path, line_no,
                       "expected 5 fields, got " + std::to_string(fields.size()));
        }
        RawRow r{};
        {
            std::uint64_t id = 0;
            const char* begin = fields[0].data();
            const char* end = begin + fields[0].size();
            auto [ptr, ec] = std::from_chars(begin, end, id);
            if (ec != std::errc() || ptr != end) {
                parse_fail(path, line_no, "bad id: '" + fields[0] + "'");
            }
            r.id = id;
        }
        if (!seen_ids.insert(r.id).second) {
            parse_fail(path, line_no, "duplicate commuter id " + std::to_string(r.id));
        }
        r.home_lon = parse_double(fields[1], path, line_no);
        r.home_lat = parse_double(fields[2], path, line_no);
        r.work_lon = parse_double(fields[3], path, line_no);
        r.work_lat = parse_double(fields[4], path, line_no);
        rows.push_back(r);
    }

    LoadedPopulation result;
    if (rows.empty()) {
        result.projection = Projection{0.0, 0.0};
        return result;
    }

    double sum_lon = 0.0, sum_lat = 0.0;
    for (const RawRow& r : rows) {
        sum_lon += r.home_lon + r.work_lon;
        sum_lat += r.home_lat + r.work_lat;
    }
    const double n_points = static_cast<double>(rows.size()) * 2.0;
    result.projection = make_projection(sum_lon / n_points, sum_lat / n_points);

    const double min_sep_sq = min_separation * min_separation;
    result.commuters.reserve(rows.size());
    for (const RawRow& r : rows) {
        Commuter c;
        c.id = r.id;
        c.home = project(r.home_lon, r.home_lat, result.projection);
        c.work = project(r.work_lon, r.work_lat, result.projection);
        if (dist_sq(c.home, c.work) < min_sep_sq) {
            ++result.dropped_separation;
            continue;
        }
        result.commuters.push_back(c);
    }
    return result;
}

NoiseResult apply_location_noise(const std::vector<Commuter>& pop, double sigma,
                                 std::uint64_t seed, double min_separation) {
    if (sigma < 0.0) {
        throw std::invalid_argument("noise sigma must be >= 0");
    }
    NoiseResult out;
    out.commuters.reserve(pop.size());
    Rng rng(seed_mix({seed, 0x6E6F697365ull}));
    const double min_sep_sq = min_separation * min_separation;
    for (const Commuter& c : pop) {
        Commuter n = c;
        n.home.x += rng.normal(0.0, sigma);
        n.home.y += rng.normal(0.0, sigma);
        n.work.x += rng.normal(0.0, sigma);
        n.work.y += rng.normal(0.0, sigma);
        if (dist_sq(n.home, n.work) < min_sep_sq) {
            ++out.dropped;
            continue;
        }
        out.commuters.push_back(n);
    }
    return out;
}

std::vector<std::uint32_t> sample_adoption_indices(std::size_t n, double rate, std::uint64_t seed) {
    if (rate < 0.0 || rate > 1.0) {
        throw std::invalid_argument("adoption rate must be in [0, 1]");
    }
    const auto k = static_cast<std::size_t>(std::llround(rate * static_cast<double>(n)));
    std::vector<std::uint32_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) {
        idx[i] = static_cast<std::uint32_t>(i);
    }
    Rng rng(seed_mix({seed, 0x61646F7074ull}));
    // Partial Fisher-Yates: the first k entries are the uniform sample.
    for (std::size_t i = 0; i < k && i + 1 < n; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(k);
    std::sort(idx.begin(), idx.end());
    return idx;
}

AdoptionSplit sample_adoption(const std::vector<Commuter>& pop, double rate, std::uint64_t seed) {
    const auto selected = sample_adoption_indices(pop.size(), rate, seed);
    AdoptionSplit split;
    split.adopters.reserve(selected.size());
    split.non_adopters.reserve(pop.size() - selected.size());
    std::size_t next = 0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (next < selected.size() && selected[next] == i) {
            split.adopters.push_back(pop[i]);
            ++next;
        } else {
            split.non_adopters.push_back(pop[i]);
        }
    }
    return split;
}

void write_population_csv(const std::vector<Commuter>& pop, const Projection& proj,
                          const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write population file: " + path);
    }
    out << "id,home_lon,home_lat,work_lon,work_lat\n";
    char buf[160];
    for (const Commuter& c : pop) {
        const LonLat h = unproject(c.home, proj);
        const LonLat w = unproject(c.work, proj);
        std::snprintf(buf, sizeof(buf), "%llu,%.17g,%.17g,%.17g,%.17g\n",
                      static_cast<unsigned long long>(c.id), h.lon, h.lat, w.lon, w.lat);
        out << buf;
    }
    if (!out) {
        throw std::runtime_error("write failed: " + path);
    }
}

} // namespace parksim
