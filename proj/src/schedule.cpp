#include "parksim/schedule.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace parksim {

namespace {

constexpr double kNoonS = 43200.0;
constexpr double kDayS = 86400.0;
constexpr double kDefaultSingletonWidthS = 3600.0;

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

double parse_double_field(const std::string& s, const std::string& path, std::size_t line_no,
                          const char* what) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad " + what + " '" +
                                 s + "'");
    }
    return v;
}

}  // namespace

DepartureModel DepartureModel::uniform_window(double t_w, double morning_start,
                                              double evening_start) {
    if (t_w <= 0.0) throw std::invalid_argument("window width must be positive");
    if (morning_start < 0.0 || evening_start < morning_start) {
        throw std::invalid_argument("window starts must be ordered within the day");
    }
    DepartureModel m;
    m.empirical_ = false;
    m.t_w_ = t_w;
    m.morning_start_ = morning_start;
    m.evening_start_ = evening_start;
    return m;
}

DepartureModel::Bins DepartureModel::build_bins(std::vector<std::pair<double, double>> rows,
                                                const std::string& path, int* renormalized) {
    std::sort(rows.begin(), rows.end());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].first == rows[i - 1].first) {
            throw std::runtime_error(path + ": duplicate bin start " +
                                     std::to_string(rows[i].first));
        }
    }
    Bins bins;
    bins.start.reserve(rows.size());
    bins.width.reserve(rows.size());
    bins.cdf.reserve(rows.size());
    double total = 0.0;
    for (const auto& [start, prob] : rows) {
        bins.start.push_back(start);
        total += prob;
    }
    if (total <= 0.0) throw std::runtime_error(path + ": distribution has zero total mass");
    if (std::abs(total - 1.0) > 1e-9) ++*renormalized;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        double w;
        if (i + 1 < rows.size()) {
            w = rows[i + 1].first - rows[i].first;
        } else if (rows.size() >= 2) {
            w = rows[i].first - rows[i - 1].first;
        } else {
            w = kDefaultSingletonWidthS;
        }
        bins.width.push_back(w);
    }
    double acc = 0.0;
    for (const auto& [start, prob] : rows) {
        acc += prob / total;
        bins.cdf.push_back(acc);
    }
    bins.cdf.back() = 1.0;
    return bins;
}

DepartureModel DepartureModel::load_empirical(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);

    std::vector<std::pair<double, double>> morning_rows;
    std::vector<std::pair<double, double>> evening_rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_checked = false;
    while (std::getline(f, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (!header_checked) {
            header_checked = true;
            const std::vector<std::string> expected = {"seconds_bin_start", "probability"};
            if (fields != expected) {
                throw std::runtime_error(path +
                                         ":1: expected header 'seconds_bin_start,probability'");
            }
            continue;
        }
        if (fields.size() != 2) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected 2 fields, got " + std::to_string(fields.size()));
        }
        const double start = parse_double_field(fields[0], path, line_no, "seconds_bin_start");
        const double prob = parse_double_field(fields[1], path, line_no, "probability");
        if (start < 0.0 || start >= kDayS) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": bin start outside [0, 86400)");
        }
        if (prob < 0.0) {
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": negative probability");
        }
        auto& side = start < kNoonS ? morning_rows : evening_rows;
        side.emplace_back(start, prob);
    }
    if (morning_rows.empty()) throw std::runtime_error(path + ": no morning bins (before noon)");
    if (evening_rows.empty()) throw std::runtime_error(path + ": no evening bins (noon onward)");

    DepartureModel m;
    m.empirical_ = true;
    m.morning_ = build_bins(std::move(morning_rows), path, &m.renormalized_);
    m.evening_ = build_bins(std::move(evening_rows), path, &m.renormalized_);
    return m;
}

double DepartureModel::sample_bins(const Bins& bins, Rng& rng) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(bins.cdf.begin(), bins.cdf.end(), u);
    const std::size_t idx =
        it == bins.cdf.end() ? bins.cdf.size() - 1
                             : static_cast<std::size_t>(it - bins.cdf.begin());
    return bins.start[idx] + rng.uniform() * bins.width[idx];
}

double DepartureModel::sample(Period period, Rng& rng) const {
    if (empirical_) {
        return sample_bins(period == Period::Morning ? morning_ : evening_, rng);
    }
    const double start = period == Period::Morning ? morning_start_ : evening_start_;
    return start + rng.uniform() * t_w_;
}

DaySchedule generate_day_schedule(std::size_t n_commuters, const PreparedTripTimes& times,
                                  const DepartureModel& model, std::uint64_t day_seed) {
    if (times.morning_s.size() < n_commuters || times.evening_s.size() < n_commuters) {
        throw std::invalid_argument("generate_day_schedule: trip times shorter than population");
    }
    DaySchedule day;
    day.depart_m.resize(n_commuters);
    day.arrive_m.resize(n_commuters);
    day.depart_e.resize(n_commuters);
    day.arrive_e.resize(n_commuters);
    day.events.reserve(n_commuters * 4);

    Rng rng(day_seed);
    for (std::size_t i = 0; i < n_commuters; ++i) {
        const double dm = model.sample(Period::Morning, rng);
        const double am = dm + times.morning_s[i];
        double de = model.sample(Period::Evening, rng);
        if (de <= am) {
            de = am + kClampGapS;
            ++day.clamped;
        }
        const double ae = de + times.evening_s[i];
        day.depart_m[i] = dm;
        day.arrive_m[i] = am;
        day.depart_e[i] = de;
        day.arrive_e[i] = ae;

        const auto id = static_cast<std::uint32_t>(i);
        day.events.push_back({dm, EventKind::Start, id, 0});
        day.events.push_back({am, EventKind::End, id, 0});
        day.events.push_back({de, EventKind::Start, id, 1});
        day.events.push_back({ae, EventKind::End, id, 1});
    }
    std::sort(day.events.begin(), day.events.end(), event_before);
    return day;
}

}  // namespace parksim
