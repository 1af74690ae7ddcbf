#include "parksim/traveltime.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>

namespace parksim {

namespace {

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

std::int64_t parse_int_field(const std::string& s, const std::string& path, std::size_t line_no,
                             const char* what) {
    std::int64_t v = 0;
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

SpeedModel calibrate_speed_model(const std::vector<Commuter>& commuters, double target_morning_s,
                                 double target_evening_s) {
    if (commuters.empty()) throw std::invalid_argument("calibrate_speed_model: empty population");
    if (target_morning_s <= 0.0 || target_evening_s <= 0.0) {
        throw std::invalid_argument("calibrate_speed_model: targets must be positive");
    }
    double sum = 0.0;
    for (const Commuter& c : commuters) sum += dist(c.home, c.work);
    const double mean_dist = sum / static_cast<double>(commuters.size());
    if (mean_dist <= 0.0) {
        throw std::invalid_argument("calibrate_speed_model: zero mean commute distance");
    }
    return SpeedModel{mean_dist / target_morning_s, mean_dist / target_evening_s};
}

TravelTimeMatrix TravelTimeMatrix::load(const std::string& nodes_path,
                                        const std::string& edges_path, const Projection& proj) {
    TravelTimeMatrix m;

    std::ifstream nf(nodes_path);
    if (!nf) throw std::runtime_error("cannot open " + nodes_path);
    std::unordered_map<std::int64_t, std::size_t> index_of;
    std::string line;
    std::size_t line_no = 0;
    bool header_checked = false;
    while (std::getline(nf, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (!header_checked) {
            header_checked = true;
            const std::vector<std::string> expected = {"node_id", "lon", "lat"};
            if (fields != expected) {
                throw std::runtime_error(nodes_path +
                                         ":1: expected header 'node_id,lon,lat'");
            }
            continue;
        }
        if (fields.size() != 3) {
            throw std::runtime_error(nodes_path + ":" + std::to_string(line_no) +
                                     ": expected 3 fields, got " +
                                     std::to_string(fields.size()));
        }
        const std::int64_t id = parse_int_field(fields[0], nodes_path, line_no, "node_id");
        const double lon = parse_double_field(fields[1], nodes_path, line_no, "lon");
        const double lat = parse_double_field(fields[2], nodes_path, line_no, "lat");
        if (index_of.count(id)) {
            throw std::runtime_error(nodes_path + ":" + std::to_string(line_no) +
                                     ": duplicate node_id " + std::to_string(id));
        }
        index_of.emplace(id, m.nodes_.size());
        m.nodes_.push_back(project(lon, lat, proj));
    }
    if (m.nodes_.empty()) throw std::runtime_error(nodes_path + ": no nodes");

    std::ifstream ef(edges_path);
    if (!ef) throw std::runtime_error("cannot open " + edges_path);
    line_no = 0;
    header_checked = false;
    while (std::getline(ef, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (!header_checked) {
            header_checked = true;
            const std::vector<std::string> expected = {"from_id", "to_id", "seconds_morning",
                                                       "seconds_evening"};
            if (fields != expected) {
                throw std::runtime_error(
                    edges_path +
                    ":1: expected header 'from_id,to_id,seconds_morning,seconds_evening'");
            }
            continue;
        }
        if (fields.size() != 4) {
            throw std::runtime_error(edges_path + ":" + std::to_string(line_no) +
                                     ": expected 4 fields, got " +
                                     std::to_string(fields.size()));
        }
        const std::int64_t from_id = parse_int_field(fields[0], edges_path, line_no, "from_id");
        const std::int64_t to_id = parse_int_field(fields[1], edges_path, line_no, "to_id");
        const double sm = parse_double_field(fields[2], edges_path, line_no, "seconds_morning");
        const double se = parse_double_field(fields[3], edges_path, line_no, "seconds_evening");
        if (sm < 0.0 || se < 0.0) {
            throw std::runtime_error(edges_path + ":" + std::to_string(line_no) +
                                     ": negative duration");
        }
        const auto fit = index_of.find(from_id);
        const auto tit = index_of.find(to_id);
        if (fit == index_of.end() || tit == index_of.end()) {
            throw std::runtime_error(edges_path + ":" + std::to_string(line_no) +
                                     ": edge references unknown node");
        }
        const std::uint64_t key = (static_cast<std::uint64_t>(fit->second) << 32) |
                                  static_cast<std::uint64_t>(tit->second);
        m.seconds_[key] = {sm, se};
    }
    return m;
}

std::size_t TravelTimeMatrix::nearest_node(GeoPoint p) const {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double d2 = dist_sq(p, nodes_[i]);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    return best;
}

double TravelTimeMatrix::lookup(std::size_t from, std::size_t to, Period period) const {
    if (from == to) return 0.0;
    const std::uint64_t key =
        (static_cast<std::uint64_t>(from) << 32) | static_cast<std::uint64_t>(to);
    const auto it = seconds_.find(key);
    if (it == seconds_.end()) return -1.0;
    return period == Period::Morning ? it->second.first : it->second.second;
}

double TravelTimeProvider::trip_seconds(GeoPoint origin, GeoPoint destination, Period period,
                                        bool* used_fallback) const {
    if (has_matrix_) {
        const std::size_t from = matrix_.nearest_node(origin);
        const std::size_t to = matrix_.nearest_node(destination);
        const double s = matrix_.lookup(from, to, period);
        if (s >= 0.0) return s;
        if (used_fallback) *used_fallback = true;
    }
    return speeds_.seconds(dist(origin, destination), period);
}

PreparedTripTimes prepare_trip_times(const std::vector<Commuter>& commuters,
                                     const TravelTimeProvider& provider) {
    PreparedTripTimes out;
    out.morning_s.resize(commuters.size());
    out.evening_s.resize(commuters.size());
    out.fallback.assign(commuters.size(), 0);
    for (std::size_t i = 0; i < commuters.size(); ++i) {
        bool fb = false;
        out.morning_s[i] =
            provider.trip_seconds(commuters[i].home, commuters[i].work, Period::Morning, &fb);
        out.evening_s[i] =
            provider.trip_seconds(commuters[i].work, commuters[i].home, Period::Evening, &fb);
        if (fb) {
            out.fallback[i] = 1;
            ++out.fallback_count;
        }
    }
    return out;
}

}  // namespace parksim
