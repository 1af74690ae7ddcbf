#include "parksim/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>

#include "parksim/engine.hpp"

namespace parksim {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return s.substr(b, e - b);
}

double to_double(const std::string& s, const std::string& where) {
    double v = 0.0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw ConfigError(where + ": bad number '" + s + "'");
    return v;
}

std::uint64_t to_u64(const std::string& s, const std::string& where) {
    std::uint64_t v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) {
        throw ConfigError(where + ": bad unsigned integer '" + s + "'");
    }
    return v;
}

int to_int(const std::string& s, const std::string& where) {
    int v = 0;
    const char* b = s.data();
    const char* e = s.data() + s.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) throw ConfigError(where + ": bad integer '" + s + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::vector<double> to_double_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    for (const std::string& item : split_list(s)) out.push_back(to_double(item, where));
    return out;
}

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_doubles(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += fmt_double(xs[i]);
    }
    return out;
}

std::string join_strings(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += xs[i];
    }
    return out;
}

using Handler = std::function<void(Config&, const std::string&, const std::string&)>;

const std::map<std::string, Handler>& handlers() {
    static const std::map<std::string, Handler> table = {
        {"n_commuters",
         [](Config& c, const std::string& v, const std::string& w) {
             c.n_commuters = static_cast<std::size_t>(to_u64(v, w));
         }},
        {"home_clusters",
         [](Config& c, const std::string& v, const std::string& w) {
             c.home_clusters = to_int(v, w);
         }},
        {"work_clusters",
         [](Config& c, const std::string& v, const std::string& w) {
             c.work_clusters = to_int(v, w);
         }},
        {"cluster_sigma",
         [](Config& c, const std::string& v, const std::string& w) {
             c.cluster_sigma = to_double(v, w);
         }},
        {"region_extent",
         [](Config& c, const std::string& v, const std::string& w) {
             c.region_extent = to_double(v, w);
         }},
        {"imbalance",
         [](Config& c, const std::string& v, const std::string& w) {
             c.imbalance = to_double(v, w);
         }},
        {"min_separation",
         [](Config& c, const std::string& v, const std::string& w) {
             c.min_separation = to_double(v, w);
         }},
        {"location_noise_sigma",
         [](Config& c, const std::string& v, const std::string& w) {
             c.location_noise_sigma = to_double(v, w);
         }},
        {"population_csv",
         [](Config& c, const std::string& v, const std::string&) { c.population_csv = v; }},
        {"nodes_csv",
         [](Config& c, const std::string& v, const std::string&) { c.nodes_csv = v; }},
        {"edges_csv",
         [](Config& c, const std::string& v, const std::string&) { c.edges_csv = v; }},
        {"target_morning_s",
         [](Config& c, const std::string& v, const std::string& w) {
             c.target_morning_s = to_double(v, w);
         }},
        {"target_evening_s",
         [](Config& c, const std::string& v, const std::string& w) {
             c.target_evening_s = to_double(v, w);
         }},
        {"departures_csv",
         [](Config& c, const std::string& v, const std::string&) { c.departures_csv = v; }},
        {"t_w",
         [](Config& c, const std::string& v, const std::string& w) { c.t_w = to_double(v, w); }},
        {"t_w_list",
         [](Config& c, const std::string& v, const std::string& w) {
             c.t_w_list = to_double_list(v, w);
         }},
        {"scenario",
         [](Config& c, const std::string& v, const std::string&) { c.scenario = v; }},
        {"scenario_list",
         [](Config& c, const std::string& v, const std::string&) {
             c.scenario_list = split_list(v);
         }},
        {"r_max",
         [](Config& c, const std::string& v, const std::string& w) {
             c.r_max = to_double(v, w);
         }},
        {"r_max_list",
         [](Config& c, const std::string& v, const std::string& w) {
             c.r_max_list = to_double_list(v, w);
         }},
        {"adoption",
         [](Config& c, const std::string& v, const std::string& w) {
             c.adoption = to_double(v, w);
         }},
        {"adoption_list",
         [](Config& c, const std::string& v, const std::string& w) {
             c.adoption_list = to_double_list(v, w);
         }},
        {"days",
         [](Config& c, const std::string& v, const std::string& w) { c.days = to_int(v, w); }},
        {"replications",
         [](Config& c, const std::string& v, const std::string& w) {
             c.replications = to_int(v, w);
         }},
        {"seed",
         [](Config& c, const std::string& v, const std::string& w) { c.seed = to_u64(v, w); }},
        {"cap",
         [](Config& c, const std::string& v, const std::string& w) { c.cap = to_u64(v, w); }},
        {"out", [](Config& c, const std::string& v, const std::string&) { c.out = v; }},
        {"workers",
         [](Config& c, const std::string& v, const std::string& w) {
             c.workers = to_int(v, w);
         }},
        {"format", [](Config& c, const std::string& v, const std::string&) { c.format = v; }},
    };
    return table;
}

std::string valid_keys_message() {
    std::string msg = "valid keys:";
    for (const auto& [key, fn] : handlers()) {
        msg += ' ';
        msg += key;
    }
    return msg;
}

}  // namespace

void apply_config_key(Config& cfg, const std::string& key, const std::string& value,
                      const std::string& where) {
    const auto it = handlers().find(key);
    if (it == handlers().end()) {
        throw ConfigError(where + ": unknown key '" + key + "'; " + valid_keys_message());
    }
    it->second(cfg, value, where);
}

Config load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file " + path);
    Config cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        const std::string where = path + ":" + std::to_string(line_no);
        if (eq == std::string::npos) {
            throw ConfigError(where + ": expected 'key = value'");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError(where + ": empty key");
        apply_config_key(cfg, key, value, where);
    }
    return cfg;
}

void validate_config(const Config& cfg) {
    if (cfg.n_commuters < 1) throw ConfigError("n_commuters must be at least 1");
    if (cfg.home_clusters < 1) throw ConfigError("home_clusters must be at least 1");
    if (cfg.work_clusters < 1) throw ConfigError("work_clusters must be at least 1");
    if (cfg.cluster_sigma <= 0.0) throw ConfigError("cluster_sigma must be positive");
    if (cfg.region_extent <= 0.0) throw ConfigError("region_extent must be positive");
    if (cfg.imbalance < 0.0 || cfg.imbalance > 1.0) {
        throw ConfigError("imbalance must be in [0, 1]");
    }
    if (cfg.min_separation < 0.0) throw ConfigError("min_separation must be non-negative");
    if (cfg.location_noise_sigma < 0.0) {
        throw ConfigError("location_noise_sigma must be non-negative");
    }
    if (cfg.target_morning_s <= 0.0 || cfg.target_evening_s <= 0.0) {
        throw ConfigError("travel time targets must be positive");
    }
    if (cfg.nodes_csv.empty() != cfg.edges_csv.empty()) {
        throw ConfigError("nodes_csv and edges_csv must be set together");
    }
    for (double t : effective_t_w(cfg)) {
        if (t <= 0.0) throw ConfigError("t_w must be positive");
    }
    for (const std::string& s : effective_scenarios(cfg)) {
        try {
            parse_scenario(s);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    for (double r : effective_r_max(cfg)) {
        if (r <= 0.0) throw ConfigError("r_max must be positive");
    }
    for (double a : effective_adoption(cfg)) {
        if (a <= 0.0 || a > 1.0) throw ConfigError("adoption must be in (0, 1]");
    }
    if (cfg.days < 1) throw ConfigError("days must be at least 1");
    if (cfg.replications < 1) throw ConfigError("replications must be at least 1");
    if (cfg.workers < 0) throw ConfigError("workers must be non-negative");
    if (cfg.cap && *cfg.cap < 1) throw ConfigError("cap must be at least 1");
    if (cfg.cap) {
        for (const std::string& s : effective_scenarios(cfg)) {
            if (!is_shared_fleet(parse_scenario(s))) {
                throw ConfigError("cap applies to shared-fleet scenarios only");
            }
        }
    }
    if (cfg.format != "csv" && cfg.format != "json" && cfg.format != "both") {
        throw ConfigError("format must be csv, json or both");
    }
}

std::vector<std::pair<std::string, std::string>> config_echo(const Config& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    if (cfg.population_csv.empty()) {
        out.emplace_back("population", "synthetic");
        out.emplace_back("n_commuters", std::to_string(cfg.n_commuters));
        out.emplace_back("home_clusters", std::to_string(cfg.home_clusters));
        out.emplace_back("work_clusters", std::to_string(cfg.work_clusters));
        out.emplace_back("cluster_sigma", fmt_double(cfg.cluster_sigma));
        out.emplace_back("region_extent", fmt_double(cfg.region_extent));
        out.emplace_back("imbalance", fmt_double(cfg.imbalance));
    } else {
        out.emplace_back("population", cfg.population_csv);
    }
    out.emplace_back("min_separation", fmt_double(cfg.min_separation));
    out.emplace_back("location_noise_sigma", fmt_double(cfg.location_noise_sigma));
    if (!cfg.nodes_csv.empty()) {
        out.emplace_back("nodes_csv", cfg.nodes_csv);
        out.emplace_back("edges_csv", cfg.edges_csv);
    }
    out.emplace_back("target_morning_s", fmt_double(cfg.target_morning_s));
    out.emplace_back("target_evening_s", fmt_double(cfg.target_evening_s));
    if (!cfg.departures_csv.empty()) {
        out.emplace_back("departures", cfg.departures_csv);
    } else {
        out.emplace_back("departures", "uniform");
    }
    out.emplace_back("scenarios", join_strings(effective_scenarios(cfg)));
    out.emplace_back("r_max", join_doubles(effective_r_max(cfg)));
    out.emplace_back("t_w", join_doubles(effective_t_w(cfg)));
    out.emplace_back("adoption", join_doubles(effective_adoption(cfg)));
    out.emplace_back("days", std::to_string(cfg.days));
    out.emplace_back("replications", std::to_string(cfg.replications));
    out.emplace_back("seed", std::to_string(cfg.seed));
    out.emplace_back("cap", cfg.cap ? std::to_string(*cfg.cap) : "none");
    return out;
}

std::vector<std::string> effective_scenarios(const Config& cfg) {
    return cfg.scenario_list.empty() ? std::vector<std::string>{cfg.scenario}
                                     : cfg.scenario_list;
}

std::vector<double> effective_r_max(const Config& cfg) {
    return cfg.r_max_list.empty() ? std::vector<double>{cfg.r_max} : cfg.r_max_list;
}

std::vector<double> effective_t_w(const Config& cfg) {
    return cfg.t_w_list.empty() ? std::vector<double>{cfg.t_w} : cfg.t_w_list;
}

std::vector<double> effective_adoption(const Config& cfg) {
    return cfg.adoption_list.empty() ? std::vector<double>{cfg.adoption} : cfg.adoption_list;
}

}  // namespace parksim
