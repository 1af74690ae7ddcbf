#include <string>

#include "doctest.h"
#include "parksim/config.hpp"
#include "test_support.hpp"

using namespace parksim;
using test_support::TempDir;
using test_support::write_file;

TEST_CASE("default config validates") {
    Config cfg;
    CHECK_NOTHROW(validate_config(cfg));
}

TEST_CASE("apply_config_key sets scalars, lists and optionals") {
    Config cfg;
    apply_config_key(cfg, "n_commuters", "1234", "t");
    apply_config_key(cfg, "r_max", "750.5", "t");
    apply_config_key(cfg, "r_max_list", "100, 200,300", "t");
    apply_config_key(cfg, "scenario_list", "shared_parking, 3", "t");
    apply_config_key(cfg, "t_w_list", "900,3600", "t");
    apply_config_key(cfg, "adoption_list", "0.1,0.25", "t");
    apply_config_key(cfg, "cap", "42", "t");
    apply_config_key(cfg, "seed", "18446744073709551615", "t");
    apply_config_key(cfg, "format", "both", "t");
    apply_config_key(cfg, "out", "  spaced name  ", "t");

    CHECK(cfg.n_commuters == 1234);
    CHECK(cfg.r_max == 750.5);
    CHECK(cfg.r_max_list == std::vector<double>{100.0, 200.0, 300.0});
    CHECK(cfg.scenario_list == std::vector<std::string>{"shared_parking", "3"});
    CHECK(cfg.t_w_list == std::vector<double>{900.0, 3600.0});
    CHECK(cfg.adoption_list == std::vector<double>{0.1, 0.25});
    REQUIRE(cfg.cap.has_value());
    CHECK(*cfg.cap == 42);
    CHECK(cfg.seed == 18446744073709551615ull);
    CHECK(cfg.format == "both");
    // apply_config_key receives pre-trimmed values from the loader; it does
    // not trim again.
    CHECK(cfg.out == "  spaced name  ");
}

TEST_CASE("apply_config_key rejects unknown keys and names the valid ones") {
    Config cfg;
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "r_maximum", "5", "cfg:3"),
                         doctest::Contains("unknown key 'r_maximum'"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "r_maximum", "5", "cfg:3"),
                         doctest::Contains("valid keys:"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "r_maximum", "5", "cfg:3"),
                         doctest::Contains("r_max_list"), ConfigError);
}

TEST_CASE("apply_config_key reports bad numbers with the location prefix") {
    Config cfg;
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "r_max", "fast", "cfg:7"),
                         doctest::Contains("cfg:7: bad number 'fast'"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "days", "7.5", "cfg:8"),
                         doctest::Contains("bad integer"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "seed", "-1", "cfg:9"),
                         doctest::Contains("bad unsigned integer"), ConfigError);
    CHECK_THROWS_WITH_AS(apply_config_key(cfg, "r_max_list", "100,,300", "cfg:10"),
                         doctest::Contains("bad number ''"), ConfigError);
}

TEST_CASE("load_config parses key = value lines with comments and blanks") {
    TempDir dir("config_load");
    const auto path = dir.file("run.conf");
    write_file(path,
               "# comment line\n"
               "\n"
               "  n_commuters = 500\n"
               "scenario = shared_cars\t\n"
               "r_max_list = 100 , 250\n"
               "   # indented comment\n"
               "out = demo\n");
    const Config cfg = load_config(path);
    CHECK(cfg.n_commuters == 500);
    CHECK(cfg.scenario == "shared_cars");
    CHECK(cfg.r_max_list == std::vector<double>{100.0, 250.0});
    CHECK(cfg.out == "demo");
    // Untouched keys keep their defaults.
    CHECK(cfg.days == 30);
    CHECK(cfg.replications == 20);
}

TEST_CASE("load_config rejects malformed lines with file:line locations") {
    TempDir dir("config_bad");
    const auto no_eq = dir.file("a.conf");
    write_file(no_eq, "n_commuters = 5\njust words\n");
    CHECK_THROWS_WITH_AS(load_config(no_eq), doctest::Contains(":2: expected 'key = value'"),
                         ConfigError);

    const auto empty_key = dir.file("b.conf");
    write_file(empty_key, "= 5\n");
    CHECK_THROWS_WITH_AS(load_config(empty_key), doctest::Contains(":1: empty key"), ConfigError);

    const auto bad_value = dir.file("c.conf");
    write_file(bad_value, "# fine\nr_max = wat\n");
    CHECK_THROWS_WITH_AS(load_config(bad_value), doctest::Contains("c.conf:2: bad number"),
                         ConfigError);

    CHECK_THROWS_WITH_AS(load_config(dir.file("missing.conf")),
                         doctest::Contains("cannot open config file"), ConfigError);
}

TEST_CASE("validate_config range checks") {
    const auto broken = [](auto mutate) {
        Config cfg;
        mutate(cfg);
        return cfg;
    };

    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.n_commuters = 0; })),
                         doctest::Contains("n_commuters"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.home_clusters = 0; })),
                         doctest::Contains("home_clusters"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.cluster_sigma = 0.0; })),
                         doctest::Contains("cluster_sigma"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.region_extent = -1.0; })),
                         doctest::Contains("region_extent"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.imbalance = 1.5; })),
                         doctest::Contains("imbalance"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.min_separation = -2.0; })),
                         doctest::Contains("min_separation"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.location_noise_sigma = -1.0; })),
                         doctest::Contains("location_noise_sigma"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.target_morning_s = 0.0; })),
                         doctest::Contains("travel time targets"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.nodes_csv = "n.csv"; })),
                         doctest::Contains("set together"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.t_w = 0.0; })),
                         doctest::Contains("t_w must be positive"), ConfigError);
    CHECK_THROWS_WITH_AS(
        validate_config(broken([](Config& c) { c.t_w_list = std::vector<double>({900.0, -5.0}); })),
        doctest::Contains("t_w must be positive"), ConfigError);
    CHECK_THROWS_AS(validate_config(broken([](Config& c) { c.scenario = "bikes"; })),
                    ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.r_max = 0.0; })),
                         doctest::Contains("r_max must be positive"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.adoption = 0.0; })),
                         doctest::Contains("adoption must be in (0, 1]"), ConfigError);
    CHECK_THROWS_WITH_AS(
        validate_config(
            broken([](Config& c) { c.adoption_list = std::vector<double>({0.5, 1.2}); })),
        doctest::Contains("adoption must be in (0, 1]"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.days = 0; })),
                         doctest::Contains("days"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.replications = 0; })),
                         doctest::Contains("replications"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.workers = -1; })),
                         doctest::Contains("workers"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) { c.format = "xml"; })),
                         doctest::Contains("format must be csv, json or both"), ConfigError);

    // The cap only makes sense when a fleet exists to relocate.
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) {
                             c.cap = 100;
                             c.scenario = "shared_parking";
                         })),
                         doctest::Contains("shared-fleet"), ConfigError);
    CHECK_THROWS_WITH_AS(validate_config(broken([](Config& c) {
                             c.cap = 100;
                             c.scenario_list = std::vector<std::string>({"shared_cars", "private"});
                         })),
                         doctest::Contains("shared-fleet"), ConfigError);
    CHECK_NOTHROW(validate_config(broken([](Config& c) {
        c.cap = 100;
        c.scenario = "self_driving";
    })));

    // Adoption below one is fine on its own.
    CHECK_NOTHROW(validate_config(broken([](Config& c) { c.adoption = 0.1; })));
    // A network matrix needs both files; giving both is fine.
    CHECK_NOTHROW(validate_config(broken([](Config& c) {
        c.nodes_csv = "n.csv";
        c.edges_csv = "e.csv";
    })));
}

TEST_CASE("effective_* expand scalars to one-element lists") {
    Config cfg;
    CHECK(effective_scenarios(cfg) == std::vector<std::string>{"shared_parking"});
    CHECK(effective_r_max(cfg) == std::vector<double>{500.0});
    CHECK(effective_t_w(cfg) == std::vector<double>{3600.0});
    CHECK(effective_adoption(cfg) == std::vector<double>{1.0});

    cfg.scenario_list = {"2", "3"};
    cfg.r_max_list = {100.0, 200.0};
    CHECK(effective_scenarios(cfg) == cfg.scenario_list);
    CHECK(effective_r_max(cfg) == cfg.r_max_list);
}

TEST_CASE("config_echo reports effective settings") {
    Config cfg;
    cfg.r_max_list = {100.0, 250.0};
    cfg.cap = 9;
    cfg.scenario = "shared_cars";
    const auto echo = config_echo(cfg);
    const auto find = [&](const std::string& key) -> std::string {
        for (const auto& [k, v] : echo)
            if (k == key) return v;
        return "<missing>";
    };
    CHECK(find("population") == "synthetic");
    CHECK(find("n_commuters") == "50000");
    CHECK(find("r_max") == "100,250");
    CHECK(find("scenarios") == "shared_cars");
    CHECK(find("cap") == "9");
    CHECK(find("departures") == "uniform");

    Config from_file;
    from_file.population_csv = "city.csv";
    from_file.departures_csv = "dep.csv";
    const auto echo2 = config_echo(from_file);
    bool population_is_path = false;
    bool departures_is_path = false;
    bool no_cluster_keys = true;
    for (const auto& [k, v] : echo2) {
        if (k == "population" && v == "city.csv") population_is_path = true;
        if (k == "departures" && v == "dep.csv") departures_is_path = true;
        if (k == "home_clusters" || k == "cluster_sigma") no_cluster_keys = false;
    }
    CHECK(population_is_path);
    CHECK(departures_is_path);
    CHECK(no_cluster_keys);
    const auto find2 = [&](const std::string& key) -> std::string {
        for (const auto& [k, v] : echo2)
            if (k == key) return v;
        return "<missing>";
    };
    CHECK(find2("cap") == "none");
}
