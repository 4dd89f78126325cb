#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "spsreg/baselines.hpp"
#include "spsreg/ellipsoid.hpp"
#include "spsreg/errors.hpp"
#include "spsreg/harness.hpp"

using namespace spsreg;

namespace {

const char* kSmallConfig = R"({
  "system": {"d": 2, "theta_star": [5.0, 5.0]},
  "input":  {"type": "ar", "a": 0.7, "c": [1.0, 0.775, 0.55, 0.325, 0.1]},
  "noise":  {"type": "uniform", "halfwidth": 3.0},
  "m": 4, "q": 1, "delta": 0.5,
  "n": 300, "t0": 100, "trials": 8, "seed": 17,
  "stride": 50,
  "methods": ["sps_eoa", "asymptotic", "setmem", "eoa_bound", "dmr_bound"]
})";

} // namespace

TEST_CASE("config parsing: round trip of the documented schema") {
    const ExperimentConfig cfg = config_from_json(kSmallConfig);
    CHECK(cfg.d == 2);
    CHECK(cfg.theta_star(0) == 5.0);
    CHECK(cfg.m == 4);
    CHECK(cfg.n == 300);
    CHECK(cfg.t0 == 100);
    CHECK(cfg.stride == 50);
    CHECK(cfg.methods.size() == 5);
    CHECK(cfg.confidence() == doctest::Approx(0.75));
}

TEST_CASE("config parsing: errors carry ConfigError") {
    CHECK_THROWS_AS(config_from_json("{not json"), ConfigError);
    CHECK_THROWS_AS(config_from_json("{}"), ConfigError);
    CHECK_THROWS_AS(config_from_json(R"({"system":{"d":2,"theta_star":[1.0]},
        "input":{"type":"fir","c":[1,0,0,0,0]},
        "noise":{"type":"uniform","halfwidth":3},
        "m":2,"q":1,"n":100})"),
                    ConfigError); // theta length mismatch
    CHECK_THROWS_AS(config_from_json(R"({"system":{"d":1,"theta_star":[1.0]},
        "input":{"type":"fir","c":[1,0,0,0,0]},
        "noise":{"type":"uniform","halfwidth":3},
        "m":2,"q":1,"n":100,"methods":[]})"),
                    ConfigError); // empty methods
    CHECK_THROWS_AS(config_from_json(R"({"system":{"d":1,"theta_star":[1.0]},
        "input":{"type":"fir","c":[1,0,0,0,0]},
        "noise":{"type":"uniform","halfwidth":3},
        "m":2,"q":1,"n":100,"methods":["nonsense"]})"),
                    ConfigError);
}

TEST_CASE("single-trial runs are replayable") {
    ExperimentConfig cfg = config_from_json(kSmallConfig);
    const Trial a = simulate_trial(cfg, 3);
    const Trial b = simulate_trial(cfg, 3);
    CHECK((a.dataset.regressors.array() == b.dataset.regressors.array()).all());
    CHECK((a.dataset.outputs.array() == b.dataset.outputs.array()).all());
    CHECK((a.sps.signs.array() == b.sps.signs.array()).all());
    CHECK(a.sps.permutation == b.sps.permutation);
    const Trial c = simulate_trial(cfg, 4);
    CHECK_FALSE((a.dataset.outputs.array() == c.dataset.outputs.array()).all());
}

TEST_CASE("coverage of a single trial is zero or one") {
    ExperimentConfig cfg = config_from_json(kSmallConfig);
    cfg.n = 80;
    cfg.t0 = 40;
    const double c = run_coverage(cfg, 1);
    CHECK((c == 0.0 || c == 1.0));
}

TEST_CASE("sweep over one trial reproduces the direct computation") {
    ExperimentConfig cfg = config_from_json(kSmallConfig);
    cfg.trials = 1;
    cfg.methods = {Method::Asymptotic};
    const SizeTable table = run_size_sweep(cfg);
    CHECK(table.ts.front() == 100);
    CHECK(table.ts.back() == 300);
    const Trial tr = simulate_trial(cfg, 0);
    for (std::size_t i = 0; i < table.ts.size(); ++i) {
        const Dataset prefix = tr.dataset.prefix(table.ts[i]);
        const double direct =
            ellipsoid_size(asymptotic_ellipsoid(prefix, cfg.confidence()));
        CHECK(table.column(Method::Asymptotic)[i] == direct);
    }
}

TEST_CASE("sweep output is independent of the thread count") {
    const ExperimentConfig cfg = config_from_json(kSmallConfig);
    const SizeTable t1 = run_size_sweep(cfg, 1);
    const SizeTable t4 = run_size_sweep(cfg, 4);
    CHECK(table_to_csv(t1) == table_to_csv(t4));
}

TEST_CASE("medians are stable under a seed change") {
    ExperimentConfig cfg = config_from_json(kSmallConfig);
    cfg.methods = {Method::Asymptotic};
    cfg.trials = 40;
    cfg.n = 400;
    cfg.t0 = 400; // single eval point
    const double a = run_size_sweep(cfg).column(Method::Asymptotic)[0];
    cfg.seed = 99;
    const double b = run_size_sweep(cfg).column(Method::Asymptotic)[0];
    CHECK(std::abs(a - b) / a < 0.10);
}

TEST_CASE("shrinkage-rate fits on synthetic power laws") {
    SizeTable table;
    for (long t = 100; t <= 2000; t += 100) table.ts.push_back(t);
    std::vector<double> inv_sqrt, flat;
    for (long t : table.ts) {
        inv_sqrt.push_back(3.0 / std::sqrt(static_cast<double>(t)));
        flat.push_back(0.7);
    }
    table.methods = {Method::SpsEoa, Method::Asymptotic};
    table.columns = {inv_sqrt, flat};
    CHECK(fit_shrinkage_rate(table, Method::SpsEoa) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit_shrinkage_rate(table, Method::Asymptotic) == doctest::Approx(0.0));

    SizeTable small = table;
    small.ts.resize(5);
    small.columns[0].resize(5);
    small.columns[1].resize(5);
    CHECK_THROWS_AS(fit_shrinkage_rate(small, Method::SpsEoa), ConfigError);

    SizeTable bad = table;
    bad.columns[0][3] = 0.0;
    CHECK_THROWS_AS(fit_shrinkage_rate(bad, Method::SpsEoa), NumericError);
}

TEST_CASE("csv round trip preserves the table exactly, infinities included") {
    SizeTable table;
    table.ts = {100, 200, 300};
    table.methods = {Method::SpsEoa, Method::EoaBound};
    table.columns = {{0.125, 0.100000000001, 0.075},
                     {std::numeric_limits<double>::infinity(), 1.5, 1.25}};
    const std::string csv = table_to_csv(table);
    CHECK(csv.substr(0, 14) == "t,method,size\n");
    CHECK(table_from_csv(csv) == table);
    CHECK_THROWS_AS(table_from_csv("bogus\n1,2,3\n"), ConfigError);
}

TEST_CASE("svg holds one polyline per method and is byte-stable") {
    ExperimentConfig cfg = config_from_json(kSmallConfig);
    cfg.trials = 4;
    const SizeTable table = run_size_sweep(cfg);
    const std::string svg = table_to_svg(table);
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++count;
        pos += 9;
    }
    CHECK(count == cfg.methods.size());
    CHECK(svg == table_to_svg(table));
    CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("gnuplot emission references every method column") {
    SizeTable table;
    table.ts = {100, 200};
    table.methods = {Method::SpsEoa, Method::Asymptotic};
    table.columns = {{0.5, 0.4}, {0.45, 0.35}};
    const GnuplotOutput g = table_to_gnuplot(table, "sizes.dat");
    CHECK(g.script.find("using 1:2") != std::string::npos);
    CHECK(g.script.find("using 1:3") != std::string::npos);
    CHECK(g.data.find("# t sps_eoa asymptotic") == 0);
    CHECK(g.script.find("logscale") != std::string::npos);
}

TEST_CASE("emit_outputs writes the requested files") {
    SizeTable table;
    table.ts = {100, 200};
    table.methods = {Method::Asymptotic};
    table.columns = {{0.5, 0.4}};
    const auto dir = std::filesystem::temp_directory_path() / "spsreg_emit_test";
    std::filesystem::remove_all(dir);
    for (auto format : {OutputFormat::Csv, OutputFormat::Svg, OutputFormat::Gnuplot}) {
        const auto files = emit_outputs(table, format, dir, "sizes");
        for (const auto& f : files) CHECK(std::filesystem::exists(f));
    }
    CHECK(std::filesystem::exists(dir / "sizes.csv"));
    CHECK(std::filesystem::exists(dir / "sizes.svg"));
    CHECK(std::filesystem::exists(dir / "sizes.gp"));
    CHECK(std::filesystem::exists(dir / "sizes.dat"));

    SizeTable empty;
    CHECK_THROWS_AS(emit_outputs(empty, OutputFormat::Csv, dir, "x"), ConfigError);
}

TEST_CASE("comparison table runs a small grid") {
    ExperimentConfig base = config_from_json(kSmallConfig);
    base.trials = 6;
    base.noise = MixtureNoise{0}; // horizon pinned per row
    base.input = FirInput{{1.0, 0.775, 0.55, 0.325, 0.1}};
    base.m = 2;
    base.q = 1;
    base.t0 = 150;
    const auto rows = run_table({{2, 300}, {3, 300}}, base);
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.sps_eoa > 0.0);
        CHECK(r.asymptotic > 0.0);
        CHECK(std::isfinite(r.dmr));
        CHECK(r.dmr > 0.0);
    }
    const std::string csv = comparison_to_csv(rows);
    CHECK(csv.find("d,n,sps_eoa,eoa_bound,dmr,asymptotic\n") == 0);
}
