#ifndef SPSREG_HARNESS_HPP
#define SPSREG_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "spsreg/bounds.hpp"
#include "spsreg/model.hpp"
#include "spsreg/sps.hpp"

namespace spsreg {

enum class Method { SpsEoa, Asymptotic, Setmem, DmrBound, EoaBound };

std::string method_name(Method m);
Method method_from_name(const std::string& name);

// One Monte Carlo experiment: the data-generating system, the region
// constructions to evaluate, and the trial layout.  Parsed from JSON, e.g.
//
//   {
//     "system": {"d": 2, "theta_star": [5.0, 5.0]},
//     "input":  {"type": "ar", "a": 0.7, "c": [1.0, 0.775, 0.55, 0.325, 0.1]},
//     "noise":  {"type": "uniform", "halfwidth": 3.0},
//     "m": 10, "q": 1, "delta": 0.5,
//     "n": 2000, "t0": 400, "trials": 100, "seed": 1,
//     "burn_in": 200, "stride": 25,
//     "methods": ["sps_eoa", "asymptotic", "setmem", "eoa_bound"]
//   }
//
// input.type is "ar" (fields a, c) or "fir" (field c); noise.type is
// "uniform" (halfwidth), "gaussian" (stddev) or "mixture" (optional horizon,
// defaulting to n).  Optional blocks: "setmem": {"noise_bound", "init_radius"}
// and "dmr": {"nu", "eta"} (eta defaults to q/m).
struct ExperimentConfig {
    int d = 2;
    Eigen::VectorXd theta_star;
    InputSpec input = ArInput{0.7, {1.0, 0.775, 0.55, 0.325, 0.1}};
    NoiseSpec noise = UniformNoise{3.0};
    int m = 10;
    int q = 1;
    double delta = 0.5;
    Eigen::Index n = 2000;
    Eigen::Index t0 = 400;
    int trials = 100;
    std::uint64_t seed = 1;
    Eigen::Index burn_in = 200;
    Eigen::Index stride = 25;
    std::vector<Method> methods = {Method::SpsEoa, Method::Asymptotic};
    double setmem_noise_bound = 0.0; // 0 -> hard bound of the noise family
    double setmem_init_radius = 1e3;
    double dmr_nu = 0.5;
    double dmr_eta = 0.0; // 0 -> q/m

    double confidence() const { return 1.0 - static_cast<double>(q) / m; }
    void validate() const; // throws ConfigError
};

ExperimentConfig config_from_json(const std::string& text);

// Sizes indexed by evaluation time and method.  Region methods hold medians
// across trials; bound methods hold the deterministic bound values (+inf
// where the sample size is below the bound's validity threshold).
struct SizeTable {
    std::vector<long> ts;
    std::vector<Method> methods;
    std::vector<std::vector<double>> columns; // columns[m][i] = size at ts[i]

    bool operator==(const SizeTable&) const = default;
    const std::vector<double>& column(Method m) const;
};

// Runs `threads` workers over [0, count) with an atomic work index.
// threads <= 0 picks the hardware concurrency.  Results must be written to
// preallocated slots so the outcome is independent of scheduling.
void parallel_for(long count, int threads, const std::function<void(long)>& body);

// One simulated trial: a fresh trajectory and a fresh sign table /
// permutation, both derived from split(trial) of the config seed.  This is
// the exact data every runner below works from, exposed so tests can replay
// individual trials.
struct Trial {
    Dataset dataset;
    SpsConfig sps;
};

Trial simulate_trial(const ExperimentConfig& cfg, long trial);

// Sweeps every evaluated method over the prefixes t = t0, t0+stride, ..., n
// (n always included) of `trials` independently simulated trajectories and
// reduces across trials by the median.  Each trial draws a fresh trajectory
// and a fresh sign table / permutation from its own stream split, so results
// do not depend on the thread count.  Bound columns use kappa and lambda0
// estimated from the same trial set.
SizeTable run_size_sweep(const ExperimentConfig& cfg, int threads = 0);

// Fraction of `num_trials` fresh (trajectory, sign table) pairs whose rank
// test accepts theta*.
double run_coverage(const ExperimentConfig& cfg, long num_trials, int threads = 0);

// One confidence-set comparison row at full sample size n.
struct ComparisonRow {
    int d = 0;
    long n = 0;
    double sps_eoa = 0.0;
    double eoa_bound = 0.0;
    double dmr = 0.0;
    double asymptotic = 0.0;
};

// Evaluates the (d, n) grid with the base config's noise/input family,
// theta* = 5 * ones(d), at the single prefix t = n.
std::vector<ComparisonRow> run_table(const std::vector<std::pair<int, long>>& rows,
                                     const ExperimentConfig& base, int threads = 0);
std::string comparison_to_csv(const std::vector<ComparisonRow>& rows);

// Ordinary least-squares slope of ln(size) against ln(t).  Requires at least
// 10 table rows and positive finite sizes in the chosen column.
double fit_shrinkage_rate(const SizeTable& table, Method method);

// --- serialization ---------------------------------------------------------

enum class OutputFormat { Csv, Svg, Gnuplot };

OutputFormat format_from_name(const std::string& name);

// Long-format CSV with header "t,method,size"; doubles are emitted with
// round-trip precision so parse(emit(x)) == x.
std::string table_to_csv(const SizeTable& table);
SizeTable table_from_csv(const std::string& text);

// Self-contained log-log chart, one polyline per method.
std::string table_to_svg(const SizeTable& table);

struct GnuplotOutput {
    std::string script;
    std::string data;
};
GnuplotOutput table_to_gnuplot(const SizeTable& table, const std::string& data_filename);

// Writes <basename>.csv / .svg / (.gp and .dat) under out_dir and returns the
// paths written.  Byte-stable for a fixed table.
std::vector<std::filesystem::path> emit_outputs(const SizeTable& table,
                                                OutputFormat format,
                                                const std::filesystem::path& out_dir,
                                                const std::string& basename);

} // namespace spsreg

#endif
