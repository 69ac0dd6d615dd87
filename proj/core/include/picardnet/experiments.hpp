#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "picardnet/mlp.hpp"
#include "picardnet/problems.hpp"

namespace picardnet {

// Batch driver configuration. One seed drives a whole run; every sweep point
// derives its randomness from (seed, point index), so results do not depend
// on execution order.
struct ExperimentConfig {
  std::string problem = "transport";
  int d = 2;
  double T = 1.0;
  double t = 0.0;
  double eps = 0.1;
  std::vector<int> levels = {1, 2, 3, 4, 5};
  std::vector<int> d_values = {1, 2, 4, 8};
  std::vector<double> eps_values = {0.2, 0.1, 0.05};
  uint64_t seed = 42;
  int n_points = 256;
  double max_evals = 1e8;
  int64_t max_params = 10000000;
  std::string out;  // CSV path; empty writes to stdout and skips the chart
};

// "transport", "linear-affine", "linear-quadratic", or "sine" (which uses eps).
Problem make_named_problem(const std::string& name, int d, double T, double eps);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Series {
  std::string name;
  std::vector<std::pair<double, double>> points;
};

struct ExperimentResult {
  Table table;
  std::vector<Series> chart;
  std::string chart_title, chart_xlabel, chart_ylabel;
  bool logx = false, logy = false;
};

std::string format_double(double v);  // %.17g, parses back to the same bits
std::string to_csv(const Table& t);
std::string config_hash(const ExperimentConfig& cfg);  // 16 hex digits
std::string build_stamp();

// Line chart of result.chart as a standalone SVG; empty string when there is
// nothing to plot.
std::string render_svg_chart(const ExperimentResult& r);
std::string sibling_svg_path(const std::string& csv_path);
void write_text_file(const std::string& path, const std::string& content);

// Weighted L2 error against the problem's reference for each n = m in
// cfg.levels. Requires a problem with a closed-form solution.
ExperimentResult run_convergence(const ExperimentConfig& cfg);

// Parameter counts of the sine construction: compiled networks across
// cfg.d_values at n = m = 2 and accuracy cfg.eps, the nonlinearity network
// across d_values x eps_values with its envelope 640 kappa^2 d^2 eps^-6, and
// log-log slope rows for both sweeps.
ExperimentResult run_scaling(const ExperimentConfig& cfg);

// Weighted L2 distance between sine solutions built at accuracy eps and
// eps/2 under shared seeds, for each eps in cfg.eps_values, with an
// eps1 = eps2 control row per accuracy and ratio rows between consecutive
// pairs.
ExperimentResult run_perturbation(const ExperimentConfig& cfg);

// Error-model constants fitted from measured (level, error) pairs. The model
// keeps the level dependence exp(a + b n - (n/2) log n); the theory's
// constants are retained only to print the proof-side majorant.
struct Calibration {
  double a = 0.0;
  double b = 0.0;
  double c_hat = 2.0;
  double kappa_hat = 1.0;
  double q = 1.5;
  double T = 1.0;
};

Calibration calibrate_error_model(const std::vector<std::pair<int, double>>& observed,
                                  double c_hat, double kappa_hat, double q, double T);

double calibrated_error(const Calibration& cal, int n);

// exp(n^3/6) n^(-n/2) 8^n exp(n c^2 T) kappa d^kappa, printed for reference
// and never used for selection.
double proof_error_majorant(const Calibration& cal, int d, int n);

struct LevelChoice {
  int n = 0;                 // selected level, run with m = n
  double eps_inner = 0.0;    // accuracy to build the f and g networks at
  double model_error = 0.0;  // calibrated model value at the selected level
  double proof_error = 0.0;  // proof-side majorant at the same level
};

// Smallest n >= 2 whose calibrated model error is at most target/2, plus the
// inner accuracy target / (10 c^2 d^(2c) B(1 - q/2, 1/2) kappa d^kappa).
// ResourceError when no level up to max_level reaches the target.
LevelChoice choose_level(int d, double epsilon_target, const Calibration& cal,
                         int max_level = 25);

}  // namespace picardnet
