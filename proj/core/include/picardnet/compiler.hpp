#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "picardnet/calculus.hpp"
#include "picardnet/mlp.hpp"

namespace picardnet {

// Width-list length of the network compiled at level n: every recursion step
// through f adds len(dims_f) - 1 entries on top of the level-0 shape.
int predicted_depth(int n, const LayerDims& dims_f, const LayerDims& dims_g);

// c * (4m)^n, the guaranteed width envelope of the compiled network.
int64_t width_bound(int n, int m, int c);

// Smallest admissible width constant: max(d+1, widths of f, widths of g).
int width_constant(const Problem& p);

// Exact width list of compile_mlp's output, by pure dimension arithmetic.
// Cheap; use it to size a compilation before materializing it.
LayerDims compiled_dims(int n, int m, const LayerDims& dims_f, const LayerDims& dims_g);

// Unroll the level-n estimator at time cfg.t under the frozen realization
// omega into a single ReLU network in the x argument. Realizing the result
// reproduces mlp_estimate(p, cfg, x, omega) up to float reassociation.
// Refuses outputs above max_params parameters.
Network compile_mlp(const Problem& p, const MlpConfig& cfg, const RandomRealization& omega,
                    int64_t max_params = 10000000);

struct CompileReport {
  int n = 0;
  int m = 0;
  double t = 0.0;
  int depth_predicted = 0;
  int depth_actual = 0;
  int width_constant = 0;
  int64_t width_bound_value = 0;
  int width_actual = 0;
  int64_t params = 0;
  double max_abs_deviation = 0.0;
  double max_rel_deviation = 0.0;  // deviation relative to max(1, |reference|)
  double tolerance = 0.0;
  bool depth_ok = false;
  bool width_ok = false;
  bool param_envelope_ok = false;  // params <= 2 * depth * width_bound^2
  bool deviation_ok = false;
  bool passed = false;
};

// Evaluate the compiled network and the estimator on a grid and compare,
// along with the structural depth and width guarantees.
CompileReport verify_equivalence(const Network& net, const Problem& p, const MlpConfig& cfg,
                                 const RandomRealization& omega,
                                 const std::vector<Vector>& grid, double tolerance = 1e-8);

std::string report_json(const CompileReport& r);

}  // namespace picardnet
