#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace mudsim {

struct BoxBounds {
  std::vector<double> lower;
  std::vector<double> upper;

  std::size_t size() const { return lower.size(); }
  void validate() const;
  void clamp(std::vector<double>& x) const;
  double range(std::size_t i) const { return upper[i] - lower[i]; }
  std::vector<double> center() const;
};

struct SimplexOptions {
  int max_evals = 4000;
  double f_tol_abs = 1e-10;      ///< spread of simplex objective values
  double x_tol_rel = 1e-10;      ///< simplex diameter relative to bound ranges
  double init_step_rel = 0.10;   ///< initial vertex offset relative to bound ranges
};

struct SimplexResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
  /// (evaluation index, objective) at every strict improvement of the best
  /// value seen; non-increasing by construction.
  std::vector<std::pair<int, double>> improvements;
};

/// Nelder–Mead direct search with adaptive coefficients, constrained to the
/// box by projecting every candidate vertex. Deterministic.
SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                          const std::vector<double>& start, const BoxBounds& bounds,
                          const SimplexOptions& options = {});

/// `count` Latin-hypercube samples of the box; dimensions flagged in
/// `log_scale` are stratified geometrically. Deterministic for a given seed
/// (own generator arithmetic, no library distributions).
std::vector<std::vector<double>> latin_hypercube(const BoxBounds& bounds, int count,
                                                 std::uint64_t seed,
                                                 const std::vector<bool>& log_scale);

}  // namespace mudsim
