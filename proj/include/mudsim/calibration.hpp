#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mudsim/dynamics.hpp"
#include "mudsim/parameters.hpp"
#include "mudsim/trajectory.hpp"

namespace mudsim {

/// Root-mean-square difference between two equally long series, N.
double rmse(std::span<const double> predicted, std::span<const double> measured);

/// Least-squares slope through the origin of f against ρ_m·ż² from surface
/// sliding samples: the drag scaling factor λ.
double fit_lambda(std::span<const double> zdot, std::span<const double> stress, double rho_m);

struct AlphaBetaFit {
  double alpha = 0.0;
  double beta = 0.0;
  bool beta_clamped = false;  ///< regression slope fell outside (0, 1]
};

/// Log-log regression of sustain steady-state stresses against depth:
/// slope = β (clamped into (0, 1] and flagged), intercept = ln α.
/// Needs at least two distinct depths and strictly positive stresses.
AlphaBetaFit fit_alpha_beta(std::span<const double> depth, std::span<const double> stress,
                            double char_width);

/// Single-point variant with β known: α = f_ss·(D/H)^(−β).
double fit_alpha_given_beta(double depth, double stress, double char_width, double beta);

/// The nine parameters identified by the full optimization, in fit order.
enum class FitParam : std::size_t {
  k_i = 0, b_i, k_w, b_w, alpha, beta, sigma_y, zeta, omega0,
};
inline constexpr std::size_t kFitParamCount = 9;
extern const std::array<const char*, kFitParamCount> kFitParamNames;

std::array<double, kFitParamCount> fit_vector(const MudParameters& p);
MudParameters with_fit_vector(const MudParameters& base,
                              const std::array<double, kFitParamCount>& theta);

/// Closed per-parameter intervals for the fit, SI units.
struct ParameterBounds {
  std::array<double, kFitParamCount> lower{};
  std::array<double, kFitParamCount> upper{};

  static ParameterBounds defaults();
  void validate() const;
  bool contains(const std::array<double, kFitParamCount>& theta) const;
};

ParameterBounds bounds_from_json(const nlohmann::json& j);
nlohmann::json bounds_to_json(const ParameterBounds& b);
ParameterBounds load_bounds_file(const std::filesystem::path& path);

struct FitConfig {
  ParameterBounds bounds = ParameterBounds::defaults();
  /// Explicit start (SI); otherwise the starts are the bound center plus a
  /// sustain-informed guess plus Latin-hypercube samples.
  std::optional<std::array<double, kFitParamCount>> initial_guess;
  int multi_start = 8;
  int max_evals_per_start = 6000;
  double objective_tolerance = 1e-9;  ///< N, absolute
  std::uint64_t seed = 0;
  bool sustain_informed_start = true;

  void validate() const;
};

struct FitResult {
  MudParameters parameters;  ///< fitted values; λ, ρ_m, W carried from the base
  double objective = 0.0;    ///< RMSE at `parameters`, N
  long evaluations = 0;
  int starts = 0;
  bool converged = false;
  std::uint64_t seed = 0;
  std::array<bool, kFitParamCount> at_lower{};
  std::array<bool, kFitParamCount> at_upper{};
  /// (cumulative evaluation, best objective) improvements; non-increasing.
  std::vector<std::pair<long, double>> improvements;

  bool any_bound_hit() const;
  nlohmann::json fit_report(const ParameterBounds& bounds) const;
};

/// Identifies (k_i, b_i, k_w, b_w, α, β, σ_y, ζ, ω₀) by minimizing the
/// pooled RMSE between simulated and measured force over all trials, with
/// bounded multi-start Nelder–Mead. λ and ρ_m come from `base` and stay
/// fixed, as does the water-content label. Deterministic for a given seed.
FitResult fit_parameters(std::span<const TrialRecord> trials, const IntruderGeometry& geometry,
                         const MudParameters& base, const FitConfig& config);

/// Pooled prediction RMSE of `p` over the trials; the fit objective.
double evaluate_objective(std::span<const TrialRecord> trials, const IntruderGeometry& geometry,
                          const MudParameters& p);

struct ErrorProfile {
  std::vector<double> axis;    ///< normalized process time, 0..1
  std::vector<double> mean;    ///< mean of (F_pred − F_meas) across trials, N
  std::vector<double> stddev;  ///< population standard deviation, N
};

/// Per-sample error statistics on a common normalized time axis.
ErrorProfile error_profile(std::span<const TrialRecord> trials, const MudParameters& p,
                           const IntruderGeometry& geometry, int samples = 101);

}  // namespace mudsim
