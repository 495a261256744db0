#include "mudsim/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <stdexcept>

#include "mudsim/simplex.hpp"

namespace mudsim {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

// Search space: logarithmic for the positive scale parameters, linear for
// the dimensionless shape parameters.
constexpr std::array<bool, kFitParamCount> kLogScale = {true, true, true,  true, true,
                                                        false, true, false, true};

std::vector<double> to_search_space(const std::array<double, kFitParamCount>& theta) {
  std::vector<double> x(kFitParamCount);
  for (std::size_t i = 0; i < kFitParamCount; ++i) x[i] = kLogScale[i] ? std::log(theta[i]) : theta[i];
  return x;
}

std::array<double, kFitParamCount> from_search_space(const std::vector<double>& x) {
  std::array<double, kFitParamCount> theta{};
  for (std::size_t i = 0; i < kFitParamCount; ++i) theta[i] = kLogScale[i] ? std::exp(x[i]) : x[i];
  return theta;
}

BoxBounds search_box(const ParameterBounds& b) {
  BoxBounds box;
  box.lower.resize(kFitParamCount);
  box.upper.resize(kFitParamCount);
  for (std::size_t i = 0; i < kFitParamCount; ++i) {
    box.lower[i] = kLogScale[i] ? std::log(b.lower[i]) : b.lower[i];
    box.upper[i] = kLogScale[i] ? std::log(b.upper[i]) : b.upper[i];
  }
  return box;
}

}  // namespace

const std::array<const char*, kFitParamCount> kFitParamNames = {
    "k_i", "b_i", "k_w", "b_w", "alpha", "beta", "sigma_y", "zeta", "omega0"};

double rmse(std::span<const double> predicted, std::span<const double> measured) {
  require(predicted.size() == measured.size(), "rmse: series length mismatch");
  require(!predicted.empty(), "rmse: empty series");
  double acc = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double d = predicted[i] - measured[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(predicted.size()));
}

double fit_lambda(std::span<const double> zdot, std::span<const double> stress, double rho_m) {
  require(zdot.size() == stress.size(), "fit_lambda: series length mismatch");
  require(!zdot.empty(), "fit_lambda: empty series");
  require(std::isfinite(rho_m) && rho_m > 0.0, "fit_lambda: rho_m must be > 0");
  double sxx = 0.0;
  double sxf = 0.0;
  for (std::size_t i = 0; i < zdot.size(); ++i) {
    const double x = rho_m * zdot[i] * zdot[i];
    sxx += x * x;
    sxf += x * stress[i];
  }
  require(sxx > 0.0, "fit_lambda: degenerate regressor (all velocities zero)");
  return sxf / sxx;
}

AlphaBetaFit fit_alpha_beta(std::span<const double> depth, std::span<const double> stress,
                            double char_width) {
  require(depth.size() == stress.size(), "fit_alpha_beta: series length mismatch");
  require(depth.size() >= 2, "fit_alpha_beta: need at least two calibration points");
  require(std::isfinite(char_width) && char_width > 0.0, "fit_alpha_beta: H must be > 0");

  std::vector<double> x(depth.size());
  std::vector<double> y(depth.size());
  for (std::size_t i = 0; i < depth.size(); ++i) {
    require(std::isfinite(depth[i]) && depth[i] > 0.0, "fit_alpha_beta: depths must be > 0");
    require(std::isfinite(stress[i]) && stress[i] > 0.0,
            "fit_alpha_beta: steady stresses must be > 0");
    x[i] = std::log(depth[i] / char_width);
    y[i] = std::log(stress[i]);
  }
  const std::set<double> distinct(x.begin(), x.end());
  require(distinct.size() >= 2, "fit_alpha_beta: need at least two distinct depths");

  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }

  AlphaBetaFit fit;
  fit.beta = sxy / sxx;
  constexpr double kBetaFloor = 1e-6;
  if (fit.beta < kBetaFloor) {
    fit.beta = kBetaFloor;
    fit.beta_clamped = true;
  } else if (fit.beta > 1.0) {
    fit.beta = 1.0;
    fit.beta_clamped = true;
  }
  // Intercept refit for the (possibly clamped) slope.
  fit.alpha = std::exp(my - fit.beta * mx);
  return fit;
}

double fit_alpha_given_beta(double depth, double stress, double char_width, double beta) {
  require(std::isfinite(depth) && depth > 0.0, "fit_alpha_given_beta: depth must be > 0");
  require(std::isfinite(stress) && stress > 0.0, "fit_alpha_given_beta: stress must be > 0");
  require(std::isfinite(char_width) && char_width > 0.0, "fit_alpha_given_beta: H must be > 0");
  require(std::isfinite(beta) && beta > 0.0 && beta <= 1.0,
          "fit_alpha_given_beta: beta must lie in (0, 1]");
  return stress / std::pow(depth / char_width, beta);
}

std::array<double, kFitParamCount> fit_vector(const MudParameters& p) {
  return {p.k_i, p.b_i, p.k_w, p.b_w, p.alpha, p.beta, p.sigma_y, p.zeta, p.omega0};
}

MudParameters with_fit_vector(const MudParameters& base,
                              const std::array<double, kFitParamCount>& theta) {
  MudParameters p = base;
  p.k_i = theta[0];
  p.b_i = theta[1];
  p.k_w = theta[2];
  p.b_w = theta[3];
  p.alpha = theta[4];
  p.beta = theta[5];
  p.sigma_y = theta[6];
  p.zeta = theta[7];
  p.omega0 = theta[8];
  p.table_rmse = std::numeric_limits<double>::quiet_NaN();
  return p;
}

ParameterBounds ParameterBounds::defaults() {
  ParameterBounds b;
  //           k_i    b_i    k_w    b_w    alpha  beta  sigma_y zeta omega0
  b.lower = {1.0e4, 1.0e4, 1.0e4, 1.0e4, 1.0e3, 1e-3, 1.0e2, 0.05, 0.1};
  b.upper = {1.0e7, 1.0e7, 1.0e7, 1.0e7, 1.0e6, 1.0,  1.0e5, 2.0,  20.0};
  return b;
}

void ParameterBounds::validate() const {
  for (std::size_t i = 0; i < kFitParamCount; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
      throw std::invalid_argument(std::string("bounds: need finite lower < upper for ") +
                                  kFitParamNames[i]);
    }
  }
  require(lower[static_cast<std::size_t>(FitParam::sigma_y)] >= 0.0,
          "bounds: sigma_y lower bound must be >= 0");
  const auto beta_idx = static_cast<std::size_t>(FitParam::beta);
  require(lower[beta_idx] > 0.0 && upper[beta_idx] <= 1.0,
          "bounds: beta bounds must lie within (0, 1]");
  for (std::size_t i = 0; i < kFitParamCount; ++i) {
    if (kLogScale[i]) {
      require(lower[i] > 0.0, std::string("bounds: ") + kFitParamNames[i] + " must be > 0");
    }
  }
}

bool ParameterBounds::contains(const std::array<double, kFitParamCount>& theta) const {
  for (std::size_t i = 0; i < kFitParamCount; ++i) {
    if (theta[i] < lower[i] || theta[i] > upper[i]) return false;
  }
  return true;
}

namespace {

// Paper-unit key and scale per fit parameter, matching the parameter files.
struct BoundKey {
  const char* key;
  double to_si;
};
constexpr std::array<BoundKey, kFitParamCount> kBoundKeys = {{
    {"k_i_MPa_per_m", 1e6},
    {"b_i_MPa_s_per_m", 1e6},
    {"k_w_MPa_per_m", 1e6},
    {"b_w_MPa_s_per_m", 1e6},
    {"alpha_MPa", 1e6},
    {"beta", 1.0},
    {"sigma_y_kPa", 1e3},
    {"zeta", 1.0},
    {"omega0_rad_per_s", 1.0},
}};

}  // namespace

ParameterBounds bounds_from_json(const nlohmann::json& j) {
  ParameterBounds b = ParameterBounds::defaults();
  for (std::size_t i = 0; i < kFitParamCount; ++i) {
    const auto it = j.find(kBoundKeys[i].key);
    if (it == j.end()) continue;
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
      throw std::invalid_argument(std::string("bounds file: key '") + kBoundKeys[i].key +
                                  "' must be a [lower, upper] pair");
    }
    b.lower[i] = (*it)[0].get<double>() * kBoundKeys[i].to_si;
    b.upper[i] = (*it)[1].get<double>() * kBoundKeys[i].to_si;
  }
  b.validate();
  return b;
}

nlohmann::json bounds_to_json(const ParameterBounds& b) {
  nlohmann::json j;
  for (std::size_t i = 0; i < kFitParamCount; ++i) {
    j[kBoundKeys[i].key] = {b.lower[i] / kBoundKeys[i].to_si, b.upper[i] / kBoundKeys[i].to_si};
  }
  return j;
}

ParameterBounds load_bounds_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open bounds file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed bounds file " + path.string() + ": " + e.what());
  }
  return bounds_from_json(j);
}

void FitConfig::validate() const {
  bounds.validate();
  require(multi_start >= 1, "fit config: need at least one start");
  require(max_evals_per_start >= 10, "fit config: evaluation budget too small");
  require(std::isfinite(objective_tolerance) && objective_tolerance > 0.0,
          "fit config: objective tolerance must be > 0");
  if (initial_guess && !bounds.contains(*initial_guess)) {
    throw std::invalid_argument("fit config: initial guess outside bounds");
  }
}

bool FitResult::any_bound_hit() const {
  for (std::size_t i = 0; i < kFitParamCount; ++i) {
    if (at_lower[i] || at_upper[i]) return true;
  }
  return false;
}

nlohmann::json FitResult::fit_report(const ParameterBounds& bounds) const {
  nlohmann::json j;
  j["objective_rmse_N"] = objective;
  j["evaluations"] = evaluations;
  j["starts"] = starts;
  j["converged"] = converged;
  j["seed"] = seed;
  j["bounds"] = bounds_to_json(bounds);
  nlohmann::json hits = nlohmann::json::array();
  for (std::size_t i = 0; i < kFitParamCount; ++i) {
    if (at_lower[i]) hits.push_back(std::string(kFitParamNames[i]) + ":lower");
    if (at_upper[i]) hits.push_back(std::string(kFitParamNames[i]) + ":upper");
  }
  j["bounds_hit"] = hits;
  return j;
}

double evaluate_objective(std::span<const TrialRecord> trials, const IntruderGeometry& geometry,
                          const MudParameters& p) {
  double acc = 0.0;
  std::size_t count = 0;
  for (const auto& trial : trials) {
    const ForceTrace trace = simulate(p, geometry, trial.trajectory);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      const double d = trace.samples[i].force - trial.force[i];
      acc += d * d;
    }
    count += trace.size();
  }
  return std::sqrt(acc / static_cast<double>(count));
}

namespace {

void validate_trials(std::span<const TrialRecord> trials) {
  require(!trials.empty(), "fit: no trials");
  double labeled_w = std::numeric_limits<double>::quiet_NaN();
  bool any_motion = false;
  for (const auto& trial : trials) {
    trial.validate();
    require(trial.has_force(), "fit: trial has no measured force");
    if (std::isfinite(trial.meta.water_content)) {
      if (std::isfinite(labeled_w) && trial.meta.water_content != labeled_w) {
        throw std::invalid_argument("fit: conflicting water-content metadata across trials");
      }
      labeled_w = trial.meta.water_content;
    }
    for (double z : trial.trajectory.z_i) {
      if (z > 0.0) {
        any_motion = true;
        break;
      }
    }
  }
  if (!any_motion) {
    throw std::invalid_argument("fit: degenerate trials (intruder never enters the mud)");
  }
}

// Data-informed start: α, β seeded from the steady part of the longest hold
// phase, everything else at the bound center. Falls back to the plain
// center when no hold phase is present.
std::vector<double> informed_start(std::span<const TrialRecord> trials,
                                   const IntruderGeometry& geometry, const BoxBounds& box,
                                   const ParameterBounds& bounds) {
  std::vector<double> x = box.center();
  const TrialRecord& trial = trials.front();
  const auto& traj = trial.trajectory;

  std::size_t best_begin = 0, best_len = 0, run_begin = 0, run_len = 0;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const bool holding = std::abs(traj.zdot_i[i]) <= 1e-5 && traj.z_i[i] > 0.0;
    if (holding) {
      if (run_len == 0) run_begin = i;
      ++run_len;
      if (run_len > best_len) {
        best_len = run_len;
        best_begin = run_begin;
      }
    } else {
      run_len = 0;
    }
  }
  if (best_len < 10) return x;

  // Mean force and depth over the settled last 30% of the hold.
  const std::size_t tail_begin = best_begin + (best_len * 7) / 10;
  const std::size_t tail_end = best_begin + best_len;
  double f_ss = 0.0, depth = 0.0;
  for (std::size_t i = tail_begin; i < tail_end; ++i) {
    f_ss += trial.force[i];
    depth += traj.z_i[i];
  }
  const double n = static_cast<double>(tail_end - tail_begin);
  f_ss /= n;
  depth /= n;
  const double stress = f_ss / geometry.contact_area();
  if (!(stress > 0.0) || !(depth > 0.0)) return x;

  const auto beta_idx = static_cast<std::size_t>(FitParam::beta);
  const auto alpha_idx = static_cast<std::size_t>(FitParam::alpha);
  const double beta0 = std::clamp(0.5, bounds.lower[beta_idx], bounds.upper[beta_idx]);
  const double alpha0 = std::clamp(fit_alpha_given_beta(depth, stress, geometry.char_width, beta0),
                                   bounds.lower[alpha_idx], bounds.upper[alpha_idx]);
  x[beta_idx] = beta0;
  x[alpha_idx] = std::log(alpha0);
  return x;
}

}  // namespace

FitResult fit_parameters(std::span<const TrialRecord> trials, const IntruderGeometry& geometry,
                         const MudParameters& base, const FitConfig& config) {
  config.validate();
  geometry.validate();
  validate_trials(trials);

  const BoxBounds box = search_box(config.bounds);
  const std::vector<bool> log_mask(kLogScale.begin(), kLogScale.end());

  FitResult result;
  result.seed = config.seed;

  auto objective = [&](const std::vector<double>& x) {
    return evaluate_objective(trials, geometry, with_fit_vector(base, from_search_space(x)));
  };

  // Start list: explicit guess or bound center, then a data-informed seed,
  // then Latin-hypercube exploration.
  std::vector<std::vector<double>> starts;
  if (config.initial_guess) {
    starts.push_back(to_search_space(*config.initial_guess));
  } else {
    starts.push_back(box.center());
  }
  if (config.sustain_informed_start && static_cast<int>(starts.size()) < config.multi_start) {
    std::vector<double> seeded = informed_start(trials, geometry, box, config.bounds);
    if (seeded != starts.front()) starts.push_back(std::move(seeded));
  }
  const int remaining = config.multi_start - static_cast<int>(starts.size());
  if (remaining > 0) {
    ParameterBounds si = config.bounds;
    BoxBounds si_box;
    si_box.lower.assign(si.lower.begin(), si.lower.end());
    si_box.upper.assign(si.upper.begin(), si.upper.end());
    for (auto& sample : latin_hypercube(si_box, remaining, config.seed, log_mask)) {
      std::array<double, kFitParamCount> theta{};
      std::copy_n(sample.begin(), kFitParamCount, theta.begin());
      starts.push_back(to_search_space(theta));
    }
  }

  SimplexOptions nm;
  nm.max_evals = config.max_evals_per_start;
  nm.f_tol_abs = config.objective_tolerance;

  double best_f = std::numeric_limits<double>::infinity();
  double best_start_f = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  bool best_converged = false;

  auto absorb = [&](const SimplexResult& run) {
    for (const auto& [eval, f] : run.improvements) {
      if (f < best_f) result.improvements.emplace_back(result.evaluations + eval, f);
    }
    result.evaluations += run.evaluations;
    if (run.f < best_f) {
      best_f = run.f;
      best_x = run.x;
      best_converged = run.converged;
    }
  };

  for (const auto& start : starts) {
    best_start_f = std::min(best_start_f, objective(start));
    ++result.evaluations;
    SimplexResult run = nelder_mead(objective, start, box, nm);
    absorb(run);
    ++result.starts;
  }

  // Polish: restart a tight simplex at the incumbent to squeeze out the
  // final digits (plateaued dimensions keep their value).
  if (!best_x.empty()) {
    SimplexOptions polish = nm;
    polish.max_evals = std::max(200, config.max_evals_per_start / 2);
    polish.init_step_rel = 0.002;
    for (int round = 0; round < 2; ++round) {
      SimplexResult run = nelder_mead(objective, best_x, box, polish);
      absorb(run);
    }
  }

  if (!std::isfinite(best_f) ||
      (best_f >= best_start_f && best_f > 10.0 * config.objective_tolerance)) {
    throw std::runtime_error("fit: optimizer failed to improve on its starting points");
  }

  const auto theta = from_search_space(best_x);
  result.parameters = with_fit_vector(base, theta);
  result.objective = best_f;
  result.converged = best_converged;
  for (std::size_t i = 0; i < kFitParamCount; ++i) {
    const double margin = 1e-6 * box.range(i);
    result.at_lower[i] = best_x[i] <= box.lower[i] + margin;
    result.at_upper[i] = best_x[i] >= box.upper[i] - margin;
  }
  return result;
}

ErrorProfile error_profile(std::span<const TrialRecord> trials, const MudParameters& p,
                           const IntruderGeometry& geometry, int samples) {
  require(!trials.empty(), "error_profile: no trials");
  require(samples >= 2, "error_profile: need at least 2 axis samples");

  ErrorProfile profile;
  profile.axis.resize(samples);
  profile.mean.assign(samples, 0.0);
  profile.stddev.assign(samples, 0.0);
  for (int j = 0; j < samples; ++j) {
    profile.axis[j] = static_cast<double>(j) / static_cast<double>(samples - 1);
  }

  std::vector<std::vector<double>> resampled;
  resampled.reserve(trials.size());
  for (const auto& trial : trials) {
    trial.validate();
    require(trial.has_force(), "error_profile: trial has no measured force");
    const ForceTrace trace = simulate(p, geometry, trial.trajectory);
    const std::size_t n = trace.size();
    std::vector<double> err(samples);
    for (int j = 0; j < samples; ++j) {
      const double pos = profile.axis[j] * static_cast<double>(n - 1);
      const std::size_t lo = std::min(static_cast<std::size_t>(pos), n - 2);
      const double w = pos - static_cast<double>(lo);
      const double e_lo = trace.samples[lo].force - trial.force[lo];
      const double e_hi = trace.samples[lo + 1].force - trial.force[lo + 1];
      err[j] = (1.0 - w) * e_lo + w * e_hi;
    }
    resampled.push_back(std::move(err));
  }

  const double n_trials = static_cast<double>(resampled.size());
  for (int j = 0; j < samples; ++j) {
    double mean = 0.0;
    for (const auto& err : resampled) mean += err[j];
    mean /= n_trials;
    double var = 0.0;
    for (const auto& err : resampled) var += (err[j] - mean) * (err[j] - mean);
    profile.mean[j] = mean;
    profile.stddev[j] = std::sqrt(var / n_trials);
  }
  return profile;
}

}  // namespace mudsim
