// Acceptance suite. Runs every release criterion at its pinned tolerance,
// prints one PASS/FAIL line per criterion (with indented detail), and exits
// nonzero if any criterion fails. Usage:
//
//   acceptance_tests --presets <dir> --cli <binary> --work <scratch dir>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "mudsim/calibration.hpp"
#include "mudsim/csv.hpp"
#include "mudsim/dynamics.hpp"
#include "mudsim/filter.hpp"
#include "mudsim/parameters.hpp"
#include "mudsim/trajectory.hpp"
#include "support/reference.hpp"

namespace {

using namespace mudsim;
namespace fs = std::filesystem;

int g_criteria_failed = 0;

struct Criterion {
  int number;
  std::string title;
  bool ok = true;
  std::vector<std::string> notes;

  Criterion(int n, std::string t) : number(n), title(std::move(t)) {}

  void require(bool condition, const std::string& detail) {
    if (!condition) {
      ok = false;
      notes.push_back("FAILED: " + detail);
    }
  }

  void note(const std::string& detail) { notes.push_back(detail); }

  void finish() {
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << number << ": " << title << "\n";
    for (const auto& n : notes) std::cout << "        " << n << "\n";
    if (!ok) ++g_criteria_failed;
  }
};

std::string fmt(double v, int precision = 6) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

ProtocolSpec canonical_spec(double v = 0.01, double v_up = -1.0) {
  ProtocolSpec spec;
  spec.v_down = v;
  spec.depth = 0.05;
  spec.t_sustain = 6.0;
  spec.v_up = v_up > 0.0 ? v_up : v;
  spec.dt = 0.01;
  spec.z_end = -0.02;
  return spec;
}

Trajectory constant_velocity_intrusion(double v, double duration, double dt) {
  Trajectory traj;
  traj.dt = dt;
  const auto n = static_cast<std::size_t>(std::ceil(duration / dt));
  for (std::size_t k = 0; k <= n; ++k) {
    traj.t.push_back(static_cast<double>(k) * dt);
    traj.z_i.push_back(v * traj.t.back());
    traj.zdot_i.push_back(v);
  }
  return traj;
}

TrialRecord synthetic_trial(const MudParameters& p, const IntruderGeometry& g,
                            const ProtocolSpec& spec) {
  TrialRecord trial;
  trial.trajectory = generate_protocol(spec);
  const auto trace = simulate(p, g, trial.trajectory);
  for (const auto& s : trace.samples) trial.force.push_back(s.force);
  trial.meta.water_content = p.water_content;
  trial.meta.nominal_velocity = spec.v_down;
  return trial;
}

const std::vector<int> kPresetPercents{15, 20, 25, 30, 35};

// ---------------------------------------------------------------------------

void criterion_1_sustain_steady_state() {
  Criterion c(1, "sustain steady state matches alpha*(D/H)^beta*S within 0.5%");
  const IntruderGeometry g;
  const auto traj = generate_protocol(canonical_spec());
  for (int percent : kPresetPercents) {
    const auto p = preset_by_water_percent(percent);
    const auto start = std::chrono::steady_clock::now();
    const auto trace = simulate(p, g, traj);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const TraceSample* last_hold = nullptr;
    for (const auto& s : trace.samples) {
      if (s.zdot_i == 0.0 && s.z_i > 0.0) last_hold = &s;
    }
    c.require(last_hold != nullptr, "no sustain phase found");
    if (last_hold == nullptr) continue;
    const double expected = p.alpha * std::pow(0.05 / g.char_width, p.beta) * g.contact_area();
    const double rel = std::abs(last_hold->force - expected) / expected;
    c.require(rel <= 0.005, "W=" + std::to_string(percent) + "%: relative error " + fmt(rel));
    c.require(seconds < 1.0,
              "W=" + std::to_string(percent) + "%: runtime " + fmt(seconds) + " s >= 1 s");
    c.note("W=" + std::to_string(percent) + "%: rel err " + fmt(rel, 3) + ", sim " +
           fmt(seconds * 1e3, 3) + " ms");
  }
  c.finish();
}

void criterion_2_constant_velocity_lag() {
  Criterion c(2, "f_e1 lags toward b_i*v: 0.1% band entered after 5*tau, at tau*ln(1000)");
  const IntruderGeometry g;
  const double v = 0.01;
  const double dt = 0.01;
  for (int percent : kPresetPercents) {
    const auto p = preset_by_water_percent(percent);
    const double tau = p.relaxation_time(Regime::Intrusion);
    const auto trace = simulate(p, g, constant_velocity_intrusion(v, 12.0 * tau, dt));

    const double target = p.b_i * v;
    const double band = 1e-3;
    std::optional<double> entry;
    bool stayed_inside = true;
    for (const auto& s : trace.samples) {
      const double dev = std::abs(s.f_e1 - target) / target;
      if (!entry && dev <= band) entry = s.t;
      if (entry && s.t >= *entry && dev > band) stayed_inside = false;
    }
    const std::string tag = "W=" + std::to_string(percent) + "%: ";
    c.require(entry.has_value(), tag + "0.1% band never reached");
    if (!entry) continue;

    // The lag: convergence to within 0.1% completes only after 5*tau, at the
    // analytic settling time tau*ln(1000) ~ 6.91*tau.
    c.require(*entry > 5.0 * tau, tag + "band entered at " + fmt(*entry) + " s <= 5*tau");
    const double analytic_entry = tau * std::log(1000.0);
    c.require(std::abs(*entry - analytic_entry) <= 1.5 * dt,
              tag + "entry " + fmt(*entry) + " s vs analytic " + fmt(analytic_entry) + " s");
    c.require(stayed_inside, tag + "deviation left the band after entry");

    // Integrator exactness at the 5*tau mark: deviation equals e^{-t/tau}.
    const auto k5 = static_cast<std::size_t>(std::ceil(5.0 * tau / dt - 1e-9));
    const auto& s5 = trace.samples.at(k5);
    const double dev5 = std::abs(s5.f_e1 - target) / target;
    const double expected5 = std::exp(-s5.t / tau);
    c.require(std::abs(dev5 - expected5) <= 1e-9,
              tag + "deviation at 5*tau " + fmt(dev5) + " vs analytic " + fmt(expected5));
    c.note(tag + "band entry " + fmt(*entry, 4) + " s (analytic " + fmt(analytic_entry, 4) +
           " s), dev(5*tau) = " + fmt(dev5, 4) + " = e^-5");
  }
  c.finish();
}

void criterion_3_necking_filter() {
  Criterion c(3, "necking filter: discrete = closed form (1e-6), v(0+) exact, 2% settling, "
                 "zero net displacement");
  struct Case {
    std::string label;
    double zeta, omega0;
    bool table_row;
  };
  std::vector<Case> cases;
  for (int percent : kPresetPercents) {
    const auto p = preset_by_water_percent(percent);
    cases.push_back({"W=" + std::to_string(percent) + "%", p.zeta, p.omega0, true});
  }
  cases.push_back({"critically damped", 1.0, 2.23, false});
  cases.push_back({"overdamped", 1.5, 2.23, false});

  const double v0 = -0.005;
  for (const auto& k : cases) {
    NeckingFilter filter(k.zeta, k.omega0);
    filter.trigger(v0);

    // (ii) exact initial value.
    c.require(filter.velocity() == v0, k.label + ": v(0+) != v_m0 exactly");

    // (i) discrete stepping vs an independent fine RK4 integration.
    const double dt = 0.01;
    const double horizon = std::max(8.0, 30.0 / (k.zeta * k.omega0));
    const auto reference =
        testref::rk4_filter_velocity(k.zeta, k.omega0, v0, horizon, dt / 100.0, 100);
    NeckingFilter stepped(k.zeta, k.omega0);
    stepped.trigger(v0);
    double sup = 0.0;
    for (std::size_t i = 1; i < reference.size(); ++i) {
      stepped.advance(dt);
      sup = std::max(sup, std::abs(stepped.velocity() - reference[i]));
    }
    c.require(sup / std::abs(v0) <= 1e-6,
              k.label + ": discrete vs closed-form sup " + fmt(sup / std::abs(v0)));

    // (iii) the stated 2% bound beyond t = 4/(zeta*omega0); Table I rows only
    // (the criterion pins the textbook settling constant).
    if (k.table_row) {
      const double t_settle = 4.0 / (k.zeta * k.omega0);
      double worst = 0.0;
      for (double t = t_settle; t <= horizon; t += dt / 4.0) {
        worst = std::max(worst, std::abs(filter.velocity_at(t)) / std::abs(v0));
      }
      c.require(worst < 0.02, k.label + ": |zdot_m| reaches " + fmt(100.0 * worst, 4) +
                                  "% of |v_m0| at/after t = 4/(zeta*omega0) (closed-form value; "
                                  "the 2% rule ignores the 1/sqrt(1-zeta^2) amplification)");
    }

    // (iv) net post-necking displacement vanishes; closed form and quadrature.
    const double net = filter.displacement_at(horizon);
    const double quad =
        testref::simpson([&](double t) { return filter.velocity_at(t); }, 0.0, horizon, 400000);
    c.require(std::abs(net) < 1e-3 * std::abs(v0) / k.omega0,
              k.label + ": net displacement " + fmt(net));
    c.require(std::abs(quad - net) < 1e-9 * std::abs(v0) / k.omega0,
              k.label + ": quadrature disagrees with closed form");
  }
  c.finish();
}

void criterion_4_qualitative_profile() {
  Criterion c(4, "qualitative force profile: nonlinear rise, sustain decay, suction, "
                 "post-necking decay, positive hysteresis");
  const IntruderGeometry g;
  const auto traj = generate_protocol(canonical_spec());

  const auto necking_decay_ok = [&](const ForceTrace& trace, std::string* why) {
    const auto t_neck = trace.first_necking_time();
    if (!t_neck) {
      *why = "no necking in trace";
      return false;
    }
    // |F| collapses after necking: compare the end of the submerged
    // withdrawal with the force at the first filtered sample, and require a
    // decreasing envelope over 1-second windows.
    double f_neck = 0.0;
    const TraceSample* last_submerged = nullptr;
    std::map<long, double> window_max;
    for (const auto& s : trace.samples) {
      if (!s.necked) continue;
      if (f_neck == 0.0) f_neck = std::abs(s.force);
      if (s.z_i > 0.0) last_submerged = &s;
      if (s.z_i > 0.0) {
        const long window = std::lround(std::floor(s.t - *t_neck));
        window_max[window] = std::max(window_max[window], std::abs(s.force));
      }
    }
    if (last_submerged == nullptr || f_neck == 0.0) {
      *why = "no submerged post-necking samples";
      return false;
    }
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& [window, peak] : window_max) {
      if (peak > prev * 1.001) {
        *why = "post-necking |F| envelope grew in window " + std::to_string(window);
        return false;
      }
      prev = peak;
    }
    if (std::abs(last_submerged->force) > 0.05 * f_neck) {
      *why = "|F| retained " + fmt(100.0 * std::abs(last_submerged->force) / f_neck, 3) +
             "% of its necking value";
      return false;
    }
    return true;
  };

  for (int percent : kPresetPercents) {
    const auto p = preset_by_water_percent(percent);
    const auto trace = simulate(p, g, traj);
    const std::string tag = "W=" + std::to_string(percent) + "%: ";
    const auto at = [&](double t) { return static_cast<std::size_t>(std::llround(t / 0.01)); };

    // (a) monotone nonlinear rise over the intrusion phase.
    bool monotone = true;
    for (std::size_t k = at(0.0) + 2; k <= at(5.0); ++k) {
      if (trace.samples[k].force < trace.samples[k - 1].force * (1.0 - 1e-12) - 1e-12) {
        monotone = false;
      }
    }
    c.require(monotone, tag + "intrusion force not monotone");
    const double f0 = trace.samples[at(0.0) + 1].force;
    const double f1 = trace.samples[at(5.0)].force;
    double chord_dev = 0.0;
    for (std::size_t k = at(0.0) + 1; k <= at(5.0); ++k) {
      const double w = (trace.samples[k].z_i - trace.samples[at(0.0) + 1].z_i) /
                       (trace.samples[at(5.0)].z_i - trace.samples[at(0.0) + 1].z_i);
      const double chord = f0 + w * (f1 - f0);
      chord_dev = std::max(chord_dev, std::abs(trace.samples[k].force - chord));
    }
    c.require(chord_dev >= 0.02 * (f1 - f0),
              tag + "intrusion force-depth curve is essentially linear");

    // (b) monotone decay through the sustain phase.
    bool decays = true;
    for (std::size_t k = at(5.0) + 1; k < at(11.0); ++k) {
      if (trace.samples[k].force > trace.samples[k - 1].force * (1.0 + 1e-12) + 1e-12) {
        decays = false;
      }
    }
    c.require(decays, tag + "sustain force not monotonically decaying");

    // (c) zero crossing then a negative minimum during withdrawal.
    bool crossed = false;
    double min_withdrawal = 0.0;
    for (std::size_t k = at(11.0); k < trace.size(); ++k) {
      if (trace.samples[k].force <= 0.0) crossed = true;
      min_withdrawal = std::min(min_withdrawal, trace.samples[k].force);
    }
    c.require(crossed && min_withdrawal < 0.0, tag + "no suction during withdrawal");

    // (d) post-necking decay of |F| toward zero. The model predicts no
    // necking for W=15% at the canonical 0.01 m/s (b_w*v + drag = 13.5 kPa
    // stays below sigma_y = 17 kPa), so that preset is verified on a faster
    // withdrawal where the switch can fire.
    const double peak_withdrawal_stress =
        p.b_w * 0.01 + p.lambda_drag * p.rho_m * 0.01 * 0.01;
    std::string why;
    if (peak_withdrawal_stress > p.sigma_y) {
      c.require(necking_decay_ok(trace, &why), tag + why);
    } else {
      c.require(!trace.first_necking_time().has_value(),
                tag + "necking observed although the withdrawal stress cannot reach sigma_y");
      double max_w = 0.0;
      for (const auto& s : trace.samples) {
        if (s.regime == Regime::Withdrawal) max_w = std::max(max_w, std::abs(s.f_total));
      }
      c.require(max_w < p.sigma_y, tag + "withdrawal stress exceeded sigma_y without necking");
      c.note(tag + "canonical withdrawal peaks at " + fmt(max_w / 1e3, 3) + " kPa < sigma_y = " +
             fmt(p.sigma_y / 1e3, 3) + " kPa; no necking at 0.01 m/s (model-consistent); "
             "necking decay verified at v_up = 0.02 m/s");
      const auto fast = simulate(p, g, generate_protocol(canonical_spec(0.01, 0.02)));
      c.require(necking_decay_ok(fast, &why), tag + "(v_up = 0.02 m/s) " + why);
    }

    // (e) positive hysteresis loop area.
    double area = 0.0;
    for (std::size_t k = 1; k < trace.size(); ++k) {
      area += 0.5 * (trace.samples[k].force + trace.samples[k - 1].force) *
              (trace.samples[k].z_i - trace.samples[k - 1].z_i);
    }
    c.require(area > 0.0, tag + "hysteresis loop area " + fmt(area) + " <= 0");
  }
  c.finish();
}

void criterion_5_yield_switch_ordering() {
  Criterion c(5, "necking only in withdrawal, only after |f_w| first exceeds sigma_y, "
                 "with at most one step of overshoot");
  const IntruderGeometry g;
  const auto p = preset_by_water_percent(25);
  const auto trace = simulate(p, g, generate_protocol(canonical_spec()));

  std::size_t first_filtered = trace.size();
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (trace.samples[k].necked) {
      first_filtered = k;
      break;
    }
  }
  c.require(first_filtered < trace.size(), "necking never happened for W=25%");
  if (first_filtered < trace.size()) {
    const std::size_t crossing = first_filtered - 1;
    c.require(trace.samples[crossing].regime == Regime::Withdrawal,
              "latch engaged outside withdrawal");
    c.require(std::abs(trace.samples[crossing].f_total) > p.sigma_y,
              "latch engaged before |f_w| exceeded sigma_y");

    double pre_crossing_max = 0.0;
    for (std::size_t k = 0; k < crossing; ++k) {
      if (trace.samples[k].regime == Regime::Withdrawal) {
        pre_crossing_max = std::max(pre_crossing_max, std::abs(trace.samples[k].f_total));
      }
      c.require(!trace.samples[k].necked, "filter active before the yield crossing");
    }
    c.require(pre_crossing_max <= p.sigma_y,
              "pre-necking withdrawal stress " + fmt(pre_crossing_max) + " Pa beyond sigma_y");

    const double step_growth = std::abs(trace.samples[crossing].f_total) -
                               std::abs(trace.samples[crossing - 1].f_total);
    const double overshoot = std::abs(trace.samples[crossing].f_total) - p.sigma_y;
    c.require(overshoot <= step_growth * (1.0 + 1e-9) + 1e-12,
              "overshoot " + fmt(overshoot) + " Pa exceeds one step of growth " +
                  fmt(step_growth) + " Pa");
    c.note("crossing at t = " + fmt(trace.samples[crossing].t, 4) + " s, overshoot " +
           fmt(overshoot, 4) + " Pa within the " + fmt(step_growth, 4) + " Pa step");
  }
  c.finish();
}

void criterion_6_calibration_round_trip() {
  Criterion c(6, "calibration round-trip: noiseless within 2% and RMSE < 1e-6 N; "
                 "0.5 N noise within 10% and RMSE <= 0.6 N for >= 90% of 20 seeds");
  const auto t_begin = std::chrono::steady_clock::now();
  const IntruderGeometry g;
  const auto truth = preset_by_water_percent(25);
  const auto truth_vec = fit_vector(truth);

  // Noiseless identification.
  {
    const std::vector<TrialRecord> trials{synthetic_trial(truth, g, canonical_spec())};
    FitConfig config;
    config.multi_start = 6;
    config.max_evals_per_start = 9000;
    config.objective_tolerance = 1e-10;
    config.seed = 20240601;
    const FitResult fit = fit_parameters(trials, g, truth, config);
    c.require(fit.objective < 1e-6,
              "noiseless RMSE " + fmt(fit.objective) + " N >= 1e-6 N");
    const auto fitted = fit_vector(fit.parameters);
    for (std::size_t i = 0; i < kFitParamCount; ++i) {
      const double rel = std::abs(fitted[i] - truth_vec[i]) / truth_vec[i];
      c.require(rel <= 0.02, std::string("noiseless ") + kFitParamNames[i] +
                                 " off by " + fmt(100.0 * rel, 3) + "%");
    }
    c.note("noiseless: RMSE " + fmt(fit.objective, 3) + " N after " +
           std::to_string(fit.evaluations) + " evaluations");
  }

  // Noisy Monte-Carlo round trips.
  {
    const TrialRecord clean = synthetic_trial(truth, g, canonical_spec());
    int successes = 0;
    double worst_rmse = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      TrialRecord noisy = clean;
      testref::GaussianNoise noise(seed);
      for (auto& f : noisy.force) f += noise.next(0.5);

      FitConfig config;
      config.multi_start = 3;
      config.max_evals_per_start = 3000;
      config.objective_tolerance = 1e-8;
      config.seed = seed;
      const std::vector<TrialRecord> trials{noisy};
      const FitResult fit = fit_parameters(trials, g, truth, config);

      bool good = fit.objective <= 0.6;
      worst_rmse = std::max(worst_rmse, fit.objective);
      const auto fitted = fit_vector(fit.parameters);
      for (std::size_t i = 0; i < kFitParamCount; ++i) {
        if (std::abs(fitted[i] - truth_vec[i]) / truth_vec[i] > 0.10) good = false;
      }
      if (good) ++successes;
    }
    c.require(successes >= 18, "only " + std::to_string(successes) + "/20 noisy seeds recovered");
    c.note("noisy: " + std::to_string(successes) + "/20 seeds within 10% and RMSE <= 0.6 N "
           "(worst RMSE " + fmt(worst_rmse, 3) + " N)");
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  c.require(seconds < 120.0, "calibration runtime " + fmt(seconds) + " s >= 120 s");
  c.note("total runtime " + fmt(seconds, 3) + " s");
  c.finish();
}

void criterion_7_lambda_round_trip() {
  Criterion c(7, "lambda regression returns 0.013 within 1e-12 on noiseless sliding data");
  const double rho = 1840.0;
  std::vector<double> zdot, stress;
  for (int rep = 0; rep < 3; ++rep) {
    for (int i = 1; i <= 8; ++i) {
      const double v = 0.025 * i;
      zdot.push_back(v);
      stress.push_back(0.013 * rho * v * v);
    }
  }
  const double lambda = fit_lambda(zdot, stress, rho);
  c.require(std::abs(lambda - 0.013) <= 1e-12,
            "recovered " + fmt(lambda, 17) + ", error " + fmt(std::abs(lambda - 0.013)));
  c.note("recovered lambda = " + fmt(lambda, 12));
  c.finish();
}

void criterion_8_alpha_beta_round_trip() {
  Criterion c(8, "alpha/beta regression recovers every table row to machine precision");
  const double H = 0.038;
  for (int percent : kPresetPercents) {
    const auto p = preset_by_water_percent(percent);
    std::vector<double> depth, stress;
    for (double d : {0.008, 0.015, 0.025, 0.04, 0.06, 0.08}) {
      depth.push_back(d);
      stress.push_back(p.alpha * std::pow(d / H, p.beta));
    }
    const auto fit = fit_alpha_beta(depth, stress, H);
    const double alpha_rel = std::abs(fit.alpha - p.alpha) / p.alpha;
    const double beta_rel = std::abs(fit.beta - p.beta) / p.beta;
    c.require(alpha_rel <= 1e-12 && beta_rel <= 1e-12 && !fit.beta_clamped,
              "W=" + std::to_string(percent) + "%: alpha rel " + fmt(alpha_rel) + ", beta rel " +
                  fmt(beta_rel));
  }
  c.finish();
}

void criterion_9_integrator_oracle() {
  Criterion c(9, "brute-force explicit stepping at dt = 1e-5 s matches the exact integrator "
                 "within 1% of peak force");
  const IntruderGeometry g;
  const auto p = preset_by_water_percent(25);
  const auto coarse = simulate(p, g, generate_protocol(canonical_spec()));

  auto fine_spec = canonical_spec();
  fine_spec.dt = 1e-5;
  const auto fine = testref::explicit_euler_simulate(p, g, generate_protocol(fine_spec));

  const double peak = coarse.max_force();
  const std::size_t stride = 1000;  // 1e-5 s -> 0.01 s
  double sup = 0.0;
  for (std::size_t k = 0; k < coarse.size(); ++k) {
    const std::size_t j = k * stride;
    if (j >= fine.force.size()) break;
    sup = std::max(sup, std::abs(coarse.samples[k].force - fine.force[j]));
  }
  c.require(sup <= 0.01 * peak,
            "sup deviation " + fmt(sup) + " N > 1% of peak " + fmt(peak) + " N");
  c.note("sup deviation " + fmt(sup, 4) + " N = " + fmt(100.0 * sup / peak, 3) + "% of peak");
  c.finish();
}

void criterion_10_table_ingestion(const fs::path& preset_dir) {
  Criterion c(10, "shipped presets re-emit every table cell exactly as printed");
  const std::map<int, std::vector<std::string>> expected = {
      {15, {"15%", "1.21", "0.24", "1.48", "1.35", "0.17", "0.56", "17", "0.47", "4.09", "2.57"}},
      {20, {"20%", "0.70", "0.16", "1.71", "1.56", "0.12", "0.49", "14", "0.31", "3.45", "1.52"}},
      {25, {"25%", "0.26", "0.29", "1.21", "1.35", "0.04", "0.54", "6", "0.49", "2.23", "0.84"}},
      {30, {"30%", "0.11", "0.06", "1.27", "1.40", "0.01", "0.46", "2", "0.36", "1.44", "0.36"}},
      {35, {"35%", "0.28", "0.07", "1.16", "1.36", "0.01", "0.38", "2", "0.81", "2.21", "0.32"}},
  };
  for (const auto& [percent, cells] : expected) {
    const fs::path file = preset_dir / ("w" + std::to_string(percent) + ".json");
    if (!fs::exists(file)) {
      c.require(false, file.string() + " missing");
      continue;
    }
    const ParameterSet set = load_parameter_file(file);
    const PaperUnitsRow row = paper_units_row(set.mud);
    const std::vector<std::string> emitted{row.water, row.k_i,    row.b_i,  row.k_w,
                                           row.b_w,   row.alpha,  row.beta, row.sigma_y,
                                           row.zeta,  row.omega0, row.rmse};
    for (std::size_t i = 0; i < cells.size(); ++i) {
      c.require(emitted[i] == cells[i], file.filename().string() + ": cell " +
                                            std::to_string(i) + " emitted '" + emitted[i] +
                                            "', printed table has '" + cells[i] + "'");
    }
    // The file must also agree with the built-in preset in SI.
    const auto& builtin = preset_by_water_percent(percent);
    c.require(std::abs(set.mud.k_i - builtin.k_i) <= 1e-9 * builtin.k_i &&
                  std::abs(set.mud.sigma_y - builtin.sigma_y) <= 1e-9 * builtin.sigma_y,
              file.filename().string() + ": disagrees with the built-in preset");
  }
  c.finish();
}

struct CliRunner {
  fs::path cli;
  fs::path work;

  int run(const std::string& args, const std::string& log_name) const {
    const fs::path log = work / log_name;
    const std::string command =
        cli.string() + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(command.c_str());
    return WEXITSTATUS(status);
  }
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void criterion_11_cli_determinism(const fs::path& cli, const fs::path& work) {
  Criterion c(11, "every CLI command emits byte-identical outputs across repeated runs");
  fs::create_directories(work);
  const CliRunner runner{cli, work};

  // A deterministic synthetic trial to calibrate/evaluate against.
  const IntruderGeometry g;
  const auto p = preset_by_water_percent(25);
  const fs::path trial_csv = work / "trial.csv";
  save_trial(trial_csv, synthetic_trial(p, g, canonical_spec()));

  struct Job {
    std::string name;
    std::string args;  // with OUT placeholders
    std::vector<std::string> outputs;
  };
  const std::vector<Job> jobs = {
      {"protocol-gen",
       "protocol-gen --out WORK/proto_RUN.csv --water 0.25 --velocity 0.01 --trial-id d1",
       {"proto_RUN.csv"}},
      {"simulate",
       "simulate --preset 25 --trial WORK/trial.csv --smooth 1 --normalized "
       "--out WORK/trace_RUN.csv --svg WORK/chart_RUN.svg",
       {"trace_RUN.csv", "chart_RUN.svg"}},
      {"evaluate",
       "evaluate --preset 25 --trial WORK/trial.csv --smooth 1 "
       "--profile-out WORK/profile_RUN.csv --rmse-out WORK/rmse_RUN.csv",
       {"profile_RUN.csv", "rmse_RUN.csv"}},
      {"calibrate",
       "--seed 11 calibrate --preset 25 --trial WORK/trial.csv --smooth 1 --starts 2 "
       "--max-evals 400 --out WORK/fit_RUN.json",
       {"fit_RUN.json"}},
      {"sweep",
       "--units paper sweep --axis water --metrics sigma_y,sustain_force,suction_min "
       "--out WORK/sweep_RUN.csv",
       {"sweep_RUN.csv"}},
  };

  auto substitute = [&](std::string text, const std::string& run) {
    for (std::string::size_type pos; (pos = text.find("WORK")) != std::string::npos;) {
      text.replace(pos, 4, work.string());
    }
    for (std::string::size_type pos; (pos = text.find("RUN")) != std::string::npos;) {
      text.replace(pos, 3, run);
    }
    return text;
  };

  for (const auto& job : jobs) {
    const int code1 = runner.run(substitute(job.args, "a"), job.name + "_a.log");
    const int code2 = runner.run(substitute(job.args, "b"), job.name + "_b.log");
    c.require(code1 == 0 && code2 == 0,
              job.name + ": exit codes " + std::to_string(code1) + "/" + std::to_string(code2));
    c.require(slurp(work / (job.name + "_a.log")) == slurp(work / (job.name + "_b.log")),
              job.name + ": stdout differs between runs");
    for (const auto& out : job.outputs) {
      const fs::path a = work / substitute(out, "a");
      const fs::path b = work / substitute(out, "b");
      const std::string bytes_a = slurp(a);
      c.require(!bytes_a.empty() && bytes_a == slurp(b),
                job.name + ": " + out + " differs between runs (or is empty)");
    }
  }

  // Validation failures exit nonzero without writing output.
  const int bad = runner.run("simulate --preset 25 --depth -1 --out " +
                                 (work / "bad.csv").string(),
                             "bad.log");
  c.require(bad == 1, "invalid protocol exited with " + std::to_string(bad) + ", expected 1");
  const int bad_metric = runner.run(
      "sweep --axis water --metrics not_a_metric --out " + (work / "bad2.csv").string(),
      "bad2.log");
  c.require(bad_metric == 1,
            "unknown metric exited with " + std::to_string(bad_metric) + ", expected 1");
  c.finish();
}

}  // namespace

int main(int argc, char** argv) {
  fs::path preset_dir, cli_path, work_dir;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--presets") preset_dir = argv[i + 1];
    else if (flag == "--cli") cli_path = argv[i + 1];
    else if (flag == "--work") work_dir = argv[i + 1];
  }
  if (preset_dir.empty() || cli_path.empty() || work_dir.empty()) {
    std::cerr << "usage: acceptance_tests --presets <dir> --cli <binary> --work <dir>\n";
    return 2;
  }

  criterion_1_sustain_steady_state();
  criterion_2_constant_velocity_lag();
  criterion_3_necking_filter();
  criterion_4_qualitative_profile();
  criterion_5_yield_switch_ordering();
  criterion_6_calibration_round_trip();
  criterion_7_lambda_round_trip();
  criterion_8_alpha_beta_round_trip();
  criterion_9_integrator_oracle();
  criterion_10_table_ingestion(preset_dir);
  criterion_11_cli_determinism(cli_path, work_dir);

  if (g_criteria_failed == 0) {
    std::cout << "all criteria passed\n";
    return 0;
  }
  std::cout << g_criteria_failed << " criteria failed\n";
  return 1;
}
