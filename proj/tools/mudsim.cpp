// Command-line front end: simulate intrusion trials, identify model
// parameters from recordings, evaluate prediction errors and run dependency
// sweeps. All outputs are plain CSV/JSON and byte-stable across runs.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mudsim/calibration.hpp"
#include "mudsim/csv.hpp"
#include "mudsim/dynamics.hpp"
#include "mudsim/parameters.hpp"
#include "mudsim/trajectory.hpp"
#include "svg.hpp"

namespace {

using namespace mudsim;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;

struct GlobalOptions {
  std::string units = "SI";
  double dt = 0.01;
  std::uint64_t seed = 0;

  bool paper_units() const { return units == "paper"; }
};

struct ProtocolFlags {
  double v_down = 0.01;
  double depth = 0.05;
  double t_sustain = 6.0;
  double v_up = 0.01;
  double z_end = -0.02;

  ProtocolSpec spec(double dt) const {
    ProtocolSpec s;
    s.v_down = v_down;
    s.depth = depth;
    s.t_sustain = t_sustain;
    s.v_up = v_up;
    s.z_end = z_end;
    s.dt = dt;
    return s;
  }
};

void add_protocol_flags(CLI::App* cmd, ProtocolFlags& flags) {
  cmd->add_option("--v-down", flags.v_down, "intrusion velocity, m/s");
  cmd->add_option("--depth", flags.depth, "intrusion depth, m");
  cmd->add_option("--t-sustain", flags.t_sustain, "hold duration, s");
  cmd->add_option("--v-up", flags.v_up, "withdrawal velocity, m/s");
  cmd->add_option("--z-end", flags.z_end, "final depth (<= 0), m");
}

struct ParamSource {
  std::string params_file;
  int preset_percent = 0;

  ParameterSet resolve() const {
    if (!params_file.empty()) return load_parameter_file(params_file);
    if (preset_percent != 0) {
      return ParameterSet{preset_by_water_percent(preset_percent), IntruderGeometry{}};
    }
    throw std::invalid_argument("specify --params <file> or --preset <percent>");
  }
};

void add_param_source(CLI::App* cmd, ParamSource& src) {
  cmd->add_option("--params", src.params_file, "parameter file (JSON)");
  cmd->add_option("--preset", src.preset_percent,
                  "built-in water-content preset, percent (15/20/25/30/35)");
}

std::optional<double> steady_sustain_force(const ForceTrace& trace) {
  const TraceSample* last_hold = nullptr;
  for (const auto& s : trace.samples) {
    if (std::abs(s.zdot_i) <= 1e-6 && s.z_i > 0.0) last_hold = &s;
  }
  if (last_hold == nullptr) return std::nullopt;
  return last_hold->force;
}

void print_trace_summary(const ForceTrace& trace) {
  std::cout << "samples: " << trace.size() << "\n";
  std::cout << "peak_intrusion_force_N: " << csv::format_double(trace.max_force()) << "\n";
  std::cout << "suction_min_N: " << csv::format_double(trace.min_force()) << "\n";
  const auto sustain = steady_sustain_force(trace);
  std::cout << "steady_sustain_force_N: "
            << (sustain ? csv::format_double(*sustain) : std::string("n/a")) << "\n";
  const auto neck = trace.first_necking_time();
  std::cout << "necking_time_s: " << (neck ? csv::format_double(*neck) : std::string("none"))
            << "\n";
}

int cmd_simulate(const GlobalOptions& global, const ParamSource& source,
                 const std::string& trial_file, int smooth, const ProtocolFlags& protocol,
                 const std::string& out_path, bool normalized, const std::string& svg_path,
                 double deadband) {
  const ParameterSet set = source.resolve();
  Trajectory traj;
  if (!trial_file.empty()) {
    traj = load_trial(trial_file, smooth).trajectory;
  } else {
    traj = generate_protocol(protocol.spec(global.dt));
  }
  SimOptions options;
  options.velocity_deadband = deadband;
  ForceTrace trace = simulate(set.mud, set.geometry, traj, options);

  if (normalized) {
    double scale = 0.0;
    for (const auto& s : trace.samples) scale = std::max(scale, std::abs(s.force));
    if (scale > 0.0) {
      for (auto& s : trace.samples) s.force /= scale;
    }
  }
  save_force_trace(out_path, trace);
  print_trace_summary(trace);

  if (!svg_path.empty()) {
    svg::Series force;
    force.label = normalized ? "F / max|F|" : "F [N]";
    for (const auto& s : trace.samples) {
      force.x.push_back(s.t);
      force.y.push_back(s.force);
    }
    svg::write_line_chart(svg_path, "mud reaction force", "t [s]", force.label, {force});
  }
  return kExitOk;
}

int cmd_protocol_gen(const GlobalOptions& global, const ProtocolFlags& protocol,
                     const std::string& out_path, double water, double velocity,
                     const std::string& trial_id) {
  const Trajectory traj = generate_protocol(protocol.spec(global.dt));
  TrialMetadata meta;
  meta.water_content = water;
  meta.nominal_velocity = velocity;
  meta.trial_id = trial_id;
  save_trajectory(out_path, traj, meta.any() ? &meta : nullptr);
  std::cout << "samples: " << traj.size() << "\n";
  std::cout << "duration_s: " << csv::format_double(traj.duration()) << "\n";
  return kExitOk;
}

MudParameters calibrate_base(const ParamSource& source, const std::vector<TrialRecord>& trials) {
  if (!source.params_file.empty() || source.preset_percent != 0) return source.resolve().mud;
  // Fall back to the separately calibrated drag constants; the fitted
  // parameters are overwritten by the optimizer anyway.
  MudParameters base = preset_by_water_percent(25);
  for (const auto& t : trials) {
    if (std::isfinite(t.meta.water_content)) {
      base.water_content = t.meta.water_content;
      break;
    }
  }
  return base;
}

int cmd_calibrate(const GlobalOptions& global, const ParamSource& source,
                  const std::vector<std::string>& trial_files, int smooth,
                  const std::string& bounds_file, int starts, int max_evals, double tolerance,
                  const std::string& out_path) {
  std::vector<TrialRecord> trials;
  trials.reserve(trial_files.size());
  for (const auto& file : trial_files) trials.push_back(load_trial(file, smooth));

  FitConfig config;
  if (!bounds_file.empty()) config.bounds = load_bounds_file(bounds_file);
  config.multi_start = starts;
  config.max_evals_per_start = max_evals;
  config.objective_tolerance = tolerance;
  config.seed = global.seed;

  ParameterSet out_set;
  out_set.geometry = source.params_file.empty() ? IntruderGeometry{}
                                                : load_parameter_file(source.params_file).geometry;
  const MudParameters base = calibrate_base(source, trials);
  const FitResult result = fit_parameters(trials, out_set.geometry, base, config);

  out_set.mud = result.parameters;
  save_parameter_file(out_path, out_set, result.fit_report(config.bounds));

  std::cout << "rmse_N: " << csv::format_double(result.objective) << "\n";
  std::cout << "evaluations: " << result.evaluations << "\n";
  std::cout << "converged: " << (result.converged ? "yes" : "no") << "\n";
  std::cout << "bounds_hit: " << (result.any_bound_hit() ? "yes" : "no") << "\n";
  if (global.paper_units()) {
    std::cout << paper_units_table({result.parameters});
  }
  return kExitOk;
}

int cmd_evaluate(const ParamSource& source, const std::vector<std::string>& trial_files,
                 int smooth, int profile_samples, const std::string& profile_out,
                 const std::string& rmse_out) {
  const ParameterSet set = source.resolve();
  std::vector<TrialRecord> trials;
  for (const auto& file : trial_files) {
    trials.push_back(load_trial(file, smooth));
    if (!trials.back().has_force()) {
      throw std::invalid_argument(file + ": missing force column, cannot evaluate");
    }
  }

  std::vector<std::pair<std::string, double>> per_trial;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const ForceTrace trace = simulate(set.mud, set.geometry, trials[i].trajectory);
    std::vector<double> predicted;
    predicted.reserve(trace.size());
    for (const auto& s : trace.samples) predicted.push_back(s.force);
    const std::string label =
        trials[i].meta.trial_id.empty() ? trial_files[i] : trials[i].meta.trial_id;
    per_trial.emplace_back(label, rmse(predicted, trials[i].force));
  }

  const ErrorProfile profile = error_profile(trials, set.mud, set.geometry, profile_samples);
  {
    std::ofstream out(profile_out);
    if (!out) throw std::invalid_argument("cannot write profile file: " + profile_out);
    out << "u,mean_error_N,std_error_N\n";
    for (std::size_t j = 0; j < profile.axis.size(); ++j) {
      out << csv::format_double(profile.axis[j]) << ',' << csv::format_double(profile.mean[j])
          << ',' << csv::format_double(profile.stddev[j]) << "\n";
    }
  }
  if (!rmse_out.empty()) {
    std::ofstream out(rmse_out);
    if (!out) throw std::invalid_argument("cannot write RMSE file: " + rmse_out);
    out << "trial,rmse_N\n";
    for (const auto& [label, value] : per_trial) {
      out << label << ',' << csv::format_double(value) << "\n";
    }
  }
  for (const auto& [label, value] : per_trial) {
    std::cout << "rmse_N " << label << ": " << csv::format_double(value) << "\n";
  }
  return kExitOk;
}

double parameter_metric(const MudParameters& p, const std::string& metric, bool paper) {
  if (metric == "k_i") return paper ? p.k_i / 1e6 : p.k_i;
  if (metric == "b_i") return paper ? p.b_i / 1e6 : p.b_i;
  if (metric == "k_w") return paper ? p.k_w / 1e6 : p.k_w;
  if (metric == "b_w") return paper ? p.b_w / 1e6 : p.b_w;
  if (metric == "alpha") return paper ? p.alpha / 1e6 : p.alpha;
  if (metric == "beta") return p.beta;
  if (metric == "sigma_y") return paper ? p.sigma_y / 1e3 : p.sigma_y;
  if (metric == "zeta") return p.zeta;
  if (metric == "omega0") return p.omega0;
  throw std::invalid_argument("unknown metric: " + metric);
}

int cmd_sweep(const GlobalOptions& global, const std::string& axis,
              std::vector<int> preset_percents, const std::vector<double>& velocities,
              const ParamSource& fixed_source, const ProtocolFlags& protocol,
              const std::vector<std::string>& metrics, const std::string& out_path) {
  if (metrics.empty()) throw std::invalid_argument("sweep: no metrics selected");

  const auto trace_metric = [&](const ForceTrace& trace, const std::string& metric,
                                bool& known) -> double {
    known = true;
    if (metric == "peak_force") return trace.max_force();
    if (metric == "suction_min") return trace.min_force();
    if (metric == "sustain_force") {
      const auto v = steady_sustain_force(trace);
      return v ? *v : std::numeric_limits<double>::quiet_NaN();
    }
    if (metric == "necking_time") {
      const auto t = trace.first_necking_time();
      return t ? *t : std::numeric_limits<double>::quiet_NaN();
    }
    known = false;
    return 0.0;
  };

  std::ofstream out(out_path);
  if (!out) throw std::invalid_argument("cannot write sweep file: " + out_path);
  out << "axis,metric,value\n";

  if (axis == "water") {
    if (preset_percents.empty()) preset_percents = {15, 20, 25, 30, 35};
    for (int percent : preset_percents) {
      const MudParameters p = preset_by_water_percent(percent);
      const IntruderGeometry g;
      const ForceTrace trace = simulate(p, g, generate_protocol(protocol.spec(global.dt)));
      for (const auto& metric : metrics) {
        bool known = false;
        double value = trace_metric(trace, metric, known);
        if (!known) value = parameter_metric(p, metric, global.paper_units());
        out << percent << ',' << metric << ',' << csv::format_double(value) << "\n";
      }
    }
  } else if (axis == "velocity") {
    if (velocities.empty()) throw std::invalid_argument("sweep: --velocities required");
    const ParameterSet set = fixed_source.resolve();
    for (double v : velocities) {
      ProtocolFlags moved = protocol;
      moved.v_down = v;
      moved.v_up = v;
      const ForceTrace trace =
          simulate(set.mud, set.geometry, generate_protocol(moved.spec(global.dt)));
      for (const auto& metric : metrics) {
        bool known = false;
        const double value = trace_metric(trace, metric, known);
        if (!known) throw std::invalid_argument("unknown metric for velocity axis: " + metric);
        out << csv::format_double(v) << ',' << metric << ',' << csv::format_double(value) << "\n";
      }
    }
  } else {
    throw std::invalid_argument("sweep: axis must be 'water' or 'velocity'");
  }
  std::cout << "wrote " << out_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-order visco-elasto-plastic foot-mud interaction simulator"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions global;
  app.add_option("--units", global.units, "output units for parameters (SI or paper)")
      ->check(CLI::IsMember({"SI", "paper"}));
  app.add_option("--dt", global.dt, "protocol sample period, s");
  app.add_option("--seed", global.seed, "random seed for the calibration multi-start");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run the force model over a protocol or trial");
  ParamSource sim_source;
  add_param_source(sim, sim_source);
  ProtocolFlags sim_protocol;
  add_protocol_flags(sim, sim_protocol);
  std::string sim_trial, sim_out, sim_svg;
  int sim_smooth = 5;
  bool sim_normalized = false;
  double sim_deadband = 0.0;
  sim->add_option("--trial", sim_trial, "trial CSV to drive the simulation");
  sim->add_option("--smooth", sim_smooth, "velocity smoothing window for trial input (odd)");
  sim->add_option("--out", sim_out, "output trace CSV")->required();
  sim->add_flag("--normalized", sim_normalized, "scale the force column by max |F|");
  sim->add_option("--svg", sim_svg, "also write a force-vs-time SVG chart");
  sim->add_option("--deadband", sim_deadband,
                  "velocity deadband for regime classification, m/s (default 0; try 1e-6 for "
                  "noisy recordings)");

  // protocol-gen
  auto* gen = app.add_subcommand("protocol-gen", "write a protocol trajectory CSV");
  ProtocolFlags gen_protocol;
  add_protocol_flags(gen, gen_protocol);
  std::string gen_out, gen_trial_id;
  double gen_water = std::numeric_limits<double>::quiet_NaN();
  double gen_velocity = std::numeric_limits<double>::quiet_NaN();
  gen->add_option("--out", gen_out, "output trajectory CSV")->required();
  gen->add_option("--water", gen_water, "water-content metadata W");
  gen->add_option("--velocity", gen_velocity, "nominal velocity metadata, m/s");
  gen->add_option("--trial-id", gen_trial_id, "trial id metadata");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "fit the nine model parameters to recorded trials");
  ParamSource cal_source;
  add_param_source(cal, cal_source);
  std::vector<std::string> cal_trials;
  std::string cal_bounds, cal_out;
  int cal_smooth = 5;
  int cal_starts = 8;
  int cal_max_evals = 6000;
  double cal_tol = 1e-9;
  cal->add_option("--trial", cal_trials, "trial CSV (repeatable)")->required();
  cal->add_option("--smooth", cal_smooth, "velocity smoothing window (odd)");
  cal->add_option("--bounds", cal_bounds, "bounds file (JSON)");
  cal->add_option("--starts", cal_starts, "multi-start count");
  cal->add_option("--max-evals", cal_max_evals, "objective evaluations per start");
  cal->add_option("--tol", cal_tol, "objective tolerance, N");
  cal->add_option("--out", cal_out, "fitted parameter file")->required();

  // evaluate
  auto* eva = app.add_subcommand("evaluate", "prediction error against measured trials");
  ParamSource eva_source;
  add_param_source(eva, eva_source);
  std::vector<std::string> eva_trials;
  std::string eva_profile_out, eva_rmse_out;
  int eva_smooth = 5;
  int eva_samples = 101;
  eva->add_option("--trial", eva_trials, "trial CSV with force column (repeatable)")->required();
  eva->add_option("--smooth", eva_smooth, "velocity smoothing window (odd)");
  eva->add_option("--samples", eva_samples, "normalized-axis sample count");
  eva->add_option("--profile-out", eva_profile_out, "error-profile CSV")->required();
  eva->add_option("--rmse-out", eva_rmse_out, "per-trial RMSE CSV");

  // sweep
  auto* swp = app.add_subcommand("sweep", "tabulate outputs across presets or velocities");
  std::string swp_axis, swp_out;
  std::vector<int> swp_presets;
  std::vector<double> swp_velocities;
  std::vector<std::string> swp_metrics;
  ParamSource swp_source;
  ProtocolFlags swp_protocol;
  add_param_source(swp, swp_source);
  add_protocol_flags(swp, swp_protocol);
  swp->add_option("--axis", swp_axis, "water | velocity")->required();
  swp->add_option("--presets", swp_presets, "water-content percents for the water axis")
      ->delimiter(',');
  swp->add_option("--velocities", swp_velocities, "velocity list for the velocity axis, m/s")
      ->delimiter(',');
  swp->add_option("--metrics", swp_metrics,
                  "peak_force, suction_min, sustain_force, necking_time or a parameter name")
      ->delimiter(',')
      ->required();
  swp->add_option("--out", swp_out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (sim->parsed()) {
      return cmd_simulate(global, sim_source, sim_trial, sim_smooth, sim_protocol, sim_out,
                          sim_normalized, sim_svg, sim_deadband);
    }
    if (gen->parsed()) {
      return cmd_protocol_gen(global, gen_protocol, gen_out, gen_water, gen_velocity,
                              gen_trial_id);
    }
    if (cal->parsed()) {
      return cmd_calibrate(global, cal_source, cal_trials, cal_smooth, cal_bounds, cal_starts,
                           cal_max_evals, cal_tol, cal_out);
    }
    if (eva->parsed()) {
      return cmd_evaluate(eva_source, eva_trials, eva_smooth, eva_samples, eva_profile_out,
                          eva_rmse_out);
    }
    if (swp->parsed()) {
      return cmd_sweep(global, swp_axis, swp_presets, swp_velocities, swp_source, swp_protocol,
                       swp_metrics, swp_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitValidation;
}
