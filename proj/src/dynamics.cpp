#include "mudsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "mudsim/csv.hpp"

namespace mudsim {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

// Contact bookkeeping, stress evaluation and latch update shared by the
// initial sample (no time elapsed) and every advanced step.
StressComponents evaluate_and_latch(const MudParameters& p, const IntruderGeometry& g,
                                    double z_i, double zdot_i, MudState& st,
                                    const SimOptions& options) {
  st.regime = classify_regime(zdot_i, options.velocity_deadband);
  const bool below = z_i > 0.0;
  // The mud clings to the intruder until the neck yields, so only necking
  // (or never having touched the mud) ends force transmission above the
  // surface.
  st.in_contact = st.touched && (below || !st.necked);

  const StressComponents sc =
      total_stress(p, g, st.regime, z_i, zdot_i, st.zdot_m, st.in_contact);

  if (st.regime == Regime::Withdrawal && !st.necked && st.in_contact &&
      yield_check(p, sc.f_total)) {
    st.necked = true;
    st.v_m0 = st.zdot_m_raw;
    st.z_m_at_necking = st.z_m;
    st.filter = NeckingFilter(p.zeta, p.omega0);
    st.filter.trigger(st.v_m0);
  }
  return sc;
}

StressComponents process_first_sample(const MudParameters& p, const IntruderGeometry& g,
                                      double z_i, double zdot_i, MudState& st,
                                      const SimOptions& options) {
  require(std::isfinite(z_i) && std::isfinite(zdot_i), "step: non-finite input");
  if (z_i > 0.0) st.touched = true;
  return evaluate_and_latch(p, g, z_i, zdot_i, st, options);
}

}  // namespace

double ForceTrace::max_force() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::max(m, s.force);
  return m;
}

double ForceTrace::min_force() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& s : samples) m = std::min(m, s.force);
  return m;
}

std::optional<double> ForceTrace::first_necking_time() const {
  for (const auto& s : samples) {
    if (s.necked) return s.t;
  }
  return std::nullopt;
}

void step_maxwell(const MudParameters& p, Regime regime, double z_i, double zdot_seg,
                  MudState& state, double dt) {
  require(std::isfinite(dt) && dt > 0.0, "step_maxwell: dt must be > 0");
  require(std::isfinite(z_i) && std::isfinite(zdot_seg) && std::isfinite(state.z_m),
          "step_maxwell: non-finite input");
  const double tau = p.relaxation_time(regime);
  const double one_minus_decay = -std::expm1(-dt / tau);  // full precision for small dt/tau
  const double decay = 1.0 - one_minus_decay;
  const double u_start = (z_i - zdot_seg * dt) - state.z_m;
  const double u_end = u_start * decay + zdot_seg * tau * one_minus_decay;
  state.z_m = z_i - u_end;
  state.zdot_m_raw = u_end / tau;
}

bool yield_check(const MudParameters& p, double f_total_withdrawal) {
  return std::abs(f_total_withdrawal) > p.sigma_y;
}

StressComponents step(const MudParameters& p, const IntruderGeometry& g, double z_i,
                      double zdot_i, double zdot_seg, MudState& st, double dt,
                      const SimOptions& options) {
  require(std::isfinite(z_i) && std::isfinite(zdot_i) && std::isfinite(zdot_seg),
          "step: non-finite input");
  require(std::isfinite(dt) && dt > 0.0, "step: dt must be > 0");

  const Regime regime = classify_regime(zdot_i, options.velocity_deadband);
  const bool below = z_i > 0.0;
  if (below) st.touched = true;

  // Pushing back down re-establishes contact: the latch clears and the ODE
  // resumes from wherever the mud settled.
  if (st.necked && below && zdot_i > 0.0) {
    st.necked = false;
    st.filter = NeckingFilter();
  }

  if (st.necked) {
    // Post-necking: the output velocity is the filter's free decay and the
    // mud displacement follows its integral; the raw ODE value stays
    // reported as the algebraic pre-filter velocity.
    st.filter.advance(dt);
    st.zdot_m = st.filter.velocity();
    st.z_m = st.z_m_at_necking + st.filter.displacement();
    st.zdot_m_raw = (p.stiffness(regime) / p.damping(regime)) * (z_i - st.z_m);
  } else if (st.touched) {
    step_maxwell(p, regime, z_i, zdot_seg, st, dt);
    st.zdot_m = st.zdot_m_raw;
  } else {
    // Undisturbed mud.
    st.z_m = 0.0;
    st.zdot_m_raw = 0.0;
    st.zdot_m = 0.0;
  }

  return evaluate_and_latch(p, g, z_i, zdot_i, st, options);
}

StressComponents step(const MudParameters& p, const IntruderGeometry& g, double z_i,
                      double zdot_i, MudState& st, double dt, const SimOptions& options) {
  return step(p, g, z_i, zdot_i, zdot_i, st, dt, options);
}

ForceTrace simulate(const MudParameters& p, const IntruderGeometry& g, const Trajectory& traj,
                    const SimOptions& options) {
  p.validate();
  g.validate();
  traj.validate();

  ForceTrace trace;
  trace.dt = traj.dt;
  trace.samples.reserve(traj.size());

  MudState st;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const bool filtered = st.necked;
    StressComponents sc;
    if (k == 0) {
      sc = process_first_sample(p, g, traj.z_i[0], traj.zdot_i[0], st, options);
    } else {
      const double zdot_seg = (traj.z_i[k] - traj.z_i[k - 1]) / traj.dt;
      sc = step(p, g, traj.z_i[k], traj.zdot_i[k], zdot_seg, st, traj.dt, options);
    }
    TraceSample sample;
    sample.t = traj.t[k];
    sample.z_i = traj.z_i[k];
    sample.zdot_i = traj.zdot_i[k];
    sample.z_m = st.z_m;
    sample.zdot_m = st.zdot_m;
    sample.f_e1 = sc.f_e1;
    sample.f_e2 = sc.f_e2;
    sample.f_s = sc.f_s;
    sample.f_total = sc.f_total;
    sample.force = sc.force;
    sample.regime = st.regime;
    sample.necked = filtered && st.necked;
    trace.samples.push_back(sample);
  }
  return trace;
}

void save_force_trace(const std::filesystem::path& path, const ForceTrace& trace) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write trace file: " + path.string());
  out << "t_s,z_i_m,zdot_i_m_per_s,z_m_m,zdot_m_m_per_s,"
         "f_e1_Pa,f_e2_Pa,f_s_Pa,f_total_Pa,F_total_N,regime,necked\n";
  for (const auto& s : trace.samples) {
    out << csv::format_double(s.t) << ',' << csv::format_double(s.z_i) << ','
        << csv::format_double(s.zdot_i) << ',' << csv::format_double(s.z_m) << ','
        << csv::format_double(s.zdot_m) << ',' << csv::format_double(s.f_e1) << ','
        << csv::format_double(s.f_e2) << ',' << csv::format_double(s.f_s) << ','
        << csv::format_double(s.f_total) << ',' << csv::format_double(s.force) << ','
        << (s.regime == Regime::Intrusion ? 'I' : 'W') << ',' << (s.necked ? '1' : '0') << "\n";
  }
}

ForceTrace load_force_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open trace file: " + path.string());

  ForceTrace trace;
  std::string line;
  bool have_header = false;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const std::string_view stripped = csv::trim(line);
    if (stripped.empty()) continue;
    if (!have_header) {
      if (stripped != "t_s,z_i_m,zdot_i_m_per_s,z_m_m,zdot_m_m_per_s,"
                      "f_e1_Pa,f_e2_Pa,f_s_Pa,f_total_Pa,F_total_N,regime,necked") {
        throw std::invalid_argument(path.string() + ": malformed trace header");
      }
      have_header = true;
      continue;
    }
    const auto fields = csv::split_fields(stripped);
    if (fields.size() != 12) {
      throw std::invalid_argument(path.string() + ": wrong field count at row " +
                                  std::to_string(row));
    }
    const std::string where = path.string() + " row " + std::to_string(row);
    TraceSample s;
    s.t = csv::parse_double(fields[0], where);
    s.z_i = csv::parse_double(fields[1], where);
    s.zdot_i = csv::parse_double(fields[2], where);
    s.z_m = csv::parse_double(fields[3], where);
    s.zdot_m = csv::parse_double(fields[4], where);
    s.f_e1 = csv::parse_double(fields[5], where);
    s.f_e2 = csv::parse_double(fields[6], where);
    s.f_s = csv::parse_double(fields[7], where);
    s.f_total = csv::parse_double(fields[8], where);
    s.force = csv::parse_double(fields[9], where);
    const std::string_view regime = csv::trim(fields[10]);
    if (regime == "I") {
      s.regime = Regime::Intrusion;
    } else if (regime == "W") {
      s.regime = Regime::Withdrawal;
    } else {
      throw std::invalid_argument(where + ": bad regime code");
    }
    const std::string_view necked = csv::trim(fields[11]);
    if (necked == "0") {
      s.necked = false;
    } else if (necked == "1") {
      s.necked = true;
    } else {
      throw std::invalid_argument(where + ": bad necked flag");
    }
    trace.samples.push_back(s);
    ++row;
  }
  if (!have_header) throw std::invalid_argument(path.string() + ": missing trace header");
  if (trace.samples.size() >= 2) trace.dt = trace.samples[1].t - trace.samples[0].t;
  return trace;
}

}  // namespace mudsim
