#include "mudsim/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mudsim/csv.hpp"

namespace mudsim {

namespace {

constexpr double kUniformityTolerance = 0.01;  // 1% of dt
constexpr std::size_t kMaxSamples = 50'000'000;

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

std::size_t ceil_steps(double span, double step) {
  return static_cast<std::size_t>(std::ceil(span / step - 1e-9));
}

void check_uniform(const std::vector<double>& t, const std::string& context) {
  require(t.size() >= 2, context + ": need at least 2 samples");
  const double dt = t[1] - t[0];
  require(std::isfinite(dt) && dt > 0.0, context + ": non-increasing or invalid time step");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double gap = t[i] - t[i - 1];
    if (!(gap > 0.0)) {
      throw std::invalid_argument(context + ": time not strictly increasing at row " +
                                  std::to_string(i));
    }
    if (std::abs(gap - dt) > kUniformityTolerance * dt) {
      throw std::invalid_argument(context + ": non-uniform sampling at row " + std::to_string(i));
    }
  }
}

}  // namespace

void Trajectory::validate() const {
  require(!t.empty(), "empty trajectory");
  require(t.size() == z_i.size() && t.size() == zdot_i.size(),
          "trajectory series lengths differ");
  check_uniform(t, "trajectory");
  require(std::isfinite(dt) && dt > 0.0, "trajectory dt must be > 0");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(z_i[i]) || !std::isfinite(zdot_i[i])) {
      throw std::invalid_argument("trajectory: non-finite sample at row " + std::to_string(i));
    }
  }
}

void ProtocolSpec::validate() const {
  require(std::isfinite(v_down) && v_down > 0.0, "protocol: v_down must be > 0");
  require(std::isfinite(v_up) && v_up > 0.0, "protocol: v_up must be > 0");
  require(std::isfinite(depth) && depth > 0.0, "protocol: depth must be > 0");
  require(std::isfinite(t_sustain) && t_sustain >= 0.0, "protocol: t_sustain must be >= 0");
  require(std::isfinite(dt) && dt > 0.0, "protocol: dt must be > 0");
  require(std::isfinite(z_end) && z_end <= 0.0, "protocol: z_end must be <= 0");
}

Trajectory generate_protocol(const ProtocolSpec& spec) {
  spec.validate();
  const std::size_t n_down = ceil_steps(spec.depth, spec.v_down * spec.dt);
  const std::size_t n_sustain = spec.t_sustain > 0.0 ? ceil_steps(spec.t_sustain, spec.dt) : 0;
  const std::size_t n_up = ceil_steps(spec.depth - spec.z_end, spec.v_up * spec.dt);
  const std::size_t n = n_down + n_sustain + n_up + 1;
  require(n_down >= 1 && n_up >= 1, "protocol: unreachable phase");
  require(n <= kMaxSamples, "protocol: too many samples");

  Trajectory traj;
  traj.dt = spec.dt;
  traj.t.resize(n);
  traj.z_i.resize(n);
  traj.zdot_i.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    traj.t[k] = static_cast<double>(k) * spec.dt;
    if (k < n_down) {
      traj.z_i[k] = std::min(spec.v_down * traj.t[k], spec.depth);
      traj.zdot_i[k] = spec.v_down;
    } else if (k < n_down + n_sustain) {
      traj.z_i[k] = spec.depth;
      traj.zdot_i[k] = 0.0;
    } else {
      const double t_up = static_cast<double>(k - n_down - n_sustain) * spec.dt;
      traj.z_i[k] = std::max(spec.depth - spec.v_up * t_up, spec.z_end);
      traj.zdot_i[k] = -spec.v_up;
    }
  }
  return traj;
}

std::vector<double> differentiate(const std::vector<double>& z, double dt, int window) {
  require(z.size() >= 2, "differentiate: need at least 2 samples");
  require(std::isfinite(dt) && dt > 0.0, "differentiate: dt must be > 0");
  require(window >= 1 && window % 2 == 1, "differentiate: window must be odd and >= 1");

  const std::size_t n = z.size();
  std::vector<double> v(n);
  v[0] = (z[1] - z[0]) / dt;
  v[n - 1] = (z[n - 1] - z[n - 2]) / dt;
  for (std::size_t i = 1; i + 1 < n; ++i) v[i] = (z[i + 1] - z[i - 1]) / (2.0 * dt);

  if (window == 1) return v;

  const long half = window / 2;
  std::vector<double> smoothed(n);
  for (long i = 0; i < static_cast<long>(n); ++i) {
    const long lo = std::max<long>(0, i - half);
    const long hi = std::min<long>(static_cast<long>(n) - 1, i + half);
    double acc = 0.0;
    for (long k = lo; k <= hi; ++k) acc += v[k];
    smoothed[i] = acc / static_cast<double>(hi - lo + 1);
  }
  return smoothed;
}

bool TrialMetadata::any() const {
  return std::isfinite(water_content) || std::isfinite(nominal_velocity) || !trial_id.empty();
}

void TrialRecord::validate() const {
  trajectory.validate();
  if (!force.empty() && force.size() != trajectory.size()) {
    throw std::invalid_argument("trial: force series not aligned with trajectory");
  }
  for (std::size_t i = 0; i < force.size(); ++i) {
    if (!std::isfinite(force[i])) {
      throw std::invalid_argument("trial: non-finite force at row " + std::to_string(i));
    }
  }
}

namespace {

TrialMetadata parse_metadata_comment(std::string_view line) {
  TrialMetadata meta;
  line.remove_prefix(1);  // leading '#'
  for (std::string_view field : csv::split_fields(line)) {
    field = csv::trim(field);
    if (field.empty()) continue;
    const std::size_t eq = field.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("trial metadata: expected key=value, got '" +
                                  std::string(field) + "'");
    }
    const std::string_view key = csv::trim(field.substr(0, eq));
    const std::string_view value = csv::trim(field.substr(eq + 1));
    if (key == "W") {
      meta.water_content = csv::parse_double(value, "trial metadata W");
    } else if (key == "v") {
      meta.nominal_velocity = csv::parse_double(value, "trial metadata v");
    } else if (key == "trial") {
      meta.trial_id = std::string(value);
    } else {
      throw std::invalid_argument("trial metadata: unknown key '" + std::string(key) + "'");
    }
  }
  return meta;
}

void write_metadata_comment(std::ostream& out, const TrialMetadata& meta) {
  out << "#";
  bool first = true;
  auto sep = [&]() {
    out << (first ? " " : ",");
    first = false;
  };
  if (std::isfinite(meta.water_content)) {
    sep();
    out << "W=" << csv::format_double(meta.water_content);
  }
  if (std::isfinite(meta.nominal_velocity)) {
    sep();
    out << "v=" << csv::format_double(meta.nominal_velocity);
  }
  if (!meta.trial_id.empty()) {
    sep();
    out << "trial=" << meta.trial_id;
  }
  out << "\n";
}

}  // namespace

TrialRecord load_trial(std::istream& in, const std::string& name, int smoothing_window) {
  TrialRecord trial;
  std::string line;
  bool have_header = false;
  bool have_force_column = false;
  bool seen_metadata = false;
  std::size_t row = 0;

  while (std::getline(in, line)) {
    const std::string_view stripped = csv::trim(line);
    if (stripped.empty()) continue;
    if (stripped.front() == '#') {
      if (have_header || seen_metadata) {
        throw std::invalid_argument(name + ": unexpected comment line");
      }
      trial.meta = parse_metadata_comment(stripped);
      seen_metadata = true;
      continue;
    }
    if (!have_header) {
      if (stripped == "t_s,z_i_m,F_N") {
        have_force_column = true;
      } else if (stripped == "t_s,z_i_m") {
        have_force_column = false;
      } else {
        throw std::invalid_argument(name + ": malformed header '" + std::string(stripped) + "'");
      }
      have_header = true;
      continue;
    }
    const auto fields = csv::split_fields(stripped);
    const std::size_t expected = have_force_column ? 3 : 2;
    if (fields.size() != expected) {
      throw std::invalid_argument(name + ": wrong field count at data row " + std::to_string(row));
    }
    const std::string where = name + " row " + std::to_string(row);
    trial.trajectory.t.push_back(csv::parse_double(fields[0], where + " t_s"));
    trial.trajectory.z_i.push_back(csv::parse_double(fields[1], where + " z_i_m"));
    if (have_force_column) trial.force.push_back(csv::parse_double(fields[2], where + " F_N"));
    ++row;
  }

  if (!have_header) throw std::invalid_argument(name + ": missing header");
  check_uniform(trial.trajectory.t, name);
  for (std::size_t i = 0; i < trial.trajectory.size(); ++i) {
    if (!std::isfinite(trial.trajectory.t[i]) || !std::isfinite(trial.trajectory.z_i[i]) ||
        (have_force_column && !std::isfinite(trial.force[i]))) {
      throw std::invalid_argument(name + ": non-finite value at data row " + std::to_string(i));
    }
  }
  trial.trajectory.dt = trial.trajectory.t[1] - trial.trajectory.t[0];
  trial.trajectory.zdot_i =
      differentiate(trial.trajectory.z_i, trial.trajectory.dt, smoothing_window);
  trial.validate();
  return trial;
}

TrialRecord load_trial(const std::filesystem::path& path, int smoothing_window) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open trial file: " + path.string());
  return load_trial(in, path.string(), smoothing_window);
}

void save_trial(const std::filesystem::path& path, const TrialRecord& trial) {
  trial.validate();
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write trial file: " + path.string());
  if (trial.meta.any()) write_metadata_comment(out, trial.meta);
  out << (trial.has_force() ? "t_s,z_i_m,F_N" : "t_s,z_i_m") << "\n";
  for (std::size_t i = 0; i < trial.trajectory.size(); ++i) {
    out << csv::format_double(trial.trajectory.t[i]) << ','
        << csv::format_double(trial.trajectory.z_i[i]);
    if (trial.has_force()) out << ',' << csv::format_double(trial.force[i]);
    out << "\n";
  }
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                     const TrialMetadata* meta) {
  TrialRecord trial;
  trial.trajectory = traj;
  if (meta != nullptr) trial.meta = *meta;
  save_trial(path, trial);
}

}  // namespace mudsim
