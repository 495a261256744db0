#pragma once

#include <filesystem>
#include <istream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace mudsim {

/// Uniformly sampled intruder motion. Depth convention: z_i > 0 below the
/// undisturbed mud surface.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> t;       ///< s, strictly increasing, constant spacing
  std::vector<double> z_i;     ///< m
  std::vector<double> zdot_i;  ///< m/s

  std::size_t size() const { return t.size(); }
  double duration() const { return t.empty() ? 0.0 : t.back() - t.front(); }
  void validate() const;
};

/// Down / sustain / up intrusion protocol.
struct ProtocolSpec {
  double v_down = 0.01;    ///< m/s, > 0
  double depth = 0.05;     ///< m, > 0
  double t_sustain = 6.0;  ///< s, >= 0
  double v_up = 0.01;      ///< m/s, > 0
  double dt = 0.01;        ///< s, > 0
  double z_end = 0.0;      ///< m, final depth, <= 0 (at or above the surface)

  void validate() const;
};

/// Three-phase piecewise-constant-velocity profile: down at v_down until
/// depth, hold t_sustain, up at v_up until z_end. Phase transitions snap to
/// the sample grid (durations rounded up to whole samples) and the sampled
/// velocity is the phase velocity, right-continuous at the boundaries.
Trajectory generate_protocol(const ProtocolSpec& spec);

/// Central differences (one-sided at the ends) followed by a moving average
/// over `window` samples; window must be odd, window == 1 means no smoothing.
std::vector<double> differentiate(const std::vector<double>& z, double dt, int window = 1);

struct TrialMetadata {
  double water_content = std::numeric_limits<double>::quiet_NaN();
  double nominal_velocity = std::numeric_limits<double>::quiet_NaN();
  std::string trial_id;

  bool any() const;
};

/// A recorded (or synthesized) trial: motion plus optionally the measured
/// total force aligned 1:1 with the trajectory samples.
struct TrialRecord {
  Trajectory trajectory;
  std::vector<double> force;  ///< N; empty for pure motion inputs
  TrialMetadata meta;

  bool has_force() const { return !force.empty(); }
  void validate() const;
};

// Trial CSV: optional one-line metadata comment `# W=...,v=...,trial=...`,
// header `t_s,z_i_m,F_N` (force column optional), one sample per line.
// The velocity series is derived from z on load via `differentiate`;
// window 5 suits measured data, window 1 pristine files.
TrialRecord load_trial(const std::filesystem::path& path, int smoothing_window = 5);
TrialRecord load_trial(std::istream& in, const std::string& name, int smoothing_window = 5);
void save_trial(const std::filesystem::path& path, const TrialRecord& trial);
void save_trajectory(const std::filesystem::path& path, const Trajectory& traj,
                     const TrialMetadata* meta = nullptr);

}  // namespace mudsim
