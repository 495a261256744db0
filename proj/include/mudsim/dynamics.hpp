#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "mudsim/filter.hpp"
#include "mudsim/model.hpp"
#include "mudsim/parameters.hpp"
#include "mudsim/trajectory.hpp"

namespace mudsim {

/// Evolving internal state of the mud column.
struct MudState {
  double z_m = 0.0;         ///< mud internal displacement, m
  double zdot_m_raw = 0.0;  ///< pre-filter mud velocity from the Maxwell ODE, m/s
  double zdot_m = 0.0;      ///< post-switch mud velocity, m/s
  NeckingFilter filter;     ///< engaged after yielding; inactive otherwise
  bool necked = false;      ///< yielding/necking latch
  double v_m0 = 0.0;        ///< mud velocity captured at necking onset, m/s
  double z_m_at_necking = 0.0;
  bool touched = false;     ///< intruder has been below the surface at least once
  bool in_contact = false;  ///< force-transmitting at the last processed sample
  Regime regime = Regime::Intrusion;  ///< classification at the last processed sample
};

/// One simulated sample. `necked` records whether the velocity filter was
/// applied to this sample (the latch engages the step after the yield
/// stress is first exceeded, so the crossing sample itself is unfiltered).
struct TraceSample {
  double t = 0.0;
  double z_i = 0.0;
  double zdot_i = 0.0;
  double z_m = 0.0;
  double zdot_m = 0.0;
  double f_e1 = 0.0;
  double f_e2 = 0.0;
  double f_s = 0.0;
  double f_total = 0.0;
  double force = 0.0;
  Regime regime = Regime::Intrusion;
  bool necked = false;
};

struct ForceTrace {
  double dt = 0.0;
  std::vector<TraceSample> samples;

  std::size_t size() const { return samples.size(); }
  double max_force() const;
  double min_force() const;
  std::optional<double> first_necking_time() const;
};

struct SimOptions {
  /// Regime-classification deadband, m/s. 0 keeps the raw sign rule; noisy
  /// measured velocities may need ~1e-6.
  double velocity_deadband = 0.0;
};

/// Exact update of the Maxwell element b_j ż_m + k_j z_m = k_j z_i over one
/// step, holding the intruder velocity constant: with u = z_i − z_m and
/// E = exp(−dt k_j/b_j),
///
///   u' = u·E + ż_i·(b_j/k_j)·(1 − E),   ż_m = (k_j/b_j)·u'.
///
/// For a stationary intruder this reduces to z_m ← z_i + (z_m − z_i)·E, and
/// for the piecewise-constant-velocity protocols the update is exact at
/// every sample regardless of dt. `zdot_seg` is the velocity held over the
/// step; callers integrating a sampled trajectory should pass the
/// position-consistent (z_k − z_{k−1})/dt.
void step_maxwell(const MudParameters& p, Regime regime, double z_i, double zdot_seg,
                  MudState& state, double dt);

/// Yielding/necking switch condition: |f_m^w| strictly above the yield
/// stress. Meaningful during withdrawal only.
bool yield_check(const MudParameters& p, double f_total_withdrawal);

/// Advances the full pipeline by one sample: classify regime from ż_i,
/// advance the Maxwell ODE, apply the necking switch (identity or filter),
/// evaluate the stresses, then update the latch from the yield check.
/// Returns the stresses at the end of the step.
StressComponents step(const MudParameters& p, const IntruderGeometry& g, double z_i,
                      double zdot_i, double zdot_seg, MudState& state, double dt,
                      const SimOptions& options = {});

/// Convenience overload holding ż_i itself over the step.
StressComponents step(const MudParameters& p, const IntruderGeometry& g, double z_i,
                      double zdot_i, MudState& state, double dt,
                      const SimOptions& options = {});

/// Runs a whole trajectory through `step`. Deterministic: identical inputs
/// produce bit-identical traces.
ForceTrace simulate(const MudParameters& p, const IntruderGeometry& g, const Trajectory& traj,
                    const SimOptions& options = {});

// Trace CSV: header row, one sample per line, SI units; regime encoded as
// {I, W}, necked as {0, 1}.
void save_force_trace(const std::filesystem::path& path, const ForceTrace& trace);
ForceTrace load_force_trace(const std::filesystem::path& path);

}  // namespace mudsim
