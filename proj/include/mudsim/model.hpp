#pragma once

#include <cmath>

#include "mudsim/parameters.hpp"

namespace mudsim {

/// Per-sample stress decomposition. Stresses in Pa, force in N.
/// f_e2 holds the bulk-spring contribution actually entering the sum, so it
/// is zero during withdrawal and out of contact.
struct StressComponents {
  double f_e1 = 0.0;
  double f_e2 = 0.0;
  double f_s = 0.0;
  double f_total = 0.0;
  double force = 0.0;
};

/// sign(x) with sign(0) = +1 — the convention all switching rules share.
inline double sign_plus(double x) { return x >= 0.0 ? 1.0 : -1.0; }

/// Direction index w(ż_i): 0 moving down (or holding), 1 moving up.
inline int direction_index(double zdot_i) { return zdot_i >= 0.0 ? 0 : 1; }

/// Regime from the intruder velocity. A positive deadband (m/s) treats
/// near-zero noisy velocities as holding; 0 keeps the raw sign rule.
inline Regime classify_regime(double zdot_i, double deadband = 0.0) {
  if (deadband > 0.0 && std::abs(zdot_i) < deadband) return Regime::Intrusion;
  return direction_index(zdot_i) == 0 ? Regime::Intrusion : Regime::Withdrawal;
}

/// Visco-elastic stress b_j·ż_m. Equals k_j(z_i − z_m) before necking by the
/// element's internal force balance, and decays to zero with the filtered
/// mud velocity afterwards (the position form would not).
double visco_elastic_stress(const MudParameters& p, Regime regime, double zdot_m);

/// Bulk-spring stress α(z_i/H)^β for z_i > 0, zero at or above the surface.
double bulk_spring_stress(const MudParameters& p, const IntruderGeometry& g, double z_i);

/// Quadratic inertial drag sign(ż_i)·λ·ρ_m·ż_i².
double inertial_drag_stress(const MudParameters& p, double zdot_i);

/// Assembles f_m = f_e1 + f_s + (1−w)·f_e2 and the total force f_m·S.
/// `force_transmitting` false zeroes the force (separated intruder); the
/// stress decomposition is still reported for inspection.
StressComponents total_stress(const MudParameters& p, const IntruderGeometry& g, Regime regime,
                              double z_i, double zdot_i, double zdot_m,
                              bool force_transmitting = true);

}  // namespace mudsim
