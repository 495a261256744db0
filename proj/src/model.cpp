#include "mudsim/model.hpp"

namespace mudsim {

double visco_elastic_stress(const MudParameters& p, Regime regime, double zdot_m) {
  return p.damping(regime) * zdot_m;
}

double bulk_spring_stress(const MudParameters& p, const IntruderGeometry& g, double z_i) {
  if (z_i <= 0.0) return 0.0;
  return p.alpha * std::pow(z_i / g.char_width, p.beta);
}

double inertial_drag_stress(const MudParameters& p, double zdot_i) {
  return sign_plus(zdot_i) * p.lambda_drag * p.rho_m * zdot_i * zdot_i;
}

StressComponents total_stress(const MudParameters& p, const IntruderGeometry& g, Regime regime,
                              double z_i, double zdot_i, double zdot_m,
                              bool force_transmitting) {
  StressComponents sc;
  sc.f_e1 = visco_elastic_stress(p, regime, zdot_m);
  sc.f_s = inertial_drag_stress(p, zdot_i);
  // The direction index follows the regime so that an explicit deadband
  // classification stays consistent with the component switch.
  if (regime == Regime::Intrusion) sc.f_e2 = bulk_spring_stress(p, g, z_i);
  sc.f_total = sc.f_e1 + sc.f_s + sc.f_e2;
  sc.force = force_transmitting ? sc.f_total * g.contact_area() : 0.0;
  return sc;
}

}  // namespace mudsim
