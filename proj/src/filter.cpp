#include "mudsim/filter.hpp"

#include <cmath>
#include <stdexcept>

namespace mudsim {

namespace {

// sin(w t)/w resp. sinh(w t)/w, stable as w -> 0.
double sinc_like(double w, double t, bool hyperbolic) {
  const double x = w * t;
  if (std::abs(x) < 1e-8) {
    const double corr = hyperbolic ? 1.0 + x * x / 6.0 : 1.0 - x * x / 6.0;
    return t * corr;
  }
  return (hyperbolic ? std::sinh(x) : std::sin(x)) / w;
}

}  // namespace

NeckingFilter::NeckingFilter(double zeta, double omega0) : zeta_(zeta), omega0_(omega0) {
  if (!(zeta > 0.0) || !(omega0 > 0.0)) {
    throw std::invalid_argument("necking filter requires zeta > 0 and omega0 > 0");
  }
}

void NeckingFilter::trigger(double v_m0) {
  v0_ = v_m0;
  elapsed_ = 0.0;
  active_ = true;
}

void NeckingFilter::advance(double dt) {
  if (!active_) return;
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("filter step requires dt > 0");
  elapsed_ += dt;
}

double NeckingFilter::velocity_at(double t) const {
  if (!active_) return 0.0;
  const double sigma = zeta_ * omega0_;
  if (zeta_ < 1.0) {
    const double wd = omega0_ * std::sqrt(1.0 - zeta_ * zeta_);
    return v0_ * std::exp(-sigma * t) * (std::cos(wd * t) - sigma * sinc_like(wd, t, false));
  }
  if (zeta_ == 1.0) {
    return v0_ * std::exp(-sigma * t) * (1.0 - omega0_ * t);
  }
  // Overdamped: sum of the two real modes, written with separate
  // exponentials so that neither overflow nor cancellation appears at
  // large t (cosh/sinh forms do both).
  const double wh = omega0_ * std::sqrt(zeta_ * zeta_ - 1.0);
  if (wh * t < 1e-8) {
    return v0_ * std::exp(-sigma * t) * (std::cosh(wh * t) - sigma * sinc_like(wh, t, true));
  }
  const double c = sigma / wh;
  return 0.5 * v0_ * ((1.0 - c) * std::exp((wh - sigma) * t) +
                      (1.0 + c) * std::exp(-(wh + sigma) * t));
}

double NeckingFilter::displacement_at(double t) const {
  if (!active_) return 0.0;
  const double sigma = zeta_ * omega0_;
  if (zeta_ < 1.0) {
    const double wd = omega0_ * std::sqrt(1.0 - zeta_ * zeta_);
    return v0_ * std::exp(-sigma * t) * sinc_like(wd, t, false);
  }
  if (zeta_ == 1.0) {
    return v0_ * std::exp(-sigma * t) * t;
  }
  const double wh = omega0_ * std::sqrt(zeta_ * zeta_ - 1.0);
  if (wh * t < 1e-8) {
    return v0_ * std::exp(-sigma * t) * sinc_like(wh, t, true);
  }
  return 0.5 * v0_ / wh * (std::exp((wh - sigma) * t) - std::exp(-(wh + sigma) * t));
}

}  // namespace mudsim
