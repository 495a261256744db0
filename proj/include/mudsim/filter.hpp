#pragma once

namespace mudsim {

/// Free decay of the second-order mud-velocity filter
///
///   G(s) = s / (s² + 2ζω₀s + ω₀²)
///
/// fed by the mud velocity captured at necking onset: the output equals the
/// velocity of the unforced oscillator released from (z = 0, ż = v_m0).
/// Realized in closed form as a function of time since necking, so stepping
/// is exact for any dt and any damping regime (under-, critically- and
/// over-damped all covered).
class NeckingFilter {
 public:
  NeckingFilter() = default;
  NeckingFilter(double zeta, double omega0);

  /// Arms the decay at t = 0 with the pre-necking mud velocity.
  void trigger(double v_m0);
  void advance(double dt);
  bool active() const { return active_; }

  double velocity() const { return velocity_at(elapsed_); }

  /// Mud displacement accumulated since necking, ∫₀ᵗ ż dτ. Settles to zero:
  /// the net post-necking mud displacement vanishes.
  double displacement() const { return displacement_at(elapsed_); }

  double velocity_at(double t) const;
  double displacement_at(double t) const;

  double v_m0() const { return v0_; }
  double elapsed() const { return elapsed_; }

 private:
  double zeta_ = 0.0;
  double omega0_ = 0.0;
  double v0_ = 0.0;
  double elapsed_ = 0.0;
  bool active_ = false;
};

}  // namespace mudsim
