#pragma once

namespace sphere {

struct GrouserLayout {
  double grouser_height_m = 0.0;
  double normalized_height = 0.0;
  double normalized_sinkage = 0.0;
  double slip = 0.0;
  double max_spacing_rad = 0.0;
  int count = 0;
  double actual_spacing_rad = 0.0;
};

/// Upper bound on the angle between neighbouring grousers for a wheel with
/// normalized grouser height `h_hat`, normalized sinkage `z_hat` and slip.
///
///   phi < (sqrt((1+h)^2 - (1-z)^2) - sqrt(1 - (1-z)^2)) / (1 - i)
///
/// Throws InvariantError outside h_hat >= 0, z_hat in [0, 1], slip in [0, 1).
double max_grouser_spacing(double h_hat, double z_hat, double slip);

struct GrouserOptions {
  /// Round the spacing bound to whole degrees before counting, the way the
  /// built wheel was laid out (14.94 deg -> 15 deg -> 24 grousers).
  bool paper_rounding = false;
};

/// Grouser count and spacing for a wheel. Sinkage is capped at the grouser
/// height (only the grousers sink). Throws InvariantError when the height is
/// zero, since no spacing then satisfies the bound.
GrouserLayout grouser_layout(double wheel_radius_m, double grouser_height_m, double sinkage_m, double slip,
                             GrouserOptions options = {});

}  // namespace sphere
