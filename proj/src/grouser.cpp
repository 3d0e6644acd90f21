#include "sphere/grouser.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sphere/core_model.hpp"

namespace sphere {

double max_grouser_spacing(double h_hat, double z_hat, double slip) {
  if (!(h_hat >= 0.0)) throw InvariantError("h_hat", "normalized grouser height must be >= 0");
  if (!(z_hat >= 0.0 && z_hat <= 1.0)) throw InvariantError("z_hat", "normalized sinkage must be in [0, 1]");
  if (!(slip >= 0.0 && slip < 1.0)) throw InvariantError("slip", "slip must be in [0, 1)");

  const double rim = (1.0 - z_hat) * (1.0 - z_hat);
  if (rim > 1.0) throw InvariantError("z_hat", "sinkage outside the wheel");
  const double outer = std::sqrt((1.0 + h_hat) * (1.0 + h_hat) - rim);
  const double inner = std::sqrt(1.0 - rim);
  return (outer - inner) / (1.0 - slip);
}

GrouserLayout grouser_layout(double wheel_radius_m, double grouser_height_m, double sinkage_m, double slip,
                             GrouserOptions options) {
  if (!(wheel_radius_m > 0.0)) throw InvariantError("wheel_radius_m", "wheel radius must be > 0");
  if (!(grouser_height_m >= 0.0)) throw InvariantError("grouser_height_m", "grouser height must be >= 0");
  if (!(sinkage_m >= 0.0 && sinkage_m <= wheel_radius_m)) {
    throw InvariantError("sinkage_m", "sinkage must be in [0, wheel_radius_m]");
  }

  GrouserLayout out;
  out.grouser_height_m = grouser_height_m;
  out.slip = slip;
  out.normalized_height = grouser_height_m / wheel_radius_m;
  out.normalized_sinkage = std::min(sinkage_m, grouser_height_m) / wheel_radius_m;
  out.max_spacing_rad = max_grouser_spacing(out.normalized_height, out.normalized_sinkage, slip);
  if (!(out.max_spacing_rad > 0.0)) {
    throw InvariantError("grouser_height_m", "grousers required: zero height admits no spacing");
  }

  double bound = out.max_spacing_rad;
  if (options.paper_rounding) {
    bound = deg_to_rad(std::max(1.0, std::round(rad_to_deg(bound))));
  }
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const double raw = two_pi / bound;
  // Exact divisors (360 / 15) must not round up to the next count.
  const double snapped = std::abs(raw - std::round(raw)) < 1e-9 * raw ? std::round(raw) : std::ceil(raw);
  out.count = std::max(3, static_cast<int>(snapped));
  out.actual_spacing_rad = two_pi / out.count;
  return out;
}

}  // namespace sphere
