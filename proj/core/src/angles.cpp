#include "mimosim/angles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mimosim {

void validate_direction(const Direction& d) {
  constexpr double pi = std::numbers::pi;
  if (!std::isfinite(d.azimuth) || d.azimuth < -pi || d.azimuth > pi)
    throw std::invalid_argument("Direction: azimuth outside [-pi, pi]");
  if (!std::isfinite(d.elevation) || d.elevation < -pi / 2 || d.elevation > pi / 2)
    throw std::invalid_argument("Direction: elevation outside [-pi/2, pi/2]");
}

Eigen::Vector3d sph_to_cart(double r, const Direction& d) {
  if (!(r >= 0.0)) throw std::invalid_argument("sph_to_cart: negative range");
  validate_direction(d);
  const double ce = std::cos(d.elevation);
  return {r * std::sin(d.azimuth) * ce, r * std::cos(d.azimuth) * ce, r * std::sin(d.elevation)};
}

std::pair<double, Direction> cart_to_sph(const Eigen::Vector3d& v) {
  const double r = v.norm();
  if (r == 0.0) return {0.0, Direction{}};
  Direction d;
  d.azimuth = std::atan2(v.x(), v.y());
  d.elevation = std::atan2(v.z(), std::hypot(v.x(), v.y()));
  return {r, d};
}

}  // namespace mimosim
