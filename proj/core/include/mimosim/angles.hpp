#pragma once

#include <Eigen/Dense>
#include <utility>

namespace mimosim {

// Azimuth is measured from the +y axis toward +x; elevation is measured from
// the xy-plane toward +z.  Broadside of an x-axis array is (0, 0).
struct Direction {
  double azimuth = 0.0;    // radians, [-pi, pi]
  double elevation = 0.0;  // radians, [-pi/2, pi/2]
};

// Throws std::invalid_argument when a component is outside its range.
void validate_direction(const Direction& d);

// (r, d) -> r * (sin az cos el, cos az cos el, sin el).  Requires r >= 0.
Eigen::Vector3d sph_to_cart(double r, const Direction& d);

// Inverse of sph_to_cart via four-quadrant arctangents; the origin maps to
// r = 0 with both angles zero.
std::pair<double, Direction> cart_to_sph(const Eigen::Vector3d& v);

}  // namespace mimosim
