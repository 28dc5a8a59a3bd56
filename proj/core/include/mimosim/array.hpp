#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mimosim/angles.hpp"
#include "mimosim/types.hpp"

namespace mimosim {

enum class PatternCut { Azimuth, Elevation };

// Antenna array geometry.  Element coordinates are stored in units of
// carrier wavelengths (one row per element), so responses need no explicit
// wavelength.  The weights vector always matches the element count; elements
// added later start with weight 1.
class ArrayGeometry {
 public:
  ArrayGeometry() = default;

  int num_elements() const { return static_cast<int>(coordinates_.rows()); }
  const Eigen::Matrix<double, Eigen::Dynamic, 3>& coordinates() const { return coordinates_; }
  const CVector& weights() const { return weights_; }

  void add_element(const Eigen::Vector3d& xyz);
  void add_elements(const Eigen::Matrix<double, Eigen::Dynamic, 3>& xyz);
  // Removes by index; default removes the last element.
  void remove_element(int index = -1);

  void translate(const Eigen::Vector3d& delta);
  // No-argument form recenters the centroid at the origin.
  void translate();
  // Right-handed rotations applied about x, then y, then z.
  void rotate(double theta_x, double theta_y, double theta_z);

  void set_weights(const CVector& w);

  // Response vector referenced to the first element: entry i is
  // exp(+j 2 pi (zeta_i - zeta_1)) with zeta = x sin(az) cos(el) +
  // y cos(az) cos(el) + z sin(el).  Entry 1 is exactly 1+0j; entries are
  // unit-magnitude phases, not normalized to unit vector norm.
  CVector response(const Direction& d) const;

  // Entrywise w_i * a_i, referenced to the unweighted first-element phase.
  CVector weighted_response(const Direction& d) const;

  // g = w^T a (plain inner product; weights are not conjugated).
  Complex gain(const Direction& d) const;

  // Uniform sweep over the cut's full range (azimuth [-pi, pi], elevation
  // [-pi/2, pi/2]) with the other angle held at 0; endpoints included.
  std::vector<std::pair<double, Complex>> pattern_cut(PatternCut cut, int samples = 361) const;

 private:
  Eigen::VectorXd phase_profile(const Direction& d) const;

  Eigen::Matrix<double, Eigen::Dynamic, 3> coordinates_{0, 3};
  CVector weights_{0};
};

// Half-wavelength uniform linear array along the given axis ('x', 'y', 'z'),
// first element at the origin.
ArrayGeometry make_ula(int n, char axis = 'x');

// Half-wavelength uniform planar array: m rows of n elements in the given
// plane ("xz", "xy", "yz").  Ordering is row-major: within a row the first
// plane axis varies, rows are stacked along the second.
ArrayGeometry make_upa(int m, int n, const std::string& plane = "xz");

}  // namespace mimosim
