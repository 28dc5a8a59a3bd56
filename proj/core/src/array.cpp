#include "mimosim/array.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mimosim {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

void ArrayGeometry::add_element(const Eigen::Vector3d& xyz) {
  if (!xyz.allFinite()) throw std::invalid_argument("ArrayGeometry: element coordinates must be finite");
  coordinates_.conservativeResize(coordinates_.rows() + 1, 3);
  coordinates_.row(coordinates_.rows() - 1) = xyz.transpose();
  weights_.conservativeResize(weights_.size() + 1);
  weights_(weights_.size() - 1) = Complex(1.0, 0.0);
}

void ArrayGeometry::add_elements(const Eigen::Matrix<double, Eigen::Dynamic, 3>& xyz) {
  for (Eigen::Index i = 0; i < xyz.rows(); ++i) add_element(xyz.row(i).transpose());
}

void ArrayGeometry::remove_element(int index) {
  const int n = num_elements();
  if (n == 0) throw std::out_of_range("ArrayGeometry::remove_element: empty array");
  if (index == -1) index = n - 1;
  if (index < 0 || index >= n) throw std::out_of_range("ArrayGeometry::remove_element: index out of range");
  for (int i = index; i + 1 < n; ++i) {
    coordinates_.row(i) = coordinates_.row(i + 1);
    weights_(i) = weights_(i + 1);
  }
  coordinates_.conservativeResize(n - 1, 3);
  weights_.conservativeResize(n - 1);
}

void ArrayGeometry::translate(const Eigen::Vector3d& delta) {
  if (!delta.allFinite()) throw std::invalid_argument("ArrayGeometry::translate: offset must be finite");
  coordinates_.rowwise() += delta.transpose();
}

void ArrayGeometry::translate() {
  if (num_elements() == 0) return;
  const Eigen::RowVector3d centroid = coordinates_.colwise().mean();
  coordinates_.rowwise() -= centroid;
}

void ArrayGeometry::rotate(double theta_x, double theta_y, double theta_z) {
  using Eigen::Matrix3d;
  const double cx = std::cos(theta_x), sx = std::sin(theta_x);
  const double cy = std::cos(theta_y), sy = std::sin(theta_y);
  const double cz = std::cos(theta_z), sz = std::sin(theta_z);
  Matrix3d rx, ry, rz;
  rx << 1, 0, 0, 0, cx, -sx, 0, sx, cx;
  ry << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
  rz << cz, -sz, 0, sz, cz, 0, 0, 0, 1;
  const Matrix3d r = rz * ry * rx;  // x first, then y, then z
  coordinates_ = coordinates_ * r.transpose();
}

void ArrayGeometry::set_weights(const CVector& w) {
  if (w.size() != num_elements())
    throw std::invalid_argument("ArrayGeometry::set_weights: weight count must match element count");
  weights_ = w;
}

Eigen::VectorXd ArrayGeometry::phase_profile(const Direction& d) const {
  validate_direction(d);
  const double se = std::sin(d.elevation), ce = std::cos(d.elevation);
  const double sa = std::sin(d.azimuth), ca = std::cos(d.azimuth);
  // zeta_i in wavelengths; the carrier wavelength cancels.
  return coordinates_.col(0) * (sa * ce) + coordinates_.col(1) * (ca * ce) + coordinates_.col(2) * se;
}

CVector ArrayGeometry::response(const Direction& d) const {
  const int n = num_elements();
  if (n == 0) throw std::logic_error("ArrayGeometry::response: empty array");
  const Eigen::VectorXd zeta = phase_profile(d);
  CVector a(n);
  for (int i = 0; i < n; ++i) {
    // Referencing to the first element keeps entry 1 exactly 1+0j.
    const double phase = kTwoPi * (zeta(i) - zeta(0));
    a(i) = Complex(std::cos(phase), std::sin(phase));
  }
  return a;
}

CVector ArrayGeometry::weighted_response(const Direction& d) const {
  return weights_.cwiseProduct(response(d));
}

Complex ArrayGeometry::gain(const Direction& d) const {
  if (num_elements() == 0) throw std::logic_error("ArrayGeometry::gain: empty array");
  return (weights_.transpose() * response(d))(0);
}

std::vector<std::pair<double, Complex>> ArrayGeometry::pattern_cut(PatternCut cut, int samples) const {
  if (samples < 2) throw std::invalid_argument("ArrayGeometry::pattern_cut: need at least 2 samples");
  const double lo = cut == PatternCut::Azimuth ? -kPi : -kPi / 2;
  const double hi = cut == PatternCut::Azimuth ? kPi : kPi / 2;
  std::vector<std::pair<double, Complex>> out;
  out.reserve(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) {
    const double angle = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
    Direction d;
    if (cut == PatternCut::Azimuth)
      d.azimuth = angle;
    else
      d.elevation = angle;
    out.emplace_back(angle, gain(d));
  }
  return out;
}

ArrayGeometry make_ula(int n, char axis) {
  if (n < 0) throw std::invalid_argument("make_ula: negative element count");
  int col;
  switch (axis) {
    case 'x': col = 0; break;
    case 'y': col = 1; break;
    case 'z': col = 2; break;
    default: throw std::invalid_argument("make_ula: axis must be one of x, y, z");
  }
  Eigen::Matrix<double, Eigen::Dynamic, 3> coords = Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(n, 3);
  for (int i = 0; i < n; ++i) coords(i, col) = 0.5 * i;
  ArrayGeometry g;
  g.add_elements(coords);
  return g;
}

ArrayGeometry make_upa(int m, int n, const std::string& plane) {
  if (m < 0 || n < 0) throw std::invalid_argument("make_upa: negative dimension");
  int col_in_row, col_across;
  if (plane == "xz") {
    col_in_row = 0;
    col_across = 2;
  } else if (plane == "xy") {
    col_in_row = 0;
    col_across = 1;
  } else if (plane == "yz") {
    col_in_row = 1;
    col_across = 2;
  } else {
    throw std::invalid_argument("make_upa: plane must be one of xz, xy, yz");
  }
  Eigen::Matrix<double, Eigen::Dynamic, 3> coords =
      Eigen::Matrix<double, Eigen::Dynamic, 3>::Zero(static_cast<Eigen::Index>(m) * n, 3);
  Eigen::Index k = 0;
  for (int row = 0; row < m; ++row) {
    for (int colu = 0; colu < n; ++colu, ++k) {
      coords(k, col_in_row) = 0.5 * colu;
      coords(k, col_across) = 0.5 * row;
    }
  }
  ArrayGeometry g;
  g.add_elements(coords);
  return g;
}

}  // namespace mimosim
