#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "mimosim/analog.hpp"
#include "mimosim/rng.hpp"
#include "test_helpers.hpp"

using namespace mimosim;
using mimosim::test::exactly_equal;
using mimosim::test::random_matrix;

namespace {

constexpr double kPi = std::numbers::pi;

Complex polar(double mag, double phase) {
  return mag * Complex(std::cos(phase), std::sin(phase));
}

}  // namespace

TEST_CASE("no constraints leave the matrix untouched") {
  RandomStream rng(81);
  CMatrix x = random_matrix(rng, 4, 3);
  AnalogConstraints c;
  CHECK(exactly_equal(quantize_analog(x, c), x));
}

TEST_CASE("two-bit phase grid snaps to the nearest quarter turn") {
  AnalogConstraints c;
  c.phase_bits = 2;
  CMatrix x(1, 1);
  x(0, 0) = polar(1.0, 0.3 * kPi);  // 54 degrees, closer to 90 than 0
  CMatrix q = quantize_analog(x, c);
  CHECK(std::arg(q(0, 0)) == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(std::abs(q(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));

  x(0, 0) = polar(2.0, -0.3 * kPi);  // wraps to 3/2 pi level, magnitude kept
  q = quantize_analog(x, c);
  CHECK(std::arg(q(0, 0)) == doctest::Approx(-kPi / 2).epsilon(1e-12));
  CHECK(std::abs(q(0, 0)) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("phase ties round toward the smaller grid index") {
  AnalogConstraints c;
  c.phase_bits = 2;  // step pi/2; pi/4 sits exactly between 0 and pi/2
  CMatrix x(1, 1);
  x(0, 0) = polar(1.0, kPi / 4);
  CMatrix q = quantize_analog(x, c);
  CHECK(std::abs(std::arg(q(0, 0))) < 1e-12);
}

TEST_CASE("one-bit phases land on 0 or pi") {
  AnalogConstraints c;
  c.phase_bits = 1;
  RandomStream rng(82);
  CMatrix x = random_matrix(rng, 6, 4);
  CMatrix q = quantize_analog(x, c);
  for (Eigen::Index i = 0; i < q.rows(); ++i)
    for (Eigen::Index j = 0; j < q.cols(); ++j) {
      double a = std::arg(q(i, j));
      CHECK((std::abs(a) < 1e-12 || std::abs(std::abs(a) - kPi) < 1e-12));
    }
}

TEST_CASE("zero amplitude bits force unit magnitudes") {
  AnalogConstraints c;
  c.amplitude_bits = 0;
  RandomStream rng(83);
  CMatrix x = random_matrix(rng, 5, 5);
  x(2, 2) = 0.0;
  CMatrix q = quantize_analog(x, c);
  for (Eigen::Index i = 0; i < 5; ++i)
    for (Eigen::Index j = 0; j < 5; ++j) {
      if (i == 2 && j == 2) {
        CHECK(q(i, j) == Complex(0.0, 0.0));  // zeros carry no phase to keep
      } else {
        CHECK(std::abs(q(i, j)) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::arg(q(i, j)) == doctest::Approx(std::arg(x(i, j))).epsilon(1e-12));
      }
    }
}

TEST_CASE("linear attenuator grid spans (0, max] in equal steps") {
  AnalogConstraints c;
  c.amplitude_bits = 2;  // levels max * {1/4, 2/4, 3/4, 1}
  CMatrix x(1, 4);
  x << Complex(1.0, 0.0), Complex(0.5, 0.0), Complex(0.26, 0.0), Complex(0.1, 0.0);
  CMatrix q = quantize_analog(x, c);
  CHECK(std::abs(q(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(q(0, 1)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(q(0, 2)) == doctest::Approx(0.25).epsilon(1e-12));
  // Small magnitudes clamp to the lowest nonzero level, never to zero.
  CHECK(std::abs(q(0, 3)) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("logarithmic attenuator grid is uniform in decibels") {
  AnalogConstraints c;
  c.amplitude_bits = 1;  // two levels: max and max - 30 dB
  c.stepping = AmplitudeStepping::Logarithmic;
  c.log_dynamic_range_db = 30.0;
  CMatrix x(1, 3);
  x << Complex(1.0, 0.0), Complex(0.5, 0.0), Complex(0.001, 0.0);
  CMatrix q = quantize_analog(x, c);
  CHECK(std::abs(q(0, 0)) == doctest::Approx(1.0).epsilon(1e-12));
  // 0.5 is -6 dB, nearer the top level than the -30 dB one.
  CHECK(std::abs(q(0, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  // Tiny entries clamp to the grid floor.
  CHECK(std::abs(q(0, 2)) == doctest::Approx(std::pow(10.0, -30.0 / 20.0)).epsilon(1e-12));
}

TEST_CASE("log grid with three bits places eight levels over the range") {
  AnalogConstraints c;
  c.amplitude_bits = 3;
  c.stepping = AmplitudeStepping::Logarithmic;
  c.log_dynamic_range_db = 21.0;  // step 3 dB between 8 levels
  RandomStream rng(84);
  CMatrix x = random_matrix(rng, 8, 8);
  double max_mag = x.cwiseAbs().maxCoeff();
  CMatrix q = quantize_analog(x, c);
  for (Eigen::Index i = 0; i < 8; ++i)
    for (Eigen::Index j = 0; j < 8; ++j) {
      double level_db = 20.0 * std::log10(std::abs(q(i, j)) / max_mag);
      double steps = level_db / 3.0;
      CHECK(std::abs(steps - std::round(steps)) < 1e-9);
      CHECK(level_db > -21.0 - 1e-9);
      CHECK(level_db < 1e-9);
    }
}

TEST_CASE("mask zeroes disconnected entries before the grid is built") {
  AnalogConstraints c;
  c.mask = make_subarray_mask(4, 2);
  c.amplitude_bits = 2;
  CMatrix x = CMatrix::Zero(4, 2);
  // Largest entry sits in a masked-out slot; grids must reference the
  // surviving maximum instead.
  x(0, 1) = Complex(100.0, 0.0);  // masked out (antenna 0 belongs to chain 0)
  x(0, 0) = Complex(2.0, 0.0);
  x(1, 0) = Complex(1.1, 0.0);
  x(2, 1) = Complex(0.6, 0.0);
  CMatrix q = quantize_analog(x, c);
  CHECK(q(0, 1) == Complex(0.0, 0.0));
  CHECK(std::abs(q(0, 0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(q(1, 0)) == doctest::Approx(1.0).epsilon(1e-12));  // 1.1 -> 2 * 2/4
  CHECK(std::abs(q(2, 1)) == doctest::Approx(0.5).epsilon(1e-12));  // 0.6 -> 2 * 1/4
}

TEST_CASE("mask shape must match") {
  AnalogConstraints c;
  c.mask = make_subarray_mask(4, 2);
  RandomStream rng(85);
  CMatrix x = random_matrix(rng, 4, 3);
  CHECK_THROWS_AS(quantize_analog(x, c), std::invalid_argument);
}

TEST_CASE("quantization is idempotent bit for bit") {
  RandomStream rng(86);
  for (int trial = 0; trial < 20; ++trial) {
    AnalogConstraints c;
    c.phase_bits = 1 + trial % 4;
    if (trial % 3 != 0) c.amplitude_bits = trial % 3;
    if (trial % 2 == 0) c.stepping = AmplitudeStepping::Logarithmic;
    if (trial % 5 == 0) c.mask = make_subarray_mask(8, 2);
    CMatrix x = random_matrix(rng, 8, 2);
    CMatrix once = quantize_analog(x, c);
    CMatrix twice = quantize_analog(once, c);
    CHECK(exactly_equal(once, twice));
  }
}

TEST_CASE("exact zeros survive quantization") {
  AnalogConstraints c;
  c.phase_bits = 3;
  c.amplitude_bits = 2;
  CMatrix x = CMatrix::Zero(3, 3);
  x(1, 1) = Complex(1.0, 1.0);
  CMatrix q = quantize_analog(x, c);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j)
      if (i != 1 || j != 1) CHECK(q(i, j) == Complex(0.0, 0.0));
}

TEST_CASE("bit counts outside the supported range are rejected") {
  RandomStream rng(87);
  CMatrix x = random_matrix(rng, 2, 2);
  AnalogConstraints c;
  c.phase_bits = -1;
  CHECK_THROWS_AS(quantize_analog(x, c), std::invalid_argument);
  c.phase_bits = 31;
  CHECK_THROWS_AS(quantize_analog(x, c), std::invalid_argument);
  c = AnalogConstraints{};
  c.amplitude_bits = 2;
  c.stepping = AmplitudeStepping::Logarithmic;
  c.log_dynamic_range_db = 0.0;
  CHECK_THROWS_AS(quantize_analog(x, c), std::invalid_argument);
}

TEST_CASE("subarray mask partitions antennas into contiguous blocks") {
  BoolMatrix m = make_subarray_mask(8, 2);
  REQUIRE(m.rows() == 8);
  REQUIRE(m.cols() == 2);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 2; ++j) CHECK(m(i, j) == (j == i / 4));
  CHECK_THROWS_AS(make_subarray_mask(8, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_subarray_mask(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_subarray_mask(4, 0), std::invalid_argument);
}
