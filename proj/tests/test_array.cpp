#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "doctest.h"
#include "mimosim/array.hpp"
#include "mimosim/rng.hpp"
#include "test_helpers.hpp"

using namespace mimosim;

namespace {
constexpr double kPi = std::numbers::pi;
constexpr Complex kJ{0.0, 1.0};
}  // namespace

TEST_CASE("ula geometry uses half-wavelength spacing from the origin") {
  ArrayGeometry a = make_ula(4);
  REQUIRE(a.num_elements() == 4);
  for (int i = 0; i < 4; ++i) {
    CHECK(a.coordinates()(i, 0) == doctest::Approx(0.5 * i).epsilon(1e-15));
    CHECK(a.coordinates()(i, 1) == 0.0);
    CHECK(a.coordinates()(i, 2) == 0.0);
    CHECK(a.weights()(i) == Complex(1.0, 0.0));
  }
}

TEST_CASE("ula respects the axis argument") {
  ArrayGeometry z = make_ula(3, 'z');
  CHECK(z.coordinates()(2, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(z.coordinates()(2, 0) == 0.0);
  CHECK_THROWS_AS(make_ula(3, 'q'), std::invalid_argument);
  CHECK_THROWS_AS(make_ula(-1), std::invalid_argument);
  CHECK(make_ula(0).num_elements() == 0);
}

TEST_CASE("upa is row-major with the first plane axis varying fastest") {
  ArrayGeometry a = make_upa(2, 3, "xz");
  REQUIRE(a.num_elements() == 6);
  // Row m, column n sits at (0.5 n, 0, 0.5 m).
  for (int m = 0; m < 2; ++m) {
    for (int n = 0; n < 3; ++n) {
      int k = m * 3 + n;
      CHECK(a.coordinates()(k, 0) == doctest::Approx(0.5 * n).epsilon(1e-15));
      CHECK(a.coordinates()(k, 1) == 0.0);
      CHECK(a.coordinates()(k, 2) == doctest::Approx(0.5 * m).epsilon(1e-15));
    }
  }
  CHECK_THROWS_AS(make_upa(2, 3, "zz"), std::invalid_argument);
}

TEST_CASE("response is referenced to the first element") {
  ArrayGeometry a = make_ula(5);
  RandomStream rng(41);
  for (int i = 0; i < 50; ++i) {
    Direction d{rng.uniform(-kPi, kPi), rng.uniform(-kPi / 2, kPi / 2)};
    CVector r = a.response(d);
    REQUIRE(r.size() == 5);
    CHECK(r(0) == Complex(1.0, 0.0));  // exact by construction
    for (int k = 0; k < 5; ++k) CHECK(std::abs(std::abs(r(k)) - 1.0) < 1e-14);
  }
}

TEST_CASE("ula endfire response alternates sign") {
  // x-axis array toward +x: phase increment per element is pi.
  ArrayGeometry a = make_ula(4);
  CVector r = a.response({kPi / 2, 0.0});
  for (int k = 0; k < 4; ++k) {
    Complex expected = (k % 2 == 0) ? Complex(1.0, 0.0) : Complex(-1.0, 0.0);
    CHECK(std::abs(r(k) - expected) < 1e-12);
  }
}

TEST_CASE("response matches the phase profile formula") {
  ArrayGeometry a = make_upa(2, 2, "xz");
  Direction d{0.7, -0.3};
  CVector r = a.response(d);
  auto zeta = [&](int i) {
    double x = a.coordinates()(i, 0), y = a.coordinates()(i, 1), z = a.coordinates()(i, 2);
    return x * std::sin(d.azimuth) * std::cos(d.elevation) +
           y * std::cos(d.azimuth) * std::cos(d.elevation) + z * std::sin(d.elevation);
  };
  for (int i = 0; i < 4; ++i) {
    Complex expected = std::exp(kJ * (2.0 * kPi * (zeta(i) - zeta(0))));
    CHECK(std::abs(r(i) - expected) < 1e-12);
  }
}

TEST_CASE("broadside response of an x-axis array is all ones") {
  ArrayGeometry a = make_ula(6);
  CVector r = a.response({0.0, 0.0});
  for (int i = 0; i < 6; ++i) CHECK(std::abs(r(i) - Complex(1.0, 0.0)) < 1e-14);
}

TEST_CASE("gain is a plain inner product without conjugation") {
  ArrayGeometry a = make_ula(4);
  Direction d{0.9, 0.2};
  CVector resp = a.response(d);
  CVector w(4);
  w << Complex(0.5, 0.25), Complex(0.0, 1.0), Complex(-1.0, 0.5), Complex(2.0, 0.0);
  a.set_weights(w);
  Complex expected = (w.transpose() * resp)(0);
  CHECK(std::abs(a.gain(d) - expected) < 1e-12);

  // Conjugate-matched weights sum the element count.
  a.set_weights(resp.conjugate());
  CHECK(std::abs(a.gain(d) - Complex(4.0, 0.0)) < 1e-12);
}

TEST_CASE("weighted response is the entrywise product") {
  ArrayGeometry a = make_ula(3);
  CVector w(3);
  w << Complex(1.0, 0.0), Complex(0.0, 2.0), Complex(-0.5, 0.5);
  a.set_weights(w);
  Direction d{-1.1, 0.4};
  CVector resp = a.response(d);
  CVector wr = a.weighted_response(d);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(wr(i) - w(i) * resp(i)) < 1e-12);
}

TEST_CASE("set_weights validates the length") {
  ArrayGeometry a = make_ula(3);
  CHECK_THROWS_AS(a.set_weights(CVector::Ones(4)), std::invalid_argument);
}

TEST_CASE("rotation is an isometry of the geometry") {
  ArrayGeometry a = make_upa(3, 3, "xy");
  Eigen::MatrixXd before = a.coordinates();
  a.rotate(0.3, -1.1, 2.2);
  Eigen::MatrixXd after = a.coordinates();
  for (int i = 0; i < a.num_elements(); ++i) {
    for (int j = 0; j < a.num_elements(); ++j) {
      double d0 = (before.row(i) - before.row(j)).norm();
      double d1 = (after.row(i) - after.row(j)).norm();
      CHECK(d1 == doctest::Approx(d0).epsilon(1e-12));
    }
    CHECK(after.row(i).norm() == doctest::Approx(before.row(i).norm()).epsilon(1e-12));
  }
}

TEST_CASE("quarter turn about z maps an x-axis array onto the y axis") {
  ArrayGeometry a = make_ula(4);
  a.rotate(0.0, 0.0, kPi / 2);
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(a.coordinates()(i, 0)) < 1e-12);
    CHECK(a.coordinates()(i, 1) == doctest::Approx(0.5 * i).epsilon(1e-10));
    CHECK(std::abs(a.coordinates()(i, 2)) < 1e-12);
  }
}

TEST_CASE("translate recenters or shifts") {
  ArrayGeometry a = make_ula(4);
  a.translate(Eigen::Vector3d(1.0, 2.0, 3.0));
  CHECK(a.coordinates()(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.coordinates()(0, 1) == doctest::Approx(2.0).epsilon(1e-15));
  a.translate();  // centroid to origin
  Eigen::RowVector3d centroid = a.coordinates().colwise().mean();
  CHECK(centroid.norm() < 1e-12);
}

TEST_CASE("translation leaves the response unchanged") {
  // Responses are relative to the first element, so a rigid shift cancels.
  ArrayGeometry a = make_ula(4);
  Direction d{0.8, -0.1};
  CVector before = a.response(d);
  a.translate(Eigen::Vector3d(5.0, -2.0, 1.5));
  CVector after = a.response(d);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(before(i) - after(i)) < 1e-12);
}

TEST_CASE("element bookkeeping on add and remove") {
  ArrayGeometry a = make_ula(2);
  a.set_weights((CVector(2) << Complex(2.0, 0.0), Complex(3.0, 0.0)).finished());
  a.add_element(Eigen::Vector3d(0.0, 1.0, 0.0));
  REQUIRE(a.num_elements() == 3);
  CHECK(a.weights()(2) == Complex(1.0, 0.0));  // new elements start at unit weight
  CHECK(a.weights()(0) == Complex(2.0, 0.0));
  a.remove_element();  // default removes the last
  CHECK(a.num_elements() == 2);
  a.remove_element(0);
  CHECK(a.num_elements() == 1);
  CHECK(a.weights()(0) == Complex(3.0, 0.0));
  CHECK_THROWS_AS(a.remove_element(5), std::out_of_range);
}

TEST_CASE("pattern cut covers the full range and matches gain") {
  ArrayGeometry a = make_ula(4);
  auto cut = a.pattern_cut(PatternCut::Azimuth);
  REQUIRE(cut.size() == 361);
  CHECK(cut.front().first == doctest::Approx(-kPi).epsilon(1e-12));
  CHECK(cut.back().first == doctest::Approx(kPi).epsilon(1e-12));
  // Middle sample is broadside: all-ones weights sum to the element count.
  CHECK(std::abs(cut[180].second - Complex(4.0, 0.0)) < 1e-12);
  for (int k : {10, 100, 250}) {
    Complex expected = a.gain({cut[k].first, 0.0});
    CHECK(std::abs(cut[k].second - expected) < 1e-12);
  }

  auto el = a.pattern_cut(PatternCut::Elevation, 181);
  REQUIRE(el.size() == 181);
  CHECK(el.front().first == doctest::Approx(-kPi / 2).epsilon(1e-12));
  CHECK(el.back().first == doctest::Approx(kPi / 2).epsilon(1e-12));
  Complex expected = a.gain({0.0, el[40].first});
  CHECK(std::abs(el[40].second - expected) < 1e-12);
}
