#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "mimosim/types.hpp"

using namespace mimosim;

TEST_CASE("dbm to watts at the reference points") {
  CHECK(watts_from_dbm(0.0) == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(watts_from_dbm(30.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(watts_from_dbm(-30.0) == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(watts_from_dbm(10.0) == doctest::Approx(1e-2).epsilon(1e-12));
}

TEST_CASE("watts to dbm inverts the reference points") {
  CHECK(dbm_from_watts(1e-3) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dbm_from_watts(1.0) == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("dbm round trip") {
  for (double dbm = -120.0; dbm <= 60.0; dbm += 7.3) {
    CHECK(dbm_from_watts(watts_from_dbm(dbm)) == doctest::Approx(dbm).epsilon(1e-12));
  }
}

TEST_CASE("dbm of a nonpositive power is rejected") {
  CHECK_THROWS_AS(dbm_from_watts(0.0), std::invalid_argument);
  CHECK_THROWS_AS(dbm_from_watts(-1.0), std::invalid_argument);
}

TEST_CASE("energy per symbol is power over bandwidth") {
  // 0 dBm spread over 50 MHz.
  CHECK(energy_per_symbol(1e-3, 50e6) == doctest::Approx(2e-11).epsilon(1e-12));
  CHECK(energy_per_symbol(1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(energy_per_symbol(0.0, 1e6) == 0.0);
}

TEST_CASE("energy per symbol rejects bad arguments") {
  CHECK_THROWS_AS(energy_per_symbol(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(energy_per_symbol(1.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(energy_per_symbol(-1.0, 1.0), std::invalid_argument);
}
