#include "mimosim/types.hpp"

#include <cmath>
#include <stdexcept>

namespace mimosim {

double watts_from_dbm(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double dbm_from_watts(double watts) {
  if (watts <= 0.0) throw std::invalid_argument("dbm_from_watts: power must be positive");
  return 10.0 * std::log10(watts) + 30.0;
}

double energy_per_symbol(double power_watts, double bandwidth_hz) {
  if (bandwidth_hz <= 0.0) throw std::invalid_argument("energy_per_symbol: bandwidth must be positive");
  if (power_watts < 0.0) throw std::invalid_argument("energy_per_symbol: power must be nonnegative");
  return power_watts / bandwidth_hz;
}

}  // namespace mimosim
