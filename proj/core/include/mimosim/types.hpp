#pragma once

#include <Eigen/Dense>
#include <complex>

namespace mimosim {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

// Default propagation velocity (m/s).
inline constexpr double kDefaultVelocity = 3e8;

// dBm <-> watts and the energy-per-symbol bookkeeping shared by the
// transmitter and receiver modules.
double watts_from_dbm(double dbm);
double dbm_from_watts(double watts);

// Ptx = P / B: energy radiated per symbol (J) for power P (W) over symbol
// bandwidth B (Hz).  Throws std::invalid_argument for B <= 0 or P < 0.
double energy_per_symbol(double power_watts, double bandwidth_hz);

}  // namespace mimosim
