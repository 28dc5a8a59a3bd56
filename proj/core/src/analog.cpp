#include "mimosim/analog.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mimosim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Entries already this close to their grid targets are kept bit-for-bit,
// which makes a second quantization pass an exact no-op.
constexpr double kGridGuard = 1e-12;

void check_bits(const std::optional<int>& bits, const char* what) {
  if (bits && (*bits < 0 || *bits > 30))
    throw std::invalid_argument(std::string("quantize_analog: ") + what + " bits out of range [0, 30]");
}

// Nearest grid index for t (grid at integers), ties toward the smaller index.
long nearest_index(double t) { return static_cast<long>(std::ceil(t - 0.5)); }

}  // namespace

CMatrix quantize_analog(const CMatrix& x, const AnalogConstraints& c) {
  if (c.mask.size() != 0 && (c.mask.rows() != x.rows() || c.mask.cols() != x.cols()))
    throw std::invalid_argument("quantize_analog: mask shape does not match matrix shape");
  check_bits(c.phase_bits, "phase");
  check_bits(c.amplitude_bits, "amplitude");
  if (c.amplitude_bits && *c.amplitude_bits > 0 && c.stepping == AmplitudeStepping::Logarithmic &&
      !(c.log_dynamic_range_db > 0.0))
    throw std::invalid_argument("quantize_analog: logarithmic dynamic range must be positive");

  CMatrix out = x;
  const bool masked = c.mask.size() != 0;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j)
      if (masked && !c.mask(i, j)) out(i, j) = Complex(0.0, 0.0);

  // Attenuator grids reference the largest surviving magnitude.
  double max_mag = 0.0;
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j) max_mag = std::max(max_mag, std::abs(out(i, j)));
  if (max_mag == 0.0) return out;

  const bool snap_amplitude = c.amplitude_bits.has_value();
  const bool snap_phase = c.phase_bits.has_value();
  const double amp_levels = snap_amplitude ? std::exp2(static_cast<double>(*c.amplitude_bits)) : 0.0;
  const double phase_step = snap_phase ? kTwoPi / std::exp2(static_cast<double>(*c.phase_bits)) : 0.0;
  const long phase_count = snap_phase ? static_cast<long>(std::exp2(static_cast<double>(*c.phase_bits))) : 0;
  const double top_db = 20.0 * std::log10(max_mag);
  const double base_db = top_db - c.log_dynamic_range_db;
  const double step_db = snap_amplitude && amp_levels > 1.0
                             ? c.log_dynamic_range_db / (amp_levels - 1.0)
                             : 0.0;

  for (Eigen::Index i = 0; i < out.rows(); ++i) {
    for (Eigen::Index j = 0; j < out.cols(); ++j) {
      const Complex z = out(i, j);
      const double mag = std::abs(z);
      if (mag == 0.0) continue;  // zeros carry no phase; resurrecting them is the caller's business

      double level = mag;
      if (snap_amplitude) {
        if (*c.amplitude_bits == 0) {
          level = 1.0;
        } else if (c.stepping == AmplitudeStepping::Linear) {
          long k = nearest_index(mag / max_mag * amp_levels);
          k = std::max(1L, std::min(static_cast<long>(amp_levels), k));
          level = max_mag * (static_cast<double>(k) / amp_levels);
        } else {
          const double mag_db = 20.0 * std::log10(mag);
          long k = nearest_index((mag_db - base_db) / step_db);
          k = std::max(0L, std::min(static_cast<long>(amp_levels) - 1, k));
          level = std::pow(10.0, (base_db + static_cast<double>(k) * step_db) / 20.0);
        }
      }

      double target_phase = std::arg(z);
      if (snap_phase) {
        long k = nearest_index(std::arg(z) / phase_step);
        k = ((k % phase_count) + phase_count) % phase_count;
        target_phase = static_cast<double>(k) * phase_step;
      }

      double phase_err = std::arg(z) - target_phase;
      phase_err = std::remainder(phase_err, kTwoPi);
      const bool on_grid = std::abs(mag - level) <= kGridGuard * level && std::abs(phase_err) <= kGridGuard;
      if (on_grid) continue;

      if (snap_phase)
        out(i, j) = level * Complex(std::cos(target_phase), std::sin(target_phase));
      else
        out(i, j) = z * (level / mag);  // keep the exact direction
    }
  }
  return out;
}

BoolMatrix make_subarray_mask(int num_antennas, int num_chains) {
  if (num_antennas <= 0 || num_chains <= 0)
    throw std::invalid_argument("antenna and chain counts must be > 0");
  if (num_antennas % num_chains != 0)
    throw std::invalid_argument("num_chains must divide num_antennas evenly");
  const int block = num_antennas / num_chains;
  BoolMatrix mask = BoolMatrix::Constant(num_antennas, num_chains, false);
  for (int i = 0; i < num_antennas; ++i) mask(i, i / block) = true;
  return mask;
}

}  // namespace mimosim
