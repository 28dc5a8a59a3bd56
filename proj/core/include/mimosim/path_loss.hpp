#pragma once

#include <optional>

#include "mimosim/rng.hpp"
#include "mimosim/types.hpp"

namespace mimosim {

enum class PathLossModel { FreeSpace, FreeSpaceShadowed, TwoSlope };

// Large-scale amplitude-gain models: the realized G multiplies field
// amplitudes, so the power loss is 1/G^2.  Exponents have no defaults on
// purpose; silent defaults hide modeling errors.
struct PathLossSpec {
  PathLossModel model = PathLossModel::FreeSpace;
  double carrier_frequency_hz = 0.0;
  double propagation_velocity_mps = kDefaultVelocity;
  // Unset: callers supply a separation (links pass device distance).
  std::optional<double> distance_m;
  std::optional<double> path_loss_exponent;  // FreeSpace / FreeSpaceShadowed
  double shadowing_variance_db2 = 0.0;       // FreeSpaceShadowed, dB^2
  // TwoSlope parameters; reference_loss is a linear power ratio.
  double reference_distance_m = 1.0;
  double reference_loss = 1.0;
  std::optional<double> exponent_near;
  std::optional<double> exponent_far;

  double wavelength() const;
};

// The interface takes dB (stored linear).
void set_reference_loss_db(PathLossSpec& spec, double db);
double reference_loss_db(const PathLossSpec& spec);

struct GainRealization {
  double amplitude_gain = 0.0;  // G > 0
  double power_loss_db = 0.0;   // 10 log10(1/G^2)
};

// Friis with exponent: G^2 = (lambda / 4 pi)^2 * d^-eta.  Deterministic.
GainRealization realize_fspl(const PathLossSpec& spec, std::optional<double> separation_m = {});

// Friis plus log-normal shadowing: G^2 multiplied by gamma with
// 10 log10(gamma) ~ N(0, shadowing_variance_db2).  Fresh draw per call.
GainRealization realize_fspl_lns(const PathLossSpec& spec, RandomStream& rng,
                                 std::optional<double> separation_m = {});

// 1/G^2 = L0 (d/d0)^eta1 for d <= d0, L0 (d/d0)^eta2 beyond.  Deterministic
// and continuous at d0.
GainRealization realize_two_slope(const PathLossSpec& spec, std::optional<double> separation_m = {});

// Dispatch on spec.model.  The spec distance wins over the separation.
GainRealization realize_gain(const PathLossSpec& spec, RandomStream& rng,
                             std::optional<double> separation_m = {});

}  // namespace mimosim
