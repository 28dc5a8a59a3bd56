#pragma once

#include <optional>

#include "mimosim/types.hpp"

namespace mimosim {

enum class AmplitudeStepping { Linear, Logarithmic };

// Hardware constraints of an analog beamforming stage: a connection mask
// (which antenna feeds which RF chain), phase-shifter resolution, and
// attenuator resolution.  Unset bit counts mean unbounded resolution;
// amplitude_bits = 0 removes amplitude control entirely (unit magnitude).
struct AnalogConstraints {
  BoolMatrix mask;  // empty mask = fully connected
  std::optional<int> phase_bits;
  std::optional<int> amplitude_bits;
  AmplitudeStepping stepping = AmplitudeStepping::Linear;
  // Span of the logarithmic attenuator grid below the per-matrix max, dB.
  double log_dynamic_range_db = 30.0;
};

// Projects x onto the constraint set:
//   1. entries are zeroed wherever the mask is false;
//   2. magnitudes snap to the attenuator grid (linear: 2^b levels uniform on
//      (0, max|entry|]; logarithmic: 2^b levels uniform in dB over the
//      dynamic range below max|entry|), or to 1 when amplitude_bits = 0;
//   3. phases snap to the nearest of {2 pi k / 2^b} with wrap-around.
// Ties round toward the smaller-index grid level.  Exact zeros stay zero.
// Idempotent: a second application returns the first result bit for bit.
CMatrix quantize_analog(const CMatrix& x, const AnalogConstraints& c);

// Partitioned architecture: chain l drives the l-th contiguous block of
// num_antennas / num_chains antennas.  The antenna count must divide evenly.
BoolMatrix make_subarray_mask(int num_antennas, int num_chains);

}  // namespace mimosim
