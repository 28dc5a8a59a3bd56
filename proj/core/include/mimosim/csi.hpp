#pragma once

#include <vector>

#include "mimosim/types.hpp"

namespace mimosim {

// A snapshot of one transmitter as seen by one receiver.  The effective
// channel stores G*H (the transmit energy travels separately), so changing
// the transmit power never invalidates distributed CSI.
struct CsiEntry {
  CMatrix effective_channel;   // G * H, receiver rows by transmitter columns
  double large_scale_gain = 1.0;
  double transmit_energy = 0.0;  // Ptx, joules per symbol
  CMatrix precoder;              // that transmitter's precoder when the CSI was cut
  CMatrix symbol_covariance;     // its Rs
};

// Genie channel state at a receiver: the desired entry first, then one entry
// per interfering transmitter.
struct ChannelStateInformation {
  CsiEntry desired;
  std::vector<CsiEntry> interferers;
  double noise_variance = 0.0;  // sigma_n^2 at this receiver, joules
};

}  // namespace mimosim
