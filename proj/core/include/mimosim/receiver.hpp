#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mimosim/analog.hpp"
#include "mimosim/array.hpp"
#include "mimosim/csi.hpp"
#include "mimosim/rng.hpp"
#include "mimosim/transmitter.hpp"
#include "mimosim/types.hpp"

namespace mimosim {

// Receive-side state: noise accounting, combining (fully digital or hybrid),
// and strategy configuration.  Received signal and noise are stored per
// realization so repeated combining reuses the same draw.
class Receiver {
 public:
  explicit Receiver(ArrayGeometry array, Architecture architecture = Architecture::Digital,
                    int rf_chains = 0);

  int num_antennas() const { return array_.num_elements(); }
  int num_streams() const { return num_streams_; }
  int rf_chains() const { return rf_chains_; }
  Architecture architecture() const { return architecture_; }
  const ArrayGeometry& array() const { return array_; }
  ArrayGeometry& array() { return array_; }

  void set_num_streams(int ns);

  // Noise energy per symbol (variance of each antenna's noise sample).
  void set_noise_variance(double sigma2);
  void set_noise_psd_dbm_hz(double psd_dbm_hz);
  double noise_variance() const { return noise_variance_; }

  void set_combiner(const CMatrix& w);           // digital architecture
  void set_analog_combiner(const CMatrix& w);    // hybrid; quantized on set
  void set_baseband_combiner(const CMatrix& w);  // hybrid
  AnalogConstraints& analog_constraints() { return constraints_; }
  const AnalogConstraints& analog_constraints() const { return constraints_; }

  const CMatrix& combiner() const { return combiner_; }
  const CMatrix& analog_combiner() const { return analog_combiner_; }
  const CMatrix& baseband_combiner() const { return baseband_combiner_; }
  // Digital: W.  Hybrid: W_RF * W_BB.
  CMatrix effective_combiner() const;

  void store_received_signal(const CVector& y);
  void draw_and_store_noise(RandomStream& stream);
  void clear_signals();
  bool has_received_signal() const { return received_signal_.size() > 0; }
  bool has_noise() const { return noise_.size() > 0; }
  const CVector& received_signal() const;
  const CVector& noise() const;

  void set_csi(ChannelStateInformation csi) { csi_ = std::move(csi); }
  bool has_csi() const { return csi_.has_value(); }
  const ChannelStateInformation& csi() const;

  // s_hat = W_eff^* (y + n) with the stored signal and noise.
  CVector combine() const;
  CVector combine(const CVector& y, const CVector& n) const;

  // Dispatches to the registered strategy ("eigen", "mmse", "mmse-int").
  void configure(const std::string& strategy);

 private:
  ArrayGeometry array_;
  Architecture architecture_;
  int num_streams_ = 1;
  int rf_chains_ = 0;
  double noise_variance_ = 1.0;
  CMatrix combiner_;
  CMatrix analog_combiner_;
  CMatrix baseband_combiner_;
  AnalogConstraints constraints_;
  CVector received_signal_;
  CVector noise_;
  std::optional<ChannelStateInformation> csi_;
};

// Noise energy per symbol from a one-sided power spectral density in dBm/Hz.
double noise_energy_from_psd_dbm_hz(double psd_dbm_hz);
double noise_psd_dbm_hz_from_energy(double energy);

using ReceiveStrategy = std::function<void(Receiver&, const ChannelStateInformation&)>;
void register_receive_strategy(const std::string& name, ReceiveStrategy strategy);
bool has_receive_strategy(const std::string& name);

// "eigen": top-Ns left singular vectors of the desired effective channel
// (cascaded with the transmit precoder when one is present).
void configure_eigen_combiner(Receiver& rx, const ChannelStateInformation& csi);
// "mmse" / "mmse-int": linear MMSE combiner, optionally whitening against
// the interferers listed in the channel state information.
void configure_mmse_combiner(Receiver& rx, const ChannelStateInformation& csi,
                             bool include_interference);

}  // namespace mimosim
