#pragma once

#include <functional>
#include <optional>
#include <string>

#include "mimosim/analog.hpp"
#include "mimosim/array.hpp"
#include "mimosim/csi.hpp"
#include "mimosim/types.hpp"

namespace mimosim {

enum class Architecture { Digital, Hybrid };

// Transmit-side state: power accounting, precoding (fully digital or
// hybrid analog/digital), symbol covariance, and strategy configuration.
//
// Budget rule: after any setter or strategy, the effective precoder obeys
// ||F||_F^2 <= energy budget (scale-down only; undershooting is fine).
class Transmitter {
 public:
  explicit Transmitter(ArrayGeometry array, Architecture architecture = Architecture::Digital,
                       int rf_chains = 0);

  int num_antennas() const { return array_.num_elements(); }
  int num_streams() const { return num_streams_; }
  int rf_chains() const { return rf_chains_; }
  Architecture architecture() const { return architecture_; }
  const ArrayGeometry& array() const { return array_; }
  ArrayGeometry& array() { return array_; }

  // Power: Ptx = P / B (joules per symbol).
  void set_transmit_power_watts(double watts);
  void set_transmit_power_dbm(double dbm);
  void set_symbol_bandwidth(double hz);
  double transmit_power_watts() const { return power_watts_; }
  double symbol_bandwidth_hz() const { return bandwidth_hz_; }
  double energy_per_symbol() const;

  // Resets the symbol covariance to I/Ns and both energy budgets to Ns;
  // drops any precoder and symbol whose shapes no longer apply.
  void set_num_streams(int ns);

  void set_precoder_energy_budget(double e);
  double precoder_energy_budget() const { return precoder_budget_; }
  void set_digital_energy_budget(double e);  // hybrid baseband budget
  double digital_energy_budget() const { return digital_budget_; }

  void set_precoder(const CMatrix& f);           // digital architecture
  void set_analog_precoder(const CMatrix& f);    // hybrid; quantized on set
  void set_baseband_precoder(const CMatrix& f);  // hybrid; budgets enforced
  AnalogConstraints& analog_constraints() { return constraints_; }
  const AnalogConstraints& analog_constraints() const { return constraints_; }

  const CMatrix& precoder() const { return precoder_; }
  const CMatrix& analog_precoder() const { return analog_precoder_; }
  const CMatrix& baseband_precoder() const { return baseband_precoder_; }
  // Digital: F.  Hybrid: F_RF * F_BB.
  CMatrix effective_precoder() const;

  void set_symbol_covariance(const CMatrix& rs);  // Ns x Ns Hermitian PSD
  const CMatrix& symbol_covariance() const { return symbol_covariance_; }

  void set_transmit_symbol(const CVector& s);
  bool has_symbol() const { return symbol_.size() > 0; }
  const CVector& transmit_symbol() const { return symbol_; }

  void set_csi(ChannelStateInformation csi) { csi_ = std::move(csi); }
  bool has_csi() const { return csi_.has_value(); }
  const ChannelStateInformation& csi() const;

  // Zeroes the precoder (digital) or the baseband stage (hybrid).
  void turn_off();

  // x = sqrt(Ptx) * F * s.
  CVector transmit() const { return transmit(symbol_); }
  CVector transmit(const CVector& s) const;

  // Dispatches to the registered strategy ("eigen" built in) with stored CSI.
  void configure(const std::string& strategy);

 private:
  void enforce_budgets();

  ArrayGeometry array_;
  Architecture architecture_;
  double power_watts_ = 1.0;
  double bandwidth_hz_ = 1.0;
  int num_streams_ = 1;
  double precoder_budget_ = 1.0;
  CMatrix precoder_;
  CMatrix symbol_covariance_;
  CVector symbol_;
  int rf_chains_ = 0;
  CMatrix analog_precoder_;
  CMatrix baseband_precoder_;
  AnalogConstraints constraints_;
  double digital_budget_ = 1.0;
  std::optional<ChannelStateInformation> csi_;
};

// Scale-down-only budget projection: returns F untouched when
// ||F||^2 <= e, else F * sqrt(e / ||F||^2).
CMatrix enforce_precoder_budget(const CMatrix& f, double e);

using TransmitStrategy = std::function<void(Transmitter&, const ChannelStateInformation&)>;
// Registers (or replaces) a strategy; names are the scenario vocabulary.
void register_transmit_strategy(const std::string& name, TransmitStrategy strategy);
bool has_transmit_strategy(const std::string& name);

// The built-in "eigen" strategy: F = sqrt(E/Ns) * top-Ns right singular
// vectors of the desired effective channel.  Hybrid architecture factors it
// through phase extraction and a least-squares baseband fit.
void configure_eigen_precoder(Transmitter& tx, const ChannelStateInformation& csi);

}  // namespace mimosim
