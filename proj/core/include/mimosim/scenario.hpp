#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mimosim/network.hpp"

namespace mimosim {

// Configuration failure; the message carries the JSON path of the offending
// field (e.g. "devices[2].array.kind: ...").
class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(const std::string& message) : std::runtime_error(message) {}
};

struct ArrayConfig {
  std::string kind = "ula";  // "ula" | "upa"
  int num_elements = 0;      // ula
  char axis = 'x';           // ula
  int num_rows = 0;          // upa
  int num_columns = 0;       // upa
  std::string plane = "xz";  // upa
};

struct HybridConfig {
  int rf_chains = 0;
  std::optional<int> phase_bits;      // unset: continuous phases
  std::optional<int> amplitude_bits;  // unset: continuous amplitudes
  AmplitudeStepping stepping = AmplitudeStepping::Linear;
  double log_dynamic_range_db = 30.0;
  std::string mask = "full";  // "full" | "subarray"
};

struct DeviceConfig {
  std::string name;
  Capability capability = Capability::Transceiver;
  Architecture architecture = Architecture::Digital;
  Eigen::Vector3d coordinate = Eigen::Vector3d::Zero();
  ArrayConfig array;
  std::optional<HybridConfig> hybrid;
};

struct SweepConfig {
  std::string parameter;  // "snr_db" | "transmit_power_dbm"
  std::vector<double> values;
};

struct RunConfig {
  int trials = 1;
  std::uint64_t master_seed = 0;
  std::optional<SweepConfig> sweep;
};

struct ScenarioConfig {
  double carrier_frequency_hz = 0.0;
  double propagation_velocity_mps = kDefaultVelocity;
  double symbol_bandwidth_hz = 1.0;
  double noise_psd_dbm_hz = 0.0;
  int num_streams = 1;
  double transmit_power_dbm = 0.0;
  ChannelSpec channel;
  PathLossSpec path_loss;  // carrier and velocity filled from the globals
  std::vector<DeviceConfig> devices;
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string transmit_strategy;
  std::string receive_strategy;
  RunConfig run;
};

// Parses and fully validates scenario JSON: every cross-reference resolved,
// every enum string known, all numeric ranges checked.
ScenarioConfig parse_scenario(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

ArrayGeometry build_array(const ArrayConfig& config);
Device build_device(const DeviceConfig& config);
Network build_network(const ScenarioConfig& config);

// One output row per (sweep value, trial, pair).
struct MetricsRecord {
  int trial = 0;
  std::string sweep_parameter = "none";
  double sweep_value = 0.0;
  std::string pair;  // "source->destination"
  double mutual_information = 0.0;
  double absolute_error = 0.0;
  double normalized_error = 0.0;
  double normalized_error_db = 0.0;
  double snr_db = 0.0;
  double transmit_power_dbm = 0.0;
  double path_loss_db = 0.0;
  double received_power_dbm = 0.0;
  double noise_power_dbm = 0.0;
};

// Realized forward channel of one link in one trial, for the optional dump.
struct ChannelDumpRecord {
  std::string sweep_parameter = "none";
  double sweep_value = 0.0;
  int trial = 0;
  std::string link;  // "head->tail"
  CMatrix matrix;
};

// Clones the baseline network per (sweep value, trial), applies the sweep,
// realizes, configures, and records per-pair metrics.  Fully deterministic
// for a fixed master seed; trial substreams are sweep-independent so a
// sweep that only rescales G sees identical channel draws per trial.
std::vector<MetricsRecord> run_monte_carlo(const ScenarioConfig& config,
                                           std::vector<ChannelDumpRecord>* channel_dump = nullptr);

// Canonical serializations; floating point uses 17 significant digits so
// values round-trip exactly.
std::string format_records_csv(const std::vector<MetricsRecord>& records);
std::string format_records_json(const std::vector<MetricsRecord>& records);
std::vector<MetricsRecord> parse_records_csv(const std::string& text);
std::string format_channel_dump_csv(const std::vector<ChannelDumpRecord>& records);
// Azimuth and elevation cuts of the array gain, one row per sample.
std::string format_pattern_cut_csv(const ArrayGeometry& array, int samples = 361);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace mimosim
