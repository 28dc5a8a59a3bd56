#include "mimosim/scenario.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace mimosim {

namespace {

using nlohmann::json;

constexpr const char* kCsvHeader =
    "trial,sweep_parameter,sweep_value,pair,mutual_information,absolute_error,"
    "normalized_error,normalized_error_db,snr_db,transmit_power_dbm,path_loss_db,"
    "received_power_dbm,noise_power_dbm";

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ScenarioError(path + ": " + message);
}

const json& member(const json& node, const std::string& path, const std::string& key) {
  auto it = node.find(key);
  if (it == node.end()) fail(path + "." + key, "missing required field");
  return *it;
}

const json* optional_member(const json& node, const std::string& key) {
  auto it = node.find(key);
  return it == node.end() ? nullptr : &*it;
}

void require_object(const json& node, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!node.is_object()) fail(path, "expected an object");
  for (const auto& item : node.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        known = true;
        break;
      }
    if (!known) fail(path + "." + item.key(), "unexpected field");
  }
}

double as_double(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

double as_finite(const json& v, const std::string& path) {
  double d = as_double(v, path);
  if (!std::isfinite(d)) fail(path, "expected a finite number");
  return d;
}

int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  return v.get<int>();
}

std::uint64_t as_uint64(const json& v, const std::string& path) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0)
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  fail(path, "expected a nonnegative integer");
}

bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) fail(path, "expected a boolean");
  return v.get<bool>();
}

std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) fail(path, "expected a string");
  return v.get<std::string>();
}

ChannelSpec parse_channel(const json& node, const std::string& path) {
  require_object(node, path,
                 {"model", "rician_kappa", "num_clusters", "num_rays", "angle_spread_rad",
                  "aod_azimuth_rad", "aod_elevation_rad", "aoa_azimuth_rad", "aoa_elevation_rad",
                  "force_normalization", "normalized_energy"});
  ChannelSpec spec;
  std::string model = as_string(member(node, path, "model"), path + ".model");
  if (model == "rayleigh")
    spec.model = ChannelModel::Rayleigh;
  else if (model == "los")
    spec.model = ChannelModel::Los;
  else if (model == "rician")
    spec.model = ChannelModel::Rician;
  else if (model == "ray-cluster")
    spec.model = ChannelModel::RayCluster;
  else if (model == "spherical")
    spec.model = ChannelModel::SphericalWave;
  else
    fail(path + ".model", "unknown channel model '" + model + "'");

  if (const json* v = optional_member(node, "rician_kappa")) {
    spec.rician_kappa = as_finite(*v, path + ".rician_kappa");
    if (spec.rician_kappa < 0.0) fail(path + ".rician_kappa", "must be >= 0");
  }
  if (const json* v = optional_member(node, "num_clusters")) {
    spec.num_clusters = as_int(*v, path + ".num_clusters");
    if (spec.num_clusters < 1) fail(path + ".num_clusters", "must be >= 1");
  }
  if (const json* v = optional_member(node, "num_rays")) {
    spec.num_rays = as_int(*v, path + ".num_rays");
    if (spec.num_rays < 1) fail(path + ".num_rays", "must be >= 1");
  }
  if (const json* v = optional_member(node, "angle_spread_rad")) {
    spec.angle_spread_rad = as_finite(*v, path + ".angle_spread_rad");
    if (spec.angle_spread_rad <= 0.0) fail(path + ".angle_spread_rad", "must be > 0");
  }

  const json* aod_az = optional_member(node, "aod_azimuth_rad");
  const json* aod_el = optional_member(node, "aod_elevation_rad");
  if ((aod_az == nullptr) != (aod_el == nullptr))
    fail(path, "aod_azimuth_rad and aod_elevation_rad must be given together");
  if (aod_az != nullptr) {
    Direction d{as_finite(*aod_az, path + ".aod_azimuth_rad"),
                as_finite(*aod_el, path + ".aod_elevation_rad")};
    try {
      validate_direction(d);
    } catch (const std::exception& e) {
      fail(path + ".aod_azimuth_rad", e.what());
    }
    spec.los_aod = d;
  }
  const json* aoa_az = optional_member(node, "aoa_azimuth_rad");
  const json* aoa_el = optional_member(node, "aoa_elevation_rad");
  if ((aoa_az == nullptr) != (aoa_el == nullptr))
    fail(path, "aoa_azimuth_rad and aoa_elevation_rad must be given together");
  if (aoa_az != nullptr) {
    Direction d{as_finite(*aoa_az, path + ".aoa_azimuth_rad"),
                as_finite(*aoa_el, path + ".aoa_elevation_rad")};
    try {
      validate_direction(d);
    } catch (const std::exception& e) {
      fail(path + ".aoa_azimuth_rad", e.what());
    }
    spec.los_aoa = d;
  }

  if (const json* v = optional_member(node, "force_normalization"))
    spec.force_normalization = as_bool(*v, path + ".force_normalization");
  if (const json* v = optional_member(node, "normalized_energy")) {
    double e = as_finite(*v, path + ".normalized_energy");
    if (e <= 0.0) fail(path + ".normalized_energy", "must be > 0");
    spec.normalized_energy = e;
  }
  return spec;
}

PathLossSpec parse_path_loss(const json& node, const std::string& path) {
  require_object(node, path,
                 {"model", "path_loss_exponent", "shadowing_variance_db2", "distance_m",
                  "reference_distance_m", "reference_loss_db", "exponent_near", "exponent_far"});
  PathLossSpec spec;
  std::string model = as_string(member(node, path, "model"), path + ".model");
  if (model == "fspl")
    spec.model = PathLossModel::FreeSpace;
  else if (model == "fspl-lns")
    spec.model = PathLossModel::FreeSpaceShadowed;
  else if (model == "two-slope")
    spec.model = PathLossModel::TwoSlope;
  else
    fail(path + ".model", "unknown path loss model '" + model + "'");

  if (const json* v = optional_member(node, "distance_m")) {
    double d = as_finite(*v, path + ".distance_m");
    if (d <= 0.0) fail(path + ".distance_m", "must be > 0");
    spec.distance_m = d;
  }

  if (spec.model == PathLossModel::TwoSlope) {
    spec.reference_distance_m =
        as_finite(member(node, path, "reference_distance_m"), path + ".reference_distance_m");
    if (spec.reference_distance_m <= 0.0) fail(path + ".reference_distance_m", "must be > 0");
    set_reference_loss_db(
        spec, as_finite(member(node, path, "reference_loss_db"), path + ".reference_loss_db"));
    spec.exponent_near = as_finite(member(node, path, "exponent_near"), path + ".exponent_near");
    spec.exponent_far = as_finite(member(node, path, "exponent_far"), path + ".exponent_far");
  } else {
    // The exponent is always explicit; a silent default hides modeling bugs.
    spec.path_loss_exponent =
        as_finite(member(node, path, "path_loss_exponent"), path + ".path_loss_exponent");
    if (spec.model == PathLossModel::FreeSpaceShadowed) {
      spec.shadowing_variance_db2 = as_finite(member(node, path, "shadowing_variance_db2"),
                                              path + ".shadowing_variance_db2");
      if (spec.shadowing_variance_db2 < 0.0) fail(path + ".shadowing_variance_db2", "must be >= 0");
    }
  }
  return spec;
}

ArrayConfig parse_array(const json& node, const std::string& path) {
  require_object(node, path, {"kind", "num_elements", "axis", "num_rows", "num_columns", "plane"});
  ArrayConfig config;
  config.kind = as_string(member(node, path, "kind"), path + ".kind");
  if (config.kind == "ula") {
    config.num_elements = as_int(member(node, path, "num_elements"), path + ".num_elements");
    if (config.num_elements < 1) fail(path + ".num_elements", "must be >= 1");
    if (const json* v = optional_member(node, "axis")) {
      std::string axis = as_string(*v, path + ".axis");
      if (axis != "x" && axis != "y" && axis != "z")
        fail(path + ".axis", "must be one of \"x\", \"y\", \"z\"");
      config.axis = axis[0];
    }
  } else if (config.kind == "upa") {
    config.num_rows = as_int(member(node, path, "num_rows"), path + ".num_rows");
    config.num_columns = as_int(member(node, path, "num_columns"), path + ".num_columns");
    if (config.num_rows < 1) fail(path + ".num_rows", "must be >= 1");
    if (config.num_columns < 1) fail(path + ".num_columns", "must be >= 1");
    if (const json* v = optional_member(node, "plane")) {
      config.plane = as_string(*v, path + ".plane");
      if (config.plane != "xz" && config.plane != "xy" && config.plane != "yz")
        fail(path + ".plane", "must be one of \"xz\", \"xy\", \"yz\"");
    }
  } else {
    fail(path + ".kind", "unknown array kind '" + config.kind + "'");
  }
  return config;
}

int array_element_count(const ArrayConfig& config) {
  return config.kind == "ula" ? config.num_elements : config.num_rows * config.num_columns;
}

HybridConfig parse_hybrid(const json& node, const std::string& path, int num_antennas) {
  require_object(node, path,
                 {"rf_chains", "phase_bits", "amplitude_bits", "amplitude_stepping",
                  "log_dynamic_range_db", "mask"});
  HybridConfig config;
  config.rf_chains = as_int(member(node, path, "rf_chains"), path + ".rf_chains");
  if (config.rf_chains < 1) fail(path + ".rf_chains", "must be >= 1");
  if (config.rf_chains > num_antennas) fail(path + ".rf_chains", "exceeds the antenna count");
  if (const json* v = optional_member(node, "phase_bits")) {
    int bits = as_int(*v, path + ".phase_bits");
    if (bits < 0 || bits > 30) fail(path + ".phase_bits", "must be in [0, 30]");
    config.phase_bits = bits;
  }
  if (const json* v = optional_member(node, "amplitude_bits")) {
    int bits = as_int(*v, path + ".amplitude_bits");
    if (bits < 0 || bits > 30) fail(path + ".amplitude_bits", "must be in [0, 30]");
    config.amplitude_bits = bits;
  }
  if (const json* v = optional_member(node, "amplitude_stepping")) {
    std::string stepping = as_string(*v, path + ".amplitude_stepping");
    if (stepping == "linear")
      config.stepping = AmplitudeStepping::Linear;
    else if (stepping == "log")
      config.stepping = AmplitudeStepping::Logarithmic;
    else
      fail(path + ".amplitude_stepping", "must be \"linear\" or \"log\"");
  }
  if (const json* v = optional_member(node, "log_dynamic_range_db")) {
    config.log_dynamic_range_db = as_finite(*v, path + ".log_dynamic_range_db");
    if (config.log_dynamic_range_db <= 0.0) fail(path + ".log_dynamic_range_db", "must be > 0");
  }
  if (const json* v = optional_member(node, "mask")) {
    config.mask = as_string(*v, path + ".mask");
    if (config.mask != "full" && config.mask != "subarray")
      fail(path + ".mask", "must be \"full\" or \"subarray\"");
    if (config.mask == "subarray" && num_antennas % config.rf_chains != 0)
      fail(path + ".mask", "subarray needs rf_chains to divide the antenna count");
  }
  return config;
}

DeviceConfig parse_device(const json& node, const std::string& path) {
  require_object(node, path, {"name", "capability", "architecture", "coordinate", "array", "hybrid"});
  DeviceConfig config;
  config.name = as_string(member(node, path, "name"), path + ".name");
  if (config.name.empty()) fail(path + ".name", "must not be empty");
  if (config.name.find_first_of(",\"\n\r") != std::string::npos)
    fail(path + ".name", "must not contain commas, quotes, or line breaks");

  if (const json* v = optional_member(node, "capability")) {
    std::string capability = as_string(*v, path + ".capability");
    if (capability == "transmitter")
      config.capability = Capability::Transmitter;
    else if (capability == "receiver")
      config.capability = Capability::Receiver;
    else if (capability == "transceiver")
      config.capability = Capability::Transceiver;
    else
      fail(path + ".capability", "unknown capability '" + capability + "'");
  }
  if (const json* v = optional_member(node, "architecture")) {
    std::string architecture = as_string(*v, path + ".architecture");
    if (architecture == "digital")
      config.architecture = Architecture::Digital;
    else if (architecture == "hybrid")
      config.architecture = Architecture::Hybrid;
    else
      fail(path + ".architecture", "unknown architecture '" + architecture + "'");
  }
  if (const json* v = optional_member(node, "coordinate")) {
    if (!v->is_array() || v->size() != 3) fail(path + ".coordinate", "expected [x, y, z]");
    for (int i = 0; i < 3; ++i)
      config.coordinate(i) =
          as_finite((*v)[i], path + ".coordinate[" + std::to_string(i) + "]");
  }
  config.array = parse_array(member(node, path, "array"), path + ".array");

  const json* hybrid = optional_member(node, "hybrid");
  if (config.architecture == Architecture::Hybrid) {
    if (hybrid == nullptr) fail(path + ".hybrid", "required for the hybrid architecture");
    config.hybrid = parse_hybrid(*hybrid, path + ".hybrid", array_element_count(config.array));
  } else if (hybrid != nullptr) {
    fail(path + ".hybrid", "only valid for the hybrid architecture");
  }
  return config;
}

SweepConfig parse_sweep(const json& node, const std::string& path) {
  require_object(node, path, {"parameter", "values"});
  SweepConfig config;
  config.parameter = as_string(member(node, path, "parameter"), path + ".parameter");
  if (config.parameter != "snr_db" && config.parameter != "transmit_power_dbm")
    fail(path + ".parameter", "must be \"snr_db\" or \"transmit_power_dbm\"");
  const json& values = member(node, path, "values");
  if (!values.is_array() || values.empty()) fail(path + ".values", "expected a nonempty array");
  for (std::size_t i = 0; i < values.size(); ++i)
    config.values.push_back(as_finite(values[i], path + ".values[" + std::to_string(i) + "]"));
  return config;
}

RunConfig parse_run(const json& node, const std::string& path) {
  require_object(node, path, {"trials", "master_seed", "sweep"});
  RunConfig config;
  if (const json* v = optional_member(node, "trials")) {
    config.trials = as_int(*v, path + ".trials");
    if (config.trials < 0) fail(path + ".trials", "must be >= 0");
  }
  if (const json* v = optional_member(node, "master_seed"))
    config.master_seed = as_uint64(*v, path + ".master_seed");
  if (const json* v = optional_member(node, "sweep"))
    config.sweep = parse_sweep(*v, path + ".sweep");
  return config;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return format_double(v);
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char ch : s) {
    switch (ch) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      case '\r':
        out += "\\r";
        break;
      case '\t':
        out += "\\t";
        break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_csv_double(const std::string& field, int lineno) {
  const char* begin = field.c_str();
  char* end = nullptr;
  double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    throw ScenarioError("csv line " + std::to_string(lineno) + ": malformed number '" + field +
                        "'");
  return v;
}

// Symbols follow the configured covariance: s = L z with Rs = L L^H.
CVector draw_symbol(const Transmitter& tx, RandomStream& stream) {
  int ns = tx.num_streams();
  CVector z(ns);
  for (int i = 0; i < ns; ++i) z(i) = stream.complex_normal(1.0);
  Eigen::LLT<CMatrix> llt(tx.symbol_covariance());
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("symbol covariance is not positive definite");
  return llt.matrixL() * z;
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ScenarioError(std::string("invalid JSON: ") + e.what());
  }
  const std::string path = "scenario";
  require_object(root, path,
                 {"carrier_frequency_hz", "propagation_velocity_mps", "symbol_bandwidth_hz",
                  "noise_psd_dbm_hz", "num_streams", "transmit_power_dbm", "channel", "path_loss",
                  "devices", "pairs", "strategies", "run"});

  ScenarioConfig config;
  config.carrier_frequency_hz =
      as_finite(member(root, path, "carrier_frequency_hz"), path + ".carrier_frequency_hz");
  if (config.carrier_frequency_hz <= 0.0) fail(path + ".carrier_frequency_hz", "must be > 0");
  if (const json* v = optional_member(root, "propagation_velocity_mps")) {
    config.propagation_velocity_mps = as_finite(*v, path + ".propagation_velocity_mps");
    if (config.propagation_velocity_mps <= 0.0)
      fail(path + ".propagation_velocity_mps", "must be > 0");
  }
  config.symbol_bandwidth_hz =
      as_finite(member(root, path, "symbol_bandwidth_hz"), path + ".symbol_bandwidth_hz");
  if (config.symbol_bandwidth_hz <= 0.0) fail(path + ".symbol_bandwidth_hz", "must be > 0");
  config.noise_psd_dbm_hz =
      as_finite(member(root, path, "noise_psd_dbm_hz"), path + ".noise_psd_dbm_hz");
  if (const json* v = optional_member(root, "num_streams")) {
    config.num_streams = as_int(*v, path + ".num_streams");
    if (config.num_streams < 1) fail(path + ".num_streams", "must be >= 1");
  }
  config.transmit_power_dbm =
      as_finite(member(root, path, "transmit_power_dbm"), path + ".transmit_power_dbm");

  config.channel = parse_channel(member(root, path, "channel"), path + ".channel");
  config.path_loss = parse_path_loss(member(root, path, "path_loss"), path + ".path_loss");
  config.path_loss.carrier_frequency_hz = config.carrier_frequency_hz;
  config.path_loss.propagation_velocity_mps = config.propagation_velocity_mps;

  const json& devices = member(root, path, "devices");
  if (!devices.is_array() || devices.empty())
    fail(path + ".devices", "expected a nonempty array");
  for (std::size_t i = 0; i < devices.size(); ++i) {
    DeviceConfig dc = parse_device(devices[i], path + ".devices[" + std::to_string(i) + "]");
    for (const DeviceConfig& existing : config.devices)
      if (existing.name == dc.name)
        fail(path + ".devices[" + std::to_string(i) + "].name",
             "duplicate device name '" + dc.name + "'");
    config.devices.push_back(std::move(dc));
  }

  const json& pairs = member(root, path, "pairs");
  if (!pairs.is_array() || pairs.empty()) fail(path + ".pairs", "expected a nonempty array");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string ppath = path + ".pairs[" + std::to_string(i) + "]";
    const json& p = pairs[i];
    if (!p.is_array() || p.size() != 2) fail(ppath, "expected [source, destination]");
    std::string source = as_string(p[0], ppath + "[0]");
    std::string destination = as_string(p[1], ppath + "[1]");
    const DeviceConfig* src = nullptr;
    const DeviceConfig* dst = nullptr;
    for (const DeviceConfig& dc : config.devices) {
      if (dc.name == source) src = &dc;
      if (dc.name == destination) dst = &dc;
    }
    if (src == nullptr) fail(ppath + "[0]", "unknown device '" + source + "'");
    if (dst == nullptr) fail(ppath + "[1]", "unknown device '" + destination + "'");
    if (src->capability == Capability::Receiver)
      fail(ppath + "[0]", "device '" + source + "' cannot transmit");
    if (dst->capability == Capability::Transmitter)
      fail(ppath + "[1]", "device '" + destination + "' cannot receive");
    for (const auto& existing : config.pairs)
      if (existing.first == source && existing.second == destination)
        fail(ppath, "duplicate source-destination pair");
    config.pairs.emplace_back(std::move(source), std::move(destination));
  }

  const json& strategies = member(root, path, "strategies");
  require_object(strategies, path + ".strategies", {"transmitter", "receiver"});
  config.transmit_strategy =
      as_string(member(strategies, path + ".strategies", "transmitter"),
                path + ".strategies.transmitter");
  if (!has_transmit_strategy(config.transmit_strategy))
    fail(path + ".strategies.transmitter",
         "unknown strategy '" + config.transmit_strategy + "'");
  config.receive_strategy = as_string(member(strategies, path + ".strategies", "receiver"),
                                      path + ".strategies.receiver");
  if (!has_receive_strategy(config.receive_strategy))
    fail(path + ".strategies.receiver", "unknown strategy '" + config.receive_strategy + "'");

  if (const json* v = optional_member(root, "run")) config.run = parse_run(*v, path + ".run");

  // Stream counts must fit every endpoint.
  for (std::size_t i = 0; i < config.devices.size(); ++i) {
    const DeviceConfig& dc = config.devices[i];
    int antennas = array_element_count(dc.array);
    int limit = dc.hybrid.has_value() ? dc.hybrid->rf_chains : antennas;
    if (config.num_streams > limit)
      fail(path + ".devices[" + std::to_string(i) + "]",
           "num_streams exceeds what device '" + dc.name + "' supports");
  }
  return config;
}

ScenarioConfig load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError("cannot read scenario file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

ArrayGeometry build_array(const ArrayConfig& config) {
  if (config.kind == "ula") return make_ula(config.num_elements, config.axis);
  if (config.kind == "upa") return make_upa(config.num_rows, config.num_columns, config.plane);
  throw ScenarioError("array.kind: unknown array kind '" + config.kind + "'");
}

Device build_device(const DeviceConfig& config) {
  ArrayGeometry array = build_array(config.array);
  int rf_chains = config.hybrid.has_value() ? config.hybrid->rf_chains : 0;
  Device device = make_device(config.name, config.capability, array, config.architecture,
                              rf_chains);
  device.coordinate = config.coordinate;
  if (config.hybrid.has_value()) {
    AnalogConstraints constraints;
    if (config.hybrid->mask == "subarray")
      constraints.mask = make_subarray_mask(array.num_elements(), rf_chains);
    constraints.phase_bits = config.hybrid->phase_bits;
    constraints.amplitude_bits = config.hybrid->amplitude_bits;
    constraints.stepping = config.hybrid->stepping;
    constraints.log_dynamic_range_db = config.hybrid->log_dynamic_range_db;
    if (device.transmitter.has_value()) device.transmitter->analog_constraints() = constraints;
    if (device.receiver.has_value()) device.receiver->analog_constraints() = constraints;
  }
  return device;
}

Network build_network(const ScenarioConfig& config) {
  Network net;
  net.set_symbol_bandwidth(config.symbol_bandwidth_hz);
  net.set_num_streams(config.num_streams);
  net.set_transmit_power_dbm(config.transmit_power_dbm);
  net.set_noise_psd_dbm_hz(config.noise_psd_dbm_hz);
  for (std::size_t i = 0; i < config.devices.size(); ++i) {
    try {
      net.add_device(build_device(config.devices[i]));
    } catch (const ScenarioError&) {
      throw;
    } catch (const std::exception& e) {
      throw ScenarioError("devices[" + std::to_string(i) + "] ('" + config.devices[i].name +
                          "'): " + e.what());
    }
  }
  for (const auto& pair : config.pairs) net.add_source_destination(pair.first, pair.second);
  net.set_channel_spec(config.channel);
  net.set_path_loss_spec(config.path_loss);
  net.populate_links();
  return net;
}

std::vector<MetricsRecord> run_monte_carlo(const ScenarioConfig& config,
                                           std::vector<ChannelDumpRecord>* channel_dump) {
  Network base = build_network(config);
  RandomStream master(config.run.master_seed);
  RandomStream trials_root = master.substream("trial");

  struct SweepPoint {
    std::string parameter = "none";
    double value = 0.0;
  };
  std::vector<SweepPoint> points;
  if (config.run.sweep.has_value()) {
    for (double v : config.run.sweep->values) points.push_back({config.run.sweep->parameter, v});
  } else {
    points.push_back({});
  }

  std::vector<MetricsRecord> records;
  for (const SweepPoint& point : points) {
    for (int t = 0; t < config.run.trials; ++t) {
      try {
        Network net = base.clone();
        RandomStream trial = trials_root.substream(static_cast<std::uint64_t>(t));

        if (point.parameter == "transmit_power_dbm") net.set_transmit_power_dbm(point.value);
        if (point.parameter == "snr_db") {
          // The override pins each pair's own forward link; interference
          // paths keep their modeled gains.
          for (const auto& pair : config.pairs)
            net.link(pair.first, pair.second).set_snr(point.value);
        }

        RandomStream realize_stream = trial.substream("realize");
        net.realize(realize_stream);
        if (channel_dump != nullptr) {
          for (const Link& l : net.links())
            channel_dump->push_back({point.parameter, point.value, t,
                                     l.head().name + "->" + l.tail().name, l.channel_matrix()});
        }

        net.distribute_csi();
        net.configure_all(config.transmit_strategy, config.receive_strategy);

        for (const auto& pair : config.pairs) {
          Transmitter& tx = *net.device(pair.first).transmitter;
          RandomStream symbol_stream = trial.substream("symbol:" + pair.first);
          tx.set_transmit_symbol(draw_symbol(tx, symbol_stream));
        }
        RandomStream signal_stream = trial.substream("signals");
        net.compute_received_signals(signal_stream);

        for (const auto& pair : config.pairs) {
          MetricsRecord rec;
          rec.trial = t;
          rec.sweep_parameter = point.parameter;
          rec.sweep_value = point.value;
          rec.pair = pair.first + "->" + pair.second;
          rec.mutual_information = net.report_mutual_information(pair.first, pair.second);
          auto [absolute, normalized] =
              net.report_symbol_estimation_error(pair.first, pair.second);
          rec.absolute_error = absolute;
          rec.normalized_error = normalized;
          rec.normalized_error_db = 10.0 * std::log10(normalized);
          LinkBudget budget = net.link(pair.first, pair.second).link_budget();
          rec.snr_db = budget.snr_db;
          rec.transmit_power_dbm = budget.transmit_power_dbm;
          rec.path_loss_db = budget.path_loss_db;
          rec.received_power_dbm = budget.received_power_dbm;
          rec.noise_power_dbm = budget.noise_power_dbm;
          records.push_back(std::move(rec));
        }
      } catch (const std::exception& e) {
        throw std::runtime_error("sweep " + point.parameter + "=" + format_double(point.value) +
                                 " trial " + std::to_string(t) + ": " + e.what());
      }
    }
  }
  return records;
}

std::string format_records_csv(const std::vector<MetricsRecord>& records) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const MetricsRecord& r : records) {
    out += std::to_string(r.trial);
    out += ',';
    out += r.sweep_parameter;
    out += ',';
    out += format_double(r.sweep_value);
    out += ',';
    out += r.pair;
    out += ',';
    out += format_double(r.mutual_information);
    out += ',';
    out += format_double(r.absolute_error);
    out += ',';
    out += format_double(r.normalized_error);
    out += ',';
    out += format_double(r.normalized_error_db);
    out += ',';
    out += format_double(r.snr_db);
    out += ',';
    out += format_double(r.transmit_power_dbm);
    out += ',';
    out += format_double(r.path_loss_db);
    out += ',';
    out += format_double(r.received_power_dbm);
    out += ',';
    out += format_double(r.noise_power_dbm);
    out += '\n';
  }
  return out;
}

std::string format_records_json(const std::vector<MetricsRecord>& records) {
  std::string out = "[";
  bool first = true;
  for (const MetricsRecord& r : records) {
    out += first ? "\n" : ",\n";
    first = false;
    out += "  {\"trial\":" + std::to_string(r.trial);
    out += ",\"sweep_parameter\":\"" + json_escape(r.sweep_parameter) + "\"";
    out += ",\"sweep_value\":" + json_number(r.sweep_value);
    out += ",\"pair\":\"" + json_escape(r.pair) + "\"";
    out += ",\"mutual_information\":" + json_number(r.mutual_information);
    out += ",\"absolute_error\":" + json_number(r.absolute_error);
    out += ",\"normalized_error\":" + json_number(r.normalized_error);
    out += ",\"normalized_error_db\":" + json_number(r.normalized_error_db);
    out += ",\"snr_db\":" + json_number(r.snr_db);
    out += ",\"transmit_power_dbm\":" + json_number(r.transmit_power_dbm);
    out += ",\"path_loss_db\":" + json_number(r.path_loss_db);
    out += ",\"received_power_dbm\":" + json_number(r.received_power_dbm);
    out += ",\"noise_power_dbm\":" + json_number(r.noise_power_dbm);
    out += "}";
  }
  out += "\n]\n";
  return out;
}

std::vector<MetricsRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ScenarioError("csv: empty input");
  if (line != kCsvHeader) throw ScenarioError("csv: unexpected header");
  std::vector<MetricsRecord> out;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields = split(line, ',');
    if (fields.size() != 13)
      throw ScenarioError("csv line " + std::to_string(lineno) + ": expected 13 fields");
    MetricsRecord r;
    r.trial = static_cast<int>(parse_csv_double(fields[0], lineno));
    r.sweep_parameter = fields[1];
    r.sweep_value = parse_csv_double(fields[2], lineno);
    r.pair = fields[3];
    r.mutual_information = parse_csv_double(fields[4], lineno);
    r.absolute_error = parse_csv_double(fields[5], lineno);
    r.normalized_error = parse_csv_double(fields[6], lineno);
    r.normalized_error_db = parse_csv_double(fields[7], lineno);
    r.snr_db = parse_csv_double(fields[8], lineno);
    r.transmit_power_dbm = parse_csv_double(fields[9], lineno);
    r.path_loss_db = parse_csv_double(fields[10], lineno);
    r.received_power_dbm = parse_csv_double(fields[11], lineno);
    r.noise_power_dbm = parse_csv_double(fields[12], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_channel_dump_csv(const std::vector<ChannelDumpRecord>& records) {
  std::string out = "sweep_parameter,sweep_value,trial,link,row,col,real,imag\n";
  for (const ChannelDumpRecord& r : records) {
    for (Eigen::Index i = 0; i < r.matrix.rows(); ++i) {
      for (Eigen::Index j = 0; j < r.matrix.cols(); ++j) {
        out += r.sweep_parameter;
        out += ',';
        out += format_double(r.sweep_value);
        out += ',';
        out += std::to_string(r.trial);
        out += ',';
        out += r.link;
        out += ',';
        out += std::to_string(i);
        out += ',';
        out += std::to_string(j);
        out += ',';
        out += format_double(std::real(r.matrix(i, j)));
        out += ',';
        out += format_double(std::imag(r.matrix(i, j)));
        out += '\n';
      }
    }
  }
  return out;
}

std::string format_pattern_cut_csv(const ArrayGeometry& array, int samples) {
  std::string out = "cut,angle_rad,gain_real,gain_imag,gain_abs\n";
  for (PatternCut cut : {PatternCut::Azimuth, PatternCut::Elevation}) {
    const char* label = cut == PatternCut::Azimuth ? "azimuth" : "elevation";
    for (const auto& [angle, gain] : array.pattern_cut(cut, samples)) {
      out += label;
      out += ',';
      out += format_double(angle);
      out += ',';
      out += format_double(std::real(gain));
      out += ',';
      out += format_double(std::imag(gain));
      out += ',';
      out += format_double(std::abs(gain));
      out += '\n';
    }
  }
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ScenarioError("cannot write output file: " + path);
  out << content;
  out.flush();
  if (!out) throw ScenarioError("failed writing output file: " + path);
}

}  // namespace mimosim
