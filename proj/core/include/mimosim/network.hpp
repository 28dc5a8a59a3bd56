#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mimosim/device.hpp"
#include "mimosim/link.hpp"
#include "mimosim/rng.hpp"

namespace mimosim {

struct ShowRecord {
  std::string name;
  Eigen::Vector3d coordinate;
  std::string marker;
};

// Devices, source-destination pairs, and the full link matrix between pair
// sources and pair destinations.  Network-wide setters are sticky: they
// broadcast to current members and seed defaults for members added later.
//
// Copying is deliberately restricted to clone(), which deep-copies devices
// and rebinds links; a shallow copy would entangle two networks through
// shared device state.
class Network {
 public:
  Network() = default;
  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;
  Network(Network&&) = default;
  Network& operator=(Network&&) = default;

  void add_device(std::shared_ptr<Device> device);
  void add_device(Device device);
  void remove_device(const std::string& name);
  bool has_device(const std::string& name) const;
  Device& device(const std::string& name);
  const Device& device(const std::string& name) const;
  const std::vector<std::shared_ptr<Device>>& devices() const { return devices_; }

  void add_source_destination(const std::string& source, const std::string& destination);
  void remove_source_destination_pair(const std::string& source, const std::string& destination);
  // Forgets every pairing; devices and links stay.
  void remove_all_source_destination();
  const std::vector<std::pair<std::string, std::string>>& source_destination_pairs() const {
    return pairs_;
  }

  // Creates the link from every pair source to every pair destination
  // (distinct endpoints give pairs^2 links).  Existing links are kept, so
  // the call is idempotent.
  void populate_links();
  bool has_link(const std::string& head, const std::string& tail) const;
  Link& link(const std::string& head, const std::string& tail);
  const Link& link(const std::string& head, const std::string& tail) const;
  const std::vector<Link>& links() const { return links_; }
  std::size_t num_links() const { return links_.size(); }

  void set_symbol_bandwidth(double hz);
  void set_propagation_velocity(double mps);
  void set_carrier_frequency(double hz);
  void set_num_streams(int ns);
  void set_transmit_power_watts(double watts);
  void set_transmit_power_dbm(double dbm);
  void set_noise_psd_dbm_hz(double dbm_hz);
  void set_transmit_symbol(const CVector& s);
  void set_channel_spec(const ChannelSpec& spec);
  void set_path_loss_spec(const PathLossSpec& spec);
  void set_channel_symmetric(bool flag);
  void set_path_loss_symmetric(bool flag);

  // Every link gets its own substream keyed by its device names, so adding
  // or removing one link never perturbs the draws of another.
  void realize(const RandomStream& master);

  // Genie-aided: each destination learns its desired channel plus one entry
  // per interfering source, and each source receives its destination's view.
  void distribute_csi();
  // Configures pair sources, then refreshes CSI so receivers see the new
  // precoders.
  void configure_transmitters(const std::string& strategy);
  void configure_receivers(const std::string& strategy);
  void configure_all(const std::string& tx_strategy, const std::string& rx_strategy);

  // y at each destination superposes every transmitting source through the
  // link matrix; noise is drawn once per receiver from a named substream.
  void compute_received_signals(const RandomStream& master);

  // log2 det(I + R_z^-1 R_y) with R_z covering noise plus all interferers.
  double report_mutual_information(const std::string& source,
                                   const std::string& destination) const;
  std::pair<double, double> report_symbol_estimation_error(
      const std::string& source, const std::string& destination) const;

  std::vector<ShowRecord> show() const;
  Network clone() const;

 private:
  void apply_defaults(Device& device) const;
  void apply_defaults(Link& link) const;
  std::vector<std::string> unique_sources() const;
  std::vector<std::string> unique_destinations() const;

  std::vector<std::shared_ptr<Device>> devices_;
  std::vector<std::pair<std::string, std::string>> pairs_;
  std::vector<Link> links_;

  std::optional<double> bandwidth_hz_;
  std::optional<double> velocity_mps_;
  std::optional<double> carrier_hz_;
  std::optional<int> num_streams_;
  std::optional<double> transmit_power_watts_;
  std::optional<double> noise_psd_dbm_hz_;
  std::optional<CVector> symbol_;
  std::optional<ChannelSpec> channel_spec_;
  std::optional<PathLossSpec> path_loss_spec_;
  bool channel_symmetric_ = false;
  bool path_loss_symmetric_ = true;
};

}  // namespace mimosim
