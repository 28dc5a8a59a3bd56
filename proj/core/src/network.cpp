#include "mimosim/network.hpp"

#include <algorithm>
#include <stdexcept>

namespace mimosim {

namespace {

void append_unique(std::vector<std::string>& names, const std::string& name) {
  if (std::find(names.begin(), names.end(), name) == names.end()) names.push_back(name);
}

}  // namespace

void Network::add_device(std::shared_ptr<Device> device) {
  if (!device) throw std::invalid_argument("device must not be null");
  if (device->name.empty()) throw std::invalid_argument("device needs a name");
  if (has_device(device->name))
    throw std::invalid_argument("duplicate device name: " + device->name);
  apply_defaults(*device);
  devices_.push_back(std::move(device));
}

void Network::add_device(Device device) {
  add_device(std::make_shared<Device>(std::move(device)));
}

void Network::remove_device(const std::string& name) {
  if (!has_device(name)) throw std::invalid_argument("unknown device: " + name);
  // A removed device takes its pairings and its links with it.
  for (auto it = pairs_.begin(); it != pairs_.end();) {
    if (it->first == name || it->second == name) {
      if (it->first != name && has_device(it->first))
        device(it->first).destination_name.reset();
      if (it->second != name && has_device(it->second)) device(it->second).source_name.reset();
      it = pairs_.erase(it);
    } else {
      ++it;
    }
  }
  links_.erase(std::remove_if(links_.begin(), links_.end(),
                              [&](const Link& l) {
                                return l.head().name == name || l.tail().name == name;
                              }),
               links_.end());
  devices_.erase(std::remove_if(devices_.begin(), devices_.end(),
                                [&](const std::shared_ptr<Device>& d) { return d->name == name; }),
                 devices_.end());
}

bool Network::has_device(const std::string& name) const {
  for (const auto& d : devices_)
    if (d->name == name) return true;
  return false;
}

Device& Network::device(const std::string& name) {
  for (const auto& d : devices_)
    if (d->name == name) return *d;
  throw std::invalid_argument("unknown device: " + name);
}

const Device& Network::device(const std::string& name) const {
  for (const auto& d : devices_)
    if (d->name == name) return *d;
  throw std::invalid_argument("unknown device: " + name);
}

void Network::add_source_destination(const std::string& source, const std::string& destination) {
  Device& src = device(source);
  Device& dst = device(destination);
  if (!src.can_transmit())
    throw std::invalid_argument("pair source must be able to transmit: " + source);
  if (!dst.can_receive())
    throw std::invalid_argument("pair destination must be able to receive: " + destination);
  for (const auto& p : pairs_)
    if (p.first == source && p.second == destination)
      throw std::invalid_argument("duplicate source-destination pair");
  pairs_.emplace_back(source, destination);
  src.destination_name = destination;
  dst.source_name = source;
}

void Network::remove_source_destination_pair(const std::string& source,
                                             const std::string& destination) {
  auto it = std::find(pairs_.begin(), pairs_.end(), std::make_pair(source, destination));
  if (it == pairs_.end()) throw std::invalid_argument("unknown source-destination pair");
  pairs_.erase(it);
  if (has_device(source) && device(source).destination_name == destination)
    device(source).destination_name.reset();
  if (has_device(destination) && device(destination).source_name == source)
    device(destination).source_name.reset();
}

void Network::remove_all_source_destination() {
  for (const auto& p : pairs_) {
    if (has_device(p.first)) device(p.first).destination_name.reset();
    if (has_device(p.second)) device(p.second).source_name.reset();
  }
  pairs_.clear();
}

void Network::populate_links() {
  for (const std::string& src : unique_sources()) {
    for (const std::string& dst : unique_destinations()) {
      if (has_link(src, dst)) continue;
      Link l(device(src), device(dst));
      apply_defaults(l);
      links_.push_back(std::move(l));
    }
  }
}

bool Network::has_link(const std::string& head, const std::string& tail) const {
  for (const Link& l : links_)
    if (l.head().name == head && l.tail().name == tail) return true;
  return false;
}

Link& Network::link(const std::string& head, const std::string& tail) {
  for (Link& l : links_)
    if (l.head().name == head && l.tail().name == tail) return l;
  throw std::invalid_argument("no link from " + head + " to " + tail);
}

const Link& Network::link(const std::string& head, const std::string& tail) const {
  for (const Link& l : links_)
    if (l.head().name == head && l.tail().name == tail) return l;
  throw std::invalid_argument("no link from " + head + " to " + tail);
}

void Network::set_symbol_bandwidth(double hz) {
  bandwidth_hz_ = hz;
  for (const auto& d : devices_)
    if (d->can_transmit()) d->transmitter->set_symbol_bandwidth(hz);
}

void Network::set_propagation_velocity(double mps) {
  if (mps <= 0.0) throw std::invalid_argument("propagation velocity must be > 0");
  velocity_mps_ = mps;
  if (path_loss_spec_.has_value()) path_loss_spec_->propagation_velocity_mps = mps;
  for (Link& l : links_) {
    for (LinkDirection dir : {LinkDirection::Forward, LinkDirection::Reverse}) {
      if (!l.has_path_loss_spec(dir)) continue;
      l.path_loss_spec(dir).propagation_velocity_mps = mps;
    }
  }
}

void Network::set_carrier_frequency(double hz) {
  if (hz <= 0.0) throw std::invalid_argument("carrier frequency must be > 0");
  carrier_hz_ = hz;
  if (path_loss_spec_.has_value()) path_loss_spec_->carrier_frequency_hz = hz;
  for (Link& l : links_) {
    for (LinkDirection dir : {LinkDirection::Forward, LinkDirection::Reverse}) {
      if (!l.has_path_loss_spec(dir)) continue;
      l.path_loss_spec(dir).carrier_frequency_hz = hz;
    }
  }
}

void Network::set_num_streams(int ns) {
  num_streams_ = ns;
  for (const auto& d : devices_) {
    if (d->can_transmit()) d->transmitter->set_num_streams(ns);
    if (d->can_receive()) d->receiver->set_num_streams(ns);
  }
}

void Network::set_transmit_power_watts(double watts) {
  transmit_power_watts_ = watts;
  for (const auto& d : devices_)
    if (d->can_transmit()) d->transmitter->set_transmit_power_watts(watts);
}

void Network::set_transmit_power_dbm(double dbm) {
  set_transmit_power_watts(watts_from_dbm(dbm));
}

void Network::set_noise_psd_dbm_hz(double dbm_hz) {
  noise_psd_dbm_hz_ = dbm_hz;
  for (const auto& d : devices_)
    if (d->can_receive()) d->receiver->set_noise_psd_dbm_hz(dbm_hz);
}

void Network::set_transmit_symbol(const CVector& s) {
  symbol_ = s;
  for (const auto& d : devices_)
    if (d->can_transmit()) d->transmitter->set_transmit_symbol(s);
}

void Network::set_channel_spec(const ChannelSpec& spec) {
  channel_spec_ = spec;
  for (Link& l : links_) l.set_channel_spec(spec);
}

void Network::set_path_loss_spec(const PathLossSpec& spec) {
  path_loss_spec_ = spec;
  if (carrier_hz_.has_value()) path_loss_spec_->carrier_frequency_hz = *carrier_hz_;
  if (velocity_mps_.has_value()) path_loss_spec_->propagation_velocity_mps = *velocity_mps_;
  for (Link& l : links_) l.set_path_loss_spec(*path_loss_spec_);
}

void Network::set_channel_symmetric(bool flag) {
  channel_symmetric_ = flag;
  for (Link& l : links_) l.set_channel_symmetric(flag);
}

void Network::set_path_loss_symmetric(bool flag) {
  path_loss_symmetric_ = flag;
  for (Link& l : links_) l.set_path_loss_symmetric(flag);
}

void Network::realize(const RandomStream& master) {
  for (Link& l : links_) {
    RandomStream sub = master.substream("link:" + l.head().name + "->" + l.tail().name);
    l.realize(sub);
  }
}

void Network::distribute_csi() {
  for (const auto& pair : pairs_) {
    const Link& desired = link(pair.first, pair.second);
    ChannelStateInformation info = desired.csi(LinkDirection::Forward);
    for (const std::string& other : unique_sources()) {
      if (other == pair.first || !has_link(other, pair.second)) continue;
      info.interferers.push_back(link(other, pair.second).csi(LinkDirection::Forward).desired);
    }
    device(pair.second).receiver->set_csi(info);
    device(pair.first).transmitter->set_csi(std::move(info));
  }
}

void Network::configure_transmitters(const std::string& strategy) {
  for (const std::string& src : unique_sources()) device(src).transmitter->configure(strategy);
  // Precoders changed; receivers must see the refreshed CSI.
  distribute_csi();
}

void Network::configure_receivers(const std::string& strategy) {
  for (const std::string& dst : unique_destinations()) device(dst).receiver->configure(strategy);
}

void Network::configure_all(const std::string& tx_strategy, const std::string& rx_strategy) {
  configure_transmitters(tx_strategy);
  configure_receivers(rx_strategy);
}

void Network::compute_received_signals(const RandomStream& master) {
  std::vector<std::pair<std::string, CVector>> emissions;
  for (const std::string& src : unique_sources())
    emissions.emplace_back(src, device(src).transmitter->transmit());
  for (const std::string& dst : unique_destinations()) {
    Receiver& rx = *device(dst).receiver;
    CVector y = CVector::Zero(rx.num_antennas());
    for (const auto& [src, x] : emissions) {
      if (!has_link(src, dst)) continue;
      const Link& l = link(src, dst);
      y += l.large_scale_gain() * (l.channel_matrix() * x);
    }
    rx.store_received_signal(y);
    RandomStream sub = master.substream("noise:" + dst);
    rx.draw_and_store_noise(sub);
  }
}

double Network::report_mutual_information(const std::string& source,
                                          const std::string& destination) const {
  const Link& desired = link(source, destination);
  CMatrix ry = desired.covariance(LinkDirection::Forward).first;
  const Receiver& rx = *device(destination).receiver;
  CMatrix w = rx.effective_combiner();
  if (w.size() == 0) throw std::logic_error("receiver combiner is not configured");

  // R_z: noise plus every interfering source, all post-combining.
  CMatrix rz = rx.noise_variance() * (w.adjoint() * w);
  for (const std::string& other : unique_sources()) {
    if (other == source || !has_link(other, destination)) continue;
    const Link& l = link(other, destination);
    const Transmitter& tx = *device(other).transmitter;
    CMatrix f = tx.effective_precoder();
    if (f.size() == 0) continue;
    CMatrix t = w.adjoint() * l.channel_matrix() * f;
    double g = l.large_scale_gain();
    rz += (tx.energy_per_symbol() * g * g) * (t * tx.symbol_covariance() * t.adjoint());
  }
  return log2_det_positive_definite(rz + ry) - log2_det_positive_definite(rz);
}

std::pair<double, double> Network::report_symbol_estimation_error(
    const std::string& source, const std::string& destination) const {
  const Transmitter& tx = *device(source).transmitter;
  if (!tx.has_symbol()) throw std::logic_error("no transmit symbol stored");
  CVector estimate = device(destination).receiver->combine();
  const CVector& sent = tx.transmit_symbol();
  double denom = sent.squaredNorm();
  if (denom == 0.0) throw std::domain_error("normalized error undefined for a zero symbol");
  double absolute = (estimate - sent).squaredNorm();
  return {absolute, absolute / denom};
}

std::vector<ShowRecord> Network::show() const {
  std::vector<ShowRecord> records;
  records.reserve(devices_.size());
  for (const auto& d : devices_) records.push_back({d->name, d->coordinate, d->marker});
  return records;
}

Network Network::clone() const {
  Network out;
  out.pairs_ = pairs_;
  out.bandwidth_hz_ = bandwidth_hz_;
  out.velocity_mps_ = velocity_mps_;
  out.carrier_hz_ = carrier_hz_;
  out.num_streams_ = num_streams_;
  out.transmit_power_watts_ = transmit_power_watts_;
  out.noise_psd_dbm_hz_ = noise_psd_dbm_hz_;
  out.symbol_ = symbol_;
  out.channel_spec_ = channel_spec_;
  out.path_loss_spec_ = path_loss_spec_;
  out.channel_symmetric_ = channel_symmetric_;
  out.path_loss_symmetric_ = path_loss_symmetric_;
  for (const auto& d : devices_) out.devices_.push_back(std::make_shared<Device>(*d));
  out.links_ = links_;
  for (Link& l : out.links_) l.rebind(out.device(l.head().name), out.device(l.tail().name));
  return out;
}

void Network::apply_defaults(Device& device) const {
  if (device.can_transmit()) {
    Transmitter& tx = *device.transmitter;
    if (bandwidth_hz_.has_value()) tx.set_symbol_bandwidth(*bandwidth_hz_);
    if (num_streams_.has_value()) tx.set_num_streams(*num_streams_);
    if (transmit_power_watts_.has_value()) tx.set_transmit_power_watts(*transmit_power_watts_);
    if (symbol_.has_value()) tx.set_transmit_symbol(*symbol_);
  }
  if (device.can_receive()) {
    Receiver& rx = *device.receiver;
    if (num_streams_.has_value()) rx.set_num_streams(*num_streams_);
    if (noise_psd_dbm_hz_.has_value()) rx.set_noise_psd_dbm_hz(*noise_psd_dbm_hz_);
  }
}

void Network::apply_defaults(Link& link) const {
  if (channel_spec_.has_value()) link.set_channel_spec(*channel_spec_);
  if (path_loss_spec_.has_value()) link.set_path_loss_spec(*path_loss_spec_);
  link.set_channel_symmetric(channel_symmetric_);
  link.set_path_loss_symmetric(path_loss_symmetric_);
}

std::vector<std::string> Network::unique_sources() const {
  std::vector<std::string> names;
  for (const auto& p : pairs_) append_unique(names, p.first);
  return names;
}

std::vector<std::string> Network::unique_destinations() const {
  std::vector<std::string> names;
  for (const auto& p : pairs_) append_unique(names, p.second);
  return names;
}

}  // namespace mimosim
