#include "mimosim/link.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <stdexcept>

namespace mimosim {

namespace {

// Device separation usable as a path loss distance; colocated devices give
// no usable distance and the spec must carry one instead.
std::optional<double> usable_separation(const Device& a, const Device& b) {
  double d = (a.coordinate - b.coordinate).norm();
  if (d > 0.0) return d;
  return std::nullopt;
}

}  // namespace

Link::Link(Device& head, Device& tail) : head_(&head), tail_(&tail) {
  if (!head.can_transmit()) throw std::invalid_argument("link head must be able to transmit");
  if (!tail.can_receive()) throw std::invalid_argument("link tail must be able to receive");
  has_reverse_ = tail.can_transmit() && head.can_receive();
}

void Link::set_channel_spec(const ChannelSpec& spec) {
  forward_.channel = spec;
  if (has_reverse_) reverse_.channel = spec;
}

void Link::set_channel_spec(const ChannelSpec& spec, LinkDirection direction) {
  check_direction(direction);
  side(direction).channel = spec;
}

void Link::set_path_loss_spec(const PathLossSpec& spec) {
  forward_.path_loss = spec;
  if (has_reverse_) reverse_.path_loss = spec;
}

void Link::set_path_loss_spec(const PathLossSpec& spec, LinkDirection direction) {
  check_direction(direction);
  side(direction).path_loss = spec;
}

ChannelSpec& Link::channel_spec(LinkDirection direction) {
  check_direction(direction);
  if (!side(direction).channel.has_value()) throw std::logic_error("channel spec not set");
  return *side(direction).channel;
}

PathLossSpec& Link::path_loss_spec(LinkDirection direction) {
  check_direction(direction);
  if (!side(direction).path_loss.has_value()) throw std::logic_error("path loss spec not set");
  return *side(direction).path_loss;
}

bool Link::has_channel_spec(LinkDirection direction) const {
  if (direction == LinkDirection::Reverse && !has_reverse_) return false;
  return side(direction).channel.has_value();
}

bool Link::has_path_loss_spec(LinkDirection direction) const {
  if (direction == LinkDirection::Reverse && !has_reverse_) return false;
  return side(direction).path_loss.has_value();
}

void Link::realize(RandomStream& stream) {
  if (!forward_.channel.has_value() || !forward_.path_loss.has_value())
    throw std::logic_error("channel and path loss specs must be set before realization");

  realize_direction(LinkDirection::Forward, stream);

  if (has_reverse_) {
    if (channel_symmetric_) {
      // H_rev = H_fwd^H only has the right shape when each endpoint uses
      // equal transmit and receive antenna counts.
      bool head_square = head_->transmitter->num_antennas() == head_->receiver->num_antennas();
      bool tail_square = tail_->transmitter->num_antennas() == tail_->receiver->num_antennas();
      if (!head_square || !tail_square)
        throw std::invalid_argument(
            "channel symmetry requires equal transmit and receive antenna counts");
      reverse_.h = forward_.h.adjoint();
    } else {
      if (!reverse_.channel.has_value())
        throw std::logic_error("reverse channel spec must be set before realization");
      PropagationContext ctx = context(LinkDirection::Reverse);
      reverse_.h = realize_channel(*reverse_.channel, ctx, stream).matrix;
    }
    if (path_loss_symmetric_) {
      reverse_.gain = forward_.gain;
    } else {
      if (!reverse_.path_loss.has_value())
        throw std::logic_error("reverse path loss spec must be set before realization");
      reverse_.gain =
          realize_gain(*reverse_.path_loss, stream, usable_separation(*head_, *tail_))
              .amplitude_gain;
    }
    reverse_.realized = true;
    apply_snr_override(LinkDirection::Reverse);
  }

  // Stored signals describe the previous realization; drop them.
  tail_->receiver->clear_signals();
  if (head_->can_receive()) head_->receiver->clear_signals();
}

bool Link::is_realized(LinkDirection direction) const {
  if (direction == LinkDirection::Reverse && !has_reverse_) return false;
  return side(direction).realized;
}

const CMatrix& Link::channel_matrix(LinkDirection direction) const {
  return realized_side(direction).h;
}

double Link::large_scale_gain(LinkDirection direction) const {
  return realized_side(direction).gain;
}

double Link::snr(LinkDirection direction) const {
  const Side& s = realized_side(direction);
  double ptx = tx_of(direction).energy_per_symbol();
  double sigma2 = rx_of(direction).noise_variance();
  return ptx * s.gain * s.gain / sigma2;
}

void Link::set_snr(double target, LinkDirection direction, SnrUnit unit) {
  check_direction(direction);
  double linear = unit == SnrUnit::Decibel ? std::pow(10.0, target / 10.0) : target;
  if (linear <= 0.0) throw std::invalid_argument("snr target must be > 0");
  side(direction).snr_override = linear;
  if (side(direction).realized) apply_snr_override(direction);
}

void Link::compute_received_signal(RandomStream& stream) {
  receive_direction(LinkDirection::Forward, stream);
  if (!has_reverse_) return;
  // The reverse direction participates only when the tail is ready to
  // transmit; links are often driven one way.
  const Transmitter& tx = *tail_->transmitter;
  if (tx.effective_precoder().size() > 0 && tx.has_symbol())
    receive_direction(LinkDirection::Reverse, stream);
}

LinkBudget Link::link_budget(LinkDirection direction) const {
  const Side& s = realized_side(direction);
  const Transmitter& tx = tx_of(direction);
  const Receiver& rx = rx_of(direction);
  LinkBudget budget;
  budget.transmit_power_dbm = dbm_from_watts(tx.transmit_power_watts());
  budget.path_loss_db = -20.0 * std::log10(s.gain);
  budget.received_power_dbm = budget.transmit_power_dbm - budget.path_loss_db;
  budget.noise_power_dbm = dbm_from_watts(rx.noise_variance() * tx.symbol_bandwidth_hz());
  budget.snr_db = budget.received_power_dbm - budget.noise_power_dbm;
  return budget;
}

ChannelStateInformation Link::csi(LinkDirection direction) const {
  const Side& s = realized_side(direction);
  const Transmitter& tx = tx_of(direction);
  ChannelStateInformation info;
  info.desired.effective_channel = s.gain * s.h;
  info.desired.large_scale_gain = s.gain;
  info.desired.transmit_energy = tx.energy_per_symbol();
  info.desired.precoder = tx.effective_precoder();
  info.desired.symbol_covariance = tx.symbol_covariance();
  info.noise_variance = rx_of(direction).noise_variance();
  return info;
}

std::pair<CMatrix, CMatrix> Link::covariance(LinkDirection direction) const {
  const Side& s = realized_side(direction);
  const Transmitter& tx = tx_of(direction);
  const Receiver& rx = rx_of(direction);
  CMatrix w = rx.effective_combiner();
  CMatrix f = tx.effective_precoder();
  if (w.size() == 0) throw std::logic_error("receiver combiner is not configured");
  if (f.size() == 0) throw std::logic_error("transmit precoder is not configured");
  CMatrix t = w.adjoint() * s.h * f;
  double ptx = tx.energy_per_symbol();
  CMatrix ry = (ptx * s.gain * s.gain) * (t * tx.symbol_covariance() * t.adjoint());
  CMatrix rn = rx.noise_variance() * (w.adjoint() * w);
  return {ry, rn};
}

double Link::mutual_information(LinkDirection direction) const {
  auto [ry, rn] = covariance(direction);
  return log2_det_positive_definite(rn + ry) - log2_det_positive_definite(rn);
}

std::pair<double, double> Link::symbol_estimation_error(LinkDirection direction) const {
  const Transmitter& tx = tx_of(direction);
  const Receiver& rx = rx_of(direction);
  if (!tx.has_symbol()) throw std::logic_error("no transmit symbol stored");
  CVector estimate = rx.combine();
  const CVector& sent = tx.transmit_symbol();
  double denom = sent.squaredNorm();
  if (denom == 0.0) throw std::domain_error("normalized error undefined for a zero symbol");
  double absolute = (estimate - sent).squaredNorm();
  return {absolute, absolute / denom};
}

void Link::rebind(Device& head, Device& tail) {
  if (!head.can_transmit()) throw std::invalid_argument("link head must be able to transmit");
  if (!tail.can_receive()) throw std::invalid_argument("link tail must be able to receive");
  head_ = &head;
  tail_ = &tail;
}

Link::Side& Link::side(LinkDirection direction) {
  return direction == LinkDirection::Forward ? forward_ : reverse_;
}

const Link::Side& Link::side(LinkDirection direction) const {
  return direction == LinkDirection::Forward ? forward_ : reverse_;
}

const Link::Side& Link::realized_side(LinkDirection direction) const {
  check_direction(direction);
  const Side& s = side(direction);
  if (!s.realized) throw std::logic_error("link direction is not realized");
  return s;
}

Transmitter& Link::tx_of(LinkDirection direction) const {
  return direction == LinkDirection::Forward ? *head_->transmitter : *tail_->transmitter;
}

Receiver& Link::rx_of(LinkDirection direction) const {
  return direction == LinkDirection::Forward ? *tail_->receiver : *head_->receiver;
}

void Link::check_direction(LinkDirection direction) const {
  if (direction == LinkDirection::Reverse && !has_reverse_)
    throw std::logic_error("link has no reverse direction");
}

void Link::apply_snr_override(LinkDirection direction) {
  Side& s = side(direction);
  if (!s.snr_override.has_value() || !s.realized) return;
  double ptx = tx_of(direction).energy_per_symbol();
  if (ptx <= 0.0) throw std::logic_error("snr override needs transmit energy > 0");
  double sigma2 = rx_of(direction).noise_variance();
  s.gain = std::sqrt(*s.snr_override * sigma2 / ptx);
}

void Link::realize_direction(LinkDirection direction, RandomStream& stream) {
  Side& s = side(direction);
  PropagationContext ctx = context(direction);
  s.h = realize_channel(*s.channel, ctx, stream).matrix;
  s.gain = realize_gain(*s.path_loss, stream, usable_separation(*head_, *tail_)).amplitude_gain;
  s.realized = true;
  apply_snr_override(direction);
}

void Link::receive_direction(LinkDirection direction, RandomStream& stream) {
  const Side& s = realized_side(direction);
  Receiver& rx = rx_of(direction);
  CVector x = tx_of(direction).transmit();
  rx.store_received_signal(s.gain * (s.h * x));
  rx.draw_and_store_noise(stream);
}

PropagationContext Link::context(LinkDirection direction) const {
  // Carrier and velocity ride on the path loss spec; a symmetric reverse
  // side borrows the forward spec.
  const Side& s = side(direction);
  const PathLossSpec& pl = s.path_loss.has_value() ? *s.path_loss : *forward_.path_loss;
  PropagationContext ctx;
  ctx.propagation_velocity_mps = pl.propagation_velocity_mps;
  ctx.carrier_frequency_hz = pl.carrier_frequency_hz;
  ctx.tx_array = tx_of(direction).array();
  ctx.rx_array = rx_of(direction).array();
  const Device* emitter = direction == LinkDirection::Forward ? head_ : tail_;
  const Device* listener = direction == LinkDirection::Forward ? tail_ : head_;
  ctx.tx_origin = emitter->coordinate;
  ctx.rx_origin = listener->coordinate;
  return ctx;
}

double log2_det_positive_definite(const CMatrix& m) {
  Eigen::LLT<CMatrix> llt(m);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("covariance matrix is singular or indefinite");
  double log_det = 0.0;
  const CMatrix& packed = llt.matrixLLT();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double pivot = std::real(packed(i, i));
    if (!(pivot > 0.0) || !std::isfinite(pivot))
      throw std::runtime_error("covariance matrix is singular or indefinite");
    log_det += 2.0 * std::log(pivot);
  }
  return log_det / std::log(2.0);
}

}  // namespace mimosim
