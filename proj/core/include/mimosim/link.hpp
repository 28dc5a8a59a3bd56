#pragma once

#include <optional>
#include <utility>

#include "mimosim/channel.hpp"
#include "mimosim/csi.hpp"
#include "mimosim/device.hpp"
#include "mimosim/path_loss.hpp"
#include "mimosim/rng.hpp"
#include "mimosim/types.hpp"

namespace mimosim {

enum class LinkDirection { Forward, Reverse };
enum class SnrUnit { Linear, Decibel };

// Log-scale budget; snr_db is received minus noise power by construction.
struct LinkBudget {
  double transmit_power_dbm = 0.0;
  double path_loss_db = 0.0;
  double received_power_dbm = 0.0;
  double noise_power_dbm = 0.0;
  double snr_db = 0.0;
};

// Directed head -> tail connection (the forward direction).  A reverse
// direction exists when the tail can transmit and the head can receive.
// The link references its devices; it never owns them.
class Link {
 public:
  Link(Device& head, Device& tail);

  Device& head() { return *head_; }
  const Device& head() const { return *head_; }
  Device& tail() { return *tail_; }
  const Device& tail() const { return *tail_; }
  bool has_reverse() const { return has_reverse_; }

  // Spec setters deep-copy per direction, so later per-direction edits
  // cannot alias.
  void set_channel_spec(const ChannelSpec& spec);
  void set_channel_spec(const ChannelSpec& spec, LinkDirection direction);
  void set_path_loss_spec(const PathLossSpec& spec);
  void set_path_loss_spec(const PathLossSpec& spec, LinkDirection direction);
  ChannelSpec& channel_spec(LinkDirection direction = LinkDirection::Forward);
  PathLossSpec& path_loss_spec(LinkDirection direction = LinkDirection::Forward);
  bool has_channel_spec(LinkDirection direction = LinkDirection::Forward) const;
  bool has_path_loss_spec(LinkDirection direction = LinkDirection::Forward) const;

  // Symmetry: H_rev = H_fwd^H (conjugate transpose) and G_rev = G_fwd,
  // enforced at every realization while the flag holds.
  void set_channel_symmetric(bool flag) { channel_symmetric_ = flag; }
  void set_path_loss_symmetric(bool flag) { path_loss_symmetric_ = flag; }
  bool channel_symmetric() const { return channel_symmetric_; }
  bool path_loss_symmetric() const { return path_loss_symmetric_; }

  // Draws channels and gains, applies symmetry, reapplies SNR overrides,
  // and invalidates stored signals (metrics always describe the latest
  // realization).
  void realize(RandomStream& stream);
  bool is_realized(LinkDirection direction = LinkDirection::Forward) const;
  const CMatrix& channel_matrix(LinkDirection direction = LinkDirection::Forward) const;
  double large_scale_gain(LinkDirection direction = LinkDirection::Forward) const;

  // Large-scale SNR Ptx G^2 / sigma^2 (linear).
  double snr(LinkDirection direction = LinkDirection::Forward) const;
  // Pins the SNR by overriding G; the override persists across future
  // realizations until replaced.
  void set_snr(double target, LinkDirection direction = LinkDirection::Forward,
               SnrUnit unit = SnrUnit::Decibel);

  // y = G H x at the tail (and at the head over the reverse direction when
  // that side is ready); noise is drawn and stored at each receiver.
  void compute_received_signal(RandomStream& stream);

  LinkBudget link_budget(LinkDirection direction = LinkDirection::Forward) const;
  ChannelStateInformation csi(LinkDirection direction = LinkDirection::Forward) const;
  // (R_y, R_n): post-combining desired-signal and noise covariances.
  std::pair<CMatrix, CMatrix> covariance(LinkDirection direction = LinkDirection::Forward) const;
  // log2 det(I + R_n^-1 R_y); a singular R_n is an error, not regularized.
  double mutual_information(LinkDirection direction = LinkDirection::Forward) const;
  // (|s_hat - s|^2, normalized by |s|^2) for the stored trial.
  std::pair<double, double> symbol_estimation_error(
      LinkDirection direction = LinkDirection::Forward) const;

  // Points the link at equivalent replacement devices (network cloning).
  void rebind(Device& head, Device& tail);

 private:
  struct Side {
    std::optional<ChannelSpec> channel;
    std::optional<PathLossSpec> path_loss;
    CMatrix h;
    double gain = 0.0;
    bool realized = false;
    std::optional<double> snr_override;  // linear
  };

  Side& side(LinkDirection direction);
  const Side& side(LinkDirection direction) const;
  const Side& realized_side(LinkDirection direction) const;
  // Endpoint states for a direction: transmitter of the emitting device and
  // receiver of the listening device.
  Transmitter& tx_of(LinkDirection direction) const;
  Receiver& rx_of(LinkDirection direction) const;
  void check_direction(LinkDirection direction) const;
  void apply_snr_override(LinkDirection direction);
  void realize_direction(LinkDirection direction, RandomStream& stream);
  void receive_direction(LinkDirection direction, RandomStream& stream);
  PropagationContext context(LinkDirection direction) const;

  Device* head_;
  Device* tail_;
  bool has_reverse_ = false;
  bool channel_symmetric_ = false;
  bool path_loss_symmetric_ = true;
  Side forward_;
  Side reverse_;
};

// log2 det(M) for a Hermitian positive definite M via Cholesky; throws when
// M is singular or indefinite instead of regularizing.
double log2_det_positive_definite(const CMatrix& m);

}  // namespace mimosim
