#pragma once

#include <optional>

#include "mimosim/angles.hpp"
#include "mimosim/array.hpp"
#include "mimosim/rng.hpp"
#include "mimosim/types.hpp"

namespace mimosim {

enum class ChannelModel { Rayleigh, Los, Rician, RayCluster, SphericalWave };

struct ChannelSpec {
  ChannelModel model = ChannelModel::Rayleigh;
  double rician_kappa = 0.0;     // LOS-to-diffuse power ratio, >= 0
  int num_clusters = 1;          // >= 1
  int num_rays = 1;              // >= 1
  double angle_spread_rad = 0.1; // Laplacian scale of per-ray offsets
  // Fixed departure/arrival angles; unset means drawn uniformly per draw.
  std::optional<Direction> los_aod;
  std::optional<Direction> los_aoa;
  bool force_normalization = false;
  std::optional<double> normalized_energy;  // default Nt*Nr at realize time
};

struct PropagationContext {
  double propagation_velocity_mps = kDefaultVelocity;
  double carrier_frequency_hz = 0.0;
  ArrayGeometry tx_array;
  ArrayGeometry rx_array;
  // Device origins in meters; consumed by the spherical-wave model, which
  // places elements at origin + coordinates * wavelength.
  Eigen::Vector3d tx_origin = Eigen::Vector3d::Zero();
  Eigen::Vector3d rx_origin = Eigen::Vector3d::Zero();

  double wavelength() const;
  int num_tx() const { return tx_array.num_elements(); }
  int num_rx() const { return rx_array.num_elements(); }
};

struct ChannelRealization {
  CMatrix matrix;       // Nr x Nt
  double energy = 0.0;  // squared Frobenius norm, cached
};

// Dispatches on spec.model and applies strict normalization when flagged.
// Every call draws fresh model stochastics from rng.
ChannelRealization realize_channel(const ChannelSpec& spec, const PropagationContext& ctx,
                                   RandomStream& rng);

// i.i.d. entries CN(0,1): real and imaginary parts each N(0, 1/2).
CMatrix realize_rayleigh(const PropagationContext& ctx, RandomStream& rng);

// H = beta * a_rx(AoA) a_tx(AoD)^H with |beta| = 1 and uniform random phase;
// unset angles are drawn uniformly (azimuth over [-pi, pi], elevation over
// [-pi/2, pi/2]).  ||H||_F^2 = Nt*Nr exactly.
CMatrix realize_los(const ChannelSpec& spec, const PropagationContext& ctx, RandomStream& rng);

// sqrt(kappa/(kappa+1)) H_los + sqrt(1/(kappa+1)) H_rayleigh, fresh draws of
// both components (LOS component drawn first).
CMatrix realize_rician(const ChannelSpec& spec, const PropagationContext& ctx, RandomStream& rng);

// Sum of num_clusters * num_rays rank-1 terms with CN(0,1) ray gains;
// cluster centers uniform over the full angle ranges, per-ray offsets
// Laplacian with scale angle_spread_rad, clamped to the valid ranges.
CMatrix realize_ray_cluster(const ChannelSpec& spec, const PropagationContext& ctx, RandomStream& rng);

// Deterministic near-field model: [H]_{v,u} = (gamma / r_{v,u})
// exp(-j 2 pi r_{v,u} / lambda) with gamma chosen so ||H||_F^2 = Nt*Nr.
// Requires every tx/rx element pair to be separated (r > 0).
CMatrix realize_spherical(const PropagationContext& ctx);

// Scales H so its squared Frobenius norm equals target_energy exactly.
void enforce_normalization(CMatrix& h, double target_energy);

}  // namespace mimosim
