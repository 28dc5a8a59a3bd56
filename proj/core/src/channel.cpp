#include "mimosim/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mimosim {

namespace {

constexpr double kPi = std::numbers::pi;

void check_context(const PropagationContext& ctx) {
  if (ctx.num_tx() == 0 || ctx.num_rx() == 0)
    throw std::invalid_argument("channel: context arrays must be non-empty");
}

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

Direction draw_direction(RandomStream& rng) {
  Direction d;
  d.azimuth = rng.uniform(-kPi, kPi);
  d.elevation = rng.uniform(-kPi / 2, kPi / 2);
  return d;
}

// Rank-1 path: beta * a_rx(aoa) a_tx(aod)^H.
CMatrix path_term(const PropagationContext& ctx, const Direction& aod, const Direction& aoa,
                  Complex beta) {
  const CVector a_rx = ctx.rx_array.response(aoa);
  const CVector a_tx = ctx.tx_array.response(aod);
  return beta * (a_rx * a_tx.adjoint());
}

}  // namespace

double PropagationContext::wavelength() const {
  if (!(carrier_frequency_hz > 0.0))
    throw std::invalid_argument("channel: carrier frequency must be positive");
  if (!(propagation_velocity_mps > 0.0))
    throw std::invalid_argument("channel: propagation velocity must be positive");
  return propagation_velocity_mps / carrier_frequency_hz;
}

CMatrix realize_rayleigh(const PropagationContext& ctx, RandomStream& rng) {
  check_context(ctx);
  CMatrix h(ctx.num_rx(), ctx.num_tx());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = 0; j < h.cols(); ++j) h(i, j) = rng.complex_normal(1.0);
  return h;
}

CMatrix realize_los(const ChannelSpec& spec, const PropagationContext& ctx, RandomStream& rng) {
  check_context(ctx);
  // Draw order is frozen for reproducibility: AoD, AoA, then the phase.
  const Direction aod = spec.los_aod ? *spec.los_aod : draw_direction(rng);
  const Direction aoa = spec.los_aoa ? *spec.los_aoa : draw_direction(rng);
  const double phase = rng.uniform(0.0, 2.0 * kPi);
  return path_term(ctx, aod, aoa, Complex(std::cos(phase), std::sin(phase)));
}

CMatrix realize_rician(const ChannelSpec& spec, const PropagationContext& ctx, RandomStream& rng) {
  if (!(spec.rician_kappa >= 0.0)) throw std::invalid_argument("channel: rician kappa must be >= 0");
  const double w_los = std::sqrt(spec.rician_kappa / (spec.rician_kappa + 1.0));
  const double w_diffuse = std::sqrt(1.0 / (spec.rician_kappa + 1.0));
  const CMatrix los = realize_los(spec, ctx, rng);
  const CMatrix diffuse = realize_rayleigh(ctx, rng);
  return w_los * los + w_diffuse * diffuse;
}

CMatrix realize_ray_cluster(const ChannelSpec& spec, const PropagationContext& ctx, RandomStream& rng) {
  check_context(ctx);
  if (spec.num_clusters < 1 || spec.num_rays < 1)
    throw std::invalid_argument("channel: cluster and ray counts must be >= 1");
  if (spec.angle_spread_rad < 0.0)
    throw std::invalid_argument("channel: angle spread must be nonnegative");
  CMatrix h = CMatrix::Zero(ctx.num_rx(), ctx.num_tx());
  for (int c = 0; c < spec.num_clusters; ++c) {
    const Direction aod_center = draw_direction(rng);
    const Direction aoa_center = draw_direction(rng);
    for (int r = 0; r < spec.num_rays; ++r) {
      Direction aod, aoa;
      aod.azimuth = clamp(aod_center.azimuth + rng.laplacian(spec.angle_spread_rad), -kPi, kPi);
      aod.elevation = clamp(aod_center.elevation + rng.laplacian(spec.angle_spread_rad), -kPi / 2, kPi / 2);
      aoa.azimuth = clamp(aoa_center.azimuth + rng.laplacian(spec.angle_spread_rad), -kPi, kPi);
      aoa.elevation = clamp(aoa_center.elevation + rng.laplacian(spec.angle_spread_rad), -kPi / 2, kPi / 2);
      h += path_term(ctx, aod, aoa, rng.complex_normal(1.0));
    }
  }
  return h / std::sqrt(static_cast<double>(spec.num_clusters) * spec.num_rays);
}

CMatrix realize_spherical(const PropagationContext& ctx) {
  check_context(ctx);
  const double lambda = ctx.wavelength();
  const Eigen::MatrixXd tx_pos =
      (ctx.tx_array.coordinates() * lambda).rowwise() + ctx.tx_origin.transpose();
  const Eigen::MatrixXd rx_pos =
      (ctx.rx_array.coordinates() * lambda).rowwise() + ctx.rx_origin.transpose();
  const Eigen::Index nt = tx_pos.rows(), nr = rx_pos.rows();
  Eigen::MatrixXd r(nr, nt);
  double inv_sq_sum = 0.0;
  for (Eigen::Index v = 0; v < nr; ++v) {
    for (Eigen::Index u = 0; u < nt; ++u) {
      const double dist = (rx_pos.row(v) - tx_pos.row(u)).norm();
      if (!(dist > 0.0))
        throw std::invalid_argument("channel: coincident tx/rx elements in spherical-wave model");
      r(v, u) = dist;
      inv_sq_sum += 1.0 / (dist * dist);
    }
  }
  // gamma makes ||H||_F^2 = Nt*Nr exactly.
  const double gamma = std::sqrt(static_cast<double>(nt) * static_cast<double>(nr) / inv_sq_sum);
  CMatrix h(nr, nt);
  for (Eigen::Index v = 0; v < nr; ++v) {
    for (Eigen::Index u = 0; u < nt; ++u) {
      const double phase = -2.0 * kPi * r(v, u) / lambda;
      h(v, u) = (gamma / r(v, u)) * Complex(std::cos(phase), std::sin(phase));
    }
  }
  return h;
}

void enforce_normalization(CMatrix& h, double target_energy) {
  if (!(target_energy > 0.0)) throw std::invalid_argument("channel: normalization target must be positive");
  const double energy = h.squaredNorm();
  if (energy == 0.0) throw std::runtime_error("channel: cannot normalize an all-zero matrix");
  h *= std::sqrt(target_energy / energy);
}

ChannelRealization realize_channel(const ChannelSpec& spec, const PropagationContext& ctx,
                                   RandomStream& rng) {
  check_context(ctx);
  CMatrix h;
  switch (spec.model) {
    case ChannelModel::Rayleigh: h = realize_rayleigh(ctx, rng); break;
    case ChannelModel::Los: h = realize_los(spec, ctx, rng); break;
    case ChannelModel::Rician: h = realize_rician(spec, ctx, rng); break;
    case ChannelModel::RayCluster: h = realize_ray_cluster(spec, ctx, rng); break;
    case ChannelModel::SphericalWave: h = realize_spherical(ctx); break;
    default: throw std::invalid_argument("channel: unsupported model");
  }
  if (spec.force_normalization) {
    const double target =
        spec.normalized_energy ? *spec.normalized_energy
                               : static_cast<double>(ctx.num_tx()) * static_cast<double>(ctx.num_rx());
    enforce_normalization(h, target);
  }
  ChannelRealization out;
  out.energy = h.squaredNorm();
  out.matrix = std::move(h);
  return out;
}

}  // namespace mimosim
