#include "mimosim/path_loss.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mimosim {

namespace {

double resolve_distance(const PathLossSpec& spec, const std::optional<double>& separation) {
  const std::optional<double>& d = spec.distance_m ? spec.distance_m : separation;
  if (!d) throw std::invalid_argument("path loss: no distance set and no device separation available");
  if (!(*d > 0.0) || !std::isfinite(*d))
    throw std::invalid_argument("path loss: distance must be positive and finite");
  return *d;
}

GainRealization from_power_gain(double g2) {
  if (!(g2 > 0.0) || !std::isfinite(g2)) throw std::runtime_error("path loss: nonpositive power gain");
  GainRealization out;
  out.amplitude_gain = std::sqrt(g2);
  out.power_loss_db = -10.0 * std::log10(g2);
  return out;
}

}  // namespace

double PathLossSpec::wavelength() const {
  if (!(carrier_frequency_hz > 0.0)) throw std::invalid_argument("path loss: carrier frequency must be positive");
  if (!(propagation_velocity_mps > 0.0))
    throw std::invalid_argument("path loss: propagation velocity must be positive");
  return propagation_velocity_mps / carrier_frequency_hz;
}

void set_reference_loss_db(PathLossSpec& spec, double db) {
  spec.reference_loss = std::pow(10.0, db / 10.0);
}

double reference_loss_db(const PathLossSpec& spec) {
  if (!(spec.reference_loss > 0.0)) throw std::invalid_argument("path loss: reference loss must be positive");
  return 10.0 * std::log10(spec.reference_loss);
}

GainRealization realize_fspl(const PathLossSpec& spec, std::optional<double> separation_m) {
  const double d = resolve_distance(spec, separation_m);
  if (!spec.path_loss_exponent) throw std::invalid_argument("path loss: exponent must be set explicitly");
  const double lambda = spec.wavelength();
  const double ref = lambda / (4.0 * std::numbers::pi);
  return from_power_gain(ref * ref * std::pow(d, -*spec.path_loss_exponent));
}

GainRealization realize_fspl_lns(const PathLossSpec& spec, RandomStream& rng,
                                 std::optional<double> separation_m) {
  if (spec.shadowing_variance_db2 < 0.0)
    throw std::invalid_argument("path loss: shadowing variance must be nonnegative");
  GainRealization base = realize_fspl(spec, separation_m);
  const double shadow_db = std::sqrt(spec.shadowing_variance_db2) * rng.normal();
  const double gamma = std::pow(10.0, shadow_db / 10.0);
  return from_power_gain(base.amplitude_gain * base.amplitude_gain * gamma);
}

GainRealization realize_two_slope(const PathLossSpec& spec, std::optional<double> separation_m) {
  const double d = resolve_distance(spec, separation_m);
  if (!(spec.reference_distance_m > 0.0))
    throw std::invalid_argument("path loss: reference distance must be positive");
  if (!(spec.reference_loss > 0.0)) throw std::invalid_argument("path loss: reference loss must be positive");
  if (!spec.exponent_near || !spec.exponent_far)
    throw std::invalid_argument("path loss: two-slope exponents must be set explicitly");
  const double ratio = d / spec.reference_distance_m;
  const double eta = d <= spec.reference_distance_m ? *spec.exponent_near : *spec.exponent_far;
  const double loss = spec.reference_loss * std::pow(ratio, eta);
  return from_power_gain(1.0 / loss);
}

GainRealization realize_gain(const PathLossSpec& spec, RandomStream& rng,
                             std::optional<double> separation_m) {
  switch (spec.model) {
    case PathLossModel::FreeSpace: return realize_fspl(spec, separation_m);
    case PathLossModel::FreeSpaceShadowed: return realize_fspl_lns(spec, rng, separation_m);
    case PathLossModel::TwoSlope: return realize_two_slope(spec, separation_m);
  }
  throw std::invalid_argument("path loss: unsupported model");
}

}  // namespace mimosim
