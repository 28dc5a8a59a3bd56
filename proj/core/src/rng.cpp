#include "mimosim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace mimosim {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value) {
  return splitmix64(splitmix64(seed) ^ splitmix64(value));
}

std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag) {
  return mix_seed(seed, fnv1a(tag));
}

RandomStream::RandomStream(std::uint64_t seed) : seed_(seed), engine_(splitmix64(seed)) {}

RandomStream RandomStream::substream(std::string_view tag) const {
  return RandomStream(mix_seed(seed_, tag));
}

RandomStream RandomStream::substream(std::uint64_t index) const {
  return RandomStream(mix_seed(seed_, index));
}

double RandomStream::uniform() {
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RandomStream::uniform(double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("RandomStream::uniform: empty interval");
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RandomStream::normal() {
  return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

double RandomStream::laplacian(double scale) {
  if (scale < 0.0) throw std::invalid_argument("RandomStream::laplacian: negative scale");
  if (scale == 0.0) return 0.0;
  double p = uniform();
  while (p == 0.0) p = uniform();  // keep the inverse CDF finite
  const double c = p - 0.5;
  const double mag = -std::log(1.0 - 2.0 * std::abs(c));
  return c < 0.0 ? -scale * mag : scale * mag;
}

std::complex<double> RandomStream::complex_normal(double variance) {
  if (variance < 0.0) throw std::invalid_argument("RandomStream::complex_normal: negative variance");
  const double sigma = std::sqrt(variance / 2.0);
  const double re = sigma * normal();
  const double im = sigma * normal();
  return {re, im};
}

}  // namespace mimosim
