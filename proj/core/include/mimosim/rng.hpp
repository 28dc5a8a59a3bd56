#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace mimosim {

// Deterministic random stream with derivable substreams.
//
// Substreams are keyed off the stream's logical seed, never off engine
// state, so the number of draws one consumer makes cannot perturb the
// sequence handed to another.  This is what makes per-link and per-trial
// realizations reproducible independently of evaluation order.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream substream(std::string_view tag) const;
  RandomStream substream(std::uint64_t index) const;

  std::uint64_t seed() const { return seed_; }

  double uniform();                       // U[0, 1)
  double uniform(double lo, double hi);   // U[lo, hi)
  double normal();                        // N(0, 1)
  double laplacian(double scale);         // zero-mean, pdf (1/2b) exp(-|x|/b)
  std::complex<double> complex_normal(double variance = 1.0);  // CN(0, variance)

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Stateless seed mixing (splitmix64-based); used for substream derivation.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t value);
std::uint64_t mix_seed(std::uint64_t seed, std::string_view tag);

}  // namespace mimosim
