#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace ucp {

// Portable random source. std::mt19937_64 output is fully specified by the
// standard, but the std:: distributions are not, so uniform/normal/index
// draws are derived here to keep datasets and k-means seeds bit-identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform on [0, 1).
  double uniform();

  // Standard normal (Marsaglia polar method).
  double normal();

  // Uniform integer in [0, n). n must be > 0.
  std::size_t index(std::size_t n);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// SplitMix64 finalizer over (seed, stream); used to derive independent seeds
// for per-k and per-fold runs from one user seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace ucp
