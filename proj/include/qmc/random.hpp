#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace qmc {

// Derives an independent stream seed from (seed, counter). Restarts and test draws index
// streams by counter, so serial and parallel runs consume identical streams.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t counter);

// Portable random source: mt19937_64 plus explicit uniform/normal transforms, so the
// streams do not depend on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  Rng(std::uint64_t seed, std::uint64_t counter) : engine_(split_seed(seed, counter)) {}

  // Uniform on [0, 1).
  double uniform();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n);
  double normal();
  // Standard complex Gaussian (real and imaginary parts N(0, 1/2)).
  std::complex<double> complex_normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace qmc
