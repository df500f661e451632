#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace pilotnn {

// splitmix64 step; used as a seed mixer so that streams indexed by small
// integers (antenna pair, sample counter, ...) are decorrelated even when the
// base seeds are small or sequential.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic per-stream seed derived from a base seed and up to three
// stream coordinates. Same inputs give the same stream on every run and on
// every thread layout.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t i,
                                 std::uint64_t j = 0, std::uint64_t k = 0) {
  // Each coordinate is folded into a fully mixed state; injecting into raw
  // (unmixed) state lets adjacent bases and indices cancel, which silently
  // aliases supposedly independent streams.
  std::uint64_t s = base;
  std::uint64_t m = splitmix64(s);
  s = m ^ 0x8000000000000000ULL ^ i;
  m = splitmix64(s);
  s = m ^ j;
  m = splitmix64(s);
  s = m ^ k;
  return splitmix64(s);
}

// Circularly symmetric complex Gaussian CN(0, 1) source: real and imaginary
// parts are independent N(0, 1/2).
class ComplexNormal {
 public:
  explicit ComplexNormal(std::uint64_t seed) : gen_(seed) {}

  std::complex<double> operator()() {
    const double re = dist_(gen_);
    const double im = dist_(gen_);
    return {re, im};
  }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> dist_{0.0, 0.70710678118654752440};
};

}  // namespace pilotnn
