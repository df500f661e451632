#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "pilotnn/psd.hpp"

namespace pilotnn {

// A realization of the stationary fading process for every antenna pair.
// Entries are mutually independent across (r, t); each is zero-mean,
// unit-variance, circularly symmetric Gaussian with the model's spectrum.
// Storage is slot-major: samples[(k * n_r + r) * n_t + t].
struct FadingPath {
  int n_r = 0;
  int n_t = 0;
  std::uint64_t seed = 0;
  std::size_t length = 0;
  std::vector<std::complex<double>> samples;

  std::complex<double>& at(std::size_t k, int r, int t) {
    return samples[(k * n_r + r) * n_t + t];
  }
  std::complex<double> at(std::size_t k, int r, int t) const {
    return samples[(k * n_r + r) * n_t + t];
  }
};

// R(m) by quadrature of the spectrum: integral f_H(l) exp(i 2 pi m l) dl.
// The closed-form route is PsdModel::autocovariance_closed; the two agree to
// quadrature accuracy for moderate lags.
std::complex<double> autocovariance(const PsdModel& model, long long lag);

// Draw one fading path per antenna pair by spectral synthesis: a circulant
// of size N >= 8x length (power of two) with eigenvalues sampled from the
// spectrum at the DFT frequencies drives a frequency-domain Gaussian draw.
// The realized covariance is the alias-wrapped sum_m R(lag + m N), which
// differs from R by O(lag/N^2) within the kept segment; at a jump of f the
// sample takes the two-sided midpoint, as the wrapped-covariance identity
// requires.
//
// Streams are seeded per (r, t) from `seed`, so a path is reproducible
// regardless of how callers are threaded.
FadingPath synthesize(const PsdModel& model, int n_r, int n_t,
                      std::size_t length, std::uint64_t seed);

// Binary path files: a 32-byte header
//   bytes 0-7   magic "FADPATH1"
//   bytes 8-11  n_r   (uint32, little endian)
//   bytes 12-15 n_t   (uint32)
//   bytes 16-23 length (uint64)
//   bytes 24-31 seed   (uint64)
// followed by length*n_r*n_t samples as interleaved complex64 (float32 real,
// float32 imag), slot-major in the same order as FadingPath::samples.
void dump_path(const FadingPath& path, const std::string& file);
FadingPath load_path(const std::string& file);

}  // namespace pilotnn
