#include "pilotnn/codec.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pilotnn/rng.hpp"

namespace pilotnn {

Codebook generate_codebook(std::size_t M, std::size_t n, int n_t,
                           CodebookLaw law, std::uint64_t seed) {
  if (M < 1) throw std::invalid_argument("generate_codebook: M must be >= 1");
  if (n < 1) throw std::invalid_argument("generate_codebook: n must be >= 1");
  if (n_t < 1) throw std::invalid_argument("generate_codebook: n_t must be >= 1");

  Codebook book;
  book.n_t = n_t;
  book.n = n;
  book.M = M;
  book.law = law;
  book.seed = seed;
  book.words.resize(M);
  for (std::size_t m = 0; m < M; ++m) {
    ComplexNormal cn(derive_seed(seed, m));
    CVec& w = book.words[m];
    w.resize(n * static_cast<std::size_t>(n_t));
    for (auto& x : w) {
      x = cn();
      if (law == CodebookLaw::truncated_gaussian)
        while (std::norm(x) > 1.0) x = cn();
    }
  }
  return book;
}

double truncated_gaussian_normalizer(int n_t) {
  if (n_t < 1)
    throw std::invalid_argument("truncated_gaussian_normalizer: n_t must be >= 1");
  return std::pow(1.0 - std::exp(-1.0), n_t);
}

double truncated_gaussian_component_power() {
  const double e = std::exp(1.0);
  return (e - 2.0) / (e - 1.0);
}

CVec transmit_frame(const PilotSchedule& schedule, const Codebook& book,
                    std::size_t m) {
  if (book.n_t != schedule.n_pilot)
    throw std::invalid_argument("transmit_frame: codebook n_t does not match schedule");
  if (book.n != schedule.n)
    throw std::invalid_argument("transmit_frame: codeword length does not match schedule");
  if (m >= book.M) throw std::invalid_argument("transmit_frame: codeword index out of range");

  const int P = schedule.n_pilot;
  CVec x(schedule.n_total * static_cast<std::size_t>(P), {0.0, 0.0});
  std::size_t d = 0;
  for (std::size_t k = 0; k < schedule.n_total; ++k) {
    const int off = static_cast<int>(k % schedule.L);
    if (off < P) {
      x[k * P + off] = 1.0;  // one-hot pilot for antenna off+1
    } else if (schedule.is_data_slot(k)) {
      for (int t = 0; t < P; ++t) x[k * P + t] = book.words[m][d * P + t];
      ++d;
    }
  }
  return x;
}

CVec channel_apply(const FadingPath& path, const CVec& x, double snr,
                   std::uint64_t noise_seed) {
  if (!(snr >= 0.0)) throw std::invalid_argument("channel_apply: snr must be >= 0");
  const int n_r = path.n_r, n_t = path.n_t;
  const std::size_t slots = x.size() / n_t;
  if (x.size() != slots * static_cast<std::size_t>(n_t) || slots > path.length)
    throw std::invalid_argument("channel_apply: frame does not fit the fading path");

  const double amp = std::sqrt(snr / n_t);
  ComplexNormal noise(derive_seed(noise_seed, 0x5eed));
  CVec y(slots * static_cast<std::size_t>(n_r));
  for (std::size_t k = 0; k < slots; ++k)
    for (int r = 0; r < n_r; ++r) {
      std::complex<double> acc{0.0, 0.0};
      for (int t = 0; t < n_t; ++t) acc += path.at(k, r, t) * x[k * n_t + t];
      y[k * n_r + r] = amp * acc + noise();
    }
  return y;
}

DecodeResult nn_decode(const PilotSchedule& schedule, const Codebook& book,
                       const CVec& y, const CVec& hhat, int n_r, double snr) {
  if (book.n_t != schedule.n_pilot || book.n != schedule.n)
    throw std::invalid_argument("nn_decode: codebook does not match schedule");
  if (y.size() != schedule.n_total * static_cast<std::size_t>(n_r))
    throw std::invalid_argument("nn_decode: received frame has wrong size");

  const int P = schedule.n_pilot;
  const auto data = schedule.data_indices();
  if (hhat.size() != data.size() * static_cast<std::size_t>(n_r) * P)
    throw std::invalid_argument("nn_decode: estimate buffer has wrong size");

  const double amp = std::sqrt(snr / P);
  DecodeResult out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < book.M; ++m) {
    double metric = 0.0;
    for (std::size_t d = 0; d < data.size(); ++d) {
      const std::size_t k = data[d];
      for (int r = 0; r < n_r; ++r) {
        std::complex<double> acc{0.0, 0.0};
        for (int t = 0; t < P; ++t)
          acc += hhat[(d * n_r + r) * P + t] * book.words[m][d * P + t];
        metric += std::norm(y[k * n_r + r] - amp * acc);
      }
    }
    if (metric < best) {
      best = metric;
      out.m_hat = m;
      out.tie = false;
    } else if (metric == best) {
      out.tie = true;  // keep the smaller index
    }
  }
  out.metric = best;
  return out;
}

}  // namespace pilotnn
