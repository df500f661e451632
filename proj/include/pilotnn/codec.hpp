#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "pilotnn/estimator.hpp"
#include "pilotnn/fading.hpp"

namespace pilotnn {

// Random codebooks over n data slots with n_t transmit antennas.
//   gaussian:            entries i.i.d. CN(0, 1)
//   truncated_gaussian:  entries i.i.d. CN(0, 1) conditioned on |x| <= 1
//                        (rejection sampling)
enum class CodebookLaw { gaussian, truncated_gaussian };

struct Codebook {
  int n_t = 0;
  std::size_t n = 0;  // data symbols per codeword
  std::size_t M = 0;  // codewords
  CodebookLaw law = CodebookLaw::gaussian;
  std::uint64_t seed = 0;
  // words[m][k * n_t + t], k = 0..n-1
  std::vector<CVec> words;
};

Codebook generate_codebook(std::size_t M, std::size_t n, int n_t,
                           CodebookLaw law, std::uint64_t seed);

// Normalizer of the truncated-Gaussian symbol law: the probability that a
// CN(0,1) draw lands in the unit disc, to the n_t-th power, (1 - e^-1)^{n_t}.
// The truncated symbol density is then bounded by K/pi^{n_t} exp(-|x|^2)
// with K = 1/truncated_gaussian_normalizer(n_t).
double truncated_gaussian_normalizer(int n_t);
// Per-component second moment E|x|^2 of the truncated law: (e-2)/(e-1).
double truncated_gaussian_component_power();

// Lay codeword m onto a frame: pilot slot at offset t-1 carries the one-hot
// pilot for antenna t, data slots carry the codeword symbols in slot order,
// guard slots are silent. Returns x[k * n_t + t] over the full frame.
CVec transmit_frame(const PilotSchedule& schedule, const Codebook& book,
                    std::size_t m);

// Point-to-point channel: y_k = sqrt(snr/n_t) H_k x_k + z_k with z_k i.i.d.
// CN(0, I). x covers the full frame (transmit_frame output).
CVec channel_apply(const FadingPath& path, const CVec& x, double snr,
                   std::uint64_t noise_seed);

struct DecodeResult {
  std::size_t m_hat = 0;
  double metric = 0.0;
  bool tie = false;  // another codeword attained exactly the same metric
};

// Nearest-neighbor decoding with channel estimates: minimize over m
//   D(m) = sum_{data slots k} | y_k - sqrt(snr/n_t) Hhat_k x_k(m) |^2.
// Ties break toward the smallest codeword index. hhat is laid out as the
// output of estimate_path.
DecodeResult nn_decode(const PilotSchedule& schedule, const Codebook& book,
                       const CVec& y, const CVec& hhat, int n_r, double snr);

}  // namespace pilotnn
