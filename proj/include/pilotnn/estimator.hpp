#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "pilotnn/fading.hpp"
#include "pilotnn/psd.hpp"

namespace pilotnn {

using CVec = std::vector<std::complex<double>>;

// Frame layout for pilot-aided transmission. Time is split into periods of L
// slots; slots 0..n_pilot-1 of every period carry one-hot pilots (one
// transmit antenna each; for the two-user MAC the users' antennas are
// stacked), slots n_pilot..L-1 carry data. The n data symbols occupy
// data_blocks = n/(L-n_pilot) consecutive periods, padded on both sides by
// T-1 pilot-only guard periods (their data slots stay silent) so that every
// data slot has T pilot periods on each side, and closed by one trailing
// pilot block. Slot 0 is the first pilot slot.
struct PilotSchedule {
  int L = 0;
  int n_pilot = 0;  // pilot slots per period
  int T = 0;        // one-sided interpolation window, in pilot periods
  std::size_t n = 0;
  std::size_t data_blocks = 0;  // n / (L - n_pilot)
  std::size_t periods = 0;      // data_blocks + 2(T-1)
  std::size_t n_p = 0;          // pilot slots in the frame
  std::size_t n_g = 0;          // silent guard slots
  std::size_t n_total = 0;      // n_p + n + n_g

  bool is_pilot_slot(std::size_t k) const {
    return k < n_total && static_cast<int>(k % L) < n_pilot;
  }
  bool is_data_slot(std::size_t k) const {
    if (k >= n_total || static_cast<int>(k % L) < n_pilot) return false;
    const std::size_t j = k / L;
    return j + 1 >= static_cast<std::size_t>(T) && j + 1 < T + data_blocks;
  }
  std::vector<std::size_t> pilot_indices() const;
  std::vector<std::size_t> data_indices() const;
};

// Requires L > n_t >= 1, T >= 1, and n a positive multiple of L - n_t.
PilotSchedule build_schedule(int L, int n_t, int T, std::size_t n);

// LMMSE interpolator for one (data offset ell, pilot column t) pair: 2T
// weights on the pilot observations at slots (j - tau) L + t - 1,
// tau = -T..T-1, identical for every receive antenna and every period j.
//
// pilot_snr is the SNR of a single pilot observation (point-to-point
// snr/n_t; MAC snr). Weight solves go through a Cholesky factorization of
// the 2T x 2T pilot covariance; `residual` records the worst relative
// normal-equation residual across all (ell, t).
class InterpolatorWeights {
 public:
  InterpolatorWeights(int L, int n_pilot, int T, double pilot_snr);

  // weights a_tau, tau = -T..T-1 at index tau + T; estimate = sum a_tau Y_tau.
  const CVec& weights(int ell, int t) const;
  double predicted_mse(int ell, int t) const;
  double residual() const { return residual_; }

  int L() const { return L_; }
  int n_pilot() const { return n_pilot_; }
  int T() const { return T_; }
  double pilot_snr() const { return pilot_snr_; }

  friend InterpolatorWeights solve_weights_pilot_snr(const PilotSchedule&,
                                                     const PsdModel&, double);

 private:
  int L_, n_pilot_, T_;
  double pilot_snr_;
  double residual_ = 0.0;
  std::vector<CVec> weights_;       // [(ell - n_pilot) * n_pilot + t - 1]
  std::vector<double> mse_;
  std::size_t slot(int ell, int t) const;
};

// Point-to-point convention: pilot SNR = snr / n_pilot (each pilot is a
// one-hot vector scaled by sqrt(snr/n_t)).
InterpolatorWeights solve_weights(const PilotSchedule& schedule,
                                  const PsdModel& model, double snr);
InterpolatorWeights solve_weights_pilot_snr(const PilotSchedule& schedule,
                                            const PsdModel& model,
                                            double pilot_snr);

// Interpolate the fading at every data slot of the frame from the received
// pilot-slot samples. y holds the full received frame, y[k * n_r + r];
// only pilot slots are read. The result is indexed like the truth path:
// estimates[(d * n_r + r) * n_pilot + t - 1], d running over
// schedule.data_indices() in order.
CVec estimate_path(const PilotSchedule& schedule,
                   const InterpolatorWeights& weights, const CVec& y, int n_r);

// Per-(ell, t) moments of the estimation error E = H - Hhat over the data
// slots of accumulated frames, pooled across periods and receive antennas.
class ErrorStatsAccumulator {
 public:
  ErrorStatsAccumulator(int L, int n_pilot);

  // truth must cover the frame (length >= n_total) with n_t == n_pilot.
  void add_frame(const PilotSchedule& schedule, const CVec& estimates,
                 const FadingPath& truth, int n_r);

  // Fold another accumulator's sums into this one (same layout required).
  void merge(const ErrorStatsAccumulator& other);

  std::size_t count(int ell, int t) const;
  double mean_sq_error(int ell, int t) const;
  // Standard error of the mean from the scatter of per-frame means (slots
  // within a frame are correlated, so the per-sample spread understates the
  // uncertainty); falls back to the per-sample estimate below two frames.
  double se_sq_error(int ell, int t) const;
  std::complex<double> corr_est_err(int ell, int t) const;  // normalized
  // second-moment means split by period parity, for cyclostationarity checks
  std::pair<double, double> mean_sq_error_by_parity(int ell, int t) const;
  std::pair<double, double> se_sq_error_by_parity(int ell, int t) const;

 private:
  struct Cell {
    std::size_t n[2] = {0, 0};
    double sum_sq[2] = {0.0, 0.0};    // |E|^2, split by period parity
    double sum_sq2[2] = {0.0, 0.0};   // |E|^4
    std::complex<double> sum_cross{0.0, 0.0};  // Hhat * conj(E)
    double sum_est_sq = 0.0;          // |Hhat|^2
    // per-frame means of |E|^2: [0], [1] split by parity, [2] whole frame
    std::size_t fn[3] = {0, 0, 0};
    double fsum[3] = {0.0, 0.0, 0.0};
    double fsum2[3] = {0.0, 0.0, 0.0};
  };
  int L_, n_pilot_;
  std::vector<Cell> cells_;
  const Cell& cell(int ell, int t) const;
  Cell& cell(int ell, int t);
};

// Single-frame convenience wrapper.
ErrorStatsAccumulator empirical_error_stats(const PilotSchedule& schedule,
                                            const CVec& estimates,
                                            const FadingPath& truth, int n_r);

}  // namespace pilotnn
