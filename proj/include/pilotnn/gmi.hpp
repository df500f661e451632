#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pilotnn/estimator.hpp"
#include "pilotnn/psd.hpp"

namespace pilotnn {

// Second-order description of the channel estimates entering the decoding
// metric: per data offset ell and transmit column t, the interpolation error
// variance eps2(ell, t). The estimate and error are uncorrelated, so the
// estimate entry (r, t) at offset ell has variance 1 - eps2(ell, t),
// identical across receive antennas.
struct EstimationProfile {
  int L = 0;
  int n_pilot = 0;  // pilot slots per period (n_t point-to-point)
  int n_t = 0;      // transmit columns described (= n_pilot here)
  int n_r = 0;
  int T = 0;        // interpolation window; 0 marks the infinite-window limit
  double snr = 0.0;
  // eps2[ell - n_pilot][t - 1]
  std::vector<std::vector<double>> eps2;

  double eps2_max() const;
  // sum over r and t of eps2 at a given data offset (expected squared
  // Frobenius norm of the error matrix)
  double err_frobenius_sq(int ell) const;
};

// Infinite-window error variances from the spectrum integrals; valid aliased
// or not. Point-to-point pilot convention (pilot SNR = snr/n_t).
EstimationProfile profile_infinite_T(const PsdModel& model, int L, int n_t,
                                     int n_r, double snr);
// Finite-window variances from the Wiener solver's predicted MSE.
EstimationProfile profile_finite_T(const PilotSchedule& schedule,
                                   const PsdModel& model, int n_r, double snr);

// F(snr) = n_r + snr/((L - n_t) n_t) sum_ell E||E_ell||_F^2.
double f_snr(const EstimationProfile& profile);

// The closed-form parameter choice theta = -1/(n_r + snr n_r eps2_max); the
// bound below holds for every theta < 0, and this choice makes it explicit.
double theta_choice(const EstimationProfile& profile);

struct GmiEstimate {
  std::string variant;
  double value = 0.0;  // nats per channel use
  double se = 0.0;     // Monte Carlo standard error (0 for closed forms)
  double theta = 0.0;
  double snr = 0.0;
  int L = 0, n_t = 0, n_r = 0, T = 0;
};

// Finite-window lower bound on the generalized mutual information of
// nearest-neighbor decoding with Gaussian codebooks:
//   (1/L) sum_{ell} E log det(I + snr/(n_t n_r (1 + snr eps2_max)) Hhat Hhat^H)
//     - (L - n_t)/L
// with Hhat column variances 1 - eps2(ell, t), estimated by Monte Carlo with
// mc samples per data offset. The proof path requires n_t = n_r; other shapes
// are rejected. With refine_theta, a golden-section search over theta < 0
// maximizes the underlying bound (same Monte Carlo draws for every theta) and
// never returns less than the closed-form choice.
GmiEstimate gmi_lb_finite_T(const EstimationProfile& profile, std::size_t mc,
                            std::uint64_t seed, bool refine_theta = false);

// Infinite-window asymptotic form (no aliasing, n_t = n_r):
//   ((L-n_t)/L) (n_t ln snr - n_t ln(n_t^2 (1 + snr eps2))
//                + E log det Hbar Hbar^H - 1)
// with Hbar i.i.d. CN(0, 1 - eps2); the expectation is Monte Carlo here and
// closed form (digamma) in gmi_lb_digamma.
GmiEstimate gmi_lb_asymptotic(const PsdModel& model, int L, int n_t,
                              double snr, std::size_t mc, std::uint64_t seed);
GmiEstimate gmi_lb_digamma(const PsdModel& model, int L, int n_t, double snr);

// E log det Hbar Hbar^H - 1 for an n_t x n_t matrix with i.i.d.
// CN(0, 1 - eps2) entries:
//   n_t ln(1 - eps2) + sum_{b=0}^{n_t-1} psi(n_t - b) - 1.
double digamma_closed_form(int n_t, double eps2);
// psi at positive integer argument: -gamma + sum_{k=1}^{n-1} 1/k.
double digamma_int(int n);

// Variant for any input law whose density is bounded by
// K/pi^{n_t} exp(-|x|^2) with per-symbol energy E||X||^2 = e_norm_sq <= n_t:
//   ((L-n_t)/L) (n_t ln snr - n_t ln(n_t^2 (1 + snr eps2 e_norm_sq))
//                + E log det Hbar Hbar^H - 1 - log_k)
// Reduces to gmi_lb_asymptotic at log_k = 0, e_norm_sq = 1.
GmiEstimate gmi_lb_general_input(const PsdModel& model, int L, int n_t,
                                 double snr, double log_k, double e_norm_sq,
                                 std::size_t mc, std::uint64_t seed);

// Internal building block, exposed for the MAC bounds: value and standard
// error of (1/L) sum_ell {E log det(I + coeff Hhat_ell Hhat_ell^H) - 1} where
// Hhat_ell is n_r x cols.size() with column variances col_var[ell][.].
// The per-offset sample streams are seeded derive_seed(seed, ell index).
std::pair<double, double> logdet_sum_bound(
    int L, int n_r, const std::vector<std::vector<double>>& col_var,
    double coeff, std::size_t mc, std::uint64_t seed);

struct PreLogFit {
  double slope = 0.0;      // nats per ln(snr)
  double intercept = 0.0;  // nats at ln(snr) = 0
  double residual_rms = 0.0;
  std::size_t points = 0;
};

// Least-squares slope of GMI (nats) against ln snr. Requires at least four
// points spanning at least 20 dB.
PreLogFit prelog_fit(const std::vector<double>& snr_db,
                     const std::vector<double>& gmi_nats);

}  // namespace pilotnn
