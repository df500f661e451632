#pragma once

#include <complex>
#include <vector>

#include "pilotnn/psd.hpp"

namespace pilotnn {

// Spectra seen by an interpolator that observes one sample every L time
// slots, and the resulting channel-interpolation error variances in the
// infinite-window limit.
//
// Slot-index conventions, used throughout: within each length-L period, slots
// 0..P-1 carry pilots (P = pilot slots per period; one transmit antenna each)
// and slots P..L-1 carry data. t in 1..P labels the pilot slot t-1; a data
// slot at offset ell is separated from the nearest following pilot for
// antenna t by ell - t + 1 slots.

// f_{L,ell}(lambda): the L-fold undersampled, ell-rotated spectrum
//   (1/L) sum_{nu=0}^{L-1} fbar((lambda-nu)/L) exp(i 2 pi ell (lambda-nu)/L)
// where fbar is the period-1 continuation of f_H. lambda in [-1/2, 1/2].
std::complex<double> undersampled_spectrum(const PsdModel& model, int L,
                                           int ell, double lambda);

// Interpolation error variance in the no-aliasing regime L <= 1/(2 lambda_d),
// where it is independent of the slot offsets:
//   eps^2 = 1 - integral snr f^2 / (snr f + L n_t)
// evaluated in the equivalent non-cancelling form
//   integral f * L n_t / (snr f + L n_t).
// Throws if L violates the no-aliasing condition.
double error_variance_no_alias(const PsdModel& model, int L, int n_t,
                               double snr);

// Interpolation error variance for arbitrary L (aliased or not):
//   eps^2_ell(t) = 1 - integral snr |f_{L,ell-t+1}|^2 / (snr f_{L,0} + n_t)
// Valid slot offsets: 1 <= t <= n_t <= ell <= L-1.
double error_variance_general(const PsdModel& model, int L, int n_t, int ell,
                              int t, double snr);

// snr -> infinity lower bound on the error variance when L exceeds
// 1/(2 lambda_d) (aliased sampling): with lp = ell - t + 1,
//   (2/L^2) (1 - cos(2 pi lp / L)) *
//       integral fbar(l/L) fbar((l-1)/L) / f_{L,0}(l) dl
// integrated over the support overlap of the two shifted replicas. Returns 0
// when lp is a multiple of L. Requires L > 1/(2 lambda_d) for a positive
// overlap; below that the overlap is empty and the bound is trivially 0.
double aliased_error_lower_bound(const PsdModel& model, int L, int ell, int t);

// Pilot-branch form shared by the point-to-point and MAC conventions:
// the error variance as a function of the per-pilot-slot SNR rho
// (point-to-point: rho = snr/n_t; MAC: rho = snr).
double error_variance_no_alias_rho(const PsdModel& model, int L, double rho);
double error_variance_general_rho(const PsdModel& model, int L, int ell_prime,
                                  double rho);

// Breakpoints in [-1/2, 1/2] where any replica fbar((lambda-nu)/L) has a band
// edge; quadrature split points for integrands built from f_{L,ell}.
std::vector<double> alias_breakpoints(const PsdModel& model, int L);

}  // namespace pilotnn
