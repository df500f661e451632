#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pilotnn/codec.hpp"
#include "pilotnn/estimator.hpp"
#include "pilotnn/gmi.hpp"
#include "pilotnn/psd.hpp"

namespace pilotnn {

// Two-user multiple-access configuration. SNR is per transmit antenna: the
// received signal is y = sqrt(snr) (H1 x1 + H2 x2) + z, with no 1/n_t
// scaling, so each pilot observation has SNR rho = snr (the point-to-point
// convention divides by n_t). The point-to-point equivalent of the sum rate
// therefore lives at snr_p2p = snr_mac * (n_t1 + n_t2).
struct MacConfig {
  int n_t1 = 0;
  int n_t2 = 0;
  int n_r = 0;
  int L = 0;
  int T = 1;       // 0 selects the infinite-window error variances
  double snr = 0.0;
};

// Shared frame: each period carries n_t1 + n_t2 pilot slots, user 1 on
// offsets 0..n_t1-1, user 2 on offsets n_t1..n_t1+n_t2-1.
PilotSchedule mac_schedule(const MacConfig& cfg, std::size_t n);

// Infinite-window MAC interpolation error variance (no aliasing):
//   1 - integral snr f^2 / (snr f + L);
// independent of user, slot offsets and antennas.
double mac_error_variance(const PsdModel& model, int L, double snr);

// Estimation profile over the stacked n_t1 + n_t2 transmit columns, with the
// MAC pilot convention. cfg.T = 0 gives the infinite-window variances (valid
// aliased or not); T >= 1 uses the Wiener solver's predicted MSE.
EstimationProfile mac_profile(const MacConfig& cfg, const PsdModel& model);

// Per-user and sum GMI lower bounds for joint nearest-neighbor decoding:
//   user s: (1/L) sum_ell {E log det(I + snr Hhat_s Hhat_s^H /
//             (n_r (1 + (n_t1+n_t2) snr eps2_max))) - 1}
// with eps2_max taken over both users' columns; the sum bound stacks
// [Hhat_1 Hhat_2]. The sum bound coincides with the point-to-point bound at
// n_t = n_t1 + n_t2 and snr_p2p = snr (n_t1 + n_t2).
GmiEstimate mac_gmi_user1(const MacConfig& cfg, const PsdModel& model,
                          std::size_t mc, std::uint64_t seed);
GmiEstimate mac_gmi_user2(const MacConfig& cfg, const PsdModel& model,
                          std::size_t mc, std::uint64_t seed);
GmiEstimate mac_gmi_sum(const MacConfig& cfg, const PsdModel& model,
                        std::size_t mc, std::uint64_t seed);

// Exact rational number; the pre-log regions and thresholds are tiny
// integer-derived fractions, so plain 64-bit arithmetic with normalization
// suffices.
struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n);  // NOLINT implicit from integers is the point
  Rational(long long n, long long d);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  bool operator==(const Rational& o) const;
  bool operator<(const Rational& o) const;
  bool operator<=(const Rational& o) const;

  double value() const { return static_cast<double>(num) / den; }
  std::string str() const;
};

// a x + b y <= c over rate pairs (x, y) = (prelog_1, prelog_2).
struct HalfPlane {
  Rational a, b, c;
};

struct PreLogRegion {
  std::vector<HalfPlane> constraints;  // includes x >= 0, y >= 0
  // counter-clockwise hull vertices starting at the origin
  std::vector<std::pair<Rational, Rational>> vertices;
  // sampled boundary points (time-sharing sweep), empty for polytope regions
  std::vector<std::pair<double, double>> samples;
};

// Joint-transmission pre-log region: with s = n_t1 + n_t2 and the common
// factor (1 - s/L*),
//   x <= min(n_r, n_t1) (1 - s/L*), y <= min(n_r, n_t2) (1 - s/L*),
//   x + y <= min(n_r, s) (1 - s/L*).
// Requires L* > n_t1 + n_t2.
PreLogRegion jt_region(int n_r, int n_t1, int n_t2, long long l_star);

// TDMA pre-log region: time-sharing beta in [0, 1] between single-user
// operation, rate pairs (beta A, (1-beta) B) with
//   A = min(n_r, n_t1)(1 - n_t1/L*), B = min(n_r, n_t2)(1 - n_t2/L*);
// the region is the triangle with legs A and B. beta_steps controls the
// sampled sweep stored in `samples`. Requires L* > max(n_t1, n_t2).
PreLogRegion tdma_region(int n_r, int n_t1, int n_t2, long long l_star,
                         int beta_steps = 100);

enum class Verdict { JT_superior, TDMA_superior, indeterminate };

struct VerdictResult {
  Verdict verdict = Verdict::indeterminate;
  // L* > jt_threshold guarantees joint transmission beats coherent TDMA;
  // L* < tdma_threshold guarantees TDMA beats the joint-transmission bound.
  // The infinite flags mark thresholds of the form a/0.
  Rational jt_threshold;
  bool jt_infinite = false;
  Rational tdma_threshold;
  bool tdma_infinite = false;
  int n_r = 0, n_t1 = 0, n_t2 = 0;
  long long l_star = 0;
};

// Integer-exact evaluation of the superiority conditions:
//   JT_superior:   L* > min(n_r,s) s / (min(n_r,s) - min(n_r, max(n_t1,n_t2)))
//   TDMA_superior: L* < [min(n_r,s) s - min(n_t1 n_r, n_t1^2, n_t2 n_r,
//                        n_t2^2)] / (min(n_r,s) - min(n_r, n_t1, n_t2))
// with a/0 read as +infinity (so JT_superior is unreachable and
// TDMA_superior always holds, respectively).
VerdictResult corollary1_verdict(int n_r, int n_t1, int n_t2, long long l_star);

// MAC channel and joint decoding. x1/x2 are full-frame transmit matrices in
// the users' own antenna layout (mac_transmit_frame); paths carry n_t1 and
// n_t2 columns.
CVec mac_transmit_frame(const PilotSchedule& schedule, int n_t1, int n_t2,
                        int user, const Codebook& book, std::size_t m);
CVec mac_channel_apply(const FadingPath& path1, const FadingPath& path2,
                       const CVec& x1, const CVec& x2, double snr,
                       std::uint64_t noise_seed);

// Joint nearest-neighbor decoding over both codebooks: minimize over (m1, m2)
//   sum_k | y_k - sqrt(snr) (Hhat1 x1(m1) + Hhat2 x2(m2)) |^2.
// hhat is the stacked estimate over n_t1 + n_t2 columns (estimate_path on the
// MAC schedule). Ties break toward smaller (m1, m2) in lexicographic order.
struct MacDecodeResult {
  std::size_t m1_hat = 0, m2_hat = 0;
  double metric = 0.0;
  bool tie = false;
};
MacDecodeResult mac_nn_decode(const PilotSchedule& schedule,
                              const Codebook& book1, const Codebook& book2,
                              const CVec& y, const CVec& hhat, int n_r,
                              double snr);

}  // namespace pilotnn
