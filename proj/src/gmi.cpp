#include "pilotnn/gmi.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pilotnn/rng.hpp"
#include "pilotnn/spectrum.hpp"

namespace pilotnn {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;

void check_profile_dims(int L, int n_t, int n_r) {
  if (n_t < 1 || n_r < 1)
    throw std::invalid_argument("gmi: antenna counts must be >= 1");
  if (L <= n_t) throw std::invalid_argument("gmi: need L > n_t");
}

// Mean and standard error of log det(I + coeff H H^H) over mc draws of an
// n_r x cols matrix H with independent CN(0, col_var[c]) entries. Streams are
// seeded per sample, so the estimate is independent of any outer threading.
std::pair<double, double> mc_logdet_shifted(int n_r,
                                            const std::vector<double>& col_var,
                                            double coeff, std::size_t mc,
                                            std::uint64_t seed) {
  const int n_c = static_cast<int>(col_var.size());
  std::vector<double> scale(col_var.size());
  for (std::size_t c = 0; c < col_var.size(); ++c) {
    if (col_var[c] < 0.0)
      throw std::invalid_argument("gmi: negative estimate variance");
    scale[c] = std::sqrt(col_var[c]);
  }

  double sum = 0.0, sum2 = 0.0;
  Eigen::MatrixXcd H(n_r, n_c);
  for (std::size_t s = 0; s < mc; ++s) {
    ComplexNormal cn(derive_seed(seed, s));
    for (int c = 0; c < n_c; ++c)
      for (int r = 0; r < n_r; ++r) H(r, c) = scale[c] * cn();
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(n_r, n_r);
    M.noalias() += coeff * H * H.adjoint();
    const Eigen::LLT<Eigen::MatrixXcd> llt(M);
    double ld = 0.0;
    for (int i = 0; i < n_r; ++i)
      ld += std::log(std::real(llt.matrixL()(i, i)));
    ld *= 2.0;
    sum += ld;
    sum2 += ld * ld;
  }
  const double mean = sum / mc;
  const double var = std::max(sum2 / mc - mean * mean, 0.0);
  return {mean, std::sqrt(var / mc)};
}

// Mean and standard error of log det(H H^H) for square n x n matrices with
// i.i.d. CN(0, var) entries (almost surely nonsingular).
std::pair<double, double> mc_logdet_wishart(int n, double var, std::size_t mc,
                                            std::uint64_t seed) {
  const double scale = std::sqrt(var);
  double sum = 0.0, sum2 = 0.0;
  Eigen::MatrixXcd H(n, n);
  for (std::size_t s = 0; s < mc; ++s) {
    ComplexNormal cn(derive_seed(seed, s));
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) H(r, c) = scale * cn();
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(H);
    double logabs = 0.0;
    for (int i = 0; i < n; ++i)
      logabs += std::log(std::abs(lu.matrixLU()(i, i)));
    const double ld = 2.0 * logabs;
    sum += ld;
    sum2 += ld * ld;
  }
  const double mean = sum / mc;
  const double var_s = std::max(sum2 / mc - mean * mean, 0.0);
  return {mean, std::sqrt(var_s / mc)};
}

// Worst-case infinite-window error variance over the data offsets, from the
// general (aliasing-valid) integral. Replacing every per-offset variance by
// the maximum only lowers the rate bounds (the log-det term is monotone in
// the estimate variances and the 1 + snr eps2 denominator in eps2), so the
// closed-form variants below stay valid lower bounds under aliasing, and in
// the alias-free case this reduces to the offset-independent formula.
double eps2_worst_case(const PsdModel& model, int L, int n_t, double snr) {
  double m = 0.0;
  for (int lp = 1; lp <= L - 1; ++lp)
    m = std::max(m, error_variance_general_rho(model, L, lp, snr / n_t));
  return m;
}

}  // namespace

double EstimationProfile::eps2_max() const {
  double m = 0.0;
  for (const auto& row : eps2)
    for (double v : row) m = std::max(m, v);
  return m;
}

double EstimationProfile::err_frobenius_sq(int ell) const {
  const auto& row = eps2.at(static_cast<std::size_t>(ell - n_pilot));
  double s = 0.0;
  for (double v : row) s += v;
  return n_r * s;
}

EstimationProfile profile_infinite_T(const PsdModel& model, int L, int n_t,
                                     int n_r, double snr) {
  check_profile_dims(L, n_t, n_r);
  EstimationProfile p;
  p.L = L;
  p.n_pilot = n_t;
  p.n_t = n_t;
  p.n_r = n_r;
  p.T = 0;
  p.snr = snr;
  // The variance depends on (ell, t) only through ell - t + 1; cache it.
  std::vector<double> by_lp(L, -1.0);
  p.eps2.resize(L - n_t);
  for (int ell = n_t; ell <= L - 1; ++ell) {
    auto& row = p.eps2[ell - n_t];
    row.resize(n_t);
    for (int t = 1; t <= n_t; ++t) {
      const int lp = ell - t + 1;
      if (by_lp[lp] < 0.0)
        by_lp[lp] = error_variance_general_rho(model, L, lp, snr / n_t);
      row[t - 1] = by_lp[lp];
    }
  }
  return p;
}

EstimationProfile profile_finite_T(const PilotSchedule& schedule,
                                   const PsdModel& model, int n_r,
                                   double snr) {
  const auto w = solve_weights(schedule, model, snr);
  EstimationProfile p;
  p.L = schedule.L;
  p.n_pilot = schedule.n_pilot;
  p.n_t = schedule.n_pilot;
  p.n_r = n_r;
  p.T = schedule.T;
  p.snr = snr;
  p.eps2.resize(p.L - p.n_pilot);
  for (int ell = p.n_pilot; ell <= p.L - 1; ++ell) {
    auto& row = p.eps2[ell - p.n_pilot];
    row.resize(p.n_pilot);
    for (int t = 1; t <= p.n_pilot; ++t) row[t - 1] = w.predicted_mse(ell, t);
  }
  return p;
}

double f_snr(const EstimationProfile& profile) {
  double acc = 0.0;
  for (int ell = profile.n_pilot; ell <= profile.L - 1; ++ell)
    acc += profile.err_frobenius_sq(ell);
  return profile.n_r + profile.snr * acc /
                           ((profile.L - profile.n_pilot) *
                            static_cast<double>(profile.n_t));
}

double theta_choice(const EstimationProfile& profile) {
  return -1.0 / (profile.n_r * (1.0 + profile.snr * profile.eps2_max()));
}

std::pair<double, double> logdet_sum_bound(
    int L, int n_r, const std::vector<std::vector<double>>& col_var,
    double coeff, std::size_t mc, std::uint64_t seed) {
  if (mc < 2) throw std::invalid_argument("gmi: need at least 2 Monte Carlo samples");
  double value = 0.0, se2 = 0.0;
  for (std::size_t i = 0; i < col_var.size(); ++i) {
    const auto [mean, se] =
        mc_logdet_shifted(n_r, col_var[i], coeff, mc, derive_seed(seed, i));
    value += mean - 1.0;
    se2 += se * se;
  }
  return {value / L, std::sqrt(se2) / L};
}

GmiEstimate gmi_lb_finite_T(const EstimationProfile& profile, std::size_t mc,
                            std::uint64_t seed, bool refine_theta) {
  if (profile.n_t != profile.n_r)
    throw std::invalid_argument(
        "gmi_lb_finite_T: bound is only established for n_t = n_r");
  const int L = profile.L, nt = profile.n_t, nr = profile.n_r;
  const double snr = profile.snr;
  const double e2max = profile.eps2_max();

  std::vector<std::vector<double>> col_var(profile.eps2.size());
  for (std::size_t i = 0; i < profile.eps2.size(); ++i) {
    col_var[i].resize(profile.eps2[i].size());
    for (std::size_t t = 0; t < profile.eps2[i].size(); ++t)
      col_var[i][t] = 1.0 - profile.eps2[i][t];
  }

  GmiEstimate out;
  out.variant = "finite_T";
  out.snr = snr;
  out.L = L;
  out.n_t = nt;
  out.n_r = nr;
  out.T = profile.T;
  out.theta = theta_choice(profile);

  const double coeff = snr / (nt * nr * (1.0 + snr * e2max));
  auto [value, se] = logdet_sum_bound(L, nr, col_var, coeff, mc, seed);
  out.value = value;
  out.se = se;

  if (refine_theta) {
    // Bound at arbitrary theta < 0, with the true F(snr) instead of the
    // closed-form simplification theta F >= -1:
    //   (L-n_t)/L (theta F + 1) + (1/L) sum_ell {E log det(I - theta snr/n_t
    //   Hhat Hhat^H) - 1}
    // evaluated with the same Monte Carlo draws for every theta (seed replay),
    // so the golden-section search maximizes a deterministic concave function.
    const double F = f_snr(profile);
    const double frac = static_cast<double>(L - nt) / L;
    const auto bound_at = [&](double theta) {
      const auto [v, s] =
          logdet_sum_bound(L, nr, col_var, -theta * snr / nt, mc, seed);
      return std::pair<double, double>(frac * (theta * F + 1.0) + v, s);
    };

    const double theta_star = out.theta;
    double lo = 64.0 * theta_star, hi = 1e-3 * theta_star;
    const double gr = 0.61803398874989484820;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = bound_at(x1).first, f2 = bound_at(x2).first;
    for (int it = 0; it < 48; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = bound_at(x2).first;
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = bound_at(x1).first;
      }
    }
    const double theta_best = f1 > f2 ? x1 : x2;
    const auto refined = bound_at(theta_best);
    const auto at_star = bound_at(theta_star);
    // at_star.first >= out.value deterministically (theta* F >= -1); keep the
    // best of the three so refinement can never lose.
    if (at_star.first > out.value) {
      out.value = at_star.first;
      out.se = at_star.second;
      out.theta = theta_star;
    }
    if (refined.first > out.value) {
      out.value = refined.first;
      out.se = refined.second;
      out.theta = theta_best;
    }
  }
  return out;
}

GmiEstimate gmi_lb_asymptotic(const PsdModel& model, int L, int n_t,
                              double snr, std::size_t mc, std::uint64_t seed) {
  check_profile_dims(L, n_t, n_t);
  if (!(snr > 0.0))
    throw std::invalid_argument("gmi_lb_asymptotic: snr must be > 0");
  if (mc < 2) throw std::invalid_argument("gmi: need at least 2 Monte Carlo samples");
  const double eps2 = eps2_worst_case(model, L, n_t, snr);
  const auto [mean, se] = mc_logdet_wishart(n_t, 1.0 - eps2, mc, seed);

  const double frac = static_cast<double>(L - n_t) / L;
  GmiEstimate out;
  out.variant = "asymptotic";
  out.snr = snr;
  out.L = L;
  out.n_t = n_t;
  out.n_r = n_t;
  out.T = 0;
  out.theta = -1.0 / (n_t * (1.0 + snr * eps2));
  out.value = frac * (n_t * std::log(snr) -
                      n_t * std::log(n_t * n_t * (1.0 + snr * eps2)) + mean -
                      1.0);
  out.se = frac * se;
  return out;
}

GmiEstimate gmi_lb_digamma(const PsdModel& model, int L, int n_t, double snr) {
  check_profile_dims(L, n_t, n_t);
  if (!(snr > 0.0))
    throw std::invalid_argument("gmi_lb_digamma: snr must be > 0");
  const double eps2 = eps2_worst_case(model, L, n_t, snr);
  const double frac = static_cast<double>(L - n_t) / L;
  GmiEstimate out;
  out.variant = "digamma";
  out.snr = snr;
  out.L = L;
  out.n_t = n_t;
  out.n_r = n_t;
  out.T = 0;
  out.theta = -1.0 / (n_t * (1.0 + snr * eps2));
  out.value = frac * (n_t * std::log(snr) -
                      n_t * std::log(n_t * n_t * (1.0 + snr * eps2)) +
                      digamma_closed_form(n_t, eps2));
  out.se = 0.0;
  return out;
}

double digamma_int(int n) {
  if (n < 1) throw std::invalid_argument("digamma_int: argument must be >= 1");
  double h = 0.0;
  for (int k = 1; k < n; ++k) h += 1.0 / k;
  return h - kEulerGamma;
}

double digamma_closed_form(int n_t, double eps2) {
  if (n_t < 1) throw std::invalid_argument("digamma_closed_form: n_t must be >= 1");
  if (!(eps2 >= 0.0) || !(eps2 < 1.0))
    throw std::invalid_argument("digamma_closed_form: eps2 must lie in [0, 1)");
  double psi_sum = 0.0;
  for (int j = 1; j <= n_t; ++j) psi_sum += digamma_int(j);
  return n_t * std::log1p(-eps2) + psi_sum - 1.0;
}

GmiEstimate gmi_lb_general_input(const PsdModel& model, int L, int n_t,
                                 double snr, double log_k, double e_norm_sq,
                                 std::size_t mc, std::uint64_t seed) {
  check_profile_dims(L, n_t, n_t);
  if (!(snr > 0.0))
    throw std::invalid_argument("gmi_lb_general_input: snr must be > 0");
  if (!(log_k >= 0.0))
    throw std::invalid_argument("gmi_lb_general_input: log_k must be >= 0");
  if (!(e_norm_sq > 0.0) || e_norm_sq > n_t + 1e-12)
    throw std::invalid_argument(
        "gmi_lb_general_input: e_norm_sq must lie in (0, n_t]");
  if (mc < 2) throw std::invalid_argument("gmi: need at least 2 Monte Carlo samples");

  const double eps2 = eps2_worst_case(model, L, n_t, snr);
  const auto [mean, se] = mc_logdet_wishart(n_t, 1.0 - eps2, mc, seed);

  const double frac = static_cast<double>(L - n_t) / L;
  GmiEstimate out;
  out.variant = "general_input";
  out.snr = snr;
  out.L = L;
  out.n_t = n_t;
  out.n_r = n_t;
  out.T = 0;
  out.theta = -1.0 / (n_t * (1.0 + snr * eps2 * e_norm_sq));
  out.value =
      frac * (n_t * std::log(snr) -
              n_t * std::log(n_t * n_t * (1.0 + snr * eps2 * e_norm_sq)) +
              mean - 1.0 - log_k);
  out.se = frac * se;
  return out;
}

PreLogFit prelog_fit(const std::vector<double>& snr_db,
                     const std::vector<double>& gmi_nats) {
  if (snr_db.size() != gmi_nats.size())
    throw std::invalid_argument("prelog_fit: mismatched grid sizes");
  if (snr_db.size() < 4)
    throw std::invalid_argument("prelog_fit: need at least 4 grid points");
  const auto [mn, mx] = std::minmax_element(snr_db.begin(), snr_db.end());
  if (*mx - *mn < 20.0 - 1e-9)
    throw std::invalid_argument("prelog_fit: grid must span at least 20 dB");
  for (double v : gmi_nats)
    if (!std::isfinite(v))
      throw std::invalid_argument("prelog_fit: non-finite GMI value");

  const double ln10_over_10 = std::log(10.0) / 10.0;
  const std::size_t n = snr_db.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = snr_db[i] * ln10_over_10;
    sx += x;
    sy += gmi_nats[i];
    sxx += x * x;
    sxy += x * gmi_nats[i];
  }
  const double denom = n * sxx - sx * sx;
  PreLogFit fit;
  fit.points = n;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = snr_db[i] * ln10_over_10;
    const double r = gmi_nats[i] - (fit.intercept + fit.slope * x);
    rss += r * r;
  }
  fit.residual_rms = std::sqrt(rss / n);
  return fit;
}

}  // namespace pilotnn
