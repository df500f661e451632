#include "pilotnn/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "pilotnn/quadrature.hpp"

namespace pilotnn {

namespace {

// Reduce x into [-1/2, 1/2) (period-1 continuation argument).
double wrap_unit(double x) { return x - std::floor(x + 0.5); }

// f_{L,0}(lambda): real, non-negative.
double f_l0(const PsdModel& model, int L, double lambda) {
  double acc = 0.0;
  for (int nu = 0; nu < L; ++nu)
    acc += model(wrap_unit((lambda - nu) / L));
  return acc / L;
}

void check_undersampling_args(const PsdModel&, int L, double lambda) {
  if (L < 1) throw std::invalid_argument("undersampled spectrum: L must be >= 1");
  if (std::abs(lambda) > 0.5 + 1e-12)
    throw std::invalid_argument("undersampled spectrum: lambda outside [-1/2, 1/2]");
}

void check_slot_offsets(int L, int n_t, int ell, int t) {
  if (n_t < 1) throw std::invalid_argument("error variance: n_t must be >= 1");
  if (L <= n_t) throw std::invalid_argument("error variance: need L > n_t");
  if (t < 1 || t > n_t)
    throw std::invalid_argument("error variance: t must lie in [1, n_t]");
  if (ell < n_t || ell > L - 1)
    throw std::invalid_argument("error variance: ell must lie in [n_t, L-1]");
}

}  // namespace

std::complex<double> undersampled_spectrum(const PsdModel& model, int L,
                                           int ell, double lambda) {
  check_undersampling_args(model, L, lambda);
  std::complex<double> acc{0.0, 0.0};
  for (int nu = 0; nu < L; ++nu) {
    const double x = (lambda - nu) / L;
    const double f = model(wrap_unit(x));
    if (f == 0.0) continue;
    const double phase = 2.0 * M_PI * ell * x;
    acc += f * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc / static_cast<double>(L);
}

std::vector<double> alias_breakpoints(const PsdModel& model, int L) {
  // Band edges of the replicas: lambda = m +/- L*lambda_d for integer m,
  // clipped to [-1/2, 1/2].
  std::vector<double> pts;
  const double e = L * model.lambda_d();
  const int m_max = static_cast<int>(std::ceil(e + 1.0));
  for (int m = -m_max; m <= m_max; ++m) {
    for (double s : {-e, e}) {
      const double x = m + s;
      if (x > -0.5 && x < 0.5) pts.push_back(x);
    }
  }
  return pts;
}

double error_variance_no_alias_rho(const PsdModel& model, int L, double rho) {
  if (L < 1) throw std::invalid_argument("error variance: L must be >= 1");
  if (!(rho >= 0.0)) throw std::invalid_argument("error variance: snr must be >= 0");
  if (L * model.lambda_d() > 0.5 + 1e-12)
    throw std::invalid_argument(
        "error variance: L exceeds 1/(2 lambda_d); sampling is aliased");
  const auto integrand = [&](double l) {
    const double f = model(l);
    return f * static_cast<double>(L) / (rho * f + L);
  };
  return integrate(integrand, -0.5, 0.5, model.band_breakpoints(),
                   model.quad_points());
}

double error_variance_no_alias(const PsdModel& model, int L, int n_t,
                               double snr) {
  if (n_t < 1) throw std::invalid_argument("error variance: n_t must be >= 1");
  return error_variance_no_alias_rho(model, L, snr / n_t);
}

double error_variance_general_rho(const PsdModel& model, int L, int ell_prime,
                                  double rho) {
  if (L < 1) throw std::invalid_argument("error variance: L must be >= 1");
  if (!(rho >= 0.0)) throw std::invalid_argument("error variance: snr must be >= 0");
  // eps^2 = 1 - integral rho |f_lp|^2/(rho f_0 + 1) written without the
  // cancellation against 1 (integral of f_0 is exactly the unit variance):
  //   integral [f_0 + rho (f_0^2 - |f_lp|^2)] / (rho f_0 + 1).
  const auto integrand = [&](double l) {
    const double f0 = f_l0(model, L, l);
    if (f0 <= 0.0) return 0.0;
    const double mag2 = std::norm(undersampled_spectrum(model, L, ell_prime, l));
    return (f0 + rho * (f0 * f0 - mag2)) / (rho * f0 + 1.0);
  };
  return integrate(integrand, -0.5, 0.5, alias_breakpoints(model, L),
                   model.quad_points());
}

double error_variance_general(const PsdModel& model, int L, int n_t, int ell,
                              int t, double snr) {
  check_slot_offsets(L, n_t, ell, t);
  if (!(snr >= 0.0)) throw std::invalid_argument("error variance: snr must be >= 0");
  return error_variance_general_rho(model, L, ell - t + 1, snr / n_t);
}

double aliased_error_lower_bound(const PsdModel& model, int L, int ell, int t) {
  if (L < 2) throw std::invalid_argument("aliased bound: L must be >= 2");
  if (t < 1 || ell < 0 || ell > L - 1)
    throw std::invalid_argument("aliased bound: slot offsets out of range");
  const int lp = ell - t + 1;
  const double cosfac = 1.0 - std::cos(2.0 * M_PI * lp / L);
  if (((lp % L) + L) % L == 0) return 0.0;

  const auto integrand = [&](double l) {
    const double fa = model(wrap_unit(l / L));
    if (fa == 0.0) return 0.0;
    const double fb = model(wrap_unit((l - 1.0) / L));
    if (fb == 0.0) return 0.0;
    const double f0 = f_l0(model, L, l);
    return fa * fb / f0;  // f0 >= fa/L > 0 on the overlap
  };
  const double integral = integrate(integrand, -0.5, 0.5,
                                    alias_breakpoints(model, L),
                                    model.quad_points());
  return 2.0 / (static_cast<double>(L) * L) * cosfac * integral;
}

}  // namespace pilotnn
