// Checks of the spectral layer: point values and normalization of the two
// spectrum shapes, closed-form autocovariances, the undersampled spectrum
// against its defining Fourier-coefficient identity, and the interpolation
// error variances against independently derived constants.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "pilotnn/psd.hpp"
#include "pilotnn/quadrature.hpp"
#include "pilotnn/spectrum.hpp"

using namespace pilotnn;

namespace {

const PsdModel rect4(PsdShape::rectangular, 0.125);
const PsdModel rect5 = rect4;  // same shape; L varies per call

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("psd point values and unit variance") {
  const PsdModel rect(PsdShape::rectangular, 0.25);
  CHECK(rect(0.0) == 2.0);
  CHECK(rect(0.249) == 2.0);
  CHECK(rect(0.25) == 2.0);  // band edge is inclusive
  CHECK(rect(0.2500001) == 0.0);
  CHECK(rect(-0.2) == 2.0);

  const PsdModel rc(PsdShape::raised_cosine, 0.125);
  CHECK(rc(0.0) == doctest::Approx(8.0).epsilon(1e-12));
  // 4 (1 + cos(0.8 pi)), a hand-checked interior point
  CHECK(rc(0.1) == doctest::Approx(0.7639320225002106).epsilon(1e-12));
  CHECK(rc(0.125) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rc(0.2) == 0.0);

  // Both shapes integrate to one (unit-variance fading).
  for (const PsdModel* m : {&rect, &rc}) {
    const double total = integrate([&](double l) { return (*m)(l); }, -0.5,
                                   0.5, m->band_breakpoints(), 2048);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
  }

  CHECK_THROWS_AS(PsdModel(PsdShape::rectangular, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(PsdModel(PsdShape::rectangular, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(PsdModel(PsdShape::rectangular, 0.1, 32),
                  std::invalid_argument);
}

TEST_CASE("closed-form autocovariance constants") {
  const PsdModel rect(PsdShape::rectangular, 0.25);
  // sinc(1/2) = 2/pi, sinc(1) = 0, sinc(3/2) = -2/(3 pi)
  CHECK(rect.autocovariance_closed(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(rect.autocovariance_closed(1) ==
        doctest::Approx(0.6366197723675814).epsilon(1e-12));
  CHECK(std::abs(rect.autocovariance_closed(2)) < 1e-15);
  CHECK(rect.autocovariance_closed(3) ==
        doctest::Approx(-0.2122065907891938).epsilon(1e-12));

  const PsdModel rect8(PsdShape::rectangular, 0.125);
  CHECK(rect8.autocovariance_closed(1) ==
        doctest::Approx(0.9003163161571061).epsilon(1e-12));
  CHECK(std::abs(rect8.autocovariance_closed(4)) < 1e-15);

  const PsdModel rc(PsdShape::raised_cosine, 0.125);
  CHECK(rc.autocovariance_closed(0) == doctest::Approx(1.0).epsilon(1e-14));
  // at lag 4 the plain sinc terms vanish and the half-shifted one is 1/2
  CHECK(rc.autocovariance_closed(4) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::abs(rc.autocovariance_closed(8)) < 1e-14);
}

TEST_CASE("undersampled spectrum reproduces the subsampled autocovariance") {
  // Defining property: the m-th Fourier coefficient of f_{L,ell} is R(m L +
  // ell). Integrating the implementation against the closed-form R checks the
  // replica sum, its phase convention, and the 1/L normalization at once.
  for (PsdShape shape : {PsdShape::rectangular, PsdShape::raised_cosine}) {
    const PsdModel model(shape, 0.2);
    const int L = 3;
    for (int ell = 0; ell < L; ++ell) {
      for (int m = -2; m <= 2; ++m) {
        const std::complex<double> coeff = integrate(
            [&](double l) {
              const std::complex<double> ph(std::cos(2 * M_PI * m * l),
                                            std::sin(2 * M_PI * m * l));
              return undersampled_spectrum(model, L, ell, l) * ph;
            },
            -0.5, 0.5, alias_breakpoints(model, L), 4096);
        const double want =
            model.autocovariance_closed(static_cast<long long>(m) * L + ell);
        CHECK(std::abs(coeff.real() - want) < 1e-9);
        CHECK(std::abs(coeff.imag()) < 1e-9);
      }
    }
  }
}

TEST_CASE("undersampled spectrum spot values") {
  // Aliased point, cross-checked against a hand evaluation of the replica
  // sum: only the nu = 0 replica of the rectangular band covers 0.1/3.
  const PsdModel r02(PsdShape::rectangular, 0.2);
  const auto v = undersampled_spectrum(r02, 3, 1, 0.1);
  CHECK(v.real() == doctest::Approx(0.8151230006115047).epsilon(1e-12));
  CHECK(v.imag() == doctest::Approx(0.17325974234813274).epsilon(1e-12));

  // At L = 4 and lambda_d = 1/8 the replicas tile without overlap, so the
  // modulus equals f_{4,0} and the offset only rotates the phase.
  const auto u = undersampled_spectrum(rect4, 4, 1, 0.2);
  CHECK(u.real() == doctest::Approx(0.9510565162951535).epsilon(1e-12));
  CHECK(u.imag() == doctest::Approx(0.3090169943749474).epsilon(1e-12));
  for (int ell = 0; ell < 4; ++ell)
    CHECK(std::abs(undersampled_spectrum(rect4, 4, ell, 0.2)) ==
          doctest::Approx(1.0).epsilon(1e-12));

  // ell = 0 keeps every term real and nonnegative, and dominates the others.
  const PsdModel r5(PsdShape::rectangular, 0.125);
  for (int i = 0; i <= 20; ++i) {
    const double lam = -0.5 + i / 20.0;
    const auto f0 = undersampled_spectrum(r5, 5, 0, lam);
    CHECK(f0.imag() == 0.0);
    CHECK(f0.real() >= 0.0);
    for (int ell = 1; ell < 5; ++ell)
      CHECK(std::abs(undersampled_spectrum(r5, 5, ell, lam)) <=
            f0.real() + 1e-12);
  }

  CHECK_THROWS_AS(undersampled_spectrum(r02, 0, 0, 0.1),
                  std::invalid_argument);
  CHECK_THROWS_AS(undersampled_spectrum(r02, 3, 1, 0.7),
                  std::invalid_argument);
}

TEST_CASE("error variance closed forms in the unaliased regime") {
  // Constant spectrum of height 1/(2 lambda_d) = 4 over a quarter of the
  // band: eps^2 = L n_t / (4 snr + L n_t) at L = 4.
  CHECK(rel_err(error_variance_no_alias(rect4, 4, 1, 100.0), 1.0 / 101.0) <
        1e-12);
  CHECK(rel_err(error_variance_no_alias(rect4, 4, 2, 100.0), 1.0 / 51.0) <
        1e-12);
  CHECK(error_variance_no_alias(rect4, 4, 1, 0.0) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // n_t enters only through the per-pilot snr.
  CHECK(error_variance_no_alias(rect4, 4, 2, 100.0) ==
        error_variance_no_alias_rho(rect4, 4, 50.0));

  // The general integral agrees with the unaliased closed form when the
  // sampling theorem holds, for every valid slot offset pair.
  const PsdModel r02(PsdShape::rectangular, 0.2);
  CHECK(rel_err(error_variance_general(r02, 2, 1, 1, 1, 37.0),
                error_variance_no_alias(r02, 2, 1, 37.0)) < 1e-9);
  for (int ell = 1; ell <= 3; ++ell)
    CHECK(rel_err(error_variance_general(rect4, 4, 1, ell, 1, 100.0),
                  1.0 / 101.0) < 1e-9);

  // Decreasing in snr.
  CHECK(error_variance_no_alias(rect4, 4, 1, 10.0) >
        error_variance_no_alias(rect4, 4, 1, 100.0));
  CHECK(error_variance_no_alias(rect4, 4, 1, 100.0) >
        error_variance_no_alias(rect4, 4, 1, 1000.0));

  CHECK_THROWS_AS(error_variance_no_alias(rect4, 5, 1, 100.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(error_variance_no_alias(rect4, 4, 1, -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(error_variance_general(rect4, 4, 1, 0, 1, 100.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(error_variance_general(rect4, 4, 1, 1, 2, 100.0),
                  std::invalid_argument);
}

TEST_CASE("snr times error variance stays inside the sandwich") {
  for (int nt : {1, 2}) {
    for (int i = 0; i < 40; ++i) {
      const double snr = std::pow(10.0, (-10.0 + 90.0 * i / 39.0) / 10.0);
      const double e = error_variance_no_alias(rect4, 4, nt, snr);
      CHECK(snr * e >= 0.0);
      CHECK(snr * e <= 4.0 * nt);
    }
  }
  const PsdModel rc(PsdShape::raised_cosine, 0.125);
  for (int i = 0; i < 40; ++i) {
    const double snr = std::pow(10.0, (-10.0 + 90.0 * i / 39.0) / 10.0);
    const double e = error_variance_no_alias(rc, 4, 1, snr);
    CHECK(snr * e >= 0.0);
    CHECK(snr * e <= 4.0);
  }
}

TEST_CASE("aliased sampling keeps the error variance away from zero") {
  // L = 5 with lambda_d = 1/8 undersamples the fading. Reference values for
  // the high-snr error variance and its snr -> infinity lower bound come from
  // an independent adaptive-quadrature evaluation of the same integrals.
  const double eps_ref[4] = {0.138196601216, 0.361803398952, 0.361803398952,
                             0.138196601216};
  const double lb_ref[4] = {0.0690983005625, 0.180901699437, 0.180901699437,
                            0.0690983005625};
  for (int lp = 1; lp <= 4; ++lp) {
    const double e = error_variance_general(rect5, 5, 1, lp, 1, 1e10);
    const double lb = aliased_error_lower_bound(rect5, 5, lp, 1);
    CHECK(rel_err(e, eps_ref[lp - 1]) < 1e-7);
    CHECK(rel_err(lb, lb_ref[lp - 1]) < 1e-7);
    CHECK(lb > 0.0);
    CHECK(e >= lb);
  }

  // Without spectral overlap the bound is empty: critical sampling at L = 4
  // and a strictly unaliased case both give zero.
  CHECK(aliased_error_lower_bound(rect4, 4, 1, 1) <= 1e-12);
  const PsdModel r02(PsdShape::rectangular, 0.2);
  CHECK(aliased_error_lower_bound(r02, 2, 1, 1) <= 1e-12);

  CHECK_THROWS_AS(aliased_error_lower_bound(rect5, 1, 0, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(aliased_error_lower_bound(rect5, 5, 5, 1),
                  std::invalid_argument);
}

TEST_CASE("alias breakpoints land on the replica band edges") {
  const PsdModel r02(PsdShape::rectangular, 0.2);
  const auto pts = alias_breakpoints(r02, 3);  // edges at +/-(1 - 0.6)
  REQUIRE(pts.size() >= 2);
  bool has_neg = false, has_pos = false;
  for (double p : pts) {
    CHECK(p > -0.5);
    CHECK(p < 0.5);
    if (std::abs(p + 0.4) < 1e-12) has_neg = true;
    if (std::abs(p - 0.4) < 1e-12) has_pos = true;
  }
  CHECK(has_neg);
  CHECK(has_pos);
}
