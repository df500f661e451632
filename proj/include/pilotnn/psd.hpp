#pragma once

#include <vector>

namespace pilotnn {

// Doppler power spectral density shapes. Both are strictly bandlimited to
// |lambda| <= lambda_d < 1/2, even, and normalized to unit area (unit fading
// variance).
enum class PsdShape { rectangular, raised_cosine };

// Bandlimited unit-variance Doppler spectrum f_H on the normalized frequency
// interval [-1/2, 1/2].
//
//   rectangular:   f(l) = 1/(2 lambda_d)                        for |l| <= lambda_d
//   raised_cosine: f(l) = (1 + cos(pi l / lambda_d))/(2 lambda_d) for |l| <= lambda_d
//
// quad_points sets the default node budget for quadratures against this model.
class PsdModel {
 public:
  PsdModel(PsdShape shape, double lambda_d, int quad_points = 2048);

  double operator()(double lambda) const;

  PsdShape shape() const { return shape_; }
  double lambda_d() const { return lambda_d_; }
  int quad_points() const { return quad_points_; }

  // Autocovariance R(m) at integer lag, from the closed-form Fourier
  // transform of the shape (both shapes admit one; even spectrum, so R is
  // real). The quadrature route lives in fading.hpp as autocovariance().
  double autocovariance_closed(long long lag) const;

  // Locations in [-1/2, 1/2] where f_H has a band edge; quadrature split points.
  std::vector<double> band_breakpoints() const;

 private:
  PsdShape shape_;
  double lambda_d_;
  int quad_points_;
};

double eval_psd(const PsdModel& model, double lambda);

}  // namespace pilotnn
