#include "pilotnn/psd.hpp"

#include <cmath>
#include <stdexcept>

namespace pilotnn {

namespace {

// sin(pi x)/(pi x) with the removable singularity handled.
double sinc(double x) {
  if (std::abs(x) < 1e-9) {
    const double z = M_PI * x;
    return 1.0 - z * z / 6.0;
  }
  return std::sin(M_PI * x) / (M_PI * x);
}

}  // namespace

PsdModel::PsdModel(PsdShape shape, double lambda_d, int quad_points)
    : shape_(shape), lambda_d_(lambda_d), quad_points_(quad_points) {
  if (!(lambda_d > 0.0) || !(lambda_d < 0.5))
    throw std::invalid_argument("PsdModel: lambda_d must lie in (0, 1/2)");
  if (quad_points < 64)
    throw std::invalid_argument("PsdModel: quad_points must be >= 64");
}

double PsdModel::operator()(double lambda) const {
  if (std::abs(lambda) > lambda_d_) return 0.0;
  switch (shape_) {
    case PsdShape::rectangular:
      return 1.0 / (2.0 * lambda_d_);
    case PsdShape::raised_cosine:
      return (1.0 + std::cos(M_PI * lambda / lambda_d_)) / (2.0 * lambda_d_);
  }
  return 0.0;
}

double PsdModel::autocovariance_closed(long long lag) const {
  const double x = 2.0 * lambda_d_ * static_cast<double>(lag);
  switch (shape_) {
    case PsdShape::rectangular:
      return sinc(x);
    case PsdShape::raised_cosine:
      return sinc(x) + 0.5 * (sinc(x - 1.0) + sinc(x + 1.0));
  }
  return 0.0;
}

std::vector<double> PsdModel::band_breakpoints() const {
  return {-lambda_d_, lambda_d_};
}

double eval_psd(const PsdModel& model, double lambda) { return model(lambda); }

}  // namespace pilotnn
