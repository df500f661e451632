#include "pilotnn/scenario.hpp"

#include <cmath>
#include <stdexcept>

namespace pilotnn {

double lambda_from_env(const Environment& env) {
  if (!(env.delay_spread_s > 0.0))
    throw std::invalid_argument("lambda_from_env: delay spread must be > 0");
  if (!(env.velocity_mps > 0.0))
    throw std::invalid_argument("lambda_from_env: velocity must be > 0");
  if (!(env.carrier_hz > 0.0))
    throw std::invalid_argument("lambda_from_env: carrier must be > 0");
  constexpr double c = 3e8;
  const double f_m = env.velocity_mps / c * env.carrier_hz;
  const double w_c = 1.0 / (5.0 * env.delay_spread_s);
  return f_m / w_c;
}

long long l_star_from_lambda(double lambda_d) {
  if (!(lambda_d > 0.0))
    throw std::invalid_argument("l_star_from_lambda: lambda_D must be > 0");
  return static_cast<long long>(std::floor(1.0 / (2.0 * lambda_d)));
}

}  // namespace pilotnn
