#pragma once

namespace pilotnn {

// Physical-scenario inputs for sizing the normalized Doppler bandwidth.
struct Environment {
  double delay_spread_s = 0.0;  // RMS delay spread sigma_tau
  double velocity_mps = 0.0;    // terminal speed
  double carrier_hz = 0.0;      // carrier frequency f_c
};

// Maximum Doppler shift normalized to the coherence bandwidth:
//   f_m = (v/c) f_c,  W_c = 1/(5 sigma_tau),  lambda_D = f_m / W_c
// with c = 3e8 m/s. This is the bandlimit the fading spectrum is scaled to.
double lambda_from_env(const Environment& env);

// Largest pilot spacing with unaliased fading samples: floor(1/(2 lambda_D)).
long long l_star_from_lambda(double lambda_d);

inline double kmh_to_mps(double kmh) { return kmh / 3.6; }

}  // namespace pilotnn
