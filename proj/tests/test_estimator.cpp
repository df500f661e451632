// Checks of the pilot schedule arithmetic, the LMMSE interpolator weights
// against independently derived error variances, and the empirical error
// statistics of estimated paths against the interpolator's own predictions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "pilotnn/codec.hpp"
#include "pilotnn/estimator.hpp"
#include "pilotnn/fading.hpp"
#include "pilotnn/rng.hpp"

using namespace pilotnn;

TEST_CASE("schedule arithmetic") {
  // L = 7, 2 pilot slots, window T = 2, n = 10 data symbols:
  // 2 data periods, plus 2 * (T-1) = 2 guard periods and 1 trailing pilot
  // block. Pilots: (periods + 1) * n_pilot = 5 * 2 = 10; guards: 2 periods
  // of 5 silent data slots each = 10... n_g is 2 (L - n_pilot)(T - 1) = 10.
  const PilotSchedule s = build_schedule(7, 2, 2, 10);
  CHECK(s.data_blocks == 2u);
  CHECK(s.periods == 4u);
  CHECK(s.n_p == 10u);
  CHECK(s.n_g == 10u);
  CHECK(s.n_total == 30u);

  const auto data = s.data_indices();
  const auto pilots = s.pilot_indices();
  REQUIRE(data.size() == 10u);
  REQUIRE(pilots.size() == 10u);
  // first data period is period T-1 = 1, so slots 7+2 .. 7+6
  CHECK(data.front() == 9u);
  CHECK(data.back() == 20u);
  // the trailing pilot block lives past the last guard period
  CHECK(pilots[8] == 28u);
  CHECK(pilots[9] == 29u);
  for (std::size_t k : data) {
    CHECK(s.is_data_slot(k));
    CHECK(!s.is_pilot_slot(k));
  }
  for (std::size_t k : pilots) {
    CHECK(s.is_pilot_slot(k));
    CHECK(!s.is_data_slot(k));
  }
  CHECK(!s.is_data_slot(2));   // guard-period data slot
  CHECK(!s.is_data_slot(30));  // past the frame

  // T = 1 has no guard periods: L = 4, n_t = 1, n = 9 -> 3 data periods and
  // one trailing pilot slot, 4 * 3 + 1 = 13 slots.
  const PilotSchedule s1 = build_schedule(4, 1, 1, 9);
  CHECK(s1.periods == 3u);
  CHECK(s1.n_g == 0u);
  CHECK(s1.n_p == 4u);
  CHECK(s1.n_total == 13u);

  CHECK_THROWS_AS(build_schedule(2, 2, 1, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(4, 0, 1, 9), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(4, 1, 0, 9), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(4, 1, 1, 10), std::invalid_argument);
  CHECK_THROWS_AS(build_schedule(4, 1, 1, 0), std::invalid_argument);
}

TEST_CASE("interpolator weights reproduce reference error variances") {
  // Finite-window predictions for L = 4, one pilot slot, pilot snr 100,
  // quarter-band rectangular spectrum. References were produced by solving
  // the same normal equations with an independent linear-algebra stack.
  const PsdModel model(PsdShape::rectangular, 0.125);
  const double ref[3][3] = {
      {0.059804201666, 0.108284412389, 0.059804201666},   // T = 2
      {0.022436664163, 0.034948011827, 0.022436664163},   // T = 8
      {0.016170355255, 0.022436664163, 0.016170355255},   // T = 16
  };
  const int windows[3] = {2, 8, 16};
  for (int i = 0; i < 3; ++i) {
    const PilotSchedule s = build_schedule(4, 1, windows[i], 3);
    const InterpolatorWeights w = solve_weights_pilot_snr(s, model, 100.0);
    CHECK(w.residual() < 1e-10);
    for (int ell = 1; ell <= 3; ++ell) {
      CHECK(w.predicted_mse(ell, 1) ==
            doctest::Approx(ref[i][ell - 1]).epsilon(1e-9));
      CHECK(w.weights(ell, 1).size() == 2u * windows[i]);
    }
  }

  // Longer windows can only help, and the infinite-window value 1/101 is a
  // floor for every finite window.
  double prev = 1.0;
  for (int T : {2, 8, 16, 64}) {
    const PilotSchedule s = build_schedule(4, 1, T, 3);
    const InterpolatorWeights w = solve_weights_pilot_snr(s, model, 100.0);
    const double mse = w.predicted_mse(1, 1);
    CHECK(mse < prev);
    CHECK(mse > 1.0 / 101.0);
    prev = mse;
  }

  // With no pilot power the estimate is zero and the error is the fading
  // variance itself.
  const PilotSchedule s0 = build_schedule(4, 1, 2, 3);
  const InterpolatorWeights w0 = solve_weights_pilot_snr(s0, model, 0.0);
  for (int ell = 1; ell <= 3; ++ell)
    CHECK(w0.predicted_mse(ell, 1) == doctest::Approx(1.0).epsilon(1e-12));

  // Point-to-point convention divides the snr across pilot antennas.
  const PilotSchedule s2 = build_schedule(4, 2, 2, 4);
  const InterpolatorWeights wa = solve_weights(s2, model, 100.0);
  const InterpolatorWeights wb = solve_weights_pilot_snr(s2, model, 50.0);
  CHECK(wa.predicted_mse(2, 1) == wb.predicted_mse(2, 1));
  CHECK(wa.predicted_mse(3, 2) == wb.predicted_mse(3, 2));

  CHECK_THROWS_AS(w0.predicted_mse(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(w0.predicted_mse(4, 1), std::invalid_argument);
  CHECK_THROWS_AS(w0.predicted_mse(1, 2), std::invalid_argument);
}

TEST_CASE("empirical estimation error matches the predicted variances") {
  // Full pipeline over synthesized fading: build frames, push them through
  // the channel, interpolate from the pilot slots, and compare the pooled
  // squared error per (ell, t) with the solver's prediction.
  const PsdModel model(PsdShape::rectangular, 0.125);
  const int L = 4, n_t = 1, T = 4, n_r = 2;
  const std::size_t n = 33;
  const double snr = 100.0;
  const PilotSchedule s = build_schedule(L, n_t, T, n);
  const InterpolatorWeights w = solve_weights(s, model, snr);
  const Codebook book =
      generate_codebook(2, n, n_t, CodebookLaw::gaussian, 77);

  ErrorStatsAccumulator acc(L, n_t);
  const int frames = 300;
  for (int f = 0; f < frames; ++f) {
    const std::uint64_t fs = derive_seed(9000, static_cast<std::uint64_t>(f));
    const FadingPath path = synthesize(model, n_r, n_t, s.n_total, fs);
    const CVec x = transmit_frame(s, book, f % 2);
    const CVec y = channel_apply(path, x, snr, fs ^ 0x77);
    const CVec est = estimate_path(s, w, y, n_r);
    acc.add_frame(s, est, path, n_r);
  }

  for (int ell = n_t; ell <= L - 1; ++ell) {
    const double pred = w.predicted_mse(ell, 1);
    const double emp = acc.mean_sq_error(ell, 1);
    const double se = acc.se_sq_error(ell, 1);
    CHECK(acc.count(ell, 1) ==
          static_cast<std::size_t>(frames) * s.data_blocks * n_r);
    CHECK(std::abs(emp - pred) <= 4.0 * se);
    // orthogonality: the LMMSE error is uncorrelated with the estimate
    CHECK(std::abs(acc.corr_est_err(ell, 1)) < 0.06);
    // the error statistics are stationary across period parity
    const auto [m0, m1] = acc.mean_sq_error_by_parity(ell, 1);
    const auto [s0, s1] = acc.se_sq_error_by_parity(ell, 1);
    CHECK(std::abs(m0 - m1) <= 5.0 * std::sqrt(s0 * s0 + s1 * s1));
  }
}

TEST_CASE("merged accumulators equal pooled accumulation") {
  const PsdModel model(PsdShape::rectangular, 0.125);
  const PilotSchedule s = build_schedule(4, 1, 2, 6);
  const InterpolatorWeights w = solve_weights(s, model, 50.0);
  const Codebook book =
      generate_codebook(1, 6, 1, CodebookLaw::gaussian, 3);

  ErrorStatsAccumulator pooled(4, 1), first(4, 1), second(4, 1);
  for (int f = 0; f < 6; ++f) {
    const std::uint64_t fs = derive_seed(31, static_cast<std::uint64_t>(f));
    const FadingPath path = synthesize(model, 1, 1, s.n_total, fs);
    const CVec x = transmit_frame(s, book, 0);
    const CVec y = channel_apply(path, x, 50.0, fs ^ 0x9);
    const CVec est = estimate_path(s, w, y, 1);
    pooled.add_frame(s, est, path, 1);
    (f < 3 ? first : second).add_frame(s, est, path, 1);
  }
  first.merge(second);
  for (int ell = 1; ell <= 3; ++ell) {
    CHECK(first.count(ell, 1) == pooled.count(ell, 1));
    CHECK(first.mean_sq_error(ell, 1) ==
          doctest::Approx(pooled.mean_sq_error(ell, 1)).epsilon(1e-14));
    CHECK(first.se_sq_error(ell, 1) ==
          doctest::Approx(pooled.se_sq_error(ell, 1)).epsilon(1e-14));
  }
}

TEST_CASE("estimate_path validates its inputs") {
  const PsdModel model(PsdShape::rectangular, 0.125);
  const PilotSchedule s = build_schedule(4, 1, 2, 3);
  const InterpolatorWeights w = solve_weights(s, model, 10.0);
  CVec y(s.n_total * 2, {0.0, 0.0});
  CHECK_NOTHROW(estimate_path(s, w, y, 2));
  CHECK_THROWS_AS(estimate_path(s, w, y, 3), std::invalid_argument);
  const PilotSchedule other = build_schedule(5, 1, 2, 4);
  CHECK_THROWS_AS(estimate_path(other, w, y, 2), std::invalid_argument);
}
