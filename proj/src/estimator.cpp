#include "pilotnn/estimator.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace pilotnn {

std::vector<std::size_t> PilotSchedule::pilot_indices() const {
  std::vector<std::size_t> idx;
  idx.reserve(n_p);
  for (std::size_t k = 0; k < n_total; ++k)
    if (is_pilot_slot(k)) idx.push_back(k);
  return idx;
}

std::vector<std::size_t> PilotSchedule::data_indices() const {
  std::vector<std::size_t> idx;
  idx.reserve(n);
  for (std::size_t k = 0; k < n_total; ++k)
    if (is_data_slot(k)) idx.push_back(k);
  return idx;
}

PilotSchedule build_schedule(int L, int n_t, int T, std::size_t n) {
  if (n_t < 1) throw std::invalid_argument("build_schedule: n_t must be >= 1");
  if (L <= n_t) throw std::invalid_argument("build_schedule: need L > n_t");
  if (T < 1) throw std::invalid_argument("build_schedule: T must be >= 1");
  const std::size_t block = static_cast<std::size_t>(L - n_t);
  if (n == 0 || n % block != 0)
    throw std::invalid_argument(
        "build_schedule: n must be a positive multiple of L - n_t");

  PilotSchedule s;
  s.L = L;
  s.n_pilot = n_t;
  s.T = T;
  s.n = n;
  s.data_blocks = n / block;
  s.periods = s.data_blocks + 2 * static_cast<std::size_t>(T - 1);
  s.n_p = (s.data_blocks + 1 + 2 * static_cast<std::size_t>(T - 1)) *
          static_cast<std::size_t>(n_t);
  s.n_g = 2 * block * static_cast<std::size_t>(T - 1);
  s.n_total = s.n_p + s.n + s.n_g;
  return s;
}

InterpolatorWeights::InterpolatorWeights(int L, int n_pilot, int T,
                                         double pilot_snr)
    : L_(L), n_pilot_(n_pilot), T_(T), pilot_snr_(pilot_snr) {
  const std::size_t cells =
      static_cast<std::size_t>(L - n_pilot) * static_cast<std::size_t>(n_pilot);
  weights_.resize(cells);
  mse_.resize(cells, 1.0);
}

std::size_t InterpolatorWeights::slot(int ell, int t) const {
  if (ell < n_pilot_ || ell > L_ - 1 || t < 1 || t > n_pilot_)
    throw std::invalid_argument("InterpolatorWeights: slot offsets out of range");
  return static_cast<std::size_t>(ell - n_pilot_) * n_pilot_ + (t - 1);
}

const CVec& InterpolatorWeights::weights(int ell, int t) const {
  return weights_[slot(ell, t)];
}

double InterpolatorWeights::predicted_mse(int ell, int t) const {
  return mse_[slot(ell, t)];
}

InterpolatorWeights solve_weights_pilot_snr(const PilotSchedule& schedule,
                                            const PsdModel& model,
                                            double pilot_snr) {
  if (!(pilot_snr >= 0.0))
    throw std::invalid_argument("solve_weights: snr must be >= 0");
  const int L = schedule.L, P = schedule.n_pilot, T = schedule.T;
  const int W = 2 * T;
  InterpolatorWeights out(L, P, T, pilot_snr);

  // Pilot-observation covariance: depends only on lag differences, shared by
  // every (ell, t).
  Eigen::MatrixXcd A(W, W);
  for (int i = 0; i < W; ++i)
    for (int j = 0; j < W; ++j) {
      A(i, j) = pilot_snr *
                model.autocovariance_closed(static_cast<long long>(j - i) * L);
      if (i == j) A(i, j) += 1.0;
    }
  Eigen::LLT<Eigen::MatrixXcd> llt(A);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("solve_weights: pilot covariance not positive definite");

  const double root_snr = std::sqrt(pilot_snr);
  for (int ell = P; ell <= L - 1; ++ell) {
    for (int t = 1; t <= P; ++t) {
      const int lp = ell - t + 1;
      Eigen::VectorXcd c(W);
      for (int i = 0; i < W; ++i) {
        const long long tau = i - T;
        c(i) = root_snr * model.autocovariance_closed(tau * L + lp);
      }
      Eigen::VectorXcd w = llt.solve(c);
      const double cn = c.norm();
      const double res = (A * w - c).norm() / (cn > 0.0 ? cn : 1.0);
      out.residual_ = std::max(out.residual_, res);

      const std::size_t s = out.slot(ell, t);
      out.weights_[s].resize(W);
      for (int i = 0; i < W; ++i) out.weights_[s][i] = std::conj(w(i));
      const double mse = 1.0 - std::real(c.dot(w));  // c.dot(w) = c^H w
      out.mse_[s] = std::min(1.0, std::max(0.0, mse));
    }
  }
  return out;
}

InterpolatorWeights solve_weights(const PilotSchedule& schedule,
                                  const PsdModel& model, double snr) {
  return solve_weights_pilot_snr(schedule, model, snr / schedule.n_pilot);
}

CVec estimate_path(const PilotSchedule& schedule,
                   const InterpolatorWeights& weights, const CVec& y,
                   int n_r) {
  if (weights.L() != schedule.L || weights.n_pilot() != schedule.n_pilot ||
      weights.T() != schedule.T)
    throw std::invalid_argument("estimate_path: weights do not match schedule");
  if (y.size() != schedule.n_total * static_cast<std::size_t>(n_r))
    throw std::invalid_argument("estimate_path: received frame has wrong size");

  const int L = schedule.L, P = schedule.n_pilot, T = schedule.T;
  const auto data = schedule.data_indices();
  CVec est(data.size() * static_cast<std::size_t>(n_r) * P);

  for (std::size_t d = 0; d < data.size(); ++d) {
    const std::size_t k = data[d];
    const std::size_t j = k / L;
    const int ell = static_cast<int>(k % L);
    for (int t = 1; t <= P; ++t) {
      const CVec& a = weights.weights(ell, t);
      for (int r = 0; r < n_r; ++r) {
        std::complex<double> acc{0.0, 0.0};
        for (int i = 0; i < 2 * T; ++i) {
          const std::size_t kp = (j - (i - T)) * L + (t - 1);
          acc += a[i] * y[kp * n_r + r];
        }
        est[(d * n_r + r) * P + (t - 1)] = acc;
      }
    }
  }
  return est;
}

ErrorStatsAccumulator::ErrorStatsAccumulator(int L, int n_pilot)
    : L_(L), n_pilot_(n_pilot),
      cells_(static_cast<std::size_t>(L - n_pilot) * n_pilot) {}

const ErrorStatsAccumulator::Cell& ErrorStatsAccumulator::cell(int ell,
                                                               int t) const {
  if (ell < n_pilot_ || ell > L_ - 1 || t < 1 || t > n_pilot_)
    throw std::invalid_argument("ErrorStats: slot offsets out of range");
  return cells_[static_cast<std::size_t>(ell - n_pilot_) * n_pilot_ + (t - 1)];
}

ErrorStatsAccumulator::Cell& ErrorStatsAccumulator::cell(int ell, int t) {
  return const_cast<Cell&>(
      static_cast<const ErrorStatsAccumulator*>(this)->cell(ell, t));
}

void ErrorStatsAccumulator::add_frame(const PilotSchedule& schedule,
                                      const CVec& estimates,
                                      const FadingPath& truth, int n_r) {
  if (schedule.L != L_ || schedule.n_pilot != n_pilot_)
    throw std::invalid_argument("ErrorStats: schedule does not match");
  if (truth.n_t != n_pilot_ || truth.n_r != n_r ||
      truth.length < schedule.n_total)
    throw std::invalid_argument("ErrorStats: truth path does not cover frame");

  const auto data = schedule.data_indices();
  if (estimates.size() != data.size() * static_cast<std::size_t>(n_r) * n_pilot_)
    throw std::invalid_argument("ErrorStats: estimate buffer has wrong size");

  // Per-frame, per-cell sums: the frame means feed the frame-level moments
  // that se_sq_error uses (slots within a frame are correlated).
  std::vector<std::size_t> fcnt(cells_.size() * 2, 0);
  std::vector<double> fsum(cells_.size() * 2, 0.0);

  for (std::size_t d = 0; d < data.size(); ++d) {
    const std::size_t k = data[d];
    const int parity = static_cast<int>((k / L_) % 2);
    const int ell = static_cast<int>(k % L_);
    for (int r = 0; r < n_r; ++r)
      for (int t = 1; t <= n_pilot_; ++t) {
        const auto hhat = estimates[(d * n_r + r) * n_pilot_ + (t - 1)];
        const auto err = truth.at(k, r, t - 1) - hhat;
        auto& c = cell(ell, t);
        const double e2 = std::norm(err);
        c.n[parity] += 1;
        c.sum_sq[parity] += e2;
        c.sum_sq2[parity] += e2 * e2;
        c.sum_cross += hhat * std::conj(err);
        c.sum_est_sq += std::norm(hhat);
        const std::size_t ci =
            static_cast<std::size_t>(ell - n_pilot_) * n_pilot_ + (t - 1);
        fcnt[ci * 2 + parity] += 1;
        fsum[ci * 2 + parity] += e2;
      }
  }

  for (std::size_t ci = 0; ci < cells_.size(); ++ci) {
    auto& c = cells_[ci];
    const std::size_t n0 = fcnt[ci * 2], n1 = fcnt[ci * 2 + 1];
    for (int p = 0; p < 2; ++p) {
      const std::size_t np = fcnt[ci * 2 + p];
      if (np == 0) continue;
      const double m = fsum[ci * 2 + p] / np;
      c.fn[p] += 1;
      c.fsum[p] += m;
      c.fsum2[p] += m * m;
    }
    if (n0 + n1 > 0) {
      const double m = (fsum[ci * 2] + fsum[ci * 2 + 1]) / (n0 + n1);
      c.fn[2] += 1;
      c.fsum[2] += m;
      c.fsum2[2] += m * m;
    }
  }
}

void ErrorStatsAccumulator::merge(const ErrorStatsAccumulator& other) {
  if (other.L_ != L_ || other.n_pilot_ != n_pilot_)
    throw std::invalid_argument("ErrorStats: cannot merge different layouts");
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    for (int p = 0; p < 2; ++p) {
      cells_[i].n[p] += other.cells_[i].n[p];
      cells_[i].sum_sq[p] += other.cells_[i].sum_sq[p];
      cells_[i].sum_sq2[p] += other.cells_[i].sum_sq2[p];
    }
    for (int p = 0; p < 3; ++p) {
      cells_[i].fn[p] += other.cells_[i].fn[p];
      cells_[i].fsum[p] += other.cells_[i].fsum[p];
      cells_[i].fsum2[p] += other.cells_[i].fsum2[p];
    }
    cells_[i].sum_cross += other.cells_[i].sum_cross;
    cells_[i].sum_est_sq += other.cells_[i].sum_est_sq;
  }
}

std::size_t ErrorStatsAccumulator::count(int ell, int t) const {
  const auto& c = cell(ell, t);
  return c.n[0] + c.n[1];
}

double ErrorStatsAccumulator::mean_sq_error(int ell, int t) const {
  const auto& c = cell(ell, t);
  const std::size_t n = c.n[0] + c.n[1];
  return n ? (c.sum_sq[0] + c.sum_sq[1]) / n : 0.0;
}

double ErrorStatsAccumulator::se_sq_error(int ell, int t) const {
  const auto& c = cell(ell, t);
  if (c.fn[2] >= 2) {
    const double mean = c.fsum[2] / c.fn[2];
    const double var = c.fsum2[2] / c.fn[2] - mean * mean;
    return std::sqrt(std::max(var, 0.0) / c.fn[2]);
  }
  const std::size_t n = c.n[0] + c.n[1];
  if (n < 2) return 0.0;
  const double mean = (c.sum_sq[0] + c.sum_sq[1]) / n;
  const double var = (c.sum_sq2[0] + c.sum_sq2[1]) / n - mean * mean;
  return std::sqrt(std::max(var, 0.0) / n);
}

std::complex<double> ErrorStatsAccumulator::corr_est_err(int ell, int t) const {
  const auto& c = cell(ell, t);
  const double denom = std::sqrt(c.sum_est_sq * (c.sum_sq[0] + c.sum_sq[1]));
  return denom > 0.0 ? c.sum_cross / denom : std::complex<double>{0.0, 0.0};
}

std::pair<double, double> ErrorStatsAccumulator::mean_sq_error_by_parity(
    int ell, int t) const {
  const auto& c = cell(ell, t);
  return {c.n[0] ? c.sum_sq[0] / c.n[0] : 0.0,
          c.n[1] ? c.sum_sq[1] / c.n[1] : 0.0};
}

std::pair<double, double> ErrorStatsAccumulator::se_sq_error_by_parity(
    int ell, int t) const {
  const auto& c = cell(ell, t);
  double se[2] = {0.0, 0.0};
  for (int p = 0; p < 2; ++p) {
    if (c.fn[p] >= 2) {
      const double mean = c.fsum[p] / c.fn[p];
      const double var = c.fsum2[p] / c.fn[p] - mean * mean;
      se[p] = std::sqrt(std::max(var, 0.0) / c.fn[p]);
      continue;
    }
    if (c.n[p] < 2) continue;
    const double mean = c.sum_sq[p] / c.n[p];
    const double var = c.sum_sq2[p] / c.n[p] - mean * mean;
    se[p] = std::sqrt(std::max(var, 0.0) / c.n[p]);
  }
  return {se[0], se[1]};
}

ErrorStatsAccumulator empirical_error_stats(const PilotSchedule& schedule,
                                            const CVec& estimates,
                                            const FadingPath& truth, int n_r) {
  ErrorStatsAccumulator acc(schedule.L, schedule.n_pilot);
  acc.add_frame(schedule, estimates, truth, n_r);
  return acc;
}

}  // namespace pilotnn
