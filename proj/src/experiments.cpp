#include "pilotnn/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "pilotnn/codec.hpp"
#include "pilotnn/estimator.hpp"
#include "pilotnn/fading.hpp"
#include "pilotnn/gmi.hpp"
#include "pilotnn/mac.hpp"
#include "pilotnn/rng.hpp"
#include "pilotnn/scenario.hpp"
#include "pilotnn/spectrum.hpp"

namespace pilotnn {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

// Fixed-chunk parallel loop: work is split into chunks indexed independently
// of the thread count, so results (and their reduction order) never depend on
// how many workers ran.
void parallel_chunks(std::size_t n_chunks, int threads,
                     const std::function<void(std::size_t)>& run_chunk) {
  if (threads <= 1 || n_chunks <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(threads), n_chunks));
  std::exception_ptr error;
  std::mutex error_mutex;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t c = next.fetch_add(1);
        if (c >= n_chunks) return;
        try {
          run_chunk(c);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

PsdModel psd_from_config(const RunConfig& cfg) {
  const std::string shape = cfg.get_string("psd.shape", "rectangular");
  PsdShape s;
  if (shape == "rectangular")
    s = PsdShape::rectangular;
  else if (shape == "raised_cosine")
    s = PsdShape::raised_cosine;
  else
    throw std::invalid_argument(
        "config field 'psd.shape': expected rectangular or raised_cosine, got '" +
        shape + "'");
  return PsdModel(s, cfg.get_double("psd.lambda_d"),
                  static_cast<int>(cfg.get_int("psd.quad_points", 2048)));
}

std::vector<double> snr_grid_db(const RunConfig& cfg) {
  auto grid = cfg.get_double_list("snr_db");
  for (double db : grid)
    if (!std::isfinite(db))
      throw std::invalid_argument("config field 'snr_db': non-finite entry");
  return grid;
}

int require_positive_int(const RunConfig& cfg, const std::string& key) {
  const long long v = cfg.get_int(key);
  if (v < 1)
    throw std::invalid_argument("config field '" + key + "': must be >= 1");
  return static_cast<int>(v);
}

// Tracks files created by an experiment so a failure can clean them up.
class OutputSet {
 public:
  explicit OutputSet(const std::string& dir) : dir_(dir) {
    fs::create_directories(dir_);
  }
  std::string path(const std::string& name) {
    const std::string p = (fs::path(dir_) / name).string();
    files_.push_back(p);
    return p;
  }
  const std::vector<std::string>& files() const { return files_; }
  void discard_all() {
    for (const auto& f : files_) {
      std::error_code ec;
      fs::remove(f, ec);
    }
  }

 private:
  std::string dir_;
  std::vector<std::string> files_;
};

void run_scenario(const RunConfig& cfg, OutputSet& out) {
  Environment env;
  env.delay_spread_s = cfg.get_double("env.delay_spread_s");
  env.velocity_mps = cfg.has("env.velocity_mps")
                         ? cfg.get_double("env.velocity_mps")
                         : kmh_to_mps(cfg.get_double("env.velocity_kmh"));
  env.carrier_hz = cfg.get_double("env.carrier_hz");
  const double lambda_d = lambda_from_env(env);
  const long long lstar = l_star_from_lambda(lambda_d);

  json j;
  j["delay_spread_s"] = env.delay_spread_s;
  j["velocity_mps"] = env.velocity_mps;
  j["carrier_hz"] = env.carrier_hz;
  j["lambda_d"] = lambda_d;
  j["l_star"] = lstar;
  std::ofstream f(out.path("scenario.json"));
  f << j.dump(2) << "\n";
}

void run_interp_error(const RunConfig& cfg, OutputSet& out, int threads) {
  const auto model = psd_from_config(cfg);
  const int L = require_positive_int(cfg, "schedule.L");
  const int n_t = require_positive_int(cfg, "schedule.n_t");
  const int T = require_positive_int(cfg, "schedule.T");
  const auto n = static_cast<std::size_t>(cfg.get_int("schedule.n"));
  const int n_r = static_cast<int>(cfg.get_int("n_r", 1));
  if (n_r < 1) throw std::invalid_argument("config field 'n_r': must be >= 1");
  const auto frames = static_cast<std::size_t>(cfg.get_int("mc.frames", 10000));
  if (frames < 1)
    throw std::invalid_argument("config field 'mc.frames': must be >= 1");
  const auto grid = snr_grid_db(cfg);
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const auto schedule = build_schedule(L, n_t, T, n);

  std::ofstream f(out.path("interp_error.csv"));
  f << "ell,t,T,snr_db,analytic_eps2,empirical_eps2,se\n";

  for (std::size_t pi = 0; pi < grid.size(); ++pi) {
    const double snr = db_to_linear(grid[pi]);
    const auto weights = solve_weights(schedule, model, snr);

    const std::size_t n_chunks = std::min<std::size_t>(frames, 64);
    std::vector<ErrorStatsAccumulator> chunk_stats(
        n_chunks, ErrorStatsAccumulator(L, n_t));
    parallel_chunks(n_chunks, threads, [&](std::size_t c) {
      const std::size_t lo = frames * c / n_chunks;
      const std::size_t hi = frames * (c + 1) / n_chunks;
      for (std::size_t fr = lo; fr < hi; ++fr) {
        const std::uint64_t base = derive_seed(seed, pi, fr);
        const auto path = synthesize(model, n_r, n_t, schedule.n_total,
                                     derive_seed(base, 1));
        CVec x(schedule.n_total * static_cast<std::size_t>(n_t), {0.0, 0.0});
        for (std::size_t k = 0; k < schedule.n_total; ++k) {
          const int off = static_cast<int>(k % L);
          if (off < n_t) x[k * n_t + off] = 1.0;
        }
        const auto y = channel_apply(path, x, snr, derive_seed(base, 2));
        const auto est = estimate_path(schedule, weights, y, n_r);
        chunk_stats[c].add_frame(schedule, est, path, n_r);
      }
    });
    ErrorStatsAccumulator stats(L, n_t);
    for (const auto& cs : chunk_stats) stats.merge(cs);

    for (int ell = n_t; ell <= L - 1; ++ell)
      for (int t = 1; t <= n_t; ++t)
        f << ell << ',' << t << ',' << T << ',' << fmt_g(grid[pi]) << ','
          << fmt_g(weights.predicted_mse(ell, t)) << ','
          << fmt_g(stats.mean_sq_error(ell, t)) << ','
          << fmt_g(stats.se_sq_error(ell, t)) << "\n";
  }
}

void run_prelog(const RunConfig& cfg, OutputSet& out, int threads) {
  const auto model = psd_from_config(cfg);
  const int L = require_positive_int(cfg, "schedule.L");
  const int n_t = require_positive_int(cfg, "schedule.n_t");
  const int n_r = static_cast<int>(cfg.get_int("n_r", n_t));
  const int T = static_cast<int>(cfg.get_int("schedule.T", 0));
  if (T < 0) throw std::invalid_argument("config field 'schedule.T': must be >= 0");
  const std::string variant = cfg.get_string("variant", "asymptotic");
  const auto mc = static_cast<std::size_t>(cfg.get_int("mc.samples", 20000));
  const auto grid = snr_grid_db(cfg);
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const bool refine = cfg.get_int("refine.theta", 0) != 0;

  double log_k = 0.0, e_norm_sq = 1.0;
  if (variant == "general_input") {
    log_k = cfg.get_double("input.log_k");
    e_norm_sq = cfg.get_double("input.e_norm_sq");
  } else if (variant != "finite_T" && variant != "asymptotic" &&
             variant != "digamma") {
    throw std::invalid_argument(
        "config field 'variant': expected finite_T, asymptotic, digamma or "
        "general_input, got '" + variant + "'");
  }

  std::vector<GmiEstimate> points(grid.size());
  parallel_chunks(grid.size(), threads, [&](std::size_t i) {
    const double snr = db_to_linear(grid[i]);
    const std::uint64_t s = derive_seed(seed, i);
    if (variant == "finite_T") {
      const auto profile =
          T >= 1 ? profile_finite_T(build_schedule(L, n_t, T,
                                                   static_cast<std::size_t>(L - n_t)),
                                    model, n_r, snr)
                 : profile_infinite_T(model, L, n_t, n_r, snr);
      points[i] = gmi_lb_finite_T(profile, mc, s, refine);
    } else if (variant == "asymptotic") {
      points[i] = gmi_lb_asymptotic(model, L, n_t, snr, mc, s);
    } else if (variant == "digamma") {
      points[i] = gmi_lb_digamma(model, L, n_t, snr);
    } else {
      points[i] = gmi_lb_general_input(model, L, n_t, snr, log_k, e_norm_sq, mc, s);
    }
  });

  std::ofstream f(out.path("prelog.csv"));
  f << "variant,snr_db,L,n_t,n_r,T,value_nats,se,theta\n";
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& p = points[i];
    values[i] = p.value;
    f << p.variant << ',' << fmt_g(grid[i]) << ',' << p.L << ',' << p.n_t
      << ',' << p.n_r << ',' << p.T << ',' << fmt_g(p.value) << ','
      << fmt_g(p.se) << ',' << fmt_g(p.theta) << "\n";
  }

  const auto fit = prelog_fit(grid, values);
  json j;
  j["slope_nats_per_ln_snr"] = fit.slope;
  j["intercept_nats"] = fit.intercept;
  j["residual_rms"] = fit.residual_rms;
  j["points"] = fit.points;
  std::ofstream jf(out.path("prelog_fit.json"));
  jf << j.dump(2) << "\n";
}

void run_decode_sim(const RunConfig& cfg, OutputSet& out, int threads) {
  const auto model = psd_from_config(cfg);
  const int L = require_positive_int(cfg, "schedule.L");
  const int n_t = require_positive_int(cfg, "schedule.n_t");
  const int T = require_positive_int(cfg, "schedule.T");
  const auto n = static_cast<std::size_t>(cfg.get_int("schedule.n"));
  const int n_r = require_positive_int(cfg, "n_r");
  const auto M = static_cast<std::size_t>(cfg.get_int("codec.M"));
  const std::string law_s = cfg.get_string("codec.law", "gaussian");
  CodebookLaw law;
  if (law_s == "gaussian")
    law = CodebookLaw::gaussian;
  else if (law_s == "truncated_gaussian")
    law = CodebookLaw::truncated_gaussian;
  else
    throw std::invalid_argument(
        "config field 'codec.law': expected gaussian or truncated_gaussian, got '" +
        law_s + "'");
  const auto frames = static_cast<std::size_t>(cfg.get_int("mc.frames", 500));
  if (frames < 1)
    throw std::invalid_argument("config field 'mc.frames': must be >= 1");
  const auto grid = snr_grid_db(cfg);
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const auto schedule = build_schedule(L, n_t, T, n);

  std::ofstream f(out.path("decode_sim.csv"));
  f << "snr_db,n,M,frames,block_errors,ber_se\n";

  for (std::size_t pi = 0; pi < grid.size(); ++pi) {
    const double snr = db_to_linear(grid[pi]);
    const auto weights = solve_weights(schedule, model, snr);
    std::vector<std::uint8_t> errs(frames, 0);
    const std::size_t n_chunks = std::min<std::size_t>(frames, 64);
    parallel_chunks(n_chunks, threads, [&](std::size_t c) {
      const std::size_t lo = frames * c / n_chunks;
      const std::size_t hi = frames * (c + 1) / n_chunks;
      for (std::size_t fr = lo; fr < hi; ++fr) {
        const std::uint64_t base = derive_seed(seed, pi, fr);
        const auto book = generate_codebook(M, n, n_t, law, derive_seed(base, 1));
        const auto path = synthesize(model, n_r, n_t, schedule.n_total,
                                     derive_seed(base, 2));
        std::mt19937_64 pick(derive_seed(base, 3));
        const std::size_t m = pick() % M;
        const auto x = transmit_frame(schedule, book, m);
        const auto y = channel_apply(path, x, snr, derive_seed(base, 4));
        const auto est = estimate_path(schedule, weights, y, n_r);
        const auto dec = nn_decode(schedule, book, y, est, n_r, snr);
        errs[fr] = dec.m_hat != m ? 1 : 0;
      }
    });
    std::size_t block_errors = 0;
    for (auto e : errs) block_errors += e;
    const double p = static_cast<double>(block_errors) / frames;
    const double se = std::sqrt(std::max(p * (1.0 - p), 0.0) / frames);
    f << fmt_g(grid[pi]) << ',' << n << ',' << M << ',' << frames << ','
      << block_errors << ',' << fmt_g(se) << "\n";
  }
}

void run_mac_region(const RunConfig& cfg, OutputSet& out) {
  const int n_r = require_positive_int(cfg, "mac.n_r");
  const int n_t1 = require_positive_int(cfg, "mac.n_t1");
  const int n_t2 = require_positive_int(cfg, "mac.n_t2");
  const long long lstar = cfg.get_int("mac.l_star");
  const std::string kind = cfg.get_string("region.kind", "jt");
  const int beta_steps = static_cast<int>(cfg.get_int("region.beta_steps", 100));

  PreLogRegion region;
  if (kind == "jt")
    region = jt_region(n_r, n_t1, n_t2, lstar);
  else if (kind == "tdma")
    region = tdma_region(n_r, n_t1, n_t2, lstar, beta_steps);
  else
    throw std::invalid_argument(
        "config field 'region.kind': expected jt or tdma, got '" + kind + "'");

  std::ofstream f(out.path("mac_region.csv"));
  f << "kind,a,b,rhs,x,y,x_exact,y_exact\n";
  for (const auto& hp : region.constraints)
    f << "constraint," << fmt_g(hp.a.value()) << ',' << fmt_g(hp.b.value())
      << ',' << fmt_g(hp.c.value()) << ",,,,\n";
  for (const auto& [x, y] : region.vertices)
    f << "vertex,,,," << fmt_g(x.value()) << ',' << fmt_g(y.value()) << ','
      << x.str() << ',' << y.str() << "\n";
  for (const auto& [x, y] : region.samples)
    f << "sample,,,," << fmt_g(x) << ',' << fmt_g(y) << ",,\n";
}

void run_mac_verdict(const RunConfig& cfg, OutputSet& out) {
  const int n_r = require_positive_int(cfg, "mac.n_r");
  const int n_t1 = require_positive_int(cfg, "mac.n_t1");
  const int n_t2 = require_positive_int(cfg, "mac.n_t2");
  const long long lstar = cfg.get_int("mac.l_star");
  const auto v = corollary1_verdict(n_r, n_t1, n_t2, lstar);

  json j;
  j["n_r"] = v.n_r;
  j["n_t1"] = v.n_t1;
  j["n_t2"] = v.n_t2;
  j["l_star"] = v.l_star;
  if (v.jt_infinite)
    j["jt_threshold"] = nullptr;
  else {
    j["jt_threshold"] = v.jt_threshold.value();
    j["jt_threshold_exact"] = v.jt_threshold.str();
  }
  if (v.tdma_infinite)
    j["tdma_threshold"] = nullptr;
  else {
    j["tdma_threshold"] = v.tdma_threshold.value();
    j["tdma_threshold_exact"] = v.tdma_threshold.str();
  }
  j["verdict"] = v.verdict == Verdict::JT_superior
                     ? "JT_superior"
                     : (v.verdict == Verdict::TDMA_superior ? "TDMA_superior"
                                                            : "indeterminate");
  std::ofstream f(out.path("mac_verdict.json"));
  f << j.dump(2) << "\n";
}

void run_dump_fading(const RunConfig& cfg, OutputSet& out) {
  const auto model = psd_from_config(cfg);
  const int n_r = require_positive_int(cfg, "path.n_r");
  const int n_t = require_positive_int(cfg, "path.n_t");
  const auto length = static_cast<std::size_t>(cfg.get_int("path.length"));
  if (length < 1)
    throw std::invalid_argument("config field 'path.length': must be >= 1");
  const std::uint64_t seed = cfg.get_u64("seed", 1);
  const auto path = synthesize(model, n_r, n_t, length, seed);
  dump_path(path, out.path("fading.bin"));
}

}  // namespace

std::vector<std::string> run_experiment(const RunConfig& cfg,
                                        const std::string& out_dir,
                                        int threads) {
  const std::string kind = cfg.get_string("experiment");
  if (threads < 1)
    throw std::invalid_argument("threads must be >= 1");

  OutputSet out(out_dir);
  try {
    if (kind == "scenario")
      run_scenario(cfg, out);
    else if (kind == "interp-error")
      run_interp_error(cfg, out, threads);
    else if (kind == "prelog")
      run_prelog(cfg, out, threads);
    else if (kind == "decode-sim")
      run_decode_sim(cfg, out, threads);
    else if (kind == "mac-region")
      run_mac_region(cfg, out);
    else if (kind == "mac-verdict")
      run_mac_verdict(cfg, out);
    else if (kind == "dump-fading")
      run_dump_fading(cfg, out);
    else
      throw std::invalid_argument("config field 'experiment': unknown kind '" +
                                  kind + "'");
  } catch (...) {
    out.discard_all();
    throw;
  }
  return out.files();
}

}  // namespace pilotnn
