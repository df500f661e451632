#include "pilotnn/fading.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <mutex>
#include <stdexcept>

#include "pilotnn/quadrature.hpp"
#include "pilotnn/rng.hpp"

namespace pilotnn {

namespace {

// FFTW plan creation is not thread safe; execution on private buffers is.
std::mutex fftw_planner_mutex;

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

std::complex<double> autocovariance(const PsdModel& model, long long lag) {
  const auto integrand = [&](double l) {
    const double phase = 2.0 * M_PI * static_cast<double>(lag) * l;
    return model(l) * std::complex<double>(std::cos(phase), std::sin(phase));
  };
  return integrate(integrand, -0.5, 0.5, model.band_breakpoints(),
                   model.quad_points());
}

FadingPath synthesize(const PsdModel& model, int n_r, int n_t,
                      std::size_t length, std::uint64_t seed) {
  if (n_r < 1 || n_t < 1)
    throw std::invalid_argument("synthesize: antenna counts must be >= 1");
  if (length < 1) throw std::invalid_argument("synthesize: length must be >= 1");

  const std::size_t N = next_pow2(std::max<std::size_t>(8 * length, 4096));

  // Spectral synthesis: a circulant process whose eigenvalues sample the
  // spectrum at the DFT frequencies realizes the alias-wrapped autocovariance
  // sum_m R(j + mN), which for these bandlimited spectra deviates from R(j)
  // by O(j/N^2). Sampling f directly keeps the eigenvalues nonnegative; the
  // alternative (DFT of the truncated autocovariance row) picks up Gibbs
  // oscillation near the rectangular band edge and is an order worse. Poisson
  // summation wants the midpoint value where f jumps (a DFT frequency can sit
  // exactly on the rectangular band edge; taking the full value there leaks a
  // non-decaying cosine ripple into every lag), so sample two-sided averages.
  std::vector<double> amp(N);
  const double half_step = 0.25 / static_cast<double>(N);
  for (std::size_t j = 0; j < N; ++j) {
    double lam = static_cast<double>(j) / static_cast<double>(N);
    if (lam >= 0.5) lam -= 1.0;
    const double f = 0.5 * (model(lam - half_step) + model(lam + half_step));
    amp[j] = std::sqrt(f / static_cast<double>(N));
  }

  std::vector<std::complex<double>> buf(N);
  fftw_plan bwd;
  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    bwd = fftw_plan_dft_1d(static_cast<int>(N),
                           reinterpret_cast<fftw_complex*>(buf.data()),
                           reinterpret_cast<fftw_complex*>(buf.data()),
                           FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  FadingPath path;
  path.n_r = n_r;
  path.n_t = n_t;
  path.seed = seed;
  path.length = length;
  path.samples.resize(length * static_cast<std::size_t>(n_r) * n_t);

  for (int r = 0; r < n_r; ++r) {
    for (int t = 0; t < n_t; ++t) {
      ComplexNormal cn(derive_seed(seed, static_cast<std::uint64_t>(r),
                                   static_cast<std::uint64_t>(t)));
      for (std::size_t j = 0; j < N; ++j) buf[j] = amp[j] * cn();
      fftw_execute(bwd);
      for (std::size_t k = 0; k < length; ++k) path.at(k, r, t) = buf[k];
    }
  }

  {
    std::lock_guard<std::mutex> lock(fftw_planner_mutex);
    fftw_destroy_plan(bwd);
  }
  return path;
}

void dump_path(const FadingPath& path, const std::string& file) {
  std::FILE* fp = std::fopen(file.c_str(), "wb");
  if (!fp) throw std::runtime_error("dump_path: cannot open " + file);

  unsigned char header[32] = {0};
  std::memcpy(header, "FADPATH1", 8);
  const std::uint32_t nr = static_cast<std::uint32_t>(path.n_r);
  const std::uint32_t nt = static_cast<std::uint32_t>(path.n_t);
  const std::uint64_t len = path.length;
  std::memcpy(header + 8, &nr, 4);
  std::memcpy(header + 12, &nt, 4);
  std::memcpy(header + 16, &len, 8);
  std::memcpy(header + 24, &path.seed, 8);
  if (std::fwrite(header, 1, 32, fp) != 32) {
    std::fclose(fp);
    throw std::runtime_error("dump_path: short write on header");
  }

  std::vector<float> row(2 * static_cast<std::size_t>(path.n_r) * path.n_t);
  for (std::size_t k = 0; k < path.length; ++k) {
    std::size_t i = 0;
    for (int r = 0; r < path.n_r; ++r)
      for (int t = 0; t < path.n_t; ++t) {
        const auto v = path.at(k, r, t);
        row[i++] = static_cast<float>(v.real());
        row[i++] = static_cast<float>(v.imag());
      }
    if (std::fwrite(row.data(), sizeof(float), row.size(), fp) != row.size()) {
      std::fclose(fp);
      throw std::runtime_error("dump_path: short write on samples");
    }
  }
  std::fclose(fp);
}

FadingPath load_path(const std::string& file) {
  std::FILE* fp = std::fopen(file.c_str(), "rb");
  if (!fp) throw std::runtime_error("load_path: cannot open " + file);

  unsigned char header[32];
  if (std::fread(header, 1, 32, fp) != 32) {
    std::fclose(fp);
    throw std::runtime_error("load_path: truncated header");
  }
  if (std::memcmp(header, "FADPATH1", 8) != 0) {
    std::fclose(fp);
    throw std::runtime_error("load_path: bad magic");
  }
  std::uint32_t nr, nt;
  std::uint64_t len, seed;
  std::memcpy(&nr, header + 8, 4);
  std::memcpy(&nt, header + 12, 4);
  std::memcpy(&len, header + 16, 8);
  std::memcpy(&seed, header + 24, 8);

  FadingPath path;
  path.n_r = static_cast<int>(nr);
  path.n_t = static_cast<int>(nt);
  path.length = static_cast<std::size_t>(len);
  path.seed = seed;
  path.samples.resize(path.length * nr * nt);

  std::vector<float> row(2 * static_cast<std::size_t>(nr) * nt);
  for (std::size_t k = 0; k < path.length; ++k) {
    if (std::fread(row.data(), sizeof(float), row.size(), fp) != row.size()) {
      std::fclose(fp);
      throw std::runtime_error("load_path: truncated samples");
    }
    std::size_t i = 0;
    for (std::uint32_t r = 0; r < nr; ++r)
      for (std::uint32_t t = 0; t < nt; ++t) {
        path.at(k, static_cast<int>(r), static_cast<int>(t)) = {row[i], row[i + 1]};
        i += 2;
      }
  }
  std::fclose(fp);
  return path;
}

}  // namespace pilotnn
