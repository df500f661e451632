// Checks of the fading synthesizer and its support code: quadrature vs
// closed-form autocovariance, reproducibility and per-antenna-pair stream
// isolation, second-order statistics of synthesized paths against the target
// spectrum, the binary path file format, and the seed-derivation mixer.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pilotnn/fading.hpp"
#include "pilotnn/rng.hpp"

using namespace pilotnn;

TEST_CASE("quadrature autocovariance matches the closed form") {
  for (PsdShape shape : {PsdShape::rectangular, PsdShape::raised_cosine}) {
    for (double ld : {0.125, 0.3}) {
      const PsdModel model(shape, ld, 4096);
      for (long long lag = 0; lag <= 64; lag += (lag < 8 ? 1 : 7)) {
        const auto quad = autocovariance(model, lag);
        CHECK(std::abs(quad.imag()) < 1e-10);
        CHECK(std::abs(quad.real() - model.autocovariance_closed(lag)) <
              1e-10);
      }
    }
  }
  // Nyquist-rate zeros of the rectangular shape: sinc(2 lambda_d m) vanishes
  // at every multiple of 1/(2 lambda_d).
  const PsdModel rect(PsdShape::rectangular, 0.125);
  for (long long m : {4, 8, 12, 20})
    CHECK(std::abs(rect.autocovariance_closed(m)) < 1e-14);
}

TEST_CASE("synthesis is reproducible and per-pair streams are stable") {
  const PsdModel model(PsdShape::rectangular, 0.125);
  const FadingPath a = synthesize(model, 2, 2, 64, 42);
  const FadingPath b = synthesize(model, 2, 2, 64, 42);
  REQUIRE(a.samples.size() == 64u * 4u);
  CHECK(a.samples == b.samples);
  CHECK(a.n_r == 2);
  CHECK(a.n_t == 2);
  CHECK(a.seed == 42u);
  CHECK(a.length == 64u);

  const FadingPath c = synthesize(model, 2, 2, 64, 43);
  CHECK(a.samples != c.samples);

  // The (r, t) = (0, 0) entry depends only on the seed, not on how many
  // other antenna pairs are synthesized alongside it. This is what makes
  // results comparable across array sizes at a fixed seed.
  const FadingPath solo = synthesize(model, 1, 1, 64, 42);
  const FadingPath wide = synthesize(model, 3, 2, 64, 42);
  for (std::size_t k = 0; k < 64; ++k) {
    CHECK(solo.at(k, 0, 0) == a.at(k, 0, 0));
    CHECK(wide.at(k, 0, 0) == a.at(k, 0, 0));
  }
  // distinct pairs are distinct streams
  CHECK(wide.at(0, 2, 1) != wide.at(0, 0, 0));
}

TEST_CASE("synthesized paths have the target second-order statistics") {
  const PsdModel model(PsdShape::rectangular, 0.125);
  const std::size_t n = 32768;
  const FadingPath path = synthesize(model, 2, 1, n, 2024);

  std::complex<double> mean{0.0, 0.0};
  double pow2 = 0.0, pow4 = 0.0;
  std::complex<double> lag1{0.0, 0.0}, lag4{0.0, 0.0}, cross{0.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    const auto h = path.at(k, 0, 0);
    mean += h;
    const double m2 = std::norm(h);
    pow2 += m2;
    pow4 += m2 * m2;
    cross += h * std::conj(path.at(k, 1, 0));
    if (k + 4 < n) {
      lag1 += path.at(k + 1, 0, 0) * std::conj(h);
      lag4 += path.at(k + 4, 0, 0) * std::conj(h);
    }
  }
  const double inv = 1.0 / static_cast<double>(n);
  CHECK(std::abs(mean * inv) < 0.04);
  CHECK(pow2 * inv == doctest::Approx(1.0).epsilon(0.05));
  // complex Gaussian: E|h|^4 = 2 (E|h|^2)^2
  CHECK(pow4 * inv == doctest::Approx(2.0).epsilon(0.15));
  // R(1) = sinc(1/4) and R(4) = sinc(1) = 0 for this spectrum. The effective
  // sample count is n / coherence, so tolerances are loose but diagnostic.
  CHECK(std::abs(lag1 * inv - 0.9003163161571061) < 0.03);
  CHECK(std::abs(lag4 * inv) < 0.03);
  CHECK(std::abs(cross * inv) < 0.04);
}

TEST_CASE("path files round-trip through dump and load") {
  const PsdModel model(PsdShape::raised_cosine, 0.2);
  const FadingPath path = synthesize(model, 2, 3, 17, 77);
  const std::string file = "test_fading_roundtrip.fad";
  dump_path(path, file);

  const FadingPath back = load_path(file);
  CHECK(back.n_r == path.n_r);
  CHECK(back.n_t == path.n_t);
  CHECK(back.length == path.length);
  CHECK(back.seed == path.seed);
  REQUIRE(back.samples.size() == path.samples.size());
  // storage is float32, so round-tripping is exact only to single precision
  for (std::size_t i = 0; i < path.samples.size(); ++i) {
    CHECK(std::abs(back.samples[i].real() - path.samples[i].real()) < 1e-5);
    CHECK(std::abs(back.samples[i].imag() - path.samples[i].imag()) < 1e-5);
  }
  std::remove(file.c_str());
}

TEST_CASE("path loader rejects malformed files") {
  const std::string bad = "test_fading_bad.fad";
  {
    std::ofstream out(bad, std::ios::binary);
    out << "NOTMAGIC" << std::string(24, '\0');
  }
  CHECK_THROWS_AS(load_path(bad), std::runtime_error);

  // valid header, truncated payload
  const PsdModel model(PsdShape::rectangular, 0.125);
  const FadingPath path = synthesize(model, 1, 1, 8, 5);
  dump_path(path, bad);
  {
    std::ifstream in(bad, std::ios::binary);
    std::string contents((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    in.close();
    contents.resize(contents.size() - 4);
    std::ofstream out(bad, std::ios::binary | std::ios::trunc);
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  }
  CHECK_THROWS_AS(load_path(bad), std::runtime_error);
  CHECK_THROWS_AS(load_path("test_fading_no_such_file.fad"),
                  std::runtime_error);
  std::remove(bad.c_str());
}

TEST_CASE("seed derivation separates nearby streams") {
  // Regression for a mixer that injected indices into unmixed state: there,
  // base and index could cancel, giving derive(2,0,x) == derive(3,0,x^1).
  for (std::uint64_t fr = 0; fr < 64; ++fr) {
    CHECK(derive_seed(2, 0, fr) != derive_seed(3, 0, fr ^ 1));
    CHECK(derive_seed(2, fr) != derive_seed(3, fr ^ 1));
  }

  // No collisions over a dense block of small coordinates.
  std::set<std::uint64_t> seen;
  for (std::uint64_t base : {0ULL, 1ULL, 42ULL, 0xffffffffULL})
    for (std::uint64_t i = 0; i < 8; ++i)
      for (std::uint64_t j = 0; j < 8; ++j)
        seen.insert(derive_seed(base, i, j));
  CHECK(seen.size() == 4u * 8u * 8u);

  // Defaulted trailing coordinates match their explicit-zero spelling.
  CHECK(derive_seed(9, 1) == derive_seed(9, 1, 0, 0));
}

TEST_CASE("complex normal source has the right scale") {
  ComplexNormal cn(123);
  const int n = 20000;
  std::complex<double> mean{0.0, 0.0};
  double pow2 = 0.0, re2 = 0.0, im2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const auto z = cn();
    mean += z;
    pow2 += std::norm(z);
    re2 += z.real() * z.real();
    im2 += z.imag() * z.imag();
  }
  const double inv = 1.0 / n;
  CHECK(std::abs(mean * inv) < 0.02);
  CHECK(pow2 * inv == doctest::Approx(1.0).epsilon(0.03));
  CHECK(re2 * inv == doctest::Approx(0.5).epsilon(0.05));
  CHECK(im2 * inv == doctest::Approx(0.5).epsilon(0.05));

  ComplexNormal again(123);
  CHECK(again() == ComplexNormal(123)());
}
