#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>

#include "octsr/forward.hpp"
#include "octsr/grids.hpp"
#include "test_util.hpp"

using namespace octsr;

namespace {

ReflectivityProfile zero_profile(const SpatialGrid& z) {
  return {Eigen::VectorXd::Zero(z.n_count), z};
}

}  // namespace

TEST_CASE("zero object gives an exactly zero interferogram without noise") {
  const WavenumberGrid k(2e6, 500.0, 32);
  const SpatialGrid z(0.0, 1e-6, 64);
  const auto ig = simulate_interferogram(zero_profile(z), testing::flat_spectrum(k), {});
  CHECK(ig.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single reflector gives the cosine fringe scaled by the grid step") {
  const WavenumberGrid k(2e6, 500.0, 16);
  const SpatialGrid z(0.0, 1e-6, 32);
  ReflectivityProfile r = zero_profile(z);
  r.values[11] = 1.0;
  const auto ig = simulate_interferogram(r, testing::flat_spectrum(k), {});
  for (int m = 0; m < k.m_count; ++m)
    CHECK(ig.values[m] ==
          doctest::Approx(z.delta_z * std::cos(2.0 * k.k(m) * z.z(11))).epsilon(1e-12));
}

TEST_CASE("forward model is linear in the object") {
  std::mt19937_64 rng(11);
  const WavenumberGrid k(3e6, 800.0, 64);
  const SpatialGrid z(0.0, 0.5e-6, 100);
  const auto s = testing::flat_spectrum(k, 0.7);
  ReflectivityProfile r1 = zero_profile(z), r2 = zero_profile(z), mix = zero_profile(z);
  r1.values = testing::random_vector(rng, z.n_count);
  r2.values = testing::random_vector(rng, z.n_count);
  const double a = 1.7, b = -0.4;
  mix.values = a * r1.values + b * r2.values;
  const Eigen::VectorXd lhs = simulate_interferogram(mix, s, {}).values;
  const Eigen::VectorXd rhs = a * simulate_interferogram(r1, s, {}).values +
                              b * simulate_interferogram(r2, s, {}).values;
  CHECK(testing::rel_error(lhs, rhs) < 1e-10);
}

TEST_CASE("identical seeds give bit-identical noise") {
  const WavenumberGrid k(2e6, 500.0, 128);
  const SpatialGrid z(0.0, 1e-6, 16);
  ReflectivityProfile r = zero_profile(z);
  r.values[3] = 1.0;
  NoiseModel noise{NoiseKind::additive_gaussian, 1e-7, 123456};
  const auto a = simulate_interferogram(r, testing::flat_spectrum(k), noise);
  const auto b = simulate_interferogram(r, testing::flat_spectrum(k), noise);
  CHECK(std::memcmp(a.values.data(), b.values.data(), sizeof(double) * a.values.size()) == 0);

  noise.seed = 654321;
  const auto c = simulate_interferogram(r, testing::flat_spectrum(k), noise);
  CHECK((a.values - c.values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("left Riemann sum converges at first order in the grid step") {
  // smooth bump sampled at 4 refinements against a much finer reference
  const WavenumberGrid k = testing::methods_grid(256);
  const auto s = testing::flat_spectrum(k);
  const double center = 40e-6, width = 8e-6, support = 80e-6;

  auto interferogram_with = [&](int n) {
    SpatialGrid z(0.0, support / n, n);
    ReflectivityProfile r = zero_profile(z);
    for (int j = 0; j < n; ++j) {
      const double d = (z.z(j) - center) / width;
      r.values[j] = std::exp(-d * d);
    }
    return simulate_interferogram(r, s, {}).values;
  };

  const Eigen::VectorXd reference = interferogram_with(1 << 14);
  double previous_error = -1.0;
  for (int level = 0; level < 3; ++level) {
    const int n = 256 << level;
    const double err = (interferogram_with(n) - reference).norm();
    if (previous_error > 0.0) {
      const double order = std::log2(previous_error / err);
      CHECK(order >= 0.9);
    }
    previous_error = err;
  }
}

TEST_CASE("gaussian spectrum peaks at 1 and halves at the FWHM edges") {
  // grid chosen so that kc and kc +- fwhm_k/2 are exact samples
  const double lambda_c = 892.8e-9;
  const double kc = two_pi / lambda_c;
  const double fwhm_k = two_pi * 103.4e-9 / (lambda_c * lambda_c);
  const WavenumberGrid k(kc - fwhm_k / 2.0, fwhm_k / 4.0, 5);
  const auto result = gaussian_spectrum(k, lambda_c, 103.4e-9);
  CHECK_FALSE(result.coverage_warning);
  CHECK(result.spectrum.values[2] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(result.spectrum.values[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(result.spectrum.values[4] == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("gaussian spectrum far outside the grid raises the coverage warning") {
  const WavenumberGrid k = testing::methods_grid(64);
  const auto result = gaussian_spectrum(k, 1500e-9, 10e-9);
  CHECK(result.coverage_warning);
  CHECK(result.spectrum.values.size() == 64);
}

TEST_CASE("bandwidth truncation keeps the centered window") {
  const WavenumberGrid k = testing::methods_grid(2048);
  const auto s = gaussian_spectrum(k, 892.8e-9, 103.4e-9).spectrum;
  Interferogram ig;
  ig.k_grid = k;
  ig.values = Eigen::VectorXd::LinSpaced(2048, 0.0, 1.0);

  SUBCASE("fraction 1 is the identity") {
    const auto r = truncate_bandwidth(ig, s, 1.0);
    CHECK(r.interferogram.values == ig.values);
    CHECK(r.spectrum.k_grid.m_count == 2048);
  }
  SUBCASE("fraction 1/2 keeps 1024 samples around the power centroid") {
    const auto r = truncate_bandwidth(ig, s, 0.5);
    CHECK(r.interferogram.values.size() == 1024);
    CHECK(r.spectrum.k_grid.m_count == 1024);
    // centroid of the asymmetric windowed gaussian sits near sample 922
    double num = 0.0, den = 0.0;
    for (int q = 0; q < 2048; ++q) {
      num += q * s.values[q];
      den += s.values[q];
    }
    const int start = static_cast<int>(std::lround(num / den)) - 512;
    CHECK(r.spectrum.k_grid.k0 == doctest::Approx(k.k(start)).epsilon(1e-14));
  }
  SUBCASE("too small results are rejected") {
    CHECK_THROWS_AS(truncate_bandwidth(ig, s, 0.003), std::invalid_argument);
    CHECK_THROWS_AS(truncate_bandwidth(ig, s, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(truncate_bandwidth(ig, s, 1.5), std::invalid_argument);
  }
}

TEST_CASE("noise model validation") {
  const WavenumberGrid k(2e6, 500.0, 16);
  const SpatialGrid z(0.0, 1e-6, 8);
  NoiseModel bad{NoiseKind::additive_gaussian, -1.0, 0};
  CHECK_THROWS_AS(simulate_interferogram(zero_profile(z), testing::flat_spectrum(k), bad),
                  std::invalid_argument);
}
