#include "octsr/forward.hpp"

#include <cmath>
#include <random>
#include <string>

#include "octsr/kernels.hpp"

namespace octsr {
namespace {

void require_same_grid(const WavenumberGrid& a, const WavenumberGrid& b,
                       const char* what) {
  const bool same = a.m_count == b.m_count &&
                    std::abs(a.k0 - b.k0) <= 1e-9 * a.k0 &&
                    std::abs(a.delta_k - b.delta_k) <= 1e-9 * a.delta_k;
  if (!same) throw std::invalid_argument(std::string(what) + ": wavenumber grids differ");
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

Interferogram simulate_interferogram(const ReflectivityProfile& r,
                                     const EmissionSpectrum& s,
                                     const NoiseModel& noise) {
  if (s.values.size() != s.k_grid.m_count)
    throw std::invalid_argument("simulate_interferogram: spectrum length does not match its grid");
  if (r.values.size() != r.z_grid.n_count)
    throw std::invalid_argument("simulate_interferogram: profile length does not match its grid");
  if (noise.sigma < 0.0 || !std::isfinite(noise.sigma))
    throw std::invalid_argument("simulate_interferogram: noise sigma must be non-negative");

  Interferogram out;
  out.k_grid = s.k_grid;
  out.provenance = Provenance::synthetic;
  out.values = apply_system_matrix(r.values, s.k_grid, r.z_grid);
  out.values.array() *= r.z_grid.delta_z * s.values.array();

  if (noise.kind == NoiseKind::additive_gaussian && noise.sigma > 0.0) {
    std::mt19937_64 rng(noise.seed);
    std::normal_distribution<double> gauss(0.0, noise.sigma);
    for (int m = 0; m < out.values.size(); ++m) out.values[m] += gauss(rng);
    out.noise = noise;
  } else if (noise.kind == NoiseKind::additive_gaussian) {
    out.noise = noise;
  }
  return out;
}

GaussianSpectrumResult gaussian_spectrum(const WavenumberGrid& k,
                                         double center_wavelength,
                                         double fwhm_wavelength) {
  if (!(center_wavelength > 0.0))
    throw std::invalid_argument("gaussian_spectrum: center wavelength must be positive");
  if (!(fwhm_wavelength > 0.0))
    throw std::invalid_argument("gaussian_spectrum: FWHM must be positive");

  const double kc = two_pi / center_wavelength;
  const double fwhm_k = two_pi * fwhm_wavelength / (center_wavelength * center_wavelength);
  const double four_ln2 = 4.0 * std::log(2.0);

  GaussianSpectrumResult out;
  out.spectrum.k_grid = k;
  out.spectrum.values.resize(k.m_count);
  for (int m = 0; m < k.m_count; ++m) {
    const double d = (k.k(m) - kc) / fwhm_k;
    out.spectrum.values[m] = std::exp(-four_ln2 * d * d);
  }
  // warn when the half-maximum band [kc - fwhm/2, kc + fwhm/2] misses the grid
  out.coverage_warning = (kc + 0.5 * fwhm_k < k.k0) || (kc - 0.5 * fwhm_k > k.k_max());
  return out;
}

TruncationResult truncate_bandwidth(const Interferogram& i,
                                    const EmissionSpectrum& s,
                                    double fraction) {
  require_same_grid(i.k_grid, s.k_grid, "truncate_bandwidth");
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("truncate_bandwidth: fraction must be in (0, 1]");

  const int m = i.k_grid.m_count;
  const int kept = static_cast<int>(std::ceil(fraction * m));
  if (kept < 8)
    throw std::invalid_argument("truncate_bandwidth: truncated grid would have " +
                                std::to_string(kept) + " samples; at least 8 required");
  if (kept == m) return {i, s};

  const double total = s.values.sum();
  double centroid = 0.5 * (m - 1);
  if (total > 0.0) {
    double acc = 0.0;
    for (int q = 0; q < m; ++q) acc += q * s.values[q];
    centroid = acc / total;
  }
  int start = static_cast<int>(std::lround(centroid)) - kept / 2;
  start = std::max(0, std::min(m - kept, start));

  const WavenumberGrid sub(i.k_grid.k(start), i.k_grid.delta_k, kept);
  TruncationResult out;
  out.interferogram.values = i.values.segment(start, kept);
  out.interferogram.k_grid = sub;
  out.interferogram.provenance = i.provenance;
  out.interferogram.noise = i.noise;
  out.spectrum.values = s.values.segment(start, kept);
  out.spectrum.k_grid = sub;
  return out;
}

}  // namespace octsr
