#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "octsr/grids.hpp"

namespace octsr {

/// Sampled source power spectrum; acts as the optical transfer function
/// along depth.  By convention the factor 2 of the cross-term is folded in,
/// so the forward model is exactly i = dz * (s o C r) + n.
struct EmissionSpectrum {
  Eigen::VectorXd values;  // non-negative, length M
  WavenumberGrid k_grid;
};

/// Real-valued reflectivity profile on a spatial grid; the unknown.
struct ReflectivityProfile {
  Eigen::VectorXd values;  // length N
  SpatialGrid z_grid;
};

enum class NoiseKind { none, additive_gaussian };

struct NoiseModel {
  NoiseKind kind = NoiseKind::none;
  double sigma = 0.0;       // standard deviation, interferogram units
  std::uint64_t seed = 0;
};

/// Deterministic per-stream seed derivation (splitmix-style), used to give
/// every A-line of a batch its own independent, reproducible stream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

enum class Provenance { synthetic, file };

struct Interferogram {
  Eigen::VectorXd values;  // length M
  WavenumberGrid k_grid;
  Provenance provenance = Provenance::synthetic;
  std::optional<NoiseModel> noise;
};

/// i[m] = delta_z * s[m] * sum_n r[n] cos(2 k_m z_n) + n[m]
Interferogram simulate_interferogram(const ReflectivityProfile& r,
                                     const EmissionSpectrum& s,
                                     const NoiseModel& noise);

struct GaussianSpectrumResult {
  EmissionSpectrum spectrum;
  // Set when the half-maximum band misses the grid span entirely; the
  // spectrum is still returned.
  bool coverage_warning = false;
};

/// Gaussian in k centered at 2*pi/center_wavelength, peak value 1, with
/// FWHM in k of 2*pi*fwhm_wavelength/center_wavelength^2.
GaussianSpectrumResult gaussian_spectrum(const WavenumberGrid& k,
                                         double center_wavelength,
                                         double fwhm_wavelength);

struct TruncationResult {
  Interferogram interferogram;
  EmissionSpectrum spectrum;
};

/// Keeps the central ceil(fraction*M) samples, centered on the spectrum's
/// power-weighted centroid, and returns the consistent shortened grid.
TruncationResult truncate_bandwidth(const Interferogram& i,
                                    const EmissionSpectrum& s,
                                    double fraction);

}  // namespace octsr
