#pragma once

#include <set>
#include <vector>

#include "octsr/admm.hpp"
#include "octsr/deconv.hpp"
#include "octsr/forward.hpp"
#include "octsr/gaussfit.hpp"
#include "octsr/idft.hpp"

namespace octsr {

/// Two-interface air-wedge ground truth: separations vary linearly across
/// lateral positions.
struct AirWedgeSpec {
  int lateral_count = 1;
  double min_separation = 0.0;  // [m]
  double max_separation = 0.0;  // [m]
  double top_depth = 0.0;       // depth of the upper interface [m]
  double top_reflectivity = 1.0;
  double bottom_reflectivity = 1.0;
};

struct AirWedgePhantom {
  std::vector<ReflectivityProfile> lines;
  std::vector<double> separations;          // intended, linear in index
  std::vector<double> rounded_separations;  // after nearest-node placement
};

/// Places the two reflectors of every A-line on the nearest nodes of z and
/// records both the intended and the rounded separations.
AirWedgePhantom synthesize_air_wedge(const AirWedgeSpec& spec, const SpatialGrid& z);

struct SeparationMeasurement {
  int lateral_index = 0;
  double fitted_separation = 0.0;
  double expected_separation = 0.0;
  double relative_error = 0.0;
  double fit_quality = 0.0;  // coefficient of determination
  bool fit_ok = false;
};

struct ResolutionReport {
  ReconMethod method = ReconMethod::idft;
  double resolution = 0.0;  // +inf when no separation passes
  std::vector<SeparationMeasurement> per_position;
};

/// The 20% rule: scanning from large to small separations, the resolution
/// is the smallest separation passing before the first run of
/// `run_length` consecutive failures.
double resolution_from_measurements(const std::vector<SeparationMeasurement>& ms,
                                    double threshold = 0.2, int run_length = 3);

struct WedgeBenchOptions {
  // Per-A-line l1 weight as a fraction of ||A^T i||_inf; when 0 the
  // absolute AdmmConfig::lambda is used for every line.
  double lambda_relative = 0.0;
  // Object-domain synthesis lattice is this much finer than the ADMM
  // reconstruction lattice, so true positions need not live on any solver
  // grid (mismatched-grid regime; avoids the inverse crime).
  int synthesis_refinement = 16;
  LucyRichardsonOptions lucy;
  TwoGaussianFitOptions fit;
  // Profiles are fit inside [top - margin, top + max_separation + margin].
  double fit_window_margin = 20e-6;
};

/// Full resolution protocol: simulate -> reconstruct (per method) -> fit two
/// Gaussians -> relative error against the linear ground truth -> 20% rule.
/// A-lines are processed in parallel; reports are deterministic.
std::vector<ResolutionReport> resolution_benchmark(
    const AirWedgeSpec& spec, const EmissionSpectrum& s, const NoiseModel& noise,
    const std::set<ReconMethod>& methods, const AdmmConfig& admm_cfg,
    const WedgeBenchOptions& options = {});

}  // namespace octsr
