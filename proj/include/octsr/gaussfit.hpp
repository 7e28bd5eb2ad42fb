#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "octsr/grids.hpp"

namespace octsr {

struct TwoGaussianFitOptions {
  int max_iterations = 200;
  int restarts = 5;          // seeded multiplicative perturbations of the init
  double width_min = 0.0;    // 0 -> defaults to half the grid step
  std::uint64_t seed = 0x5eedULL;
};

struct TwoGaussianFit {
  bool ok = false;       // best-cost run reached a stationary point
  double center1 = 0.0;  // ordered: center1 <= center2
  double center2 = 0.0;
  double amplitude1 = 0.0;
  double amplitude2 = 0.0;
  double width1 = 0.0;
  double width2 = 0.0;
  double r_squared = 0.0;
  double cost = 0.0;
  double separation() const { return center2 - center1; }
};

/// Damped least-squares fit of
///   a1 exp(-((z-c1)/w1)^2) + a2 exp(-((z-c2)/w2)^2)
/// to a non-negative profile, initialized from the two largest local maxima
/// (or peak +- half-width when only one exists).  Parameters are clamped to
/// bounds after every step; the best cost over the restarts wins.
TwoGaussianFit fit_two_gaussians(const Eigen::VectorXd& magnitude,
                                 const SpatialGrid& z,
                                 const TwoGaussianFitOptions& opts = {});

}  // namespace octsr
