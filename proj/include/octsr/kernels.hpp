#pragma once

#include <span>

#include <Eigen/Dense>

#include "octsr/grids.hpp"

// Hot inner loops shared by the forward model and the solvers.
//
// Each kernel comes in two flavours: the OpenMP-parallel production version
// and a straightforward serial reference (suffix _serial) that evaluates
// every cosine directly with std::cos.  The parallel versions partition the
// output index so each element is accumulated by exactly one thread in a
// fixed order; results are bit-identical across runs and thread counts.
// The reference versions double as an independent route for the unit tests;
// benchmarks/ compares the two.

namespace octsr::kernels {

/// y[m] = sum_n cos(2 k_m z_n) x[n]
void cosine_forward(const WavenumberGrid& k, const SpatialGrid& z,
                    std::span<const double> x, std::span<double> y);
void cosine_forward_serial(const WavenumberGrid& k, const SpatialGrid& z,
                           std::span<const double> x, std::span<double> y);

/// x[n] = sum_m cos(2 k_m z_n) w[m]
void cosine_adjoint(const WavenumberGrid& k, const SpatialGrid& z,
                    std::span<const double> w, std::span<double> x);
void cosine_adjoint_serial(const WavenumberGrid& k, const SpatialGrid& z,
                           std::span<const double> w, std::span<double> x);

/// sum_{n=0}^{N-1} cos(2 kappa z_n) in closed form (geometric sum).
double cosine_lattice_sum(double kappa, const SpatialGrid& z);

/// G = C C^T, an M x M matrix with entries
///   G(p,q) = sum_n cos(2 k_p z_n) cos(2 k_q z_n).
/// Entries depend only on k_p - k_q and k_p + k_q, so the lattice sums are
/// evaluated once per diagonal and the assembly is O(M^2).
Eigen::MatrixXd gram_spectral(const WavenumberGrid& k, const SpatialGrid& z);
Eigen::MatrixXd gram_spectral_serial(const WavenumberGrid& k, const SpatialGrid& z);

/// G = C^T diag(w) C, an N x N matrix with entries
///   G(n,n') = sum_m w[m] cos(2 k_m z_n) cos(2 k_m z_n').
/// Entries reduce to weighted sums over k of cos(2 k_m d) with
/// d = (n-n')*delta_z or d = 2 z0 + (n+n')*delta_z (Toeplitz + Hankel
/// structure); the O(M N) tables are built once, the assembly is O(N^2).
Eigen::MatrixXd gram_object(const WavenumberGrid& k, const SpatialGrid& z,
                            std::span<const double> w);
Eigen::MatrixXd gram_object_serial(const WavenumberGrid& k, const SpatialGrid& z,
                                   std::span<const double> w);

}  // namespace octsr::kernels
