#include "octsr/grids.hpp"

#include <cmath>
#include <string>

#include "octsr/kernels.hpp"

namespace octsr {

WavenumberGrid::WavenumberGrid(double k0_, double delta_k_, int m_count_)
    : k0(k0_), delta_k(delta_k_), m_count(m_count_) {
  if (!(k0 > 0.0) || !std::isfinite(k0))
    throw std::invalid_argument("WavenumberGrid: k0 must be positive");
  if (!(delta_k > 0.0) || !std::isfinite(delta_k))
    throw std::invalid_argument("WavenumberGrid: delta_k must be positive");
  if (m_count < 2)
    throw std::invalid_argument("WavenumberGrid: m_count must be >= 2");
}

Eigen::VectorXd WavenumberGrid::nodes() const {
  Eigen::VectorXd out(m_count);
  for (int m = 0; m < m_count; ++m) out[m] = k(m);
  return out;
}

SpatialGrid::SpatialGrid(double z0_, double delta_z_, int n_count_)
    : z0(z0_), delta_z(delta_z_), n_count(n_count_) {
  if (z0 < 0.0 || !std::isfinite(z0))
    throw std::invalid_argument("SpatialGrid: z0 must be non-negative");
  if (!(delta_z > 0.0) || !std::isfinite(delta_z))
    throw std::invalid_argument("SpatialGrid: delta_z must be positive");
  if (n_count < 1)
    throw std::invalid_argument("SpatialGrid: n_count must be >= 1");
}

Eigen::VectorXd SpatialGrid::nodes() const {
  Eigen::VectorXd out(n_count);
  for (int n = 0; n < n_count; ++n) out[n] = z(n);
  return out;
}

WavenumberGrid wavenumber_grid_from_wavelengths(double lambda_min,
                                                double lambda_max,
                                                int m_count) {
  if (!(lambda_min > 0.0) || !(lambda_max > 0.0))
    throw std::invalid_argument("wavenumber grid: wavelengths must be positive");
  if (!(lambda_min < lambda_max))
    throw std::invalid_argument("wavenumber grid: requires lambda_min < lambda_max");
  if (m_count < 2)
    throw std::invalid_argument("wavenumber grid: m_count must be >= 2");
  const double k_lo = two_pi / lambda_max;
  const double k_hi = two_pi / lambda_min;
  return WavenumberGrid(k_lo, (k_hi - k_lo) / (m_count - 1), m_count);
}

SystemMatrix build_system_matrix(const WavenumberGrid& k, const SpatialGrid& z,
                                 std::size_t memory_budget_bytes) {
  const std::size_t bytes =
      static_cast<std::size_t>(k.m_count) * static_cast<std::size_t>(z.n_count) * sizeof(double);
  if (bytes > memory_budget_bytes) {
    throw resource_error(
        "build_system_matrix: dense matrix needs " + std::to_string(bytes) +
        " bytes, budget is " + std::to_string(memory_budget_bytes) +
        "; use apply_system_matrix (implicit operator) instead");
  }
  SystemMatrix sm;
  sm.k_grid = k;
  sm.z_grid = z;
  sm.entries.resize(k.m_count, z.n_count);
  for (int n = 0; n < z.n_count; ++n) {
    const double zn = z.z(n);
    for (int m = 0; m < k.m_count; ++m)
      sm.entries(m, n) = std::cos(2.0 * k.k(m) * zn);
  }
  return sm;
}

Eigen::VectorXd apply_system_matrix(const Eigen::VectorXd& r,
                                    const WavenumberGrid& k,
                                    const SpatialGrid& z) {
  if (r.size() != z.n_count)
    throw std::invalid_argument("apply_system_matrix: profile length " +
                                std::to_string(r.size()) + " does not match grid N=" +
                                std::to_string(z.n_count));
  Eigen::VectorXd y(k.m_count);
  kernels::cosine_forward(k, z, {r.data(), static_cast<std::size_t>(r.size())},
                          {y.data(), static_cast<std::size_t>(y.size())});
  return y;
}

Eigen::VectorXd apply_system_matrix_adjoint(const Eigen::VectorXd& w,
                                            const WavenumberGrid& k,
                                            const SpatialGrid& z) {
  if (w.size() != k.m_count)
    throw std::invalid_argument("apply_system_matrix_adjoint: vector length " +
                                std::to_string(w.size()) + " does not match grid M=" +
                                std::to_string(k.m_count));
  Eigen::VectorXd x(z.n_count);
  kernels::cosine_adjoint(k, z, {w.data(), static_cast<std::size_t>(w.size())},
                          {x.data(), static_cast<std::size_t>(x.size())});
  return x;
}

}  // namespace octsr
