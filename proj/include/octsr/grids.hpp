#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <numbers>
#include <stdexcept>

namespace octsr {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Uniform sampling lattice in wavenumber space: k_m = k0 + m*delta_k.
struct WavenumberGrid {
  double k0 = 0.0;       // starting wavenumber [rad/m]
  double delta_k = 0.0;  // sampling interval [rad/m]
  int m_count = 0;       // number of spectral samples M

  WavenumberGrid() = default;
  WavenumberGrid(double k0_, double delta_k_, int m_count_);

  double k(int m) const { return k0 + m * delta_k; }
  double k_max() const { return k(m_count - 1); }
  double span() const { return (m_count - 1) * delta_k; }
  double center() const { return k0 + 0.5 * (m_count - 1) * delta_k; }
  double lambda_min() const { return two_pi / k_max(); }
  double lambda_max() const { return two_pi / k0; }

  /// Step of the inverse-DFT reconstruction lattice.  An M-point inverse
  /// transform of the spectral samples tiles depth with period pi/delta_k,
  /// so the lattice step is pi/(M*delta_k) and M/2 samples cover the
  /// unique positive depths of a real-valued spectrum.
  double recon_step() const { return std::numbers::pi / (m_count * delta_k); }
  double positive_depth_range() const { return (m_count / 2) * recon_step(); }

  Eigen::VectorXd nodes() const;
};

/// Uniform sampling lattice in object space: z_n = z0 + n*delta_z.
struct SpatialGrid {
  double z0 = 0.0;       // support start [m]
  double delta_z = 0.0;  // grid step [m]
  int n_count = 0;       // number of spatial samples N

  SpatialGrid() = default;
  SpatialGrid(double z0_, double delta_z_, int n_count_);

  double z(int n) const { return z0 + n * delta_z; }
  double support_length() const { return n_count * delta_z; }
  double support_end() const { return z0 + n_count * delta_z; }

  Eigen::VectorXd nodes() const;
};

/// Dense cosine system matrix with entries (m,n) = cos(2 k_m z_n).
struct SystemMatrix {
  Eigen::MatrixXd entries;
  WavenumberGrid k_grid;
  SpatialGrid z_grid;
};

/// Thrown when a requested dense allocation exceeds the configured budget.
class resource_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_matrix_budget = std::size_t{512} << 20;

/// Builds a wavenumber grid spanning [2pi/lambda_max, 2pi/lambda_min] with
/// m_count samples uniform in k.
WavenumberGrid wavenumber_grid_from_wavelengths(double lambda_min,
                                                double lambda_max,
                                                int m_count);

SystemMatrix build_system_matrix(const WavenumberGrid& k, const SpatialGrid& z,
                                 std::size_t memory_budget_bytes = default_matrix_budget);

/// Matrix-free product C*r; never materializes the M x N matrix.
Eigen::VectorXd apply_system_matrix(const Eigen::VectorXd& r,
                                    const WavenumberGrid& k,
                                    const SpatialGrid& z);

/// Matrix-free adjoint product C^T*w.
Eigen::VectorXd apply_system_matrix_adjoint(const Eigen::VectorXd& w,
                                            const WavenumberGrid& k,
                                            const SpatialGrid& z);

}  // namespace octsr
