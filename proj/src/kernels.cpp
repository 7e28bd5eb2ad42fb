#include "octsr/kernels.hpp"

#include <cmath>
#include <vector>

namespace octsr::kernels {
namespace {

// Accumulates sum_n coeff[n] * cos(a + n*b) for n in [0, count) via the
// three-term recurrence c_{n+1} = 2 cos(b) c_n - c_{n-1}.  Rounding error
// grows linearly in count, a few orders below the 1e-10 operator contract.
inline double cosine_series_dot(double a, double b, const double* coeff, int count) {
  if (count <= 0) return 0.0;
  double c_prev = std::cos(a);
  double acc = coeff[0] * c_prev;
  if (count == 1) return acc;
  const double twin = 2.0 * std::cos(b);
  double c_cur = std::cos(a + b);
  acc += coeff[1] * c_cur;
  for (int n = 2; n < count; ++n) {
    const double c_next = twin * c_cur - c_prev;
    c_prev = c_cur;
    c_cur = c_next;
    acc += coeff[n] * c_cur;
  }
  return acc;
}

// out[n] += w * cos(a + n*b) for n in [0, count).
inline void cosine_series_axpy(double a, double b, double w, double* out, int count) {
  if (count <= 0) return;
  double c_prev = std::cos(a);
  out[0] += w * c_prev;
  if (count == 1) return;
  const double twin = 2.0 * std::cos(b);
  double c_cur = std::cos(a + b);
  out[1] += w * c_cur;
  for (int n = 2; n < count; ++n) {
    const double c_next = twin * c_cur - c_prev;
    c_prev = c_cur;
    c_cur = c_next;
    out[n] += w * c_cur;
  }
}

}  // namespace

void cosine_forward(const WavenumberGrid& k, const SpatialGrid& z,
                    std::span<const double> x, std::span<double> y) {
#pragma omp parallel for schedule(static)
  for (int m = 0; m < k.m_count; ++m) {
    const double km = k.k(m);
    y[m] = cosine_series_dot(2.0 * km * z.z0, 2.0 * km * z.delta_z, x.data(), z.n_count);
  }
}

void cosine_forward_serial(const WavenumberGrid& k, const SpatialGrid& z,
                           std::span<const double> x, std::span<double> y) {
  for (int m = 0; m < k.m_count; ++m) {
    const double km = k.k(m);
    double acc = 0.0;
    for (int n = 0; n < z.n_count; ++n)
      acc += x[n] * std::cos(2.0 * km * z.z(n));
    y[m] = acc;
  }
}

void cosine_adjoint(const WavenumberGrid& k, const SpatialGrid& z,
                    std::span<const double> w, std::span<double> x) {
#pragma omp parallel for schedule(static)
  for (int n = 0; n < z.n_count; ++n) {
    const double zn = z.z(n);
    x[n] = cosine_series_dot(2.0 * k.k0 * zn, 2.0 * k.delta_k * zn, w.data(), k.m_count);
  }
}

void cosine_adjoint_serial(const WavenumberGrid& k, const SpatialGrid& z,
                           std::span<const double> w, std::span<double> x) {
  for (int n = 0; n < z.n_count; ++n) {
    const double zn = z.z(n);
    double acc = 0.0;
    for (int m = 0; m < k.m_count; ++m)
      acc += w[m] * std::cos(2.0 * k.k(m) * zn);
    x[n] = acc;
  }
}

double cosine_lattice_sum(double kappa, const SpatialGrid& z) {
  // sum_n cos(2 kappa (z0 + n dz)) = cos(2 kappa zc) sin(N x)/sin(x) with
  // x = kappa dz and zc the lattice midpoint.  Near the zeros of sin(x) the
  // product N*x rounds too coarsely for the direct ratio, so x is reduced
  // modulo pi first (IEEE remainder is exact) and the period signs are
  // reattached: sin(N(p pi + r)) = (-1)^{N p} sin(N r).
  const double x = kappa * z.delta_z;
  const double r = std::remainder(x, std::numbers::pi);
  const long long p = std::llround((x - r) / std::numbers::pi);
  const double den = std::sin(r);
  const long long n = z.n_count;
  const double num_sign = ((n * p) & 1) ? -1.0 : 1.0;
  const double den_sign = (p & 1) ? -1.0 : 1.0;
  const double mid_phase = 2.0 * kappa * (z.z0 + 0.5 * (n - 1) * z.delta_z);
  if (den == 0.0) return num_sign * den_sign * n * std::cos(2.0 * kappa * z.z0);
  return std::cos(mid_phase) * (num_sign * std::sin(n * r)) / (den_sign * den);
}

Eigen::MatrixXd gram_spectral(const WavenumberGrid& k, const SpatialGrid& z) {
  const int m = k.m_count;
  // cos(2 k_p z) cos(2 k_q z) = [cos(2(k_p-k_q)z) + cos(2(k_p+k_q)z)] / 2,
  // so only 3M-1 distinct lattice sums appear.
  std::vector<double> diff(m), sum(2 * m - 1);
  for (int j = 0; j < m; ++j) diff[j] = cosine_lattice_sum(j * k.delta_k, z);
  for (int j = 0; j < 2 * m - 1; ++j)
    sum[j] = cosine_lattice_sum(2.0 * k.k0 + j * k.delta_k, z);

  Eigen::MatrixXd g(m, m);
#pragma omp parallel for schedule(static)
  for (int p = 0; p < m; ++p) {
    for (int q = 0; q < m; ++q)
      g(p, q) = 0.5 * (diff[std::abs(p - q)] + sum[p + q]);
  }
  return g;
}

Eigen::MatrixXd gram_spectral_serial(const WavenumberGrid& k, const SpatialGrid& z) {
  const int m = k.m_count;
  Eigen::MatrixXd g(m, m);
  for (int p = 0; p < m; ++p) {
    for (int q = p; q < m; ++q) {
      double acc = 0.0;
      for (int n = 0; n < z.n_count; ++n) {
        const double zn = z.z(n);
        acc += std::cos(2.0 * k.k(p) * zn) * std::cos(2.0 * k.k(q) * zn);
      }
      g(p, q) = acc;
      g(q, p) = acc;
    }
  }
  return g;
}

Eigen::MatrixXd gram_object(const WavenumberGrid& k, const SpatialGrid& z,
                            std::span<const double> w) {
  const int n = z.n_count;
  // Entries depend on z_n - z_n' (Toeplitz part, z0 drops out) and on
  // z_n + z_n' (Hankel part).  Both tables are O(M N) to fill.
  std::vector<double> toep(n, 0.0), hank(2 * n - 1, 0.0);
  for (int m = 0; m < k.m_count; ++m) {
    const double km2 = 2.0 * k.k(m);
    cosine_series_axpy(0.0, km2 * z.delta_z, w[m], toep.data(), n);
    cosine_series_axpy(2.0 * km2 * z.z0, km2 * z.delta_z, w[m], hank.data(), 2 * n - 1);
  }

  Eigen::MatrixXd g(n, n);
#pragma omp parallel for schedule(static)
  for (int p = 0; p < n; ++p) {
    for (int q = 0; q < n; ++q)
      g(p, q) = 0.5 * (toep[std::abs(p - q)] + hank[p + q]);
  }
  return g;
}

Eigen::MatrixXd gram_object_serial(const WavenumberGrid& k, const SpatialGrid& z,
                                   std::span<const double> w) {
  const int n = z.n_count;
  Eigen::MatrixXd g(n, n);
  for (int p = 0; p < n; ++p) {
    for (int q = p; q < n; ++q) {
      double acc = 0.0;
      for (int m = 0; m < k.m_count; ++m) {
        const double km2 = 2.0 * k.k(m);
        acc += w[m] * std::cos(km2 * z.z(p)) * std::cos(km2 * z.z(q));
      }
      g(p, q) = acc;
      g(q, p) = acc;
    }
  }
  return g;
}

}  // namespace octsr::kernels
