#include "octsr/deconv.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace octsr {
namespace {

// reflect-101 fold of an out-of-range index
inline int reflect_index(int idx, int n) {
  while (idx < 0 || idx >= n) {
    if (idx < 0) idx = -idx;
    if (idx >= n) idx = 2 * (n - 1) - idx;
  }
  return idx;
}

void correlate_reflect(const Eigen::VectorXd& x, const std::vector<double>& ker,
                       Eigen::VectorXd& out) {
  const int n = static_cast<int>(x.size());
  const int h = static_cast<int>(ker.size()) / 2;
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = -h; j <= h; ++j)
      acc += ker[j + h] * x[reflect_index(i + j, n)];
    out[i] = acc;
  }
}

}  // namespace

ReconResult lucy_richardson(const ReconResult& recon, const PsfReport& psf,
                            const LucyRichardsonOptions& opts) {
  if (recon.method != ReconMethod::idft)
    throw std::invalid_argument("lucy_richardson: input must be an idft reconstruction");
  if (opts.iterations < 1)
    throw std::invalid_argument("lucy_richardson: iterations must be >= 1");
  if (!psf.psf.allFinite())
    throw std::invalid_argument("lucy_richardson: PSF has non-finite entries");
  if (psf.psf.sum() <= 0.0)
    throw std::invalid_argument("lucy_richardson: PSF has no mass");
  if (std::abs(psf.z_grid.delta_z - recon.z_grid.delta_z) >
      1e-9 * recon.z_grid.delta_z)
    throw std::invalid_argument("lucy_richardson: PSF and reconstruction lattices differ");

  // The stored PSF peaks at lattice index 0 and wraps; cut a symmetric
  // window of seven widths around the peak (enough to include the near
  // sidelobes of a windowed source) and normalize it to unit sum.
  const int m = static_cast<int>(psf.psf.size());
  const int half = std::min(m / 2 - 1,
      std::max(4, static_cast<int>(std::ceil(7.0 * psf.fwhm / psf.z_grid.delta_z))));
  std::vector<double> ker(2 * half + 1);
  for (int j = -half; j <= half; ++j)
    ker[j + half] = psf.psf[(j % m + m) % m];
  double mass = 0.0;
  for (double v : ker) mass += v;
  if (mass <= 0.0)
    throw std::invalid_argument("lucy_richardson: PSF window has no mass");
  for (double& v : ker) v /= mass;

  const Eigen::VectorXd& data = recon.magnitude;
  const int n = static_cast<int>(data.size());
  Eigen::VectorXd est = data;
  Eigen::VectorXd blur(n), ratio(n), update(n);

  int it = 0;
  double worst_update = 0.0;
  for (it = 1; it <= opts.iterations; ++it) {
    correlate_reflect(est, ker, blur);
    for (int i = 0; i < n; ++i)
      ratio[i] = data[i] / std::max(blur[i], 1e-300);
    correlate_reflect(ratio, ker, update);  // kernel is symmetric
    worst_update = 0.0;
    for (int i = 0; i < n; ++i) {
      est[i] *= update[i];
      worst_update = std::max(worst_update, std::abs(update[i] - 1.0));
    }
    if (worst_update < opts.update_tolerance) break;
  }

  ReconResult out;
  out.method = ReconMethod::idft_deconv;
  out.z_grid = recon.z_grid;
  out.magnitude = est;
  out.values = est.cast<std::complex<double>>();
  out.diagnostics = recon.diagnostics;
  out.diagnostics["lr_iterations"] = std::min(it, opts.iterations);
  out.diagnostics["lr_final_update_deviation"] = worst_update;
  return out;
}

}  // namespace octsr
