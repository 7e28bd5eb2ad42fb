#include "octsr/gaussfit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

namespace octsr {
namespace {

using Params = Eigen::Matrix<double, 6, 1>;  // a1 c1 w1 a2 c2 w2

Eigen::VectorXd model(const Params& p, const Eigen::VectorXd& z) {
  return (p[0] * (-((z.array() - p[1]) / p[2]).square()).exp() +
          p[3] * (-((z.array() - p[4]) / p[5]).square()).exp())
      .matrix();
}

void jacobian(const Params& p, const Eigen::VectorXd& z, Eigen::MatrixXd& j) {
  const auto d1 = (z.array() - p[1]) / p[2];
  const auto d2 = (z.array() - p[4]) / p[5];
  const Eigen::ArrayXd e1 = (-d1.square()).exp();
  const Eigen::ArrayXd e2 = (-d2.square()).exp();
  j.col(0) = e1.matrix();
  j.col(1) = (p[0] * e1 * 2.0 * d1 / p[2]).matrix();
  j.col(2) = (p[0] * e1 * 2.0 * d1.square() / p[2]).matrix();
  j.col(3) = e2.matrix();
  j.col(4) = (p[3] * e2 * 2.0 * d2 / p[5]).matrix();
  j.col(5) = (p[3] * e2 * 2.0 * d2.square() / p[5]).matrix();
}

struct LmOutcome {
  Params p;
  double cost = 0.0;
  bool stationary = false;
};

LmOutcome levenberg_fit(const Eigen::VectorXd& y, const Eigen::VectorXd& z,
                        Params p, const Params& lo, const Params& hi,
                        int max_iterations) {
  p = p.cwiseMax(lo).cwiseMin(hi);
  Eigen::VectorXd r = model(p, z) - y;
  double cost = 0.5 * r.squaredNorm();
  Eigen::MatrixXd j(z.size(), 6);
  double mu = 1e-3;
  bool stationary = false;

  for (int it = 0; it < max_iterations; ++it) {
    jacobian(p, z, j);
    Eigen::Matrix<double, 6, 6> jtj = j.transpose() * j;
    Params g = j.transpose() * r;
    bool stepped = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      Eigen::Matrix<double, 6, 6> a = jtj;
      for (int d = 0; d < 6; ++d) a(d, d) += mu * std::max(jtj(d, d), 1e-30);
      const Params delta = a.ldlt().solve(-g);
      Params pn = (p + delta).cwiseMax(lo).cwiseMin(hi);
      Eigen::VectorXd rn = model(pn, z) - y;
      const double cn = 0.5 * rn.squaredNorm();
      if (cn < cost) {
        const double rel =
            ((pn - p).cwiseAbs().array() / p.cwiseAbs().array().max(1e-30)).maxCoeff();
        p = pn;
        r = std::move(rn);
        cost = cn;
        mu = std::max(mu / 3.0, 1e-12);
        stepped = true;
        if (rel < 1e-10) stationary = true;
        break;
      }
      mu = std::min(mu * 4.0, 1e14);
    }
    if (!stepped) {
      stationary = true;  // damping exhausted: no descent direction left
      break;
    }
    if (stationary) break;
  }
  return {p, cost, stationary};
}

std::vector<int> local_maxima_by_height(const Eigen::VectorXd& y) {
  std::vector<int> peaks;
  for (int i = 1; i + 1 < y.size(); ++i)
    if (y[i] > y[i - 1] && y[i] >= y[i + 1]) peaks.push_back(i);
  std::sort(peaks.begin(), peaks.end(), [&](int a, int b) { return y[a] > y[b]; });
  return peaks;
}

int half_width_samples(const Eigen::VectorXd& y, int i) {
  const double hm = 0.5 * y[i];
  int left = 0, right = 0;
  while (i - left - 1 >= 0 && y[i - left - 1] > hm) ++left;
  while (i + right + 1 < y.size() && y[i + right + 1] > hm) ++right;
  return std::max(left + right, 1);
}

}  // namespace

TwoGaussianFit fit_two_gaussians(const Eigen::VectorXd& magnitude,
                                 const SpatialGrid& z,
                                 const TwoGaussianFitOptions& opts) {
  if (magnitude.size() != z.n_count)
    throw std::invalid_argument("fit_two_gaussians: profile length does not match grid");
  if (magnitude.size() < 6)
    throw std::invalid_argument("fit_two_gaussians: needs at least 6 samples");
  if (!magnitude.allFinite() || magnitude.minCoeff() < 0.0)
    throw std::invalid_argument("fit_two_gaussians: profile must be finite and non-negative");

  const Eigen::VectorXd zn = z.nodes();
  const double dz = z.delta_z;
  const double span = z.support_length();
  const double width_min = opts.width_min > 0.0 ? opts.width_min : 0.5 * dz;
  const double inv_two_sqrt_ln2 = 1.0 / (2.0 * std::sqrt(std::log(2.0)));

  double c1, c2, a1, a2, w0;
  const auto peaks = local_maxima_by_height(magnitude);
  if (peaks.size() >= 2) {
    c1 = zn[peaks[0]];
    c2 = zn[peaks[1]];
    a1 = magnitude[peaks[0]];
    a2 = magnitude[peaks[1]];
    w0 = std::max(half_width_samples(magnitude, peaks[0]) * dz * inv_two_sqrt_ln2, width_min);
  } else {
    int pk = 0;
    magnitude.maxCoeff(&pk);
    const double hw = half_width_samples(magnitude, pk) * dz;
    c1 = zn[pk] - 0.5 * hw;
    c2 = zn[pk] + 0.5 * hw;
    a1 = a2 = magnitude[pk];
    w0 = std::max(hw * inv_two_sqrt_ln2, width_min);
  }

  Params lo, hi, p0;
  lo << 0.0, zn[0] - span, width_min, 0.0, zn[0] - span, width_min;
  hi << std::numeric_limits<double>::infinity(), zn[zn.size() - 1] + span, 2.0 * span,
      std::numeric_limits<double>::infinity(), zn[zn.size() - 1] + span, 2.0 * span;
  p0 << a1, c1, w0, a2, c2, w0;

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  LmOutcome best;
  bool have_best = false;
  for (int trial = 0; trial <= opts.restarts; ++trial) {
    Params pt = p0;
    if (trial > 0)
      for (int d = 0; d < 6; ++d) pt[d] = p0[d] * (1.0 + 0.3 * gauss(rng));
    LmOutcome run = levenberg_fit(magnitude, zn, pt, lo, hi, opts.max_iterations);
    if (!have_best || run.cost < best.cost) {
      best = run;
      have_best = true;
    }
  }

  // a component whose amplitude degenerates carries no position information;
  // collapse it onto the dominant one so the measured separation reads 0
  if (std::min(best.p[0], best.p[3]) < 0.02 * std::max(best.p[0], best.p[3])) {
    if (best.p[0] >= best.p[3]) {
      best.p[4] = best.p[1];
      best.p[5] = best.p[2];
    } else {
      best.p[1] = best.p[4];
      best.p[2] = best.p[5];
    }
  }

  TwoGaussianFit fit;
  fit.ok = best.stationary;
  fit.cost = best.cost;
  const bool swap = best.p[1] > best.p[4];
  fit.amplitude1 = swap ? best.p[3] : best.p[0];
  fit.center1 = swap ? best.p[4] : best.p[1];
  fit.width1 = swap ? best.p[5] : best.p[2];
  fit.amplitude2 = swap ? best.p[0] : best.p[3];
  fit.center2 = swap ? best.p[1] : best.p[4];
  fit.width2 = swap ? best.p[2] : best.p[5];

  const double mean = magnitude.mean();
  const double ss_tot = (magnitude.array() - mean).square().sum();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - 2.0 * best.cost / ss_tot : 0.0;
  return fit;
}

}  // namespace octsr
