#include "octsr/idft.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "octsr/fft.hpp"

namespace octsr {

const char* to_string(ReconMethod m) {
  switch (m) {
    case ReconMethod::idft: return "idft";
    case ReconMethod::idft_deconv: return "idft-deconv";
    case ReconMethod::admm: return "admm";
  }
  return "unknown";
}

ReconMethod recon_method_from_string(const std::string& name) {
  if (name == "idft") return ReconMethod::idft;
  if (name == "idft-deconv") return ReconMethod::idft_deconv;
  if (name == "admm") return ReconMethod::admm;
  throw std::invalid_argument("unknown reconstruction method '" + name +
                              "' (expected idft | idft-deconv | admm)");
}

ReconResult reconstruct_idft(const Interferogram& i, double z_offset) {
  const int m_count = i.k_grid.m_count;
  if (m_count < 8)
    throw std::invalid_argument("reconstruct_idft: needs at least 8 spectral samples");
  if (i.values.size() != m_count)
    throw std::invalid_argument("reconstruct_idft: interferogram length does not match grid");
  if (z_offset < 0.0)
    throw std::invalid_argument("reconstruct_idft: z_offset must be non-negative");

  const double step = i.k_grid.recon_step();
  Eigen::VectorXcd in(m_count);
  if (z_offset != 0.0) {
    for (int q = 0; q < m_count; ++q) {
      const double phase = 2.0 * z_offset * i.k_grid.delta_k * q;
      in[q] = i.values[q] * std::complex<double>(std::cos(phase), std::sin(phase));
    }
  } else {
    in = i.values.cast<std::complex<double>>();
  }

  Eigen::VectorXcd full = inverse_dft(in);
  const int half = m_count / 2;
  ReconResult out;
  out.method = ReconMethod::idft;
  out.z_grid = SpatialGrid(z_offset, step, half);
  out.values.resize(half);
  for (int m = 0; m < half; ++m) {
    const double phase = 2.0 * i.k_grid.k0 * (z_offset + m * step);
    out.values[m] = full[m] * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  out.magnitude = out.values.cwiseAbs();
  out.diagnostics["m_count"] = m_count;
  out.diagnostics["recon_step_m"] = step;
  return out;
}

PsfReport psf_report(const EmissionSpectrum& s) {
  const int m_count = s.k_grid.m_count;
  if (s.values.size() != m_count)
    throw std::invalid_argument("psf_report: spectrum length does not match grid");
  if (s.values.maxCoeff() <= 0.0)
    throw std::invalid_argument("psf_report: spectrum has no positive entry");

  PsfReport out;
  out.z_grid = SpatialGrid(0.0, s.k_grid.recon_step(), m_count);
  out.psf = inverse_dft(s.values).cwiseAbs();

  // sub-pixel FWHM from an 8x zero-padded transform
  constexpr int pad = 8;
  const int p = pad * m_count;
  Eigen::VectorXd padded = Eigen::VectorXd::Zero(p);
  padded.head(m_count) = s.values;
  Eigen::VectorXd hp = inverse_dft(padded).cwiseAbs();
  const double pad_step = s.k_grid.recon_step() / pad;

  int peak = 0;
  hp.maxCoeff(&peak);
  const double half = 0.5 * hp[peak];

  auto crossing = [&](int direction) -> double {
    int idx = peak;
    for (int steps = 1; steps < p; ++steps) {
      const int next = ((idx + direction) % p + p) % p;
      if (hp[next] <= half) {
        const double frac = (hp[idx] - half) / (hp[idx] - hp[next]);
        return (steps - 1) + frac;
      }
      idx = next;
    }
    throw std::invalid_argument("psf_report: spectrum too narrow to measure a width");
  };

  out.fwhm = (crossing(+1) + crossing(-1)) * pad_step;
  out.peak_position = peak * pad_step;
  return out;
}

namespace {

// sin(M x)/sin(x), evaluated after exact reduction of x modulo pi so the
// numerator argument M*x keeps full precision near the kernel peaks; the
// removable singularities take their limit value +-M.
double dirichlet_ratio(double x, int m) {
  const double r = std::remainder(x, std::numbers::pi);
  const long long p = std::llround((x - r) / std::numbers::pi);
  const double den = std::sin(r);
  const long long mm = m;
  const double num_sign = ((mm * p) & 1) ? -1.0 : 1.0;
  const double den_sign = (p & 1) ? -1.0 : 1.0;
  if (den == 0.0) return num_sign * den_sign * m;
  return (num_sign * std::sin(m * r)) / (den_sign * den);
}

}  // namespace

DirichletResponse dirichlet_response(double z_source, const WavenumberGrid& k) {
  if (z_source < 0.0)
    throw std::invalid_argument("dirichlet_response: source position must be non-negative");
  const int m_count = k.m_count;
  DirichletResponse out;
  out.source_position = z_source;
  out.response.resize(m_count);
  out.kernel_magnitude.resize(m_count);
  const double carrier = -2.0 * k.center() * z_source;
  const std::complex<double> phase(std::cos(carrier), std::sin(carrier));
  const double base = k.delta_k * z_source;
  for (int m = 0; m < m_count; ++m) {
    const double d = dirichlet_ratio(base - m * std::numbers::pi / m_count, m_count);
    out.response[m] = phase * d;
    out.kernel_magnitude[m] = std::abs(d);
  }
  return out;
}

Eigen::MatrixXd shift_variance_map(std::span<const double> z_values,
                                   const WavenumberGrid& k) {
  if (z_values.empty())
    throw std::invalid_argument("shift_variance_map: needs at least one source position");
  Eigen::MatrixXd map(static_cast<int>(z_values.size()), k.m_count);
  for (int row = 0; row < map.rows(); ++row)
    map.row(row) = dirichlet_response(z_values[row], k).kernel_magnitude.transpose();
  return map;
}

}  // namespace octsr
