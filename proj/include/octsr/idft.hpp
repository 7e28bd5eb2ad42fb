#pragma once

#include <map>
#include <span>
#include <string>

#include <Eigen/Dense>

#include "octsr/forward.hpp"
#include "octsr/grids.hpp"

namespace octsr {

enum class ReconMethod { idft, idft_deconv, admm };

const char* to_string(ReconMethod m);
ReconMethod recon_method_from_string(const std::string& name);

struct ReconResult {
  Eigen::VectorXcd values;
  Eigen::VectorXd magnitude;
  SpatialGrid z_grid;
  ReconMethod method = ReconMethod::idft;
  std::map<std::string, double> diagnostics;
};

/// Inverse-DFT reconstruction on the implicit lattice z'_m = z_offset +
/// m*pi/(M*delta_k).  Only the M/2 unique positive-depth samples are
/// reported; the mirror half is suppressed.  Implemented as an FFT plus the
/// carrier phase exp(j 2 k0 z'_m); equals the explicit matrix product with
/// entries exp(j 2 z'_m k_q)/M.
ReconResult reconstruct_idft(const Interferogram& i, double z_offset = 0.0);

struct PsfReport {
  Eigen::VectorXd psf;   // |IDFT(s)| on the full reconstruction lattice
  SpatialGrid z_grid;
  double fwhm = 0.0;     // measured on an 8x zero-padded transform
  double peak_position = 0.0;
};

/// Axial point spread function of the system: magnitude of the inverse
/// transform of the emission spectrum.  FWHM by linear interpolation
/// between the half-maximum crossings around the global peak.
PsfReport psf_report(const EmissionSpectrum& s);

struct DirichletResponse {
  double source_position = 0.0;
  Eigen::VectorXcd response;         // g_{z_n,+}(z'_m) over m
  Eigen::VectorXd kernel_magnitude;  // |response|
};

/// Closed-form positive-half reconstruction response of a point source at
/// z_source:
///   g(z'_m) = exp(-j 2 (k0 + (M-1)/2 dk) z_source)
///             * sin(M (dk z_source - m pi / M)) / sin(dk z_source - m pi / M)
/// with the removable singularities evaluated by their limit.
DirichletResponse dirichlet_response(double z_source, const WavenumberGrid& k);

/// Row per source position of |g_{z,+}(z'_m)|, for contour plotting.
Eigen::MatrixXd shift_variance_map(std::span<const double> z_values,
                                   const WavenumberGrid& k);

}  // namespace octsr
