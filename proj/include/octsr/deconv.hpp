#pragma once

#include "octsr/idft.hpp"

namespace octsr {

struct LucyRichardsonOptions {
  int iterations = 20;
  // Early stop once the largest multiplicative update deviates from 1 by
  // less than this.
  double update_tolerance = 1e-4;
};

/// Multiplicative Lucy-Richardson deconvolution of an IDFT magnitude
/// reconstruction with the (unit-sum normalized) axial PSF.  Boundary
/// handling is reflective padding of one kernel length.
ReconResult lucy_richardson(const ReconResult& recon, const PsfReport& psf,
                            const LucyRichardsonOptions& opts = {});

}  // namespace octsr
