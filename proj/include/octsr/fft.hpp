#pragma once

#include <Eigen/Dense>

namespace octsr {

/// out[m] = (1/M) sum_q exp(+j 2 pi m q / M) x[q].
/// FFTW backend with plan creation serialized; safe to call concurrently.
Eigen::VectorXcd inverse_dft(const Eigen::VectorXcd& x);
Eigen::VectorXcd inverse_dft(const Eigen::VectorXd& x);

}  // namespace octsr
