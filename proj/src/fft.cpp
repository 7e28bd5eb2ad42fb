#include "octsr/fft.hpp"

#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace octsr {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Eigen::VectorXcd inverse_dft(const Eigen::VectorXcd& x) {
  const int n = static_cast<int>(x.size());
  if (n < 1) throw std::invalid_argument("inverse_dft: empty input");
  Eigen::VectorXcd in = x;
  Eigen::VectorXcd out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                            reinterpret_cast<fftw_complex*>(out.data()),
                            FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  if (plan == nullptr) throw std::runtime_error("inverse_dft: FFTW planning failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  out /= static_cast<double>(n);
  return out;
}

Eigen::VectorXcd inverse_dft(const Eigen::VectorXd& x) {
  return inverse_dft(Eigen::VectorXcd(x.cast<std::complex<double>>()));
}

}  // namespace octsr
