#include "roughwave/fft.h"

#include <mutex>

#include <fftw3.h>

namespace roughwave {
namespace {

// Plan creation in FFTW is not thread-safe; execution is.
std::mutex& PlannerMutex() {
  static std::mutex m;
  return m;
}

std::vector<double> R2r(const std::vector<double>& x, fftw_r2r_kind kind) {
  const int n = static_cast<int>(x.size());
  std::vector<double> in(x), out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_r2r_1d(n, in.data(), out.data(), kind, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

}  // namespace

std::vector<std::complex<double>> RealFft(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> in(x);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(),
                                reinterpret_cast<fftw_complex*>(out.data()),
                                FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> InverseRealFft(const std::vector<std::complex<double>>& X,
                                   int n) {
  std::vector<std::complex<double>> in(X);
  std::vector<double> out(n);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_dft_c2r_1d(n, reinterpret_cast<fftw_complex*>(in.data()),
                                out.data(), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }
  for (double& v : out) v /= n;
  return out;
}

std::vector<double> Dct2(const std::vector<double>& x) { return R2r(x, FFTW_REDFT10); }

std::vector<double> Dct3(const std::vector<double>& x) { return R2r(x, FFTW_REDFT01); }

}  // namespace roughwave
