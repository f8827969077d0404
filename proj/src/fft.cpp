#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace qlwave::detail {
namespace {

// The FFTW planner is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct RealPlans {
  explicit RealPlans(int n) : n(n) {
    real = fftw_alloc_real(static_cast<size_t>(n));
    spec = fftw_alloc_complex(static_cast<size_t>(n / 2 + 1));
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_1d(n, real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(n, spec, real, FFTW_ESTIMATE);
  }
  ~RealPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(forward);
    fftw_destroy_plan(backward);
    fftw_free(real);
    fftw_free(spec);
  }
  RealPlans(const RealPlans&) = delete;
  RealPlans& operator=(const RealPlans&) = delete;

  int n;
  double* real;
  fftw_complex* spec;
  fftw_plan forward;
  fftw_plan backward;
};

RealPlans& plans_for(int n) {
  thread_local std::map<int, std::unique_ptr<RealPlans>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealPlans>(n);
  return *slot;
}

}  // namespace

void half_spectrum_to_grid(std::span<const std::complex<double>> half, int n,
                           std::span<double> out) {
  RealPlans& p = plans_for(n);
  const size_t nh = static_cast<size_t>(n / 2 + 1);
  const size_t used = std::min(nh, half.size());
  for (size_t j = 0; j < used; ++j) {
    p.spec[j][0] = half[j].real();
    p.spec[j][1] = half[j].imag();
  }
  for (size_t j = used; j < nh; ++j) p.spec[j][0] = p.spec[j][1] = 0.0;
  // c2r treats the mode at j and at n-j as conjugate partners, so an
  // even-n Nyquist entry would be counted once; callers keep it zero.
  fftw_execute(p.backward);
  std::memcpy(out.data(), p.real, sizeof(double) * static_cast<size_t>(n));
}

void grid_to_half_spectrum(std::span<const double> values, std::span<std::complex<double>> out) {
  const int n = static_cast<int>(values.size());
  RealPlans& p = plans_for(n);
  std::memcpy(p.real, values.data(), sizeof(double) * values.size());
  fftw_execute(p.forward);
  const double inv = 1.0 / n;
  const size_t nh = static_cast<size_t>(n / 2 + 1);
  for (size_t j = 0; j < std::min(nh, out.size()); ++j)
    out[j] = {p.spec[j][0] * inv, p.spec[j][1] * inv};
}

}  // namespace qlwave::detail
