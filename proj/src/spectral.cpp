#include "bfsi/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace bfsi {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  int n = 0;
  double* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  explicit Plan(int n_) : n(n_) {
    std::lock_guard<std::mutex> lock(planner_mutex());
    in = fftw_alloc_real(n);
    out = fftw_alloc_complex(n / 2 + 1);
    fwd = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_1d(n, out, in, FFTW_ESTIMATE);
  }
  ~Plan() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
    fftw_free(in);
    fftw_free(out);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
};

Plan& plan_for(int n) {
  thread_local std::map<int, std::unique_ptr<Plan>> cache;
  auto& p = cache[n];
  if (!p) p = std::make_unique<Plan>(n);
  return *p;
}

}  // namespace

void rfft(int n, const double* in, cplx* out) {
  Plan& p = plan_for(n);
  for (int i = 0; i < n; ++i) p.in[i] = in[i];
  fftw_execute(p.fwd);
  for (int k = 0; k <= n / 2; ++k) out[k] = {p.out[k][0], p.out[k][1]};
}

void irfft(int n, const cplx* in, double* out) {
  Plan& p = plan_for(n);
  for (int k = 0; k <= n / 2; ++k) {
    p.out[k][0] = in[k].real();
    p.out[k][1] = in[k].imag();
  }
  fftw_execute(p.bwd);
  for (int i = 0; i < n; ++i) out[i] = p.in[i] / n;
}

void ddx_row(int n, const double* in, double* out) {
  std::vector<cplx> c(n / 2 + 1);
  rfft(n, in, c.data());
  for (int k = 0; k < n / 2; ++k) c[k] *= cplx(0.0, k);
  c[n / 2] = 0.0;
  irfft(n, c.data(), out);
}

void d2dx2_row(int n, const double* in, double* out) {
  std::vector<cplx> c(n / 2 + 1);
  rfft(n, in, c.data());
  for (int k = 0; k < n / 2; ++k) c[k] *= -double(k) * k;
  c[n / 2] = 0.0;
  irfft(n, c.data(), out);
}

void truncate_row(int n, double* row, int kmax) {
  std::vector<cplx> c(n / 2 + 1);
  rfft(n, row, c.data());
  for (int k = 0; k <= n / 2; ++k)
    if (k > kmax) c[k] = 0.0;
  irfft(n, c.data(), row);
}

void rfft_rows(int n, int rows, const double* in, cplx* out) {
  const int nk = n / 2 + 1;
  for (int l = 0; l < rows; ++l) rfft(n, in + static_cast<std::size_t>(l) * n, out + static_cast<std::size_t>(l) * nk);
}

void irfft_rows(int n, int rows, const cplx* in, double* out) {
  const int nk = n / 2 + 1;
  for (int l = 0; l < rows; ++l) irfft(n, in + static_cast<std::size_t>(l) * nk, out + static_cast<std::size_t>(l) * n);
}

}  // namespace bfsi
