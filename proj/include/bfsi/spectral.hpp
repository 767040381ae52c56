#pragma once

#include <complex>
#include <vector>

namespace bfsi {

using cplx = std::complex<double>;

// Real-to-complex transform of one periodic row of length n (n even).
// Coefficients are unnormalized: f_j = (1/n) Σ_k F_k e^{ikx_j}.
void rfft(int n, const double* in, cplx* out);
void irfft(int n, const cplx* in, double* out);

// Spectral derivative of one row; the Nyquist mode is zeroed.
void ddx_row(int n, const double* in, double* out);
void d2dx2_row(int n, const double* in, double* out);
// Zeroes every mode with |k| > kmax.
void truncate_row(int n, double* row, int kmax);

// Row-wise transforms of a row-major block; coefficients stored as
// out[row * (n/2 + 1) + k].
void rfft_rows(int n, int rows, const double* in, cplx* out);
void irfft_rows(int n, int rows, const cplx* in, double* out);

}  // namespace bfsi
