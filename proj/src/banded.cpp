#include "bfsi/banded.hpp"

#include <string>

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab, int* ipiv,
             int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs, const double* ab,
             const int* ldab, const int* ipiv, double* b, const int* ldb, int* info);
}

namespace bfsi {

BandedLU::BandedLU(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(static_cast<std::size_t>(ldab_) * n, 0.0), ipiv_(n) {}

void BandedLU::add(int i, int j, double v) {
  if (factored_) throw SolveError("matrix already factored");
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || i - j > kl_ || j - i > ku_)
    throw SolveError("entry (" + std::to_string(i) + "," + std::to_string(j) + ") outside the band");
  ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)] += v;
}

double BandedLU::get(int i, int j) const {
  if (i - j > kl_ || j - i > ku_) return 0.0;
  return ab_[static_cast<std::size_t>(j) * ldab_ + (kl_ + ku_ + i - j)];
}

void BandedLU::factor() {
  int info = 0;
  dgbtrf_(&n_, &n_, &kl_, &ku_, ab_.data(), &ldab_, ipiv_.data(), &info);
  if (info != 0) throw SolveError("banded factorization failed (info " + std::to_string(info) + ")");
  factored_ = true;
}

void BandedLU::solve(double* rhs, int nrhs) const {
  if (!factored_) throw SolveError("solve before factor");
  int info = 0;
  const char trans = 'N';
  dgbtrs_(&trans, &n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab_, ipiv_.data(), rhs, &n_, &info);
  if (info != 0) throw SolveError("banded solve failed (info " + std::to_string(info) + ")");
}

}  // namespace bfsi
