#pragma once

#include <stdexcept>
#include <vector>

namespace bfsi {

class SolveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// General banded matrix with LAPACK LU (partial pivoting).
class BandedLU {
 public:
  BandedLU() = default;
  BandedLU(int n, int kl, int ku);

  int size() const { return n_; }
  void add(int i, int j, double v);
  double get(int i, int j) const;
  void factor();
  bool factored() const { return factored_; }
  // Solves in place for nrhs column-major right-hand sides of length n.
  void solve(double* rhs, int nrhs = 1) const;

 private:
  int n_ = 0, kl_ = 0, ku_ = 0, ldab_ = 0;
  std::vector<double> ab_;
  std::vector<int> ipiv_;
  bool factored_ = false;
};

}  // namespace bfsi
