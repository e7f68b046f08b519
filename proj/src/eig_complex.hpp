#pragma once

#include <vector>

#include "operators.hpp"

namespace cylspec {

struct ComplexSpectrum {
  std::vector<cplx> eigenvalues;  // size == dimension, even on partial convergence
  std::vector<bool> converged;
  std::vector<int> iterations;
  bool all_converged = true;
  double trace_error = 0.0;  // |sum(eigenvalues) - trace(A)|
};

// All eigenvalues of a dense complex matrix (row-major n x n) via balancing,
// Hessenberg reduction and Wilkinson-shifted QR with deflation.
// Dimension capped at 2500 (desk scale).
ComplexSpectrum complex_eigenvalues(std::vector<cplx> a, int n);

std::vector<cplx> tridiagonal_to_dense(const TridiagonalComplex& op);

ComplexSpectrum complex_eigenvalues(const TridiagonalComplex& op);

struct NearestEigenvalue {
  cplx value;
  double residual = 0.0;
  int iterations = 0;
};

// The eigenvalue of a complex tridiagonal operator nearest to `target`:
// shift-invert power iteration (tridiagonal LU) with Rayleigh polish.
NearestEigenvalue nearest_eigenvalue(const TridiagonalComplex& op, cplx target);

}  // namespace cylspec
