#pragma once

#include <cstdint>
#include <vector>

#include "operators.hpp"

namespace cylspec {

struct SpectralWindow {
  double lo = 0.0;
  double hi = 1.0;
};

struct SpectrumResult {
  std::vector<double> eigenvalues;  // ascending
  std::vector<int> multiplicities;
  std::vector<std::vector<double>> eigenvectors;
  std::vector<double> residuals;
  double tol = 0.0;  // bisection tolerance or residual target
  double grid_h = 0.0;
  double domain_length = 0.0;
};

struct Eigenpair {
  double value = 0.0;
  std::vector<double> vector;  // normalized in the grid inner product
  double residual = 0.0;
};

// Number of eigenvalues strictly below `shift` (Sturm sequence with underflow guard).
int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double shift);
int sturm_count(const TridiagonalReal& op, double shift);

std::pair<double, double> gershgorin_bounds(const std::vector<double>& diag,
                                            const std::vector<double>& off);

double default_bisection_tol(const TridiagonalReal& op);

// All eigenvalues in (lo, hi], located to +-tol, multiplicity-aware.
std::vector<std::pair<double, int>> bisect_eigenvalues(const std::vector<double>& diag,
                                                       const std::vector<double>& off,
                                                       double lo, double hi, double tol);
SpectrumResult eigenvalues_in_window(const TridiagonalReal& op, SpectralWindow window,
                                     double tol);

// Inverse iteration with Rayleigh-quotient refinement. Refuses clusters
// tighter than 10x the bisection tolerance around mu_approx.
Eigenpair inverse_iteration(const TridiagonalReal& op, double mu_approx);

// Dense oracle: Householder reduction to tridiagonal + bisection.
// `a` is row-major symmetric n x n.
std::vector<double> dense_symmetric_eigenvalues(std::vector<double> a, int n);

// Cyclic Jacobi for small dense symmetric problems; returns eigenvalues
// ascending, eigenvectors as columns of `vecs` (row-major n x n).
void jacobi_symmetric(std::vector<double>& a, int n, std::vector<double>& values,
                      std::vector<double>& vecs);

// ---------------------------------------------------------------------------
// Banded machinery for the 2D guide
// ---------------------------------------------------------------------------

struct BandedLdlt {
  int dim = 0;
  int bandwidth = 0;
  std::vector<double> l;  // unit lower factor, same band layout as the input
  std::vector<double> d;
  int negative_pivots = 0;
  bool breakdown = false;

  void solve_in_place(std::vector<double>& b) const;
};

BandedLdlt banded_ldlt(const BandedSymmetric& a, double shift);

// Eigenvalue count below `shift` by LDL^T inertia; nudges the shift on breakdown.
int banded_count_below(const BandedSymmetric& a, double shift);

// k lowest eigenvalues above `shift` by shift-invert subspace iteration with
// the banded factorization; deterministic start block from `seed`.
SpectrumResult lowest_eigenpairs_2d(const GuideOperator& op, int k, double shift, uint64_t seed,
                                    double residual_tol = 1e-8);
SpectrumResult lowest_eigenpairs_banded(const BandedSymmetric& a, int k, double shift,
                                        uint64_t seed, double residual_tol = 1e-8);

}  // namespace cylspec
