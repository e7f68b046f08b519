#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "eig_complex.hpp"
#include "eig_real.hpp"

namespace cylspec {

// ---------------------------------------------------------------------------
// Essential-spectrum geometry
// ---------------------------------------------------------------------------

// Locus mu(xi) = nu - (1 + lambda)^{-2} (beta + i xi)^2, xi real.
// beta = 0 degenerates to the ray nu + e^{-2 i arg(1+lambda)} R_+.
struct EssentialCurve {
  double nu = 0.0;
  cplx lambda;
  cplx beta;

  cplx point(double xi) const;
  // Euclidean distance from mu to the locus.
  double distance(cplx mu) const;
};

std::vector<cplx> sample_essential_curve(const EssentialCurve& curve,
                                         const std::vector<double>& xi_grid);

enum class SpectralClass { NearCurve = 0, NearRealIsolated = 1, Outlier = 2 };

struct RayDeviationStats {
  std::vector<SpectralClass> classification;  // parallel to the spectrum
  std::vector<double> curve_distance;
  int near_curve = 0;
  int near_real_isolated = 0;
  int outliers = 0;
  double max_curve_distance = 0.0;        // among near-curve points
  std::vector<cplx> isolated_candidates;  // the near-real-isolated values
};

// Classifies every eigenvalue against the given curves: near-curve
// (distance <= curve_tol) first, else near-real-isolated (|Im| <= real_band),
// else outlier.
RayDeviationStats ray_deviation(const ComplexSpectrum& spectrum,
                                const std::vector<EssentialCurve>& curves, double curve_tol,
                                double real_band);

// ---------------------------------------------------------------------------
// Persistence under deformation
// ---------------------------------------------------------------------------

struct PersistenceRow {
  cplx lambda;
  cplx mu_hat;
  double drift = 0.0;   // |Re mu_hat - mu_candidate|
  double im_abs = 0.0;  // |Im mu_hat|
  double tol = 0.0;
  bool pass = false;
};

struct PersistenceReport {
  double mu_candidate = 0.0;
  std::vector<PersistenceRow> rows;
  bool all_pass = true;
};

// For each lambda, the nearest eigenvalue of the deformed operator must stay
// within tol = 10 (h^2 + e^{-2 sqrt(gap) L}) * max(1, |mu|) of the real
// candidate, with matching imaginary-part bound.
PersistenceReport persistence_check(
    const std::function<TridiagonalComplex(const ScalingParameter&)>& assemble_deformed,
    double mu_candidate, double gap, const std::vector<cplx>& lambdas, const Grid1D& grid);

// ---------------------------------------------------------------------------
// Decay-rate fit
// ---------------------------------------------------------------------------

struct DecayFit {
  double gamma_hat = 0.0;       // fitted slope of log |psi| on the admissible window
  double gamma_hat_half = 0.0;  // same fit on the first half (doubling stability)
  double bound = 0.0;           // -sqrt(gap)
  double x0 = 0.0, x1 = 0.0;    // window
  double r_squared = 0.0;
  int points = 0;
};

// Window: starts at the first grid point with |V| < 0.05 * gap, ends where
// |psi| falls below 1e3 * eps * max|psi|. Requires >= 20 points.
DecayFit fit_decay_rate(const std::vector<double>& psi, const Grid1D& grid, double mu, double gap,
                        const std::function<double(double)>& potential);

// ---------------------------------------------------------------------------
// Accumulation scan
// ---------------------------------------------------------------------------

enum class SweepKind { TruncationLength, ModeIndex };

struct AccumulationPoint {
  double key = 0.0;  // L or k
  int count = 0;
  double nu_global = 0.0;            // sigma of the mode solved at this point
  std::vector<double> values;        // eigenvalues found in (nu - eps, nu)
  std::vector<double> above_values;  // eigenvalues found in (nu, nu + eps)
};

struct AccumulationReport {
  double nu = 0.0;       // per-mode threshold (0 in the mode reduction)
  double nu_global = 0.0;  // sigma_k: where the global eigenvalues accumulate
  bool embedded = false;   // nu_global above the first threshold
  double epsilon = 0.0;
  SweepKind sweep = SweepKind::TruncationLength;
  std::vector<AccumulationPoint> points;
  bool below_only = true;  // all counted values strictly below nu
  bool monotone = true;    // counts nondecreasing along the sweep
  std::vector<double> stable_above;  // L-stable values in (nu, nu+eps): violations
};

// Sweep over truncation length L (grids [-L, L]) at fixed mode k, or over the
// mode index at fixed L (`fixed_length` is only read for mode sweeps). Counts
// mode eigenvalues E in (-eps, 0); for L-sweeps also filters (0, eps) for
// L-stable intruders (relative drift < 1e-4 across consecutive sweep points).
AccumulationReport accumulation_scan(const SeparableModel& model, int mode_k, double epsilon,
                                     SweepKind sweep, const std::vector<double>& sweep_values,
                                     double h, double fixed_length = 0.0);

// ---------------------------------------------------------------------------
// Numerical-range sector
// ---------------------------------------------------------------------------

struct SectorFit {
  double a = 0.0;      // vertex shift
  double theta = 0.0;  // half-angle
  int samples = 0;
};

// Rayleigh quotients on seeded random unit vectors; vertex a = 0 if all
// sampled real parts are nonnegative, else twice the most negative one;
// theta = max |arg(z + a)|. Throws PropertyViolation if theta >= pi/2.
SectorFit numerical_range_sector(const std::function<std::vector<cplx>(const std::vector<cplx>&)>& apply,
                                 int dim, int samples, uint64_t seed);
SectorFit numerical_range_sector(const TridiagonalComplex& op, int samples, uint64_t seed);
SectorFit numerical_range_sector(const std::vector<cplx>& dense, int n, int samples,
                                 uint64_t seed);

}  // namespace cylspec
