#include "analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace cylspec {

// ---------------------------------------------------------------------------
// Essential curves
// ---------------------------------------------------------------------------

cplx EssentialCurve::point(double xi) const {
  const cplx one_lam = 1.0 + lambda;
  const cplx w = beta + cplx(0.0, xi);
  return nu - (w * w) / (one_lam * one_lam);
}

std::vector<cplx> sample_essential_curve(const EssentialCurve& curve,
                                         const std::vector<double>& xi_grid) {
  std::vector<cplx> pts;
  pts.reserve(xi_grid.size());
  for (double xi : xi_grid) pts.push_back(curve.point(xi));
  return pts;
}

double EssentialCurve::distance(cplx mu) const {
  if (beta == 0.0) {
    // ray nu + t * u, t >= 0, u = (1+lambda)^{-2}
    const cplx one_lam = 1.0 + lambda;
    cplx u = 1.0 / (one_lam * one_lam);
    u /= std::abs(u);
    const cplx rel = mu - nu;
    const double t = std::max(0.0, (rel * std::conj(u)).real());
    return std::abs(rel - t * u);
  }
  // general parabola: coarse scan of |mu - point(xi)|^2, then ternary refinement
  double best = std::numeric_limits<double>::infinity();
  double best_xi = 0.0;
  const double span = 2.0 * (std::abs(mu - cplx(nu, 0.0)) + std::abs(beta) + 1.0) *
                      std::abs(1.0 + lambda);
  const int coarse = 400;
  for (int i = 0; i <= coarse; ++i) {
    const double xi = -span + 2.0 * span * i / coarse;
    const double d = std::abs(mu - point(xi));
    if (d < best) {
      best = d;
      best_xi = xi;
    }
  }
  double lo = best_xi - 2.0 * span / coarse, hi = best_xi + 2.0 * span / coarse;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (std::abs(mu - point(m1)) < std::abs(mu - point(m2)))
      hi = m2;
    else
      lo = m1;
  }
  return std::abs(mu - point(0.5 * (lo + hi)));
}

RayDeviationStats ray_deviation(const ComplexSpectrum& spectrum,
                                const std::vector<EssentialCurve>& curves, double curve_tol,
                                double real_band) {
  RayDeviationStats stats;
  stats.classification.reserve(spectrum.eigenvalues.size());
  stats.curve_distance.reserve(spectrum.eigenvalues.size());
  for (const cplx& mu : spectrum.eigenvalues) {
    double dist = std::numeric_limits<double>::infinity();
    for (const EssentialCurve& c : curves) dist = std::min(dist, c.distance(mu));
    stats.curve_distance.push_back(dist);
    if (dist <= curve_tol) {
      stats.classification.push_back(SpectralClass::NearCurve);
      ++stats.near_curve;
      stats.max_curve_distance = std::max(stats.max_curve_distance, dist);
    } else if (std::abs(mu.imag()) <= real_band) {
      stats.classification.push_back(SpectralClass::NearRealIsolated);
      ++stats.near_real_isolated;
      stats.isolated_candidates.push_back(mu);
    } else {
      stats.classification.push_back(SpectralClass::Outlier);
      ++stats.outliers;
    }
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

PersistenceReport persistence_check(
    const std::function<TridiagonalComplex(const ScalingParameter&)>& assemble_deformed,
    double mu_candidate, double gap, const std::vector<cplx>& lambdas, const Grid1D& grid) {
  if (!(gap > 0.0)) fail(ErrorCode::InvalidArgument, "persistence_check: gap must be positive");
  const double h = grid.spacing();
  const double truncation = std::exp(-2.0 * std::sqrt(gap) * grid.x_max);
  const double tol = 10.0 * (h * h + truncation) * std::max(1.0, std::abs(mu_candidate));

  PersistenceReport report;
  report.mu_candidate = mu_candidate;
  for (const cplx& lam : lambdas) {
    const ScalingParameter sp{lam};
    sp.validate();  // rejects |lambda| >= sin(alpha) before any solve
    const TridiagonalComplex op = assemble_deformed(sp);
    const NearestEigenvalue ne = nearest_eigenvalue(op, mu_candidate);
    PersistenceRow row;
    row.lambda = lam;
    row.mu_hat = ne.value;
    row.drift = std::abs(ne.value.real() - mu_candidate);
    row.im_abs = std::abs(ne.value.imag());
    row.tol = tol;
    row.pass = row.drift <= tol && row.im_abs <= tol;
    report.all_pass = report.all_pass && row.pass;
    report.rows.push_back(row);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Decay fit
// ---------------------------------------------------------------------------

DecayFit fit_decay_rate(const std::vector<double>& psi, const Grid1D& grid, double mu, double gap,
                        const std::function<double(double)>& potential) {
  if (!(gap > 0.0)) fail(ErrorCode::InvalidArgument, "fit_decay_rate: gap must be positive");
  const int n = grid.n_points;
  if (static_cast<int>(psi.size()) != n)
    fail(ErrorCode::InvalidArgument, "fit_decay_rate: vector does not match the grid");

  double amax = 0.0;
  for (double v : psi) amax = std::max(amax, std::abs(v));
  if (amax == 0.0) fail(ErrorCode::InvalidArgument, "fit_decay_rate: zero vector");
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * amax;

  // admissible window on the positive end
  int i0 = -1;
  for (int i = 0; i < n; ++i) {
    const double x = grid.point(i);
    if (x <= 0.0) continue;
    if (std::abs(potential(x)) < 0.05 * gap) {
      i0 = i;
      break;
    }
  }
  if (i0 < 0) fail(ErrorCode::InsufficientData, "fit_decay_rate: admissible window is empty");

  std::vector<double> xs, ls;
  for (int i = i0; i < n; ++i) {
    const double a = std::abs(psi[i]);
    if (a < floor) break;
    xs.push_back(grid.point(i));
    ls.push_back(std::log(a));
  }
  if (static_cast<int>(xs.size()) < 20)
    fail(ErrorCode::InsufficientData, "fit_decay_rate: window shorter than 20 points");

  auto least_squares_slope = [](const std::vector<double>& x, const std::vector<double>& y,
                                std::size_t m) {
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sx += x[i];
      sy += y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    const double slope = sxy / sxx;
    return std::pair<double, double>{slope, my - slope * mx};
  };

  DecayFit fit;
  const auto [slope, intercept] = least_squares_slope(xs, ls, xs.size());
  const auto [slope_half, intercept_half] = least_squares_slope(xs, ls, xs.size() / 2);
  (void)intercept_half;
  fit.gamma_hat = slope;
  fit.gamma_hat_half = slope_half;
  fit.bound = -std::sqrt(gap);
  fit.x0 = xs.front();
  fit.x1 = xs.back();
  fit.points = static_cast<int>(xs.size());

  double ss_res = 0.0, ss_tot = 0.0, mean = 0.0;
  for (double v : ls) mean += v;
  mean /= ls.size();
  for (std::size_t i = 0; i < ls.size(); ++i) {
    const double pred = slope * xs[i] + intercept;
    ss_res += (ls[i] - pred) * (ls[i] - pred);
    ss_tot += (ls[i] - mean) * (ls[i] - mean);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  (void)mu;
  return fit;
}

// ---------------------------------------------------------------------------
// Accumulation scan
// ---------------------------------------------------------------------------

AccumulationReport accumulation_scan(const SeparableModel& model, int mode_k, double epsilon,
                                     SweepKind sweep, const std::vector<double>& sweep_values,
                                     double h, double fixed_length) {
  if (mode_k < 1) fail(ErrorCode::InvalidArgument, "accumulation_scan: mode index must be >= 1");
  if (sweep_values.empty())
    fail(ErrorCode::InvalidArgument, "accumulation_scan: empty sweep");
  if (sweep == SweepKind::ModeIndex && !(fixed_length > 0.0))
    fail(ErrorCode::InvalidArgument, "accumulation_scan: mode sweep needs a truncation length");

  // epsilon must stay below half the smallest ladder gap
  const int count_needed = sweep == SweepKind::ModeIndex
                               ? static_cast<int>(*std::max_element(sweep_values.begin(),
                                                                    sweep_values.end())) + 1
                               : mode_k + 1;
  const ThresholdLadder ladder = model.thresholds(std::max(2, count_needed));
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < ladder.size(); ++j)
    min_gap = std::min(min_gap, ladder.value(j) - ladder.value(j - 1));
  if (!(epsilon > 0.0) || !(epsilon < 0.5 * min_gap))
    fail(ErrorCode::InvalidArgument, "accumulation_scan: epsilon must lie below half the ladder gap");

  const std::vector<double> sigmas = ladder.flattened();
  auto sigma_of = [&](int k) -> double {
    if (k < 1 || k > static_cast<int>(sigmas.size()))
      fail(ErrorCode::InvalidArgument, "accumulation_scan: mode index beyond the ladder");
    return sigmas[k - 1];
  };

  AccumulationReport report;
  report.nu = 0.0;  // each mode is solved below its own threshold
  report.epsilon = epsilon;
  report.sweep = sweep;
  report.nu_global = sigma_of(mode_k);
  report.embedded = report.nu_global > ladder.value(0) + 1e-12;

  const double tiny = 1e-14;
  auto solve_point = [&](double L, double sigma) {
    const Grid1D grid = Grid1D::with_spacing(-L, L, h);
    const TridiagonalReal op = assemble_mode_operator(model, sigma, grid);
    const double tol = default_bisection_tol(op);
    AccumulationPoint pt;
    pt.nu_global = sigma;
    for (const auto& [value, mult] : bisect_eigenvalues(op.diag, op.off, -epsilon, -tiny, tol))
      for (int m = 0; m < mult; ++m) pt.values.push_back(value);
    for (const auto& [value, mult] : bisect_eigenvalues(op.diag, op.off, tiny, epsilon, tol))
      for (int m = 0; m < mult; ++m) pt.above_values.push_back(value);
    pt.count = static_cast<int>(pt.values.size());
    return pt;
  };

  for (double key : sweep_values) {
    AccumulationPoint pt =
        sweep == SweepKind::TruncationLength
            ? solve_point(key, sigma_of(mode_k))
            : solve_point(fixed_length, sigma_of(static_cast<int>(std::lround(key))));
    pt.key = key;
    report.points.push_back(pt);
  }

  for (std::size_t i = 0; i < report.points.size(); ++i) {
    const auto& pt = report.points[i];
    for (double v : pt.values)
      if (!(v < report.nu)) report.below_only = false;
    if (i > 0 && pt.count < report.points[i - 1].count) report.monotone = false;
  }

  // L-stability filter above the threshold: a value that persists (relative
  // drift < 1e-4) across consecutive truncations is a violation
  if (sweep == SweepKind::TruncationLength) {
    for (std::size_t i = 1; i < report.points.size(); ++i) {
      for (double v : report.points[i].above_values) {
        for (double w : report.points[i - 1].above_values) {
          if (std::abs(v - w) < 1e-4 * std::max(std::abs(v), 1e-300)) {
            report.stable_above.push_back(v);
            break;
          }
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Numerical-range sector
// ---------------------------------------------------------------------------

SectorFit numerical_range_sector(
    const std::function<std::vector<cplx>(const std::vector<cplx>&)>& apply, int dim, int samples,
    uint64_t seed) {
  if (samples < 100)
    fail(ErrorCode::InvalidArgument, "numerical_range_sector: need at least 100 samples");

  std::mt19937_64 gen(seed);
  auto uniform01 = [&]() { return ((gen() >> 11) + 0.5) * (1.0 / 9007199254740992.0); };
  auto normal = [&]() {
    const double u1 = uniform01(), u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  };

  std::vector<cplx> quotients;
  quotients.reserve(samples);
  std::vector<cplx> v(dim);
  for (int s = 0; s < samples; ++s) {
    double nrm2 = 0.0;
    for (cplx& x : v) {
      x = cplx(normal(), normal());
      nrm2 += std::norm(x);
    }
    const std::vector<cplx> av = apply(v);
    cplx q = 0.0;
    for (int i = 0; i < dim; ++i) q += std::conj(v[i]) * av[i];
    quotients.push_back(q / nrm2);
  }

  double min_re = std::numeric_limits<double>::infinity();
  for (const cplx& q : quotients) min_re = std::min(min_re, q.real());
  SectorFit fit;
  fit.samples = samples;
  fit.a = min_re < 0.0 ? -2.0 * min_re : 0.0;
  double theta = 0.0;
  for (const cplx& q : quotients) {
    const cplx z = q + fit.a;
    theta = std::max(theta, z == 0.0 ? kPi : std::abs(std::arg(z)));
  }
  fit.theta = theta;
  if (theta >= kPi / 2.0 - 1e-6)
    fail(ErrorCode::PropertyViolation,
         "numerical_range_sector: no sector with half-angle below pi/2 covers the samples");
  return fit;
}

SectorFit numerical_range_sector(const TridiagonalComplex& op, int samples, uint64_t seed) {
  return numerical_range_sector([&](const std::vector<cplx>& v) { return op.apply(v); }, op.dim(),
                                samples, seed);
}

SectorFit numerical_range_sector(const std::vector<cplx>& dense, int n, int samples,
                                 uint64_t seed) {
  auto apply = [&](const std::vector<cplx>& v) {
    std::vector<cplx> w(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) w[i] += dense[static_cast<std::size_t>(i) * n + j] * v[j];
    return w;
  };
  return numerical_range_sector(apply, n, samples, seed);
}

}  // namespace cylspec
