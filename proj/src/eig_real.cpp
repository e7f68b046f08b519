#include "eig_real.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace cylspec {

// ---------------------------------------------------------------------------
// Sturm counting and bisection
// ---------------------------------------------------------------------------

int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double shift) {
  const int n = static_cast<int>(diag.size());
  double offmax = 0.0;
  for (double e : off) offmax = std::max(offmax, std::abs(e));
  const double eps = std::numeric_limits<double>::epsilon();
  const double pivmin =
      std::max(std::numeric_limits<double>::min(), eps * eps * offmax * offmax);

  int count = 0;
  double d = diag[0] - shift;
  if (d < 0.0) ++count;
  for (int i = 1; i < n; ++i) {
    if (std::abs(d) < pivmin) d = d < 0.0 ? -pivmin : pivmin;
    d = diag[i] - shift - off[i - 1] * off[i - 1] / d;
    if (d < 0.0) ++count;
  }
  return count;
}

int sturm_count(const TridiagonalReal& op, double shift) {
  return sturm_count(op.diag, op.off, shift);
}

std::pair<double, double> gershgorin_bounds(const std::vector<double>& diag,
                                            const std::vector<double>& off) {
  const int n = static_cast<int>(diag.size());
  double lo = diag[0], hi = diag[0];
  for (int i = 0; i < n; ++i) {
    double r = 0.0;
    if (i > 0) r += std::abs(off[i - 1]);
    if (i + 1 < n) r += std::abs(off[i]);
    lo = std::min(lo, diag[i] - r);
    hi = std::max(hi, diag[i] + r);
  }
  return {lo, hi};
}

double default_bisection_tol(const TridiagonalReal& op) {
  const auto [lo, hi] = gershgorin_bounds(op.diag, op.off);
  return 1e-10 * std::max({1.0, std::abs(lo), std::abs(hi)});
}

std::vector<std::pair<double, int>> bisect_eigenvalues(const std::vector<double>& diag,
                                                       const std::vector<double>& off,
                                                       double lo, double hi, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "bisection tolerance must be positive");
  if (!(lo < hi)) fail(ErrorCode::InvalidArgument, "spectral window must satisfy lo < hi");

  // counts over (lo, hi]: shifts nudged so boundary hits resolve consistently
  auto count_leq = [&](double x) {
    return sturm_count(diag, off, std::nextafter(x, std::numeric_limits<double>::infinity()));
  };
  const auto [glo, ghi] = gershgorin_bounds(diag, off);
  const double a0 = std::max(lo, std::nextafter(glo, -std::numeric_limits<double>::infinity()));
  const double b0 = std::min(hi, std::nextafter(ghi, std::numeric_limits<double>::infinity()));
  if (!(a0 < b0)) return {};

  const int na0 = count_leq(a0);
  const int nb0 = count_leq(b0);
  if (nb0 == na0) return {};
  if (nb0 - na0 > 1000000) fail(ErrorCode::Resource, "window contains more than 1e6 eigenvalues");

  struct Segment {
    double a, b;
    int na, nb;
  };
  std::vector<Segment> stack{{a0, b0, na0, nb0}};
  std::vector<std::pair<double, int>> found;
  while (!stack.empty()) {
    const Segment s = stack.back();
    stack.pop_back();
    if (s.b - s.a <= tol) {
      found.emplace_back(0.5 * (s.a + s.b), s.nb - s.na);
      continue;
    }
    const double mid = 0.5 * (s.a + s.b);
    const int nm = count_leq(mid);
    if (nm > s.na) stack.push_back({s.a, mid, s.na, nm});
    if (s.nb > nm) stack.push_back({mid, s.b, nm, s.nb});
  }
  std::sort(found.begin(), found.end());
  return found;
}

SpectrumResult eigenvalues_in_window(const TridiagonalReal& op, SpectralWindow window,
                                     double tol) {
  auto found = bisect_eigenvalues(op.diag, op.off, window.lo, window.hi, tol);
  SpectrumResult r;
  r.tol = tol;
  r.grid_h = op.grid.spacing();
  r.domain_length = op.grid.length();
  for (const auto& [value, mult] : found) {
    r.eigenvalues.push_back(value);
    r.multiplicities.push_back(mult);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Tridiagonal LU (partial pivoting) and inverse iteration
// ---------------------------------------------------------------------------

namespace {

// dgttrf-style factorization of T - shift.
struct TridiagLU {
  std::vector<double> dl, d, du, du2;
  std::vector<int> piv;

  void factor(const std::vector<double>& diag, const std::vector<double>& lower,
              const std::vector<double>& upper, double shift) {
    const int n = static_cast<int>(diag.size());
    d.resize(n);
    dl.assign(n > 1 ? n - 1 : 0, 0.0);
    du.assign(n > 1 ? n - 1 : 0, 0.0);
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    piv.assign(n, 0);
    for (int i = 0; i < n; ++i) d[i] = diag[i] - shift;
    for (int i = 0; i + 1 < n; ++i) {
      dl[i] = lower[i];
      du[i] = upper[i];
    }
    const double tiny = std::numeric_limits<double>::min();
    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        piv[i] = 0;
        if (d[i] == 0.0) d[i] = tiny;
        const double f = dl[i] / d[i];
        dl[i] = f;
        d[i + 1] -= f * du[i];
        if (i + 2 < n) du2[i] = 0.0;
      } else {
        piv[i] = 1;
        const double f = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = f;
        const double tmp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = tmp - f * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -f * du[i + 1];
        }
      }
    }
    if (d[n - 1] == 0.0) d[n - 1] = tiny;
  }

  void solve(std::vector<double>& b) const {
    const int n = static_cast<int>(d.size());
    for (int i = 0; i + 1 < n; ++i) {
      if (piv[i] == 0) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double tmp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = tmp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (int i = n - 3; i >= 0; --i)
      b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  }
};

double tridiag_scale(const TridiagonalReal& op) {
  double s = 1.0;
  const int n = op.dim();
  for (int i = 0; i < n; ++i) {
    double row = std::abs(op.diag[i]);
    if (i > 0) row += std::abs(op.off[i - 1]);
    if (i + 1 < n) row += std::abs(op.off[i]);
    s = std::max(s, row);
  }
  return s;
}

// Rebuilds an evanescent tail of the eigenvector by the three-term recurrence
// integrated in its stable direction (from the wall toward the interior).
// Inverse iteration leaves absolute noise ~ eps * ||T|| / gap in the vector,
// which swamps components below ~1e-10 of the peak; the recurrence restores
// them with relative accuracy up to one overall matching factor.
void polish_evanescent_tail(const TridiagonalReal& op, double mu, std::vector<double>& v,
                            bool right) {
  const int n = op.dim();
  auto diag_at = [&](int i) { return op.diag[right ? i : n - 1 - i]; };
  auto off_at = [&](int i) { return op.off[right ? i : n - 2 - i]; };  // between i and i+1
  auto vref = [&](int i) -> double& { return v[right ? i : n - 1 - i]; };

  // contiguous suffix where mu lies below the local band edge (evanescent)
  int i0 = n;
  for (int i = n - 1; i >= 0; --i) {
    double radius = 0.0;
    if (i > 0) radius += std::abs(off_at(i - 1));
    if (i + 1 < n) radius += std::abs(off_at(i));
    if (mu < diag_at(i) - radius)
      i0 = i;
    else
      break;
  }
  if (n - i0 < 20) return;

  double amax = 0.0;
  for (double x : v) amax = std::max(amax, std::abs(x));
  int m = -1;
  for (int i = i0; i < n; ++i)
    if (std::abs(vref(i)) <= 1e-5 * amax) {
      m = i;
      break;
    }
  if (m < 0 || m + 2 >= n || vref(m) == 0.0) return;

  // w[j] holds the candidate tail at node m + j; the Dirichlet wall sits one
  // step beyond the last node
  std::vector<double> w(n - m, 0.0);
  w[n - 1 - m] = 1.0;
  if (std::abs(off_at(n - 2)) < 1e-300) return;
  w[n - 2 - m] = -(diag_at(n - 1) - mu) * w[n - 1 - m] / off_at(n - 2);
  for (int i = n - 2; i > m; --i) {
    if (std::abs(off_at(i - 1)) < 1e-300) return;
    w[i - 1 - m] = -((diag_at(i) - mu) * w[i - m] + off_at(i) * w[i + 1 - m]) / off_at(i - 1);
    if (std::abs(w[i - 1 - m]) > 1e250) {
      for (int j = i - 1 - m; j < n - m; ++j) w[j] *= 1e-250;
    }
  }
  if (w[0] == 0.0 || !std::isfinite(w[0])) return;
  const double match = vref(m) / w[0];
  for (int i = m; i < n; ++i) vref(i) = match * w[i - m];
}

}  // namespace

Eigenpair inverse_iteration(const TridiagonalReal& op, double mu_approx) {
  const int n = op.dim();
  const double scale = tridiag_scale(op);
  const double btol = default_bisection_tol(op);

  // isolation check: refuse clusters tighter than 10x the bisection tolerance
  const int ncluster =
      sturm_count(op, mu_approx + 10.0 * btol) - sturm_count(op, mu_approx - 10.0 * btol);
  if (ncluster > 1)
    fail(ErrorCode::Numeric, "inverse iteration: degenerate cluster around mu_approx");

  auto apply = [&](const std::vector<double>& v, std::vector<double>& w) {
    for (int i = 0; i < n; ++i) {
      double s = op.diag[i] * v[i];
      if (i > 0) s += op.off[i - 1] * v[i - 1];
      if (i + 1 < n) s += op.off[i] * v[i + 1];
      w[i] = s;
    }
  };

  // deterministic start without grid symmetries (plain ones would be blind to
  // antisymmetric eigenvectors)
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.5 * std::sin(0.7 * (i + 1));
  double vnorm = 0.0;
  for (double x : v) vnorm += x * x;
  vnorm = std::sqrt(vnorm);
  for (double& x : v) x /= vnorm;
  std::vector<double> w(n);
  double mu = mu_approx;
  TridiagLU lu;
  lu.factor(op.diag, op.off, op.off, mu);

  const double res_target = 1e-8 * scale;
  double residual = std::numeric_limits<double>::infinity();
  double value = mu;
  for (int iter = 0; iter < 50; ++iter) {
    lu.solve(v);
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;

    apply(v, w);
    double rq = 0.0;
    for (int i = 0; i < n; ++i) rq += v[i] * w[i];
    double rr = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = w[i] - rq * v[i];
      rr += t * t;
    }
    residual = std::sqrt(rr);
    value = rq;
    if (residual <= res_target) break;
    if (std::abs(rq - mu) > 1e3 * std::numeric_limits<double>::epsilon() * scale) {
      mu = rq;  // Rayleigh refinement
      lu.factor(op.diag, op.off, op.off, mu);
    }
  }
  if (!(residual <= res_target))
    fail(ErrorCode::Numeric, "inverse iteration failed to reach the residual target");

  // restore relative accuracy in classically forbidden tails; revert if the
  // junction hurts the residual
  const std::vector<double> unpolished = v;
  polish_evanescent_tail(op, value, v, true);
  polish_evanescent_tail(op, value, v, false);
  if (v != unpolished) {
    apply(v, w);
    double rq = 0.0, nrm2 = 0.0;
    for (int i = 0; i < n; ++i) {
      rq += v[i] * w[i];
      nrm2 += v[i] * v[i];
    }
    rq /= nrm2;
    double rr = 0.0;
    for (int i = 0; i < n; ++i) {
      const double t = w[i] - rq * v[i];
      rr += t * t;
    }
    const double polished_residual = std::sqrt(rr / nrm2);
    if (polished_residual <= res_target) {
      value = rq;
      residual = polished_residual;
      const double nrm = std::sqrt(nrm2);
      for (double& x : v) x /= nrm;
    } else {
      v = unpolished;
    }
  }

  Eigenpair pair;
  pair.value = value;
  pair.residual = residual;
  pair.vector = v;
  const double h = op.grid.spacing();
  for (double& x : pair.vector) x /= std::sqrt(h);  // grid inner product normalization
  return pair;
}

// ---------------------------------------------------------------------------
// Dense symmetric oracle: Householder tridiagonalization + bisection
// ---------------------------------------------------------------------------

std::vector<double> dense_symmetric_eigenvalues(std::vector<double> a, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "dense oracle: empty matrix");
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };

  std::vector<double> diag(n), off(std::max(0, n - 1));
  std::vector<double> v(n), p(n);

  for (int k = 0; k + 2 < n; ++k) {
    double sig = 0.0;
    for (int i = k + 1; i < n; ++i) sig += at(i, k) * at(i, k);
    const double x0 = at(k + 1, k);
    const double nrm = std::sqrt(sig);
    if (nrm == 0.0) {
      off[k] = 0.0;
      continue;
    }
    const double alpha = x0 >= 0.0 ? -nrm : nrm;
    double vnorm2 = sig - 2.0 * alpha * x0 + alpha * alpha;
    for (int i = k + 1; i < n; ++i) v[i] = at(i, k);
    v[k + 1] -= alpha;
    const double beta = 2.0 / vnorm2;

    // p = beta * A v on the trailing block
    for (int i = k + 1; i < n; ++i) {
      double s = 0.0;
      for (int j = k + 1; j < n; ++j) s += at(i, j) * v[j];
      p[i] = beta * s;
    }
    double kv = 0.0;
    for (int i = k + 1; i < n; ++i) kv += v[i] * p[i];
    kv *= 0.5 * beta;
    for (int i = k + 1; i < n; ++i) p[i] -= kv * v[i];  // w = p - K v
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j <= i; ++j) {
        const double upd = v[i] * p[j] + p[i] * v[j];
        at(i, j) -= upd;
        if (i != j) at(j, i) -= upd;
      }
    off[k] = alpha;
    at(k + 1, k) = alpha;
  }
  for (int i = 0; i < n; ++i) diag[i] = at(i, i);
  if (n >= 2) off[n - 2] = at(n - 1, n - 2);

  const auto [lo, hi] = gershgorin_bounds(diag, off);
  const double tol = 1e-13 * std::max({1.0, std::abs(lo), std::abs(hi)});
  const double pad = std::max(1.0, std::abs(lo) + std::abs(hi));
  auto found = bisect_eigenvalues(diag, off, lo - pad * 1e-12 - tol, hi + pad * 1e-12 + tol, tol);
  std::vector<double> out;
  for (const auto& [value, mult] : found)
    out.insert(out.end(), static_cast<std::size_t>(mult), value);
  return out;
}

// ---------------------------------------------------------------------------
// Jacobi (small dense symmetric, values + vectors)
// ---------------------------------------------------------------------------

void jacobi_symmetric(std::vector<double>& a, int n, std::vector<double>& values,
                      std::vector<double>& vecs) {
  auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
  vecs.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) vecs[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto vat = [&](int i, int j) -> double& { return vecs[static_cast<std::size_t>(i) * n + j]; };

  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(at(i, i)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) scale = std::max(scale, std::abs(at(i, j)));
  const double stop = std::max(1e-300, 1e-15 * scale);

  for (int sweep = 0; sweep < 100; ++sweep) {
    double offnorm = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) offnorm = std::max(offnorm, std::abs(at(i, j)));
    if (offnorm <= stop) break;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (std::abs(apq) <= 1e-2 * stop) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int i = 0; i < n; ++i) {
          const double aip = at(i, p), aiq = at(i, q);
          at(i, p) = c * aip - s * aiq;
          at(i, q) = s * aip + c * aiq;
        }
        for (int j = 0; j < n; ++j) {
          const double apj = at(p, j), aqj = at(q, j);
          at(p, j) = c * apj - s * aqj;
          at(q, j) = s * apj + c * aqj;
        }
        for (int i = 0; i < n; ++i) {
          const double vip = vat(i, p), viq = vat(i, q);
          vat(i, p) = c * vip - s * viq;
          vat(i, q) = s * vip + c * viq;
        }
      }
  }

  values.resize(n);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) {
    values[i] = at(i, i);
    order[i] = i;
  }
  std::sort(order.begin(), order.end(),
            [&](int i, int j) { return at(i, i) < at(j, j); });
  std::vector<double> sorted_vals(n);
  std::vector<double> sorted_vecs(static_cast<std::size_t>(n) * n);
  for (int k = 0; k < n; ++k) {
    sorted_vals[k] = at(order[k], order[k]);
    for (int i = 0; i < n; ++i)
      sorted_vecs[static_cast<std::size_t>(i) * n + k] = vat(i, order[k]);
  }
  values = std::move(sorted_vals);
  vecs = std::move(sorted_vecs);
}

// ---------------------------------------------------------------------------
// Banded LDL^T
// ---------------------------------------------------------------------------

BandedLdlt banded_ldlt(const BandedSymmetric& a, double shift) {
  const int n = a.dim;
  const int bw = a.bandwidth;
  BandedLdlt f;
  f.dim = n;
  f.bandwidth = bw;
  f.l.assign(a.data.size(), 0.0);
  f.d.resize(n);

  // working copy of the upper band, shifted
  std::vector<double> w = a.data;
  for (int i = 0; i < n; ++i) w[static_cast<std::size_t>(i) * (bw + 1)] -= shift;

  const double tiny = 1e-300;
  std::vector<double> row(bw + 1);
  for (int i = 0; i < n; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * (bw + 1);
    const double di = w[base];
    f.d[i] = di;
    if (di < 0.0) ++f.negative_pivots;
    if (std::abs(di) < tiny) {
      f.breakdown = true;
      return f;
    }
    const int m = std::min(bw, n - 1 - i);
    for (int k = 1; k <= m; ++k) row[k] = w[base + k];
    for (int k = 1; k <= m; ++k) {
      const double lk = row[k] / di;  // L(i+k, i)
      f.l[base + k] = lk;
      const std::size_t tbase = static_cast<std::size_t>(i + k) * (bw + 1);
      for (int k2 = k; k2 <= m; ++k2) w[tbase + (k2 - k)] -= lk * row[k2];
    }
  }
  return f;
}

void BandedLdlt::solve_in_place(std::vector<double>& b) const {
  const int n = dim;
  const int bw = bandwidth;
  // forward: L z = b
  for (int i = 0; i < n; ++i) {
    const std::size_t base = static_cast<std::size_t>(i) * (bw + 1);
    const double bi = b[i];
    const int m = std::min(bw, n - 1 - i);
    for (int k = 1; k <= m; ++k) b[i + k] -= l[base + k] * bi;
  }
  for (int i = 0; i < n; ++i) b[i] /= d[i];
  // backward: L^T x = y
  for (int i = n - 1; i >= 0; --i) {
    const std::size_t base = static_cast<std::size_t>(i) * (bw + 1);
    const int m = std::min(bw, n - 1 - i);
    double s = b[i];
    for (int k = 1; k <= m; ++k) s -= l[base + k] * b[i + k];
    b[i] = s;
  }
}

int banded_count_below(const BandedSymmetric& a, double shift) {
  double s = shift;
  const double scale = std::max(1.0, a.scale());
  for (int attempt = 0; attempt < 8; ++attempt) {
    const BandedLdlt f = banded_ldlt(a, s);
    if (!f.breakdown) return f.negative_pivots;
    s += scale * 1e-12 * (attempt + 1);
  }
  fail(ErrorCode::Numeric, "banded inertia count: factorization breakdown persists");
}

// ---------------------------------------------------------------------------
// Shift-invert subspace iteration
// ---------------------------------------------------------------------------

namespace {

// deterministic standard normals from explicit Box-Muller over mt19937_64 bits
struct SeededNormals {
  std::mt19937_64 gen;
  bool have_spare = false;
  double spare = 0.0;

  explicit SeededNormals(uint64_t seed) : gen(seed) {}

  double uniform01() {
    return ((gen() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }
  double next() {
    if (have_spare) {
      have_spare = false;
      return spare;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare = r * std::sin(2.0 * kPi * u2);
    have_spare = true;
    return r * std::cos(2.0 * kPi * u2);
  }
};

}  // namespace

SpectrumResult lowest_eigenpairs_banded(const BandedSymmetric& a, int k, double shift,
                                        uint64_t seed, double residual_tol) {
  const int n = a.dim;
  if (k < 1 || k > 20) fail(ErrorCode::InvalidArgument, "lowest_eigenpairs: k must be in [1, 20]");
  if (k > n) fail(ErrorCode::InvalidArgument, "lowest_eigenpairs: k exceeds dimension");
  const double scale = std::max(1.0, a.scale());

  BandedLdlt fac;
  double s = shift;
  bool factored = false;
  for (int attempt = 0; attempt < 8 && !factored; ++attempt) {
    fac = banded_ldlt(a, s);
    factored = !fac.breakdown;
    if (!factored) s -= scale * 1e-10 * (attempt + 1);  // retry contract: perturb the shift
  }
  if (!factored) fail(ErrorCode::Numeric, "lowest_eigenpairs: shift factorization breakdown");

  const int m = std::min(n, std::min(k + 8, 2 * k + 4));
  SeededNormals rng(seed);
  std::vector<std::vector<double>> X(m, std::vector<double>(n));
  for (auto& col : X)
    for (double& x : col) x = rng.next();

  auto orthonormalize = [&](std::vector<std::vector<double>>& cols) {
    for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
      for (int p = 0; p < j; ++p) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += cols[p][i] * cols[j][i];
        for (int i = 0; i < n; ++i) cols[j][i] -= dot * cols[p][i];
      }
      double nrm = 0.0;
      for (int i = 0; i < n; ++i) nrm += cols[j][i] * cols[j][i];
      nrm = std::sqrt(nrm);
      if (nrm < 1e-300) {
        for (double& x : cols[j]) x = rng.next();  // re-seed a collapsed direction
        --j;
        continue;
      }
      for (int i = 0; i < n; ++i) cols[j][i] /= nrm;
    }
  };

  std::vector<double> theta;
  std::vector<double> resid(k, std::numeric_limits<double>::infinity());
  const int max_iter = 500;
  bool converged = false;
  for (int iter = 0; iter < max_iter && !converged; ++iter) {
    for (auto& col : X) fac.solve_in_place(col);
    orthonormalize(X);

    // Rayleigh-Ritz on the block
    std::vector<std::vector<double>> AX(m);
    for (int j = 0; j < m; ++j) AX[j] = a.apply(X[j]);
    std::vector<double> H(static_cast<std::size_t>(m) * m);
    for (int p = 0; p < m; ++p)
      for (int q = p; q < m; ++q) {
        double dot = 0.0;
        for (int i = 0; i < n; ++i) dot += X[p][i] * AX[q][i];
        H[static_cast<std::size_t>(p) * m + q] = dot;
        H[static_cast<std::size_t>(q) * m + p] = dot;
      }
    std::vector<double> vals, vecs;
    jacobi_symmetric(H, m, vals, vecs);

    std::vector<std::vector<double>> Y(m, std::vector<double>(n, 0.0));
    for (int j = 0; j < m; ++j)
      for (int p = 0; p < m; ++p) {
        const double w = vecs[static_cast<std::size_t>(p) * m + j];
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i) Y[j][i] += w * X[p][i];
      }
    X = std::move(Y);
    theta = vals;

    converged = true;
    for (int j = 0; j < k; ++j) {
      const std::vector<double> ax = a.apply(X[j]);
      double rr = 0.0, nrm = 0.0;
      for (int i = 0; i < n; ++i) {
        const double t = ax[i] - theta[j] * X[j][i];
        rr += t * t;
        nrm += X[j][i] * X[j][i];
      }
      resid[j] = std::sqrt(rr / nrm);
      if (resid[j] > residual_tol * scale) converged = false;
    }
  }
  if (!converged) fail(ErrorCode::Numeric, "subspace iteration failed to converge");

  SpectrumResult r;
  r.tol = residual_tol * scale;
  for (int j = 0; j < k; ++j) {
    if (theta[j] <= shift) continue;  // report only eigenvalues above the shift
    r.eigenvalues.push_back(theta[j]);
    r.multiplicities.push_back(1);
    r.eigenvectors.push_back(X[j]);
    r.residuals.push_back(resid[j]);
  }
  if (static_cast<int>(r.eigenvalues.size()) < k) {
    for (int j = k; j < m && static_cast<int>(r.eigenvalues.size()) < k; ++j) {
      if (theta[j] <= shift) continue;
      r.eigenvalues.push_back(theta[j]);
      r.multiplicities.push_back(1);
      r.eigenvectors.push_back(X[j]);
      r.residuals.push_back(-1.0);  // unvalidated guard vector
    }
  }
  return r;
}

SpectrumResult lowest_eigenpairs_2d(const GuideOperator& op, int k, double shift, uint64_t seed,
                                    double residual_tol) {
  SpectrumResult r = lowest_eigenpairs_banded(op.matrix, k, shift, seed, residual_tol);
  r.grid_h = op.grid.hx();
  r.domain_length = 2.0 * op.grid.x_half_length;
  return r;
}

}  // namespace cylspec
