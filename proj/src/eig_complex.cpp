#include "eig_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cylspec {

namespace {

constexpr int kDimensionCap = 2500;
constexpr int kItersPerEigenvalue = 40;
constexpr int kExceptionalEvery = 10;

double cabs1(cplx z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Parlett-Reinsch balancing by powers of two; exact similarity.
void balance(std::vector<cplx>& a, int n) {
  auto at = [&](int i, int j) -> cplx& { return a[static_cast<std::size_t>(i) * n + j]; };
  const double radix = 2.0;
  bool again = true;
  int pass = 0;
  while (again && pass++ < 40) {
    again = false;
    for (int i = 0; i < n; ++i) {
      double r = 0.0, c = 0.0;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        c += cabs1(at(j, i));
        r += cabs1(at(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double g = r / radix, f = 1.0;
      const double s = c + r;
      while (c < g) {
        f *= radix;
        c *= radix * radix;
      }
      g = r * radix;
      while (c > g) {
        f /= radix;
        c /= radix * radix;
      }
      if ((c + r) / f < 0.95 * s) {
        again = true;
        const double ginv = 1.0 / f;
        for (int j = 0; j < n; ++j) at(i, j) *= ginv;
        for (int j = 0; j < n; ++j) at(j, i) *= f;
      }
    }
  }
}

bool is_hessenberg(const std::vector<cplx>& a, int n) {
  for (int i = 2; i < n; ++i)
    for (int j = 0; j < i - 1; ++j)
      if (a[static_cast<std::size_t>(i) * n + j] != 0.0) return false;
  return true;
}

// Householder reduction to upper Hessenberg form.
void hessenberg(std::vector<cplx>& a, int n) {
  auto at = [&](int i, int j) -> cplx& { return a[static_cast<std::size_t>(i) * n + j]; };
  std::vector<cplx> v(n), w(n);
  for (int k = 0; k + 2 < n; ++k) {
    double xnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) xnorm2 += std::norm(at(i, k));
    if (xnorm2 == 0.0) continue;
    const cplx x0 = at(k + 1, k);
    const double xnorm = std::sqrt(xnorm2);
    const cplx phase = x0 == 0.0 ? cplx(1.0, 0.0) : x0 / std::abs(x0);
    const cplx alpha = -phase * xnorm;
    for (int i = k + 1; i < n; ++i) v[i] = at(i, k);
    v[k + 1] -= alpha;
    double vnorm2 = 0.0;
    for (int i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 == 0.0) continue;
    const double beta = 2.0 / vnorm2;

    // A <- (I - beta v v*) A : rows k+1..n-1
    for (int j = k; j < n; ++j) {
      cplx s = 0.0;
      for (int i = k + 1; i < n; ++i) s += std::conj(v[i]) * at(i, j);
      s *= beta;
      for (int i = k + 1; i < n; ++i) at(i, j) -= s * v[i];
    }
    // A <- A (I - beta v v*) : columns k+1..n-1
    for (int i = 0; i < n; ++i) {
      cplx s = 0.0;
      for (int j = k + 1; j < n; ++j) s += at(i, j) * v[j];
      s *= beta;
      for (int j = k + 1; j < n; ++j) at(i, j) -= s * std::conj(v[j]);
    }
    at(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) at(i, k) = 0.0;
  }
}

// complex Givens: returns (c, s) with c real so that [c, s; -conj(s), c] [a; b] = [r; 0]
void zrotg(cplx a, cplx b, double& c, cplx& s) {
  const double an = std::abs(a), bn = std::abs(b);
  if (bn == 0.0) {
    c = 1.0;
    s = 0.0;
    return;
  }
  if (an == 0.0) {
    c = 0.0;
    s = b == 0.0 ? cplx(1.0, 0.0) : std::conj(b) / bn;
    return;
  }
  const double nrm = std::hypot(an, bn);
  c = an / nrm;
  s = (a / an) * std::conj(b) / nrm;
}

// eigenvalues of [[a, b], [c, d]]; returns the root closer to d first
std::pair<cplx, cplx> eig2x2(cplx a, cplx b, cplx c, cplx d) {
  const cplx tr2 = 0.5 * (a + d);
  const cplx det = a * d - b * c;
  const cplx disc = std::sqrt(tr2 * tr2 - det);
  cplx l1 = tr2 + disc, l2 = tr2 - disc;
  // stabilize the smaller root through the product
  if (std::abs(l1) > std::abs(l2)) {
    if (l1 != 0.0) l2 = det / l1;
  } else if (l2 != 0.0) {
    l1 = det / l2;
  }
  if (std::abs(l1 - d) > std::abs(l2 - d)) std::swap(l1, l2);
  return {l1, l2};
}

}  // namespace

ComplexSpectrum complex_eigenvalues(std::vector<cplx> a, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "complex_eigenvalues: empty matrix");
  if (static_cast<std::size_t>(n) * n != a.size())
    fail(ErrorCode::InvalidArgument, "complex_eigenvalues: shape mismatch");
  if (n > kDimensionCap)
    fail(ErrorCode::InvalidArgument, "complex_eigenvalues: dimension exceeds desk-scale cap 2500");

  cplx trace = 0.0;
  for (int i = 0; i < n; ++i) trace += a[static_cast<std::size_t>(i) * n + i];

  ComplexSpectrum out;
  out.eigenvalues.assign(n, cplx(0.0, 0.0));
  out.converged.assign(n, false);
  out.iterations.assign(n, 0);

  balance(a, n);
  if (!is_hessenberg(a, n)) hessenberg(a, n);

  auto at = [&](int i, int j) -> cplx& { return a[static_cast<std::size_t>(i) * n + j]; };
  const double eps = std::numeric_limits<double>::epsilon();
  const double smallnum = std::numeric_limits<double>::min() / eps;

  std::vector<double> cs(n);
  std::vector<cplx> sn(n);

  int hi = n - 1;
  int its = 0;
  while (hi >= 0) {
    // find the active block [lo, hi]: walk up until a negligible subdiagonal
    int lo = hi;
    while (lo > 0) {
      const double sub = cabs1(at(lo, lo - 1));
      if (sub <= smallnum ||
          sub <= 0.25 * eps * (cabs1(at(lo - 1, lo - 1)) + cabs1(at(lo, lo)))) {
        at(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }

    if (lo == hi) {
      out.eigenvalues[hi] = at(hi, hi);
      out.converged[hi] = true;
      out.iterations[hi] = its;
      --hi;
      its = 0;
      continue;
    }
    if (lo == hi - 1) {
      const auto [l1, l2] = eig2x2(at(lo, lo), at(lo, hi), at(hi, lo), at(hi, hi));
      out.eigenvalues[hi] = l1;
      out.eigenvalues[lo] = l2;
      out.converged[hi] = out.converged[lo] = true;
      out.iterations[hi] = out.iterations[lo] = its;
      hi = lo - 1;
      its = 0;
      continue;
    }

    if (its >= kItersPerEigenvalue) {
      // declare the remaining block unconverged and report what we have
      for (int i = lo; i <= hi; ++i) {
        out.eigenvalues[i] = at(i, i);
        out.converged[i] = false;
      }
      out.all_converged = false;
      hi = lo - 1;
      its = 0;
      continue;
    }
    ++its;

    // shift selection
    cplx sigma;
    if (its % kExceptionalEvery == 0) {
      sigma = at(hi, hi) + 0.75 * std::abs(at(hi, hi - 1).real()) +
              0.75 * std::abs(at(hi, hi - 1).imag());
    } else {
      sigma = eig2x2(at(hi - 1, hi - 1), at(hi - 1, hi), at(hi, hi - 1), at(hi, hi)).first;
    }

    // explicit single-shift QR sweep on the active block
    for (int i = lo; i <= hi; ++i) at(i, i) -= sigma;
    for (int i = lo; i < hi; ++i) {
      zrotg(at(i, i), at(i + 1, i), cs[i], sn[i]);
      const double c = cs[i];
      const cplx s = sn[i];
      for (int j = i; j <= hi; ++j) {
        const cplx t1 = at(i, j), t2 = at(i + 1, j);
        at(i, j) = c * t1 + s * t2;
        at(i + 1, j) = -std::conj(s) * t1 + c * t2;
      }
    }
    for (int i = lo; i < hi; ++i) {
      const double c = cs[i];
      const cplx s = sn[i];
      const int rmax = std::min(i + 1, hi);
      for (int r = lo; r <= rmax; ++r) {
        const cplx t1 = at(r, i), t2 = at(r, i + 1);
        at(r, i) = c * t1 + std::conj(s) * t2;
        at(r, i + 1) = -s * t1 + c * t2;
      }
    }
    for (int i = lo; i <= hi; ++i) at(i, i) += sigma;
  }

  cplx sum = 0.0;
  for (const cplx& e : out.eigenvalues) sum += e;
  out.trace_error = std::abs(sum - trace);
  return out;
}

std::vector<cplx> tridiagonal_to_dense(const TridiagonalComplex& op) {
  const int n = op.dim();
  if (n > kDimensionCap)
    fail(ErrorCode::InvalidArgument, "tridiagonal_to_dense: dimension exceeds desk-scale cap 2500");
  std::vector<cplx> a(static_cast<std::size_t>(n) * n, cplx(0.0, 0.0));
  for (int i = 0; i < n; ++i) {
    a[static_cast<std::size_t>(i) * n + i] = op.diag[i];
    if (i + 1 < n) {
      a[static_cast<std::size_t>(i) * n + i + 1] = op.upper[i];
      a[static_cast<std::size_t>(i + 1) * n + i] = op.lower[i];
    }
  }
  return a;
}

ComplexSpectrum complex_eigenvalues(const TridiagonalComplex& op) {
  return complex_eigenvalues(tridiagonal_to_dense(op), op.dim());
}

// ---------------------------------------------------------------------------
// Nearest eigenvalue by shift-invert iteration
// ---------------------------------------------------------------------------

namespace {

// complex tridiagonal LU with partial pivoting (gttrf layout)
struct TridiagLUZ {
  std::vector<cplx> dl, d, du, du2;
  std::vector<int> piv;

  void factor(const TridiagonalComplex& op, cplx shift) {
    const int n = op.dim();
    d.resize(n);
    dl.assign(n > 1 ? n - 1 : 0, 0.0);
    du.assign(n > 1 ? n - 1 : 0, 0.0);
    du2.assign(n > 2 ? n - 2 : 0, 0.0);
    piv.assign(n, 0);
    for (int i = 0; i < n; ++i) d[i] = op.diag[i] - shift;
    for (int i = 0; i + 1 < n; ++i) {
      dl[i] = op.lower[i];
      du[i] = op.upper[i];
    }
    const double tiny = std::numeric_limits<double>::min();
    for (int i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        piv[i] = 0;
        if (d[i] == 0.0) d[i] = tiny;
        const cplx f = dl[i] / d[i];
        dl[i] = f;
        d[i + 1] -= f * du[i];
      } else {
        piv[i] = 1;
        const cplx f = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = f;
        const cplx tmp = du[i];
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

  void solve(std::vector<cplx>& b) const {
    const int n = static_cast<int>(d.size());
    for (int i = 0; i + 1 < n; ++i) {
      if (piv[i] == 0) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const cplx tmp = b[i];
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

double tridiag_scale_z(const TridiagonalComplex& op) {
  double s = 1.0;
  const int n = op.dim();
  for (int i = 0; i < n; ++i) {
    double row = std::abs(op.diag[i]);
    if (i > 0) row += std::abs(op.lower[i - 1]);
    if (i + 1 < n) row += std::abs(op.upper[i]);
    s = std::max(s, row);
  }
  return s;
}

}  // namespace

NearestEigenvalue nearest_eigenvalue(const TridiagonalComplex& op, cplx target) {
  const int n = op.dim();
  const double scale = tridiag_scale_z(op);
  TridiagLUZ lu;
  lu.factor(op, target);

  std::vector<cplx> v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 1e-3 * std::sin(0.7 * (i + 1));
  double nrm = 0.0;
  for (const cplx& x : v) nrm += std::norm(x);
  nrm = std::sqrt(nrm);
  for (cplx& x : v) x /= nrm;

  const double res_target = 1e-11 * scale;
  NearestEigenvalue result;
  result.value = target;
  cplx mu = target;
  double residual = std::numeric_limits<double>::infinity();

  for (int iter = 0; iter < 120; ++iter) {
    lu.solve(v);
    nrm = 0.0;
    for (const cplx& x : v) nrm += std::norm(x);
    nrm = std::sqrt(nrm);
    for (cplx& x : v) x /= nrm;

    const std::vector<cplx> w = op.apply(v);
    cplx num = 0.0;
    for (int i = 0; i < n; ++i) num += std::conj(v[i]) * w[i];
    mu = num;  // v is unit; Hermitian quotient tracks the converging eigenvector

    double rr = 0.0;
    for (int i = 0; i < n; ++i) rr += std::norm(w[i] - mu * v[i]);
    residual = std::sqrt(rr);
    result.iterations = iter + 1;
    if (residual <= res_target) break;
    // pure shift-invert power steps first (locks onto the nearest eigenvalue),
    // then Rayleigh updates for the polish
    if (iter >= 4) lu.factor(op, mu);
  }
  if (!(residual <= res_target))
    fail(ErrorCode::Numeric, "nearest_eigenvalue: shift-invert iteration did not converge");
  result.value = mu;
  result.residual = residual;
  return result;
}

}  // namespace cylspec
