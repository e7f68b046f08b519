#include "operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cylspec {

bool TridiagonalComplex::is_symmetric() const {
  return lower == upper;
}

std::vector<cplx> TridiagonalComplex::apply(const std::vector<cplx>& v) const {
  const int n = dim();
  std::vector<cplx> w(n);
  for (int i = 0; i < n; ++i) {
    cplx s = diag[i] * v[i];
    if (i > 0) s += lower[i - 1] * v[i - 1];
    if (i + 1 < n) s += upper[i] * v[i + 1];
    w[i] = s;
  }
  return w;
}

TridiagonalReal assemble_potential_operator(const std::function<double(double)>& potential,
                                            const Grid1D& grid, std::string provenance) {
  grid.validate();
  const int n = grid.n_points;
  const double h = grid.spacing();
  TridiagonalReal op;
  op.grid = grid;
  op.provenance = std::move(provenance);
  op.diag.resize(n);
  op.off.assign(n - 1, -1.0 / (h * h));
  for (int i = 0; i < n; ++i) op.diag[i] = 2.0 / (h * h) + potential(grid.point(i));
  return op;
}

TridiagonalReal assemble_mode_operator(const SeparableModel& model, double sigma,
                                       const Grid1D& grid) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "mode operator: separable n=%d delta=%g amplitude=%g sigma=%.17g",
                model.n(), model.delta(), model.amplitude(), sigma);
  return assemble_potential_operator([&](double x) { return model.potential(sigma, x); }, grid,
                                     buf);
}

TridiagonalReal assemble_mode_operator(const SquareWellModel& model, const Grid1D& grid) {
  model.validate();
  char buf[128];
  std::snprintf(buf, sizeof(buf), "mode operator: square well depth=%g halfwidth=%g", model.depth,
                model.halfwidth);
  return assemble_potential_operator([&](double x) { return model.potential(x); }, grid, buf);
}

TridiagonalComplex assemble_deformed_potential_operator(
    const std::function<cplx(cplx)>& potential, const Grid1D& grid,
    const ScalingProfile& profile, const ScalingParameter& lambda, std::string provenance) {
  grid.validate();
  profile.validate();
  lambda.validate();

  const int n = grid.n_points;
  const double h = grid.spacing();
  const cplx lam = lambda.lambda;

  auto jac = [&](double x) -> cplx {
    const auto [s, sp] = profile.shifted(x);
    (void)s;
    return 1.0 + lam * sp;
  };

  std::vector<cplx> jn(n);          // at nodes
  std::vector<cplx> jm(n + 1);      // at cell midpoints x_min + (i + 1/2) h
  for (int i = 0; i < n; ++i) jn[i] = jac(grid.point(i));
  for (int i = 0; i <= n; ++i) jm[i] = jac(grid.x_min + h * (i + 0.5));

  TridiagonalComplex op;
  op.grid = grid;
  op.provenance = std::move(provenance);
  op.diag.resize(n);
  op.lower.resize(n - 1);
  op.upper.resize(n - 1);
  for (int i = 0; i < n; ++i) {
    const double x = grid.point(i);
    const cplx z = x + lam * profile.shifted(x).first;
    op.diag[i] = (1.0 / (jn[i] * h * h)) * (1.0 / jm[i + 1] + 1.0 / jm[i]) + potential(z);
  }
  for (int i = 0; i + 1 < n; ++i) {
    const cplx e = -1.0 / (h * h * jm[i + 1] * std::sqrt(jn[i] * jn[i + 1]));
    op.lower[i] = e;
    op.upper[i] = e;
  }
  return op;
}

TridiagonalComplex assemble_deformed_mode_operator(const SeparableModel& model, double sigma,
                                                   const Grid1D& grid,
                                                   const ScalingProfile& profile,
                                                   const ScalingParameter& lambda) {
  // the contour must sample only the analytic tail of V_k
  if (model.amplitude() != 0.0 && profile.onset < model.c() + 1.0)
    fail(ErrorCode::Parameter, "deformed assembly requires R >= c + 1");
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "deformed mode operator: separable n=%d delta=%g amplitude=%g sigma=%.17g "
                "lambda=(%.17g,%.17g) R=%g",
                model.n(), model.delta(), model.amplitude(), sigma, lambda.lambda.real(),
                lambda.lambda.imag(), profile.onset);
  return assemble_deformed_potential_operator(
      [&](cplx z) { return model.potential(sigma, z); }, grid, profile, lambda, buf);
}

TridiagonalComplex assemble_deformed_mode_operator(const SquareWellModel& model,
                                                   const Grid1D& grid,
                                                   const ScalingProfile& profile,
                                                   const ScalingParameter& lambda) {
  model.validate();
  if (profile.onset < model.halfwidth + 1.0)
    fail(ErrorCode::Parameter, "deformed assembly requires R >= halfwidth + 1");
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "deformed mode operator: square well depth=%g halfwidth=%g lambda=(%.17g,%.17g) R=%g",
                model.depth, model.halfwidth, lambda.lambda.real(), lambda.lambda.imag(),
                profile.onset);
  return assemble_deformed_potential_operator([&](cplx z) { return model.potential(z); }, grid,
                                              profile, lambda, buf);
}

TridiagonalComplex to_complex(const TridiagonalReal& op) {
  TridiagonalComplex c;
  c.grid = op.grid;
  c.provenance = op.provenance;
  c.diag.assign(op.diag.begin(), op.diag.end());
  c.lower.assign(op.off.begin(), op.off.end());
  c.upper = c.lower;
  return c;
}

TridiagonalComplex conjugate_operator(const TridiagonalComplex& op, cplx beta,
                                      const ScalingProfile& profile) {
  profile.validate();
  const int n = op.dim();
  TridiagonalComplex out = op;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "; conjugated beta=(%.17g,%.17g)", beta.real(), beta.imag());
  out.provenance += buf;

  std::vector<cplx> d(n);
  for (int i = 0; i < n; ++i)
    d[i] = std::exp(beta * profile.shifted(op.grid.point(i)).first);
  // (D^{-1} A D): upper_i scales by d_{i+1}/d_i, lower_i by d_i/d_{i+1}
  for (int i = 0; i + 1 < n; ++i) {
    const cplx r = d[i + 1] / d[i];
    out.upper[i] = op.upper[i] * r;
    out.lower[i] = op.lower[i] / r;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Banded symmetric storage
// ---------------------------------------------------------------------------

double BandedSymmetric::at(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (j - i > bandwidth) return 0.0;
  return data[static_cast<std::size_t>(i) * (bandwidth + 1) + (j - i)];
}

double& BandedSymmetric::entry(int i, int j) {
  return data[static_cast<std::size_t>(i) * (bandwidth + 1) + (j - i)];
}

std::vector<double> BandedSymmetric::apply(const std::vector<double>& v) const {
  std::vector<double> w(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    const std::size_t row = static_cast<std::size_t>(i) * (bandwidth + 1);
    w[i] += data[row] * v[i];
    const int jmax = std::min(dim - 1, i + bandwidth);
    for (int j = i + 1; j <= jmax; ++j) {
      const double a = data[row + (j - i)];
      w[i] += a * v[j];
      w[j] += a * v[i];
    }
  }
  return w;
}

double BandedSymmetric::scale() const {
  double best = 0.0;
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int j = std::max(0, i - bandwidth); j <= std::min(dim - 1, i + bandwidth); ++j)
      s += std::abs(at(i, j));
    best = std::max(best, s);
  }
  return best;
}

std::vector<double> BandedSymmetric::dense() const {
  std::vector<double> a(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i)
    for (int j = std::max(0, i - bandwidth); j <= std::min(dim - 1, i + bandwidth); ++j)
      a[static_cast<std::size_t>(i) * dim + j] = at(i, j);
  return a;
}

// ---------------------------------------------------------------------------
// Guide assembly
// ---------------------------------------------------------------------------

namespace {

struct SectionLayout {
  double y_lo = 0.0, y_hi = 1.0;
  bool keep_lo = false, keep_hi = false;  // natural walls keep the boundary node
};

SectionLayout section_layout(GuideBoundary boundary, GuideSector sector) {
  SectionLayout lay;
  const bool wall_natural = boundary == GuideBoundary::Neumann;
  switch (sector) {
    case GuideSector::Full:
      lay.y_lo = -1.0;
      lay.y_hi = 1.0;
      lay.keep_lo = wall_natural;
      lay.keep_hi = wall_natural;
      break;
    case GuideSector::Even:  // natural at the symmetry axis
      lay.y_lo = 0.0;
      lay.y_hi = 1.0;
      lay.keep_lo = true;
      lay.keep_hi = wall_natural;
      break;
    case GuideSector::Odd:  // Dirichlet at the symmetry axis
      lay.y_lo = 0.0;
      lay.y_hi = 1.0;
      lay.keep_lo = false;
      lay.keep_hi = wall_natural;
      break;
  }
  return lay;
}

}  // namespace

GuideOperator assemble_guide_operator(const PlanarGuideModel& model, const Grid2D& grid,
                                      GuideBoundary boundary, GuideSector sector) {
  grid.validate();
  const SectionLayout lay = section_layout(boundary, sector);
  const double hx = grid.hx();
  const double hy = (lay.y_hi - lay.y_lo) / grid.ny;

  const int jlo = lay.keep_lo ? 0 : 1;
  const int jhi = lay.keep_hi ? grid.ny : grid.ny - 1;
  const int nyd = jhi - jlo + 1;
  if (nyd < 2) fail(ErrorCode::InvalidArgument, "guide grid: too few transverse unknowns");
  const int ndof = grid.nx * nyd;

  auto dof = [&](int i, int j) -> int {
    if (i < 1 || i > grid.nx) return -1;
    if (j < jlo || j > jhi) return -1;
    return (i - 1) * nyd + (j - jlo);
  };

  GuideOperator op;
  op.grid = grid;
  op.boundary = boundary;
  op.sector = sector;
  op.ny_dof = nyd;
  op.y_nodes.resize(nyd);
  for (int j = jlo; j <= jhi; ++j) op.y_nodes[j - jlo] = lay.y_lo + j * hy;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "guide operator: delta=%g amplitude=%g Lx=%g nx=%d ny=%d boundary=%s sector=%s",
                model.delta(), model.amplitude(), grid.x_half_length, grid.nx, grid.ny,
                boundary == GuideBoundary::Dirichlet ? "dirichlet" : "neumann",
                sector == GuideSector::Full ? "full" : (sector == GuideSector::Even ? "even" : "odd"));
  op.provenance = buf;

  BandedSymmetric& K = op.matrix;
  K.dim = ndof;
  K.bandwidth = nyd + 1;
  K.data.assign(static_cast<std::size_t>(ndof) * (K.bandwidth + 1), 0.0);
  std::vector<double> mass(ndof, 0.0);

  const double gauss[2] = {0.5 - 0.5 / std::sqrt(3.0), 0.5 + 0.5 / std::sqrt(3.0)};

  // bilinear elements over the (nx + 1) x ny cells
  for (int ie = 0; ie <= grid.nx; ++ie) {
    const double x0 = -grid.x_half_length + ie * hx;
    for (int je = 0; je < grid.ny; ++je) {
      const double y0 = lay.y_lo + je * hy;
      const int nodes[4][2] = {{ie, je}, {ie + 1, je}, {ie + 1, je + 1}, {ie, je + 1}};
      int dofs[4];
      for (int a = 0; a < 4; ++a) dofs[a] = dof(nodes[a][0], nodes[a][1]);

      double Ke[4][4] = {};
      double Me[4] = {};
      for (double gx : gauss) {
        for (double gy : gauss) {
          const double s = x0 + gx * hx;
          const double y = y0 + gy * hy;
          const GuideMetric m = model.metric_at(s, y);
          // sqrt(det g) g^{-1}
          const double a11 = m.sqrt_det * m.inv00;
          const double a12 = m.sqrt_det * m.inv01;
          const double a22 = m.sqrt_det * m.inv11;
          const double w = 0.25 * hx * hy;
          const double xi = gx, eta = gy;
          const double N[4] = {(1 - xi) * (1 - eta), xi * (1 - eta), xi * eta, (1 - xi) * eta};
          const double dNx[4] = {-(1 - eta) / hx, (1 - eta) / hx, eta / hx, -eta / hx};
          const double dNy[4] = {-(1 - xi) / hy, -xi / hy, xi / hy, (1 - xi) / hy};
          for (int a = 0; a < 4; ++a) {
            Me[a] += w * m.sqrt_det * N[a];
            for (int b = 0; b < 4; ++b)
              Ke[a][b] += w * (a11 * dNx[a] * dNx[b] + a12 * (dNx[a] * dNy[b] + dNy[a] * dNx[b]) +
                               a22 * dNy[a] * dNy[b]);
          }
        }
      }
      for (int a = 0; a < 4; ++a) {
        if (dofs[a] < 0) continue;
        mass[dofs[a]] += Me[a];
        for (int b = 0; b < 4; ++b) {
          if (dofs[b] < 0 || dofs[a] > dofs[b]) continue;
          K.entry(dofs[a], dofs[b]) += Ke[a][b];
        }
      }
    }
  }

  // lumped-mass similarity: A = M^{-1/2} K M^{-1/2}
  std::vector<double> mscale(ndof);
  for (int i = 0; i < ndof; ++i) {
    if (!(mass[i] > 0.0)) fail(ErrorCode::Numeric, "guide assembly: nonpositive lumped mass");
    mscale[i] = 1.0 / std::sqrt(mass[i]);
  }
  for (int i = 0; i < ndof; ++i)
    for (int j = i; j <= std::min(ndof - 1, i + K.bandwidth); ++j)
      K.entry(i, j) *= mscale[i] * mscale[j];

  return op;
}

// ---------------------------------------------------------------------------
// Triplet export
// ---------------------------------------------------------------------------

namespace {

void append_triplet(std::string& out, int i, int j, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%d %d %.17g\n", i, j, v);
  out += buf;
}

void append_triplet(std::string& out, int i, int j, cplx v) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%d %d %.17g %.17g\n", i, j, v.real(), v.imag());
  out += buf;
}

}  // namespace

std::string triplet_text(const TridiagonalReal& op) {
  const int n = op.dim();
  std::string out;
  char head[96];
  std::snprintf(head, sizeof(head), "# tridiagonal real %d x %d: row col value\n", n, n);
  out += head;
  for (int i = 0; i < n; ++i) {
    if (i > 0) append_triplet(out, i, i - 1, op.off[i - 1]);
    append_triplet(out, i, i, op.diag[i]);
    if (i + 1 < n) append_triplet(out, i, i + 1, op.off[i]);
  }
  return out;
}

std::string triplet_text(const TridiagonalComplex& op) {
  const int n = op.dim();
  std::string out;
  char head[96];
  std::snprintf(head, sizeof(head), "# tridiagonal complex %d x %d: row col re im\n", n, n);
  out += head;
  for (int i = 0; i < n; ++i) {
    if (i > 0) append_triplet(out, i, i - 1, op.lower[i - 1]);
    append_triplet(out, i, i, op.diag[i]);
    if (i + 1 < n) append_triplet(out, i, i + 1, op.upper[i]);
  }
  return out;
}

std::string triplet_text(const BandedSymmetric& m) {
  std::string out;
  char head[96];
  std::snprintf(head, sizeof(head), "# symmetric banded %d x %d bandwidth %d: row col value\n",
                m.dim, m.dim, m.bandwidth);
  out += head;
  for (int i = 0; i < m.dim; ++i)
    for (int j = i; j <= std::min(m.dim - 1, i + m.bandwidth); ++j) {
      const double v = m.at(i, j);
      if (v != 0.0 || i == j) append_triplet(out, i, j, v);
    }
  return out;
}

}  // namespace cylspec
