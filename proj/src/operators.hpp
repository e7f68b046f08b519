#pragma once

#include <functional>
#include <string>
#include <vector>

#include "grid.hpp"
#include "models.hpp"

namespace cylspec {

// ---------------------------------------------------------------------------
// 1D mode operators
// ---------------------------------------------------------------------------

// Symmetric by construction: -d^2/dx^2 + V with the 3-point stencil.
struct TridiagonalReal {
  std::vector<double> diag;
  std::vector<double> off;
  Grid1D grid;
  std::string provenance;

  int dim() const { return static_cast<int>(diag.size()); }
};

// General complex tridiagonal. Deformed assemblies are complex symmetric
// (lower == upper); conjugation makes the two bands differ.
struct TridiagonalComplex {
  std::vector<cplx> diag;
  std::vector<cplx> lower;
  std::vector<cplx> upper;
  Grid1D grid;
  std::string provenance;

  int dim() const { return static_cast<int>(diag.size()); }
  bool is_symmetric() const;
  std::vector<cplx> apply(const std::vector<cplx>& v) const;
};

TridiagonalReal assemble_potential_operator(const std::function<double(double)>& potential,
                                            const Grid1D& grid, std::string provenance);

// -d^2/dx^2 + V_k(x) per mode; mode eigenvalues report as mu = sigma + E.
// Model potentials are even in x: a symmetric grid [-L, L] realizes the
// full-line mode problem, a half-line grid [0, L] its axis-wall restriction.
TridiagonalReal assemble_mode_operator(const SeparableModel& model, double sigma,
                                       const Grid1D& grid);
TridiagonalReal assemble_mode_operator(const SquareWellModel& model, const Grid1D& grid);

// Flux-form discretization of -(1/j) d/dx ((1/j) d/dx) + V(x + lambda s_R(x)),
// symmetrized by the sqrt(j) diagonal similarity; j at cell midpoints.
// lambda = 0 reproduces the real assembly bit-for-bit.
TridiagonalComplex assemble_deformed_potential_operator(
    const std::function<cplx(cplx)>& potential, const Grid1D& grid,
    const ScalingProfile& profile, const ScalingParameter& lambda, std::string provenance);

TridiagonalComplex assemble_deformed_mode_operator(const SeparableModel& model, double sigma,
                                                   const Grid1D& grid,
                                                   const ScalingProfile& profile,
                                                   const ScalingParameter& lambda);
TridiagonalComplex assemble_deformed_mode_operator(const SquareWellModel& model,
                                                   const Grid1D& grid,
                                                   const ScalingProfile& profile,
                                                   const ScalingParameter& lambda);

TridiagonalComplex to_complex(const TridiagonalReal& op);

// D^{-1} A D with D = diag(exp(beta s(x_i - R))). beta = 0 returns op unchanged.
TridiagonalComplex conjugate_operator(const TridiagonalComplex& op, cplx beta,
                                      const ScalingProfile& profile);

// ---------------------------------------------------------------------------
// 2D straightened guide
// ---------------------------------------------------------------------------

enum class GuideBoundary { Dirichlet, Neumann };  // wall condition at the guide boundary |y| = 1
enum class GuideSector { Full, Even, Odd };

struct Grid2D {
  double x_half_length = 40.0;  // domain [-Lx, Lx], Dirichlet truncation in x
  int nx = 160;                 // interior x nodes
  int ny = 12;                  // y cells on the assembled section domain

  double hx() const { return 2.0 * x_half_length / (nx + 1); }
  void validate() const {
    if (!(x_half_length > 0.0)) fail(ErrorCode::InvalidArgument, "Grid2D: Lx must be positive");
    if (nx < 3 || ny < 2) fail(ErrorCode::InvalidArgument, "Grid2D: grid too small");
  }
};

// Symmetric banded matrix, upper storage: data[i * (bandwidth + 1) + (j - i)]
// holds A(i, j) for i <= j <= i + bandwidth.
struct BandedSymmetric {
  int dim = 0;
  int bandwidth = 0;
  std::vector<double> data;

  double at(int i, int j) const;
  double& entry(int i, int j);  // requires i <= j <= i + bandwidth
  std::vector<double> apply(const std::vector<double>& v) const;
  double scale() const;  // max absolute row sum
  std::vector<double> dense() const;
};

struct GuideOperator {
  BandedSymmetric matrix;
  Grid2D grid;
  GuideBoundary boundary = GuideBoundary::Dirichlet;
  GuideSector sector = GuideSector::Even;
  int ny_dof = 0;               // unknowns per x column
  std::vector<double> y_nodes;  // active y nodes, sector coordinates
  std::string provenance;
};

// Divergence-form operator of the straightened guide: bilinear elements with
// 2x2 Gauss quadrature on the metric coefficients, row-sum lumped mass.
// Neumann walls enter as natural boundary conditions (the conormal condition
// of the divergence form); sector Even/Odd assembles on y in [0,1] with a
// Neumann/Dirichlet wall at y = 0.
GuideOperator assemble_guide_operator(const PlanarGuideModel& model, const Grid2D& grid,
                                      GuideBoundary boundary, GuideSector sector);

// ---------------------------------------------------------------------------
// Plain-text triplet export (row col value, 0-based; complex as re im)
// ---------------------------------------------------------------------------

std::string triplet_text(const TridiagonalReal& op);
std::string triplet_text(const TridiagonalComplex& op);
std::string triplet_text(const BandedSymmetric& m);

}  // namespace cylspec
