#pragma once

#include "common.hpp"

namespace cylspec {

// Uniform 1D grid of interior nodes; the operator is truncated with Dirichlet
// walls at x_min and x_max (the walls themselves carry no unknowns).
struct Grid1D {
  double x_min = 0.0;
  double x_max = 1.0;
  int n_points = 3;

  double spacing() const { return (x_max - x_min) / (n_points + 1); }
  double point(int i) const { return x_min + spacing() * (i + 1); }
  double length() const { return x_max - x_min; }

  void validate() const {
    if (!(x_max > x_min)) fail(ErrorCode::InvalidArgument, "Grid1D: x_max must exceed x_min");
    if (n_points < 3) fail(ErrorCode::InvalidArgument, "Grid1D: need at least 3 interior points");
  }

  // Grid covering [x_min, x_max] with spacing as close to h as the node count allows.
  static Grid1D with_spacing(double x_min, double x_max, double h) {
    Grid1D g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.n_points = static_cast<int>(std::lround((x_max - x_min) / h)) - 1;
    g.validate();
    return g;
  }
};

}  // namespace cylspec
