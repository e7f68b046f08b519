#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "eig_real.hpp"
#include "oracles.hpp"

using namespace cylspec;

namespace {

TridiagonalReal stencil_op(int n, double h) {
  TridiagonalReal op;
  op.grid = Grid1D{0.0, h * (n + 1), n};
  op.diag.assign(n, 2.0 / (h * h));
  op.off.assign(n - 1, -1.0 / (h * h));
  op.provenance = "test stencil";
  return op;
}

}  // namespace

TEST_CASE("sturm counting on the 3x3 stencil") {
  const TridiagonalReal op = stencil_op(3, 1.0);
  // eigenvalues 2 - sqrt(2), 2, 2 + sqrt(2)
  CHECK(sturm_count(op, 2.0) == 1);
  CHECK(sturm_count(op, 4.0) == 3);
  CHECK(sturm_count(op, -5.0) == 0);
  CHECK(sturm_count(op, 0.4) == 0);
  CHECK(sturm_count(op, 0.7) == 1);

  SUBCASE("monotone in the shift") {
    int prev = 0;
    for (double s = -1.0; s < 5.0; s += 0.01) {
      const int c = sturm_count(op, s);
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("window bisection") {
  const TridiagonalReal op = stencil_op(3, 1.0);

  SUBCASE("closed-form eigenvalues to 1e-12") {
    const SpectrumResult r = eigenvalues_in_window(op, {0.0, 3.0}, 1e-13);
    REQUIRE(r.eigenvalues.size() == 2);
    CHECK(r.eigenvalues[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
    CHECK(r.eigenvalues[1] == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("empty window below the spectrum") {
    const SpectrumResult r = eigenvalues_in_window(op, {-10.0, -5.0}, 1e-12);
    CHECK(r.eigenvalues.empty());
  }

  SUBCASE("count differences match the located eigenvalues") {
    const SpectrumResult r = eigenvalues_in_window(op, {0.0, 5.0}, 1e-12);
    int total = 0;
    for (int m : r.multiplicities) total += m;
    CHECK(total == sturm_count(op, 5.0) - sturm_count(op, 0.0));
  }

  SUBCASE("partitioning the window does not move eigenvalues") {
    const double tol = 1e-12;
    const SpectrumResult whole = eigenvalues_in_window(op, {0.0, 4.0}, tol);
    const SpectrumResult left = eigenvalues_in_window(op, {0.0, 2.5}, tol);
    const SpectrumResult right = eigenvalues_in_window(op, {2.5, 4.0}, tol);
    std::vector<double> merged = left.eigenvalues;
    merged.insert(merged.end(), right.eigenvalues.begin(), right.eigenvalues.end());
    REQUIRE(merged.size() == whole.eigenvalues.size());
    for (std::size_t i = 0; i < merged.size(); ++i)
      CHECK(std::abs(merged[i] - whole.eigenvalues[i]) <= 2.0 * tol);
  }

  SUBCASE("invalid tolerance") {
    CHECK_THROWS_AS(eigenvalues_in_window(op, {0.0, 1.0}, 0.0), Error);
  }
}

TEST_CASE("bisection matches the dense Householder oracle on random tridiagonals") {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> entry(-2.0, 2.0);
  std::uniform_int_distribution<int> size(2, 50);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = size(gen);
    std::vector<double> diag(n), off(n - 1);
    for (double& d : diag) d = entry(gen);
    for (double& e : off) e = entry(gen);

    std::vector<double> dense(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) dense[static_cast<std::size_t>(i) * n + i] = diag[i];
    for (int i = 0; i + 1 < n; ++i) {
      dense[static_cast<std::size_t>(i) * n + i + 1] = off[i];
      dense[static_cast<std::size_t>(i + 1) * n + i] = off[i];
    }
    const std::vector<double> oracle = dense_symmetric_eigenvalues(dense, n);

    const auto [lo, hi] = gershgorin_bounds(diag, off);
    const auto found = bisect_eigenvalues(diag, off, lo - 1.0, hi + 1.0, 1e-12);
    std::vector<double> mine;
    for (const auto& [v, m] : found) mine.insert(mine.end(), m, v);
    REQUIRE(mine.size() == oracle.size());
    for (std::size_t i = 0; i < mine.size(); ++i)
      CHECK(std::abs(mine[i] - oracle[i]) <= 1e-10);
  }
}

TEST_CASE("inverse iteration") {
  SUBCASE("exact eigenvalue of the closed-form matrix") {
    const TridiagonalReal op = stencil_op(3, 1.0);
    const Eigenpair pair = inverse_iteration(op, 2.0 - std::sqrt(2.0));
    CHECK(std::abs(pair.value - (2.0 - std::sqrt(2.0))) <= 1e-12);
    CHECK(pair.residual <= 1e-12 * 4.0);
  }

  SUBCASE("ground state of the free operator matches the sine profile") {
    const int n = 199;
    const Grid1D grid{-10.0, 10.0, n};
    TridiagonalReal op = stencil_op(n, grid.spacing());
    op.grid = grid;
    const double h = grid.spacing();
    const double expected = (2.0 - 2.0 * std::cos(kPi / (n + 1))) / (h * h);
    const Eigenpair pair = inverse_iteration(op, expected + 1e-8);
    CHECK(std::abs(pair.value - expected) <= 1e-10);
    // eigenvector proportional to sin(pi (i+1) / (n+1)), grid-normalized
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = std::sin(kPi * (i + 1) / (n + 1));
      scale = std::max(scale, std::abs(pair.vector[i]) / s);
    }
    for (int i = 0; i < n; ++i) {
      const double s = scale * std::sin(kPi * (i + 1) / (n + 1));
      CHECK(std::abs(std::abs(pair.vector[i]) - s) <= 1e-6 * scale);
    }
    // grid normalization: sum v^2 h = 1
    double norm = 0.0;
    for (double v : pair.vector) norm += v * v * h;
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("degenerate cluster is refused") {
    TridiagonalReal op;
    op.grid = Grid1D{0.0, 4.0, 3};
    op.diag = {1.0, 1.0, 1.0};
    op.off = {1e-14, 1e-14};
    CHECK_THROWS_AS(inverse_iteration(op, 1.0), Error);
  }

  SUBCASE("orthogonality of eigenvectors for distinct eigenvalues") {
    const int n = 60;
    const Grid1D grid{0.0, 6.1, n};
    TridiagonalReal op = stencil_op(n, grid.spacing());
    op.grid = grid;
    const double h = grid.spacing();
    const double e1 = (2.0 - 2.0 * std::cos(1.0 * kPi / (n + 1))) / (h * h);
    const double e2 = (2.0 - 2.0 * std::cos(2.0 * kPi / (n + 1))) / (h * h);
    const Eigenpair p1 = inverse_iteration(op, e1);
    const Eigenpair p2 = inverse_iteration(op, e2);
    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += p1.vector[i] * p2.vector[i] * h;
    CHECK(std::abs(dot) <= 1e-8);
  }
}

TEST_CASE("banded LDLT inertia and solves") {
  // assemble a small guide operator and cross-check counts against the oracle
  const PlanarGuideModel guide(1.0, 1.0, 5.0);
  const Grid2D grid{6.0, 8, 5};
  const GuideOperator op =
      assemble_guide_operator(guide, grid, GuideBoundary::Dirichlet, GuideSector::Even);
  const std::vector<double> oracle = dense_symmetric_eigenvalues(op.matrix.dense(), op.matrix.dim);

  SUBCASE("inertia counts match the oracle at several shifts") {
    for (double shift : {-1.0, 0.5, 2.0, 5.0, 20.0}) {
      const int expected =
          static_cast<int>(std::count_if(oracle.begin(), oracle.end(),
                                         [&](double v) { return v < shift; }));
      CHECK(banded_count_below(op.matrix, shift) == expected);
    }
  }

  SUBCASE("factor solves against a known right-hand side") {
    const int n = op.matrix.dim;
    const BandedLdlt f = banded_ldlt(op.matrix, -1.0);
    REQUIRE_FALSE(f.breakdown);
    std::vector<double> x_true(n);
    for (int i = 0; i < n; ++i) x_true[i] = std::sin(0.3 * i + 0.7);
    std::vector<double> b = op.matrix.apply(x_true);
    for (int i = 0; i < n; ++i) b[i] += 1.0 * x_true[i];  // (A - (-1)) x
    f.solve_in_place(b);
    for (int i = 0; i < n; ++i) CHECK(std::abs(b[i] - x_true[i]) <= 1e-9);
  }
}

TEST_CASE("2D subspace iteration") {
  const PlanarGuideModel flat(1.0, 1.0, 0.0);  // f == 1 strip

  SUBCASE("small grids match the dense oracle to 1e-9 in every sector") {
    const PlanarGuideModel warped(1.0, 1.0, 5.0);
    for (const auto* model : {&flat, &warped}) {
      for (GuideBoundary b : {GuideBoundary::Dirichlet, GuideBoundary::Neumann}) {
        for (GuideSector s : {GuideSector::Full, GuideSector::Even, GuideSector::Odd}) {
          const Grid2D grid{4.0, 8, 4};
          const GuideOperator op = assemble_guide_operator(*model, grid, b, s);
          REQUIRE(op.matrix.dim <= 40);
          const std::vector<double> oracle =
              dense_symmetric_eigenvalues(op.matrix.dense(), op.matrix.dim);
          const SpectrumResult r = lowest_eigenpairs_2d(op, 5, oracle[0] - 1.0, 0, 1e-12);
          REQUIRE(r.eigenvalues.size() >= 5);
          for (int j = 0; j < 5; ++j) CHECK(std::abs(r.eigenvalues[j] - oracle[j]) <= 1e-9);
        }
      }
    }
  }

  SUBCASE("strip ground state approaches pi^2/4 from above as Lx grows") {
    double prev = 1e9;
    for (double lx : {6.0, 12.0, 24.0}) {
      const Grid2D grid{lx, static_cast<int>(lx * 6), 10};
      const GuideOperator op =
          assemble_guide_operator(flat, grid, GuideBoundary::Dirichlet, GuideSector::Even);
      const SpectrumResult r = lowest_eigenpairs_2d(op, 1, -0.5, 0);
      CHECK(r.eigenvalues[0] < prev);
      prev = r.eigenvalues[0];
    }
    CHECK(prev == doctest::Approx(kPi * kPi / 4).epsilon(5e-3));
  }

  SUBCASE("odd sector of the strip starts at pi^2") {
    const Grid2D grid{14.0, 70, 12};
    const GuideOperator op =
        assemble_guide_operator(flat, grid, GuideBoundary::Dirichlet, GuideSector::Odd);
    const SpectrumResult r = lowest_eigenpairs_2d(op, 1, -0.5, 0);
    CHECK(r.eigenvalues[0] == doctest::Approx(kPi * kPi).epsilon(5e-3));
  }

  SUBCASE("deterministic runs repeat bitwise") {
    const Grid2D grid{5.0, 10, 6};
    const GuideOperator op =
        assemble_guide_operator(flat, grid, GuideBoundary::Neumann, GuideSector::Odd);
    const SpectrumResult a = lowest_eigenpairs_2d(op, 4, -0.5, 7);
    const SpectrumResult b = lowest_eigenpairs_2d(op, 4, -0.5, 7);
    CHECK(a.eigenvalues == b.eigenvalues);
  }

  SUBCASE("k bounds are validated") {
    const Grid2D grid{4.0, 8, 5};
    const GuideOperator op =
        assemble_guide_operator(flat, grid, GuideBoundary::Dirichlet, GuideSector::Even);
    CHECK_THROWS_AS(lowest_eigenpairs_2d(op, 0, -1.0, 0), Error);
    CHECK_THROWS_AS(lowest_eigenpairs_2d(op, 21, -1.0, 0), Error);
  }

  SUBCASE("residual bound holds for every reported pair") {
    const Grid2D grid{6.0, 12, 6};
    const GuideOperator op =
        assemble_guide_operator(flat, grid, GuideBoundary::Dirichlet, GuideSector::Full);
    const SpectrumResult r = lowest_eigenpairs_2d(op, 5, -1.0, 3);
    for (std::size_t j = 0; j < r.eigenvalues.size(); ++j) {
      if (r.residuals[j] < 0.0) continue;  // guard vector
      CHECK(r.residuals[j] <= r.tol);
    }
  }
}

TEST_CASE("order-2 convergence of the lowest stencil eigenvalue") {
  // free operator on [-10, 10]: lowest eigenvalue converges at O(h^2)
  const double exact = kPi * kPi / 400.0;  // (pi / 20)^2
  double errors[2];
  int idx = 0;
  for (int n : {199, 399}) {
    const Grid1D grid{-10.0, 10.0, n};
    TridiagonalReal op;
    op.grid = grid;
    const double h = grid.spacing();
    op.diag.assign(n, 2.0 / (h * h));
    op.off.assign(n - 1, -1.0 / (h * h));
    const SpectrumResult r = eigenvalues_in_window(op, {exact / 2, exact * 2}, 1e-13);
    REQUIRE(!r.eigenvalues.empty());
    errors[idx++] = std::abs(r.eigenvalues[0] - exact);
  }
  const double ratio = errors[0] / errors[1];
  CHECK(ratio == doctest::Approx(4.0).epsilon(0.1));
}
