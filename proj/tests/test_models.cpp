#include <doctest.h>

#include <cmath>

#include "models.hpp"
#include "oracles.hpp"

using namespace cylspec;

namespace {

SeparableModel cylinder_model(int n = 1, double delta = 1.0, double c = 1.0,
                              double amplitude = 1.0) {
  CrossSectionSpec cross{CrossSectionKind::IntervalDirichlet, 1.0, 1};
  return SeparableModel(n, delta, c, amplitude, cross);
}

}  // namespace

TEST_CASE("threshold ladder closed forms") {
  const double pi2 = kPi * kPi;

  SUBCASE("interval Dirichlet") {
    const auto ladder =
        build_threshold_ladder({CrossSectionKind::IntervalDirichlet, 1.0, 1}, 3);
    REQUIRE(ladder.size() == 3);
    CHECK(ladder.value(0) == doctest::Approx(pi2 / 4).epsilon(1e-15));
    CHECK(ladder.value(1) == doctest::Approx(pi2).epsilon(1e-15));
    CHECK(ladder.value(2) == doctest::Approx(9 * pi2 / 4).epsilon(1e-15));
    for (std::size_t j = 0; j < 3; ++j) CHECK(ladder.multiplicity(j) == 1);
  }

  SUBCASE("interval Neumann starts at zero") {
    const auto ladder = build_threshold_ladder({CrossSectionKind::IntervalNeumann, 1.0, 1}, 2);
    CHECK(ladder.value(0) == 0.0);
    CHECK(ladder.value(1) == doctest::Approx(pi2 / 4).epsilon(1e-15));
  }

  SUBCASE("circle multiplicities") {
    const auto ladder = build_threshold_ladder({CrossSectionKind::Circle, 1.0, 1}, 3);
    CHECK(ladder.value(0) == 0.0);
    CHECK(ladder.value(1) == doctest::Approx(1.0));
    CHECK(ladder.value(2) == doctest::Approx(4.0));
    CHECK(ladder.multiplicity(0) == 1);
    CHECK(ladder.multiplicity(1) == 2);
    CHECK(ladder.multiplicity(2) == 2);
  }

  SUBCASE("copies scale multiplicities, not values") {
    const auto one = build_threshold_ladder({CrossSectionKind::IntervalDirichlet, 1.0, 1}, 4);
    const auto two = build_threshold_ladder({CrossSectionKind::IntervalDirichlet, 1.0, 2}, 4);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(one.value(j) == two.value(j));
      CHECK(two.multiplicity(j) == 2 * one.multiplicity(j));
    }
  }

  SUBCASE("invalid configuration") {
    CHECK_THROWS_AS(build_threshold_ladder({CrossSectionKind::Circle, -1.0, 1}, 2), Error);
    CHECK_THROWS_AS(build_threshold_ladder({CrossSectionKind::Circle, 1.0, 1}, 0), Error);
  }
}

TEST_CASE("circle ladder matches a periodic finite-difference oracle") {
  // 1D periodic Laplacian on a circle of radius 1, two resolutions
  auto fd_eigs = [](int n) {
    const double h = 2.0 * kPi / n;
    std::vector<double> eigs(n);
    for (int k = 0; k < n; ++k)
      eigs[k] = (2.0 - 2.0 * std::cos(2.0 * kPi * k / n)) / (h * h);
    std::sort(eigs.begin(), eigs.end());
    return eigs;
  };
  const auto ladder = build_threshold_ladder({CrossSectionKind::Circle, 1.0, 1}, 3);
  const auto flat = ladder.flattened();  // 0, 1, 1, 4, 4
  for (int n : {400, 800}) {
    const auto eigs = fd_eigs(n);
    const double tol = 200.0 / (n * n);  // second-order convergence
    for (std::size_t j = 0; j < flat.size(); ++j)
      CHECK(std::abs(eigs[j] - flat[j]) <= tol * std::max(1.0, flat[j]) + 1e-12);
  }
}

TEST_CASE("max decay rate") {
  const auto ladder = build_threshold_ladder({CrossSectionKind::IntervalDirichlet, 1.0, 1}, 2);

  SUBCASE("gap to the next threshold") {
    // ladder [pi^2/4, pi^2], mu = 2 -> sqrt(pi^2/4 - 2)
    const double rate = max_decay_rate(2.0, ladder);
    CHECK(rate == doctest::Approx(std::sqrt(kPi * kPi / 4 - 2.0)).epsilon(1e-14));
    CHECK(rate == doctest::Approx(0.68366).epsilon(1e-4));
  }

  SUBCASE("gap closes at the threshold") {
    const double nu1 = kPi * kPi / 4;
    CHECK(max_decay_rate(nu1 - 1e-9, ladder) == doctest::Approx(std::sqrt(1e-9)).epsilon(1e-3));
  }

  SUBCASE("simple arithmetic case") {
    const ThresholdLadder simple({{1.0, 1}, {4.0, 1}});
    CHECK(max_decay_rate(0.0, simple) == doctest::Approx(1.0));
  }

  SUBCASE("error paths") {
    CHECK_THROWS_AS(max_decay_rate(kPi * kPi / 4, ladder), Error);       // at a threshold
    CHECK_THROWS_AS(max_decay_rate(2.0 * kPi * kPi, ladder), Error);     // nothing above
  }
}

TEST_CASE("warp profile evaluation") {
  const SeparableModel model = cylinder_model();

  SUBCASE("closed-form tail value") {
    const ProfileValues v = model.profile(10.0);
    CHECK(v.f == doctest::Approx(std::pow(1.1, 0.25)).epsilon(1e-15));
    CHECK(v.f == doctest::Approx(1.024114).epsilon(1e-6));
  }

  SUBCASE("tail limit") {
    const ProfileValues v = model.profile(1e8);
    CHECK(v.f == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(std::abs(v.df) < 1e-8);
    CHECK(std::abs(v.ddf) < 1e-8);
  }

  SUBCASE("guide tail is affine in |s|^-delta") {
    const PlanarGuideModel guide(1.0, 1.0, 5.0);
    CHECK(guide.profile(10.0).f == doctest::Approx(1.5).epsilon(1e-15));
  }

  SUBCASE("derivatives match a finite-difference oracle") {
    auto fl = [&](long double x) -> long double {
      return std::pow(1.0L + 1.0L / x, 0.25L);
    };
    for (double x : {2.0, 5.0, 10.0}) {
      const ProfileValues v = model.profile(x);
      CHECK(v.df == doctest::Approx(test_oracles::derivative(fl, x, 1)).epsilon(1e-9));
      CHECK(v.ddf == doctest::Approx(test_oracles::derivative(fl, x, 2)).epsilon(1e-7));
    }
  }

  SUBCASE("profile is even") {
    for (double x : {0.3, 0.9, 4.0}) {
      const ProfileValues plus = model.profile(x);
      const ProfileValues minus = model.profile(-x);
      CHECK(plus.f == minus.f);
      CHECK(plus.df == -minus.df);
      CHECK(plus.ddf == minus.ddf);
    }
  }
}

TEST_CASE("tail is the exact closed form, not an approximation") {
  for (double delta : {0.5, 1.0, 2.0}) {
    for (double amplitude : {0.2, 1.0, 5.0}) {
      const SeparableModel model(2, delta, 1.0, amplitude,
                                 {CrossSectionKind::IntervalDirichlet, 1.0, 1});
      for (double x : {1.0, 1.7, 4.0, 12.0, 300.0}) {
        const double f4n = std::pow(model.profile(x).f, 4.0 / 2.0);
        const double closed = 1.0 + amplitude * std::pow(x, -delta);
        CHECK(std::abs(f4n - closed) <= 4e-16 * closed);
      }
    }
  }
}

TEST_CASE("bridge joins the tail with two continuous derivatives") {
  for (double delta : {0.5, 1.0, 2.0}) {
    for (double amplitude : {0.2, 1.0, 5.0}) {
      const WarpProfile warp(amplitude, delta, 1.0, 0.25);
      const double c = 1.0;
      const ProfileValues tail = warp.eval(c + 1e-14);
      const EvenQuarticBridge& b = warp.bridge();
      CHECK(std::abs(b.value(c) - tail.f) <= 1e-12 * std::max(1.0, std::abs(tail.f)));
      CHECK(std::abs(b.slope(c) - tail.df) <= 1e-12 * std::max(1.0, std::abs(tail.df)));
      CHECK(std::abs(b.curvature(c) - tail.ddf) <= 1e-12 * std::max(1.0, std::abs(tail.ddf)));
      CHECK(b.b0 >= tail.f);  // f(0) >= f(c)
      // positivity on a dense probe
      for (int i = 0; i <= 100; ++i) CHECK(warp.eval(i * c / 100.0).f > 0.0);
    }
  }
}

TEST_CASE("mode potential") {
  const SeparableModel model = cylinder_model();
  const double sigma = kPi * kPi / 4;

  SUBCASE("vanishes at infinity") {
    CHECK(std::abs(model.potential(sigma, 1e7)) < 1e-6);
  }

  SUBCASE("value at x = 10 against the differentiation oracle") {
    auto fl = [&](long double x) -> long double {
      return std::pow(1.0L + 1.0L / x, 0.25L);
    };
    const double f = std::pow(1.1, 0.25);
    const double fpp = test_oracles::derivative(fl, 10.0, 2);
    const double expected = fpp / f + (1.0 / 1.1 - 1.0) * sigma;
    CHECK(model.potential(sigma, 10.0) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(model.potential(sigma, 10.0) == doctest::Approx(-0.2239).epsilon(5e-4));
    // sigma = 0 leaves the curvature term alone
    CHECK(model.potential(0.0, 10.0) == doctest::Approx(fpp / f).epsilon(1e-8));
    CHECK(model.potential(0.0, 10.0) == doctest::Approx(4.3905e-4).epsilon(1e-4));
  }

  SUBCASE("complex argument inside the bridge is a contract violation") {
    CHECK_THROWS_AS(model.potential(sigma, cplx(0.5, 0.1)), Error);
    CHECK_NOTHROW(model.potential(sigma, cplx(0.5, 0.0)));  // real bridge is fine
  }

  SUBCASE("real-axis complex evaluation agrees bitwise with the real path") {
    for (double x : {0.2, 0.7, 3.0, 25.0}) {
      const cplx v = model.potential(sigma, cplx(x, 0.0));
      CHECK(v.imag() == 0.0);
      CHECK(v.real() == model.potential(sigma, x));
    }
  }

  SUBCASE("Schwarz reflection: conjugate argument gives conjugate value") {
    const cplx z(12.0, 1.3);
    const cplx v = model.potential(sigma, z);
    const cplx vbar = model.potential(sigma, std::conj(z));
    CHECK(std::abs(vbar - std::conj(v)) <= 1e-15 * std::abs(v));
  }
}

TEST_CASE("guide metric") {
  const PlanarGuideModel guide(1.0, 1.0, 5.0);

  SUBCASE("pullback values at s = 10") {
    // f = 1.5, f' = -0.05
    const GuideMetric m = guide.metric(9.0, 1.0);  // x + c = 10
    CHECK(m.g0 == doctest::Approx(1.0025).epsilon(1e-12));
    CHECK(m.g1 == doctest::Approx(-0.075).epsilon(1e-12));
    CHECK(m.g2 == doctest::Approx(2.25).epsilon(1e-12));
    CHECK(m.sqrt_det == doctest::Approx(1.5).epsilon(1e-12));
  }

  SUBCASE("axial symmetry: g1 vanishes on the axis") {
    for (double x : {-3.0, 0.0, 7.0}) CHECK(guide.metric(x, 0.0).g1 == 0.0);
  }

  SUBCASE("unwarped region gives the orthogonal product form") {
    const PlanarGuideModel flat(1.0, 1.0, 0.0);  // f == 1
    const GuideMetric m = flat.metric_at(3.0, 0.7);
    CHECK(m.g0 == 1.0);
    CHECK(m.g1 == 0.0);
    CHECK(m.g2 == 1.0);
    CHECK(m.sqrt_det == 1.0);
  }

  SUBCASE("inverse really inverts") {
    const GuideMetric m = guide.metric_at(2.5, 0.8);
    CHECK(m.g0 * m.inv00 + m.g1 * m.inv01 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.g0 * m.inv01 + m.g1 * m.inv11 == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(m.g1 * m.inv01 + m.g2 * m.inv11 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(m.sqrt_det * m.sqrt_det == doctest::Approx(m.g0 * m.g2 - m.g1 * m.g1).epsilon(1e-14));
  }

  SUBCASE("coefficients follow the chain rule on (s, t) = (x + c, f y)") {
    const GuideMetric m = guide.metric_at(4.0, 0.6);
    const ProfileValues v = guide.profile(4.0);
    CHECK(m.g0 == doctest::Approx(1.0 + v.df * v.df * 0.36).epsilon(1e-14));
    CHECK(m.g1 == doctest::Approx(v.f * v.df * 0.6).epsilon(1e-14));
  }
}

TEST_CASE("scaling function") {
  const ScalingProfile profile{3.0, 1.0};

  SUBCASE("vanishes below the onset") {
    const auto [s, sp] = profile.base(1.0);
    CHECK(s == 0.0);
    CHECK(sp == 0.0);
  }

  SUBCASE("exact half after the unit ramp") {
    const auto [s, sp] = profile.base(2.0);
    CHECK(s == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sp == 1.0);
  }

  SUBCASE("affine beyond the ramp") {
    const auto [s, sp] = profile.base(5.0);
    CHECK(s == doctest::Approx(3.5).epsilon(1e-15));
    CHECK(sp == 1.0);
  }

  SUBCASE("slope bounds and monotonicity on a dense probe") {
    double prev = -1.0;
    for (int i = 0; i <= 4000; ++i) {
      const double x = -1.0 + i * 2e-3;
      const auto [s, sp] = profile.base(x);
      CHECK(sp >= 0.0);
      CHECK(sp <= 1.0);
      CHECK(s >= prev - 1e-15);
      prev = s;
    }
  }

  SUBCASE("s' is continuous at the ramp ends") {
    const double w = profile.ramp_width;
    CHECK(profile.base(1.0 + 1e-12).second < 1e-8);
    CHECK(profile.base(1.0 + w - 1e-12).second > 1.0 - 1e-8);
  }
}

TEST_CASE("contour points") {
  const ScalingProfile profile{3.0, 1.0};

  SUBCASE("identity below the shifted onset") {
    const ContourPoint pt = contour_point(profile, {cplx(0.0, 0.3)}, 3.5);
    CHECK(pt.z == cplx(3.5, 0.0));
    CHECK(pt.jacobian == cplx(1.0, 0.0));
  }

  SUBCASE("closed ramp form at x = 10") {
    const ContourPoint pt = contour_point(profile, {cplx(0.0, 0.2)}, 10.0);
    CHECK(pt.z.real() == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(pt.z.imag() == doctest::Approx(1.1).epsilon(1e-15));
    CHECK(pt.jacobian == cplx(1.0, 0.2));
  }

  SUBCASE("real lambda stays on the real axis") {
    const ContourPoint pt = contour_point(profile, {cplx(0.25, 0.0)}, 8.0);
    CHECK(pt.z.imag() == 0.0);
    CHECK(pt.jacobian.imag() == 0.0);
  }

  SUBCASE("conjugate parameter gives the conjugate point") {
    const cplx lam(0.21, 0.17);
    const ContourPoint a = contour_point(profile, {lam}, 9.0);
    const ContourPoint b = contour_point(profile, {std::conj(lam)}, 9.0);
    CHECK(a.z == std::conj(b.z));
    CHECK(a.jacobian == std::conj(b.jacobian));
  }

  SUBCASE("jacobian stays away from zero") {
    for (double x = 0.0; x < 20.0; x += 0.1) {
      const ContourPoint pt = contour_point(profile, {cplx(0.0, 0.69)}, x);
      CHECK(std::abs(pt.jacobian) > 1.0 - 1.0 / std::sqrt(2.0));
    }
  }

  SUBCASE("over-large lambda is rejected") {
    CHECK_THROWS_AS(contour_point(profile, {cplx(0.8, 0.0)}, 5.0), Error);
  }
}

TEST_CASE("stabilization validator") {
  std::vector<double> probe;
  for (double x = 0.5; x <= 200.0; x *= 1.4) probe.push_back(x);

  SUBCASE("product metric has zero deviation") {
    const SeparableModel flat = cylinder_model(1, 1.0, 1.0, 0.0);
    const StabilizationReport report = validate_stabilization(flat, probe);
    for (const auto& s : report.samples) {
      CHECK(s.metric_deviation == 0.0);
      CHECK(s.derivative_deviation == 0.0);
    }
    CHECK(report.decreasing_beyond_c);
    CHECK(report.tends_to_zero);
  }

  SUBCASE("guide deviation is monotone in the tail") {
    const PlanarGuideModel guide(1.0, 1.0, 5.0);
    const StabilizationReport report = validate_stabilization(guide, probe);
    CHECK(report.decreasing_beyond_c);
    CHECK(report.tends_to_zero);
    double at10 = 0.0, at100 = 0.0;
    for (const auto& s : report.samples) {
      if (std::abs(s.x - 10.0) < 3.0 && at10 == 0.0) at10 = s.metric_deviation;
      if (s.x > 90.0 && at100 == 0.0) at100 = s.metric_deviation;
    }
    CHECK(at100 < at10);
  }

  SUBCASE("delta = 2 separable tail has log-log slope -2") {
    const SeparableModel model = cylinder_model(1, 2.0, 1.0, 1.0);
    const StabilizationReport report = validate_stabilization(model, {10.0, 100.0});
    const double slope = std::log(report.samples[1].metric_deviation /
                                  report.samples[0].metric_deviation) /
                         std::log(10.0);
    CHECK(slope == doctest::Approx(-2.0).epsilon(0.01));
  }

  SUBCASE("non-increasing probe is rejected") {
    const SeparableModel model = cylinder_model();
    CHECK_THROWS_AS(validate_stabilization(model, {2.0, 1.0}), Error);
  }
}
