// exercises the public shared-library surface only
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "cylspec/cylspec.h"

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("version and status names") {
  CHECK(std::string(cylspec_version()) == "0.1.0");
  CHECK(std::string(cylspec_status_name(CYLSPEC_OK)) == "ok");
  CHECK(std::string(cylspec_status_name(CYLSPEC_ERR_PARAMETER)) == "parameter");
}

TEST_CASE("errors carry messages") {
  cylspec_model* model = nullptr;
  const cylspec_status st =
      cylspec_model_create_separable(1, 5.0, 1.0, 1.0, CYLSPEC_SECTION_INTERVAL_DIRICHLET, 1.0,
                                     1, &model);
  CHECK(st == CYLSPEC_ERR_INVALID_ARGUMENT);
  CHECK(std::strlen(cylspec_last_error_message()) > 0);
  CHECK(model == nullptr);
}

TEST_CASE("ladder round trip") {
  cylspec_ladder* ladder = nullptr;
  REQUIRE(cylspec_build_threshold_ladder(CYLSPEC_SECTION_INTERVAL_DIRICHLET, 1.0, 2, 3,
                                         &ladder) == CYLSPEC_OK);
  CHECK(cylspec_ladder_size(ladder) == 3);
  double value = 0.0;
  int mult = 0;
  REQUIRE(cylspec_ladder_entry(ladder, 0, &value, &mult) == CYLSPEC_OK);
  CHECK(value == doctest::Approx(kPi * kPi / 4).epsilon(1e-15));
  CHECK(mult == 2);  // two copies

  double rate = 0.0;
  REQUIRE(cylspec_max_decay_rate(ladder, 2.0, &rate) == CYLSPEC_OK);
  CHECK(rate == doctest::Approx(std::sqrt(kPi * kPi / 4 - 2.0)));
  CHECK(cylspec_max_decay_rate(ladder, 1e9, &rate) == CYLSPEC_ERR_DOMAIN);
  CHECK(cylspec_max_decay_rate(ladder, kPi * kPi / 4, &rate) == CYLSPEC_ERR_THRESHOLD);
  cylspec_ladder_destroy(ladder);
}

TEST_CASE("profile, potential and metric through the C surface") {
  cylspec_model* model = nullptr;
  REQUIRE(cylspec_model_create_separable(1, 1.0, 1.0, 1.0, CYLSPEC_SECTION_INTERVAL_DIRICHLET,
                                         1.0, 1, &model) == CYLSPEC_OK);
  double f = 0.0, df = 0.0, ddf = 0.0;
  REQUIRE(cylspec_model_eval_profile(model, 10.0, &f, &df, &ddf) == CYLSPEC_OK);
  CHECK(f == doctest::Approx(std::pow(1.1, 0.25)).epsilon(1e-15));

  cylspec_complex v;
  REQUIRE(cylspec_model_potential(model, kPi * kPi / 4, {10.0, 0.0}, &v) == CYLSPEC_OK);
  CHECK(v.re == doctest::Approx(-0.2239).epsilon(5e-4));
  CHECK(v.im == 0.0);
  CHECK(cylspec_model_potential(model, 1.0, {0.5, 0.1}, &v) == CYLSPEC_ERR_CONTRACT);
  cylspec_model_destroy(model);

  cylspec_model* guide = nullptr;
  REQUIRE(cylspec_model_create_guide(1.0, 1.0, 5.0, &guide) == CYLSPEC_OK);
  cylspec_guide_metric m;
  REQUIRE(cylspec_guide_metric_at(guide, 9.0, 1.0, &m) == CYLSPEC_OK);
  CHECK(m.g0 == doctest::Approx(1.0025));
  CHECK(m.g1 == doctest::Approx(-0.075));
  CHECK(m.g2 == doctest::Approx(2.25));
  cylspec_model_destroy(guide);
}

TEST_CASE("scaling and contour") {
  CHECK(cylspec_scaling_max_modulus() == doctest::Approx(std::sin(kPi / 4 - 0.01)));
  double s = -1.0, ds = -1.0;
  REQUIRE(cylspec_scaling_s({3.0, 1.0}, 2.0, &s, &ds) == CYLSPEC_OK);
  CHECK(s == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ds == 1.0);

  cylspec_complex z, j;
  REQUIRE(cylspec_contour_point({3.0, 1.0}, {0.0, 0.2}, 10.0, &z, &j) == CYLSPEC_OK);
  CHECK(z.re == doctest::Approx(10.0));
  CHECK(z.im == doctest::Approx(1.1));
  CHECK(j.re == 1.0);
  CHECK(j.im == 0.2);
  CHECK(cylspec_contour_point({3.0, 1.0}, {0.9, 0.0}, 1.0, &z, &j) == CYLSPEC_ERR_PARAMETER);
}

TEST_CASE("assembly, solve and analysis round trip on the square well") {
  cylspec_model* well = nullptr;
  REQUIRE(cylspec_model_create_square_well(5.0, 2.0, &well) == CYLSPEC_OK);
  const cylspec_grid1d grid{0.0, 30.0, 1499};

  cylspec_tridiag_real* op = nullptr;
  REQUIRE(cylspec_assemble_mode_operator(well, 0.0, grid, &op) == CYLSPEC_OK);
  CHECK(cylspec_tridiag_real_dim(op) == 1499);

  int below_zero = 0;
  REQUIRE(cylspec_sturm_count(op, 0.0, &below_zero) == CYLSPEC_OK);
  CHECK(below_zero >= 1);

  double tol = 0.0;
  REQUIRE(cylspec_default_bisection_tol(op, &tol) == CYLSPEC_OK);
  cylspec_real_spectrum* window = nullptr;
  REQUIRE(cylspec_eigenvalues_in_window(op, -5.0, -1e-6, tol, &window) == CYLSPEC_OK);
  REQUIRE(cylspec_real_spectrum_size(window) >= 1);
  std::vector<double> values(cylspec_real_spectrum_size(window));
  REQUIRE(cylspec_real_spectrum_values(window, values.data()) == CYLSPEC_OK);

  double mu = 0.0, residual = 0.0;
  std::vector<double> psi(1499);
  REQUIRE(cylspec_inverse_iteration(op, values.front(), &mu, &residual, psi.data()) ==
          CYLSPEC_OK);
  CHECK(mu == doctest::Approx(-3.39).epsilon(5e-3));

  cylspec_decay_fit fit;
  REQUIRE(cylspec_fit_decay_rate(well, 0.0, psi.data(), 1499, grid, mu, -mu, &fit) ==
          CYLSPEC_OK);
  CHECK(std::abs(fit.gamma_hat - fit.bound) <= 0.01 * std::abs(fit.bound));
  CHECK(fit.r_squared >= 0.99);

  // persistence across two deformation parameters
  const cylspec_complex lambdas[2] = {{0.0, 0.1}, {0.0, 0.2}};
  cylspec_complex mu_hat[2];
  double drift[2], im_abs[2], tols[2];
  int pass[2], all_pass = 0;
  REQUIRE(cylspec_persistence_check(well, 0.0, mu, -mu, lambdas, 2, grid, {3.0, 1.0}, mu_hat,
                                    drift, im_abs, tols, pass, &all_pass) == CYLSPEC_OK);
  CHECK(all_pass == 1);

  // deformed assembly, nearest eigenvalue, sector fit
  cylspec_tridiag_complex* dop = nullptr;
  REQUIRE(cylspec_assemble_deformed_mode_operator(well, 0.0, grid, {3.0, 1.0}, {0.0, 0.2},
                                                  &dop) == CYLSPEC_OK);
  cylspec_complex near;
  REQUIRE(cylspec_nearest_eigenvalue(dop, {mu, 0.0}, &near, &residual) == CYLSPEC_OK);
  CHECK(std::abs(near.re - mu) <= 1e-6);
  CHECK(std::abs(near.im) <= 1e-6);

  cylspec_sector_fit sector;
  REQUIRE(cylspec_sector_fit_tridiag(dop, 200, 0, &sector) == CYLSPEC_OK);
  CHECK(sector.theta < kPi / 2);

  char* triplets = cylspec_tridiag_complex_triplets(dop);
  REQUIRE(triplets != nullptr);
  CHECK(std::string(triplets).find("row col re im") != std::string::npos);
  cylspec_string_free(triplets);

  cylspec_tridiag_complex_destroy(dop);
  cylspec_real_spectrum_destroy(window);
  cylspec_tridiag_real_destroy(op);
  cylspec_model_destroy(well);
}

TEST_CASE("stabilization report through the C surface") {
  cylspec_model* guide = nullptr;
  REQUIRE(cylspec_model_create_guide(1.0, 1.0, 5.0, &guide) == CYLSPEC_OK);
  const double probe[4] = {2.0, 10.0, 50.0, 250.0};
  double dev[4], ddev[4];
  int decreasing = 0, zero = 0;
  REQUIRE(cylspec_validate_stabilization(guide, probe, 4, dev, ddev, &decreasing, &zero) ==
          CYLSPEC_OK);
  CHECK(decreasing == 1);
  CHECK(zero == 1);
  CHECK(dev[3] < dev[1]);
  cylspec_model_destroy(guide);
}

TEST_CASE("dense symmetric oracle through the C surface") {
  // 2x2 [[2,1],[1,2]] -> {1, 3}
  const double a[4] = {2.0, 1.0, 1.0, 2.0};
  double values[2] = {0, 0};
  REQUIRE(cylspec_dense_symmetric_eigenvalues(a, 2, values) == CYLSPEC_OK);
  CHECK(values[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(values[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("real spectrum accessors: multiplicities, vectors, triplets") {
  cylspec_model* flat = nullptr;
  REQUIRE(cylspec_model_create_separable(1, 1.0, 1.0, 0.0, CYLSPEC_SECTION_INTERVAL_DIRICHLET,
                                         1.0, 1, &flat) == CYLSPEC_OK);
  const cylspec_grid1d grid{-2.0, 2.0, 3};
  cylspec_tridiag_real* op = nullptr;
  REQUIRE(cylspec_assemble_mode_operator(flat, 0.0, grid, &op) == CYLSPEC_OK);

  char* triplets = cylspec_tridiag_real_triplets(op);
  REQUIRE(triplets != nullptr);
  CHECK(std::string(triplets).find("0 0 2\n") != std::string::npos);
  cylspec_string_free(triplets);

  cylspec_real_spectrum* window = nullptr;
  REQUIRE(cylspec_eigenvalues_in_window(op, 0.0, 5.0, 1e-13, &window) == CYLSPEC_OK);
  REQUIRE(cylspec_real_spectrum_size(window) == 3);
  int mults[3] = {0, 0, 0};
  REQUIRE(cylspec_real_spectrum_multiplicities(window, mults) == CYLSPEC_OK);
  CHECK(mults[0] == 1);
  // bisection results carry no vectors: the accessor reports the error
  double buf[3];
  CHECK(cylspec_real_spectrum_vector(window, 0, buf, 3) == CYLSPEC_ERR_INVALID_ARGUMENT);
  cylspec_real_spectrum_destroy(window);
  cylspec_tridiag_real_destroy(op);
  cylspec_model_destroy(flat);
}

TEST_CASE("guide assembly and banded solve through the C surface") {
  cylspec_model* guide = nullptr;
  REQUIRE(cylspec_model_create_guide(1.0, 1.0, 5.0, &guide) == CYLSPEC_OK);
  const cylspec_grid2d grid{10.0, 20, 8};
  cylspec_guide_op* op = nullptr;
  REQUIRE(cylspec_assemble_guide_operator(guide, grid, CYLSPEC_GUIDE_DIRICHLET,
                                          CYLSPEC_GUIDE_EVEN, &op) == CYLSPEC_OK);
  CHECK(cylspec_guide_op_dim(op) == 20 * 8);
  CHECK(cylspec_guide_op_bandwidth(op) == 9);

  int below = 0;
  REQUIRE(cylspec_guide_count_below(op, kPi * kPi / 4, &below) == CYLSPEC_OK);
  CHECK(below >= 1);

  cylspec_real_spectrum* spectrum = nullptr;
  REQUIRE(cylspec_guide_lowest_eigenpairs(op, 3, -0.5, 0, 1e-8, &spectrum) == CYLSPEC_OK);
  REQUIRE(cylspec_real_spectrum_size(spectrum) >= 3);
  std::vector<double> values(cylspec_real_spectrum_size(spectrum));
  REQUIRE(cylspec_real_spectrum_values(spectrum, values.data()) == CYLSPEC_OK);
  CHECK(values[0] < kPi * kPi / 4);
  CHECK(values[0] > 0.0);

  // solver eigenvectors are stored and unit-normalized
  std::vector<double> vec(cylspec_guide_op_dim(op));
  REQUIRE(cylspec_real_spectrum_vector(spectrum, 0, vec.data(),
                                       cylspec_guide_op_dim(op)) == CYLSPEC_OK);
  double nrm = 0.0;
  for (double x : vec) nrm += x * x;
  CHECK(nrm == doctest::Approx(1.0).epsilon(1e-10));

  cylspec_real_spectrum_destroy(spectrum);
  cylspec_guide_op_destroy(op);
  cylspec_model_destroy(guide);
}

TEST_CASE("accumulation scan through the C surface") {
  cylspec_model* model = nullptr;
  REQUIRE(cylspec_model_create_separable(1, 1.0, 1.0, 0.5, CYLSPEC_SECTION_INTERVAL_DIRICHLET,
                                         1.0, 1, &model) == CYLSPEC_OK);
  const double keys[2] = {30.0, 60.0};
  cylspec_accum_report* report = nullptr;
  REQUIRE(cylspec_accumulation_scan(model, 6, 0.05, CYLSPEC_SWEEP_TRUNCATION, keys, 2, 0.05,
                                    0.0, &report) == CYLSPEC_OK);
  CHECK(cylspec_accum_report_points(report) == 2);
  int below = 0, mono = 0, stable = 0;
  REQUIRE(cylspec_accum_report_flags(report, &below, &mono, &stable) == CYLSPEC_OK);
  CHECK(below == 1);
  CHECK(cylspec_accum_report_embedded(report) == 1);
  CHECK(cylspec_accum_report_nu_global(report) == doctest::Approx(9.0 * kPi * kPi));
  CHECK(cylspec_accum_report_point_nu(report, 0) ==
        doctest::Approx(cylspec_accum_report_nu_global(report)));
  cylspec_accum_report_destroy(report);
  cylspec_model_destroy(model);
}

TEST_CASE("essential curves and classification through the C surface") {
  const double xi[3] = {0.0, 1.0, 2.0};
  cylspec_complex pts[3];
  REQUIRE(cylspec_essential_curve_points(0.0, {0.0, 0.0}, {-0.5, 0.0}, xi, 3, pts) ==
          CYLSPEC_OK);
  CHECK(pts[0].re == doctest::Approx(-0.25));
  CHECK(pts[0].im == doctest::Approx(0.0));

  // one point on the rotated ray, one far off
  const double ang = -2.0 * std::atan(0.3);
  const cylspec_complex eigs[2] = {{3.0 * std::cos(ang), 3.0 * std::sin(ang)}, {5.0, 3.0}};
  const double nus[1] = {0.0};
  int classes[2];
  double dists[2];
  int nc = 0, nr = 0, no = 0;
  double maxd = 0.0;
  REQUIRE(cylspec_ray_classify(eigs, 2, nus, 1, {0.0, 0.3}, {0.0, 0.0}, 1e-6, 1e-9, classes,
                               dists, &nc, &nr, &no, &maxd) == CYLSPEC_OK);
  CHECK(classes[0] == CYLSPEC_CLASS_NEAR_CURVE);
  CHECK(classes[1] == CYLSPEC_CLASS_OUTLIER);
  CHECK(nc == 1);
  CHECK(no == 1);
}
