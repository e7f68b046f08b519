#include "studies.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "emit.hpp"

namespace cli {

namespace {

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void api_fail(const std::string& where, cylspec_status status) {
  throw std::runtime_error(where + ": " + cylspec_status_name(status) + ": " +
                           cylspec_last_error_message());
}

void check(cylspec_status status, const std::string& where) {
  if (status != CYLSPEC_OK) api_fail(where, status);
}

// RAII over the C handles
template <typename T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  Handle() = default;
  explicit Handle(T* p) : ptr(p) {}
  ~Handle() { reset(); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  Handle(Handle&& other) noexcept : ptr(other.ptr) { other.ptr = nullptr; }
  Handle& operator=(Handle&& other) noexcept {
    if (this != &other) {
      reset();
      ptr = other.ptr;
      other.ptr = nullptr;
    }
    return *this;
  }
  void reset() {
    if (ptr != nullptr) Destroy(ptr);
    ptr = nullptr;
  }
  T** out() {
    reset();
    return &ptr;
  }
  T* get() const { return ptr; }
};

using ModelHandle = Handle<cylspec_model, cylspec_model_destroy>;
using LadderHandle = Handle<cylspec_ladder, cylspec_ladder_destroy>;
using TridiagRealHandle = Handle<cylspec_tridiag_real, cylspec_tridiag_real_destroy>;
using TridiagComplexHandle = Handle<cylspec_tridiag_complex, cylspec_tridiag_complex_destroy>;
using GuideOpHandle = Handle<cylspec_guide_op, cylspec_guide_op_destroy>;
using RealSpectrumHandle = Handle<cylspec_real_spectrum, cylspec_real_spectrum_destroy>;
using AccumHandle = Handle<cylspec_accum_report, cylspec_accum_report_destroy>;

cylspec_section_kind section_kind_from(Config& cfg, const std::string& key) {
  const std::string kind = cfg.get_string(key, "interval-dirichlet");
  if (kind == "interval-dirichlet") return CYLSPEC_SECTION_INTERVAL_DIRICHLET;
  if (kind == "interval-neumann") return CYLSPEC_SECTION_INTERVAL_NEUMANN;
  if (kind == "circle") return CYLSPEC_SECTION_CIRCLE;
  config_fail(key, "expected interval-dirichlet | interval-neumann | circle");
}

ModelHandle make_model(Config& cfg) {
  const std::string kind = cfg.get_string("model.kind");
  ModelHandle model;
  if (kind == "separable") {
    check(cylspec_model_create_separable(
              cfg.get_int("model.n", 1), cfg.get_double("model.delta"),
              cfg.get_double("model.c", 1.0), cfg.get_double("model.amplitude", 1.0),
              section_kind_from(cfg, "crosssection.kind"),
              cfg.get_double("crosssection.extent", 1.0), cfg.get_int("crosssection.copies", 1),
              model.out()),
          "model.create_separable");
  } else if (kind == "guide") {
    check(cylspec_model_create_guide(cfg.get_double("model.delta"),
                                     cfg.get_double("model.c", 1.0),
                                     cfg.get_double("model.amplitude", 5.0), model.out()),
          "model.create_guide");
  } else if (kind == "squarewell") {
    check(cylspec_model_create_square_well(cfg.get_double("model.depth", 5.0),
                                           cfg.get_double("model.halfwidth", 2.0), model.out()),
          "model.create_square_well");
  } else {
    config_fail("model.kind", "expected separable | guide | squarewell");
  }
  return model;
}

// sigma_k: the k-th cross-section eigenvalue listed with multiplicity
double sigma_for_mode(Config& cfg, int mode_k) {
  if (cfg.get_string("model.kind") == "squarewell") return 0.0;
  LadderHandle ladder;
  check(cylspec_build_threshold_ladder(section_kind_from(cfg, "crosssection.kind"),
                                       cfg.get_double("crosssection.extent", 1.0),
                                       cfg.get_int("crosssection.copies", 1),
                                       std::max(2, mode_k + 1), ladder.out()),
        "thresholds.build");
  std::vector<double> flattened;
  for (int j = 0; j < cylspec_ladder_size(ladder.get()); ++j) {
    double value = 0.0;
    int mult = 0;
    check(cylspec_ladder_entry(ladder.get(), j, &value, &mult), "thresholds.entry");
    for (int m = 0; m < mult; ++m) flattened.push_back(value);
  }
  if (mode_k < 1 || mode_k > static_cast<int>(flattened.size()))
    config_fail("mode index", "beyond the built ladder");
  return flattened[mode_k - 1];
}

cylspec_grid1d grid_from(Config& cfg) {
  const double xmin = cfg.get_double("numeric.xmin");
  const double xmax = cfg.get_double("numeric.xmax");
  const double h = cfg.get_double("numeric.h");
  cylspec_grid1d grid;
  grid.x_min = xmin;
  grid.x_max = xmax;
  grid.n_points = static_cast<int>(std::lround((xmax - xmin) / h)) - 1;
  return grid;
}

double grid_spacing(const cylspec_grid1d& g) { return (g.x_max - g.x_min) / (g.n_points + 1); }
double grid_point(const cylspec_grid1d& g, int i) { return g.x_min + grid_spacing(g) * (i + 1); }

cylspec_scaling_profile profile_from(Config& cfg) {
  return {cfg.get_double("deformation.R", 3.0), cfg.get_double("deformation.rampwidth", 1.0)};
}

struct StudyOutput {
  std::vector<ManifestEntry> entries;
  std::vector<ManifestCheck> checks;
};

std::string join_path(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

// lowest eigenvalue in the configured search window plus its eigenvector
struct BoundState {
  double value = 0.0;
  double residual = 0.0;
  std::vector<double> vector;
};

BoundState lowest_bound_state(const cylspec_tridiag_real* op, double lo, double hi) {
  double tol = 0.0;
  check(cylspec_default_bisection_tol(op, &tol), "bisection.tol");
  RealSpectrumHandle window;
  check(cylspec_eigenvalues_in_window(op, lo, hi, tol, window.out()), "bisection.window");
  const int found = cylspec_real_spectrum_size(window.get());
  if (found == 0) throw std::runtime_error("no eigenvalue in the configured search window");
  std::vector<double> values(found);
  check(cylspec_real_spectrum_values(window.get(), values.data()), "bisection.values");

  BoundState state;
  const int n = cylspec_tridiag_real_dim(op);
  state.vector.resize(n);
  check(cylspec_inverse_iteration(op, values.front(), &state.value, &state.residual,
                                  state.vector.data()),
        "inverse_iteration");
  return state;
}

// ---------------------------------------------------------------------------
// thresholds study
// ---------------------------------------------------------------------------

StudyOutput study_thresholds(Config& cfg, const std::string& out_dir) {
  StudyOutput out;
  const int count = cfg.get_int("thresholds.count", 8);
  LadderHandle ladder;
  check(cylspec_build_threshold_ladder(section_kind_from(cfg, "crosssection.kind"),
                                       cfg.get_double("crosssection.extent", 1.0),
                                       cfg.get_int("crosssection.copies", 1), count,
                                       ladder.out()),
        "thresholds.build");

  CsvWriter csv(join_path(out_dir, "thresholds.csv"), {"j", "nu", "multiplicity"});
  bool increasing = true;
  double prev = -1.0;
  for (int j = 0; j < cylspec_ladder_size(ladder.get()); ++j) {
    double value = 0.0;
    int mult = 0;
    check(cylspec_ladder_entry(ladder.get(), j, &value, &mult), "thresholds.entry");
    csv.row({std::to_string(j + 1), format_g17(value), std::to_string(mult)});
    increasing = increasing && value > prev;
    prev = value;
  }
  out.entries.push_back({"thresholds.csv", csv.flush()});
  out.checks.push_back({"thresholds-strictly-increasing", increasing});
  return out;
}

// ---------------------------------------------------------------------------
// spectrum study
// ---------------------------------------------------------------------------

StudyOutput study_spectrum(Config& cfg, const std::string& out_dir) {
  StudyOutput out;
  ModelHandle model = make_model(cfg);
  const double sigma = cfg.get_string("model.kind") == "separable"
                           ? sigma_for_mode(cfg, cfg.get_int("spectrum.mode_k", 1))
                           : 0.0;
  const cylspec_grid1d grid = grid_from(cfg);
  const cylspec_scaling_profile profile = profile_from(cfg);
  const cylspec_complex lambda = cfg.get_complex("deformation.lambda");
  const double h = grid_spacing(grid);
  const double length = grid.x_max - grid.x_min;

  double curve_tol = 0.0;
  if (cfg.get_string("spectrum.curve_tol", "auto") == "auto")
    curve_tol = 10.0 * (h + 1.0 / length);
  else
    curve_tol = cfg.get_double("spectrum.curve_tol");
  const double real_band = cfg.get_double("spectrum.real_band", 1e-8);
  const double ray_fraction = cfg.get_double("spectrum.ray_fraction", 0.95);

  TridiagComplexHandle op;
  check(cylspec_assemble_deformed_mode_operator(model.get(), sigma, grid, profile, lambda,
                                                op.out()),
        "spectrum.assemble");
  if (cfg.get_string("spectrum.export_matrix", "no") == "yes") {
    char* text = cylspec_tridiag_complex_triplets(op.get());
    if (text == nullptr) throw std::runtime_error("matrix export failed");
    std::ofstream mat(join_path(out_dir, "operator_triplets.txt"), std::ios::binary);
    mat << text;
    int rows = 0;
    for (const char* p = text; *p; ++p) rows += *p == '\n';
    cylspec_string_free(text);
    out.entries.push_back({"operator_triplets.txt", rows});
  }
  const int n = cylspec_tridiag_complex_dim(op.get());
  std::vector<cylspec_complex> values(n);
  double trace_error = 0.0;
  int all_converged = 0;
  check(cylspec_tridiag_complex_eigenvalues(op.get(), values.data(), &trace_error,
                                            &all_converged),
        "spectrum.eigenvalues");

  // mode-level threshold sits at zero
  const std::vector<double> thresholds{0.0};
  std::vector<int> classes(n);
  std::vector<double> distances(n);
  int near_curve = 0, near_real = 0, outliers = 0;
  double max_dist = 0.0;
  check(cylspec_ray_classify(values.data(), n, thresholds.data(),
                             static_cast<int>(thresholds.size()), lambda, {0.0, 0.0}, curve_tol,
                             real_band, classes.data(), distances.data(), &near_curve, &near_real,
                             &outliers, &max_dist),
        "spectrum.classify");

  CsvWriter eig_csv(join_path(out_dir, "spectrum_eigenvalues.csv"),
                    {"index", "re", "im", "class", "curve_distance"});
  const char* class_names[] = {"near-curve", "near-real-isolated", "outlier"};
  for (int i = 0; i < n; ++i)
    eig_csv.row({std::to_string(i), format_g17(values[i].re), format_g17(values[i].im),
                 class_names[classes[i]], format_g17(distances[i])});
  out.entries.push_back({"spectrum_eigenvalues.csv", eig_csv.flush()});

  CsvWriter cand_csv(join_path(out_dir, "spectrum_candidates.csv"),
                     {"re", "im", "curve_distance"});
  for (int i = 0; i < n; ++i)
    if (classes[i] == CYLSPEC_CLASS_NEAR_REAL_ISOLATED)
      cand_csv.row({format_g17(values[i].re), format_g17(values[i].im),
                    format_g17(distances[i])});
  out.entries.push_back({"spectrum_candidates.csv", cand_csv.flush()});

  // curve samples for the overlay
  double max_abs = 0.0;
  for (const auto& v : values) max_abs = std::max(max_abs, std::hypot(v.re, v.im));
  const double xi_max = std::sqrt(max_abs) * 1.05 + 1.0;
  const int n_xi = 201;
  std::vector<double> xi(n_xi);
  for (int i = 0; i < n_xi; ++i) xi[i] = xi_max * i / (n_xi - 1);
  CsvWriter curve_csv(join_path(out_dir, "spectrum_curves.csv"),
                      {"threshold", "xi", "re", "im"});
  std::vector<PlotLine> lines;
  for (double nu : thresholds) {
    std::vector<cylspec_complex> pts(n_xi);
    check(cylspec_essential_curve_points(nu, lambda, {0.0, 0.0}, xi.data(), n_xi, pts.data()),
          "spectrum.curve");
    PlotLine line;
    line.color = "#2e8540";
    line.dashed = true;
    for (int i = 0; i < n_xi; ++i) {
      curve_csv.row({format_g17(nu), format_g17(xi[i]), format_g17(pts[i].re),
                     format_g17(pts[i].im)});
      line.points.push_back({pts[i].re, pts[i].im, 3, ""});
    }
    lines.push_back(std::move(line));
  }
  out.entries.push_back({"spectrum_curves.csv", curve_csv.flush()});

  std::vector<PlotPoint> points;
  for (int i = 0; i < n; ++i) points.push_back({values[i].re, values[i].im, classes[i], ""});
  write_scatter_svg(join_path(out_dir, "spectrum.svg"), "spectrum plane", points, lines, {});
  out.entries.push_back({"spectrum.svg", n});

  out.checks.push_back({"qr-converged", all_converged == 1});
  const double scale = std::max(1.0, max_abs);
  out.checks.push_back({"trace-consistent", trace_error <= 1e-8 * n * scale});
  if (lambda.re == 0.0 && lambda.im == 0.0) {
    bool all_real = true;
    for (const auto& v : values) all_real = all_real && std::abs(v.im) <= 1e-9 * scale;
    out.checks.push_back({"lambda-zero-spectrum-real", all_real});
  } else {
    int nonreal = 0, nonreal_near = 0;
    for (int i = 0; i < n; ++i) {
      if (std::abs(values[i].im) <= real_band) continue;
      ++nonreal;
      if (distances[i] <= curve_tol) ++nonreal_near;
    }
    const bool ok = nonreal == 0 || nonreal_near >= ray_fraction * nonreal;
    out.checks.push_back({"nonreal-near-ray", ok});
  }
  return out;
}

// ---------------------------------------------------------------------------
// accumulation study
// ---------------------------------------------------------------------------

StudyOutput study_accumulation(Config& cfg, const std::string& out_dir) {
  StudyOutput out;
  ModelHandle model = make_model(cfg);
  const int mode_k = cfg.get_int("accumulation.mode_k");
  const double epsilon = cfg.get_double("accumulation.epsilon");
  const std::string sweep_name = cfg.get_string("accumulation.sweep", "L");
  const cylspec_sweep_kind sweep =
      sweep_name == "k" ? CYLSPEC_SWEEP_MODE_INDEX : CYLSPEC_SWEEP_TRUNCATION;
  if (sweep_name != "k" && sweep_name != "L")
    config_fail("accumulation.sweep", "expected L or k");
  const std::vector<double> keys = cfg.get_double_list("accumulation.keys");
  const double h = cfg.get_double("numeric.h");
  const double fixed_length =
      sweep == CYLSPEC_SWEEP_MODE_INDEX ? cfg.get_double("accumulation.fixed_L") : 0.0;

  AccumHandle report;
  check(cylspec_accumulation_scan(model.get(), mode_k, epsilon, sweep, keys.data(),
                                  static_cast<int>(keys.size()), h, fixed_length, report.out()),
        "accumulation.scan");

  CsvWriter counts_csv(join_path(out_dir, "accumulation_counts.csv"),
                       {"key", "count", "nu_global", "embedded"});
  CsvWriter values_csv(join_path(out_dir, "accumulation_values.csv"),
                       {"key", "eigenvalue", "mu_global"});
  const std::string embedded = cylspec_accum_report_embedded(report.get()) ? "1" : "0";
  std::vector<PlotPoint> steps;
  for (int i = 0; i < cylspec_accum_report_points(report.get()); ++i) {
    double key = 0.0;
    int count = 0;
    check(cylspec_accum_report_point(report.get(), i, &key, &count), "accumulation.point");
    const double nu = cylspec_accum_report_point_nu(report.get(), i);
    counts_csv.row({format_g17(key), std::to_string(count), format_g17(nu), embedded});
    steps.push_back({key, static_cast<double>(count), 0, std::to_string(count)});
    const int nv = cylspec_accum_report_value_count(report.get(), i);
    std::vector<double> vals(std::max(1, nv));
    if (nv > 0) {
      check(cylspec_accum_report_values(report.get(), i, vals.data()), "accumulation.values");
      for (int j = 0; j < nv; ++j)
        values_csv.row({format_g17(key), format_g17(vals[j]), format_g17(nu + vals[j])});
    }
  }
  out.entries.push_back({"accumulation_counts.csv", counts_csv.flush()});
  out.entries.push_back({"accumulation_values.csv", values_csv.flush()});

  int below_only = 0, monotone = 0, n_stable = 0;
  check(cylspec_accum_report_flags(report.get(), &below_only, &monotone, &n_stable),
        "accumulation.flags");
  write_staircase_svg(join_path(out_dir, "accumulation.svg"), "eigenvalue count below threshold",
                      steps, {});
  out.entries.push_back({"accumulation.svg", static_cast<int>(steps.size())});

  out.checks.push_back({"counted-strictly-below", below_only == 1});
  out.checks.push_back({"count-nondecreasing", monotone == 1});
  out.checks.push_back({"no-stable-intruder-above", n_stable == 0});
  return out;
}

// ---------------------------------------------------------------------------
// decay study
// ---------------------------------------------------------------------------

StudyOutput study_decay(Config& cfg, const std::string& out_dir) {
  StudyOutput out;
  ModelHandle model = make_model(cfg);
  const double sigma = cfg.get_string("model.kind") == "separable"
                           ? sigma_for_mode(cfg, cfg.get_int("decay.mode_k", 1))
                           : 0.0;
  const cylspec_grid1d grid = grid_from(cfg);
  const double window_lo = cfg.get_double("decay.window_lo");
  const double window_hi = cfg.get_double("decay.window_hi", -1e-8);
  const double rel_tol = cfg.get_double("decay.rel_tol");
  const double stability_tol = cfg.get_double("decay.stability_tol", 0.02);

  TridiagRealHandle op;
  check(cylspec_assemble_mode_operator(model.get(), sigma, grid, op.out()), "decay.assemble");
  const BoundState state = lowest_bound_state(op.get(), window_lo, window_hi);
  if (!(state.value < 0.0))
    throw std::runtime_error("decay study: located state is not below the mode threshold");
  const double gap = -state.value;

  cylspec_decay_fit fit;
  check(cylspec_fit_decay_rate(model.get(), sigma, state.vector.data(),
                               static_cast<int>(state.vector.size()), grid, state.value, gap,
                               &fit),
        "decay.fit");

  // mode-level value E plus the global eigenvalue sigma_k + E
  CsvWriter fit_csv(join_path(out_dir, "decay_fit.csv"),
                    {"gamma_hat", "gamma_hat_half", "bound", "x0", "x1", "r_squared", "points",
                     "mu", "sigma", "mu_global", "gap", "residual"});
  fit_csv.row({format_g17(fit.gamma_hat), format_g17(fit.gamma_hat_half), format_g17(fit.bound),
               format_g17(fit.x0), format_g17(fit.x1), format_g17(fit.r_squared),
               std::to_string(fit.points), format_g17(state.value), format_g17(sigma),
               format_g17(sigma + state.value), format_g17(gap), format_g17(state.residual)});
  out.entries.push_back({"decay_fit.csv", fit_csv.flush()});

  CsvWriter prof_csv(join_path(out_dir, "decay_profile.csv"), {"x", "abs_psi"});
  std::vector<PlotPoint> points;
  double max_psi = 0.0;
  for (double v : state.vector) max_psi = std::max(max_psi, std::abs(v));
  for (int i = 0; i < grid.n_points; ++i) {
    const double x = grid_point(grid, i);
    const double a = std::abs(state.vector[i]);
    prof_csv.row({format_g17(x), format_g17(a)});
    if (x >= 0.0 && a > 1e3 * 2.220446049250313e-16 * max_psi)
      points.push_back({x, std::log(a), 0, ""});
  }
  out.entries.push_back({"decay_profile.csv", prof_csv.flush()});

  // fitted slope line over the admissible window
  PlotLine line;
  line.color = "#c23b22";
  double psi_x0 = 0.0;
  for (int i = 0; i < grid.n_points; ++i)
    if (grid_point(grid, i) >= fit.x0) {
      psi_x0 = std::abs(state.vector[i]);
      break;
    }
  line.points.push_back({fit.x0, std::log(psi_x0), 0, ""});
  line.points.push_back({fit.x1, std::log(psi_x0) + fit.gamma_hat * (fit.x1 - fit.x0), 0, ""});
  write_scatter_svg(join_path(out_dir, "decay.svg"), "log |psi| and fitted slope", points,
                    {line}, {"gamma_hat = " + format_g17(fit.gamma_hat),
                             "bound = " + format_g17(fit.bound)});
  out.entries.push_back({"decay.svg", static_cast<int>(points.size())});

  out.checks.push_back({"fit-r-squared", fit.r_squared >= 0.99});
  out.checks.push_back(
      {"slope-within-tolerance",
       std::abs(fit.gamma_hat - fit.bound) <= rel_tol * std::abs(fit.bound)});
  out.checks.push_back(
      {"window-doubling-stable",
       std::abs(fit.gamma_hat - fit.gamma_hat_half) <= stability_tol * std::abs(fit.bound)});
  return out;
}

// ---------------------------------------------------------------------------
// scaling study
// ---------------------------------------------------------------------------

StudyOutput study_scaling(Config& cfg, const std::string& out_dir) {
  StudyOutput out;
  ModelHandle model = make_model(cfg);
  const bool separable = cfg.get_string("model.kind") == "separable";
  const double sigma = separable ? sigma_for_mode(cfg, cfg.get_int("scaling.mode_k", 1)) : 0.0;
  const cylspec_grid1d grid = grid_from(cfg);
  const cylspec_scaling_profile profile = profile_from(cfg);
  const std::vector<cylspec_complex> lambdas = cfg.get_complex_list("deformation.lambda");

  // persistence runs only when a candidate search window is configured
  // (a pure-continuum model has nothing to track)
  int all_pass = 1;
  if (cfg.has("scaling.window_lo")) {
    TridiagRealHandle real_op;
    check(cylspec_assemble_mode_operator(model.get(), sigma, grid, real_op.out()),
          "scaling.assemble");
    const BoundState state = lowest_bound_state(
        real_op.get(), cfg.get_double("scaling.window_lo"),
        cfg.get_double("scaling.window_hi", -1e-8));
    const double gap = -state.value;
    if (!(gap > 0.0))
      throw std::runtime_error("scaling study: candidate is not below threshold");

    const int nl = static_cast<int>(lambdas.size());
    std::vector<cylspec_complex> mu_hat(nl);
    std::vector<double> drift(nl), im_abs(nl), tol(nl);
    std::vector<int> pass(nl);
    check(cylspec_persistence_check(model.get(), sigma, state.value, gap, lambdas.data(), nl,
                                    grid, profile, mu_hat.data(), drift.data(), im_abs.data(),
                                    tol.data(), pass.data(), &all_pass),
          "scaling.persistence");

    CsvWriter pers_csv(join_path(out_dir, "scaling_persistence.csv"),
                       {"lambda_re", "lambda_im", "mu_re", "mu_im", "drift", "im_abs", "tol",
                        "pass"});
    for (int i = 0; i < nl; ++i)
      pers_csv.row({format_g17(lambdas[i].re), format_g17(lambdas[i].im),
                    format_g17(mu_hat[i].re), format_g17(mu_hat[i].im), format_g17(drift[i]),
                    format_g17(im_abs[i]), format_g17(tol[i]), pass[i] ? "1" : "0"});
    out.entries.push_back({"scaling_persistence.csv", pers_csv.flush()});
  }

  // sector fits across grid refinements at the first deformation parameter
  const std::vector<double> sector_h = cfg.has("scaling.sector_h")
                                           ? cfg.get_double_list("scaling.sector_h")
                                           : std::vector<double>{grid_spacing(grid)};
  const int samples = cfg.get_int("scaling.sector_samples", 200);
  const uint64_t seed = cfg.get_seed();
  CsvWriter sect_csv(join_path(out_dir, "scaling_sector.csv"), {"h", "a", "theta", "samples"});
  bool sector_ok = true;
  double a_min = 1e300, a_max = -1e300;
  for (double h : sector_h) {
    cylspec_grid1d g = grid;
    g.n_points = static_cast<int>(std::lround((grid.x_max - grid.x_min) / h)) - 1;
    TridiagComplexHandle def;
    check(cylspec_assemble_deformed_mode_operator(model.get(), sigma, g, profile, lambdas[0],
                                                  def.out()),
          "scaling.sector-assemble");
    cylspec_sector_fit fit;
    check(cylspec_sector_fit_tridiag(def.get(), samples, seed, &fit), "scaling.sector-fit");
    sect_csv.row({format_g17((g.x_max - g.x_min) / (g.n_points + 1)), format_g17(fit.a),
                  format_g17(fit.theta), std::to_string(fit.samples)});
    sector_ok = sector_ok && fit.theta < kPi / 2.0;
    a_min = std::min(a_min, fit.a);
    a_max = std::max(a_max, fit.a);
  }
  out.entries.push_back({"scaling_sector.csv", sect_csv.flush()});

  if (cfg.has("scaling.window_lo"))
    out.checks.push_back({"persistence-all-pass", all_pass == 1});
  out.checks.push_back({"sector-half-angle-subcritical", sector_ok});
  out.checks.push_back(
      {"sector-vertex-bounded", a_max <= cfg.get_double("scaling.sector_a_max", 1.0) &&
                                    a_max - a_min <= cfg.get_double("scaling.sector_a_max", 1.0)});
  return out;
}

// ---------------------------------------------------------------------------
// guide2d study
// ---------------------------------------------------------------------------

StudyOutput study_guide2d(Config& cfg, const std::string& out_dir) {
  StudyOutput out;
  ModelHandle model = make_model(cfg);
  if (cfg.get_string("model.kind") != "guide")
    config_fail("model.kind", "guide2d study needs model.kind = guide");

  const std::string boundary_name = cfg.get_string("guide2d.boundary", "dirichlet");
  const cylspec_guide_boundary boundary =
      boundary_name == "neumann" ? CYLSPEC_GUIDE_NEUMANN : CYLSPEC_GUIDE_DIRICHLET;
  if (boundary_name != "neumann" && boundary_name != "dirichlet")
    config_fail("guide2d.boundary", "expected dirichlet | neumann");
  const std::string sector_name = cfg.get_string("guide2d.sector", "even");
  cylspec_guide_sector sector = CYLSPEC_GUIDE_EVEN;
  if (sector_name == "odd")
    sector = CYLSPEC_GUIDE_ODD;
  else if (sector_name == "full")
    sector = CYLSPEC_GUIDE_FULL;
  else if (sector_name != "even")
    config_fail("guide2d.sector", "expected even | odd | full");

  const std::vector<double> lx_list = cfg.get_double_list("guide2d.Lx");
  const int nx = cfg.get_int("guide2d.nx", 160);
  const int ny = cfg.get_int("guide2d.ny", 12);
  const int k = cfg.get_int("guide2d.k", 8);
  const double shift = cfg.get_double("guide2d.shift", -0.5);
  const double threshold = cfg.get_double("guide2d.threshold");
  const double residual_tol = cfg.get_double("guide2d.residual_tol", 1e-8);
  const int min_below = cfg.get_int("guide2d.min_below", 1);
  const double count_above = cfg.get_double("guide2d.count_above", 1e-9);
  const uint64_t seed = cfg.get_seed();

  CsvWriter eig_csv(join_path(out_dir, "guide2d_eigenvalues.csv"),
                    {"Lx", "index", "eigenvalue", "residual"});
  CsvWriter count_csv(join_path(out_dir, "guide2d_counts.csv"),
                      {"Lx", "count_in_window", "window_lo", "window_hi"});
  std::vector<PlotPoint> steps;
  bool monotone = true, below_ok = true;
  bool want_export = cfg.get_string("guide2d.export_matrix", "no") == "yes";
  int prev_count = -1;
  for (double lx : lx_list) {
    cylspec_grid2d grid{lx, nx, ny};
    GuideOpHandle op;
    check(cylspec_assemble_guide_operator(model.get(), grid, boundary, sector, op.out()),
          "guide2d.assemble");
    if (want_export) {
      char* text = cylspec_guide_op_triplets(op.get());
      if (text == nullptr) throw std::runtime_error("matrix export failed");
      std::ofstream mat(join_path(out_dir, "operator_triplets.txt"), std::ios::binary);
      mat << text;
      int rows = 0;
      for (const char* p = text; *p; ++p) rows += *p == '\n';
      cylspec_string_free(text);
      out.entries.push_back({"operator_triplets.txt", rows});
      want_export = false;  // first sweep point only
    }
    RealSpectrumHandle spectrum;
    check(cylspec_guide_lowest_eigenpairs(op.get(), k, shift, seed, residual_tol,
                                          spectrum.out()),
          "guide2d.solve");
    const int found = cylspec_real_spectrum_size(spectrum.get());
    std::vector<double> values(found);
    std::vector<double> residuals(found);
    check(cylspec_real_spectrum_values(spectrum.get(), values.data()), "guide2d.values");
    check(cylspec_real_spectrum_residuals(spectrum.get(), residuals.data()), "guide2d.residuals");
    for (int j = 0; j < found; ++j)
      eig_csv.row({format_g17(lx), std::to_string(j), format_g17(values[j]),
                   format_g17(residuals[j])});

    // exact count in (count_above, threshold) by banded inertia
    int below_thr = 0, below_lo = 0;
    check(cylspec_guide_count_below(op.get(), threshold, &below_thr), "guide2d.count");
    check(cylspec_guide_count_below(op.get(), count_above, &below_lo), "guide2d.count-lo");
    const int count = below_thr - below_lo;
    count_csv.row({format_g17(lx), std::to_string(count), format_g17(count_above),
                   format_g17(threshold)});
    steps.push_back({lx, static_cast<double>(count), 0, std::to_string(count)});
    if (prev_count >= 0 && count < prev_count) monotone = false;
    prev_count = count;
    if (count < min_below) below_ok = false;
  }
  out.entries.push_back({"guide2d_eigenvalues.csv", eig_csv.flush()});
  out.entries.push_back({"guide2d_counts.csv", count_csv.flush()});
  write_staircase_svg(join_path(out_dir, "guide2d.svg"), "guide eigenvalues below threshold",
                      steps, {});
  out.entries.push_back({"guide2d.svg", static_cast<int>(steps.size())});

  out.checks.push_back({"count-at-least-minimum", below_ok});
  out.checks.push_back({"count-nondecreasing", monotone});
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// dispatch and manifest
// ---------------------------------------------------------------------------

bool run_study(const std::string& study, Config& cfg, const std::string& out_dir) {
  const auto t0 = std::chrono::steady_clock::now();
  std::filesystem::create_directories(out_dir);

  StudyOutput out;
  if (study == "thresholds")
    out = study_thresholds(cfg, out_dir);
  else if (study == "spectrum")
    out = study_spectrum(cfg, out_dir);
  else if (study == "accumulation")
    out = study_accumulation(cfg, out_dir);
  else if (study == "decay")
    out = study_decay(cfg, out_dir);
  else if (study == "scaling")
    out = study_scaling(cfg, out_dir);
  else if (study == "guide2d")
    out = study_guide2d(cfg, out_dir);
  else
    throw std::runtime_error("unknown study: " + study);

  const std::string study_key = cfg.get_string("study", study);
  if (study_key != study)
    throw std::runtime_error("config study key '" + study_key + "' does not match subcommand '" +
                             study + "'");

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::vector<std::pair<std::string, std::string>> resolved(cfg.resolved().begin(),
                                                            cfg.resolved().end());
  write_manifest(join_path(out_dir, "manifest.json"), study, resolved, out.entries, out.checks,
                 wall);

  bool all = true;
  for (const auto& c : out.checks) {
    std::printf("  check %-32s %s\n", c.name.c_str(), c.pass ? "PASS" : "FAIL");
    all = all && c.pass;
  }
  return all;
}

// ---------------------------------------------------------------------------
// built-in property suite
// ---------------------------------------------------------------------------

namespace {

struct CheckRunner {
  int failures = 0;
  void operator()(const std::string& name, bool pass) {
    std::printf("  property %-36s %s\n", name.c_str(), pass ? "PASS" : "FAIL");
    if (!pass) ++failures;
  }
};

}  // namespace

int run_builtin_checks() {
  CheckRunner report;

  // threshold closed forms
  {
    LadderHandle ladder;
    bool ok = cylspec_build_threshold_ladder(CYLSPEC_SECTION_INTERVAL_DIRICHLET, 1.0, 1, 2,
                                             ladder.out()) == CYLSPEC_OK;
    double v1 = 0.0, v2 = 0.0;
    int m = 0;
    ok = ok && cylspec_ladder_entry(ladder.get(), 0, &v1, &m) == CYLSPEC_OK;
    ok = ok && cylspec_ladder_entry(ladder.get(), 1, &v2, &m) == CYLSPEC_OK;
    ok = ok && std::abs(v1 - kPi * kPi / 4) <= 1e-12 && std::abs(v2 - kPi * kPi) <= 1e-12;
    report("dirichlet-thresholds-exact", ok);
  }
  {
    LadderHandle ladder;
    bool ok = cylspec_build_threshold_ladder(CYLSPEC_SECTION_INTERVAL_NEUMANN, 1.0, 1, 2,
                                             ladder.out()) == CYLSPEC_OK;
    double v1 = -1.0, v2 = 0.0;
    int m = 0;
    ok = ok && cylspec_ladder_entry(ladder.get(), 0, &v1, &m) == CYLSPEC_OK;
    ok = ok && cylspec_ladder_entry(ladder.get(), 1, &v2, &m) == CYLSPEC_OK;
    ok = ok && v1 == 0.0 && std::abs(v2 - kPi * kPi / 4) <= 1e-12;
    report("neumann-thresholds-exact", ok);
  }

  // scaling ramp invariants
  {
    bool ok = true;
    double prev_s = -1.0;
    for (int i = 0; i <= 2000; ++i) {
      double s = 0.0, ds = 0.0;
      ok = ok && cylspec_scaling_s({3.0, 1.0}, -1.0 + i * 4e-3, &s, &ds) == CYLSPEC_OK;
      ok = ok && ds >= 0.0 && ds <= 1.0 && s >= prev_s - 1e-15;
      prev_s = s;
    }
    double s_half = 0.0, ds_half = 0.0;
    ok = ok && cylspec_scaling_s({3.0, 1.0}, 2.0, &s_half, &ds_half) == CYLSPEC_OK;
    ok = ok && std::abs(s_half - 0.5) <= 1e-15 && ds_half == 1.0;
    report("scaling-ramp-invariants", ok);
  }

  // contour Schwarz symmetry
  {
    cylspec_complex z1, j1, z2, j2;
    bool ok =
        cylspec_contour_point({3.0, 1.0}, {0.2, 0.15}, 9.0, &z1, &j1) == CYLSPEC_OK &&
        cylspec_contour_point({3.0, 1.0}, {0.2, -0.15}, 9.0, &z2, &j2) == CYLSPEC_OK;
    ok = ok && z1.re == z2.re && z1.im == -z2.im && j1.re == j2.re && j1.im == -j2.im;
    report("contour-schwarz-symmetry", ok);
  }

  // lambda = 0 deformation identity (bitwise, via triplet text)
  {
    ModelHandle model;
    bool ok = cylspec_model_create_separable(1, 1.0, 1.0, 1.0,
                                             CYLSPEC_SECTION_INTERVAL_DIRICHLET, 1.0, 1,
                                             model.out()) == CYLSPEC_OK;
    const cylspec_grid1d grid{-20.0, 20.0, 399};
    TridiagRealHandle real_op;
    TridiagComplexHandle at_zero, cast;
    ok = ok && cylspec_assemble_mode_operator(model.get(), 2.4, grid, real_op.out()) ==
                   CYLSPEC_OK;
    ok = ok && cylspec_assemble_deformed_mode_operator(model.get(), 2.4, grid, {3.0, 1.0},
                                                       {0.0, 0.0}, at_zero.out()) == CYLSPEC_OK;
    ok = ok && cylspec_tridiag_real_to_complex(real_op.get(), cast.out()) == CYLSPEC_OK;
    if (ok) {
      char* a = cylspec_tridiag_complex_triplets(at_zero.get());
      char* b = cylspec_tridiag_complex_triplets(cast.get());
      ok = a != nullptr && b != nullptr && std::string(a) == std::string(b);
      cylspec_string_free(a);
      cylspec_string_free(b);
    }
    report("deformation-identity-at-zero", ok);
  }

  // conjugation at beta = 0 is the identity
  {
    ModelHandle model;
    bool ok = cylspec_model_create_square_well(5.0, 2.0, model.out()) == CYLSPEC_OK;
    const cylspec_grid1d grid{0.0, 15.0, 149};
    TridiagComplexHandle op, conj;
    ok = ok && cylspec_assemble_deformed_mode_operator(model.get(), 0.0, grid, {3.0, 1.0},
                                                       {0.0, 0.2}, op.out()) == CYLSPEC_OK;
    ok = ok && cylspec_conjugate_operator(op.get(), {0.0, 0.0}, {3.0, 1.0}, conj.out()) ==
                   CYLSPEC_OK;
    if (ok) {
      char* a = cylspec_tridiag_complex_triplets(op.get());
      char* b = cylspec_tridiag_complex_triplets(conj.get());
      ok = a != nullptr && b != nullptr && std::string(a) == std::string(b);
      cylspec_string_free(a);
      cylspec_string_free(b);
    }
    report("conjugation-identity-at-zero", ok);
  }

  // small solver cross-check: free stencil eigenvalues
  {
    ModelHandle model;
    bool ok = cylspec_model_create_separable(1, 1.0, 1.0, 0.0,
                                             CYLSPEC_SECTION_INTERVAL_DIRICHLET, 1.0, 1,
                                             model.out()) == CYLSPEC_OK;
    const cylspec_grid1d grid{-2.0, 2.0, 3};
    TridiagRealHandle op;
    ok = ok && cylspec_assemble_mode_operator(model.get(), 0.0, grid, op.out()) == CYLSPEC_OK;
    int count = -1;
    ok = ok && cylspec_sturm_count(op.get(), 2.0, &count) == CYLSPEC_OK && count == 1;
    RealSpectrumHandle spec;
    ok = ok &&
         cylspec_eigenvalues_in_window(op.get(), 0.0, 3.0, 1e-13, spec.out()) == CYLSPEC_OK;
    ok = ok && cylspec_real_spectrum_size(spec.get()) == 2;
    double vals[2] = {0, 0};
    ok = ok && cylspec_real_spectrum_values(spec.get(), vals) == CYLSPEC_OK;
    ok = ok && std::abs(vals[0] - (2.0 - std::sqrt(2.0))) <= 1e-12 &&
         std::abs(vals[1] - 2.0) <= 1e-12;
    report("sturm-closed-form-stencil", ok);
  }

  // complex QR closed forms
  {
    const cylspec_complex rot[4] = {{0, 0}, {1, 0}, {-1, 0}, {0, 0}};
    cylspec_complex values[2];
    double trace_error = 0.0;
    int all = 0;
    bool ok = cylspec_dense_complex_eigenvalues(rot, 2, values, nullptr, &trace_error, &all) ==
              CYLSPEC_OK;
    ok = ok && all == 1;
    const double d0 = std::hypot(values[0].re, values[0].im - 1.0) +
                      std::hypot(values[1].re, values[1].im + 1.0);
    const double d1 = std::hypot(values[0].re, values[0].im + 1.0) +
                      std::hypot(values[1].re, values[1].im - 1.0);
    ok = ok && std::min(d0, d1) <= 1e-10;
    report("qr-rotation-closed-form", ok);
  }

  // sector fit: PSD degenerate, skew violation
  {
    const cylspec_complex psd[4] = {{2, 0}, {1, 0}, {1, 0}, {2, 0}};
    cylspec_sector_fit fit;
    bool ok = cylspec_sector_fit_dense(psd, 2, 200, 0, &fit) == CYLSPEC_OK;
    ok = ok && fit.a == 0.0 && fit.theta < 1e-7;
    const cylspec_complex skew[4] = {{0, 0}, {1, 0}, {-1, 0}, {0, 0}};
    ok = ok && cylspec_sector_fit_dense(skew, 2, 200, 0, &fit) ==
                   CYLSPEC_ERR_PROPERTY_VIOLATION;
    report("sector-fit-examples", ok);
  }

  // decay-rate arithmetic
  {
    LadderHandle ladder;
    bool ok = cylspec_build_threshold_ladder(CYLSPEC_SECTION_INTERVAL_DIRICHLET, 1.0, 1, 2,
                                             ladder.out()) == CYLSPEC_OK;
    double rate = 0.0;
    ok = ok && cylspec_max_decay_rate(ladder.get(), 2.0, &rate) == CYLSPEC_OK;
    ok = ok && std::abs(rate - std::sqrt(kPi * kPi / 4 - 2.0)) <= 1e-12;
    report("max-decay-rate-arithmetic", ok);
  }

  return report.failures;
}

}  // namespace cli
