#include "cylspec/cylspec.h"

#include <cstdlib>
#include <cstring>
#include <variant>

#include "analysis.hpp"
#include "eig_complex.hpp"
#include "eig_real.hpp"
#include "models.hpp"
#include "operators.hpp"

using namespace cylspec;

// ---------------------------------------------------------------------------
// handle definitions
// ---------------------------------------------------------------------------

struct cylspec_model {
  std::variant<SeparableModel, PlanarGuideModel, SquareWellModel> m;
};
struct cylspec_ladder {
  ThresholdLadder ladder;
};
struct cylspec_tridiag_real {
  TridiagonalReal op;
};
struct cylspec_tridiag_complex {
  TridiagonalComplex op;
};
struct cylspec_guide_op {
  GuideOperator op;
};
struct cylspec_real_spectrum {
  SpectrumResult result;
};
struct cylspec_accum_report {
  AccumulationReport report;
};

// ---------------------------------------------------------------------------
// status plumbing
// ---------------------------------------------------------------------------

namespace {

thread_local std::string g_last_error;

cylspec_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return CYLSPEC_ERR_INVALID_ARGUMENT;
    case ErrorCode::Configuration: return CYLSPEC_ERR_CONFIGURATION;
    case ErrorCode::Domain: return CYLSPEC_ERR_DOMAIN;
    case ErrorCode::Threshold: return CYLSPEC_ERR_THRESHOLD;
    case ErrorCode::Contract: return CYLSPEC_ERR_CONTRACT;
    case ErrorCode::Parameter: return CYLSPEC_ERR_PARAMETER;
    case ErrorCode::Numeric: return CYLSPEC_ERR_NUMERIC;
    case ErrorCode::Resource: return CYLSPEC_ERR_RESOURCE;
    case ErrorCode::InsufficientData: return CYLSPEC_ERR_INSUFFICIENT_DATA;
    case ErrorCode::PropertyViolation: return CYLSPEC_ERR_PROPERTY_VIOLATION;
  }
  return CYLSPEC_ERR_INTERNAL;
}

template <typename Fn>
cylspec_status guarded(Fn&& fn) {
  try {
    fn();
    return CYLSPEC_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return CYLSPEC_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return CYLSPEC_ERR_INTERNAL;
  }
}

cplx from_c(cylspec_complex z) { return {z.re, z.im}; }
cylspec_complex to_c(cplx z) { return {z.real(), z.imag()}; }

Grid1D from_c(cylspec_grid1d g) {
  Grid1D grid{g.x_min, g.x_max, g.n_points};
  grid.validate();
  return grid;
}

Grid2D from_c(cylspec_grid2d g) {
  Grid2D grid{g.x_half_length, g.nx, g.ny};
  grid.validate();
  return grid;
}

ScalingProfile from_c(cylspec_scaling_profile p) {
  ScalingProfile sp{p.onset_r, p.ramp_width};
  sp.validate();
  return sp;
}

CrossSectionKind section_kind(cylspec_section_kind kind) {
  switch (kind) {
    case CYLSPEC_SECTION_INTERVAL_DIRICHLET: return CrossSectionKind::IntervalDirichlet;
    case CYLSPEC_SECTION_INTERVAL_NEUMANN: return CrossSectionKind::IntervalNeumann;
    case CYLSPEC_SECTION_CIRCLE: return CrossSectionKind::Circle;
  }
  fail(ErrorCode::Configuration, "unsupported cross-section kind");
}

const SeparableModel& require_separable(const cylspec_model* model) {
  if (const auto* m = std::get_if<SeparableModel>(&model->m)) return *m;
  fail(ErrorCode::InvalidArgument, "operation requires a separable model");
}

const PlanarGuideModel& require_guide(const cylspec_model* model) {
  if (const auto* m = std::get_if<PlanarGuideModel>(&model->m)) return *m;
  fail(ErrorCode::InvalidArgument, "operation requires a planar guide model");
}

void require_ptr(const void* p, const char* what) {
  if (p == nullptr) fail(ErrorCode::InvalidArgument, std::string(what) + " is null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// basics
// ---------------------------------------------------------------------------

const char* cylspec_last_error_message(void) { return g_last_error.c_str(); }

const char* cylspec_status_name(cylspec_status status) {
  switch (status) {
    case CYLSPEC_OK: return "ok";
    case CYLSPEC_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case CYLSPEC_ERR_CONFIGURATION: return "configuration";
    case CYLSPEC_ERR_DOMAIN: return "domain";
    case CYLSPEC_ERR_THRESHOLD: return "threshold";
    case CYLSPEC_ERR_CONTRACT: return "contract";
    case CYLSPEC_ERR_PARAMETER: return "parameter";
    case CYLSPEC_ERR_NUMERIC: return "numeric";
    case CYLSPEC_ERR_RESOURCE: return "resource";
    case CYLSPEC_ERR_INSUFFICIENT_DATA: return "insufficient-data";
    case CYLSPEC_ERR_PROPERTY_VIOLATION: return "property-violation";
    case CYLSPEC_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* cylspec_version(void) { return "0.1.0"; }

void cylspec_string_free(char* s) { std::free(s); }

// ---------------------------------------------------------------------------
// models
// ---------------------------------------------------------------------------

cylspec_status cylspec_model_create_separable(int n, double delta, double c, double amplitude,
                                              cylspec_section_kind section, double extent,
                                              int copies, cylspec_model** out) {
  return guarded([&] {
    require_ptr(out, "out");
    CrossSectionSpec spec{section_kind(section), extent, copies};
    *out = new cylspec_model{SeparableModel(n, delta, c, amplitude, spec)};
  });
}

cylspec_status cylspec_model_create_guide(double delta, double c, double amplitude,
                                          cylspec_model** out) {
  return guarded([&] {
    require_ptr(out, "out");
    *out = new cylspec_model{PlanarGuideModel(delta, c, amplitude)};
  });
}

cylspec_status cylspec_model_create_square_well(double depth, double halfwidth,
                                                cylspec_model** out) {
  return guarded([&] {
    require_ptr(out, "out");
    SquareWellModel well{depth, halfwidth};
    well.validate();
    *out = new cylspec_model{well};
  });
}

void cylspec_model_destroy(cylspec_model* model) { delete model; }

cylspec_status cylspec_model_eval_profile(const cylspec_model* model, double x, double* f,
                                          double* df, double* ddf) {
  return guarded([&] {
    require_ptr(model, "model");
    ProfileValues v;
    if (const auto* m = std::get_if<SeparableModel>(&model->m))
      v = m->profile(x);
    else if (const auto* g = std::get_if<PlanarGuideModel>(&model->m))
      v = g->profile(x);
    else
      fail(ErrorCode::InvalidArgument, "square-well benchmark has no warp profile");
    if (f != nullptr) *f = v.f;
    if (df != nullptr) *df = v.df;
    if (ddf != nullptr) *ddf = v.ddf;
  });
}

cylspec_status cylspec_model_potential(const cylspec_model* model, double sigma,
                                       cylspec_complex z, cylspec_complex* out) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(out, "out");
    cplx v;
    if (const auto* m = std::get_if<SeparableModel>(&model->m))
      v = m->potential(sigma, from_c(z));
    else if (const auto* w = std::get_if<SquareWellModel>(&model->m))
      v = w->potential(from_c(z));
    else
      fail(ErrorCode::InvalidArgument, "guide model has no 1D mode potential");
    *out = to_c(v);
  });
}

cylspec_status cylspec_guide_metric_at(const cylspec_model* model, double x, double y,
                                       cylspec_guide_metric* out) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(out, "out");
    const GuideMetric m = require_guide(model).metric(x, y);
    *out = {m.g0, m.g1, m.g2, m.sqrt_det, m.inv00, m.inv01, m.inv11};
  });
}

cylspec_status cylspec_validate_stabilization(const cylspec_model* model, const double* x_probe,
                                              int n_probe, double* deviation_out,
                                              double* derivative_out, int* decreasing_out,
                                              int* tends_to_zero_out) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(x_probe, "x_probe");
    std::vector<double> probe(x_probe, x_probe + n_probe);
    StabilizationReport report;
    if (const auto* m = std::get_if<SeparableModel>(&model->m))
      report = validate_stabilization(*m, probe);
    else if (const auto* g = std::get_if<PlanarGuideModel>(&model->m))
      report = validate_stabilization(*g, probe);
    else
      fail(ErrorCode::InvalidArgument, "square-well benchmark has no metric");
    for (int i = 0; i < n_probe; ++i) {
      if (deviation_out != nullptr) deviation_out[i] = report.samples[i].metric_deviation;
      if (derivative_out != nullptr) derivative_out[i] = report.samples[i].derivative_deviation;
    }
    if (decreasing_out != nullptr) *decreasing_out = report.decreasing_beyond_c ? 1 : 0;
    if (tends_to_zero_out != nullptr) *tends_to_zero_out = report.tends_to_zero ? 1 : 0;
  });
}

// ---------------------------------------------------------------------------
// ladders
// ---------------------------------------------------------------------------

cylspec_status cylspec_build_threshold_ladder(cylspec_section_kind section, double extent,
                                              int copies, int count, cylspec_ladder** out) {
  return guarded([&] {
    require_ptr(out, "out");
    CrossSectionSpec spec{section_kind(section), extent, copies};
    *out = new cylspec_ladder{build_threshold_ladder(spec, count)};
  });
}

void cylspec_ladder_destroy(cylspec_ladder* ladder) { delete ladder; }

int cylspec_ladder_size(const cylspec_ladder* ladder) {
  return ladder == nullptr ? 0 : static_cast<int>(ladder->ladder.size());
}

cylspec_status cylspec_ladder_entry(const cylspec_ladder* ladder, int index, double* value,
                                    int* multiplicity) {
  return guarded([&] {
    require_ptr(ladder, "ladder");
    if (index < 0 || index >= static_cast<int>(ladder->ladder.size()))
      fail(ErrorCode::InvalidArgument, "ladder index out of range");
    if (value != nullptr) *value = ladder->ladder.value(index);
    if (multiplicity != nullptr) *multiplicity = ladder->ladder.multiplicity(index);
  });
}

cylspec_status cylspec_max_decay_rate(const cylspec_ladder* ladder, double mu, double* out) {
  return guarded([&] {
    require_ptr(ladder, "ladder");
    require_ptr(out, "out");
    *out = max_decay_rate(mu, ladder->ladder);
  });
}

// ---------------------------------------------------------------------------
// scaling
// ---------------------------------------------------------------------------

double cylspec_scaling_max_modulus(void) { return ScalingParameter::max_modulus(); }

cylspec_status cylspec_scaling_s(cylspec_scaling_profile profile, double x, double* s,
                                 double* ds) {
  return guarded([&] {
    const ScalingProfile sp = from_c(profile);
    const auto [sv, dv] = sp.base(x);
    if (s != nullptr) *s = sv;
    if (ds != nullptr) *ds = dv;
  });
}

cylspec_status cylspec_contour_point(cylspec_scaling_profile profile, cylspec_complex lambda,
                                     double x, cylspec_complex* z, cylspec_complex* jacobian) {
  return guarded([&] {
    const ContourPoint pt = contour_point(from_c(profile), ScalingParameter{from_c(lambda)}, x);
    if (z != nullptr) *z = to_c(pt.z);
    if (jacobian != nullptr) *jacobian = to_c(pt.jacobian);
  });
}

// ---------------------------------------------------------------------------
// 1D assembly
// ---------------------------------------------------------------------------

cylspec_status cylspec_assemble_mode_operator(const cylspec_model* model, double sigma,
                                              cylspec_grid1d grid, cylspec_tridiag_real** out) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(out, "out");
    const Grid1D g = from_c(grid);
    TridiagonalReal op;
    if (const auto* m = std::get_if<SeparableModel>(&model->m))
      op = assemble_mode_operator(*m, sigma, g);
    else if (const auto* w = std::get_if<SquareWellModel>(&model->m))
      op = assemble_mode_operator(*w, g);
    else
      fail(ErrorCode::InvalidArgument, "guide model is two-dimensional");
    *out = new cylspec_tridiag_real{std::move(op)};
  });
}

cylspec_status cylspec_assemble_deformed_mode_operator(const cylspec_model* model, double sigma,
                                                       cylspec_grid1d grid,
                                                       cylspec_scaling_profile profile,
                                                       cylspec_complex lambda,
                                                       cylspec_tridiag_complex** out) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(out, "out");
    const Grid1D g = from_c(grid);
    const ScalingProfile sp = from_c(profile);
    const ScalingParameter lam{from_c(lambda)};
    TridiagonalComplex op;
    if (const auto* m = std::get_if<SeparableModel>(&model->m))
      op = assemble_deformed_mode_operator(*m, sigma, g, sp, lam);
    else if (const auto* w = std::get_if<SquareWellModel>(&model->m))
      op = assemble_deformed_mode_operator(*w, g, sp, lam);
    else
      fail(ErrorCode::InvalidArgument, "guide model is two-dimensional");
    *out = new cylspec_tridiag_complex{std::move(op)};
  });
}

cylspec_status cylspec_tridiag_real_to_complex(const cylspec_tridiag_real* op,
                                               cylspec_tridiag_complex** out) {
  return guarded([&] {
    require_ptr(op, "op");
    require_ptr(out, "out");
    *out = new cylspec_tridiag_complex{to_complex(op->op)};
  });
}

cylspec_status cylspec_conjugate_operator(const cylspec_tridiag_complex* op,
                                          cylspec_complex beta, cylspec_scaling_profile profile,
                                          cylspec_tridiag_complex** out) {
  return guarded([&] {
    require_ptr(op, "op");
    require_ptr(out, "out");
    *out = new cylspec_tridiag_complex{conjugate_operator(op->op, from_c(beta), from_c(profile))};
  });
}

void cylspec_tridiag_real_destroy(cylspec_tridiag_real* op) { delete op; }
void cylspec_tridiag_complex_destroy(cylspec_tridiag_complex* op) { delete op; }

int cylspec_tridiag_real_dim(const cylspec_tridiag_real* op) {
  return op == nullptr ? 0 : op->op.dim();
}
int cylspec_tridiag_complex_dim(const cylspec_tridiag_complex* op) {
  return op == nullptr ? 0 : op->op.dim();
}

char* cylspec_tridiag_real_triplets(const cylspec_tridiag_real* op) {
  if (op == nullptr) return nullptr;
  return dup_string(triplet_text(op->op));
}
char* cylspec_tridiag_complex_triplets(const cylspec_tridiag_complex* op) {
  if (op == nullptr) return nullptr;
  return dup_string(triplet_text(op->op));
}

// ---------------------------------------------------------------------------
// real solvers
// ---------------------------------------------------------------------------

cylspec_status cylspec_sturm_count(const cylspec_tridiag_real* op, double shift, int* out) {
  return guarded([&] {
    require_ptr(op, "op");
    require_ptr(out, "out");
    *out = sturm_count(op->op, shift);
  });
}

cylspec_status cylspec_default_bisection_tol(const cylspec_tridiag_real* op, double* out) {
  return guarded([&] {
    require_ptr(op, "op");
    require_ptr(out, "out");
    *out = default_bisection_tol(op->op);
  });
}

cylspec_status cylspec_eigenvalues_in_window(const cylspec_tridiag_real* op, double lo, double hi,
                                             double tol, cylspec_real_spectrum** out) {
  return guarded([&] {
    require_ptr(op, "op");
    require_ptr(out, "out");
    *out = new cylspec_real_spectrum{eigenvalues_in_window(op->op, {lo, hi}, tol)};
  });
}

void cylspec_real_spectrum_destroy(cylspec_real_spectrum* s) { delete s; }

int cylspec_real_spectrum_size(const cylspec_real_spectrum* s) {
  return s == nullptr ? 0 : static_cast<int>(s->result.eigenvalues.size());
}

cylspec_status cylspec_real_spectrum_values(const cylspec_real_spectrum* s, double* out) {
  return guarded([&] {
    require_ptr(s, "spectrum");
    require_ptr(out, "out");
    std::copy(s->result.eigenvalues.begin(), s->result.eigenvalues.end(), out);
  });
}

cylspec_status cylspec_real_spectrum_multiplicities(const cylspec_real_spectrum* s, int* out) {
  return guarded([&] {
    require_ptr(s, "spectrum");
    require_ptr(out, "out");
    std::copy(s->result.multiplicities.begin(), s->result.multiplicities.end(), out);
  });
}

cylspec_status cylspec_real_spectrum_residuals(const cylspec_real_spectrum* s, double* out) {
  return guarded([&] {
    require_ptr(s, "spectrum");
    require_ptr(out, "out");
    std::copy(s->result.residuals.begin(), s->result.residuals.end(), out);
  });
}

cylspec_status cylspec_real_spectrum_vector(const cylspec_real_spectrum* s, int j, double* out,
                                            int out_len) {
  return guarded([&] {
    require_ptr(s, "spectrum");
    require_ptr(out, "out");
    if (j < 0 || j >= static_cast<int>(s->result.eigenvectors.size()))
      fail(ErrorCode::InvalidArgument, "no stored eigenvector at this index");
    const auto& v = s->result.eigenvectors[j];
    if (static_cast<int>(v.size()) != out_len)
      fail(ErrorCode::InvalidArgument, "output length does not match the vector");
    std::copy(v.begin(), v.end(), out);
  });
}

cylspec_status cylspec_inverse_iteration(const cylspec_tridiag_real* op, double mu_approx,
                                         double* value_out, double* residual_out,
                                         double* vec_out) {
  return guarded([&] {
    require_ptr(op, "op");
    const Eigenpair pair = inverse_iteration(op->op, mu_approx);
    if (value_out != nullptr) *value_out = pair.value;
    if (residual_out != nullptr) *residual_out = pair.residual;
    if (vec_out != nullptr) std::copy(pair.vector.begin(), pair.vector.end(), vec_out);
  });
}

cylspec_status cylspec_dense_symmetric_eigenvalues(const double* a, int n, double* out) {
  return guarded([&] {
    require_ptr(a, "a");
    require_ptr(out, "out");
    std::vector<double> mat(a, a + static_cast<std::size_t>(n) * n);
    const std::vector<double> vals = dense_symmetric_eigenvalues(std::move(mat), n);
    std::copy(vals.begin(), vals.end(), out);
  });
}

// ---------------------------------------------------------------------------
// complex solvers
// ---------------------------------------------------------------------------

cylspec_status cylspec_dense_complex_eigenvalues(const cylspec_complex* a, int n,
                                                 cylspec_complex* values_out,
                                                 int* converged_out, double* trace_error_out,
                                                 int* all_converged_out) {
  return guarded([&] {
    require_ptr(a, "a");
    require_ptr(values_out, "values_out");
    std::vector<cplx> mat(static_cast<std::size_t>(n) * n);
    for (std::size_t i = 0; i < mat.size(); ++i) mat[i] = from_c(a[i]);
    const ComplexSpectrum s = complex_eigenvalues(std::move(mat), n);
    for (int i = 0; i < n; ++i) {
      values_out[i] = to_c(s.eigenvalues[i]);
      if (converged_out != nullptr) converged_out[i] = s.converged[i] ? 1 : 0;
    }
    if (trace_error_out != nullptr) *trace_error_out = s.trace_error;
    if (all_converged_out != nullptr) *all_converged_out = s.all_converged ? 1 : 0;
    if (!s.all_converged) fail(ErrorCode::Numeric, "QR iteration left unconverged eigenvalues");
  });
}

cylspec_status cylspec_tridiag_complex_eigenvalues(const cylspec_tridiag_complex* op,
                                                   cylspec_complex* values_out,
                                                   double* trace_error_out,
                                                   int* all_converged_out) {
  return guarded([&] {
    require_ptr(op, "op");
    require_ptr(values_out, "values_out");
    const ComplexSpectrum s = complex_eigenvalues(op->op);
    for (int i = 0; i < op->op.dim(); ++i) values_out[i] = to_c(s.eigenvalues[i]);
    if (trace_error_out != nullptr) *trace_error_out = s.trace_error;
    if (all_converged_out != nullptr) *all_converged_out = s.all_converged ? 1 : 0;
    if (!s.all_converged) fail(ErrorCode::Numeric, "QR iteration left unconverged eigenvalues");
  });
}

cylspec_status cylspec_nearest_eigenvalue(const cylspec_tridiag_complex* op,
                                          cylspec_complex target, cylspec_complex* value_out,
                                          double* residual_out) {
  return guarded([&] {
    require_ptr(op, "op");
    require_ptr(value_out, "value_out");
    const NearestEigenvalue ne = nearest_eigenvalue(op->op, from_c(target));
    *value_out = to_c(ne.value);
    if (residual_out != nullptr) *residual_out = ne.residual;
  });
}

// ---------------------------------------------------------------------------
// 2D guide
// ---------------------------------------------------------------------------

namespace {

GuideBoundary guide_boundary(cylspec_guide_boundary b) {
  return b == CYLSPEC_GUIDE_NEUMANN ? GuideBoundary::Neumann : GuideBoundary::Dirichlet;
}

GuideSector guide_sector(cylspec_guide_sector s) {
  switch (s) {
    case CYLSPEC_GUIDE_FULL: return GuideSector::Full;
    case CYLSPEC_GUIDE_EVEN: return GuideSector::Even;
    case CYLSPEC_GUIDE_ODD: return GuideSector::Odd;
  }
  fail(ErrorCode::Configuration, "unsupported guide sector");
}

}  // namespace

cylspec_status cylspec_assemble_guide_operator(const cylspec_model* model, cylspec_grid2d grid,
                                               cylspec_guide_boundary boundary,
                                               cylspec_guide_sector sector,
                                               cylspec_guide_op** out) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(out, "out");
    *out = new cylspec_guide_op{assemble_guide_operator(require_guide(model), from_c(grid),
                                                        guide_boundary(boundary),
                                                        guide_sector(sector))};
  });
}

void cylspec_guide_op_destroy(cylspec_guide_op* op) { delete op; }

int cylspec_guide_op_dim(const cylspec_guide_op* op) {
  return op == nullptr ? 0 : op->op.matrix.dim;
}

int cylspec_guide_op_bandwidth(const cylspec_guide_op* op) {
  return op == nullptr ? 0 : op->op.matrix.bandwidth;
}

char* cylspec_guide_op_triplets(const cylspec_guide_op* op) {
  if (op == nullptr) return nullptr;
  return dup_string(triplet_text(op->op.matrix));
}

cylspec_status cylspec_guide_count_below(const cylspec_guide_op* op, double shift, int* out) {
  return guarded([&] {
    require_ptr(op, "op");
    require_ptr(out, "out");
    *out = banded_count_below(op->op.matrix, shift);
  });
}

cylspec_status cylspec_guide_lowest_eigenpairs(const cylspec_guide_op* op, int k, double shift,
                                               uint64_t seed, double residual_tol,
                                               cylspec_real_spectrum** out) {
  return guarded([&] {
    require_ptr(op, "op");
    require_ptr(out, "out");
    *out = new cylspec_real_spectrum{lowest_eigenpairs_2d(op->op, k, shift, seed, residual_tol)};
  });
}

// ---------------------------------------------------------------------------
// analysis
// ---------------------------------------------------------------------------

cylspec_status cylspec_essential_curve_points(double nu, cylspec_complex lambda,
                                              cylspec_complex beta, const double* xi, int n_xi,
                                              cylspec_complex* out) {
  return guarded([&] {
    require_ptr(xi, "xi");
    require_ptr(out, "out");
    const EssentialCurve curve{nu, from_c(lambda), from_c(beta)};
    for (int i = 0; i < n_xi; ++i) out[i] = to_c(curve.point(xi[i]));
  });
}

cylspec_status cylspec_ray_classify(const cylspec_complex* eigenvalues, int n,
                                    const double* thresholds, int n_thresholds,
                                    cylspec_complex lambda, cylspec_complex beta,
                                    double curve_tol, double real_band, int* classes_out,
                                    double* distances_out, int* near_curve_out,
                                    int* near_real_out, int* outliers_out,
                                    double* max_near_curve_distance_out) {
  return guarded([&] {
    require_ptr(eigenvalues, "eigenvalues");
    require_ptr(thresholds, "thresholds");
    ComplexSpectrum spectrum;
    spectrum.eigenvalues.reserve(n);
    for (int i = 0; i < n; ++i) spectrum.eigenvalues.push_back(from_c(eigenvalues[i]));
    std::vector<EssentialCurve> curves;
    curves.reserve(n_thresholds);
    for (int j = 0; j < n_thresholds; ++j)
      curves.push_back({thresholds[j], from_c(lambda), from_c(beta)});
    const RayDeviationStats stats = ray_deviation(spectrum, curves, curve_tol, real_band);
    for (int i = 0; i < n; ++i) {
      if (classes_out != nullptr) classes_out[i] = static_cast<int>(stats.classification[i]);
      if (distances_out != nullptr) distances_out[i] = stats.curve_distance[i];
    }
    if (near_curve_out != nullptr) *near_curve_out = stats.near_curve;
    if (near_real_out != nullptr) *near_real_out = stats.near_real_isolated;
    if (outliers_out != nullptr) *outliers_out = stats.outliers;
    if (max_near_curve_distance_out != nullptr)
      *max_near_curve_distance_out = stats.max_curve_distance;
  });
}

cylspec_status cylspec_persistence_check(const cylspec_model* model, double sigma,
                                         double mu_candidate, double gap,
                                         const cylspec_complex* lambdas, int n_lambdas,
                                         cylspec_grid1d grid, cylspec_scaling_profile profile,
                                         cylspec_complex* mu_hat_out, double* drift_out,
                                         double* im_abs_out, double* tol_out, int* pass_out,
                                         int* all_pass_out) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(lambdas, "lambdas");
    const Grid1D g = from_c(grid);
    const ScalingProfile sp = from_c(profile);
    std::vector<cplx> lams;
    lams.reserve(n_lambdas);
    for (int i = 0; i < n_lambdas; ++i) lams.push_back(from_c(lambdas[i]));

    auto assemble = [&](const ScalingParameter& lam) -> TridiagonalComplex {
      if (const auto* m = std::get_if<SeparableModel>(&model->m))
        return assemble_deformed_mode_operator(*m, sigma, g, sp, lam);
      if (const auto* w = std::get_if<SquareWellModel>(&model->m))
        return assemble_deformed_mode_operator(*w, g, sp, lam);
      fail(ErrorCode::InvalidArgument, "guide model is two-dimensional");
    };
    const PersistenceReport report = persistence_check(assemble, mu_candidate, gap, lams, g);
    for (int i = 0; i < n_lambdas; ++i) {
      const PersistenceRow& row = report.rows[i];
      if (mu_hat_out != nullptr) mu_hat_out[i] = to_c(row.mu_hat);
      if (drift_out != nullptr) drift_out[i] = row.drift;
      if (im_abs_out != nullptr) im_abs_out[i] = row.im_abs;
      if (tol_out != nullptr) tol_out[i] = row.tol;
      if (pass_out != nullptr) pass_out[i] = row.pass ? 1 : 0;
    }
    if (all_pass_out != nullptr) *all_pass_out = report.all_pass ? 1 : 0;
  });
}

cylspec_status cylspec_fit_decay_rate(const cylspec_model* model, double sigma,
                                      const double* psi, int n, cylspec_grid1d grid, double mu,
                                      double gap, cylspec_decay_fit* out) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(psi, "psi");
    require_ptr(out, "out");
    const Grid1D g = from_c(grid);
    std::vector<double> vec(psi, psi + n);
    std::function<double(double)> potential;
    if (const auto* m = std::get_if<SeparableModel>(&model->m)) {
      const SeparableModel copy = *m;
      potential = [copy, sigma](double x) { return copy.potential(sigma, x); };
    } else if (const auto* w = std::get_if<SquareWellModel>(&model->m)) {
      const SquareWellModel copy = *w;
      potential = [copy](double x) { return copy.potential(x); };
    } else {
      fail(ErrorCode::InvalidArgument, "guide model has no 1D mode potential");
    }
    const DecayFit fit = fit_decay_rate(vec, g, mu, gap, potential);
    *out = {fit.gamma_hat, fit.gamma_hat_half, fit.bound, fit.x0,
            fit.x1,        fit.r_squared,      fit.points};
  });
}

cylspec_status cylspec_accumulation_scan(const cylspec_model* model, int mode_k, double epsilon,
                                         cylspec_sweep_kind sweep, const double* keys,
                                         int n_keys, double h, double fixed_length,
                                         cylspec_accum_report** out) {
  return guarded([&] {
    require_ptr(model, "model");
    require_ptr(keys, "keys");
    require_ptr(out, "out");
    const SeparableModel& m = require_separable(model);
    std::vector<double> sweep_values(keys, keys + n_keys);
    const SweepKind kind = sweep == CYLSPEC_SWEEP_MODE_INDEX ? SweepKind::ModeIndex
                                                             : SweepKind::TruncationLength;
    *out = new cylspec_accum_report{
        accumulation_scan(m, mode_k, epsilon, kind, sweep_values, h, fixed_length)};
  });
}

void cylspec_accum_report_destroy(cylspec_accum_report* report) { delete report; }

int cylspec_accum_report_points(const cylspec_accum_report* report) {
  return report == nullptr ? 0 : static_cast<int>(report->report.points.size());
}

cylspec_status cylspec_accum_report_point(const cylspec_accum_report* report, int index,
                                          double* key_out, int* count_out) {
  return guarded([&] {
    require_ptr(report, "report");
    if (index < 0 || index >= static_cast<int>(report->report.points.size()))
      fail(ErrorCode::InvalidArgument, "sweep index out of range");
    if (key_out != nullptr) *key_out = report->report.points[index].key;
    if (count_out != nullptr) *count_out = report->report.points[index].count;
  });
}

double cylspec_accum_report_point_nu(const cylspec_accum_report* report, int index) {
  if (report == nullptr || index < 0 ||
      index >= static_cast<int>(report->report.points.size()))
    return 0.0;
  return report->report.points[index].nu_global;
}

int cylspec_accum_report_value_count(const cylspec_accum_report* report, int index) {
  if (report == nullptr || index < 0 ||
      index >= static_cast<int>(report->report.points.size()))
    return 0;
  return static_cast<int>(report->report.points[index].values.size());
}

cylspec_status cylspec_accum_report_values(const cylspec_accum_report* report, int index,
                                           double* out) {
  return guarded([&] {
    require_ptr(report, "report");
    require_ptr(out, "out");
    if (index < 0 || index >= static_cast<int>(report->report.points.size()))
      fail(ErrorCode::InvalidArgument, "sweep index out of range");
    const auto& v = report->report.points[index].values;
    std::copy(v.begin(), v.end(), out);
  });
}

cylspec_status cylspec_accum_report_flags(const cylspec_accum_report* report, int* below_only,
                                          int* monotone, int* n_stable_above) {
  return guarded([&] {
    require_ptr(report, "report");
    if (below_only != nullptr) *below_only = report->report.below_only ? 1 : 0;
    if (monotone != nullptr) *monotone = report->report.monotone ? 1 : 0;
    if (n_stable_above != nullptr)
      *n_stable_above = static_cast<int>(report->report.stable_above.size());
  });
}

double cylspec_accum_report_nu_global(const cylspec_accum_report* report) {
  return report == nullptr ? 0.0 : report->report.nu_global;
}

int cylspec_accum_report_embedded(const cylspec_accum_report* report) {
  return report != nullptr && report->report.embedded ? 1 : 0;
}

cylspec_status cylspec_sector_fit_tridiag(const cylspec_tridiag_complex* op, int samples,
                                          uint64_t seed, cylspec_sector_fit* out) {
  return guarded([&] {
    require_ptr(op, "op");
    require_ptr(out, "out");
    const SectorFit fit = numerical_range_sector(op->op, samples, seed);
    *out = {fit.a, fit.theta, fit.samples};
  });
}

cylspec_status cylspec_sector_fit_dense(const cylspec_complex* a, int n, int samples,
                                        uint64_t seed, cylspec_sector_fit* out) {
  return guarded([&] {
    require_ptr(a, "a");
    require_ptr(out, "out");
    std::vector<cplx> mat(static_cast<std::size_t>(n) * n);
    for (std::size_t i = 0; i < mat.size(); ++i) mat[i] = from_c(a[i]);
    const SectorFit fit = numerical_range_sector(mat, n, samples, seed);
    *out = {fit.a, fit.theta, fit.samples};
  });
}
