#pragma once

#include <utility>
#include <vector>

#include "common.hpp"

namespace cylspec {

// ---------------------------------------------------------------------------
// Cross-sections and threshold ladders
// ---------------------------------------------------------------------------

enum class CrossSectionKind { IntervalDirichlet, IntervalNeumann, Circle };

struct CrossSectionSpec {
  CrossSectionKind kind = CrossSectionKind::IntervalDirichlet;
  double extent = 1.0;  // interval half-length (the catalog fixes 1) or circle radius
  int copies = 1;       // disjoint copies of the cross-section

  void validate() const;
};

struct ThresholdEntry {
  double value = 0.0;
  int multiplicity = 1;
};

// Sorted distinct cross-section eigenvalues with multiplicities.
class ThresholdLadder {
 public:
  explicit ThresholdLadder(std::vector<ThresholdEntry> entries);

  const std::vector<ThresholdEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  double value(std::size_t j) const { return entries_[j].value; }
  int multiplicity(std::size_t j) const { return entries_[j].multiplicity; }

  // Values repeated by multiplicity: the sigma_k view of the ladder.
  std::vector<double> flattened() const;

  // Smallest ladder value strictly above mu. Throws Domain if none,
  // Threshold if mu coincides with a ladder value.
  double next_above(double mu) const;

 private:
  std::vector<ThresholdEntry> entries_;
};

// First `count` distinct eigenvalues of the cross-section Laplacian, closed forms.
// `copies` multiplies multiplicities, never values.
ThresholdLadder build_threshold_ladder(const CrossSectionSpec& spec, int count);

// min over ladder values nu > mu of sqrt(nu - mu).
double max_decay_rate(double mu, const ThresholdLadder& ladder);

// ---------------------------------------------------------------------------
// Warp profiles
// ---------------------------------------------------------------------------

// Even quartic b0 + b2 x^2 + b4 x^4 matched to (value, slope, curvature) at x = c.
struct EvenQuarticBridge {
  double b0 = 1.0, b2 = 0.0, b4 = 0.0;

  static EvenQuarticBridge match(double c, double value, double slope, double curvature);

  double value(double x) const { return b0 + (b2 + b4 * x * x) * x * x; }
  double slope(double x) const { return (2.0 * b2 + 4.0 * b4 * x * x) * x; }
  double curvature(double x) const { return 2.0 * b2 + 12.0 * b4 * x * x; }
};

struct ProfileValues {
  double f = 1.0, df = 0.0, ddf = 0.0;
};

struct ComplexProfileValues {
  cplx f, df, ddf;
};

// f(x) = (1 + amplitude |x|^{-delta})^{exponent} for |x| >= c, even quartic
// bridge inside. exponent = n/4 for the separable family, 1 for the guide.
// amplitude = 0 degenerates to f == 1 exactly (product metric).
class WarpProfile {
 public:
  WarpProfile(double amplitude, double delta, double c, double exponent);

  ProfileValues eval(double x) const;

  // Analytic continuation of the tail; requires |Re z| >= c when Im z != 0.
  ComplexProfileValues eval(cplx z) const;

  double amplitude() const { return amplitude_; }
  double delta() const { return delta_; }
  double c() const { return c_; }
  double exponent() const { return exponent_; }
  const EvenQuarticBridge& bridge() const { return bridge_; }

 private:
  double amplitude_, delta_, c_, exponent_;
  EvenQuarticBridge bridge_;
};

// ---------------------------------------------------------------------------
// Model catalog
// ---------------------------------------------------------------------------

// Infinite cylinder R x Omega' with metric dx^2 + f(x)^{4/n} h,
// f^{4/n} = 1 + amplitude |x|^{-delta} beyond |x| = c.
class SeparableModel {
 public:
  SeparableModel(int n, double delta, double c, double amplitude,
                 CrossSectionSpec cross_section);

  ProfileValues profile(double x) const { return warp_.eval(x); }
  ComplexProfileValues profile(cplx z) const { return warp_.eval(z); }

  // V = f''/f + (f^{-4/n} - 1) sigma; closed-form tail continuation for
  // |Re z| >= c, bridge polynomial on the real bridge.
  double potential(double sigma, double x) const;
  cplx potential(double sigma, cplx z) const;

  // metric deviation from the product metric, sup over the cross-section
  // (|f^{4/n} - 1| in the h-norm) and its x-derivative
  std::pair<double, double> stabilization_deviation(double x) const;

  int n() const { return n_; }
  double delta() const { return warp_.delta(); }
  double c() const { return warp_.c(); }
  double amplitude() const { return warp_.amplitude(); }
  const CrossSectionSpec& cross_section() const { return cross_; }
  const WarpProfile& warp() const { return warp_; }

  ThresholdLadder thresholds(int count) const;

 private:
  int n_;
  CrossSectionSpec cross_;
  WarpProfile warp_;
};

struct GuideMetric {
  double g0, g1, g2;  // g0 dx(x)dx + 2 g1 dx(x)dy + g2 dy(x)dy
  double sqrt_det;    // = f
  double inv00, inv01, inv11;
};

// Planar guide G = {|t| <= f(s)} straightened by (s,t) = (x + c, f(x + c) y).
class PlanarGuideModel {
 public:
  PlanarGuideModel(double delta, double c, double amplitude);

  ProfileValues profile(double s) const { return warp_.eval(s); }

  // Pullback metric at end coordinate x (evaluates the profile at s = x + c).
  GuideMetric metric(double x, double y) const { return metric_at(x + c(), y); }
  // Same, at the absolute axial coordinate s.
  GuideMetric metric_at(double s, double y) const;

  std::pair<double, double> stabilization_deviation(double s) const;

  double delta() const { return warp_.delta(); }
  double c() const { return warp_.c(); }
  double amplitude() const { return warp_.amplitude(); }
  const WarpProfile& warp() const { return warp_; }

  ThresholdLadder thresholds(CrossSectionKind kind, int count) const;

 private:
  WarpProfile warp_;
};

// Compact-support validation benchmark; not a member of the paper families.
struct SquareWellModel {
  double depth = 5.0;
  double halfwidth = 2.0;

  void validate() const {
    if (!(depth > 0.0) || !(halfwidth > 0.0))
      fail(ErrorCode::InvalidArgument, "SquareWellModel: depth and halfwidth must be positive");
  }

  double potential(double x) const { return std::abs(x) < halfwidth ? -depth : 0.0; }
  cplx potential(cplx z) const;  // contour must stay beyond the support
};

// ---------------------------------------------------------------------------
// Scaling contour
// ---------------------------------------------------------------------------

// s_R(x) = s(x - R): s vanishes up to 1, s' ramps 0 -> 1 over [1, 1 + rampWidth]
// through the quintic smoothstep, then s' == 1.
struct ScalingProfile {
  double onset = 3.0;  // R
  double ramp_width = 1.0;

  void validate() const;

  // (s, s') of the unshifted ramp.
  std::pair<double, double> base(double x) const;
  // (s_R, s_R')
  std::pair<double, double> shifted(double x) const { return base(x - onset); }
};

struct ScalingParameter {
  cplx lambda;

  static double alpha() { return kPi / 4.0 - 0.01; }
  static double max_modulus() { return std::sin(alpha()); }

  void validate() const {
    if (!(std::abs(lambda) < max_modulus()))
      fail(ErrorCode::Parameter, "scaling parameter must satisfy |lambda| < sin(alpha)");
  }
};

struct ContourPoint {
  cplx z;         // x + lambda s_R(x)
  cplx jacobian;  // 1 + lambda s_R'(x)
};

ContourPoint contour_point(const ScalingProfile& profile, const ScalingParameter& lambda,
                           double x);

// ---------------------------------------------------------------------------
// Stabilization validator
// ---------------------------------------------------------------------------

struct StabilizationSample {
  double x = 0.0;
  double metric_deviation = 0.0;      // |g0-1| + |g1| + |g2-h| sup over the section
  double derivative_deviation = 0.0;  // sup over the section of sum |d/dx g_k|
};

struct StabilizationReport {
  std::vector<StabilizationSample> samples;
  bool decreasing_beyond_c = false;
  bool tends_to_zero = false;
};

StabilizationReport validate_stabilization(const SeparableModel& model,
                                           const std::vector<double>& x_probe);
StabilizationReport validate_stabilization(const PlanarGuideModel& model,
                                           const std::vector<double>& x_probe);

}  // namespace cylspec
