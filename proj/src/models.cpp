#include "models.hpp"

#include <algorithm>
#include <cmath>

namespace cylspec {

namespace {

// tail base g = 1 + A |x|^{-delta} and its derivatives at t = |x| >= c
struct TailBase {
  double g, dg, ddg;
};

TailBase tail_base(double t, double amplitude, double delta) {
  const double p = std::pow(t, -delta);
  TailBase b;
  b.g = 1.0 + amplitude * p;
  b.dg = -amplitude * delta * p / t;
  b.ddg = amplitude * delta * (delta + 1.0) * p / (t * t);
  return b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Cross-sections
// ---------------------------------------------------------------------------

void CrossSectionSpec::validate() const {
  if (!(extent > 0.0)) fail(ErrorCode::Configuration, "cross-section extent must be positive");
  if (copies < 1) fail(ErrorCode::Configuration, "cross-section copies must be >= 1");
}

ThresholdLadder::ThresholdLadder(std::vector<ThresholdEntry> entries)
    : entries_(std::move(entries)) {
  for (std::size_t j = 0; j < entries_.size(); ++j) {
    if (entries_[j].multiplicity < 1)
      fail(ErrorCode::InvalidArgument, "threshold multiplicity must be >= 1");
    if (entries_[j].value < 0.0)
      fail(ErrorCode::InvalidArgument, "threshold values must be nonnegative");
    if (j > 0 && !(entries_[j].value > entries_[j - 1].value))
      fail(ErrorCode::InvalidArgument, "threshold values must be strictly increasing");
  }
}

std::vector<double> ThresholdLadder::flattened() const {
  std::vector<double> out;
  for (const auto& e : entries_)
    out.insert(out.end(), static_cast<std::size_t>(e.multiplicity), e.value);
  return out;
}

double ThresholdLadder::next_above(double mu) const {
  for (const auto& e : entries_) {
    const double tol = 1e-12 * std::max(1.0, std::abs(e.value));
    if (std::abs(mu - e.value) <= tol)
      fail(ErrorCode::Threshold, "mu coincides with a threshold");
    if (e.value > mu) return e.value;
  }
  fail(ErrorCode::Domain, "no threshold above mu");
}

ThresholdLadder build_threshold_ladder(const CrossSectionSpec& spec, int count) {
  spec.validate();
  if (count < 1) fail(ErrorCode::Configuration, "threshold count must be >= 1");

  std::vector<ThresholdEntry> entries;
  entries.reserve(static_cast<std::size_t>(count));
  switch (spec.kind) {
    case CrossSectionKind::IntervalDirichlet:
      // interval [-extent, extent], Dirichlet: (k pi / (2 extent))^2, k >= 1
      for (int k = 1; k <= count; ++k) {
        const double w = k * kPi / (2.0 * spec.extent);
        entries.push_back({w * w, spec.copies});
      }
      break;
    case CrossSectionKind::IntervalNeumann:
      for (int k = 0; k < count; ++k) {
        const double w = k * kPi / (2.0 * spec.extent);
        entries.push_back({w * w, spec.copies});
      }
      break;
    case CrossSectionKind::Circle:
      // circle of radius r: (m/r)^2, multiplicity 1 for m = 0 and 2 for m >= 1
      for (int m = 0; m < count; ++m) {
        const double w = m / spec.extent;
        entries.push_back({w * w, (m == 0 ? 1 : 2) * spec.copies});
      }
      break;
    default:
      fail(ErrorCode::Configuration, "unsupported cross-section kind");
  }
  return ThresholdLadder(std::move(entries));
}

double max_decay_rate(double mu, const ThresholdLadder& ladder) {
  const double nu = ladder.next_above(mu);
  return std::sqrt(nu - mu);
}

// ---------------------------------------------------------------------------
// Warp profiles
// ---------------------------------------------------------------------------

EvenQuarticBridge EvenQuarticBridge::match(double c, double value, double slope,
                                           double curvature) {
  EvenQuarticBridge b;
  b.b4 = (curvature * c - slope) / (8.0 * c * c * c);
  b.b2 = slope / (2.0 * c) - 2.0 * b.b4 * c * c;
  b.b0 = value - b.b2 * c * c - b.b4 * c * c * c * c;
  return b;
}

WarpProfile::WarpProfile(double amplitude, double delta, double c, double exponent)
    : amplitude_(amplitude), delta_(delta), c_(c), exponent_(exponent) {
  if (amplitude < 0.0) fail(ErrorCode::InvalidArgument, "warp amplitude must be >= 0");
  if (!(delta > 0.0) || delta > 2.0)
    fail(ErrorCode::InvalidArgument, "warp delta must lie in (0, 2]");
  if (!(c > 0.0)) fail(ErrorCode::InvalidArgument, "warp tail onset c must be positive");

  if (amplitude == 0.0) {
    bridge_ = EvenQuarticBridge{1.0, 0.0, 0.0};
  } else {
    const TailBase tb = tail_base(c, amplitude, delta);
    const double p = exponent;
    const double f = std::pow(tb.g, p);
    const double df = p * std::pow(tb.g, p - 1.0) * tb.dg;
    const double ddf = p * (p - 1.0) * std::pow(tb.g, p - 2.0) * tb.dg * tb.dg +
                       p * std::pow(tb.g, p - 1.0) * tb.ddg;
    bridge_ = EvenQuarticBridge::match(c, f, df, ddf);
    if (!(bridge_.b0 >= f))
      fail(ErrorCode::InvalidArgument, "bridge violates f(0) >= f(c)");
    // positivity of f on the bridge (even quartic: check stationary points)
    double fmin = std::min(bridge_.value(0.0), f);
    if (bridge_.b4 != 0.0) {
      const double xs2 = -bridge_.b2 / (2.0 * bridge_.b4);
      if (xs2 > 0.0 && xs2 < c * c) fmin = std::min(fmin, bridge_.value(std::sqrt(xs2)));
    }
    if (!(fmin > 0.0)) fail(ErrorCode::InvalidArgument, "bridge profile is not positive");
  }
}

ProfileValues WarpProfile::eval(double x) const {
  const double ax = std::abs(x);
  const double sgn = x < 0.0 ? -1.0 : 1.0;
  if (amplitude_ == 0.0) return {1.0, 0.0, 0.0};
  if (ax >= c_) {
    const TailBase tb = tail_base(ax, amplitude_, delta_);
    const double p = exponent_;
    ProfileValues v;
    v.f = std::pow(tb.g, p);
    v.df = sgn * p * std::pow(tb.g, p - 1.0) * tb.dg;
    v.ddf = p * (p - 1.0) * std::pow(tb.g, p - 2.0) * tb.dg * tb.dg +
            p * std::pow(tb.g, p - 1.0) * tb.ddg;
    return v;
  }
  return {bridge_.value(x), bridge_.slope(x), bridge_.curvature(x)};
}

ComplexProfileValues WarpProfile::eval(cplx z) const {
  if (z.imag() == 0.0) {
    const ProfileValues v = eval(z.real());
    return {v.f, v.df, v.ddf};
  }
  if (amplitude_ == 0.0) return {1.0, 0.0, 0.0};
  if (!(std::abs(z.real()) >= c_))
    fail(ErrorCode::Contract, "complex profile argument inside the bridge region");
  const double sgn = z.real() < 0.0 ? -1.0 : 1.0;
  const cplx w = sgn * z;  // principal branch on Re w >= c > 0
  const cplx pw = std::pow(w, -delta_);
  const cplx g = 1.0 + amplitude_ * pw;
  const cplx dg = -amplitude_ * delta_ * pw / w;
  const cplx ddg = amplitude_ * delta_ * (delta_ + 1.0) * pw / (w * w);
  const double p = exponent_;
  ComplexProfileValues v;
  v.f = std::pow(g, p);
  const cplx dfd_w = p * std::pow(g, p - 1.0) * dg;
  const cplx ddf_w = p * (p - 1.0) * std::pow(g, p - 2.0) * dg * dg +
                     p * std::pow(g, p - 1.0) * ddg;
  v.df = sgn * dfd_w;  // chain rule through w = sgn z
  v.ddf = ddf_w;
  return v;
}

// ---------------------------------------------------------------------------
// Separable model
// ---------------------------------------------------------------------------

SeparableModel::SeparableModel(int n, double delta, double c, double amplitude,
                               CrossSectionSpec cross_section)
    : n_(n), cross_(cross_section), warp_(amplitude, delta, c, n / 4.0) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "cross-section dimension n must be >= 1");
  cross_.validate();
}

double SeparableModel::potential(double sigma, double x) const {
  if (sigma < 0.0) fail(ErrorCode::InvalidArgument, "sigma must be nonnegative");
  const double ax = std::abs(x);
  if (amplitude() == 0.0) return 0.0;
  if (ax >= c()) {
    const TailBase tb = tail_base(ax, amplitude(), delta());
    const double p = n_ / 4.0;
    const double f = std::pow(tb.g, p);
    const double ddf = p * (p - 1.0) * std::pow(tb.g, p - 2.0) * tb.dg * tb.dg +
                       p * std::pow(tb.g, p - 1.0) * tb.ddg;
    // f^{-4/n} - 1 = (1 - g)/g, exact in the tail
    return ddf / f + ((1.0 - tb.g) / tb.g) * sigma;
  }
  const ProfileValues v = warp_.eval(x);
  return v.ddf / v.f + (std::pow(v.f, -4.0 / n_) - 1.0) * sigma;
}

cplx SeparableModel::potential(double sigma, cplx z) const {
  if (z.imag() == 0.0) return potential(sigma, z.real());
  const ComplexProfileValues v = warp_.eval(z);  // enforces |Re z| >= c
  if (amplitude() == 0.0) return 0.0;
  const cplx g = std::pow(v.f, 4.0 / n_);
  return v.ddf / v.f + ((1.0 - g) / g) * sigma;
}

std::pair<double, double> SeparableModel::stabilization_deviation(double x) const {
  // g2 = f^{4/n} h: deviation |f^{4/n} - 1| in the h-norm; g0 == 1, g1 == 0.
  const ProfileValues v = warp_.eval(x);
  const double q = std::pow(v.f, 4.0 / n_);
  const double dq = (4.0 / n_) * std::pow(v.f, 4.0 / n_ - 1.0) * v.df;
  return {std::abs(q - 1.0), std::abs(dq)};
}

ThresholdLadder SeparableModel::thresholds(int count) const {
  return build_threshold_ladder(cross_, count);
}

// ---------------------------------------------------------------------------
// Planar guide
// ---------------------------------------------------------------------------

PlanarGuideModel::PlanarGuideModel(double delta, double c, double amplitude)
    : warp_(amplitude, delta, c, 1.0) {}

GuideMetric PlanarGuideModel::metric_at(double s, double y) const {
  if (std::abs(y) > 1.0) fail(ErrorCode::InvalidArgument, "guide metric requires |y| <= 1");
  const ProfileValues v = warp_.eval(s);
  GuideMetric m;
  m.g0 = 1.0 + v.df * v.df * y * y;
  m.g1 = v.f * v.df * y;
  m.g2 = v.f * v.f;
  m.sqrt_det = v.f;
  m.inv00 = 1.0;
  m.inv01 = -v.df * y / v.f;
  m.inv11 = m.g0 / (v.f * v.f);
  return m;
}

std::pair<double, double> PlanarGuideModel::stabilization_deviation(double s) const {
  const ProfileValues v = warp_.eval(s);
  // sup over y in [-1,1]: |g0-1| = f'^2, |g1| = |f f'|, |g2-1| = |f^2-1|
  const double dev = v.df * v.df + std::abs(v.f * v.df) + std::abs(v.f * v.f - 1.0);
  // d/dx: 2 f' f'' y^2, (f'^2 + f f'') y, 2 f f'
  const double ddev = std::abs(2.0 * v.df * v.ddf) + std::abs(v.df * v.df + v.f * v.ddf) +
                      std::abs(2.0 * v.f * v.df);
  return {dev, ddev};
}

ThresholdLadder PlanarGuideModel::thresholds(CrossSectionKind kind, int count) const {
  CrossSectionSpec spec;
  spec.kind = kind;
  spec.extent = 1.0;
  spec.copies = 1;
  return build_threshold_ladder(spec, count);
}

cplx SquareWellModel::potential(cplx z) const {
  if (z.imag() == 0.0) return potential(z.real());
  if (std::abs(z.real()) < halfwidth)
    fail(ErrorCode::Contract, "square-well contour must stay beyond the support");
  return 0.0;
}

// ---------------------------------------------------------------------------
// Scaling contour
// ---------------------------------------------------------------------------

void ScalingProfile::validate() const {
  if (!(onset > 0.0)) fail(ErrorCode::InvalidArgument, "scaling onset R must be positive");
  if (!(ramp_width > 0.0)) fail(ErrorCode::InvalidArgument, "scaling ramp width must be positive");
}

std::pair<double, double> ScalingProfile::base(double x) const {
  if (x <= 1.0) return {0.0, 0.0};
  const double w = ramp_width;
  if (x >= 1.0 + w) return {x - 1.0 - 0.5 * w, 1.0};
  const double u = (x - 1.0) / w;
  // quintic smoothstep for s' and its exact integral for s
  const double sp = u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
  const double s = w * (u * u * u * u * (2.5 + u * (-3.0 + u)));
  return {s, sp};
}

ContourPoint contour_point(const ScalingProfile& profile, const ScalingParameter& lambda,
                           double x) {
  lambda.validate();
  const auto [s, sp] = profile.shifted(x);
  return {x + lambda.lambda * s, 1.0 + lambda.lambda * sp};
}

// ---------------------------------------------------------------------------
// Stabilization validator
// ---------------------------------------------------------------------------

namespace {

template <typename DevFn>
StabilizationReport stabilization_report(double c, const std::vector<double>& x_probe,
                                         DevFn&& dev) {
  for (std::size_t i = 1; i < x_probe.size(); ++i)
    if (!(x_probe[i] > x_probe[i - 1]))
      fail(ErrorCode::InvalidArgument, "stabilization probe must be increasing");

  StabilizationReport report;
  report.samples.reserve(x_probe.size());
  for (double x : x_probe) {
    const auto [d, dd] = dev(x);
    report.samples.push_back({x, d, dd});
  }

  bool decreasing = true;
  double first_beyond = -1.0, last_beyond = -1.0;
  double prev = -1.0;
  bool have_prev = false;
  for (const auto& s : report.samples) {
    if (s.x < c) continue;
    const double total = s.metric_deviation + s.derivative_deviation;
    if (have_prev && total > prev * (1.0 + 1e-12) + 1e-300) decreasing = false;
    prev = total;
    have_prev = true;
    if (first_beyond < 0.0) first_beyond = total;
    last_beyond = total;
  }
  report.decreasing_beyond_c = decreasing;
  report.tends_to_zero =
      first_beyond <= 1e-15 || (last_beyond >= 0.0 && last_beyond <= 0.5 * first_beyond);
  return report;
}

}  // namespace

StabilizationReport validate_stabilization(const SeparableModel& model,
                                           const std::vector<double>& x_probe) {
  return stabilization_report(model.c(), x_probe,
                              [&](double x) { return model.stabilization_deviation(x); });
}

StabilizationReport validate_stabilization(const PlanarGuideModel& model,
                                           const std::vector<double>& x_probe) {
  return stabilization_report(model.c(), x_probe,
                              [&](double x) { return model.stabilization_deviation(x); });
}

}  // namespace cylspec
