#include "pmereact/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmereact/errors.hpp"

namespace pmr {

namespace {

constexpr double kMargin = 0.05;
constexpr std::size_t kK0Grid = 4096;
constexpr std::size_t kK0VerifyGrid = 10 * kK0Grid;
constexpr std::size_t kBallGrid = 1024;
constexpr double kRadiusMax = 1e6;

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = count == 1 ? 1.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    out[i] = std::exp(a + s * (b - a));
  }
  return out;
}

// Radii for the k0 grid: the origin, a linear patch near it, then log spacing to 1e6.
std::vector<double> k0_grid(std::size_t count) {
  std::vector<double> r;
  r.reserve(count + count / 8 + 1);
  const std::size_t linear = count / 8;
  for (std::size_t i = 0; i < linear; ++i) r.push_back(static_cast<double>(i) / static_cast<double>(linear));
  for (double x : log_spaced(1.0, kRadiusMax, count)) r.push_back(x);
  return r;
}

double h1_profile(const DensityParams& p, double r) {
  const double s = r + p.r0;
  return std::pow(std::log(s), p.alpha) * s * s;
}

}  // namespace

void ProblemConstants::validate() const {
  if (!(m > 1.0)) throw InvalidParameter("m must exceed 1");
  if (!(p > 1.0)) throw InvalidParameter("p must exceed 1");
  if (N < 3) throw InvalidParameter("N must be at least 3");
}

std::string_view to_string(DensityFamily family) {
  switch (family) {
    case DensityFamily::H1: return "H1";
    case DensityFamily::H2: return "H2";
    case DensityFamily::H2Smooth: return "H2Smooth";
  }
  return "?";
}

DensityFamily parse_density_family(std::string_view name) {
  if (name == "H1" || name == "h1") return DensityFamily::H1;
  if (name == "H2" || name == "h2") return DensityFamily::H2;
  if (name == "H2Smooth" || name == "h2smooth" || name == "H2smooth") return DensityFamily::H2Smooth;
  throw InvalidParameter("unknown density family '" + std::string(name) + "' (expected H1, H2 or H2Smooth)");
}

void validate_structure(const DensityParams& p) {
  if (!(p.alpha > 1.0)) throw InvalidParameter("alpha must exceed 1 (hypotheses H1/H2)");
  if (!(p.r0 >= kE)) throw InvalidParameter("r0 must be at least e");
  if (p.family == DensityFamily::H1) {
    if (!(p.k > 0.0)) throw InvalidParameter("k must be positive");
  } else {
    if (!(p.k1 > 0.0) || !(p.k2 > 0.0)) throw InvalidParameter("k1 and k2 must be positive");
    if (p.k1 > p.k2) throw InvalidParameter("k1 must not exceed k2");
  }
  if (p.k0 && !(*p.k0 > 0.0)) throw InvalidParameter("k0 must be positive");
  if (p.rho1 && !(*p.rho1 > 0.0)) throw InvalidParameter("rho1 must be positive");
  if (p.rho2 && !(*p.rho2 > 0.0)) throw InvalidParameter("rho2 must be positive");
  if (p.rho1 && p.rho2 && *p.rho1 > *p.rho2) throw InvalidParameter("rho1 must not exceed rho2");
}

double inv_rho(const DensityParams& p, double r) {
  const double s = r + p.r0;
  const double L = std::log(s);
  if (p.family == DensityFamily::H1) return p.k * std::pow(L, p.alpha) * s * s;
  return p.k1 * s * s / std::pow(L, p.alpha);
}

double rho(const DensityParams& p, double r) { return 1.0 / inv_rho(p, r); }

EnvelopeReport envelope_check(const DensityParams& env, const RadialFunction& rho_fn,
                              std::span<const double> samples) {
  EnvelopeReport report;
  report.worst_slack = std::numeric_limits<double>::infinity();
  report.samples.reserve(samples.size());
  for (double r : samples) {
    EnvelopeSample s;
    s.r = r;
    const bool smooth = env.family == DensityFamily::H2Smooth;
    if (!(r >= 0.0)) {
      s.status = SampleStatus::Rejected;
      s.reason = "negative radius";
    } else if (!smooth && !(r > kE)) {
      s.status = SampleStatus::Rejected;
      s.reason = "radius inside the closed ball of radius e, where the envelope is not imposed";
    }
    if (s.status == SampleStatus::Rejected) {
      ++report.rejected;
      report.samples.push_back(std::move(s));
      continue;
    }
    const double inv = 1.0 / rho_fn(r);
    switch (env.family) {
      case DensityFamily::H1: {
        const double lower = env.k * std::pow(std::log(r), env.alpha) * r * r;
        s.slack = inv / lower - 1.0;
        break;
      }
      case DensityFamily::H2:
      case DensityFamily::H2Smooth: {
        const double x = smooth ? r + env.r0 : r;
        const double shape = x * x / std::pow(std::log(x), env.alpha);
        const double lo = inv / (env.k1 * shape) - 1.0;
        const double hi = 1.0 - inv / (env.k2 * shape);
        s.slack = std::min(lo, hi);
        break;
      }
    }
    // Tight envelopes sit at slack ~ 1 ulp; treat |slack| <= 1e-12 as equality.
    s.status = s.slack >= -1e-12 ? SampleStatus::Pass : SampleStatus::Fail;
    report.worst_slack = std::min(report.worst_slack, s.slack);
    if (s.status == SampleStatus::Fail) report.pass = false;
    report.samples.push_back(std::move(s));
  }
  if (report.rejected == samples.size()) report.worst_slack = 0.0;
  return report;
}

std::vector<double> default_envelope_samples(DensityFamily family, std::size_t count) {
  if (family == DensityFamily::H2Smooth) {
    auto r = log_spaced(1e-3, kRadiusMax, count - 1);
    r.insert(r.begin(), 0.0);
    return r;
  }
  // Strictly above e so that no sample is rejected.
  return log_spaced(kE * (1.0 + 1e-9), kRadiusMax, count);
}

double derive_k0(const DensityParams& p) {
  if (p.family != DensityFamily::H1) {
    throw UnsupportedFamily("derive_k0 is defined for the H1 family only, got " + std::string(to_string(p.family)));
  }
  validate_structure(p);
  double ratio_min = std::numeric_limits<double>::infinity();
  for (double r : k0_grid(kK0Grid)) ratio_min = std::min(ratio_min, inv_rho(p, r) / h1_profile(p, r));
  // Tail: the canonical ratio tends to k as r -> infinity.
  ratio_min = std::min(ratio_min, p.k);
  return (1.0 - kMargin) * ratio_min;
}

BallBounds derive_ball_bounds(const DensityParams& p) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < kBallGrid; ++i) {
    const double r = kE * static_cast<double>(i) / static_cast<double>(kBallGrid - 1);
    const double v = inv_rho(p, r);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {(1.0 - kMargin) * lo, (1.0 + kMargin) * hi};
}

Density::Density(DensityParams params) : params_(std::move(params)) {
  validate_structure(params_);

  if (params_.family == DensityFamily::H1) {
    if (params_.k0) {
      for (double r : k0_grid(kK0VerifyGrid)) {
        if (*params_.k0 * h1_profile(params_, r) > (1.0 + 1e-12) * inv_rho(params_, r)) {
          throw InvalidParameter("k0 violates the global H1 bound 1/rho >= k0 (log(r+r0))^alpha (r+r0)^2 at r = " +
                                 std::to_string(r));
        }
      }
      k0_ = params_.k0;
    } else {
      k0_ = derive_k0(params_);
    }
  }

  // The canonical member must satisfy its own family envelope.
  DensityParams env = params_;
  const auto fn = [this](double r) { return rho(params_, r); };
  const auto samples = default_envelope_samples(params_.family);
  const auto report = envelope_check(env, fn, samples);
  if (!report.pass) {
    throw InvalidParameter("canonical " + std::string(to_string(params_.family)) +
                           " density violates its envelope (worst relative slack " +
                           std::to_string(report.worst_slack) + "); widen [k1, k2]");
  }

  const BallBounds derived = derive_ball_bounds(params_);
  ball_ = derived;
  const double raw_lo = derived.rho1 / (1.0 - kMargin);
  const double raw_hi = derived.rho2 / (1.0 + kMargin);
  if (params_.rho1) {
    if (*params_.rho1 > raw_lo) throw InvalidParameter("rho1 exceeds min of 1/rho on the ball of radius e");
    ball_.rho1 = *params_.rho1;
  }
  if (params_.rho2) {
    if (*params_.rho2 < raw_hi) throw InvalidParameter("rho2 is below max of 1/rho on the ball of radius e");
    ball_.rho2 = *params_.rho2;
  }
}

double Density::k0() const {
  if (!k0_) throw UnsupportedFamily("k0 is only defined for H1 densities");
  return *k0_;
}

RadialFunction Density::as_function() const {
  return [p = params_](double r) { return rho(p, r); };
}

}  // namespace pmr
