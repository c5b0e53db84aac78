#pragma once

#include <cmath>
#include <string_view>
#include <variant>

#include "pmereact/density.hpp"
#include "pmereact/errors.hpp"

namespace pmr {

// Distance from an interface below which derivatives are refused.
inline constexpr double kKinkTolerance = 1e-9;

struct Derivatives {
  double w_t = 0.0;
  double wm_r = 0.0;   // (w^m)_r
  double wm_rr = 0.0;  // (w^m)_rr
  double lap_wm = 0.0; // radial Laplacian of w^m
};

struct SupportRadius {
  enum class Kind { Finite, Empty, Degenerate, Infinite };
  Kind kind = Kind::Finite;
  double radius = 0.0;
};

// Profile of the blow-up subsolution: (log r)^b for r >= e, b r^2/(2e^2) + 1 - b/2 inside.
template <class Real>
Real sfrak(Real r, Real bunder) {
  using std::log;
  using std::pow;
  const Real e = static_cast<Real>(kE);
  if (r >= e) return pow(log(r), bunder);
  return bunder * r * r / (2 * e * e) + 1 - bunder / 2;
}

/// C (T+t)^beta (log(r+r0))^(-b/m): global supersolution under H1.
class GE1Barrier {
 public:
  struct Params {
    double C = 1.0;
    double beta = 0.0;
    double T = 1.0;
    double b = 0.5;
    double eps = 0.5;
    double r0 = kE;
  };

  GE1Barrier(ProblemConstants constants, Params params);

  const ProblemConstants& constants() const { return constants_; }
  const Params& params() const { return params_; }
  // sup over x of (log(|x|+r0))^(-b p/m), attained at the origin.
  double cbar() const { return cbar_; }

  template <class Real>
  Real value(Real r, Real t) const {
    using std::log;
    using std::pow;
    const Real zeta = pow(static_cast<Real>(params_.T) + t, static_cast<Real>(params_.beta));
    return static_cast<Real>(params_.C) * zeta *
           pow(log(r + static_cast<Real>(params_.r0)), -static_cast<Real>(params_.b) / constants_.m);
  }

  Derivatives derivatives(double r, double t) const;
  void check_time(double t) const;

 private:
  ProblemConstants constants_;
  Params params_;
  double cbar_;
};

/// C zeta [1 - (log(r+r0))^bbar eta / a]_+^(1/(m-1)) with zeta = (T+t)^(-1/(p-1)),
/// eta = (T+t)^(-(p-m)/(p-1)), bbar = alpha + 2: compactly supported supersolution for p > m.
class GE2Barrier {
 public:
  struct Params {
    double C = 1.0;
    double a = 1.0;
    double T = 1.0;
    double r0 = kE;
  };

  GE2Barrier(ProblemConstants constants, double alpha, Params params);

  const ProblemConstants& constants() const { return constants_; }
  const Params& params() const { return params_; }
  double bbar() const { return bbar_; }
  double alpha() const { return bbar_ - 2.0; }

  template <class Real>
  Real value(Real r, Real t) const {
    using std::log;
    using std::pow;
    const Real m = constants_.m;
    const Real p = constants_.p;
    const Real tau = static_cast<Real>(params_.T) + t;
    const Real zeta = pow(tau, -1 / (p - 1));
    const Real eta = pow(tau, -(p - m) / (p - 1));
    const Real F = 1 - pow(log(r + static_cast<Real>(params_.r0)), static_cast<Real>(bbar_)) * eta /
                           static_cast<Real>(params_.a);
    if (F <= 0) return 0;
    return static_cast<Real>(params_.C) * zeta * pow(F, 1 / (m - 1));
  }

  double zeta(double t) const;
  double eta(double t) const;
  Derivatives derivatives(double r, double t) const;
  SupportRadius support(double t) const;
  void check_time(double t) const;

 private:
  ProblemConstants constants_;
  Params params_;
  double bbar_;
};

/// Piecewise subsolution for p > m: outer C zeta [1 - (log r)^b eta/a]_+^(1/(m-1)) on r >= e,
/// inner C zeta [1 - s(r) eta/a]_+^(1/(m-1)) on r < e, zeta = (T-t)^(-1/(p-1)),
/// eta = (T-t)^((m-p)/(p-1)), b = alpha + 1. Defined for 0 <= t < T.
class BlowupSubsolution {
 public:
  struct Params {
    double C = 1.0;
    double a = 1.0;
    double T = 1.0;
  };

  BlowupSubsolution(ProblemConstants constants, double alpha, Params params);

  const ProblemConstants& constants() const { return constants_; }
  const Params& params() const { return params_; }
  double bunder() const { return bunder_; }
  double alpha() const { return bunder_ - 1.0; }

  template <class Real>
  Real value(Real r, Real t) const {
    using std::pow;
    const Real m = constants_.m;
    const Real p = constants_.p;
    const Real tau = static_cast<Real>(params_.T) - t;
    const Real zeta = pow(tau, -1 / (p - 1));
    const Real eta = pow(tau, (m - p) / (p - 1));
    const Real G = 1 - sfrak<Real>(r, static_cast<Real>(bunder_)) * eta / static_cast<Real>(params_.a);
    if (G <= 0) return 0;
    return static_cast<Real>(params_.C) * zeta * pow(G, 1 / (m - 1));
  }

  // Values of the two pieces evaluated at any radius (used for the r = e matching checks).
  double outer_value(double r, double t) const;
  double inner_value(double r, double t) const;

  double zeta(double t) const;
  double eta(double t) const;
  Derivatives derivatives(double r, double t) const;
  SupportRadius support(double t) const;
  // C zeta(t) max(1, G(0,t))^(1/(m-1)).
  double sup_norm(double t) const;
  void check_time(double t) const;

 private:
  Derivatives outer_derivatives(double r, double t) const;
  Derivatives inner_derivatives(double r, double t) const;

  ProblemConstants constants_;
  Params params_;
  double bunder_;
};

using Barrier = std::variant<GE1Barrier, GE2Barrier, BlowupSubsolution>;

std::string_view barrier_name(const Barrier& barrier);
bool is_supersolution(const Barrier& barrier);
const ProblemConstants& barrier_constants(const Barrier& barrier);

// Throws OutOfDomain for t outside the barrier's time domain.
double eval(const Barrier& barrier, double r, double t);
template <class Real>
Real eval_as(const Barrier& barrier, Real r, Real t) {
  return std::visit([&](const auto& b) { return b.template value<Real>(r, t); }, barrier);
}

// Throws KinkError within kKinkTolerance of a free boundary or of r = e (blow-up subsolution).
Derivatives eval_derivatives(const Barrier& barrier, double r, double t);

// w_t - (1/rho) Delta(w^m) - w^p with analytic derivatives.
double residual(const Barrier& barrier, const RadialFunction& rho_fn, double r, double t);

// GE1 reports Kind::Infinite.
SupportRadius support_radius(const Barrier& barrier, double t);

struct FluxMatch {
  double left = 0.0;    // inner piece, r -> e-
  double right = 0.0;   // outer piece, r -> e+
  double closed = 0.0;  // closed form at the interface
  double jump = 0.0;    // left - right
};

FluxMatch flux_match(const BlowupSubsolution& barrier, double t);

}  // namespace pmr
