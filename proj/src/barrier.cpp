#include "pmereact/barrier.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pmr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) { return std::to_string(x); }

}  // namespace

// ---------------------------------------------------------------- GE1

GE1Barrier::GE1Barrier(ProblemConstants constants, Params params) : constants_(constants), params_(params) {
  constants_.validate();
  if (!(params_.C > 0.0)) throw InvalidParameter("GE1: C must be positive");
  if (!(params_.beta >= 0.0)) throw InvalidParameter("GE1: beta must be nonnegative");
  if (!(params_.T > 0.0)) throw InvalidParameter("GE1: T must be positive");
  if (!(params_.b > 0.0)) throw InvalidParameter("GE1: b must be positive");
  if (!(params_.eps > 0.0)) throw InvalidParameter("GE1: eps must be positive");
  if (!(params_.r0 >= kE)) throw InvalidParameter("GE1: r0 must be at least e");
  cbar_ = std::pow(std::log(params_.r0), -params_.b * constants_.p / constants_.m);
}

void GE1Barrier::check_time(double t) const {
  if (!(t >= 0.0)) throw OutOfDomain("GE1: t must be nonnegative, got " + fmt(t));
}

Derivatives GE1Barrier::derivatives(double r, double t) const {
  check_time(t);
  const auto& [C, beta, T, b, eps, r0] = params_;
  const double m = constants_.m;
  const double s = r + r0;
  const double L = std::log(s);
  const double zeta = std::pow(T + t, beta);
  const double dzeta = beta == 0.0 ? 0.0 : beta * std::pow(T + t, beta - 1.0);
  const double Cm_zm = std::pow(C * zeta, m);

  Derivatives d;
  d.w_t = C * dzeta * std::pow(L, -b / m);
  d.wm_r = -b * Cm_zm * std::pow(L, -b - 1.0) / s;
  d.wm_rr = b * Cm_zm * ((b + 1.0) * std::pow(L, -b - 2.0) / (s * s) + std::pow(L, -b - 1.0) / (s * s));
  // (w^m)_r(0) < 0: conical tip, the Laplacian diverges to -infinity at the origin.
  d.lap_wm = r == 0.0 ? -kInf : d.wm_rr + (constants_.N - 1) / r * d.wm_r;
  return d;
}

// ---------------------------------------------------------------- GE2

GE2Barrier::GE2Barrier(ProblemConstants constants, double alpha, Params params)
    : constants_(constants), params_(params), bbar_(alpha + 2.0) {
  constants_.validate();
  if (!(constants_.p > constants_.m)) throw UnsupportedRegime("GE2 barrier requires p > m");
  if (!(alpha > 1.0)) throw InvalidParameter("GE2: alpha must exceed 1");
  if (!(params_.C > 0.0)) throw InvalidParameter("GE2: C must be positive");
  if (!(params_.a > 0.0)) throw InvalidParameter("GE2: a must be positive");
  if (!(params_.T > 0.0)) throw InvalidParameter("GE2: T must be positive");
  if (!(params_.r0 >= kE)) throw InvalidParameter("GE2: r0 must be at least e");
}

void GE2Barrier::check_time(double t) const {
  if (!(t >= 0.0)) throw OutOfDomain("GE2: t must be nonnegative, got " + fmt(t));
}

double GE2Barrier::zeta(double t) const { return std::pow(params_.T + t, -1.0 / (constants_.p - 1.0)); }

double GE2Barrier::eta(double t) const {
  return std::pow(params_.T + t, -(constants_.p - constants_.m) / (constants_.p - 1.0));
}

SupportRadius GE2Barrier::support(double t) const {
  check_time(t);
  const double r = std::exp(std::pow(params_.a / eta(t), 1.0 / bbar_)) - params_.r0;
  if (std::abs(r) <= 1e-12 * params_.r0) return {SupportRadius::Kind::Degenerate, 0.0};
  if (r < 0.0) return {SupportRadius::Kind::Empty, 0.0};
  return {SupportRadius::Kind::Finite, r};
}

Derivatives GE2Barrier::derivatives(double r, double t) const {
  check_time(t);
  const SupportRadius sr = support(t);
  if (sr.kind != SupportRadius::Kind::Finite) return {};
  if (std::abs(r - sr.radius) < kKinkTolerance) {
    throw KinkError("GE2: r = " + fmt(r) + " is on the free boundary at t = " + fmt(t));
  }
  if (r > sr.radius) return {};

  const double m = constants_.m;
  const double p = constants_.p;
  const double q = 1.0 / (m - 1.0);
  const double C = params_.C;
  const double a = params_.a;
  const double bb = bbar_;
  const double tau = params_.T + t;
  const double z = zeta(t);
  const double dz = -1.0 / (p - 1.0) * std::pow(tau, -p / (p - 1.0));
  const double e = eta(t);
  const double de_over_e = -(p - m) / ((p - 1.0) * tau);
  const double s = r + params_.r0;
  const double L = std::log(s);
  const double F = 1.0 - std::pow(L, bb) * e / a;
  const double Fq = std::pow(F, q);
  const double Fq1 = std::pow(F, q - 1.0);
  const double K = std::pow(C, m) / a * std::pow(z, m) * e;  // C^m/a zeta^m eta

  Derivatives d;
  d.w_t = C * dz * Fq + C * z * q * de_over_e * Fq - C * z * q * de_over_e * Fq1;
  d.wm_r = -bb * K * m * q * Fq * std::pow(L, bb - 1.0) / s;
  d.wm_rr = -bb * K * m * q * (bb * m * q - 1.0) * std::pow(L, bb - 2.0) / (s * s) * Fq +
            bb * K * m * q * std::pow(L, bb - 1.0) / (s * s) * Fq +
            bb * bb * K * m * q * q * std::pow(L, bb - 2.0) / (s * s) * Fq1;
  d.lap_wm = r == 0.0 ? -kInf : (constants_.N - 1) / r * d.wm_r + d.wm_rr;
  return d;
}

// ---------------------------------------------------------------- Blow-up subsolution

BlowupSubsolution::BlowupSubsolution(ProblemConstants constants, double alpha, Params params)
    : constants_(constants), params_(params), bunder_(alpha + 1.0) {
  constants_.validate();
  if (!(constants_.p > constants_.m)) throw UnsupportedRegime("blow-up subsolution requires p > m");
  if (!(alpha > 1.0)) throw InvalidParameter("blow-up: alpha must exceed 1");
  if (!(params_.C > 0.0)) throw InvalidParameter("blow-up: C must be positive");
  if (!(params_.a > 0.0)) throw InvalidParameter("blow-up: a must be positive");
  if (!(params_.T > 0.0)) throw InvalidParameter("blow-up: T must be positive");
}

void BlowupSubsolution::check_time(double t) const {
  if (!(t >= 0.0) || !(t < params_.T)) {
    throw OutOfDomain("blow-up subsolution is defined for 0 <= t < T = " + fmt(params_.T) + ", got t = " + fmt(t));
  }
}

double BlowupSubsolution::zeta(double t) const { return std::pow(params_.T - t, -1.0 / (constants_.p - 1.0)); }

double BlowupSubsolution::eta(double t) const {
  return std::pow(params_.T - t, (constants_.m - constants_.p) / (constants_.p - 1.0));
}

double BlowupSubsolution::outer_value(double r, double t) const {
  check_time(t);
  const double F = 1.0 - std::pow(std::log(r), bunder_) * eta(t) / params_.a;
  return F <= 0.0 ? 0.0 : params_.C * zeta(t) * std::pow(F, 1.0 / (constants_.m - 1.0));
}

double BlowupSubsolution::inner_value(double r, double t) const {
  check_time(t);
  const double s = bunder_ * r * r / (2.0 * kE * kE) + 1.0 - bunder_ / 2.0;
  const double G = 1.0 - s * eta(t) / params_.a;
  return G <= 0.0 ? 0.0 : params_.C * zeta(t) * std::pow(G, 1.0 / (constants_.m - 1.0));
}

SupportRadius BlowupSubsolution::support(double t) const {
  check_time(t);
  const double target = params_.a / eta(t);
  if (target >= 1.0) return {SupportRadius::Kind::Finite, std::exp(std::pow(target, 1.0 / bunder_))};
  return {SupportRadius::Kind::Finite, kE * std::sqrt((target - 1.0 + bunder_ / 2.0) * 2.0 / bunder_)};
}

double BlowupSubsolution::sup_norm(double t) const {
  check_time(t);
  const double G0 = 1.0 - (1.0 - bunder_ / 2.0) * eta(t) / params_.a;
  return params_.C * zeta(t) * std::pow(std::max(1.0, G0), 1.0 / (constants_.m - 1.0));
}

Derivatives BlowupSubsolution::derivatives(double r, double t) const {
  check_time(t);
  if (std::abs(r - kE) < kKinkTolerance) {
    throw KinkError("blow-up subsolution: r = " + fmt(r) + " is on the matching sphere r = e");
  }
  const SupportRadius sr = support(t);
  if (std::abs(r - sr.radius) < kKinkTolerance) {
    throw KinkError("blow-up subsolution: r = " + fmt(r) + " is on the free boundary at t = " + fmt(t));
  }
  if (r > sr.radius) return {};
  return r > kE ? outer_derivatives(r, t) : inner_derivatives(r, t);
}

Derivatives BlowupSubsolution::outer_derivatives(double r, double t) const {
  const double m = constants_.m;
  const double p = constants_.p;
  const double q = 1.0 / (m - 1.0);
  const double C = params_.C;
  const double a = params_.a;
  const double bb = bunder_;
  const double tau = params_.T - t;
  const double z = zeta(t);
  const double dz = 1.0 / (p - 1.0) * std::pow(tau, -p / (p - 1.0));
  const double e = eta(t);
  const double de_over_e = (p - m) / ((p - 1.0) * tau);
  const double L = std::log(r);
  const double F = 1.0 - std::pow(L, bb) * e / a;
  const double Fq = std::pow(F, q);
  const double Fq1 = std::pow(F, q - 1.0);
  const double K = std::pow(C, m) / a * std::pow(z, m) * e;
  const double r2 = r * r;

  Derivatives d;
  d.w_t = C * dz * Fq + C * z * q * de_over_e * Fq - C * z * q * de_over_e * Fq1;
  d.wm_r = -bb * K * m * q * Fq * std::pow(L, bb - 1.0) / r;
  d.wm_rr = -bb * bb * K * (m * q) * (m * q) * std::pow(L, bb - 2.0) / r2 * Fq +
            bb * K * m * q * std::pow(L, bb - 2.0) / r2 * Fq + bb * K * m * q * std::pow(L, bb - 1.0) / r2 * Fq +
            bb * bb * K * m * q * q * std::pow(L, bb - 2.0) / r2 * Fq1;
  d.lap_wm = K * m * q * q * bb * bb * std::pow(L, bb - 2.0) / r2 * Fq1 -
             K * (m * q) * (m * q) * bb * bb * std::pow(L, bb - 2.0) / r2 * Fq +
             K * m * q * bb * std::pow(L, bb - 2.0) / r2 * Fq -
             K * m * q * bb * std::pow(L, bb - 1.0) / r2 * Fq * (constants_.N - 2);
  return d;
}

Derivatives BlowupSubsolution::inner_derivatives(double r, double t) const {
  const double m = constants_.m;
  const double p = constants_.p;
  const double q = 1.0 / (m - 1.0);
  const double C = params_.C;
  const double a = params_.a;
  const double bb = bunder_;
  const double e2 = kE * kE;
  const double tau = params_.T - t;
  const double z = zeta(t);
  const double dz = 1.0 / (p - 1.0) * std::pow(tau, -p / (p - 1.0));
  const double e = eta(t);
  const double de_over_e = (p - m) / ((p - 1.0) * tau);
  const double s = bb * r * r / (2.0 * e2) + 1.0 - bb / 2.0;
  const double G = 1.0 - s * e / a;
  const double Gq = std::pow(G, q);
  const double Gq1 = std::pow(G, q - 1.0);
  const double Cm_zm = std::pow(C, m) * std::pow(z, m);

  Derivatives d;
  d.w_t = C * dz * Gq + C * z * q * de_over_e * Gq - C * z * q * de_over_e * Gq1;
  d.wm_r = -Cm_zm / a * m * q * Gq * (bb * r / e2) * e;
  d.wm_rr = -Cm_zm / a * m * q * (bb / e2) * e * (Gq - r * q * Gq1 * (e / a) * (bb * r / e2));
  // Smooth at the origin ((v^m)_r = O(r)): this is the symmetric limit N (v^m)_rr at r = 0.
  d.lap_wm = Cm_zm / (a * a) * m * q * q * bb * bb * r * r / (e2 * e2) * e * e * Gq1 -
             constants_.N * Cm_zm / a * m * q * (bb / e2) * e * Gq;
  return d;
}

// ---------------------------------------------------------------- dispatch

std::string_view barrier_name(const Barrier& barrier) {
  switch (barrier.index()) {
    case 0: return "GE1";
    case 1: return "GE2";
    default: return "Blowup";
  }
}

bool is_supersolution(const Barrier& barrier) { return !std::holds_alternative<BlowupSubsolution>(barrier); }

const ProblemConstants& barrier_constants(const Barrier& barrier) {
  return std::visit([](const auto& b) -> const ProblemConstants& { return b.constants(); }, barrier);
}

double eval(const Barrier& barrier, double r, double t) {
  return std::visit(
      [&](const auto& b) {
        b.check_time(t);
        return b.template value<double>(r, t);
      },
      barrier);
}

Derivatives eval_derivatives(const Barrier& barrier, double r, double t) {
  if (!(r >= 0.0)) throw InvalidParameter("radius must be nonnegative");
  return std::visit([&](const auto& b) { return b.derivatives(r, t); }, barrier);
}

double residual(const Barrier& barrier, const RadialFunction& rho_fn, double r, double t) {
  const Derivatives d = eval_derivatives(barrier, r, t);
  const double w = eval(barrier, r, t);
  if (std::isinf(d.lap_wm)) return -d.lap_wm;  // sign of the conical tip
  return d.w_t - d.lap_wm / rho_fn(r) - std::pow(w, barrier_constants(barrier).p);
}

SupportRadius support_radius(const Barrier& barrier, double t) {
  if (const auto* b = std::get_if<GE1Barrier>(&barrier)) {
    b->check_time(t);
    return {SupportRadius::Kind::Infinite, kInf};
  }
  if (const auto* b = std::get_if<GE2Barrier>(&barrier)) return b->support(t);
  return std::get<BlowupSubsolution>(barrier).support(t);
}

FluxMatch flux_match(const BlowupSubsolution& barrier, double t) {
  barrier.check_time(t);
  const double m = barrier.constants().m;
  const double q = 1.0 / (m - 1.0);
  const double C = barrier.params().C;
  const double a = barrier.params().a;
  const double bb = barrier.bunder();
  const double z = barrier.zeta(t);
  const double e = barrier.eta(t);
  const double Cm_zm = std::pow(C, m) * std::pow(z, m);
  const double e2 = kE * kE;

  // Inner piece at r = e (s(e) = 1).
  const double G = 1.0 - (bb * kE * kE / (2.0 * e2) + 1.0 - bb / 2.0) * e / a;
  const double left = G <= 0.0 ? 0.0 : -Cm_zm / a * m * q * std::pow(G, q) * (bb * kE / e2) * e;
  // Outer piece at r = e (log e = 1).
  const double F = 1.0 - std::pow(std::log(kE), bb) * e / a;
  const double right = F <= 0.0 ? 0.0 : -bb * Cm_zm / a * m * q * std::pow(F, q) * std::pow(std::log(kE), bb - 1.0) / kE * e;
  const double plus = std::max(0.0, 1.0 - e / a);
  const double closed = -Cm_zm * m * q * (e / a) * (bb / kE) * std::pow(plus, q);
  return {left, right, closed, left - right};
}

}  // namespace pmr
