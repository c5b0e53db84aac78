#pragma once

#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pmr {

inline constexpr double kE = std::numbers::e;

// Exponents and dimension of rho u_t = Delta(u^m) + rho u^p in R^N.
struct ProblemConstants {
  double m = 2.0;
  double p = 3.0;
  int N = 3;

  // Throws InvalidParameter unless m > 1, p > 1, N >= 3.
  void validate() const;
};

enum class DensityFamily { H1, H2, H2Smooth };

std::string_view to_string(DensityFamily family);
DensityFamily parse_density_family(std::string_view name);

/// Constants of one density family.
///
/// Every family is realized by a canonical radial member:
///   H1:             1/rho = k  (log(r+r0))^alpha (r+r0)^2
///   H2, H2Smooth:   1/rho = k1 (r+r0)^2 / (log(r+r0))^alpha
/// k0, rho1 and rho2 are derived when absent and validated by sampling when given.
struct DensityParams {
  DensityFamily family = DensityFamily::H1;
  double k = 1.0;
  double k1 = 1.0;
  double k2 = 1.0;
  double alpha = 2.0;
  double r0 = kE;
  std::optional<double> k0;
  std::optional<double> rho1;
  std::optional<double> rho2;
};

// Structural checks only (alpha > 1, r0 >= e, k1 <= k2, positivity). Throws InvalidParameter.
void validate_structure(const DensityParams& params);

double inv_rho(const DensityParams& params, double r);
double rho(const DensityParams& params, double r);

using RadialFunction = std::function<double(double)>;

enum class SampleStatus { Pass, Fail, Rejected };

struct EnvelopeSample {
  double r = 0.0;
  SampleStatus status = SampleStatus::Pass;
  // Relative margin of the tighter side: (1/rho)/lower - 1 or 1 - (1/rho)/upper.
  double slack = 0.0;
  std::string reason;
};

struct EnvelopeReport {
  std::vector<EnvelopeSample> samples;
  double worst_slack = 0.0;
  std::size_t rejected = 0;
  bool pass = true;
};

// Checks rho_fn against the envelope of `envelope.family` with the constants in `envelope`:
//   H1:        1/rho >= k (log r)^alpha r^2                             for r > e
//   H2:        k1 r^2/(log r)^alpha <= 1/rho <= k2 r^2/(log r)^alpha    for r > e
//   H2Smooth:  the same with r -> r+r0, for all r >= 0
EnvelopeReport envelope_check(const DensityParams& envelope, const RadialFunction& rho_fn,
                              std::span<const double> samples);

// 4096 log-spaced radii on (e, 1e6], or on [0, 1e6] for H2Smooth.
std::vector<double> default_envelope_samples(DensityFamily family, std::size_t count = 4096);

// Largest k0 with 1/rho >= k0 (log(r+r0))^alpha (r+r0)^2 on a dense grid, times 0.95.
double derive_k0(const DensityParams& params);

struct BallBounds {
  double rho1 = 0.0;
  double rho2 = 0.0;
};

// min/max of 1/rho on [0, e] (1024 points), widened by 5%.
BallBounds derive_ball_bounds(const DensityParams& params);

/// Validated density with its derived constants resolved.
class Density {
 public:
  explicit Density(DensityParams params);

  const DensityParams& params() const { return params_; }
  DensityFamily family() const { return params_.family; }

  double operator()(double r) const { return rho(params_, r); }
  double inv(double r) const { return inv_rho(params_, r); }

  // Throws UnsupportedFamily for non-H1 densities.
  double k0() const;
  double rho1() const { return ball_.rho1; }
  double rho2() const { return ball_.rho2; }

  RadialFunction as_function() const;

 private:
  DensityParams params_;
  std::optional<double> k0_;
  BallBounds ball_;
};

}  // namespace pmr
