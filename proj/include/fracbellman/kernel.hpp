#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fracbellman/common.hpp"

namespace fracbellman {

enum class KernelClass { L0, L1, L2 };

/// A jump kernel K on R^n \ {0} together with the parameters that place the
/// linear operator
///   L u(x) = (2-sigma) \int delta u(x;y) K(y) |y|^{-n-sigma} dy + b . Du(x)
/// inside one of the uniformly elliptic classes. K itself is dimensionless
/// and must stay within [lambda, Lambda]; the drift budget beta bounds the
/// free drift b together with the compensator produced by the odd part of K.
struct KernelSpec {
  int n = 1;
  double sigma = 1.5;
  std::function<double(const Vec&)> kernel_fn;
  Vec drift = {0.0, 0.0};
  double lambda = 1.0;
  double Lambda = 1.0;
  double beta = 0.0;
  KernelClass class_tag = KernelClass::L0;
  std::string name = "custom";

  double eval(const Vec& y) const { return kernel_fn(y); }
};

/// Finite family for the Bellman infimum, or a Pucci-class descriptor where
/// only (lambda, Lambda, beta) matter and the kernel is chosen extremally.
struct OperatorFamily {
  enum class Kind { FiniteFamily, PucciClass };
  Kind kind = Kind::FiniteFamily;
  std::vector<KernelSpec> members;  // nonempty for FiniteFamily
  int n = 1;
  double sigma = 1.5;
  double lambda = 1.0;
  double Lambda = 1.0;
  double beta = 0.0;

  static OperatorFamily finite(std::vector<KernelSpec> ms);
  static OperatorFamily pucci(int n, double sigma, double lambda, double Lambda, double beta);
};

struct ValidationReport {
  bool pass = false;
  double worst_margin = 0.0;  // >= 0 means no violation
  Vec worst_point = {0.0, 0.0};
  std::vector<std::string> warnings;
  std::string detail;
};

/// Deterministic sample shells used by the validation routines:
/// 48 log-spaced radii in [1e-3, 1e3]; 2 signs (n=1) or 32 uniform angles
/// plus near-axis probe directions (n=2) so jumps across coordinate planes
/// are visible to the finite-difference smoothness estimates.
std::vector<Vec> validation_samples(int n);

/// Worst violation margin of lambda <= K <= Lambda over the sample shells,
/// scaled by max(lambda, 1); passes iff margin >= -1e-12.
/// sample_count scales the radial resolution (1 = default shells).
ValidationReport check_bounds(const KernelSpec& k, int sample_count = 1);

/// max over r_grid of |b + (2-sigma) \int_{B_1 \ B_r} y K(y) |y|^{-n-sigma} dy|
/// by composite log-radial midpoint quadrature (the B_1 cutoff is evaluated
/// at quadrature midpoints, matching the operator's cell-midpoint cutoff).
double drift_compensation(const KernelSpec& k, const std::vector<double>& r_grid);

/// Default r grid: 32 log-spaced radii in [1e-3, 1-1e-3]. The sup over
/// r in (0,1) is reported as the grid max, not a certified supremum.
std::vector<double> default_r_grid();
double drift_compensation(const KernelSpec& k);

/// Central finite-difference estimates of |DK(y)| |y| (level L1) and
/// |D^2K(y)| |y|^2 (level L2) on the sample shells, against Lambda with 5%
/// slack for the difference error. Step is 1e-3 |y| (scale invariant).
ValidationReport check_smoothness(const KernelSpec& k, KernelClass level);

/// Full class membership: bounds, compensated drift <= beta, and the
/// smoothness levels implied by class_tag.
ValidationReport check_membership(const KernelSpec& k);

/// The integration-by-parts partner (K(-y), -b).
KernelSpec adjoint_pair(const KernelSpec& k);

/// Kernel presets addressable by name in config files:
///   "const"            K = 1
///   "odd-bump(a)"      K = 1 + a sign(y_1)
///   "smooth-odd(a)"    K = 1 + a (y_1/|y|) s(|y|), s = quintic ramp on [1/4,1/2]
///   "anisotropic(a)"   K = 1 + a (y_1/|y|)^2
///   "wavy(a)"          K = 1 + a sin(log|y|)
/// Exact formulas are documented in the README. lambda/Lambda/beta/class_tag
/// are filled with the natural values for the preset.
KernelSpec kernel_preset(const std::string& name, int n, double sigma);

/// Smoothstep quintic 6t^5-15t^4+10t^3 clamped to [0,1]; C^2, monotone.
double smoothstep5(double t);

}  // namespace fracbellman
