#pragma once

#include <vector>

#include "fracbellman/field.hpp"
#include "fracbellman/kernel.hpp"

namespace fracbellman {

/// Shell/cell decomposition with compensation weights for evaluating
///   (2-sigma) \int delta u(x;y) K(y) |y|^{-n-sigma} dy
/// uniformly in sigma. Regions:
///   inner   |y| < rho (default rho = h): analytic weight
///           surf(n) rho^{2-sigma}/2 against the directional average of the
///           2n axis second differences (exact on quadratics);
///   middle  rho <= |y| <= r_mid: lattice offsets j h. In 1d the masses are
///           exact hat-function integrals of the singular factor plus a
///           piecewise-linear quadratic-deficit moment (again exact on
///           quadratics); in 2d exact cell integrals of the singular factor
///           (polar clipping near the inner ball, Gauss cells beyond).
///   outer   r_mid < |y| <= r_tail: geometric radial shells, exact radial
///           mass, uniform angular nodes.
/// All stored masses are nonnegative and include the (2-sigma) factor.
/// Offsets/directions are stored as half sets; evaluations visit +/- pairs,
/// which cancels the gradient term of delta u for |y| < 1 exactly.
struct QuadratureRule {
  int n = 1;
  double sigma = 1.5;
  double h = 0.0;
  double rho = 0.0;
  double r_mid = 0.0;
  double r_tail = 1e3;

  // middle (half set: first nonzero lattice component positive)
  struct MiddleNode {
    int i = 0, j = 0;     // lattice offset
    Vec y = {0.0, 0.0};   // j h
    double mass = 0.0;
    bool in_unit_ball = false;  // |y| < 1, cutoff tested at the node
  };
  std::vector<MiddleNode> middle;
  double m2_total = 0.0;            // 1d quadratic-deficit moment (0 in 2d)
  std::vector<double> m2_interval;  // per middle interval [y_j, y_{j+1}] (1d)

  double inner_weight = 0.0;        // surf(n) rho^{2-sigma} / 2

  // outer (directions: half set, paired with their antipodes)
  std::vector<Vec> shell_dirs;
  std::vector<double> shell_radius;     // geometric-mean radius per shell
  std::vector<double> shell_node_mass;  // per node (= radial mass / dir count)

  /// total mass of middle+outer weights; the rule invariant requires this to
  /// match (2-sigma) int_{rho<|y|<r_tail} |y|^{-n-sigma} dy within 1%.
  double middle_outer_mass() const;
  double analytic_annulus_mass() const;

  static QuadratureRule build(int n, double sigma, double h, double r_mid,
                              double r_tail = 1e3, double rho = 0.0);
};

/// A kernel bound to a rule: weights with K folded in, the residual drift
/// produced by the odd part of K inside B_1, and the coefficient multiplying
/// the axis second-difference average.
struct BoundKernel {
  const QuadratureRule* rule = nullptr;
  KernelSpec spec;
  std::vector<double> w_plus, w_minus;       // middle: mass * K(+-y)
  std::vector<double> ws_plus, ws_minus;     // outer: per (shell, dir) flattened
  double s_coef = 0.0;                       // inner K avg * inner_weight - sum m2 K
  Vec drift_total = {0.0, 0.0};              // b - sum_{|y|<1} mass K y
  double row_sum = 0.0;                      // positive off-center weight total (CFL)
};

BoundKernel bind_kernel(const QuadratureRule& rule, const KernelSpec& k);

struct OperatorEvaluation {
  double value = 0.0;
  double tail_error_bound = 0.0;
  double inner = 0.0;
  double middle = 0.0;
  double outer = 0.0;
  double drift = 0.0;
  int argmin = -1;  // bellman only
};

/// delta u(x,t;y) = u(x+y) - u(x) - Du(x).y [|y|<1], with Du by central
/// differences of width h.
double delta_u(const SpaceTimeField& u, const Vec& x, std::size_t slice, const Vec& y);

/// L_{K,b}^sigma u(x,t) by the rule's compensated quadrature; the explicit
/// drift and the odd-part residual drift use upwind differences selected by
/// the sign of the combined drift vector, so the scheme stays monotone.
OperatorEvaluation evaluate_linear(const BoundKernel& bk, const SpaceTimeField& u, const Vec& x,
                                   std::size_t slice);
OperatorEvaluation evaluate_linear(const QuadratureRule& rule, const KernelSpec& k,
                                   const SpaceTimeField& u, const Vec& x, std::size_t slice);

enum class ExtremalSign { Plus, Minus };

/// Pucci extremal over the symmetric-kernel (pointwise K in [lambda,Lambda])
/// plus free-drift (|b| <= beta) subclass:
///   M+ u = (2-s) int (Lambda du^+ - lambda du^-) |y|^{-n-s} dy + beta |Du|,
/// discretized on the same nodes as evaluate_linear; the drift term is the
/// exact supremum of the upwind form over |b| <= beta.
OperatorEvaluation pucci_extremal(ExtremalSign sign, double lambda, double Lambda, double beta,
                                  const QuadratureRule& rule, const SpaceTimeField& u, const Vec& x,
                                  std::size_t slice);

/// inf over the family members (FiniteFamily), or M- for a PucciClass.
OperatorEvaluation bellman(const std::vector<BoundKernel>& members, const SpaceTimeField& u,
                           const Vec& x, std::size_t slice);
OperatorEvaluation bellman(const QuadratureRule& rule, const OperatorFamily& family,
                           const SpaceTimeField& u, const Vec& x, std::size_t slice);

/// |int v L w - int w Lbar v| over the grid, (Kbar, bbar) = (K(-.), -b).
/// v and w must vanish near and outside the grid boundary.
double check_integration_by_parts(const QuadratureRule& rule, const KernelSpec& k,
                                  const SpaceTimeField& v, const SpaceTimeField& w,
                                  std::size_t slice);

struct PropertyCheckReport {
  double homogeneity_error = 0.0;     // max |M(alpha v) - alpha M v|
  double concavity_margin = 0.0;      // min slack of eta*M-v <= M(eta*v) <= eta*M+v
  double translation_margin = 0.0;    // min slack of the drift sandwich
  bool pass = false;
};

/// Verifies, at the given sample nodes, homogeneity M(alpha v) = alpha M v,
/// the concavity sandwich against a discrete mollifier eta (nonnegative,
/// normalized, compact), and the translation sandwich for an axis drift b.
/// eta is given by its half-width in nodes and must fit inside the grid.
PropertyCheckReport check_concavity_translation_homogeneity(
    const QuadratureRule& rule, double lambda, double Lambda, double beta,
    const SpaceTimeField& v, int eta_halfwidth, double alpha, const Vec& b,
    const std::vector<Vec>& sample_points, std::size_t slice, double slack_scale);

}  // namespace fracbellman
