#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fracbellman/common.hpp"

namespace fracbellman {

/// Uniform node-centered grid on the box [-R, R]^n with spacing h.
/// R must be an integer multiple of h so nodes land on the box edge.
struct Grid {
  int n = 1;
  double R = 2.0;
  double h = 1.0 / 64.0;
  int per_axis = 0;   // nodes per axis, 2*(R/h)+1
  int half = 0;       // R/h

  Grid() = default;
  Grid(int n_, double R_, double h_);

  std::size_t node_count() const {
    return n == 1 ? static_cast<std::size_t>(per_axis)
                  : static_cast<std::size_t>(per_axis) * static_cast<std::size_t>(per_axis);
  }
  // lattice index <-> coordinates; i runs over [-half, half] per axis
  std::size_t flat(int i, int j = 0) const {
    const std::size_t a = static_cast<std::size_t>(i + half);
    return n == 1 ? a : a * static_cast<std::size_t>(per_axis) + static_cast<std::size_t>(j + half);
  }
  bool inside(int i, int j = 0) const {
    return i >= -half && i <= half && (n == 1 || (j >= -half && j <= half));
  }
  Vec coord(int i, int j = 0) const { return {i * h, n == 2 ? j * h : 0.0}; }
};

enum class ExteriorKind { Zero, Constant, Bounded, Growth };

/// Declared behaviour of the field outside the grid box. Bounded/Growth
/// wrap a named analytic function with |g| <= M (1 + |x|^gamma); only named
/// presets serialize. The canonical invariant asks gamma <= 1/2; larger
/// exponents below sigma are accepted with a warning so globally linear
/// comparison data stays representable.
struct ExteriorSpec {
  ExteriorKind kind = ExteriorKind::Zero;
  double constant = 0.0;
  std::string name = "zero";
  std::function<double(const Vec&, double)> fn;  // (x, t)
  double M = 0.0;
  double gamma = 0.0;

  double eval(const Vec& x, double t) const;

  static ExteriorSpec zero();
  static ExteriorSpec constant_value(double c);
  /// presets: "zero", "const(c)", "cosine", "linear(a)", "gauss(a)"
  static ExteriorSpec preset(const std::string& text);
  std::string to_string() const;
};

/// Parabolic cylinder B_r(x) x (t - tau, t].
struct Cylinder {
  Vec center = {0.0, 0.0};
  double t_top = 0.0;
  double radius = 1.0;
  double height = 1.0;

  bool contains(const Vec& x, double t, int n) const {
    return norm(sub(x, center), n) < radius && t > t_top - height && t <= t_top + 1e-12;
  }
};

/// Tail weight omega_sigma(y) = min(1, |y|^{-(n+sigma)}).
struct TailWeight {
  int n = 1;
  double sigma = 1.5;
  double operator()(const Vec& y) const {
    const double r = norm(y, n);
    return std::min(1.0, std::pow(r, -(n + sigma)));
  }
};

/// A grid function on a space-time cylinder plus declared exterior data.
/// Slices are stored at uniformly spaced times; sampling anywhere in
/// R^n x (t1,t2] combines multilinear interpolation inside the box with the
/// exterior spec outside.
struct SpaceTimeField {
  Grid grid;
  double sigma = 1.5;
  std::vector<double> times;                // increasing, uniform spacing
  std::vector<std::vector<double>> slices;  // [time][node]
  ExteriorSpec exterior;
  std::vector<std::string> warnings;

  static SpaceTimeField create(const Grid& g, double sigma, const ExteriorSpec& ext,
                               const std::vector<double>& times,
                               const std::function<double(const Vec&, double)>& init);

  std::size_t slice_count() const { return slices.size(); }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
  double t_begin() const { return times.front(); }
  double t_end() const { return times.back(); }

  double value(int i, std::size_t slice) const { return slices[slice][grid.flat(i)]; }
  double value(int i, int j, std::size_t slice) const { return slices[slice][grid.flat(i, j)]; }

  /// Interpolated (interior) or exterior sample at a fixed stored slice.
  double sample(const Vec& x, std::size_t slice) const;
  /// Linear-in-time sample; t clamped to the stored range within 1e-12.
  double sample(const Vec& x, double t) const;

  std::size_t slice_index(double t) const;  // nearest stored slice
  bool in_box(const Vec& x) const;

  /// Applies f to every stored value (used for normalization); exterior
  /// scaling is tracked only for constant factors via scale().
  SpaceTimeField scaled(double factor) const;
};

struct WeightedL1Result {
  double value = 0.0;       // interior + tail quadrature value
  double remainder = 0.0;   // analytic bound on the mass beyond R_tail (reported, not added)
};

/// \int |u(y,t)| omega_sigma(y) dy: grid midpoint sum over the box plus
/// geometric-shell tail out to R_tail = 1e3 for the exterior part.
WeightedL1Result weighted_l1(const SpaceTimeField& u, std::size_t slice);
WeightedL1Result weighted_l1_positive_part(const SpaceTimeField& u, std::size_t slice);
/// Same norm of u(.,s1) - u(.,s2) (exterior part included).
WeightedL1Result weighted_l1_difference(const SpaceTimeField& u, std::size_t s1, std::size_t s2);

/// [u]_{C^{0,1}((t1,t2] -> L1(omega))}: max over stored slice pairs of
/// ||u(t)-u(s)||_{L1(omega)} / |t-s|; all pairs when the slice count is
/// modest, consecutive plus dyadic spans beyond that.
double time_lipschitz_seminorm(const SpaceTimeField& u);

/// max over sampled space-time pairs in the region of
/// |u(x,t)-u(y,s)| / (|x-y| + |t-s|^{1/sigma})^alpha.
/// All pairs when the sample count is <= 4e4; above that, deterministic
/// strided anchors stratified by dyadic distance.
double parabolic_holder_seminorm(const SpaceTimeField& u, double alpha, const Cylinder& region);

double sup_norm(const SpaceTimeField& u, const Cylinder& region);
double inf_value(const SpaceTimeField& u, const Cylinder& region);
double oscillation(const SpaceTimeField& u, const Cylinder& region);

/// CSV with header x[,y],t,value plus a key=value sidecar (path + ".meta").
void save_field_csv(const SpaceTimeField& u, const std::string& path);
SpaceTimeField load_field_csv(const std::string& path);

}  // namespace fracbellman
