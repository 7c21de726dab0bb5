#include "fracbellman/nonlocal.hpp"

#include <algorithm>
#include <cmath>

namespace fracbellman {

namespace {

// 8-point Gauss-Legendre on [-1,1]
constexpr double kGx[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                           -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                           0.7966664774136267,  0.9602898564975363};
constexpr double kGw[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                           0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                           0.2223810344533745, 0.1012285362903763};

// (2-s)-free integral of |y|^{-n-s} over an axis box minus B_rho, by polar
// rays with exact radial antiderivatives; used for 2d cells near the origin.
double polar_clipped_mass(double sigma, double rho, const double lo[2], const double hi[2]) {
  const int na = 4096;
  double total = 0.0;
  for (int a = 0; a < na; ++a) {
    const double th = 2.0 * M_PI * (a + 0.5) / na;
    const double d[2] = {std::cos(th), std::sin(th)};
    double t_lo = 0.0, t_hi = std::numeric_limits<double>::infinity();
    bool hit = true;
    for (int k = 0; k < 2 && hit; ++k) {
      if (std::abs(d[k]) < 1e-15) {
        if (lo[k] > 0.0 || hi[k] < 0.0) hit = false;
      } else {
        double t0 = lo[k] / d[k], t1 = hi[k] / d[k];
        if (t0 > t1) std::swap(t0, t1);
        t_lo = std::max(t_lo, t0);
        t_hi = std::min(t_hi, t1);
      }
    }
    if (!hit) continue;
    t_lo = std::max(t_lo, rho);
    if (t_hi <= t_lo) continue;
    total += power_integral(-1.0 - sigma, t_lo, t_hi) * (2.0 * M_PI / na);
  }
  return total;
}

double gauss_cell_mass(double sigma, const double lo[2], const double hi[2]) {
  const double cx = 0.5 * (lo[0] + hi[0]), cy = 0.5 * (lo[1] + hi[1]);
  const double rx = 0.5 * (hi[0] - lo[0]), ry = 0.5 * (hi[1] - lo[1]);
  double s = 0.0;
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const double x = cx + rx * kGx[a], y = cy + ry * kGx[b];
      s += kGw[a] * kGw[b] * std::pow(x * x + y * y, -0.5 * (2.0 + sigma));
    }
  return s * rx * ry;
}

}  // namespace

double QuadratureRule::middle_outer_mass() const {
  double m = 0.0;
  for (const auto& c : middle) m += 2.0 * c.mass;  // half set represents +/- pair
  for (std::size_t s = 0; s < shell_radius.size(); ++s)
    m += shell_node_mass[s] * 2.0 * static_cast<double>(shell_dirs.size());
  return m;
}

double QuadratureRule::analytic_annulus_mass() const {
  return (2.0 - sigma) * unit_sphere_surface(n) * power_integral(-1.0 - sigma, rho, r_tail);
}

QuadratureRule QuadratureRule::build(int n, double sigma, double h, double r_mid, double r_tail,
                                     double rho) {
  if (n != 1 && n != 2) throw std::invalid_argument("QuadratureRule: n must be 1 or 2");
  if (!(sigma > 0.0 && sigma < 2.0)) throw std::invalid_argument("QuadratureRule: sigma in (0,2)");
  if (!(h > 0.0) || !(r_mid >= 2.0 * h)) throw std::invalid_argument("QuadratureRule: need r_mid >= 2h");
  QuadratureRule q;
  q.n = n;
  q.sigma = sigma;
  q.h = h;
  q.rho = (rho > 0.0) ? rho : h;
  if (q.rho > h + 1e-12) throw std::invalid_argument("QuadratureRule: rho must not exceed h");
  q.r_mid = r_mid;
  q.r_tail = r_tail;
  const double c = 2.0 - sigma;
  q.inner_weight = unit_sphere_surface(n) * std::pow(q.rho, 2.0 - sigma) / 2.0;

  double shell_start = r_mid;
  if (n == 1) {
    const int J = static_cast<int>(std::floor(r_mid / h + 1e-9));
    const double p = -1.0 - sigma;
    for (int j = 1; j <= J; ++j) {
      MiddleNode node;
      node.i = j;
      node.y = vec1(j * h);
      double m = 0.0;
      if (j == 1 && q.rho < h) m += power_integral(p, q.rho, h);  // constant wing on [rho, h]
      if (j > 1) {
        const double a = (j - 1) * h, b = j * h;
        m += (power_integral(p + 1.0, a, b) - a * power_integral(p, a, b)) / h;
      }
      if (j < J) {
        const double a = j * h, b = (j + 1) * h;
        m += (b * power_integral(p, a, b) - power_integral(p + 1.0, a, b)) / h;
      }
      node.mass = c * m;
      node.in_unit_ball = node.y[0] < 1.0 - 1e-12;
      q.middle.push_back(node);
    }
    // quadratic-deficit moments: hat interpolation of the symmetric second
    // difference underestimates curvature; the exact moment restores
    // quadratic exactness while keeping every weight sign fixed.
    if (q.rho < h) {
      const double I = power_integral(p, q.rho, h), J2 = power_integral(p + 2.0, q.rho, h);
      q.m2_interval.push_back(c * std::max(0.0, h * h * I - J2));
    }
    for (int j = 1; j < J; ++j) {
      const double a = j * h, b = (j + 1) * h;
      const double m2 = (a + b) * power_integral(p + 1.0, a, b) - power_integral(p + 2.0, a, b) -
                        a * b * power_integral(p, a, b);
      q.m2_interval.push_back(c * std::max(0.0, m2));
    }
    for (double v : q.m2_interval) q.m2_total += v;
    shell_start = J * h;
  } else {
    const int M = static_cast<int>(std::ceil(r_mid / h));
    for (int i = -M; i <= M; ++i) {
      for (int j = -M; j <= M; ++j) {
        if (!(i > 0 || (i == 0 && j > 0))) continue;  // half lattice
        const Vec y = {i * h, j * h};
        if (norm(y, 2) > r_mid + 1e-12) continue;
        const double lo[2] = {y[0] - 0.5 * h, y[1] - 0.5 * h};
        const double hi[2] = {y[0] + 0.5 * h, y[1] + 0.5 * h};
        const double dx = std::max({lo[0], -hi[0], 0.0});
        const double dy = std::max({lo[1], -hi[1], 0.0});
        const double dist = std::hypot(dx, dy);  // box distance to the origin
        const double m = dist < q.rho + 2.0 * h ? polar_clipped_mass(sigma, q.rho, lo, hi)
                                                : gauss_cell_mass(sigma, lo, hi);
        MiddleNode node;
        node.i = i;
        node.j = j;
        node.y = y;
        node.mass = c * m;
        node.in_unit_ball = norm(y, 2) < 1.0 - 1e-12;
        q.middle.push_back(node);
      }
    }
    shell_start = r_mid;
  }

  // outer shells: geometric radii, exact radial mass, uniform angular nodes
  const double ratio = 1.15;
  double r0 = shell_start;
  if (n == 1) {
    q.shell_dirs.push_back(vec1(1.0));
  } else {
    const int half_dirs = 32;
    for (int a = 0; a < half_dirs; ++a) {
      const double th = M_PI * (a + 0.5) / half_dirs;
      q.shell_dirs.push_back(vec2(std::cos(th), std::sin(th)));
    }
  }
  const std::size_t ndirs = q.shell_dirs.size() * 2;
  while (r0 < r_tail * (1.0 - 1e-12)) {
    const double r1 = std::min(r0 * ratio, r_tail);
    const double mass = c * unit_sphere_surface(n) * power_integral(-1.0 - sigma, r0, r1);
    q.shell_radius.push_back(std::sqrt(r0 * r1));
    q.shell_node_mass.push_back(mass / static_cast<double>(ndirs));
    r0 = r1;
  }
  return q;
}

BoundKernel bind_kernel(const QuadratureRule& rule, const KernelSpec& k) {
  if (k.n != rule.n) throw std::invalid_argument("bind_kernel: dimension mismatch");
  BoundKernel bk;
  bk.rule = &rule;
  bk.spec = k;
  const int n = rule.n;

  auto kv = [&](const Vec& y) {
    const double v = k.eval(y);
    if (!std::isfinite(v) || v < 0.0) throw invalid_kernel_error("kernel '" + k.name + "' invalid in quadrature");
    return v;
  };

  Vec bres = k.drift;
  bk.w_plus.reserve(rule.middle.size());
  bk.w_minus.reserve(rule.middle.size());
  for (const auto& nd : rule.middle) {
    const double kp = kv(nd.y);
    const Vec ym = {-nd.y[0], -nd.y[1]};
    const double km = kv(ym);
    bk.w_plus.push_back(nd.mass * kp);
    bk.w_minus.push_back(nd.mass * km);
    if (nd.in_unit_ball) {
      bres = sub(bres, scale(nd.y, nd.mass * (kp - km)));
    }
  }
  for (std::size_t s = 0; s < rule.shell_radius.size(); ++s) {
    for (const auto& d : rule.shell_dirs) {
      const Vec y = scale(d, rule.shell_radius[s]);
      const Vec ym = {-y[0], -y[1]};
      const double kp = kv(y), km = kv(ym);
      bk.ws_plus.push_back(rule.shell_node_mass[s] * kp);
      bk.ws_minus.push_back(rule.shell_node_mass[s] * km);
      if (rule.shell_radius[s] < 1.0 - 1e-12) {
        bres = sub(bres, scale(y, rule.shell_node_mass[s] * (kp - km)));
      }
    }
  }
  bk.drift_total = bres;

  // inner-shell kernel average on the 2n axis points at radius rho/2
  double kin = 0.0;
  for (int i = 0; i < n; ++i) {
    Vec e = {0.0, 0.0};
    e[i] = 0.5 * rule.rho;
    kin += kv(e) + kv(scale(e, -1.0));
  }
  kin /= 2.0 * n;
  double s_coef = kin * rule.inner_weight;
  if (rule.n == 1) {
    // per-interval kernel samples for the quadratic-deficit moments
    const double h = rule.h;
    std::size_t idx = 0;
    if (rule.rho < h) {
      const double ym = 0.5 * (rule.rho + h);
      s_coef -= rule.m2_interval[idx++] * 0.5 * (kv(vec1(ym)) + kv(vec1(-ym)));
    }
    for (std::size_t j = 1; idx < rule.m2_interval.size(); ++j, ++idx) {
      const double ym = (static_cast<double>(j) + 0.5) * h;
      s_coef -= rule.m2_interval[idx] * 0.5 * (kv(vec1(ym)) + kv(vec1(-ym)));
    }
  }
  if (!(s_coef > 0.0)) {
    throw numeric_error("bind_kernel: nonpositive second-difference coefficient (sigma too small "
                        "for the quadratic-deficit correction)");
  }
  bk.s_coef = s_coef;

  double row = 0.0;
  for (std::size_t i = 0; i < bk.w_plus.size(); ++i) row += bk.w_plus[i] + bk.w_minus[i];
  for (std::size_t i = 0; i < bk.ws_plus.size(); ++i) row += bk.ws_plus[i] + bk.ws_minus[i];
  row += 2.0 * s_coef / (rule.h * rule.h);
  for (int i = 0; i < n; ++i) row += std::abs(bk.drift_total[i]) / rule.h;
  bk.row_sum = row;
  return bk;
}

double delta_u(const SpaceTimeField& u, const Vec& x, std::size_t slice, const Vec& y) {
  const int n = u.grid.n;
  const double h = u.grid.h;
  const double uc = u.sample(x, slice);
  double v = u.sample(add(x, y), slice) - uc;
  if (norm(y, n) < 1.0 - 1e-12) {
    for (int i = 0; i < n; ++i) {
      Vec e = {0.0, 0.0};
      e[i] = h;
      const double di = (u.sample(add(x, e), slice) - u.sample(sub(x, e), slice)) / (2.0 * h);
      v -= di * y[i];
    }
  }
  return v;
}

namespace {

void require_interior(const SpaceTimeField& u, const Vec& x) {
  const double margin = u.grid.R - 2.0 * u.grid.h + 1e-12;
  if (std::abs(x[0]) > margin || (u.grid.n == 2 && std::abs(x[1]) > margin)) {
    throw std::invalid_argument("operator evaluation requires x at distance >= 2h from the grid boundary");
  }
}

double axis_second_difference_avg(const SpaceTimeField& u, const Vec& x, std::size_t slice,
                                  double uc) {
  const int n = u.grid.n;
  const double h = u.grid.h;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    Vec e = {0.0, 0.0};
    e[i] = h;
    s += u.sample(add(x, e), slice) - 2.0 * uc + u.sample(sub(x, e), slice);
  }
  return s / (n * h * h);
}

double tail_bound(double rt, double lambda_sup, const SpaceTimeField& u, double uc) {
  const double s = u.sigma;
  const int n = u.grid.n;
  const auto& e = u.exterior;
  double M = 0.0, gamma = 0.0;
  if (e.kind == ExteriorKind::Constant) M = std::abs(e.constant);
  if (e.kind == ExteriorKind::Bounded) M = e.M;
  if (e.kind == ExteriorKind::Growth) {
    M = e.M;
    gamma = e.gamma;
  }
  if (gamma >= s) throw unsupported_exterior_error("operator tail not integrable: gamma >= sigma");
  const double surf = unit_sphere_surface(n);
  const double grow = (gamma > 0.0) ? M * std::pow(2.0, gamma) * std::pow(rt, gamma - s) / (s - gamma)
                                    : 0.0;
  const double flat = (M + std::abs(uc)) * std::pow(rt, -s) / s;
  return lambda_sup * (2.0 - s) * surf * (grow + flat);
}

}  // namespace

OperatorEvaluation evaluate_linear(const BoundKernel& bk, const SpaceTimeField& u, const Vec& x,
                                   std::size_t slice) {
  const QuadratureRule& q = *bk.rule;
  require_interior(u, x);
  OperatorEvaluation ev;
  const double uc = u.sample(x, slice);

  double mid = 0.0;
  for (std::size_t i = 0; i < q.middle.size(); ++i) {
    const Vec& y = q.middle[i].y;
    const double up = u.sample(add(x, y), slice);
    const double um = u.sample(sub(x, y), slice);
    mid += bk.w_plus[i] * (up - uc) + bk.w_minus[i] * (um - uc);
  }
  ev.middle = mid;

  ev.inner = bk.s_coef * axis_second_difference_avg(u, x, slice, uc);

  double outer = 0.0;
  std::size_t idx = 0;
  for (std::size_t s = 0; s < q.shell_radius.size(); ++s) {
    for (const auto& d : q.shell_dirs) {
      const Vec y = scale(d, q.shell_radius[s]);
      const double up = u.sample(add(x, y), slice);
      const double um = u.sample(sub(x, y), slice);
      outer += bk.ws_plus[idx] * (up - uc) + bk.ws_minus[idx] * (um - uc);
      ++idx;
    }
  }
  ev.outer = outer;

  double drift = 0.0;
  const double h = q.h;
  for (int i = 0; i < q.n; ++i) {
    const double b = bk.drift_total[i];
    if (b == 0.0) continue;
    Vec e = {0.0, 0.0};
    e[i] = h;
    if (b > 0.0) {
      drift += b * (u.sample(add(x, e), slice) - uc) / h;
    } else {
      drift += b * (uc - u.sample(sub(x, e), slice)) / h;
    }
  }
  ev.drift = drift;

  ev.value = ev.inner + ev.middle + ev.outer + ev.drift;
  ev.tail_error_bound = tail_bound(q.r_tail, bk.spec.Lambda, u, uc);
  if (!std::isfinite(ev.value)) throw numeric_error("evaluate_linear: non-finite value");
  return ev;
}

OperatorEvaluation evaluate_linear(const QuadratureRule& rule, const KernelSpec& k,
                                   const SpaceTimeField& u, const Vec& x, std::size_t slice) {
  return evaluate_linear(bind_kernel(rule, k), u, x, slice);
}

OperatorEvaluation pucci_extremal(ExtremalSign sign, double lambda, double Lambda, double beta,
                                  const QuadratureRule& q, const SpaceTimeField& u, const Vec& x,
                                  std::size_t slice) {
  require_interior(u, x);
  if (!(lambda > 0.0 && Lambda >= lambda && beta >= 0.0)) {
    throw std::invalid_argument("pucci_extremal: need 0 < lambda <= Lambda, beta >= 0");
  }
  const bool plus = sign == ExtremalSign::Plus;
  OperatorEvaluation ev;
  const double uc = u.sample(x, slice);

  auto extremal = [&](double g) {
    const double gp = std::max(g, 0.0), gm = std::max(-g, 0.0);
    return plus ? (Lambda * gp - lambda * gm) : (lambda * gp - Lambda * gm);
  };

  double mid = 0.0;
  for (const auto& nd : q.middle) {
    const double up = u.sample(add(x, nd.y), slice);
    const double um = u.sample(sub(x, nd.y), slice);
    mid += nd.mass * extremal((up - uc) + (um - uc));
  }
  ev.middle = mid;

  double outer = 0.0;
  for (std::size_t s = 0; s < q.shell_radius.size(); ++s) {
    for (const auto& d : q.shell_dirs) {
      const Vec y = scale(d, q.shell_radius[s]);
      const double up = u.sample(add(x, y), slice);
      const double um = u.sample(sub(x, y), slice);
      outer += q.shell_node_mass[s] * extremal((up - uc) + (um - uc));
    }
  }
  ev.outer = outer;

  // inner compensation: the kernel averages on the inner shell and on the
  // deficit intervals are chosen extremally, independently of each other
  const double S = axis_second_difference_avg(u, x, slice, uc);
  const double Sp = std::max(S, 0.0), Sm = std::max(-S, 0.0);
  const double up_coef = Lambda * q.inner_weight - lambda * q.m2_total;
  const double lo_coef = lambda * q.inner_weight - Lambda * q.m2_total;
  if (!(lo_coef >= 0.0)) {
    throw numeric_error("pucci_extremal: Lambda/lambda too large for the quadratic-deficit moment");
  }
  ev.inner = plus ? (up_coef * Sp - lo_coef * Sm) : (lo_coef * Sp - up_coef * Sm);

  // drift: exact supremum/infimum of the upwind form over |b| <= beta
  double c2 = 0.0;
  const double h = q.h;
  for (int i = 0; i < q.n; ++i) {
    Vec e = {0.0, 0.0};
    e[i] = h;
    const double dp = (u.sample(add(x, e), slice) - uc) / h;
    const double dm = (uc - u.sample(sub(x, e), slice)) / h;
    const double ci = plus ? std::max(0.0, std::max(dp, -dm)) : std::max(0.0, std::max(-dp, dm));
    c2 += ci * ci;
  }
  ev.drift = (plus ? beta : -beta) * std::sqrt(c2);

  ev.value = ev.inner + ev.middle + ev.outer + ev.drift;
  ev.tail_error_bound = tail_bound(q.r_tail, Lambda, u, uc);
  if (!std::isfinite(ev.value)) throw numeric_error("pucci_extremal: non-finite value");
  return ev;
}

OperatorEvaluation bellman(const std::vector<BoundKernel>& members, const SpaceTimeField& u,
                           const Vec& x, std::size_t slice) {
  if (members.empty()) throw std::domain_error("bellman: empty family");
  OperatorEvaluation best;
  for (std::size_t m = 0; m < members.size(); ++m) {
    OperatorEvaluation ev = evaluate_linear(members[m], u, x, slice);
    if (m == 0 || ev.value < best.value) {
      best = ev;
      best.argmin = static_cast<int>(m);
    }
  }
  return best;
}

OperatorEvaluation bellman(const QuadratureRule& rule, const OperatorFamily& family,
                           const SpaceTimeField& u, const Vec& x, std::size_t slice) {
  if (family.kind == OperatorFamily::Kind::PucciClass) {
    return pucci_extremal(ExtremalSign::Minus, family.lambda, family.Lambda, family.beta, rule, u,
                          x, slice);
  }
  std::vector<BoundKernel> ms;
  ms.reserve(family.members.size());
  for (const auto& k : family.members) ms.push_back(bind_kernel(rule, k));
  return bellman(ms, u, x, slice);
}

namespace {

void require_compact(const SpaceTimeField& f, const char* which) {
  const Grid& g = f.grid;
  double scale = 0.0;
  for (const auto& s : f.slices)
    for (double v : s) scale = std::max(scale, std::abs(v));
  const double tol = 1e-13 * std::max(scale, 1.0);
  auto check = [&](int i, int j) {
    for (std::size_t s = 0; s < f.slice_count(); ++s) {
      const double v = g.n == 1 ? f.value(i, s) : f.value(i, j, s);
      if (std::abs(v) > tol) {
        throw std::domain_error(std::string(which) +
                                " must be compactly supported away from the grid boundary");
      }
    }
  };
  for (int ring = 0; ring < 3; ++ring) {
    const int edge = g.half - ring;
    if (g.n == 1) {
      check(edge, 0);
      check(-edge, 0);
    } else {
      for (int i = -g.half; i <= g.half; ++i) {
        check(i, edge);
        check(i, -edge);
        check(edge, i);
        check(-edge, i);
      }
    }
  }
  if (f.exterior.kind != ExteriorKind::Zero) {
    throw std::domain_error(std::string(which) + " must carry zero exterior data");
  }
}

}  // namespace

double check_integration_by_parts(const QuadratureRule& rule, const KernelSpec& k,
                                  const SpaceTimeField& v, const SpaceTimeField& w,
                                  std::size_t slice) {
  require_compact(v, "v");
  require_compact(w, "w");
  const BoundKernel bkL = bind_kernel(rule, k);
  const BoundKernel bkA = bind_kernel(rule, adjoint_pair(k));
  const Grid& g = v.grid;
  const double cell = std::pow(g.h, g.n);
  double a = 0.0, b = 0.0;
  auto visit = [&](int i, int j) {
    const Vec x = g.coord(i, j);
    const double vv = g.n == 1 ? v.value(i, slice) : v.value(i, j, slice);
    const double wv = g.n == 1 ? w.value(i, slice) : w.value(i, j, slice);
    if (vv != 0.0) a += vv * evaluate_linear(bkL, w, x, slice).value;
    if (wv != 0.0) b += wv * evaluate_linear(bkA, v, x, slice).value;
  };
  const int lim = g.half - 2;
  if (g.n == 1) {
    for (int i = -lim; i <= lim; ++i) visit(i, 0);
  } else {
    for (int i = -lim; i <= lim; ++i)
      for (int j = -lim; j <= lim; ++j) visit(i, j);
  }
  return std::abs(a - b) * cell;
}

PropertyCheckReport check_concavity_translation_homogeneity(
    const QuadratureRule& rule, double lambda, double Lambda, double beta,
    const SpaceTimeField& v, int eta_halfwidth, double alpha, const Vec& b,
    const std::vector<Vec>& sample_points, std::size_t slice, double slack_scale) {
  if (alpha < 0.0) throw std::invalid_argument("homogeneity check needs alpha >= 0");
  require_compact(v, "v");
  const Grid& g = v.grid;
  const int m = eta_halfwidth;
  if (m < 1 || m > g.half / 4) throw std::invalid_argument("eta halfwidth out of range");

  // discrete tent mollifier, nonnegative, sums to 1
  std::vector<double> eta1(2 * m + 1);
  double tot = 0.0;
  for (int o = -m; o <= m; ++o) {
    eta1[o + m] = (m + 1.0 - std::abs(o));
    tot += eta1[o + m];
  }
  for (auto& e : eta1) e /= tot;

  auto mollify = [&](const std::function<double(const Vec&)>& f, const Vec& x) {
    double s = 0.0;
    if (g.n == 1) {
      for (int o = -m; o <= m; ++o) s += eta1[o + m] * f(vec1(x[0] - o * g.h));
    } else {
      for (int o = -m; o <= m; ++o)
        for (int p = -m; p <= m; ++p)
          s += eta1[o + m] * eta1[p + m] * f(vec2(x[0] - o * g.h, x[1] - p * g.h));
    }
    return s;
  };

  // eta * v as a field (zero exterior preserved by compact support)
  SpaceTimeField conv = SpaceTimeField::create(
      g, v.sigma, ExteriorSpec::zero(), {v.times[slice]},
      [&](const Vec& x, double) { return mollify([&](const Vec& z) { return v.sample(z, slice); }, x); });

  SpaceTimeField scaled = v.scaled(alpha);

  // b . D v with centered differences
  SpaceTimeField bdv = SpaceTimeField::create(
      g, v.sigma, ExteriorSpec::zero(), {v.times[slice]}, [&](const Vec& x, double) {
        if (std::abs(x[0]) > g.R - g.h + 1e-12 || (g.n == 2 && std::abs(x[1]) > g.R - g.h + 1e-12))
          return 0.0;
        double s = 0.0;
        for (int i = 0; i < g.n; ++i) {
          Vec e = {0.0, 0.0};
          e[i] = g.h;
          s += b[i] * (v.sample(add(x, e), slice) - v.sample(sub(x, e), slice)) / (2.0 * g.h);
        }
        return s;
      });

  auto mplus = [&](const SpaceTimeField& f, const Vec& x) {
    return pucci_extremal(ExtremalSign::Plus, lambda, Lambda, beta, rule, f, x, 0).value;
  };
  auto mminus = [&](const SpaceTimeField& f, const Vec& x) {
    return pucci_extremal(ExtremalSign::Minus, lambda, Lambda, beta, rule, f, x, 0).value;
  };
  auto mplus_v = [&](const Vec& x) {
    return pucci_extremal(ExtremalSign::Plus, lambda, Lambda, beta, rule, v, x, slice).value;
  };
  auto mminus_v = [&](const Vec& x) {
    return pucci_extremal(ExtremalSign::Minus, lambda, Lambda, beta, rule, v, x, slice).value;
  };

  PropertyCheckReport rep;
  double homo_err = 0.0, conc_margin = std::numeric_limits<double>::infinity(),
         trans_margin = std::numeric_limits<double>::infinity();
  for (const Vec& x : sample_points) {
    // homogeneity
    const double mp = mplus_v(x), mm = mminus_v(x);
    homo_err = std::max(homo_err, std::abs(mplus(scaled, x) - alpha * mp));
    homo_err = std::max(homo_err, std::abs(mminus(scaled, x) - alpha * mm));
    // concavity sandwich
    const double lower = mollify(mminus_v, x);
    const double upper = mollify(mplus_v, x);
    for (double mid : {mplus(conv, x), mminus(conv, x)}) {
      conc_margin = std::min(conc_margin, mid - lower);
      conc_margin = std::min(conc_margin, upper - mid);
    }
    // translation sandwich with centered differences of the extremal fields
    const double lo_t = mminus(bdv, x);
    const double hi_t = mplus(bdv, x);
    for (auto& mfield : {mplus_v, mminus_v}) {
      double bd = 0.0;
      for (int i = 0; i < g.n; ++i) {
        Vec e = {0.0, 0.0};
        e[i] = g.h;
        bd += b[i] * (mfield(add(x, e)) - mfield(sub(x, e))) / (2.0 * g.h);
      }
      trans_margin = std::min(trans_margin, bd - lo_t);
      trans_margin = std::min(trans_margin, hi_t - bd);
    }
  }
  rep.homogeneity_error = homo_err;
  rep.concavity_margin = conc_margin;
  rep.translation_margin = trans_margin;
  rep.pass = homo_err <= slack_scale && conc_margin >= -slack_scale && trans_margin >= -slack_scale;
  return rep;
}

}  // namespace fracbellman
