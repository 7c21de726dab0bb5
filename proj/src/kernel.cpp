#include "fracbellman/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fracbellman {

namespace {

std::string point_str(const Vec& y, int n) {
  std::ostringstream os;
  os << "(" << y[0];
  if (n == 2) os << ", " << y[1];
  os << ")";
  return os.str();
}

double checked_eval(const KernelSpec& k, const Vec& y) {
  const double v = k.eval(y);
  if (!std::isfinite(v) || v < 0.0) {
    throw invalid_kernel_error("kernel '" + k.name + "' returned " + std::to_string(v) +
                               " at y = " + point_str(y, k.n));
  }
  return v;
}

}  // namespace

OperatorFamily OperatorFamily::finite(std::vector<KernelSpec> ms) {
  if (ms.empty()) throw std::invalid_argument("OperatorFamily: empty member list");
  OperatorFamily f;
  f.kind = Kind::FiniteFamily;
  f.n = ms.front().n;
  f.sigma = ms.front().sigma;
  f.lambda = ms.front().lambda;
  f.Lambda = ms.front().Lambda;
  f.beta = ms.front().beta;
  for (const auto& m : ms) {
    if (m.n != f.n || m.sigma != f.sigma || m.lambda != f.lambda || m.Lambda != f.Lambda ||
        m.beta != f.beta) {
      throw std::invalid_argument("OperatorFamily: members must share n, sigma, lambda, Lambda, beta");
    }
  }
  f.members = std::move(ms);
  return f;
}

OperatorFamily OperatorFamily::pucci(int n, double sigma, double lambda, double Lambda, double beta) {
  OperatorFamily f;
  f.kind = Kind::PucciClass;
  f.n = n;
  f.sigma = sigma;
  f.lambda = lambda;
  f.Lambda = Lambda;
  f.beta = beta;
  return f;
}

std::vector<Vec> validation_samples(int n) {
  std::vector<Vec> pts;
  const int nr = 48;
  const double r0 = 1e-3, r1 = 1e3;
  for (int i = 0; i < nr; ++i) {
    const double r = r0 * std::pow(r1 / r0, (i + 0.5) / nr);
    if (n == 1) {
      pts.push_back(vec1(r));
      pts.push_back(vec1(-r));
    } else {
      const int na = 32;
      for (int a = 0; a < na; ++a) {
        const double th = 2.0 * M_PI * (a + 0.5) / na;
        pts.push_back(vec2(r * std::cos(th), r * std::sin(th)));
      }
      // near-axis probes: directions a central difference of width 1e-3 r
      // straddles the coordinate planes, so kernels with a jump there fail
      // the smoothness levels as they should.
      for (double s : {1.0, -1.0}) {
        pts.push_back(vec2(r * 5e-4, s * r));
        pts.push_back(vec2(s * r, r * 5e-4));
      }
    }
  }
  return pts;
}

ValidationReport check_bounds(const KernelSpec& k, int sample_count) {
  if (sample_count < 1) throw std::invalid_argument("check_bounds: sample_count >= 1 required");
  ValidationReport rep;
  if (k.lambda <= 0.0 || k.Lambda < k.lambda) {
    rep.pass = false;
    rep.detail = "invalid ellipticity bounds (need 0 < lambda <= Lambda)";
    return rep;
  }
  double worst = std::numeric_limits<double>::infinity();
  Vec worst_pt = {0, 0};
  const auto base = validation_samples(k.n);
  for (int rep_i = 0; rep_i < sample_count; ++rep_i) {
    for (const auto& y0 : base) {
      // extra passes shift radii to refine the radial sampling
      Vec y = y0;
      if (rep_i > 0) {
        const double f = std::pow(1e6, static_cast<double>(rep_i) / (48.0 * sample_count));
        y = scale(y0, f);
      }
      const double v = checked_eval(k, y);
      const double margin = std::min(v - k.lambda, k.Lambda - v);
      if (margin < worst) {
        worst = margin;
        worst_pt = y;
      }
    }
  }
  const double ref = std::max(k.lambda, 1.0);
  rep.worst_margin = worst / ref;
  rep.worst_point = worst_pt;
  rep.pass = rep.worst_margin >= -1e-12;
  if (k.sigma < 1.0 || k.sigma >= 2.0) {
    rep.warnings.push_back("sigma outside the canonical range [1,2)");
  }
  return rep;
}

std::vector<double> default_r_grid() {
  std::vector<double> rg;
  const double a = 1e-3, b = 1.0 - 1e-3;
  for (int i = 0; i < 32; ++i) rg.push_back(a * std::pow(b / a, i / 31.0));
  return rg;
}

double drift_compensation(const KernelSpec& k, const std::vector<double>& r_grid) {
  if (r_grid.empty()) throw std::invalid_argument("drift_compensation: empty r grid");
  for (double r : r_grid) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("drift_compensation: radii must lie in (0,1)");
  }
  double rmin = *std::min_element(r_grid.begin(), r_grid.end());

  // Composite log-radial midpoint rule on [rmin, 1), refined enough that the
  // grid max is quadrature-converged well beyond the reported digits.
  const int nodes_per_decade = 2048;
  const double span = std::log(1.0 / rmin);
  const int m = std::max(64, static_cast<int>(span / std::log(10.0) * nodes_per_decade));
  const double c = 2.0 - k.sigma;

  // Accumulate the vector integral over B_1 \ B_r as a function of r by
  // sweeping shells from the outside in; prefix[i] = integral over (r_i, 1).
  std::vector<double> mid(m), w(m);
  std::vector<Vec> acc(m + 1, Vec{0.0, 0.0});
  for (int i = 0; i < m; ++i) {
    const double s0 = span * i / m, s1 = span * (i + 1) / m;
    mid[i] = std::exp(-0.5 * (s0 + s1));  // radius at log midpoint, in (rmin,1)
    w[i] = mid[i] * (s1 - s0);            // dy = r d(log r) per shell
  }
  // shells indexed from outer (r near 1) to inner;
  // contribution of shell r with width dr:  dr * r^{-sigma} * angular sum of dir*K
  Vec run = {0.0, 0.0};
  acc[0] = run;
  for (int i = 0; i < m; ++i) {
    const double r = mid[i];
    const double dr = w[i];
    Vec ang = {0.0, 0.0};
    if (k.n == 1) {
      ang[0] = checked_eval(k, vec1(r)) - checked_eval(k, vec1(-r));
    } else {
      const int na = 256;
      for (int a = 0; a < na; ++a) {
        const double th = 2.0 * M_PI * (a + 0.5) / na;
        const Vec dir = {std::cos(th), std::sin(th)};
        const double kv = checked_eval(k, scale(dir, r));
        ang[0] += dir[0] * kv;
        ang[1] += dir[1] * kv;
      }
      ang = scale(ang, 2.0 * M_PI / na);
    }
    const Vec contrib = scale(ang, dr * std::pow(r, -k.sigma));
    if (!std::isfinite(contrib[0]) || !std::isfinite(contrib[1])) {
      throw numeric_error("drift_compensation: non-finite partial sum at shell r = " + std::to_string(r));
    }
    run = add(run, contrib);
    acc[i + 1] = run;
  }

  double worst = 0.0;
  for (double r : r_grid) {
    // integral over (r, 1) ~ prefix at the first shell with mid < r
    const double s = std::log(1.0 / r);
    int idx = static_cast<int>(std::floor(s / span * m));
    idx = std::clamp(idx, 0, m);
    Vec total = add(k.drift, scale(acc[idx], c));
    worst = std::max(worst, norm(total, k.n));
  }
  return worst;
}

double drift_compensation(const KernelSpec& k) { return drift_compensation(k, default_r_grid()); }

ValidationReport check_smoothness(const KernelSpec& k, KernelClass level) {
  ValidationReport rep;
  double worst = std::numeric_limits<double>::infinity();
  Vec worst_pt = {0, 0};
  const double slack = 1.05;
  for (const auto& y : validation_samples(k.n)) {
    const double r = norm(y, k.n);
    const double step = 1e-3 * r;
    double grad_scaled = 0.0;   // |DK(y)| |y| estimate
    double hess_scaled = 0.0;   // |D^2K(y)| |y|^2 estimate
    for (int i = 0; i < k.n; ++i) {
      Vec e = {0.0, 0.0};
      e[i] = step;
      const double kp = checked_eval(k, add(y, e));
      const double km = checked_eval(k, sub(y, e));
      const double kc = checked_eval(k, y);
      const double d1 = (kp - km) / (2.0 * step);
      const double d2 = (kp - 2.0 * kc + km) / (step * step);
      grad_scaled += d1 * d1;
      hess_scaled = std::max(hess_scaled, std::abs(d2) * r * r);
    }
    grad_scaled = std::sqrt(grad_scaled) * r;
    const double bound = k.Lambda * slack;
    const double margin = (level == KernelClass::L1) ? (bound - grad_scaled)
                                                     : std::min(bound - grad_scaled, bound - hess_scaled);
    if (margin < worst) {
      worst = margin;
      worst_pt = y;
    }
  }
  rep.worst_margin = worst / std::max(k.Lambda, 1.0);
  rep.worst_point = worst_pt;
  rep.pass = worst >= 0.0;
  return rep;
}

ValidationReport check_membership(const KernelSpec& k) {
  ValidationReport rep = check_bounds(k);
  if (!rep.pass) {
    rep.detail = "bounds check failed";
    return rep;
  }
  const double comp = drift_compensation(k);
  if (comp > k.beta + 1e-12) {
    rep.pass = false;
    rep.detail = "drift compensation " + std::to_string(comp) + " exceeds beta " + std::to_string(k.beta);
    return rep;
  }
  if (k.class_tag == KernelClass::L1 || k.class_tag == KernelClass::L2) {
    ValidationReport s1 = check_smoothness(k, KernelClass::L1);
    if (!s1.pass) {
      s1.detail = "L1 smoothness failed";
      return s1;
    }
  }
  if (k.class_tag == KernelClass::L2) {
    ValidationReport s2 = check_smoothness(k, KernelClass::L2);
    if (!s2.pass) {
      s2.detail = "L2 smoothness failed";
      return s2;
    }
  }
  return rep;
}

KernelSpec adjoint_pair(const KernelSpec& k) {
  KernelSpec out = k;
  auto base = k.kernel_fn;
  out.kernel_fn = [base](const Vec& y) { return base(Vec{-y[0], -y[1]}); };
  out.drift = {-k.drift[0], -k.drift[1]};
  out.name = k.name + "-adjoint";
  return out;
}

double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (t * (6.0 * t - 15.0) + 10.0);
}

KernelSpec kernel_preset(const std::string& name, int n, double sigma) {
  KernelSpec k;
  k.n = n;
  k.sigma = sigma;
  k.name = name;

  auto parse_arg = [&](const std::string& prefix) -> std::optional<double> {
    if (name.rfind(prefix + "(", 0) != 0 || name.back() != ')') return std::nullopt;
    const std::string inner = name.substr(prefix.size() + 1, name.size() - prefix.size() - 2);
    try {
      std::size_t used = 0;
      const double v = std::stod(inner, &used);
      if (used != inner.size()) return std::nullopt;
      return v;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };

  if (name == "const") {
    k.kernel_fn = [](const Vec&) { return 1.0; };
    k.lambda = k.Lambda = 1.0;
    k.class_tag = KernelClass::L2;
    return k;
  }
  if (auto a = parse_arg("odd-bump")) {
    const double av = *a;
    k.kernel_fn = [av](const Vec& y) { return 1.0 + av * (y[0] > 0.0 ? 1.0 : (y[0] < 0.0 ? -1.0 : 0.0)); };
    k.lambda = 1.0 - std::abs(av);
    k.Lambda = 1.0 + std::abs(av);
    k.class_tag = KernelClass::L0;
    return k;
  }
  if (auto a = parse_arg("smooth-odd")) {
    const double av = *a;
    k.kernel_fn = [av, n](const Vec& y) {
      const double r = norm(y, n);
      const double ramp = smoothstep5((r - 0.25) / 0.25);
      return 1.0 + av * (y[0] / r) * ramp;
    };
    k.lambda = 1.0 - std::abs(av);
    k.Lambda = 1.0 + std::abs(av);
    k.class_tag = KernelClass::L2;
    return k;
  }
  if (auto a = parse_arg("anisotropic")) {
    const double av = *a;
    k.kernel_fn = [av, n](const Vec& y) {
      const double r = norm(y, n);
      const double c = y[0] / r;
      return 1.0 + av * c * c;
    };
    k.lambda = std::min(1.0, 1.0 + av);
    k.Lambda = std::max(1.0, 1.0 + av);
    k.class_tag = KernelClass::L2;
    return k;
  }
  if (auto a = parse_arg("wavy")) {
    const double av = *a;
    k.kernel_fn = [av, n](const Vec& y) { return 1.0 + av * std::sin(std::log(norm(y, n))); };
    k.lambda = 1.0 - std::abs(av);
    k.Lambda = 1.0 + std::abs(av);
    k.class_tag = KernelClass::L2;
    return k;
  }
  throw config_error("unknown kernel preset '" + name + "'");
}

}  // namespace fracbellman
