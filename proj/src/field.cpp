#include "fracbellman/field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace fracbellman {

namespace {
constexpr double kTailRadius = 1e3;
constexpr double kShellRatio = 1.05;
}  // namespace

Grid::Grid(int n_, double R_, double h_) : n(n_), R(R_), h(h_) {
  if (n != 1 && n != 2) throw std::invalid_argument("Grid: n must be 1 or 2");
  if (!(h > 0.0) || !(R > 0.0)) throw std::invalid_argument("Grid: need R > 0, h > 0");
  const double ratio = R / h;
  half = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - half) > 1e-9 || half < 2) {
    throw std::invalid_argument("Grid: R must be an integer multiple (>= 2) of h");
  }
  per_axis = 2 * half + 1;
}

double ExteriorSpec::eval(const Vec& x, double t) const {
  switch (kind) {
    case ExteriorKind::Zero:
      return 0.0;
    case ExteriorKind::Constant:
      return constant;
    default:
      return fn(x, t);
  }
}

ExteriorSpec ExteriorSpec::zero() { return ExteriorSpec{}; }

ExteriorSpec ExteriorSpec::constant_value(double c) {
  ExteriorSpec e;
  e.kind = ExteriorKind::Constant;
  e.constant = c;
  e.name = "const(" + std::to_string(c) + ")";
  e.M = std::abs(c);
  return e;
}

ExteriorSpec ExteriorSpec::preset(const std::string& text) {
  auto parse_arg = [&](const std::string& prefix) -> double {
    const std::string inner = text.substr(prefix.size() + 1, text.size() - prefix.size() - 2);
    std::size_t used = 0;
    const double v = std::stod(inner, &used);
    if (used != inner.size()) throw config_error("bad exterior argument in '" + text + "'");
    return v;
  };
  if (text == "zero") return zero();
  if (text.rfind("const(", 0) == 0 && text.back() == ')') return constant_value(parse_arg("const"));
  ExteriorSpec e;
  e.name = text;
  if (text == "cosine") {
    e.kind = ExteriorKind::Bounded;
    e.fn = [](const Vec& x, double) { return std::cos(x[0]); };
    e.M = 1.0;
    e.gamma = 0.0;
    return e;
  }
  if (text.rfind("linear(", 0) == 0 && text.back() == ')') {
    const double a = parse_arg("linear");
    e.kind = ExteriorKind::Growth;
    e.fn = [a](const Vec& x, double) { return a * x[0]; };
    e.M = std::abs(a);
    e.gamma = 1.0;
    return e;
  }
  if (text.rfind("gauss(", 0) == 0 && text.back() == ')') {
    const double a = parse_arg("gauss");
    e.kind = ExteriorKind::Bounded;
    e.fn = [a](const Vec& x, double) { return std::exp(-a * (x[0] * x[0] + x[1] * x[1])); };
    e.M = 1.0;
    e.gamma = 0.0;
    return e;
  }
  throw config_error("unknown exterior preset '" + text + "'");
}

std::string ExteriorSpec::to_string() const { return name; }

SpaceTimeField SpaceTimeField::create(const Grid& g, double sigma, const ExteriorSpec& ext,
                                      const std::vector<double>& times,
                                      const std::function<double(const Vec&, double)>& init) {
  if (times.empty()) throw std::invalid_argument("SpaceTimeField: need at least one time");
  SpaceTimeField f;
  f.grid = g;
  f.sigma = sigma;
  f.times = times;
  f.exterior = ext;
  if (ext.kind == ExteriorKind::Growth) {
    if (ext.gamma >= sigma) {
      throw unsupported_exterior_error("exterior growth exponent " + std::to_string(ext.gamma) +
                                       " is not integrable against omega_sigma for sigma = " +
                                       std::to_string(sigma));
    }
    if (ext.gamma > 0.5) {
      f.warnings.push_back("exterior growth exponent above 1/2: outside the canonical class");
    }
  }
  f.slices.reserve(times.size());
  for (double t : times) {
    std::vector<double> s(g.node_count());
    if (g.n == 1) {
      for (int i = -g.half; i <= g.half; ++i) s[g.flat(i)] = init(g.coord(i), t);
    } else {
      for (int i = -g.half; i <= g.half; ++i)
        for (int j = -g.half; j <= g.half; ++j) s[g.flat(i, j)] = init(g.coord(i, j), t);
    }
    for (double v : s) {
      if (!std::isfinite(v)) throw numeric_error("SpaceTimeField: non-finite initial value");
    }
    f.slices.push_back(std::move(s));
  }
  return f;
}

bool SpaceTimeField::in_box(const Vec& x) const {
  if (std::abs(x[0]) > grid.R + 1e-12) return false;
  if (grid.n == 2 && std::abs(x[1]) > grid.R + 1e-12) return false;
  return true;
}

double SpaceTimeField::sample(const Vec& x, std::size_t slice) const {
  if (!in_box(x)) return exterior.eval(x, times[slice]);
  const auto& s = slices[slice];
  const double fx = std::clamp(x[0] / grid.h, -static_cast<double>(grid.half),
                               static_cast<double>(grid.half));
  const int i0 = std::min(static_cast<int>(std::floor(fx)), grid.half - 1);
  const double ax = fx - i0;
  if (grid.n == 1) {
    return (1.0 - ax) * s[grid.flat(i0)] + ax * s[grid.flat(i0 + 1)];
  }
  const double fy = std::clamp(x[1] / grid.h, -static_cast<double>(grid.half),
                               static_cast<double>(grid.half));
  const int j0 = std::min(static_cast<int>(std::floor(fy)), grid.half - 1);
  const double ay = fy - j0;
  const double v00 = s[grid.flat(i0, j0)], v10 = s[grid.flat(i0 + 1, j0)];
  const double v01 = s[grid.flat(i0, j0 + 1)], v11 = s[grid.flat(i0 + 1, j0 + 1)];
  return (1.0 - ax) * ((1.0 - ay) * v00 + ay * v01) + ax * ((1.0 - ay) * v10 + ay * v11);
}

double SpaceTimeField::sample(const Vec& x, double t) const {
  if (times.size() == 1 || t <= times.front()) return sample(x, std::size_t{0});
  if (t >= times.back()) return sample(x, times.size() - 1);
  const double f = (t - times.front()) / dt();
  const std::size_t k = std::min(static_cast<std::size_t>(std::floor(f)), times.size() - 2);
  const double a = f - static_cast<double>(k);
  return (1.0 - a) * sample(x, k) + a * sample(x, k + 1);
}

std::size_t SpaceTimeField::slice_index(double t) const {
  if (times.size() == 1) return 0;
  const double f = (t - times.front()) / dt();
  const long k = std::lround(f);
  return static_cast<std::size_t>(std::clamp<long>(k, 0, static_cast<long>(times.size()) - 1));
}

SpaceTimeField SpaceTimeField::scaled(double factor) const {
  SpaceTimeField out = *this;
  for (auto& s : out.slices)
    for (auto& v : s) v *= factor;
  if (out.exterior.kind == ExteriorKind::Constant) {
    out.exterior = ExteriorSpec::constant_value(exterior.constant * factor);
  } else if (out.exterior.kind != ExteriorKind::Zero) {
    auto base = exterior.fn;
    out.exterior.fn = [base, factor](const Vec& x, double t) { return factor * base(x, t); };
    out.exterior.M = exterior.M * std::abs(factor);
    out.exterior.name = exterior.name + "*scaled";
  }
  return out;
}

namespace {

// Shell decomposition of R^n minus the grid box, shared by the tail
// integrals: nodes on geometric shells, included only when outside the box.
struct TailNode {
  Vec y;
  double w;  // measure weight
};

std::vector<TailNode> tail_nodes(const Grid& g) {
  std::vector<TailNode> out;
  double r = g.R;
  while (r < kTailRadius) {
    const double r2 = std::min(r * kShellRatio, kTailRadius);
    const double rm = std::sqrt(r * r2);
    const double dr = r2 - r;
    if (g.n == 1) {
      for (double s : {1.0, -1.0}) out.push_back({vec1(s * rm), dr});
    } else {
      const int na = 128;
      for (int a = 0; a < na; ++a) {
        const double th = 2.0 * M_PI * (a + 0.5) / na;
        const Vec y = {rm * std::cos(th), rm * std::sin(th)};
        if (std::abs(y[0]) <= g.R && std::abs(y[1]) <= g.R) continue;  // inside the box
        out.push_back({y, rm * dr * 2.0 * M_PI / na});
      }
    }
    r = r2;
  }
  return out;
}

double tail_remainder_bound(const SpaceTimeField& u) {
  // mass of |g| omega beyond R_tail, using |g| <= M (1 + |y|^gamma)
  const auto& e = u.exterior;
  if (e.kind == ExteriorKind::Zero) return 0.0;
  const double M = (e.kind == ExteriorKind::Constant) ? std::abs(e.constant) : e.M;
  const double gamma = (e.kind == ExteriorKind::Growth) ? e.gamma : 0.0;
  const double s = u.sigma;
  const int n = u.grid.n;
  if (gamma >= s) throw unsupported_exterior_error("tail not integrable: gamma >= sigma");
  const double surf = unit_sphere_surface(n);
  return M * surf * (std::pow(kTailRadius, -s) / s + std::pow(kTailRadius, gamma - s) / (s - gamma));
}

template <typename NodeFn, typename ExtFn>
WeightedL1Result weighted_l1_impl(const SpaceTimeField& u, NodeFn&& node_val, ExtFn&& ext_val) {
  const Grid& g = u.grid;
  const TailWeight w{g.n, u.sigma};
  const double cell = std::pow(g.h, g.n);
  double interior = 0.0;
  if (g.n == 1) {
    for (int i = -g.half; i <= g.half; ++i) {
      interior += std::abs(node_val(g.flat(i))) * w(g.coord(i));
    }
  } else {
    for (int i = -g.half; i <= g.half; ++i)
      for (int j = -g.half; j <= g.half; ++j)
        interior += std::abs(node_val(g.flat(i, j))) * w(g.coord(i, j));
  }
  interior *= cell;
  double tail = 0.0;
  if (u.exterior.kind != ExteriorKind::Zero) {
    for (const auto& tn : tail_nodes(g)) tail += std::abs(ext_val(tn.y)) * w(tn.y) * tn.w;
  }
  if (!std::isfinite(interior) || !std::isfinite(tail)) {
    throw numeric_error("weighted_l1: non-finite sum");
  }
  return {interior + tail, tail_remainder_bound(u)};
}

}  // namespace

WeightedL1Result weighted_l1(const SpaceTimeField& u, std::size_t slice) {
  const double t = u.times[slice];
  return weighted_l1_impl(
      u, [&](std::size_t idx) { return u.slices[slice][idx]; },
      [&](const Vec& y) { return u.exterior.eval(y, t); });
}

WeightedL1Result weighted_l1_positive_part(const SpaceTimeField& u, std::size_t slice) {
  const double t = u.times[slice];
  return weighted_l1_impl(
      u, [&](std::size_t idx) { return std::max(u.slices[slice][idx], 0.0); },
      [&](const Vec& y) { return std::max(u.exterior.eval(y, t), 0.0); });
}

WeightedL1Result weighted_l1_difference(const SpaceTimeField& u, std::size_t s1, std::size_t s2) {
  const double t1 = u.times[s1], t2 = u.times[s2];
  return weighted_l1_impl(
      u, [&](std::size_t idx) { return u.slices[s1][idx] - u.slices[s2][idx]; },
      [&](const Vec& y) { return u.exterior.eval(y, t1) - u.exterior.eval(y, t2); });
}

double time_lipschitz_seminorm(const SpaceTimeField& u) {
  const std::size_t m = u.slice_count();
  if (m < 2) throw std::invalid_argument("time_lipschitz_seminorm: need at least 2 slices");
  double best = 0.0;
  auto quotient = [&](std::size_t i, std::size_t j) {
    const double gap = u.times[j] - u.times[i];
    best = std::max(best, weighted_l1_difference(u, j, i).value / gap);
  };
  if (m <= 1500) {
    for (std::size_t i = 0; i + 1 < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) quotient(i, j);
  } else {
    for (std::size_t i = 0; i + 1 < m; ++i) quotient(i, i + 1);
    for (std::size_t span = 2; span < m; span *= 2)
      for (std::size_t i = 0; i + span < m; i += span) quotient(i, i + span);
  }
  return best;
}

namespace {

struct SamplePoint {
  Vec x;
  double t;
  double v;
};

std::vector<SamplePoint> region_samples(const SpaceTimeField& u, const Cylinder& region) {
  std::vector<SamplePoint> pts;
  const Grid& g = u.grid;
  for (std::size_t s = 0; s < u.slice_count(); ++s) {
    const double t = u.times[s];
    if (!(t > region.t_top - region.height && t <= region.t_top + 1e-12)) continue;
    if (g.n == 1) {
      for (int i = -g.half; i <= g.half; ++i) {
        const Vec x = g.coord(i);
        if (norm(sub(x, region.center), 1) < region.radius) pts.push_back({x, t, u.value(i, s)});
      }
    } else {
      for (int i = -g.half; i <= g.half; ++i)
        for (int j = -g.half; j <= g.half; ++j) {
          const Vec x = g.coord(i, j);
          if (norm(sub(x, region.center), 2) < region.radius) pts.push_back({x, t, u.value(i, j, s)});
        }
    }
  }
  return pts;
}

}  // namespace

double parabolic_holder_seminorm(const SpaceTimeField& u, double alpha, const Cylinder& region) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("parabolic_holder_seminorm: alpha in (0,1)");
  auto pts = region_samples(u, region);
  if (pts.size() < 2) throw std::domain_error("parabolic_holder_seminorm: region holds fewer than 2 samples");
  const double inv_sigma = 1.0 / u.sigma;
  const int n = u.grid.n;
  auto quotient = [&](const SamplePoint& a, const SamplePoint& b) {
    const double d = norm(sub(a.x, b.x), n) + std::pow(std::abs(a.t - b.t), inv_sigma);
    if (d <= 0.0) return 0.0;  // coincident pair excluded by construction
    return std::abs(a.v - b.v) / std::pow(d, alpha);
  };
  double best = 0.0;
  const std::size_t cap = 40000;
  if (pts.size() <= cap) {
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, quotient(pts[i], pts[j]));
    return best;
  }
  // Deterministic seedless strata: strided anchors, and for each anchor a
  // strided partner sweep; stride chosen so the pair budget stays near cap^2.
  const std::size_t stride = pts.size() / 6000 + 1;
  for (std::size_t i = 0; i < pts.size(); i += stride)
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, quotient(pts[i], pts[j]));
  return best;
}

double sup_norm(const SpaceTimeField& u, const Cylinder& region) {
  auto pts = region_samples(u, region);
  if (pts.empty()) throw std::domain_error("sup_norm: empty region");
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) m = std::max(m, p.v);
  return m;
}

double inf_value(const SpaceTimeField& u, const Cylinder& region) {
  auto pts = region_samples(u, region);
  if (pts.empty()) throw std::domain_error("inf_value: empty region");
  double m = std::numeric_limits<double>::infinity();
  for (const auto& p : pts) m = std::min(m, p.v);
  return m;
}

double oscillation(const SpaceTimeField& u, const Cylinder& region) {
  auto pts = region_samples(u, region);
  if (pts.empty()) throw std::domain_error("oscillation: empty region");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p.v);
    hi = std::max(hi, p.v);
  }
  return hi - lo;
}

void save_field_csv(const SpaceTimeField& u, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  char buf[64];
  const Grid& g = u.grid;
  os << (g.n == 1 ? "x,t,value\n" : "x,y,t,value\n");
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  for (std::size_t s = 0; s < u.slice_count(); ++s) {
    const double t = u.times[s];
    if (g.n == 1) {
      for (int i = -g.half; i <= g.half; ++i)
        os << num(i * g.h) << "," << num(t) << "," << num(u.value(i, s)) << "\n";
    } else {
      for (int i = -g.half; i <= g.half; ++i)
        for (int j = -g.half; j <= g.half; ++j)
          os << num(i * g.h) << "," << num(j * g.h) << "," << num(t) << ","
             << num(u.value(i, j, s)) << "\n";
    }
  }
  std::ofstream meta(path + ".meta");
  meta << "n=" << g.n << "\nR=" << num(g.R) << "\nh=" << num(g.h) << "\ndt=" << num(u.dt())
       << "\nt_begin=" << num(u.t_begin()) << "\nt_end=" << num(u.t_end())
       << "\nslices=" << u.slice_count() << "\nsigma=" << num(u.sigma)
       << "\nexterior=" << u.exterior.to_string() << "\n";
}

SpaceTimeField load_field_csv(const std::string& path) {
  std::ifstream meta(path + ".meta");
  if (!meta) throw std::runtime_error("cannot open " + path + ".meta");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(meta, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const int n = std::stoi(kv.at("n"));
  Grid g(n, std::stod(kv.at("R")), std::stod(kv.at("h")));
  const std::size_t nslices = std::stoul(kv.at("slices"));
  SpaceTimeField f;
  f.grid = g;
  f.sigma = std::stod(kv.at("sigma"));
  f.exterior = ExteriorSpec::preset(kv.at("exterior"));
  f.slices.assign(nslices, std::vector<double>(g.node_count(), 0.0));
  f.times.assign(nslices, 0.0);

  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::getline(is, line);  // header
  const std::size_t per_slice = g.node_count();
  std::size_t row = 0;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> cols;
    while (std::getline(ss, cell, ',')) cols.push_back(std::stod(cell));
    if (cols.size() != static_cast<std::size_t>(n) + 2) throw std::runtime_error("bad CSV row in " + path);
    const std::size_t s = row / per_slice;
    const std::size_t k = row % per_slice;
    if (s >= nslices) throw std::runtime_error("too many CSV rows in " + path);
    f.times[s] = cols[n];
    f.slices[s][k] = cols[n + 1];
    ++row;
  }
  if (row != nslices * per_slice) throw std::runtime_error("truncated CSV " + path);
  return f;
}

}  // namespace fracbellman
