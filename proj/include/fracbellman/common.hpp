#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace fracbellman {

// Spatial dimension is 1 or 2 throughout; points are stored with a fixed
// small footprint and the active dimension is carried by the owning object.
using Vec = std::array<double, 2>;

inline Vec vec1(double x) { return {x, 0.0}; }
inline Vec vec2(double x, double y) { return {x, y}; }

inline double norm(const Vec& v, int n) {
  return n == 1 ? std::abs(v[0]) : std::hypot(v[0], v[1]);
}

inline double dot(const Vec& a, const Vec& b, int n) {
  double s = a[0] * b[0];
  if (n == 2) s += a[1] * b[1];
  return s;
}

inline Vec add(const Vec& a, const Vec& b) { return {a[0] + b[0], a[1] + b[1]}; }
inline Vec sub(const Vec& a, const Vec& b) { return {a[0] - b[0], a[1] - b[1]}; }
inline Vec scale(const Vec& a, double c) { return {a[0] * c, a[1] * c}; }

/// Surface measure of the unit sphere in R^n (2 for n=1, 2*pi for n=2).
inline double unit_sphere_surface(int n) {
  return n == 1 ? 2.0 : 2.0 * M_PI;
}

/// Volume of the unit ball in R^n.
inline double unit_ball_volume(int n) { return n == 1 ? 2.0 : M_PI; }

/// int_a^b y^p dy for 0 < a <= b, stable across p = -1 (uses expm1).
inline double power_integral(double p, double a, double b) {
  if (!(a > 0.0) || !(b >= a)) throw std::invalid_argument("power_integral: need 0 < a <= b");
  const double q = p + 1.0;
  const double l = std::log(b / a);
  if (std::abs(q * l) < 1e-8) return std::pow(a, q) * l * (1.0 + 0.5 * q * l);
  return std::pow(a, q) * std::expm1(q * l) / q;
}

// --- error taxonomy -------------------------------------------------------

/// Quadrature produced a non-finite intermediate or a solve blew up.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A kernel returned a negative, NaN or infinite value at a sample point.
struct invalid_kernel_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Exterior data has no tail representation integrable against the weight.
struct unsupported_exterior_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A measurement window contains too few grid nodes or time slices.
struct insufficient_resolution_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Config file failed schema validation (CLI maps this to exit code 2).
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- deterministic helpers ------------------------------------------------

/// SplitMix64; used for reproducible spot-check tables, never for results.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Uniform double in [0,1) from a seeded counter stream.
inline double uniform01(uint64_t& state) {
  return (splitmix64(state) >> 11) * 0x1.0p-53;
}

/// Deterministic parallel map over [0, count): each worker owns a stride
/// class, results land in caller-owned storage, so output is identical for
/// any thread count.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  int nt = threads;
  if (nt <= 0) nt = static_cast<int>(std::thread::hardware_concurrency());
  if (nt < 1) nt = 1;
  if (nt == 1 || count < 64) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = static_cast<std::size_t>(t); i < count; i += static_cast<std::size_t>(nt)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace fracbellman
