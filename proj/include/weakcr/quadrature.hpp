#pragma once

// Tanh-sinh quadrature over the whole real line in long double.
//
// The line is mapped to (-pi/2, pi/2) by x = tan(u), then the double
// exponential rule is applied in u. Near the endpoints x is computed as
// cot(delta) from the complement delta = pi/2 - |u| so that nodes far out in
// the tail keep full relative precision. Algebraic decay of the integrand
// becomes an integrable endpoint singularity in u, which the rule handles.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace weakcr {

struct QuadratureOptions {
  long double rel_tol = 1e-12L;
  int max_level = 12;
  /// Nodes with complement delta below this are not generated.
  long double min_delta = 1e-200L;
};

template <class T>
struct QuadratureResult {
  T value{};
  long double error_estimate = 0.0L;
  int levels = 0;
  bool converged = false;
};

namespace detail {

inline long double abs_value(long double v) { return std::fabs(v); }
inline long double abs_value(const std::complex<long double>& v) { return std::abs(v); }

}  // namespace detail

/// Integral of f over the real line. f is called with finite x only.
template <class T, class F>
QuadratureResult<T> integrate_real_line(F&& f, const QuadratureOptions& opt = {}) {
  constexpr long double half_pi = std::numbers::pi_v<long double> / 2.0L;

  // Contribution of the symmetric node pair at parameter s >= 0, already
  // multiplied by the weights of both substitutions. Returns false once the
  // nodes are too close to the endpoints.
  auto pair_at = [&](long double s, T& sum, long double& abs_sum) -> bool {
    const long double y = half_pi * std::sinh(s);
    // 1 - tanh(y), computed without cancellation.
    const long double comp = 2.0L / (std::exp(2.0L * y) + 1.0L);
    const long double delta = half_pi * comp;
    if (delta < opt.min_delta) return false;
    // dt/ds = (pi/2) cosh(s) sech^2(y), sech^2 = comp * (2 - comp).
    const long double dt = half_pi * std::cosh(s) * comp * (2.0L - comp);
    const long double x = 1.0L / std::tan(delta);
    const long double jac = dt * half_pi * (1.0L + x * x);
    const T fp = f(x);
    if (s == 0.0L) {
      sum += jac * fp;
      abs_sum += jac * detail::abs_value(fp);
    } else {
      const T fm = f(-x);
      sum += jac * (fp + fm);
      abs_sum += jac * (detail::abs_value(fp) + detail::abs_value(fm));
    }
    return true;
  };

  QuadratureResult<T> res;
  T sum{};
  long double abs_sum = 0.0L;
  long double h = 1.0L;
  for (long double s = 0.0L;; s += h) {
    if (!pair_at(s, sum, abs_sum)) break;
  }
  T estimate = h * sum;
  for (int level = 1; level <= opt.max_level; ++level) {
    h /= 2.0L;
    // New nodes sit at odd multiples of h.
    for (long double s = h;; s += 2.0L * h) {
      if (!pair_at(s, sum, abs_sum)) break;
    }
    const T next = h * sum;
    const long double change = detail::abs_value(next - estimate);
    const long double scale =
        std::max(detail::abs_value(next), h * abs_sum * 1e-6L);
    estimate = next;
    res.levels = level;
    res.error_estimate = change;
    if (level >= 3 && change <= opt.rel_tol * scale) {
      res.converged = true;
      break;
    }
  }
  res.value = estimate;
  return res;
}

}  // namespace weakcr
