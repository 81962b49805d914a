#pragma once

/**
 * @file frac_kernel.hpp
 * @brief Special functions and the explicit fractional Euler integrator.
 *
 * The integrator solves the Caputo system  D^a x = f(x), x(0) = x0,  0 < a <= 1,
 * through its Volterra form
 *
 *     x(t) = x0 + 1/Gamma(a) * int_0^t (t - s)^(a-1) f(x(s)) ds
 *
 * with a product-rectangle rule: f is frozen on each [t_j, t_{j+1}) and the
 * kernel is integrated exactly, which gives
 *
 *     x_n = x0 + h^a / Gamma(a+1) * sum_{j=0}^{n-1} b_{n-j} f(x_j),
 *     b_k = k^a - (k-1)^a.
 *
 * The full history is kept (O(n^2) total work); no short-memory truncation.
 */

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "caputo_sirs/error.hpp"

namespace caputo_sirs {

/// Fractional order a in (0, 1].
class FracOrder {
 public:
  explicit FracOrder(double alpha) : alpha_(alpha) {
    if (!std::isfinite(alpha) || alpha <= 0.0 || alpha > 1.0) {
      throw ConfigError("alpha", "fractional order must lie in (0, 1], got " + std::to_string(alpha));
    }
  }

  double value() const noexcept { return alpha_; }
  bool is_integer() const noexcept { return alpha_ == 1.0; }

  friend bool operator==(const FracOrder&, const FracOrder&) = default;

 private:
  double alpha_;
};

/// Uniform grid t_j = j * h, j = 0..n_steps, based at t0 = 0.
class FracGrid {
 public:
  FracGrid(FracOrder order, double step_h, std::size_t n_steps)
      : order_(order), step_(step_h), n_steps_(n_steps) {
    if (!std::isfinite(step_h) || step_h <= 0.0) {
      throw ConfigError("step_h", "step must be positive and finite");
    }
    if (n_steps == 0) {
      throw ConfigError("n_steps", "grid needs at least one step");
    }
  }

  /// Grid covering [0, horizon] with n = ceil(horizon / h) steps. A relative
  /// slack of 1e-9 keeps e.g. 200 / 0.05 from rounding up to 4001.
  static FracGrid over_horizon(FracOrder order, double step_h, double horizon) {
    if (!std::isfinite(horizon) || horizon <= 0.0) {
      throw ConfigError("horizon_T", "horizon must be positive and finite");
    }
    if (!std::isfinite(step_h) || step_h <= 0.0) {
      throw ConfigError("step_h", "step must be positive and finite");
    }
    const double ratio = horizon / step_h;
    const auto n = static_cast<std::size_t>(std::ceil(ratio * (1.0 - 1e-9)));
    return FracGrid(order, step_h, n == 0 ? 1 : n);
  }

  FracOrder order() const noexcept { return order_; }
  double step() const noexcept { return step_; }
  std::size_t n_steps() const noexcept { return n_steps_; }
  double time(std::size_t j) const noexcept { return static_cast<double>(j) * step_; }
  double horizon() const noexcept { return time(n_steps_); }

 private:
  FracOrder order_;
  double step_;
  std::size_t n_steps_;
};

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

namespace detail {

// Lanczos approximation, g = 7, nine terms.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

inline constexpr std::array<double, 22> kFactorials = {
    1.0,
    1.0,
    2.0,
    6.0,
    24.0,
    120.0,
    720.0,
    5040.0,
    40320.0,
    362880.0,
    3628800.0,
    39916800.0,
    479001600.0,
    6227020800.0,
    87178291200.0,
    1307674368000.0,
    20922789888000.0,
    355687428096000.0,
    6402373705728000.0,
    121645100408832000.0,
    2432902008176640000.0,
    51090942171709440000.0};

inline double lanczos_gamma(double x) {
  // x >= 0.5 here.
  const double xm1 = x - 1.0;
  double acc = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    acc += kLanczosCoeffs[i] / (xm1 + static_cast<double>(i));
  }
  const double t = xm1 + kLanczosG + 0.5;
  // Split the power to keep t^(x-1/2) representable up to x ~ 171.
  const double half_pow = std::pow(t, 0.5 * (xm1 + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half_pow * (half_pow * std::exp(-t)) * acc;
}

}  // namespace detail

/// Euler Gamma function for 0 < x <= 171 (relative error well under 1e-12 on (0, 50]).
/// Positive integers up to 22 return the exact factorial.
inline double gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0) {
    throw DomainError("gamma: argument must be positive and finite");
  }
  if (x > 171.0) {
    throw DomainError("gamma: argument overflows double precision");
  }
  if (x == std::floor(x) && x <= static_cast<double>(detail::kFactorials.size())) {
    return detail::kFactorials[static_cast<std::size_t>(x) - 1];
  }
  if (x < 0.5) {
    return detail::lanczos_gamma(x + 1.0) / x;
  }
  return detail::lanczos_gamma(x);
}

// ---------------------------------------------------------------------------
// Mittag-Leffler
// ---------------------------------------------------------------------------

namespace detail {

struct GaussKronrod15 {
  static constexpr std::array<double, 8> nodes = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.0};
  static constexpr std::array<double, 8> kronrod_weights = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  // Gauss weights attach to nodes[1], nodes[3], nodes[5], nodes[7].
  static constexpr std::array<double, 4> gauss_weights = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  /// Returns (Kronrod estimate, |Kronrod - Gauss|).
  template <class F>
  static std::pair<double, double> apply(const F& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = kronrod_weights[7] * fc;
    double gauss = gauss_weights[3] * fc;
    for (std::size_t i = 0; i < 7; ++i) {
      const double dx = half * nodes[i];
      const double pair = f(center - dx) + f(center + dx);
      kronrod += kronrod_weights[i] * pair;
      if (i % 2 == 1) {
        gauss += gauss_weights[i / 2] * pair;
      }
    }
    return {kronrod * half, std::abs((kronrod - gauss) * half)};
  }
};

/// Adaptive bisection with a per-unit-length error budget `tol_density`.
/// An interval is also accepted once its error estimate is at rounding level.
template <class F>
double adaptive_gk15(const F& f, double a, double b, double tol_density, int depth) {
  const auto [whole, err] = GaussKronrod15::apply(f, a, b);
  if (err <= tol_density * (b - a) ||
      err <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(whole)) {
    return whole;
  }
  if (depth <= 0) {
    throw ConvergenceError("mittag_leffler: quadrature did not reach tolerance");
  }
  const double mid = 0.5 * (a + b);
  return adaptive_gk15(f, a, mid, tol_density, depth - 1) +
         adaptive_gk15(f, mid, b, tol_density, depth - 1);
}

/// Power series in extended precision with Neumaier summation. Returns nullopt
/// when z < 0 and a term exceeds `cancellation_limit`, i.e. when alternating
/// cancellation would eat more than ~3 of the 19 available digits.
inline std::optional<double> ml_series(double alpha, double z) {
  constexpr long double cancellation_limit = 1e3L;
  constexpr long double rel_stop = 1e-21L;
  constexpr int max_terms = 20000;

  const long double log_abs_z = std::log(std::abs(static_cast<long double>(z)));
  long double sum = 1.0L;
  long double comp = 0.0L;
  long double prev_mag = 1.0L;
  for (int j = 1; j < max_terms; ++j) {
    const long double log_mag =
        static_cast<long double>(j) * log_abs_z - std::lgamma(static_cast<long double>(alpha) * j + 1.0L);
    const long double mag = std::exp(log_mag);
    if (z < 0.0 && mag > cancellation_limit) {
      return std::nullopt;
    }
    const long double term = (z < 0.0 && (j % 2 == 1)) ? -mag : mag;
    const long double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      comp += (sum - t) + term;
    } else {
      comp += (term - t) + sum;
    }
    sum = t;
    if (mag < prev_mag && mag <= rel_stop * std::abs(sum + comp)) {
      const long double result = sum + comp;
      if (std::abs(result) > static_cast<long double>(std::numeric_limits<double>::max())) {
        throw ConvergenceError("mittag_leffler: result overflows double precision");
      }
      return static_cast<double>(result);
    }
    prev_mag = mag;
  }
  throw ConvergenceError("mittag_leffler: series did not converge");
}

/// E_a(-x) for x > 0 and 0 < a < 1 from the completely monotone Laplace
/// representation, after the substitution that flattens its Lorentzian kernel:
///
///     E_a(-x) = 1/(a pi) * int_0^{a pi} exp(-(x sin(p) / sin(a pi - p))^(1/a)) dp.
///
/// The integrand is smooth, in [0, 1], and decreasing in p.
inline double ml_negative_integral(double alpha, double x) {
  const double upper = alpha * std::numbers::pi;
  const double inv_alpha = 1.0 / alpha;
  auto integrand = [=](double phi) {
    const double denom = std::sin(upper - phi);
    if (denom <= 0.0) {
      return 0.0;
    }
    const double w = x * std::sin(phi) / denom;
    if (!std::isfinite(w)) {
      return 0.0;
    }
    return std::exp(-std::pow(w, inv_alpha));
  };
  constexpr int pieces = 16;
  const double width = upper / pieces;
  double coarse = 0.0;
  for (int k = 0; k < pieces; ++k) {
    coarse += GaussKronrod15::apply(integrand, k * width, (k + 1) * width).first;
  }
  const double tol_density = 1e-15 * std::abs(coarse) / upper;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    total += adaptive_gk15(integrand, k * width, (k + 1) * width, tol_density, 40);
  }
  return total / upper;
}

}  // namespace detail

/// Supported argument range for `mittag_leffler`.
inline constexpr double kMittagLefflerMinZ = -50.0;
inline constexpr double kMittagLefflerMaxZ = 10.0;

/**
 * One-parameter Mittag-Leffler function E_a(z) = sum_j z^j / Gamma(a j + 1)
 * for real z in [-50, 10].
 *
 * a = 1 returns exp(z). Otherwise the power series is summed in extended
 * precision; for negative z where the alternating series would cancel badly,
 * evaluation switches to an integral representation.
 */
inline double mittag_leffler(FracOrder order, double z) {
  if (!std::isfinite(z) || z < kMittagLefflerMinZ || z > kMittagLefflerMaxZ) {
    throw DomainError("mittag_leffler: z outside supported range [-50, 10]");
  }
  if (z == 0.0) {
    return 1.0;
  }
  const double alpha = order.value();
  if (order.is_integer()) {
    return std::exp(z);
  }
  if (auto series = detail::ml_series(alpha, z)) {
    return *series;
  }
  return detail::ml_negative_integral(alpha, -z);
}

// ---------------------------------------------------------------------------
// Memory weights and the integrator
// ---------------------------------------------------------------------------

/// Product-rectangle weights b_j = j^a - (j-1)^a, j = 1..n.
class MemoryWeights {
 public:
  MemoryWeights(FracOrder order, std::vector<double> weights)
      : order_(order), weights_(std::move(weights)) {}

  FracOrder order() const noexcept { return order_; }
  std::size_t size() const noexcept { return weights_.size(); }

  /// Weight b_j for 1 <= j <= size().
  double at(std::size_t j) const { return weights_.at(j - 1); }

  std::span<const double> values() const noexcept { return weights_; }

 private:
  FracOrder order_;
  std::vector<double> weights_;
};

inline MemoryWeights frac_euler_weights(FracOrder order, std::size_t n) {
  if (n == 0) {
    throw PreconditionError("frac_euler_weights: n must be at least 1");
  }
  std::vector<double> w(n);
  const double alpha = order.value();
  if (order.is_integer()) {
    std::fill(w.begin(), w.end(), 1.0);
    return {order, std::move(w)};
  }
  w[0] = 1.0;
  for (std::size_t j = 2; j <= n; ++j) {
    // j^a - (j-1)^a without cancellation: -j^a * expm1(a * log1p(-1/j)).
    const double jd = static_cast<double>(j);
    w[j - 1] = -std::pow(jd, alpha) * std::expm1(alpha * std::log1p(-1.0 / jd));
  }
  return {order, std::move(w)};
}

/// Factor h^a / Gamma(a + 1) multiplying the memory sum; exactly h when a = 1.
inline double memory_scale(const FracGrid& grid) {
  const FracOrder order = grid.order();
  if (order.is_integer()) {
    return grid.step();
  }
  return std::pow(grid.step(), order.value()) / gamma(order.value() + 1.0);
}

/// Rejects grids whose scaled step exceeds the decay rate of the linear part:
/// requires rate * h^a / Gamma(a + 1) < 1.
inline void check_step_guard(const FracGrid& grid, double linear_rate) {
  const double scaled = linear_rate * memory_scale(grid);
  if (!(scaled < 1.0)) {
    throw ConfigError("step_h", "step too large: rate * h^alpha / Gamma(alpha + 1) = " +
                                    std::to_string(scaled) + " must be < 1");
  }
}

template <std::size_t D>
using Vec = std::array<double, D>;

template <std::size_t D>
struct CaputoSolution {
  std::vector<double> times;
  std::vector<Vec<D>> states;
};

/// Default post-step hook: leaves the state untouched.
struct NoStepHook {
  template <std::size_t D>
  void operator()(std::size_t, Vec<D>&) const noexcept {}
};

/**
 * Explicit fractional Euler integration of D^a x = f(x) on `grid`.
 *
 * `field` maps `const Vec<D>&` to `Vec<D>`. `hook(n, x_n)` runs after each
 * new state is formed and may adjust it (the adjusted value enters the
 * history). For a = 1 the update is the classical recursion
 * x_n = x_{n-1} + h f(x_{n-1}), which is what the memory sum telescopes to.
 *
 * @throws NonFiniteStateError if any component of x_n is NaN or infinite.
 */
template <std::size_t D, class Field, class Hook = NoStepHook>
CaputoSolution<D> integrate_caputo(const Field& field, const Vec<D>& x0, const FracGrid& grid,
                                   Hook&& hook = {}) {
  for (double v : x0) {
    if (!std::isfinite(v)) {
      throw NonFiniteStateError(0);
    }
  }
  const std::size_t n_steps = grid.n_steps();
  const double h = grid.step();
  const double scale = memory_scale(grid);
  const bool classical = grid.order().is_integer();
  const MemoryWeights weights = frac_euler_weights(grid.order(), n_steps);
  const std::span<const double> b = weights.values();

  CaputoSolution<D> out;
  out.times.reserve(n_steps + 1);
  out.states.reserve(n_steps + 1);
  out.times.push_back(0.0);
  out.states.push_back(x0);

  std::vector<Vec<D>> history;
  history.reserve(classical ? 0 : n_steps);

  for (std::size_t n = 1; n <= n_steps; ++n) {
    const Vec<D>& prev = out.states.back();
    const Vec<D> f_prev = field(prev);
    Vec<D> next;
    if (classical) {
      for (std::size_t i = 0; i < D; ++i) {
        next[i] = prev[i] + h * f_prev[i];
      }
    } else {
      history.push_back(f_prev);
      Vec<D> acc{};
      // sum_{j=0}^{n-1} b_{n-j} f_j ; b_{n-j} lives at b[n-j-1].
      for (std::size_t j = 0; j < n; ++j) {
        const double wj = b[n - j - 1];
        const Vec<D>& fj = history[j];
        for (std::size_t i = 0; i < D; ++i) {
          acc[i] += wj * fj[i];
        }
      }
      for (std::size_t i = 0; i < D; ++i) {
        next[i] = x0[i] + scale * acc[i];
      }
    }
    hook(n, next);
    for (double v : next) {
      if (!std::isfinite(v)) {
        throw NonFiniteStateError(n);
      }
    }
    out.times.push_back(grid.time(n));
    out.states.push_back(next);
  }
  return out;
}

}  // namespace caputo_sirs
