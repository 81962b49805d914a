#pragma once

/**
 * @file stability.hpp
 * @brief Local and global stability of the SIRS equilibria.
 *
 * Local: eigenvalues of the Jacobian against the fractional sector condition
 * |arg xi| > a pi / 2, plus the Routh-Hurwitz style case table for the
 * characteristic cubic xi^3 + a1 xi^2 + a2 xi + a3. Global: threshold checks
 * and the two Lyapunov functions.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <span>
#include <string_view>

#include "caputo_sirs/equilibria.hpp"
#include "caputo_sirs/error.hpp"
#include "caputo_sirs/frac_kernel.hpp"
#include "caputo_sirs/sirs_model.hpp"

namespace caputo_sirs {

/// Monic cubic xi^3 + a1 xi^2 + a2 xi + a3.
struct CubicCoeffs {
  double a1 = 0.0;
  double a2 = 0.0;
  double a3 = 0.0;

  friend bool operator==(const CubicCoeffs&, const CubicCoeffs&) = default;
};

using Eigenvalues = std::array<std::complex<double>, 3>;

/// Tolerance used when deciding whether a point is an equilibrium.
inline double equilibrium_precondition_bound(const ModelParams& p) noexcept {
  return 1e-8 * std::max(1.0, p.Lambda());
}

/**
 * Characteristic coefficients of the linearisation at the equilibrium `eq`,
 * written out in closed form in terms of
 *   A = b I (1 + k2 I) / den^2,  B = b S (1 + k1 S) / den^2.
 *
 * @throws PreconditionError if `eq` is not an equilibrium.
 */
inline CubicCoeffs characteristic_coefficients(const ModelParams& p, const EpidemicState& eq) {
  if (!(equilibrium_residual(p, eq) < equilibrium_precondition_bound(p))) {
    throw PreconditionError("characteristic_coefficients: point is not an equilibrium");
  }
  const double den = incidence_denominator(p, eq.S, eq.I);
  const double den2 = den * den;
  const double A = p.beta() * eq.I * (1.0 + p.k2() * eq.I) / den2;
  const double B = p.beta() * eq.S * (1.0 + p.k1() * eq.S) / den2;
  const double mu = p.mu();
  const double ml = mu + p.lambda();
  const double a = p.a();
  return {a + 2.0 * mu + p.lambda() + A - B,
          mu * a + ml * mu + ml * a + (a + ml) * A - (2.0 * mu + p.lambda()) * B,
          ml * mu * a + p.c() * A - ml * mu * B};
}

/// D = 18 a1 a2 a3 + (a1 a2)^2 - 4 a3 a1^3 - 4 a2^3 - 27 a3^2
inline double cubic_discriminant(const CubicCoeffs& c) noexcept {
  const double a1 = c.a1;
  const double a2 = c.a2;
  const double a3 = c.a3;
  return 18.0 * a1 * a2 * a3 + (a1 * a2) * (a1 * a2) - 4.0 * a3 * a1 * a1 * a1 - 4.0 * a2 * a2 * a2 -
         27.0 * a3 * a3;
}

namespace detail {

inline double cubic_value(const CubicCoeffs& c, double x) noexcept {
  return ((x + c.a1) * x + c.a2) * x + c.a3;
}

/// One Newton step, kept only if it lowers the residual.
inline double polish_real_root(const CubicCoeffs& c, double x) noexcept {
  const double fx = cubic_value(c, x);
  const double dfx = (3.0 * x + 2.0 * c.a1) * x + c.a2;
  if (dfx == 0.0 || !std::isfinite(dfx)) {
    return x;
  }
  const double y = x - fx / dfx;
  return std::abs(cubic_value(c, y)) < std::abs(fx) ? y : x;
}

inline bool complex_less(const std::complex<double>& x, const std::complex<double>& y) noexcept {
  if (x.real() != y.real()) {
    return x.real() < y.real();
  }
  return x.imag() < y.imag();
}

}  // namespace detail

/**
 * Roots of the monic cubic via the depressed form t^3 + p t + q.
 * Three real roots come from the trigonometric formula; otherwise the real root
 * comes from Cardano and the complex pair from the deflated quadratic, so the
 * pair is exactly conjugate. Real roots get one Newton polish.
 * Sorted by real part, then imaginary part.
 */
inline Eigenvalues cubic_roots(const CubicCoeffs& c) {
  const double shift = c.a1 / 3.0;
  const double p = c.a2 - c.a1 * c.a1 / 3.0;
  const double q = 2.0 * c.a1 * c.a1 * c.a1 / 27.0 - c.a1 * c.a2 / 3.0 + c.a3;
  const double disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);

  Eigenvalues roots;
  if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 - std::copysign(sq, q));
    const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
    const double real_root = detail::polish_real_root(c, u + v - shift);
    // xi^3 + a1 xi^2 + a2 xi + a3 = (xi - real_root)(xi^2 + b xi + k)
    const double b = c.a1 + real_root;
    const double k = std::abs(real_root) > 1.0 ? -c.a3 / real_root : c.a2 + real_root * b;
    const double quad_disc = b * b / 4.0 - k;
    roots[0] = {real_root, 0.0};
    if (quad_disc < 0.0) {
      const double im = std::sqrt(-quad_disc);
      roots[1] = {-b / 2.0, -im};
      roots[2] = {-b / 2.0, im};
    } else {
      const double sd = std::sqrt(quad_disc);
      roots[1] = {detail::polish_real_root(c, -b / 2.0 - sd), 0.0};
      roots[2] = {detail::polish_real_root(c, -b / 2.0 + sd), 0.0};
    }
  } else if (p == 0.0) {
    roots = {std::complex<double>(-shift), std::complex<double>(-shift), std::complex<double>(-shift)};
  } else {
    const double m = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      const double t = m * std::cos(theta - 2.0 * std::numbers::pi * k / 3.0);
      roots[k] = {detail::polish_real_root(c, t - shift), 0.0};
    }
  }
  std::sort(roots.begin(), roots.end(), detail::complex_less);
  return roots;
}

/// Sector condition |arg xi| > a pi / 2 for every eigenvalue. A zero eigenvalue
/// or one exactly on the sector boundary fails.
inline bool matignon_check(std::span<const std::complex<double>> eigs, FracOrder order) {
  const double bound = order.value() * std::numbers::pi / 2.0;
  return std::all_of(eigs.begin(), eigs.end(), [bound](const std::complex<double>& xi) {
    if (xi == std::complex<double>(0.0, 0.0)) {
      return false;
    }
    return std::abs(std::arg(xi)) > bound;
  });
}

enum class RhCase { i, ii, iii, iv, v, inconclusive };

inline std::string_view to_string(RhCase c) noexcept {
  switch (c) {
    case RhCase::i: return "i";
    case RhCase::ii: return "ii";
    case RhCase::iii: return "iii";
    case RhCase::iv: return "iv";
    case RhCase::v: return "v";
    case RhCase::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

/// Verdict attached to a case of the table.
enum class RhVerdict { asymptotically_stable, stable, unstable, none };

inline std::string_view to_string(RhVerdict v) noexcept {
  switch (v) {
    case RhVerdict::asymptotically_stable: return "asymptotically_stable";
    case RhVerdict::stable: return "stable";
    case RhVerdict::unstable: return "unstable";
    case RhVerdict::none: return "none";
  }
  return "none";
}

struct RhClassification {
  RhCase rh_case = RhCase::inconclusive;
  RhVerdict verdict = RhVerdict::none;
};

inline constexpr double kRhEqualityRelTol = 1e-10;
inline constexpr double kRhZeroAbsTol = 1e-12;

/**
 * Case table for the characteristic cubic at order a. A case is reported only
 * when its coefficient conditions hold and its a-range covers `order`:
 *   (i)   a1 > 0, a3 > 0, a1 a2 > a3                       all a     stable
 *   (ii)  D < 0, a1 >= 0, a2 >= 0, a3 > 0, a1 a2 < a3      a < 2/3   stable
 *   (iii) D < 0, a1 < 0, a2 < 0                            a > 2/3   unstable
 *   (iv)  D < 0, a1 > 0, a2 > 0, a1 a2 = a3                a < 1     stable
 *   (v)   D < 0, a1 > 0, a3 = 0                            all a     stable, not asymptotically
 * Case (iv) has a purely imaginary pair, so a = 1 is excluded from its range.
 */
inline RhClassification routh_hurwitz_case(const CubicCoeffs& c, double discriminant, FracOrder order) {
  const double alpha = order.value();
  const double prod = c.a1 * c.a2;
  const bool prod_equals_a3 =
      std::abs(prod - c.a3) <= kRhEqualityRelTol * std::max(std::abs(prod), std::abs(c.a3));
  const bool a3_zero = std::abs(c.a3) <= kRhZeroAbsTol;
  const bool d_neg = discriminant < 0.0;

  if (c.a1 > 0.0 && c.a3 > 0.0 && !a3_zero && prod > c.a3 && !prod_equals_a3) {
    return {RhCase::i, RhVerdict::asymptotically_stable};
  }
  if (d_neg && c.a1 >= 0.0 && c.a2 >= 0.0 && c.a3 > 0.0 && prod < c.a3 && !prod_equals_a3 &&
      alpha < 2.0 / 3.0) {
    return {RhCase::ii, RhVerdict::asymptotically_stable};
  }
  if (d_neg && c.a1 < 0.0 && c.a2 < 0.0 && alpha > 2.0 / 3.0) {
    return {RhCase::iii, RhVerdict::unstable};
  }
  if (d_neg && c.a1 > 0.0 && c.a2 > 0.0 && prod_equals_a3 && alpha < 1.0) {
    return {RhCase::iv, RhVerdict::asymptotically_stable};
  }
  if (d_neg && c.a1 > 0.0 && a3_zero) {
    return {RhCase::v, RhVerdict::stable};
  }
  return {};
}

struct StabilityReport {
  EpidemicState equilibrium;
  Eigenvalues eigenvalues;
  CubicCoeffs coeffs;
  double discriminant = 0.0;
  double alpha = 1.0;
  bool matignon_stable = false;
  RhCase rh_case = RhCase::inconclusive;
  RhVerdict rh_verdict = RhVerdict::none;
};

/// Local stability picture at equilibrium `eq` for order `order`.
inline StabilityReport classify_local(const ModelParams& p, const EpidemicState& eq, FracOrder order) {
  StabilityReport rep;
  rep.equilibrium = eq;
  rep.coeffs = characteristic_coefficients(p, eq);
  rep.eigenvalues = cubic_roots(rep.coeffs);
  rep.discriminant = cubic_discriminant(rep.coeffs);
  rep.alpha = order.value();
  rep.matignon_stable = matignon_check(rep.eigenvalues, order);
  const RhClassification rh = routh_hurwitz_case(rep.coeffs, rep.discriminant, order);
  rep.rh_case = rh.rh_case;
  rep.rh_verdict = rh.verdict;
  return rep;
}

struct GlobalConditions {
  bool e0_global = false;     ///< R0 <= 1
  bool estar_global = false;  ///< R0 > 1 and R* <= (mu / lambda) S*
};

/// Threshold conditions for global stability. With lambda = 0 and an endemic
/// point present the E* condition is vacuous and reported as true.
inline GlobalConditions global_conditions(const ModelParams& p, const EquilibriumReport& rep) noexcept {
  GlobalConditions g;
  g.e0_global = rep.r0 <= 1.0;
  if (rep.r0 > 1.0 && rep.endemic) {
    if (p.lambda() == 0.0) {
      g.estar_global = true;
    } else {
      g.estar_global = rep.endemic->R <= (p.mu() / p.lambda()) * rep.endemic->S;
    }
  }
  return g;
}

/// Psi(x) = x - 1 - ln x, x > 0.
inline double lyapunov_psi(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("lyapunov_psi: argument must be positive");
  }
  return x - 1.0 - std::log(x);
}

/**
 * Lyapunov function for E0:
 *   L0 = S0/(1 + k1 S0) Psi(S/S0) + I
 *        + 1/(S0 (1 + k1 S0)) * (lambda/r R^2/2 + lambda/(4 mu) (N - S0)^2/2)
 */
inline double lyapunov_L0(const ModelParams& p, const EpidemicState& x) {
  if (!(x.S > 0.0)) {
    throw DomainError("lyapunov_L0: S must be positive");
  }
  const double s0 = p.Lambda() / p.mu();
  const double w = 1.0 + p.k1() * s0;
  const double dn = x.N() - s0;
  return s0 / w * lyapunov_psi(x.S / s0) + x.I +
         (p.lambda() / p.r() * x.R * x.R / 2.0 + p.lambda() / (4.0 * p.mu()) * dn * dn / 2.0) / (s0 * w);
}

/**
 * Lyapunov function for the endemic point E* = (S*, I*, R*), with
 * q = (1 + k2 S*) / (1 + k1 S* + k2 I* + k3 S* I*):
 *   L* = q S*^2 Psi(S/S*) + S* I* Psi(I/I*)
 *        + lambda q / (4 mu) ((S-S*) + (I-I*) + (R-R*))^2
 *        + lambda q / (2 r) (R - R*)^2
 * The I-term weight S* I* is the one whose time derivative is S* (1 - I* / I) D I.
 */
inline double lyapunov_Lstar(const ModelParams& p, const EpidemicState& estar, const EpidemicState& x) {
  if (!(x.S > 0.0) || !(x.I > 0.0)) {
    throw DomainError("lyapunov_Lstar: S and I must be positive");
  }
  if (!(estar.S > 0.0) || !(estar.I > 0.0)) {
    throw DomainError("lyapunov_Lstar: endemic point must have positive S and I");
  }
  const double q = (1.0 + p.k2() * estar.S) / incidence_denominator(p, estar.S, estar.I);
  const double dsum = (x.S - estar.S) + (x.I - estar.I) + (x.R - estar.R);
  const double dr = x.R - estar.R;
  return q * estar.S * estar.S * lyapunov_psi(x.S / estar.S) + estar.S * estar.I * lyapunov_psi(x.I / estar.I) +
         p.lambda() * q / (4.0 * p.mu()) * dsum * dsum + p.lambda() * q / (2.0 * p.r()) * dr * dr;
}

}  // namespace caputo_sirs
