#pragma once

/**
 * @file equilibria.hpp
 * @brief Reproduction number, disease-free and endemic equilibria.
 *
 * The endemic point solves g(S) = f(S, I(S)) - a = 0 on (0, Lambda/mu) where
 * f(S, I) = b S / (1 + k1 S + k2 I + k3 S I) and I(S) = (mu + lambda)(Lambda - mu S) / c.
 * g is strictly increasing, so bisection is the source of truth. A published
 * closed form for S* is evaluated alongside it for comparison only.
 */

#include <cmath>
#include <optional>

#include "caputo_sirs/error.hpp"
#include "caputo_sirs/sirs_model.hpp"

namespace caputo_sirs {

/// R0 = b Lambda / ((mu + Lambda k1)(mu + r))
inline double basic_reproduction_number(const ModelParams& p) noexcept {
  return p.beta() * p.Lambda() / ((p.mu() + p.Lambda() * p.k1()) * (p.mu() + p.r()));
}

/// E0 = (Lambda / mu, 0, 0)
inline EpidemicState disease_free_equilibrium(const ModelParams& p) noexcept {
  return {p.Lambda() / p.mu(), 0.0, 0.0};
}

inline double endemic_I_of_S(const ModelParams& p, double S) noexcept {
  return (p.mu() + p.lambda()) * (p.Lambda() - p.mu() * S) / p.c();
}

inline double endemic_R_of_S(const ModelParams& p, double S) noexcept {
  return p.r() * (p.Lambda() - p.mu() * S) / p.c();
}

/// g(S) = f(S, I(S)) - a on [0, Lambda/mu].
inline double endemic_g(const ModelParams& p, double S) {
  const double s0 = p.Lambda() / p.mu();
  if (!std::isfinite(S) || S < 0.0 || S > s0) {
    throw DomainError("endemic_g: S must lie in [0, Lambda/mu]");
  }
  const double I = endemic_I_of_S(p, S);
  return p.beta() * S / incidence_denominator(p, S, I) - p.a();
}

/// Residual sup-norm of the vector field at x.
inline double equilibrium_residual(const ModelParams& p, const EpidemicState& x) noexcept {
  return sup_norm(vector_field(p, x));
}

/// Residual bound accepted for the endemic point: 1e-10 * max(1, Lambda).
inline double endemic_residual_bound(const ModelParams& p) noexcept {
  return 1e-10 * std::max(1.0, p.Lambda());
}

/**
 * Unique endemic equilibrium when R0 > 1; empty otherwise (R0 = 1 included).
 * Bisection runs until the bracket can no longer be split in double precision,
 * which is well inside the required 1e-12 * Lambda/mu.
 *
 * @throws InternalError if the sign bracket g(0) < 0 < g(Lambda/mu) fails or
 *         the residual exceeds endemic_residual_bound(p).
 */
inline std::optional<EpidemicState> endemic_equilibrium(const ModelParams& p) {
  if (!(basic_reproduction_number(p) > 1.0)) {
    return std::nullopt;
  }
  const double s0 = p.Lambda() / p.mu();
  double lo = 0.0;
  double hi = s0;
  if (!(endemic_g(p, lo) < 0.0 && endemic_g(p, hi) > 0.0)) {
    throw InternalError("endemic_equilibrium: bisection bracket does not straddle the root");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    if (endemic_g(p, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double S = 0.5 * (lo + hi);
  EpidemicState e{S, endemic_I_of_S(p, S), endemic_R_of_S(p, S)};
  if (!(equilibrium_residual(p, e) < endemic_residual_bound(p))) {
    throw InternalError("endemic_equilibrium: residual above tolerance");
  }
  return e;
}

struct ClosedFormSStar {
  double s_star;
  double delta;
};

/**
 * Evaluates the published closed-form expressions for S* and Delta as printed.
 * Empty when Delta < 0. Diagnostic only; see endemic_equilibrium for the root.
 *
 * @throws DomainError when k3 = 0 (the expression divides by k3).
 */
inline std::optional<ClosedFormSStar> closed_form_s_star(const ModelParams& p) {
  if (p.k3() == 0.0) {
    throw DomainError("closed_form_s_star: requires k3 > 0");
  }
  const double a = p.a();
  const double c = p.c();
  const double mu = p.mu();
  const double L = p.Lambda();
  const double ml = mu + p.lambda();
  const double lead = p.beta() * c - p.k1() * a * c - p.k3() * a * L * ml + p.k2() * a * mu * ml;
  const double delta = lead * lead + 4.0 * p.k3() * a * mu * (a * c + p.k2() * a * L * ml);
  if (delta < 0.0) {
    return std::nullopt;
  }
  const double numerator =
      p.k3() * a * L * ml + p.k1() * a * c - p.beta() * c - p.k2() * a * mu * ml + std::sqrt(delta);
  return ClosedFormSStar{numerator / (2.0 * p.k3() * a * mu * ml), delta};
}

struct EquilibriumReport {
  double r0 = 0.0;
  EpidemicState e0;
  std::optional<EpidemicState> endemic;
  std::optional<double> s_star_closed_form;
  std::optional<double> closed_form_discrepancy;
};

inline EquilibriumReport analyze_equilibria(const ModelParams& p) {
  EquilibriumReport rep;
  rep.r0 = basic_reproduction_number(p);
  rep.e0 = disease_free_equilibrium(p);
  rep.endemic = endemic_equilibrium(p);
  if (p.k3() > 0.0) {
    if (auto cf = closed_form_s_star(p)) {
      rep.s_star_closed_form = cf->s_star;
      if (rep.endemic) {
        rep.closed_form_discrepancy = std::abs(cf->s_star - rep.endemic->S);
      }
    }
  }
  return rep;
}

}  // namespace caputo_sirs
