#pragma once

/**
 * @file sirs_model.hpp
 * @brief SIRS compartments with the saturated incidence b S I / (1 + k1 S + k2 I + k3 S I).
 *
 *   D^a S = Lambda - mu S - f(S, I) + lambda R
 *   D^a I = f(S, I) - (mu + r) I
 *   D^a R = r I - (mu + lambda) R
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "caputo_sirs/error.hpp"

namespace caputo_sirs {

/// Unvalidated parameter bundle, as read from a config file.
struct RawParams {
  double Lambda = 0.0;  ///< recruitment rate
  double mu = 0.0;      ///< natural death rate
  double beta = 0.0;    ///< infection rate
  double lambda = 0.0;  ///< immunity-loss rate
  double r = 0.0;       ///< recovery rate
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;

  friend bool operator==(const RawParams&, const RawParams&) = default;
};

/// Validated model constants. Construction fails with ConfigError naming the field.
class ModelParams {
 public:
  explicit ModelParams(const RawParams& raw) : raw_(raw) {
    require_positive("Lambda", raw.Lambda);
    require_positive("mu", raw.mu);
    require_positive("beta", raw.beta);
    require_non_negative("lambda", raw.lambda);
    require_positive("r", raw.r);
    require_non_negative("k1", raw.k1);
    require_non_negative("k2", raw.k2);
    require_non_negative("k3", raw.k3);
    // c = a(mu + lambda) - lambda r reduces to mu^2 + mu lambda + r mu.
    const double identity = raw.mu * raw.mu + raw.mu * raw.lambda + raw.r * raw.mu;
    if (!(identity > 0.0) || std::abs(c() - identity) > 1e-12 * std::max(1.0, identity) * 16.0) {
      throw ConfigError("mu", "derived constant c must be positive");
    }
  }

  double Lambda() const noexcept { return raw_.Lambda; }
  double mu() const noexcept { return raw_.mu; }
  double beta() const noexcept { return raw_.beta; }
  double lambda() const noexcept { return raw_.lambda; }
  double r() const noexcept { return raw_.r; }
  double k1() const noexcept { return raw_.k1; }
  double k2() const noexcept { return raw_.k2; }
  double k3() const noexcept { return raw_.k3; }

  /// a = mu + r
  double a() const noexcept { return raw_.mu + raw_.r; }
  /// c = a (mu + lambda) - lambda r
  double c() const noexcept { return a() * (raw_.mu + raw_.lambda) - raw_.lambda * raw_.r; }

  const RawParams& raw() const noexcept { return raw_; }

  ModelParams with_lambda(double lambda) const {
    RawParams next = raw_;
    next.lambda = lambda;
    return ModelParams(next);
  }

  ModelParams with_mu(double mu) const {
    RawParams next = raw_;
    next.mu = mu;
    return ModelParams(next);
  }

 private:
  static void require_positive(const char* name, double v) {
    if (!std::isfinite(v) || v <= 0.0) {
      throw ConfigError(name, "must be positive and finite");
    }
  }
  static void require_non_negative(const char* name, double v) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ConfigError(name, "must be non-negative and finite");
    }
  }

  RawParams raw_;
};

struct EpidemicState {
  double S = 0.0;
  double I = 0.0;
  double R = 0.0;

  double N() const noexcept { return S + I + R; }

  std::array<double, 3> as_array() const noexcept { return {S, I, R}; }
  static EpidemicState from_array(const std::array<double, 3>& v) noexcept { return {v[0], v[1], v[2]}; }

  friend bool operator==(const EpidemicState&, const EpidemicState&) = default;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

inline double sup_norm(const std::array<double, 3>& v) noexcept {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

inline double sup_distance(const EpidemicState& x, const EpidemicState& y) noexcept {
  return sup_norm({x.S - y.S, x.I - y.I, x.R - y.R});
}

/// 1 + k1 S + k2 I + k3 S I
inline double incidence_denominator(const ModelParams& p, double S, double I) noexcept {
  return 1.0 + p.k1() * S + p.k2() * I + p.k3() * S * I;
}

/// New infections per unit time, b S I / (1 + k1 S + k2 I + k3 S I). Zero at S = I = 0.
inline double incidence(const ModelParams& p, double S, double I) noexcept {
  return p.beta() * S * I / incidence_denominator(p, S, I);
}

/// Right-hand side F(X) of the SIRS system.
inline std::array<double, 3> vector_field(const ModelParams& p, const EpidemicState& x) noexcept {
  const double inf = incidence(p, x.S, x.I);
  return {p.Lambda() - p.mu() * x.S - inf + p.lambda() * x.R,
          inf - (p.mu() + p.r()) * x.I,
          p.r() * x.I - (p.mu() + p.lambda()) * x.R};
}

/// Analytic Jacobian of `vector_field` at x.
inline Matrix3 jacobian(const ModelParams& p, const EpidemicState& x) noexcept {
  const double den = incidence_denominator(p, x.S, x.I);
  const double den2 = den * den;
  const double dfdS = p.beta() * x.I * (1.0 + p.k2() * x.I) / den2;
  const double dfdI = p.beta() * x.S * (1.0 + p.k1() * x.S) / den2;
  return {{{-p.mu() - dfdS, -dfdI, p.lambda()},
           {dfdS, dfdI - p.a(), 0.0},
           {0.0, p.r(), -(p.mu() + p.lambda())}}};
}

}  // namespace caputo_sirs
