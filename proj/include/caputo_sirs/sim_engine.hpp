#pragma once

/**
 * @file sim_engine.hpp
 * @brief Runs the fractional Euler scheme on the SIRS field and audits the result.
 *
 * Audits: non-negativity, the population bound N(t) <= N(0) + Lambda/mu, the
 * Mittag-Leffler envelope for N, Lyapunov monotonicity, and convergence to a
 * target equilibrium.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "caputo_sirs/equilibria.hpp"
#include "caputo_sirs/error.hpp"
#include "caputo_sirs/frac_kernel.hpp"
#include "caputo_sirs/sirs_model.hpp"
#include "caputo_sirs/stability.hpp"

namespace caputo_sirs {

enum class LyapunovKind { L0, Lstar };

inline std::string_view to_string(LyapunovKind k) noexcept { return k == LyapunovKind::L0 ? "L0" : "Lstar"; }

/// Components in (-kClampBand, 0) are set to zero after each step.
inline constexpr double kClampBand = 1e-10;

namespace violation_flag {
inline constexpr std::uint8_t negative = 1U << 0U;
inline constexpr std::uint8_t population_bound = 1U << 1U;
inline constexpr std::uint8_t envelope = 1U << 2U;
}  // namespace violation_flag

struct StepDiagnostics {
  double N = 0.0;
  double lyapunov = std::numeric_limits<double>::quiet_NaN();  ///< NaN where undefined
  double envelope = 0.0;
  std::uint8_t flags = 0;
};

struct Trajectory {
  ModelParams params;
  FracOrder alpha;
  double step_h = 0.0;
  std::vector<double> times;
  std::vector<EpidemicState> states;
  std::vector<StepDiagnostics> diagnostics;
  std::optional<LyapunovKind> lyapunov_kind;
  std::optional<EpidemicState> estar;
  std::size_t clamped = 0;
};

struct InvariantTolerances {
  double negative = 1e-10;     ///< absolute
  double bound_rel = 1e-6;     ///< times N(0)
  double envelope_rel = 0.05;  ///< times N(0)
};

/**
 * Upper envelope N(0) E_a(-mu t^a) + (Lambda/mu)(1 - E_a(-mu t^a)).
 * Past the Mittag-Leffler range (mu t^a > 50) a valid upper bound is returned
 * instead: E is replaced by E_a(-50) when N(0) >= Lambda/mu and by 0 otherwise.
 */
inline double population_envelope(const ModelParams& p, FracOrder alpha, double n0, double t) {
  const double s0 = p.Lambda() / p.mu();
  const double z = -p.mu() * std::pow(t, alpha.value());
  double e = 0.0;
  if (z >= kMittagLefflerMinZ) {
    e = mittag_leffler(alpha, z);
  } else if (n0 >= s0) {
    e = mittag_leffler(alpha, kMittagLefflerMinZ);
  }
  return n0 * e + s0 * (1.0 - e);
}

namespace detail {

inline std::uint8_t step_flags(const ModelParams& p, const EpidemicState& x, double n0, double envelope,
                               const InvariantTolerances& tol) noexcept {
  std::uint8_t flags = 0;
  if (std::min({x.S, x.I, x.R}) < -tol.negative) {
    flags |= violation_flag::negative;
  }
  if (x.N() > n0 + p.Lambda() / p.mu() + tol.bound_rel * n0) {
    flags |= violation_flag::population_bound;
  }
  if (x.N() > envelope + tol.envelope_rel * n0) {
    flags |= violation_flag::envelope;
  }
  return flags;
}

inline double lyapunov_value(const Trajectory& traj, LyapunovKind kind, const std::optional<EpidemicState>& estar,
                             const EpidemicState& x) {
  if (kind == LyapunovKind::L0) {
    return lyapunov_L0(traj.params, x);
  }
  return lyapunov_Lstar(traj.params, *estar, x);
}

}  // namespace detail

/**
 * Integrates the SIRS system from x0 on `grid` and records per-step diagnostics.
 * The Lyapunov column is L0 when R0 <= 1 and L* (about the bisection E*) otherwise.
 *
 * @throws PreconditionError for a negative or non-finite initial state.
 * @throws ConfigError if the grid fails the step guard.
 * @throws NonFiniteStateError from the integrator.
 */
inline Trajectory run(const ModelParams& p, const EpidemicState& x0, const FracGrid& grid) {
  for (double v : x0.as_array()) {
    if (!std::isfinite(v) || v < 0.0) {
      throw PreconditionError("run: initial state must be finite and non-negative");
    }
  }
  check_step_guard(grid, p.mu() + std::max(p.r(), p.lambda()));

  std::size_t clamped = 0;
  auto clamp = [&clamped](std::size_t, Vec<3>& x) {
    for (double& v : x) {
      if (v < 0.0 && v > -kClampBand) {
        v = 0.0;
        ++clamped;
      }
    }
  };
  auto field = [&p](const Vec<3>& x) { return vector_field(p, EpidemicState::from_array(x)); };
  CaputoSolution<3> sol = integrate_caputo<3>(field, x0.as_array(), grid, clamp);

  Trajectory traj{p, grid.order(), grid.step(), std::move(sol.times), {}, {}, std::nullopt, std::nullopt, clamped};
  traj.states.reserve(sol.states.size());
  for (const auto& s : sol.states) {
    traj.states.push_back(EpidemicState::from_array(s));
  }

  const EquilibriumReport eq = analyze_equilibria(p);
  if (eq.endemic) {
    traj.lyapunov_kind = LyapunovKind::Lstar;
    traj.estar = eq.endemic;
  } else {
    traj.lyapunov_kind = LyapunovKind::L0;
  }

  const double n0 = x0.N();
  const InvariantTolerances tol{};
  traj.diagnostics.reserve(traj.states.size());
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const EpidemicState& x = traj.states[n];
    StepDiagnostics d;
    d.N = x.N();
    d.envelope = population_envelope(p, traj.alpha, n0, traj.times[n]);
    d.flags = detail::step_flags(p, x, n0, d.envelope, tol);
    try {
      d.lyapunov = detail::lyapunov_value(traj, *traj.lyapunov_kind, traj.estar, x);
    } catch (const DomainError&) {
      // left as NaN: the state is on a coordinate face where Psi is undefined
    }
    traj.diagnostics.push_back(d);
  }
  return traj;
}

enum class ViolationKind { negative, population_bound, envelope };

inline std::string_view to_string(ViolationKind k) noexcept {
  switch (k) {
    case ViolationKind::negative: return "negative";
    case ViolationKind::population_bound: return "population_bound";
    case ViolationKind::envelope: return "envelope";
  }
  return "negative";
}

struct InvariantViolation {
  std::size_t step = 0;
  ViolationKind kind = ViolationKind::negative;
  double magnitude = 0.0;
};

/// Reports, never throws on, violations of positivity and the two population bounds.
inline std::vector<InvariantViolation> check_invariants(const Trajectory& traj, const InvariantTolerances& tol = {}) {
  std::vector<InvariantViolation> out;
  if (traj.states.empty()) {
    return out;
  }
  const ModelParams& p = traj.params;
  const double n0 = traj.states.front().N();
  const double bound = n0 + p.Lambda() / p.mu();
  for (std::size_t n = 0; n < traj.states.size(); ++n) {
    const EpidemicState& x = traj.states[n];
    const double lowest = std::min({x.S, x.I, x.R});
    if (lowest < -tol.negative) {
      out.push_back({n, ViolationKind::negative, -lowest});
    }
    if (x.N() > bound + tol.bound_rel * n0) {
      out.push_back({n, ViolationKind::population_bound, x.N() - bound});
    }
    const double env = population_envelope(p, traj.alpha, n0, traj.times[n]);
    if (x.N() > env + tol.envelope_rel * n0) {
      out.push_back({n, ViolationKind::envelope, x.N() - env});
    }
  }
  return out;
}

struct LyapunovRecord {
  LyapunovKind kind = LyapunovKind::L0;
  double initial_value = 0.0;
  double max_increment = 0.0;  ///< largest L(t_{n+1}) - L(t_n) after burn-in
  std::size_t worst_step = 0;
  double tolerance = 0.0;  ///< 1e-6 * L(t_0)
  bool monotone = true;
  bool condition_holds = false;  ///< global-stability condition behind the function
};

inline constexpr std::size_t kLyapunovBurnIn = 10;
inline constexpr double kLyapunovRelTol = 1e-6;

/**
 * Largest one-step increase of L0 or L* along `traj` after a 10-step burn-in.
 * Informational when the matching global condition does not hold.
 *
 * @throws DomainError if L* is requested without an endemic point, or if the
 *         trajectory leaves the domain of the chosen function.
 */
inline LyapunovRecord monitor_lyapunov(const Trajectory& traj, LyapunovKind which,
                                       const std::optional<EpidemicState>& estar) {
  if (which == LyapunovKind::Lstar && !estar) {
    throw DomainError("monitor_lyapunov: L* requires an endemic equilibrium");
  }
  LyapunovRecord rec;
  rec.kind = which;
  const EquilibriumReport eq = analyze_equilibria(traj.params);
  const GlobalConditions g = global_conditions(traj.params, eq);
  rec.condition_holds = which == LyapunovKind::L0 ? g.e0_global : g.estar_global;
  if (traj.states.empty()) {
    return rec;
  }

  std::vector<double> values;
  values.reserve(traj.states.size());
  for (const auto& x : traj.states) {
    values.push_back(detail::lyapunov_value(traj, which, estar, x));
  }
  rec.initial_value = values.front();
  rec.tolerance = kLyapunovRelTol * values.front();
  rec.max_increment = -std::numeric_limits<double>::infinity();
  for (std::size_t n = kLyapunovBurnIn; n + 1 < values.size(); ++n) {
    const double inc = values[n + 1] - values[n];
    if (inc > rec.max_increment) {
      rec.max_increment = inc;
      rec.worst_step = n;
    }
  }
  if (!std::isfinite(rec.max_increment)) {
    rec.max_increment = 0.0;
  }
  rec.monotone = rec.max_increment < rec.tolerance || rec.max_increment <= 0.0;
  return rec;
}

/// Earliest grid time after which every remaining state is within `tol`
/// (sup-norm) of `target`; empty if the final state is outside.
inline std::optional<double> detect_convergence(const Trajectory& traj, const EpidemicState& target, double tol) {
  if (!(tol > 0.0)) {
    throw PreconditionError("detect_convergence: tol must be positive");
  }
  if (traj.states.empty()) {
    return std::nullopt;
  }
  std::size_t first_inside = traj.states.size();
  for (std::size_t k = traj.states.size(); k-- > 0;) {
    if (sup_distance(traj.states[k], target) > tol) {
      break;
    }
    first_inside = k;
  }
  if (first_inside == traj.states.size()) {
    return std::nullopt;
  }
  return traj.times[first_inside];
}

struct RunReport {
  double alpha = 1.0;
  std::optional<EpidemicState> final_state;
  std::optional<EpidemicState> converged_to;
  std::optional<double> convergence_time;
  std::vector<InvariantViolation> invariant_violations;
  std::optional<LyapunovRecord> lyapunov;
  std::size_t clamped = 0;
  std::optional<std::string> error;
};

/// Relative convergence tolerance: tol = 1e-2 * max(1, |target|_inf).
inline constexpr double kConvergenceRelTol = 1e-2;

inline double convergence_tolerance(const EpidemicState& target) noexcept {
  return kConvergenceRelTol * std::max(1.0, sup_norm(target.as_array()));
}

/// Target is E* when it exists, otherwise E0.
inline RunReport summarize(const Trajectory& traj) {
  RunReport rep;
  rep.alpha = traj.alpha.value();
  rep.clamped = traj.clamped;
  if (!traj.states.empty()) {
    rep.final_state = traj.states.back();
  }
  const EpidemicState target = traj.estar ? *traj.estar : disease_free_equilibrium(traj.params);
  rep.convergence_time = detect_convergence(traj, target, convergence_tolerance(target));
  if (rep.convergence_time) {
    rep.converged_to = target;
  }
  rep.invariant_violations = check_invariants(traj);
  if (traj.lyapunov_kind) {
    try {
      rep.lyapunov = monitor_lyapunov(traj, *traj.lyapunov_kind, traj.estar);
    } catch (const DomainError&) {
      // trajectory touches a face where the function is undefined
    }
  }
  return rep;
}

/// Step and horizon shared by all runs of a sweep; alpha varies per run.
struct GridSpec {
  double step_h = 0.05;
  double horizon_T = 200.0;
};

struct SweepRun {
  RunReport report;
  std::optional<Trajectory> trajectory;
};

/**
 * One independent run per alpha, executed concurrently. Results keep the input
 * order. A failing run records its message in `report.error`; it does not abort
 * the sweep.
 *
 * @throws PreconditionError for an empty alpha list.
 */
inline std::vector<SweepRun> sweep(const ModelParams& base, const EpidemicState& x0, std::span<const double> alphas,
                                   const GridSpec& spec) {
  if (alphas.empty()) {
    throw PreconditionError("sweep: alpha list is empty");
  }
  std::vector<std::future<SweepRun>> pending;
  pending.reserve(alphas.size());
  for (const double alpha : alphas) {
    pending.push_back(std::async(std::launch::async, [&base, x0, alpha, spec]() {
      SweepRun out;
      out.report.alpha = alpha;
      try {
        const FracGrid grid = FracGrid::over_horizon(FracOrder(alpha), spec.step_h, spec.horizon_T);
        Trajectory traj = run(base, x0, grid);
        out.report = summarize(traj);
        out.trajectory = std::move(traj);
      } catch (const std::exception& e) {
        out.report.error = e.what();
      }
      return out;
    }));
  }
  std::vector<SweepRun> results;
  results.reserve(pending.size());
  for (auto& f : pending) {
    results.push_back(f.get());
  }
  return results;
}

}  // namespace caputo_sirs
