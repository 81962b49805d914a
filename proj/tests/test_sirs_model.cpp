#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "caputo_sirs/sirs_model.hpp"

using namespace caputo_sirs;

namespace {

RawParams set2() { return {0.8, 0.02, 0.1, 0.5, 0.5, 0.1, 0.02, 0.003}; }

RawParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return {0.1 + 2.0 * u(rng), 0.01 + 0.5 * u(rng), 0.01 + u(rng), u(rng),
          0.05 + u(rng),      0.5 * u(rng),        0.5 * u(rng), 0.5 * u(rng)};
}

EpidemicState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 30.0);
  return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST(ModelParams, DerivedConstants) {
  const ModelParams p(set2());
  EXPECT_DOUBLE_EQ(p.a(), 0.52);
  EXPECT_NEAR(p.c(), 0.02 * 0.02 + 0.02 * 0.5 + 0.5 * 0.02, 1e-15);
}

TEST(ModelParams, CIdentityHoldsForRandomParameters) {
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const ModelParams p(random_params(rng));
    const double identity = p.mu() * p.mu() + p.mu() * p.lambda() + p.r() * p.mu();
    EXPECT_NEAR(p.c(), identity, 1e-13 * std::max(1.0, identity));
  }
}

TEST(ModelParams, RejectsEachFieldByName) {
  struct Case {
    double RawParams::*field;
    double bad;
    const char* name;
  };
  const Case cases[] = {
      {&RawParams::Lambda, 0.0, "Lambda"}, {&RawParams::mu, 0.0, "mu"},      {&RawParams::beta, -0.1, "beta"},
      {&RawParams::lambda, -1e-9, "lambda"}, {&RawParams::r, 0.0, "r"},      {&RawParams::k1, -0.5, "k1"},
      {&RawParams::k2, std::numeric_limits<double>::quiet_NaN(), "k2"},      {&RawParams::k3, -1.0, "k3"},
      {&RawParams::mu, std::numeric_limits<double>::infinity(), "mu"},
  };
  for (const auto& c : cases) {
    RawParams raw = set2();
    raw.*c.field = c.bad;
    try {
      ModelParams p(raw);
      ADD_FAILURE() << c.name << " accepted";
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.field(), c.name);
    }
  }
}

TEST(ModelParams, AllowsZeroOptionalRates) {
  RawParams raw = set2();
  raw.lambda = 0.0;
  raw.k1 = raw.k2 = raw.k3 = 0.0;
  EXPECT_NO_THROW(ModelParams{raw});
}

TEST(ModelParams, WithLambdaRevalidates) {
  const ModelParams p(set2());
  EXPECT_DOUBLE_EQ(p.with_lambda(1e-6).lambda(), 1e-6);
  EXPECT_EQ(p.with_lambda(1e-6).mu(), p.mu());
  EXPECT_THROW(p.with_lambda(-1.0), ConfigError);
  EXPECT_DOUBLE_EQ(p.with_mu(0.1).mu(), 0.1);
}

TEST(Incidence, VanishesOnCoordinateFaces) {
  const ModelParams p(set2());
  EXPECT_EQ(incidence(p, 0.0, 5.0), 0.0);
  EXPECT_EQ(incidence(p, 5.0, 0.0), 0.0);
  EXPECT_EQ(incidence(p, 0.0, 0.0), 0.0);
}

TEST(Incidence, KnownValue) {
  const ModelParams p(set2());
  // 0.1 * 10 * 1 / (1 + 1 + 0.02 + 0.03)
  EXPECT_NEAR(incidence(p, 10.0, 1.0), 1.0 / 2.05, 1e-15);
}

TEST(VectorField, TotalPopulationBalance) {
  // d(S + I + R) = Lambda - mu N for every state.
  std::mt19937_64 rng(2);
  for (int k = 0; k < 500; ++k) {
    const ModelParams p(random_params(rng));
    const EpidemicState x = random_state(rng);
    const auto f = vector_field(p, x);
    const double want = p.Lambda() - p.mu() * x.N();
    EXPECT_NEAR(f[0] + f[1] + f[2], want, 1e-12 * (1.0 + std::abs(want) + x.N()));
  }
}

TEST(VectorField, FacesPointInward) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 200; ++k) {
    const ModelParams p(random_params(rng));
    EpidemicState x = random_state(rng);
    x.S = 0.0;
    EXPECT_GT(vector_field(p, x)[0], 0.0);
    x = random_state(rng);
    x.I = 0.0;
    EXPECT_EQ(vector_field(p, x)[1], 0.0);
    x = random_state(rng);
    x.R = 0.0;
    EXPECT_GE(vector_field(p, x)[2], 0.0);
  }
}

TEST(Jacobian, MatchesCentralDifferences) {
  std::mt19937_64 rng(9);
  for (int k = 0; k < 200; ++k) {
    const ModelParams p(random_params(rng));
    const EpidemicState x = random_state(rng);
    const Matrix3 J = jacobian(p, x);
    auto xs = x.as_array();
    for (int j = 0; j < 3; ++j) {
      const double step = 1e-6 * std::max(1.0, std::abs(xs[j]));
      auto up = xs;
      auto dn = xs;
      up[j] += step;
      dn[j] -= step;
      const auto fu = vector_field(p, EpidemicState::from_array(up));
      const auto fd = vector_field(p, EpidemicState::from_array(dn));
      for (int i = 0; i < 3; ++i) {
        const double fdiff = (fu[i] - fd[i]) / (2.0 * step);
        EXPECT_NEAR(J[i][j], fdiff, 1e-6 * std::max(1.0, std::abs(fdiff))) << i << "," << j;
      }
    }
  }
}

TEST(EpidemicState, ArrayRoundTripAndNorms) {
  const EpidemicState x{1.5, -2.0, 0.25};
  EXPECT_EQ(EpidemicState::from_array(x.as_array()), x);
  EXPECT_DOUBLE_EQ(x.N(), -0.25);
  EXPECT_DOUBLE_EQ(sup_norm(x.as_array()), 2.0);
  EXPECT_DOUBLE_EQ(sup_distance(x, {1.0, -2.0, 1.0}), 0.75);
}

TEST(Incidence, BilinearCollapse) {
  RawParams raw = set2();
  raw.k1 = raw.k2 = raw.k3 = 0.0;
  const ModelParams p(raw);
  EXPECT_DOUBLE_EQ(incidence(p, 10.0, 1.0), 1.0);
  EXPECT_DOUBLE_EQ(jacobian(p, {1.0, 1.0, 0.0})[0][1], -p.beta());
}

TEST(Incidence, PerCapitaForceMonotonicity) {
  // f(S, I) = b S / den increases in S and decreases in I.
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.01, 40.0);
  for (int k = 0; k < 500; ++k) {
    const ModelParams p(random_params(rng));
    const double S = u(rng);
    const double I = u(rng);
    auto f = [&](double s, double i) { return p.beta() * s / incidence_denominator(p, s, i); };
    const double d = 1e-6 * (1.0 + S + I);
    EXPECT_GT(f(S + d, I) - f(S - d, I), 0.0);
    if (p.k2() + p.k3() * S > 0.0) {
      EXPECT_LT(f(S, I + d) - f(S, I - d), 0.0);
    }
  }
}

TEST(VectorField, DiseaseFreePointIsStationary) {
  const ModelParams p(set2());
  const auto f = vector_field(p, {p.Lambda() / p.mu(), 0.0, 0.0});
  EXPECT_NEAR(f[0], 0.0, 1e-15);
  EXPECT_EQ(f[1], 0.0);
  EXPECT_EQ(f[2], 0.0);
}

TEST(VectorField, SusceptibleFaceInflow) {
  const ModelParams p(set2());
  EXPECT_DOUBLE_EQ(vector_field(p, {0.0, 3.0, 2.0})[0], p.Lambda() + p.lambda() * 2.0);
}

TEST(Jacobian, DiseaseFreeStructure) {
  const ModelParams p({0.8, 0.1, 0.1, 0.5, 0.5, 0.1, 0.02, 0.003});
  const Matrix3 J = jacobian(p, {8.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(J[0][0], -0.1);
  EXPECT_NEAR(J[1][1], 0.08 / 0.18 - 0.6, 1e-15);
  EXPECT_DOUBLE_EQ(J[2][2], -0.6);
  EXPECT_EQ(J[1][0], 0.0);
  EXPECT_EQ(J[2][0], 0.0);
  EXPECT_EQ(J[1][2], 0.0);
  EXPECT_DOUBLE_EQ(J[2][1], 0.5);
  EXPECT_DOUBLE_EQ(J[0][2], 0.5);
}
