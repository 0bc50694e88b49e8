#include <catch_amalgamated.hpp>

#include <Eigen/Dense>

#include "test_support.hpp"

using namespace gaussmode;
using testsupport::random_stable_point;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const ModelParams kReference{View::FixedK, 1.0, 0.25, 1.0, 0.0};
}

TEST_CASE("normal-mode data at the reference point", "[spectral]") {
  const NormalModeData m = diagonalize(kReference);
  CHECK_THAT(m.delta, WithinRel(2.576941016011038, 1e-14));
  CHECK_THAT(m.lambda_plus, WithinRel(2.2807764064044149, 1e-14));
  CHECK_THAT(m.lambda_minus, WithinRel(0.21922359359558488, 1e-14));
  CHECK_THAT(m.lambda_plus + m.lambda_minus, WithinRel(2.5, 1e-14));
  CHECK_THAT(m.gamma, WithinRel(1.1009705080055188, 1e-14));
  CHECK_THAT(m.eta, WithinRel(0.6775203126187809, 1e-14));
  CHECK_THAT(m.alpha_plus, WithinRel(0.9608176875690325, 1e-14));
  CHECK_THAT(m.alpha_minus, WithinRel(0.18470368745276713, 1e-14));
  CHECK_THAT(m.beta_plus, WithinRel(5.414077075508968, 1e-14));
  CHECK_THAT(m.beta_minus, WithinRel(0.2601950434868926, 1e-14));
  CHECK(m.positive_definite());
  CHECK_FALSE(m.decoupled);
  CHECK_FALSE(m.free_minus);

  const auto [lp, lm] = mode_frequencies(kReference);
  CHECK(lp == m.lambda_plus);
  CHECK(lm == m.lambda_minus);
}

TEST_CASE("spectral identities hold across random stable points", "[spectral]") {
  std::mt19937_64 rng(20240811u);
  const Eigen::Matrix4d jm = symplectic_metric();
  for (int i = 0; i < 10000; ++i) {
    const ModelParams p = random_stable_point(rng);
    const NormalModeData m = diagonalize(p);

    // Product and sum rules for the squared mode frequencies (squares are
    // sign-free: the signed lambda_- convention does not enter here).
    const double lp2 = m.lambda_plus * m.lambda_plus;
    const double lm2 = m.lambda_minus * m.lambda_minus;
    const double prod = p.keff_x() * p.keff_y();
    const double sum = p.keff_x() + p.keff_y() + 4.0 * p.omega * p.omega;
    CHECK_THAT(lp2 * lm2, WithinRel(prod, 1e-10));
    CHECK_THAT(lp2 + lm2, WithinRel(sum, 1e-10));

    // Mixing-coefficient identity.
    CHECK_THAT(m.jcoef + m.gamma * m.kcoef, WithinAbs(1.0, 1e-12));

    // The mode transformation preserves the canonical commutators, and the
    // two directions invert each other.
    const Eigen::Matrix4d f = forward_transform(m);
    const Eigen::Matrix4d g = inverse_transform(m);
    CHECK(((f * jm * f.transpose()) - jm).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((f * g - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("decoupled limit: zero coupling", "[spectral]") {
  SECTION("x mode is the stiffer one") {
    const NormalModeData m =
        diagonalize(ModelParams{View::FixedK, 1.0, 0.25, 0.0, 0.0});
    CHECK(m.decoupled);
    CHECK(m.plus_is_x);
    CHECK(m.lambda_plus == 1.0);
    CHECK(m.lambda_minus == 0.5);
    CHECK(m.gamma == 0.0);
    CHECK(m.kcoef == 0.0);
    CHECK(m.jcoef == 1.0);
  }
  SECTION("y mode is the stiffer one: transforms swap the labels") {
    const NormalModeData m =
        diagonalize(ModelParams{View::FixedK, 0.25, 1.0, 0.0, 0.0});
    CHECK(m.decoupled);
    CHECK_FALSE(m.plus_is_x);
    CHECK(m.lambda_plus == 1.0);
    const Eigen::Matrix4d f = forward_transform(m);
    const Eigen::Matrix4d g = inverse_transform(m);
    CHECK((f * g - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() == 0.0);
    // Q'_+ must read the y coordinate.
    CHECK(f(0, 1) == 1.0);
    CHECK(f(0, 0) == 0.0);
  }
  SECTION("repulsive decoupled axis is rejected") {
    CHECK_THROWS_AS(diagonalize(ModelParams{View::FixedK, 1.0, -0.25, 0.0, 0.0}),
                    UnstableSpectrum);
  }
}

TEST_CASE("degenerate and unstable spectra are rejected", "[spectral]") {
  // At the repulsive-pair threshold the mode splitting vanishes identically.
  CHECK_THROWS_AS(diagonalize(ModelParams{View::FixedK, -1.0, -0.25, 0.75, 0.0}),
                  DegenerateTransform);
  CHECK_THROWS_AS(
      diagonalize(ModelParams{View::FixedKPrime, 1.0, 0.5, 0.8, 0.0}),
      UnstableSpectrum);
  CHECK_THROWS_AS(diagonalize(ModelParams{View::FixedK, -1.0, -0.25, 0.5, 0.0}),
                  UnstableSpectrum);
}

TEST_CASE("free-minus-mode limit has a linear-in-field frequency", "[spectral]") {
  const NormalModeData m =
      diagonalize(ModelParams{View::FixedK, 0.0, 0.0, 0.7, 0.0});
  CHECK(m.free_minus);
  CHECK_THAT(m.lambda_plus, WithinRel(1.4, 1e-14));
  CHECK(m.lambda_minus == 0.0);
  CHECK_THAT(m.beta_plus, WithinRel(1.96, 1e-14));
}

TEST_CASE("negative coupling uses the magnitude internally", "[spectral]") {
  const NormalModeData a =
      diagonalize(ModelParams{View::FixedK, 1.0, 0.25, 1.0, 0.0});
  const NormalModeData b =
      diagonalize(ModelParams{View::FixedK, 1.0, 0.25, -1.0, 0.0});
  CHECK(a.lambda_plus == b.lambda_plus);
  CHECK(a.lambda_minus == b.lambda_minus);
  CHECK(b.omega_sign == -1.0);
  CHECK(a.omega_sign == 1.0);
}

TEST_CASE("mode frequencies are continuous across the coupling crossover",
          "[spectral]") {
  // The closed forms must hand over smoothly to the decoupled branch.
  const ModelParams base{View::FixedK, 1.0, 0.25, 0.0, 0.0};
  const NormalModeData at_zero = diagonalize(base);
  ModelParams tiny = base;
  tiny.omega = 1e-9;
  const NormalModeData near_zero = diagonalize(tiny);
  CHECK_THAT(near_zero.lambda_plus, WithinRel(at_zero.lambda_plus, 1e-12));
  CHECK_THAT(near_zero.lambda_minus, WithinRel(at_zero.lambda_minus, 1e-12));
  CHECK_THAT(near_zero.alpha_plus, WithinAbs(at_zero.alpha_plus, 1e-8));
  CHECK_THAT(near_zero.beta_plus, WithinAbs(at_zero.beta_plus, 1e-8));
}
