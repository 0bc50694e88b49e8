#include <catch_amalgamated.hpp>

#include <cmath>

#include "test_support.hpp"

using namespace gaussmode;
using testsupport::random_stable_point;
using testsupport::uniform;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const ModelParams kReference{View::FixedK, 1.0, 0.25, 1.0, 0.0};
}

TEST_CASE("vacuum second moments at the reference point", "[covariance]") {
  const CovarianceMatrix cov = covariance_at(kReference);
  CHECK_THAT(cov.qx2(), WithinRel(0.3, 1e-14));
  CHECK_THAT(cov.qy2(), WithinRel(0.6, 1e-14));
  CHECK_THAT(cov.px2(), WithinRel(0.9, 1e-14));
  CHECK_THAT(cov.py2(), WithinRel(0.45, 1e-14));
  CHECK_THAT(cov.lxy(), WithinRel(-0.1, 1e-13));
  CHECK_THAT(cov.lyx(), WithinRel(-0.2, 1e-13));
  CHECK_THAT(mean_angular_momentum(cov), WithinRel(0.1, 1e-12));
  // Off-structure entries stay identically zero.
  CHECK(cov.second_moments(0, 1) == 0.0);
  CHECK(cov.second_moments(0, 2) == 0.0);
  CHECK(cov.second_moments(1, 3) == 0.0);
  CHECK(cov.second_moments(2, 3) == 0.0);
}

TEST_CASE("thermal moments and occupations at the reference point",
          "[covariance]") {
  ModelParams p = kReference;
  p.temperature = 0.2;
  const NormalModeData m = diagonalize(p);
  const ThermalOccupations occ = thermal_occupations(m, p.temperature);
  CHECK_THAT(occ.f_plus, WithinRel(1.1152232232715188e-05, 1e-13));
  CHECK_THAT(occ.f_minus, WithinRel(0.50187541743781006, 1e-14));

  const CovarianceMatrix cov = build_covariance(m, occ);
  CHECK_THAT(cov.qx2(), WithinRel(0.38970598927849553, 1e-14));
  CHECK_THAT(cov.qy2(), WithinRel(1.0228519050470604, 1e-14));
  CHECK_THAT(cov.px2(), WithinRel(1.4125578943255557, 1e-14));
  CHECK_THAT(cov.py2(), WithinRel(0.6454189655402607, 1e-14));
  CHECK_THAT(cov.lxy(), WithinRel(0.03239128790054788, 1e-12));
  CHECK_THAT(cov.lyx(), WithinRel(-0.6655372036691125, 1e-13));
  CHECK_THAT(mean_angular_momentum(cov), WithinRel(0.69792849156966041, 1e-13));
}

TEST_CASE("occupation guards and limits", "[covariance]") {
  CHECK(occupation(1.0, 0.0) == 0.0);
  CHECK(occupation(1e-3, 0.0) == 0.0);
  // Deep quantum regime underflows to exactly zero instead of junk.
  CHECK(occupation(701.0, 1.0) == 0.0);
  CHECK(occupation(1.0, 1.0 / 800.0) == 0.0);
  // Classical limit switches to the series T/lambda - 1/2 smoothly.
  const double t = 1.0;
  const double lam = 1e-9;
  CHECK_THAT(occupation(lam, t), WithinRel(t / lam - 0.5, 1e-12));
  const double lam2 = 2e-8;  // just above the switch: closed form
  CHECK_THAT(occupation(lam2, t), WithinRel(t / lam2 - 0.5, 1e-7));
  // Garden-variety value against the defining expression.
  CHECK_THAT(occupation(1.0, 0.5), WithinRel(1.0 / std::expm1(2.0), 1e-15));
  CHECK_THROWS_AS(thermal_occupations(diagonalize(kReference), -0.1),
                  SpecInvalid);
}

TEST_CASE("thermal states exist only in the positive-definite sector",
          "[covariance]") {
  // Both constants negative, field above threshold: stable but indefinite.
  const ModelParams repulsive{View::FixedK, -1.0, -0.25, 1.0, 0.0};
  const NormalModeData m = diagonalize(repulsive);
  CHECK(m.lambda_minus < 0.0);
  CHECK_FALSE(m.positive_definite());
  const ThermalOccupations vac = thermal_occupations(m, 0.0);
  CHECK(vac.f_plus == 0.0);
  CHECK(vac.f_minus == 0.0);
  CHECK_NOTHROW(build_covariance(m, vac));
  CHECK_THROWS_AS(thermal_occupations(m, 0.1), ThermalUndefined);
}

TEST_CASE("symplectic spectrum round-trips the occupations", "[covariance]") {
  std::mt19937_64 rng(20240812u);
  int checked = 0;
  for (int i = 0; i < 400; ++i) {
    ModelParams p = random_stable_point(rng);
    const NormalModeData m = diagonalize(p);
    // Thermal draws only where a thermal state exists.
    if (m.positive_definite() && m.lambda_minus > 0.0 && uniform(rng, 0.0, 1.0) < 0.5)
      p.temperature = uniform(rng, 0.0, 1.0);
    const ThermalOccupations occ = thermal_occupations(m, p.temperature);
    const CovarianceMatrix cov = build_covariance(m, occ);
    const ThermalOccupations back = symplectic_spectrum(cov);
    const double scale =
        std::max({1.0, std::abs(occ.f_plus), std::abs(occ.f_minus)});
    CHECK(std::abs(back.f_plus - occ.f_plus) <= 1e-10 * scale);
    CHECK(std::abs(back.f_minus - std::abs(occ.f_minus)) <= 1e-10 * scale);
    ++checked;
  }
  CHECK(checked == 400);
}

TEST_CASE("covariance sign structure follows the coupling sign",
          "[covariance]") {
  ModelParams p = kReference;
  p.temperature = 0.3;
  const CovarianceMatrix plus = covariance_at(p);
  p.omega = -p.omega;
  const CovarianceMatrix minus = covariance_at(p);
  // Diagonal moments are even in the coupling; the mixed ones are odd.
  CHECK(plus.qx2() == minus.qx2());
  CHECK(plus.py2() == minus.py2());
  CHECK(plus.lxy() == -minus.lxy());
  CHECK(plus.lyx() == -minus.lyx());
  CHECK_THAT(mean_angular_momentum(minus),
             WithinRel(-mean_angular_momentum(plus), 1e-15));
}

TEST_CASE("decoupled covariance is the product of two oscillators",
          "[covariance]") {
  const CovarianceMatrix cov =
      covariance_at(ModelParams{View::FixedK, 1.0, 0.25, 0.0, 0.0});
  CHECK(cov.qx2() == 0.5);
  CHECK(cov.px2() == 0.5);
  CHECK(cov.qy2() == 1.0);
  CHECK(cov.py2() == 0.25);
  CHECK(cov.lxy() == 0.0);
  CHECK(cov.lyx() == 0.0);
}

TEST_CASE("free minus mode: field-only confinement", "[covariance]") {
  const ModelParams landau{View::FixedK, 0.0, 0.0, 0.7, 0.0};
  const NormalModeData m = diagonalize(landau);
  REQUIRE(m.free_minus);
  const CovarianceMatrix cov = build_covariance(m, {0.0, 0.0});
  // The minus normal mode carries weight 1/(2 omega) in position and
  // 2 omega in momentum; spot-check through the lab-frame entries.
  const double vq_m = 1.0 / 1.4;
  const double vp_m = 1.4;
  const double qp = 0.5 * std::sqrt(m.alpha_plus / m.beta_plus);
  const double pp = 0.5 * std::sqrt(m.beta_plus / m.alpha_plus);
  CHECK_THAT(cov.qx2(),
             WithinRel(qp + m.kcoef * m.kcoef * 0.5 * vp_m, 1e-14));
  CHECK_THAT(cov.qy2(),
             WithinRel(0.5 * vq_m + m.kcoef * m.kcoef * pp, 1e-14));
  // No thermal state: the free mode is unbounded.
  CHECK_THROWS_AS(thermal_occupations(m, 0.1), ThermalUndefined);
}
