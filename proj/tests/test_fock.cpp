#include <catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <cmath>

#include "test_support.hpp"

using namespace gaussmode;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
const ModelParams kReference{View::FixedK, 1.0, 0.25, 1.0, 0.0};
}

TEST_CASE("maximally entangled two-level state by hand", "[fock]") {
  // (|00> + |11>)/sqrt(2) embedded at cutoff 1: the measures must come out
  // at their textbook values.
  FockState st;
  st.n_max = 1;
  st.rho = Eigen::MatrixXd::Zero(4, 4);
  st.rho(0, 0) = st.rho(0, 3) = st.rho(3, 0) = st.rho(3, 3) = 0.5;
  const FockObservables obs = entropy_negativity_fock(st);
  CHECK_THAT(obs.entropy_x, WithinAbs(std::log(2.0), 1e-12));
  CHECK_THAT(obs.entropy_y, WithinAbs(std::log(2.0), 1e-12));
  CHECK_THAT(obs.negativity, WithinAbs(0.5, 1e-12));
  CHECK_THAT(obs.mean_lz, WithinAbs(0.0, 1e-15));
}

TEST_CASE("number-basis hamiltonian is diagonal for isotropic uncoupled input",
          "[fock]") {
  const Eigen::MatrixXd h =
      build_hamiltonian_fock(ModelParams{View::FixedK, 1.0, 1.0, 0.0, 0.0}, 6);
  const int n = 7;
  for (int nx = 0; nx < n; ++nx)
    for (int ny = 0; ny < n; ++ny) {
      const int i = fockdetail::fock_index(n, nx, ny);
      CHECK(h(i, i) == nx + ny + 1.0);
    }
  CHECK((h - Eigen::MatrixXd(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK_THROWS_AS(build_hamiltonian_fock(kReference, 1), SpecInvalid);
}

TEST_CASE("isotropic coupled ground state converges to the closed form",
          "[fock]") {
  const ModelParams p{View::FixedK, 1.0, 1.0, 0.5, 0.0};
  const FockState st = ground_state_fock(p, 20);
  // Half the sum of the closed-form mode frequencies.
  CHECK_THAT(st.ground_energy, WithinAbs(1.118033988749895, 1e-8));
  const auto [lp, lm] = mode_frequencies(p);
  CHECK_THAT(lp, WithinRel(1.618033988749895, 1e-14));
  CHECK_THAT(lm, WithinRel(0.6180339887498949, 1e-14));
}

TEST_CASE("brute-force route reproduces the closed forms at the reference point",
          "[fock]") {
  SECTION("vacuum") {
    const FockState st = ground_state_fock(kReference, 30);
    CHECK_THAT(st.ground_energy, WithinAbs(1.25, 1e-8));
    const FockObservables obs = entropy_negativity_fock(st);
    CHECK_THAT(obs.entropy_x, WithinAbs(0.096922687298481899, 1e-6));
    CHECK_THAT(obs.entropy_y, WithinAbs(0.096922687298481899, 1e-6));
    CHECK(std::abs(obs.entropy_x - obs.entropy_y) < 1e-9);
    CHECK_THAT(obs.negativity, WithinAbs(0.1610365985079725, 1e-6));
  }
  SECTION("thermal state") {
    const FockState st = thermal_state_fock(kReference, 0.2, 30);
    CHECK_THAT(st.rho.trace(), WithinAbs(1.0, 1e-10));
    CHECK((st.rho * st.rho).trace() <= 1.0 + 1e-12);
    CHECK_THAT(st.mean_energy, WithinAbs(1.3600483682961559, 1e-6));
    const FockObservables obs = entropy_negativity_fock(st);
    CHECK_THAT(obs.entropy_x, WithinAbs(0.6124337107399187, 1e-6));
    CHECK_THAT(obs.mean_lz, WithinAbs(0.69792849156966041, 1e-6));
    CHECK(obs.negativity < 1e-6);  // separable above the limit temperature
  }
  SECTION("reversed field flips the circulation") {
    ModelParams p = kReference;
    p.omega = -1.0;
    p.temperature = 0.2;
    const FockState st = thermal_state_fock(p, 0.2, 30);
    const FockObservables obs = entropy_negativity_fock(st);
    CHECK_THAT(obs.mean_lz, WithinAbs(-0.69792849156966041, 1e-6));
  }
}

TEST_CASE("tiny-temperature thermal state reduces to the ground state",
          "[fock]") {
  const ModelParams p{View::FixedK, 1.0, 1.0, 0.5, 0.0};
  const FockState cold = thermal_state_fock(p, 1e-4, 12);
  const FockState ground = ground_state_fock(p, 12);
  CHECK(std::abs(cold.mean_energy - ground.ground_energy) < 1e-10);
  CHECK((cold.rho - ground.rho).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("convergence gate", "[fock]") {
  // Far-apart cutoffs at a squeezed point disagree beyond tolerance.
  CHECK_THROWS_AS(observables_fock(kReference, 0.2, FockConfig{14, 4, 1e-6}),
                  ConvergenceFailure);
  // And the same point passes at production cutoffs (kept cheap here by
  // relaxing only the gate pair, not the tolerance).
  CHECK_NOTHROW(observables_fock(ModelParams{View::FixedK, 1.0, 1.0, 0.5, 0.0},
                                 0.0, FockConfig{16, 12, 1e-6}));
  CHECK_THROWS_AS((FockConfig{14, 1, 1e-6}.validate()), SpecInvalid);
  CHECK_THROWS_AS((FockConfig{10, 10, 1e-6}.validate()), SpecInvalid);
  CHECK_THROWS_AS((FockConfig{8, 12, 1e-6}.validate()), SpecInvalid);
  CHECK_THROWS_AS(thermal_state_fock(kReference, -0.1, 8), SpecInvalid);
}

TEST_CASE("validation panels are structurally sound", "[fock]") {
  const auto std_panel = standard_panel();
  const auto ext_panel = extended_panel();
  CHECK(std_panel.size() >= 20);
  CHECK(ext_panel.size() == std_panel.size() + 4);
  for (std::size_t i = 0; i < std_panel.size(); ++i) {
    CHECK(ext_panel[i].params.kx == std_panel[i].params.kx);
    CHECK(ext_panel[i].params.omega == std_panel[i].params.omega);
  }
  for (const PanelPoint& pt : ext_panel) {
    const SectorClass sc = classify_sector(pt.params);
    CHECK(sc.tag == SectorTag::A);
    const NormalModeData m = diagonalize(pt.params);
    CHECK(m.lambda_minus >= 0.05);
    CHECK(pt.params.temperature <= 1.0);
    CHECK(pt.params.temperature >= 0.0);
  }
}
