#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "gaussmode/covariance.hpp"
#include "gaussmode/errors.hpp"
#include "gaussmode/measures.hpp"
#include "gaussmode/model.hpp"

namespace gaussmode {

/// The four symplectic invariants of a two-mode gaussian state that the
/// closed-form discord depends on, written for measurement on mode y
/// (conditional state on mode x). A and B are the squared doubled local
/// eigenvalues, C the off-block invariant with the grouping fixed by the
/// identity A + B + 2C = 4 sum_mu (f'_mu + 1/2)^2, D the squared doubled
/// global product.
struct DiscordInvariants {
  double inv_a = 1.0;
  double inv_b = 1.0;
  double inv_c = 0.0;
  double inv_d = 1.0;
  double e_min = 1.0;      ///< minimized conditional determinant (doubled units)
  bool branch_one = true;  ///< which closed-form branch attained e_min
};

namespace detail {

inline DiscordInvariants discord_invariants(double f_meas_other, double f_meas,
                                            const ThermalOccupations& occ) {
  DiscordInvariants iv;
  const double ax = f_meas_other + 0.5, ay = f_meas + 0.5;
  const double np = occ.f_plus + 0.5, nm = occ.f_minus + 0.5;
  iv.inv_a = 4.0 * ax * ax;
  iv.inv_b = 4.0 * ay * ay;
  iv.inv_c = 2.0 * ((np * np - ax * ax) + (nm * nm - ay * ay));
  iv.inv_d = 16.0 * np * np * nm * nm;

  // Pure global state: the optimal measurement leaves a pure conditional
  // state, so E_min = 1 exactly. The generic branch formula reaches that
  // value only through a fully cancelled discriminant, whose sqrt turns
  // roundoff into ~1e-8 noise that h() then amplifies.
  if (occ.f_plus == 0.0 && occ.f_minus == 0.0) {
    iv.e_min = 1.0;
    iv.branch_one = true;
    return iv;
  }

  const double a = iv.inv_a, b = iv.inv_b, c = iv.inv_c, d = iv.inv_d;
  const double gap = d - a * b;
  if (gap * gap <= (1.0 + b) * c * c * (a + d)) {
    iv.branch_one = true;
    const double disc = c * c + (b - 1.0) * (d - a);
    iv.e_min = (2.0 * c * c + (b - 1.0) * (d - a) +
                2.0 * std::abs(c) * std::sqrt(std::max(disc, 0.0))) /
               ((b - 1.0) * (b - 1.0));
  } else {
    iv.branch_one = false;
    const double rad = c * c * c * c + gap * gap - 2.0 * c * c * (a * b + d);
    iv.e_min = (a * b - c * c + d - std::sqrt(std::max(rad, 0.0))) / (2.0 * b);
  }
  return iv;
}

}  // namespace detail

/// Invariants for measuring the given mode of the state described by
/// (f_x, f_y, occupations).
inline DiscordInvariants discord_invariants(double f_x, double f_y,
                                            const ThermalOccupations& occ,
                                            Mode measured) {
  return measured == Mode::y ? detail::discord_invariants(f_x, f_y, occ)
                             : detail::discord_invariants(f_y, f_x, occ);
}

/// Closed-form gaussian discord with measurement on `measured`:
///   D^y = h(f_min) - h(f'_+) - h(f'_-) + h(f_y),
/// f_min = sqrt(E_min)/2 - 1/2 from the two-branch closed form of E_min.
/// Product states (measured mode pure) give exactly 0.
inline double gaussian_discord(double f_x, double f_y,
                               const ThermalOccupations& occ, Mode measured) {
  const double f_meas = measured == Mode::y ? f_y : f_x;
  if (f_meas < 1e-14) return 0.0;  // product state: nothing to gain by measuring
  const DiscordInvariants iv = discord_invariants(f_x, f_y, occ, measured);
  const double f_min = std::max(0.5 * std::sqrt(std::max(iv.e_min, 1.0)) - 0.5, 0.0);
  const double val = bosonic_entropy(f_min) - bosonic_entropy(occ.f_plus) -
                     bosonic_entropy(occ.f_minus) + bosonic_entropy(f_meas);
  return std::max(val, 0.0);
}

/// Closed-form gaussian discord straight from a covariance matrix.
inline double gaussian_discord(const CovarianceMatrix& cov,
                               const ThermalOccupations& occ, Mode measured) {
  const auto [f_x, f_y] = local_symplectic_eigenvalues(cov);
  return gaussian_discord(f_x, f_y, occ, measured);
}

/// Large-T tail of the discord: D^y ~ w^2 / (2 T sqrt(w^2 + w_x^2)) with
/// w_x the effective frequency of the unmeasured mode (w_x -> w_y for D^x);
/// requires the FixedK positive sector where the tail formula applies.
inline double discord_high_t_asymptote(const ModelParams& p, Mode measured) {
  if (p.temperature <= 0.0)
    throw SpecInvalid("high-temperature asymptote needs T > 0");
  const double k_other = measured == Mode::y ? p.keff_x() : p.keff_y();
  if (k_other <= 0.0)
    throw SpecInvalid("high-temperature asymptote needs a positive effective constant");
  const double om2 = p.omega * p.omega;
  return om2 / (2.0 * p.temperature * std::sqrt(om2 + k_other));
}

/// Grid specification for the minimization oracle.
struct DiscordGridSpec {
  double r_max = 10.0;  ///< largest finite squeezing scanned (beyond: analytic homodyne limb)
  int n_r = 81;         ///< coarse grid points in r
  int n_phi = 96;       ///< coarse grid points in phi over [0, pi)
  int zoom_rounds = 48; ///< local refinement rounds per axis
  int outer_seeds = 3;  ///< independent phi basins refined
};

/// Result of the minimization oracle.
struct DiscordOracleResult {
  double value = 0.0;        ///< minimized discord
  double f_min = 0.0;        ///< minimized conditional occupation
  double r_star = 0.0;       ///< infinity when the homodyne limb attains the min
  double phi_star = 0.0;
  bool homodyne = false;     ///< analytic r -> infinity limb attained the min
  bool non_convergent = false;  ///< finite-r limb pinned at r_max (should not happen)
};

/// Brute-force verification of the closed form: minimizes the conditional
/// entropy over all pure single-mode gaussian measurements, parametrized by
/// a rotated squeezed covariance sigma_m(r, phi). Conditional covariance of
/// the kept mode: A_blk - C_blk (B_blk + sigma_m)^{-1} C_blk^T.
///
/// Structure: nested 1-D minimization. The outer variable is phi; the inner
/// minimum over r removes the r = 0 plateau degeneracy (sigma_m is isotropic
/// there, so a 2-D zoom can silently collapse onto a wrong-phi shelf). The
/// inner scan covers finite r plus the exact r -> infinity homodyne limit
///   A_blk - (C p)(C p)^T / (p^T B_blk p),  p = (-sin phi, cos phi),
/// which branch-two states attain only asymptotically (the finite-r tail
/// converges like e^{-2r} but the matrix inversion loses digits beyond
/// r ~ 12, so the analytic limb is both faster and more accurate).
/// Deterministic tie-breaking: scans ascending, strict improvement only
/// (ties resolve to smaller r, then smaller phi).
inline DiscordOracleResult discord_minimization_oracle(
    const CovarianceMatrix& cov, Mode measured,
    const DiscordGridSpec& spec = {}) {
  const auto& sm = cov.second_moments;
  // kept-mode block, measured-mode block, cross block (orderings (Q,P))
  Eigen::Matrix2d a_blk, b_blk, c_blk;
  if (measured == Mode::y) {
    a_blk << sm(0, 0), 0.0, 0.0, sm(2, 2);
    b_blk << sm(1, 1), 0.0, 0.0, sm(3, 3);
    c_blk << 0.0, sm(0, 3), sm(1, 2), 0.0;
  } else {
    a_blk << sm(1, 1), 0.0, 0.0, sm(3, 3);
    b_blk << sm(0, 0), 0.0, 0.0, sm(2, 2);
    c_blk << 0.0, sm(1, 2), sm(0, 3), 0.0;
  }

  auto f_cond = [&](double r, double phi) {
    const double c = std::cos(phi), s = std::sin(phi);
    Eigen::Matrix2d rot;
    rot << c, -s, s, c;
    Eigen::Matrix2d sig = rot *
                          Eigen::Vector2d(0.5 * std::exp(2.0 * r),
                                          0.5 * std::exp(-2.0 * r))
                              .asDiagonal() *
                          rot.transpose();
    const Eigen::Matrix2d cond =
        a_blk - c_blk * (b_blk + sig).inverse() * c_blk.transpose();
    return std::sqrt(std::max(cond.determinant(), 0.0)) - 0.5;
  };
  auto f_homodyne = [&](double phi) {
    const Eigen::Vector2d p(-std::sin(phi), std::cos(phi));
    const Eigen::Vector2d cp = c_blk * p;
    const Eigen::Matrix2d cond =
        a_blk - cp * cp.transpose() / (p.dot(b_blk * p));
    return std::sqrt(std::max(cond.determinant(), 0.0)) - 0.5;
  };

  struct Inner {
    double value;
    double r;       // infinity for the homodyne limb
    bool homodyne;
    bool at_rmax;
  };
  auto inner_min = [&](double phi) {
    double lo = 0.0, hi = spec.r_max;
    double best = std::numeric_limits<double>::infinity(), best_r = 0.0;
    // coarse scan
    const int n = spec.n_r;
    for (int i = 0; i < n; ++i) {
      const double r = spec.r_max * i / (n - 1);
      const double v = f_cond(r, phi);
      if (v < best) {
        best = v;
        best_r = r;
      }
    }
    double dr = spec.r_max / (n - 1);
    lo = std::max(best_r - dr, 0.0);
    hi = std::min(best_r + dr, spec.r_max);
    for (int round = 0; round < spec.zoom_rounds; ++round) {
      constexpr int m = 13;
      double rbest = lo;
      double vbest = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double r = lo + (hi - lo) * i / (m - 1);
        const double v = f_cond(r, phi);
        if (v < vbest) {
          vbest = v;
          rbest = r;
        }
      }
      best = vbest;
      best_r = rbest;
      const double d = (hi - lo) / (m - 1);
      lo = std::max(rbest - d, 0.0);
      hi = std::min(rbest + d, spec.r_max);
      if (d < 1e-13) break;
    }
    Inner out{best, best_r, false, best_r >= spec.r_max * (1.0 - 1e-9)};
    const double vh = f_homodyne(phi);
    if (vh < out.value) out = Inner{vh, std::numeric_limits<double>::infinity(), true, false};
    return out;
  };

  const double pi = 3.14159265358979323846;
  const int np = spec.n_phi;
  std::vector<Inner> coarse(np);
  std::vector<double> phis(np);
  for (int j = 0; j < np; ++j) {
    phis[j] = pi * j / np;
    coarse[j] = inner_min(phis[j]);
  }
  // pick the best few non-adjacent phi basins (phi periodic mod pi)
  std::vector<int> order(np);
  for (int j = 0; j < np; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return coarse[a].value < coarse[b].value || (coarse[a].value == coarse[b].value && a < b);
  });
  std::vector<int> seeds;
  for (int j : order) {
    bool adjacent = false;
    for (int s : seeds) {
      const int diff = std::abs(j - s);
      if (std::min(diff, np - diff) <= 1) {
        adjacent = true;
        break;
      }
    }
    if (!adjacent) seeds.push_back(j);
    if (static_cast<int>(seeds.size()) >= spec.outer_seeds) break;
  }

  Inner best = coarse[order[0]];
  double best_phi = phis[order[0]];
  const double dp0 = pi / np;
  for (int s : seeds) {
    double lo = phis[s] - dp0, hi = phis[s] + dp0;
    for (int round = 0; round < spec.zoom_rounds; ++round) {
      constexpr int m = 9;
      double pbest = lo;
      Inner vbest{std::numeric_limits<double>::infinity(), 0.0, false, false};
      for (int i = 0; i < m; ++i) {
        const double phi = lo + (hi - lo) * i / (m - 1);
        const Inner v = inner_min(phi);
        if (v.value < vbest.value) {
          vbest = v;
          pbest = phi;
        }
      }
      if (vbest.value < best.value) {
        best = vbest;
        best_phi = pbest;
      }
      const double d = (hi - lo) / (m - 1);
      lo = pbest - d;
      hi = pbest + d;
      if (d < 1e-13) break;
    }
  }

  DiscordOracleResult res;
  res.f_min = best.value;
  res.r_star = best.r;
  res.phi_star = std::fmod(std::fmod(best_phi, pi) + pi, pi);
  res.homodyne = best.homodyne;
  res.non_convergent = !best.homodyne && best.at_rmax;
  return res;
}

/// Oracle discord value: oracle-minimized conditional entropy assembled into
/// the same expression as the closed form.
inline double discord_via_oracle(const CovarianceMatrix& cov,
                                 const ThermalOccupations& occ, Mode measured,
                                 const DiscordGridSpec& spec = {}) {
  const auto [f_x, f_y] = local_symplectic_eigenvalues(cov);
  const double f_meas = measured == Mode::y ? f_y : f_x;
  if (f_meas < 1e-14) return 0.0;
  const DiscordOracleResult r = discord_minimization_oracle(cov, measured, spec);
  const double val = bosonic_entropy(std::max(r.f_min, 0.0)) -
                     bosonic_entropy(occ.f_plus) - bosonic_entropy(occ.f_minus) +
                     bosonic_entropy(f_meas);
  return std::max(val, 0.0);
}

}  // namespace gaussmode
