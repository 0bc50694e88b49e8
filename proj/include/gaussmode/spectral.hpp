#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <utility>

#include "gaussmode/errors.hpp"
#include "gaussmode/model.hpp"

namespace gaussmode {

/// Everything the canonical normal-mode transformation produces.
///
/// The lab operators are recovered from the primed (normal-mode) ones by
///   Q_x = Q'_+ + K P'_-        Q_y = Q'_- + K P'_+
///   P_x = J P'_+ - gamma Q'_-  P_y = J P'_- - gamma Q'_+
/// with J = (2*Delta + d)/(4*Delta), K = omega/Delta, and J + gamma*K = 1
/// (which makes the map symplectic). The primed Hamiltonian is
///   H = sum_mu ( alpha_mu P'_mu^2 + beta_mu Q'_mu^2 ) / 2,
/// lambda_mu^2 = alpha_mu * beta_mu.
///
/// All entries are computed in cancellation-free forms: each of alpha_-,
/// beta_-, gamma picks the algebraic branch whose leading terms add instead
/// of subtract, and lambda_-^2 uses the exact product identity
/// lambda_+^2 lambda_-^2 = keff_x * keff_y with the effective constants
/// carried exactly from the view (never reconstructed as k' - omega^2 when
/// k is the stored input).
struct NormalModeData {
  double delta = 0.0;      ///< Delta >= 0, the transformation discriminant
  double gamma = 0.0;      ///< mixing coefficient of Eq-block Q' -> P
  double eta = 0.0;        ///< companion coefficient 2*gamma/(k'_x+k'_y)
  double jcoef = 1.0;      ///< J = 1/(1 + gamma*eta), exact rational form
  double kcoef = 0.0;      ///< K = eta/(1 + gamma*eta) = omega/Delta
  double alpha_plus = 1.0, alpha_minus = 1.0;
  double beta_plus = 0.0, beta_minus = 0.0;
  double lambda_plus = 0.0;   ///< > 0 for stable points
  double lambda_minus = 0.0;  ///< sign follows sign(alpha_minus); 0 => free mode
  double kpx = 0.0, kpy = 0.0;      ///< rotating-frame constants
  double kx_eff = 0.0, ky_eff = 0.0;///< lab-frame constants, exact per view
  double omega_abs = 0.0;
  double omega_sign = 1.0;
  bool decoupled = false;     ///< omega == 0 branch (no mixing)
  bool plus_is_x = true;      ///< decoupled only: which axis the '+' mode is
  bool free_minus = false;    ///< lambda_- == 0 (free normal mode)

  bool positive_definite() const {
    return alpha_plus > 0.0 && alpha_minus > 0.0 && beta_plus > 0.0 &&
           beta_minus > 0.0;
  }
};

namespace detail {

inline NormalModeData diagonalize_impl(double kpx, double kpy, double om_abs,
                                       double om_sign, double kx_eff, double ky_eff) {
  NormalModeData m;
  m.kpx = kpx;
  m.kpy = kpy;
  m.kx_eff = kx_eff;
  m.ky_eff = ky_eff;
  m.omega_abs = om_abs;
  m.omega_sign = om_sign;

  const double om = om_abs;
  const double d = kpx - kpy;
  const double s = kpx + kpy;
  const double delta2 = 0.25 * d * d + 2.0 * om * om * s;
  if (delta2 < 0.0) throw UnstableSpectrum("Delta^2 < 0: no real normal modes");
  const double delta = std::sqrt(delta2);
  m.delta = delta;

  if (om == 0.0) {
    // Decoupled oscillators; '+' is the larger constant for continuity with
    // the omega -> 0 limit of the coupled formulas.
    m.decoupled = true;
    m.plus_is_x = kpx >= kpy;
    const double hi = std::max(kpx, kpy);
    const double lo = std::min(kpx, kpy);
    if (hi < 0.0 || lo < 0.0)
      throw UnstableSpectrum("decoupled mode with negative spring constant");
    m.gamma = 0.0;
    m.eta = 0.0;
    m.jcoef = 1.0;
    m.kcoef = 0.0;
    m.alpha_plus = 1.0;
    m.alpha_minus = 1.0;
    m.beta_plus = hi;
    m.beta_minus = lo;
    m.lambda_plus = std::sqrt(hi);
    m.lambda_minus = std::sqrt(lo);
    m.free_minus = (lo == 0.0);
    return m;
  }

  if (delta == 0.0)
    throw DegenerateTransform("Delta = 0 with omega != 0: transformation does not exist");

  // u = 2D+d+4w^2 and t = 2D-d-4w^2 satisfy u*t = 16 w^2 ky_eff;
  // compute the additive member exactly, derive the other by division.
  double u, t;
  if (d + 4.0 * om * om >= 0.0) {
    u = 2.0 * delta + d + 4.0 * om * om;
    t = 16.0 * om * om * ky_eff / u;
  } else {
    t = 2.0 * delta - d - 4.0 * om * om;
    u = 16.0 * om * om * ky_eff / t;
  }
  // v = 2D-d+4w^2 and s2 = 2D+d-4w^2 satisfy v*s2 = 16 w^2 kx_eff.
  double v, s2;
  if (d - 4.0 * om * om <= 0.0) {
    v = 2.0 * delta - d + 4.0 * om * om;
    s2 = 16.0 * om * om * kx_eff / v;
  } else {
    s2 = 2.0 * delta + d - 4.0 * om * om;
    v = 16.0 * om * om * kx_eff / s2;
  }

  m.alpha_plus = u / (4.0 * delta);
  m.alpha_minus = s2 / (4.0 * delta);
  m.beta_plus = delta * v / (4.0 * om * om);
  m.beta_minus = delta * t / (4.0 * om * om);

  // gamma: pick the branch that adds; 2D-d and 2D+d cannot both be small
  // once Delta > 0.
  if (d <= 0.0) {
    m.gamma = (2.0 * delta - d) / (4.0 * om);
  } else {
    m.gamma = 2.0 * om * s / (2.0 * delta + d);
  }
  const double twodpd = 2.0 * delta + d;
  m.eta = twodpd != 0.0 ? 4.0 * om / twodpd
                        : std::numeric_limits<double>::infinity();
  m.jcoef = twodpd / (4.0 * delta);
  m.kcoef = om / delta;

  const double lp2 = 0.5 * s + om * om + delta;
  if (lp2 <= 0.0) throw UnstableSpectrum("lambda_+^2 <= 0");
  const double lm2 = kx_eff * ky_eff / lp2;
  if (lm2 < 0.0) throw UnstableSpectrum("lambda_-^2 < 0");
  m.lambda_plus = std::sqrt(lp2);
  if (lm2 == 0.0) {
    m.lambda_minus = 0.0;
    m.free_minus = true;
  } else {
    m.lambda_minus = (m.alpha_minus < 0.0 ? -1.0 : 1.0) * std::sqrt(lm2);
  }
  return m;
}

}  // namespace detail

/// Full normal-mode data at a parameter point. Throws DegenerateTransform
/// (Delta = 0, omega != 0) or UnstableSpectrum (Delta^2 < 0 or a negative
/// lambda^2).
inline NormalModeData diagonalize(const ModelParams& p) {
  p.validate();
  return detail::diagonalize_impl(p.kprime_x(), p.kprime_y(), std::abs(p.omega),
                                  p.omega >= 0.0 ? 1.0 : -1.0, p.keff_x(),
                                  p.keff_y());
}

/// Just (lambda_+, lambda_-) with sector-correct signs; cheaper than
/// diagonalize when only the spectrum is needed.
inline std::pair<double, double> mode_frequencies(const ModelParams& p) {
  const NormalModeData m = diagonalize(p);
  return {m.lambda_plus, m.lambda_minus};
}

/// 4x4 matrix F of the forward transformation R' = F R, with
/// R = (Q_x, Q_y, P_x, P_y) and R' = (Q'_+, Q'_-, P'_+, P'_-):
///   Q'_+ = J Q_x - K P_y, Q'_- = J Q_y - K P_x,
///   P'_+ = P_x + gamma Q_y, P'_- = P_y + gamma Q_x.
inline Eigen::Matrix4d forward_transform(const NormalModeData& m) {
  Eigen::Matrix4d f = Eigen::Matrix4d::Zero();
  f(0, 0) = m.jcoef;
  f(0, 3) = -m.kcoef;
  f(1, 1) = m.jcoef;
  f(1, 2) = -m.kcoef;
  f(2, 2) = 1.0;
  f(2, 1) = m.gamma;
  f(3, 3) = 1.0;
  f(3, 0) = m.gamma;
  if (m.decoupled && !m.plus_is_x) {
    f.row(0).swap(f.row(1));
    f.row(2).swap(f.row(3));
  }
  return f;
}

/// 4x4 matrix G of the inverse transformation R = G R' (see NormalModeData).
inline Eigen::Matrix4d inverse_transform(const NormalModeData& m) {
  Eigen::Matrix4d g = Eigen::Matrix4d::Zero();
  g(0, 0) = 1.0;
  g(0, 3) = m.kcoef;
  g(1, 1) = 1.0;
  g(1, 2) = m.kcoef;
  g(2, 2) = m.jcoef;
  g(2, 1) = -m.gamma;
  g(3, 3) = m.jcoef;
  g(3, 0) = -m.gamma;
  if (m.decoupled && !m.plus_is_x) {
    g.col(0).swap(g.col(1));
    g.col(2).swap(g.col(3));
  }
  return g;
}

/// The antisymmetric commutator metric in the (Q_x, Q_y, P_x, P_y) ordering:
/// [R_a, R_b] = i * metric(a, b).
inline Eigen::Matrix4d symplectic_metric() {
  Eigen::Matrix4d j = Eigen::Matrix4d::Zero();
  j(0, 2) = 1.0;
  j(1, 3) = 1.0;
  j(2, 0) = -1.0;
  j(3, 1) = -1.0;
  return j;
}

}  // namespace gaussmode
