#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "gaussmode/errors.hpp"
#include "gaussmode/model.hpp"
#include "gaussmode/spectral.hpp"

namespace gaussmode {

/// Mean occupations of the two normal modes.
struct ThermalOccupations {
  double f_plus = 0.0;
  double f_minus = 0.0;
};

/// Bose occupation 1/(e^{lambda/T} - 1) with overflow/cancellation guards:
/// exact 0 beyond lambda/T > 700, first-order T/lambda - 1/2 below 1e-8.
inline double occupation(double lambda, double temperature) {
  if (temperature == 0.0) return 0.0;
  const double x = lambda / temperature;
  if (x > 700.0) return 0.0;
  if (x < 1e-8) return temperature / lambda - 0.5;
  return 1.0 / std::expm1(x);
}

/// Occupations of both modes. T > 0 requires the positive-definite sector
/// (elsewhere the Hamiltonian is unbounded below and no thermal state
/// exists); T = 0 is the vacuum of any stable point.
inline ThermalOccupations thermal_occupations(const NormalModeData& m,
                                              double temperature) {
  if (temperature < 0.0) throw SpecInvalid("temperature must be >= 0");
  if (temperature == 0.0) return {0.0, 0.0};
  if (!(m.lambda_minus > 0.0) || !m.positive_definite())
    throw ThermalUndefined(
        "thermal state undefined outside the positive-definite sector");
  return {occupation(m.lambda_plus, temperature),
          occupation(m.lambda_minus, temperature)};
}

/// 4x4 matrix of symmetrized second moments in the ordering
/// R = (Q_x, Q_y, P_x, P_y). For this model the only nonzero entries are
/// the four diagonal ones and the symmetric pair <Q_x P_y>, <Q_y P_x>.
struct CovarianceMatrix {
  Eigen::Matrix4d second_moments = Eigen::Matrix4d::Zero();

  static Eigen::Matrix4d metric() { return symplectic_metric(); }

  double qx2() const { return second_moments(0, 0); }
  double qy2() const { return second_moments(1, 1); }
  double px2() const { return second_moments(2, 2); }
  double py2() const { return second_moments(3, 3); }
  double lxy() const { return second_moments(0, 3); }  ///< <Q_x P_y>
  double lyx() const { return second_moments(1, 2); }  ///< <Q_y P_x>
};

/// Second moments of vacuum/thermal states from the normal-mode data.
/// Uses <Q'^2_mu> = (f'_mu + 1/2) sqrt(alpha_mu/beta_mu) and the momentum
/// counterpart, mapped back to lab operators through the inverse
/// transformation. The free minus mode (lambda_- = 0) uses the convention
/// <Q'^2> weight 1/(2 omega), <P'^2> weight 2 omega.
inline CovarianceMatrix build_covariance(const NormalModeData& m,
                                         const ThermalOccupations& occ) {
  double vq_p, vp_p, vq_m, vp_m;
  vq_p = std::sqrt(m.alpha_plus / m.beta_plus);
  vp_p = std::sqrt(m.beta_plus / m.alpha_plus);
  if (m.free_minus) {
    if (m.omega_abs == 0.0)
      throw NonPhysical("free decoupled mode has no normalizable vacuum");
    vq_m = 1.0 / (2.0 * m.omega_abs);
    vp_m = 2.0 * m.omega_abs;
  } else {
    vq_m = std::sqrt(m.alpha_minus / m.beta_minus);
    vp_m = std::sqrt(m.beta_minus / m.alpha_minus);
  }

  const double qp = (occ.f_plus + 0.5) * vq_p;
  const double qm = (occ.f_minus + 0.5) * vq_m;
  const double pp = (occ.f_plus + 0.5) * vp_p;
  const double pm = (occ.f_minus + 0.5) * vp_m;

  const double g = m.gamma, j = m.jcoef, k = m.kcoef;
  double qx2, qy2, px2, py2, lxy, lyx;
  if (m.decoupled) {
    const double qa = m.plus_is_x ? qp : qm;
    const double qb = m.plus_is_x ? qm : qp;
    const double pa = m.plus_is_x ? pp : pm;
    const double pb = m.plus_is_x ? pm : pp;
    qx2 = qa;
    qy2 = qb;
    px2 = pa;
    py2 = pb;
    lxy = lyx = 0.0;
  } else {
    qx2 = qp + k * k * pm;
    qy2 = qm + k * k * pp;
    px2 = j * j * pp + g * g * qm;
    py2 = j * j * pm + g * g * qp;
    lxy = m.omega_sign * (-g * qp + j * k * pm);
    lyx = m.omega_sign * (-g * qm + j * k * pp);
  }

  CovarianceMatrix cov;
  auto& sm = cov.second_moments;
  sm(0, 0) = qx2;
  sm(1, 1) = qy2;
  sm(2, 2) = px2;
  sm(3, 3) = py2;
  sm(0, 3) = sm(3, 0) = lxy;
  sm(1, 2) = sm(2, 1) = lyx;
  return cov;
}

/// Symplectic spectrum of a covariance matrix: the eigenvalues of
/// (second moments) x (metric) come in +-(i nu) pairs; returns the two
/// occupations nu - 1/2 with f_plus the smaller one (the '+' normal mode
/// has the larger frequency, hence the smaller occupation). For the output
/// of build_covariance this reproduces thermal_occupations exactly (a
/// tested round-trip invariant).
inline ThermalOccupations symplectic_spectrum(const CovarianceMatrix& cov) {
  const Eigen::Matrix4d prod = cov.second_moments * CovarianceMatrix::metric();
  Eigen::EigenSolver<Eigen::Matrix4d> es(prod, /*computeEigenvectors=*/false);
  std::array<double, 4> nus;
  for (int i = 0; i < 4; ++i) nus[i] = std::abs(es.eigenvalues()(i).imag());
  std::sort(nus.begin(), nus.end());
  // sorted ascending: [0]=[1]=nu_small(+ mode), [2]=[3]=nu_large(- mode)
  const double f_plus = 0.5 * (nus[0] + nus[1]) - 0.5;
  const double f_minus = 0.5 * (nus[2] + nus[3]) - 0.5;
  if (f_plus < -1e-10 || f_minus < -1e-10)
    throw NonPhysical("covariance matrix has symplectic eigenvalue below 1/2");
  return {f_plus, f_minus};
}

/// <L_z> = <Q_x P_y> - <Q_y P_x>, read from the symmetrized moments
/// (the two operators in each product commute, so no ordering term).
inline double mean_angular_momentum(const CovarianceMatrix& cov) {
  return cov.lxy() - cov.lyx();
}

/// Convenience: covariance of the vacuum/thermal state at a parameter point.
inline CovarianceMatrix covariance_at(const ModelParams& p) {
  const NormalModeData m = diagonalize(p);
  const ThermalOccupations occ = thermal_occupations(m, p.temperature);
  return build_covariance(m, occ);
}

}  // namespace gaussmode
