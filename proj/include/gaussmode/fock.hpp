#pragma once

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gaussmode/errors.hpp"
#include "gaussmode/model.hpp"

namespace gaussmode {

/// Truncation for the number-basis brute-force route. Observables are
/// reported at n_max and accepted only if a smaller cutoff n_check agrees
/// within tol (Richardson-style convergence gate).
struct FockConfig {
  int n_max = 40;
  int n_check = 30;
  double tol = 1e-6;

  void validate() const {
    if (n_check < 2) throw SpecInvalid("fock cutoff must be at least 2");
    if (n_max <= n_check)
      throw SpecInvalid("fock convergence cutoffs must be strictly increasing");
  }
};

/// Dense two-mode density matrix in the |n_x, n_y> basis (index nx*(n+1)+ny).
struct FockState {
  Eigen::MatrixXd rho;
  int n_max = 0;
  double temperature = 0.0;
  double ground_energy = 0.0;
  double mean_energy = 0.0;
};

/// What the brute-force route can measure, for comparison against the
/// covariance-based closed forms.
struct FockObservables {
  double entropy_x = 0.0;
  double entropy_y = 0.0;
  double negativity = 0.0;
  double mean_lz = 0.0;
  double energy = 0.0;
  double ground_energy = 0.0;
};

namespace fockdetail {

inline int fock_index(int n_states, int nx, int ny) { return nx * n_states + ny; }

}  // namespace fockdetail

/// Hamiltonian in the truncated number basis, made real by the local phase
/// rotation b_y -> i b_y (a local unitary: reduced entropies, negativity and
/// <L_z> are unchanged). Per mode, (P^2 + k' Q^2)/2 expands to
/// (k'+1)/2 (n + 1/2) + (k'-1)/4 (b^2 + b+^2); the rotation flips the sign of
/// the y squeeze term and turns the coupling into -omega(b+_x b_y + b+_y b_x).
inline Eigen::MatrixXd build_hamiltonian_fock(const ModelParams& p, int n_max) {
  if (n_max < 2) throw SpecInvalid("fock cutoff must be at least 2");
  const double kpx = p.kprime_x();
  const double kpy = p.kprime_y();
  const double om = p.omega;
  const double gpx = 0.5 * (kpx + 1.0);
  const double gpy = 0.5 * (kpy + 1.0);
  const double cx = 0.25 * (kpx - 1.0);
  const double cy = 0.25 * (kpy - 1.0);
  const int n = n_max + 1;
  const int dim = n * n;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int nx = 0; nx < n; ++nx) {
    for (int ny = 0; ny < n; ++ny) {
      const int i = fockdetail::fock_index(n, nx, ny);
      h(i, i) += gpx * (nx + 0.5) + gpy * (ny + 0.5);
      if (nx + 2 < n) {
        const int j = fockdetail::fock_index(n, nx + 2, ny);
        const double el = cx * std::sqrt(double(nx + 1) * (nx + 2));
        h(j, i) += el;
        h(i, j) += el;
      }
      if (ny + 2 < n) {
        const int j = fockdetail::fock_index(n, nx, ny + 2);
        const double el = -cy * std::sqrt(double(ny + 1) * (ny + 2));
        h(j, i) += el;
        h(i, j) += el;
      }
      if (nx + 1 < n && ny >= 1) {
        const int j = fockdetail::fock_index(n, nx + 1, ny - 1);
        const double el = -om * std::sqrt(double(nx + 1) * ny);
        h(j, i) += el;
        h(i, j) += el;
      }
    }
  }
  return h;
}

/// Thermal (or, at T = 0, ground) state from full diagonalization.
/// Eigenstates with relative Boltzmann weight below 1e-20 are dropped from
/// the density-matrix assembly; they are beyond double precision anyway.
inline FockState thermal_state_fock(const ModelParams& p, double temperature,
                                    int n_max) {
  if (temperature < 0.0) throw SpecInvalid("temperature must be nonnegative");
  const Eigen::MatrixXd h = build_hamiltonian_fock(p, n_max);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success)
    throw ConvergenceFailure("fock hamiltonian diagonalization failed");
  const Eigen::VectorXd& e = es.eigenvalues();

  FockState st;
  st.n_max = n_max;
  st.temperature = temperature;
  st.ground_energy = e(0);
  if (temperature == 0.0) {
    const Eigen::VectorXd psi = es.eigenvectors().col(0);
    st.rho = psi * psi.transpose();
    st.mean_energy = e(0);
    return st;
  }
  const int dim = static_cast<int>(e.size());
  int kept = dim;
  Eigen::VectorXd w(dim);
  for (int k = 0; k < dim; ++k) {
    w(k) = std::exp(-(e(k) - e(0)) / temperature);
    if (w(k) < 1e-20) {
      kept = k;
      break;
    }
  }
  const double z = w.head(kept).sum();
  const auto v = es.eigenvectors().leftCols(kept);
  st.rho = v * (w.head(kept) / z).asDiagonal() * v.transpose();
  st.mean_energy = w.head(kept).dot(e.head(kept)) / z;
  return st;
}

inline FockState ground_state_fock(const ModelParams& p, int n_max) {
  return thermal_state_fock(p, 0.0, n_max);
}

namespace fockdetail {

inline double entropy_of_density(const Eigen::MatrixXd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double pr = es.eigenvalues()(i);
    if (pr < -1e-10) throw NonPhysical("reduced density matrix not positive");
    if (pr > 1e-14) s -= pr * std::log(pr);
  }
  return s;
}

}  // namespace fockdetail

/// Entropies of the two reduced modes, negativity from the partial transpose
/// (index swap |n_y><m_y| -> |m_y><n_y|), and <L_z>.
inline FockObservables entropy_negativity_fock(const FockState& st) {
  const int n = st.n_max + 1;
  const int dim = n * n;
  const Eigen::MatrixXd& rho = st.rho;

  FockObservables obs;
  obs.energy = st.mean_energy;
  obs.ground_energy = st.ground_energy;

  Eigen::MatrixXd rho_x = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd rho_y = Eigen::MatrixXd::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        rho_x(a, b) += rho(fockdetail::fock_index(n, a, c),
                           fockdetail::fock_index(n, b, c));
        rho_y(a, b) += rho(fockdetail::fock_index(n, c, a),
                           fockdetail::fock_index(n, c, b));
      }
  obs.entropy_x = fockdetail::entropy_of_density(rho_x);
  obs.entropy_y = fockdetail::entropy_of_density(rho_y);

  Eigen::MatrixXd pt(dim, dim);
  for (int nx = 0; nx < n; ++nx)
    for (int ny = 0; ny < n; ++ny)
      for (int mx = 0; mx < n; ++mx)
        for (int my = 0; my < n; ++my)
          pt(fockdetail::fock_index(n, nx, my),
             fockdetail::fock_index(n, mx, ny)) =
              rho(fockdetail::fock_index(n, nx, ny),
                  fockdetail::fock_index(n, mx, my));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pt, Eigen::EigenvaluesOnly);
  obs.negativity = 0.5 * (es.eigenvalues().cwiseAbs().sum() - 1.0);

  // <L_z> = Tr(rho Lz~); in the rotated frame Lz~ = b+_x b_y + b+_y b_x,
  // nonzero only on the (nx+1, ny-1) <-> (nx, ny) pairs.
  double lz = 0.0;
  for (int nx = 0; nx + 1 < n; ++nx)
    for (int ny = 1; ny < n; ++ny)
      lz += 2.0 * std::sqrt(double(nx + 1) * ny) *
            rho(fockdetail::fock_index(n, nx + 1, ny - 1),
                fockdetail::fock_index(n, nx, ny));
  obs.mean_lz = lz;
  return obs;
}

/// Full brute-force route at the requested cutoff plus the convergence gate:
/// both cutoffs are computed and must agree on every observable within
/// config.tol, else ConvergenceFailure.
inline FockObservables observables_fock(const ModelParams& p, double temperature,
                                        const FockConfig& config = FockConfig{}) {
  config.validate();
  const FockObservables small =
      entropy_negativity_fock(thermal_state_fock(p, temperature, config.n_check));
  const FockObservables big =
      entropy_negativity_fock(thermal_state_fock(p, temperature, config.n_max));
  double worst = 0.0;
  const double diffs[] = {
      std::abs(big.entropy_x - small.entropy_x),
      std::abs(big.entropy_y - small.entropy_y),
      std::abs(big.negativity - small.negativity),
      std::abs(big.mean_lz - small.mean_lz),
      std::abs(big.energy - small.energy),
      std::abs(big.ground_energy - small.ground_energy)};
  for (double d : diffs) worst = std::max(worst, d);
  if (worst > config.tol)
    throw ConvergenceFailure(
        "fock observables not converged between cutoffs " +
        std::to_string(config.n_check) + " and " + std::to_string(config.n_max) +
        " (max diff " + std::to_string(worst) + ")");
  return big;
}

/// One validation-panel entry: a parameter point whose gaussian closed forms
/// are to be checked against the brute-force route.
struct PanelPoint {
  ModelParams params;
};

/// Curated cross-validation panel: positive-definite-sector points with
/// lambda_minus >= 0.05 and temperatures low enough that the truncated basis
/// holds the thermal tails (verified convergent at cutoffs 30/40).
inline std::vector<PanelPoint> standard_panel() {
  auto pt = [](View v, double kx, double ky, double om, double t) {
    return PanelPoint{ModelParams{v, kx, ky, om, t}};
  };
  const View k = View::FixedK;
  const View kp = View::FixedKPrime;
  return {
      pt(k, 1.0, 0.25, 1.0, 0.0),    pt(k, 1.0, 0.25, 1.0, 0.2),
      pt(k, 1.0, 0.25, 1.0, 0.25),   pt(k, 1.0, 0.25, 0.5, 0.0),
      pt(k, 1.0, 0.5, 1.5, 0.2),     pt(k, 1.0, 0.5, 2.0, 0.08),
      pt(k, 1.0, 1.0, 0.5, 0.0),     pt(k, 1.0, 1.0, 0.5, 0.6),
      pt(k, 1.0, 0.25, -1.0, 0.2),   pt(k, 2.0, 0.5, 1.0, 0.0),
      pt(k, 1.0, 0.09, 0.5, 0.1),    pt(k, 1.0, 0.36, 1.2, 0.15),
      pt(k, 1.0, 0.64, 0.8, 0.3),    pt(k, 1.0, 4.0, 1.0, 0.5),
      pt(k, 1.0, 0.25, 0.0, 0.35),   pt(kp, 1.0, 0.5, 0.5, 0.0),
      pt(kp, 1.0, 0.5, 0.5, 0.4),    pt(kp, 1.0, 0.5, 0.6, 0.15),
      pt(kp, 2.0, 1.0, 0.9, 0.2),    pt(kp, 1.0, 1.0, 0.3, 0.7),
      pt(kp, 1.0, 0.25, 0.3, 0.2),   pt(kp, 1.0, 0.64, -0.4, 0.6),
      pt(kp, 1.0, 0.81, 0.4, 0.35),
  };
}

/// Standard panel plus slower points (stronger anisotropy, nearer band edges).
inline std::vector<PanelPoint> extended_panel() {
  auto panel = standard_panel();
  auto pt = [](View v, double kx, double ky, double om, double t) {
    return PanelPoint{ModelParams{v, kx, ky, om, t}};
  };
  panel.push_back(pt(View::FixedK, 3.0, 0.75, 1.5, 0.0));
  panel.push_back(pt(View::FixedKPrime, 1.0, 0.9, 0.85, 0.1));
  panel.push_back(pt(View::FixedK, 1.0, 0.16, 0.8, 0.05));
  panel.push_back(pt(View::FixedKPrime, 1.0, 0.36, 0.45, 0.15));
  return panel;
}

}  // namespace gaussmode
