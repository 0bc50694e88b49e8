#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "gaussmode/covariance.hpp"
#include "gaussmode/discord.hpp"
#include "gaussmode/errors.hpp"
#include "gaussmode/measures.hpp"
#include "gaussmode/model.hpp"
#include "gaussmode/spectral.hpp"

namespace gaussmode {

/// Everything computable about one parameter point. Fields stay NaN when
/// the point does not support them (unstable/degenerate points carry only
/// the sector; T > 0 outside the positive-definite sector carries only the
/// spectrum).
struct EntanglementReport {
  ModelParams params;
  SectorClass sector;
  bool valid = false;  ///< state-level quantities populated

  double lambda_plus = std::numeric_limits<double>::quiet_NaN();
  double lambda_minus = std::numeric_limits<double>::quiet_NaN();
  double occ_plus = std::numeric_limits<double>::quiet_NaN();   ///< f'_+
  double occ_minus = std::numeric_limits<double>::quiet_NaN();  ///< f'_-
  double f_x = std::numeric_limits<double>::quiet_NaN();
  double f_y = std::numeric_limits<double>::quiet_NaN();
  double f_tilde_plus = std::numeric_limits<double>::quiet_NaN();
  double f_tilde_minus = std::numeric_limits<double>::quiet_NaN();
  double entropy_x = std::numeric_limits<double>::quiet_NaN();
  double entropy_y = std::numeric_limits<double>::quiet_NaN();
  double negativity = std::numeric_limits<double>::quiet_NaN();
  double discord_x = std::numeric_limits<double>::quiet_NaN();
  double discord_y = std::numeric_limits<double>::quiet_NaN();
  double mean_lz = std::numeric_limits<double>::quiet_NaN();
  double mean_energy = std::numeric_limits<double>::quiet_NaN();
  double omega_bar = std::numeric_limits<double>::quiet_NaN();
  double omega_bar_g = std::numeric_limits<double>::quiet_NaN();
  bool entangled = false;
};

/// Full report at one point. Never throws for finite parameters: points
/// without a (thermal) state come back with valid = false and NaN fields.
inline EntanglementReport evaluate_report(const ModelParams& p) {
  EntanglementReport rep;
  rep.params = p;
  rep.sector = classify_sector(p);
  const auto [wbar, wbarg] = mean_frequencies(p);
  rep.omega_bar = wbar;
  rep.omega_bar_g = wbarg;

  NormalModeData m;
  try {
    m = diagonalize(p);
  } catch (const Error&) {
    return rep;  // unstable or degenerate: sector tag only
  }
  rep.lambda_plus = m.lambda_plus;
  rep.lambda_minus = m.lambda_minus;

  ThermalOccupations occ;
  try {
    occ = thermal_occupations(m, p.temperature);
  } catch (const ThermalUndefined&) {
    return rep;  // T > 0 outside the positive-definite sector
  }
  rep.occ_plus = occ.f_plus;
  rep.occ_minus = occ.f_minus;

  CovarianceMatrix cov;
  try {
    cov = build_covariance(m, occ);
  } catch (const Error&) {
    return rep;  // free decoupled mode: no normalizable vacuum
  }
  const auto [f_x, f_y] = local_symplectic_eigenvalues(cov);
  rep.f_x = f_x;
  rep.f_y = f_y;
  const auto [ftp, ftm] = ppt_eigenvalues_from_invariants(f_x, f_y, occ);
  rep.f_tilde_plus = ftp;
  rep.f_tilde_minus = ftm;
  rep.entropy_x = bosonic_entropy(f_x);
  rep.entropy_y = bosonic_entropy(f_y);
  rep.negativity = negativity(ftm);
  rep.entangled = is_entangled(f_x, f_y, occ);
  rep.mean_lz = mean_angular_momentum(cov);
  rep.mean_energy = m.lambda_plus * (occ.f_plus + 0.5) +
                    m.lambda_minus * (occ.f_minus + 0.5);
  rep.discord_x = gaussian_discord(f_x, f_y, occ, Mode::x);
  rep.discord_y = gaussian_discord(f_x, f_y, occ, Mode::y);
  rep.valid = true;
  return rep;
}

/// Result of the limit-temperature search.
struct LimitTemperature {
  double t_e = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  double residual = 0.0;  ///< |f~_-(t_e)|
  bool exact_zero = false;  ///< no T > 0 is entangled (vacuum already separable)
  bool multiple_windows = false;  ///< diagnostic: f~_- dipped negative above t_e
};

namespace detail {

/// f~_-(T) through the invariant route (the quantity whose root is T_E).
inline double f_tilde_minus_at(const NormalModeData& m, double temperature) {
  const ThermalOccupations occ = thermal_occupations(m, temperature);
  const CovarianceMatrix cov = build_covariance(m, occ);
  const auto [f_x, f_y] = local_symplectic_eigenvalues(cov);
  return ppt_eigenvalues_from_invariants(f_x, f_y, occ).second;
}

}  // namespace detail

/// Temperature at which entanglement disappears: the root of f~_-(T) = 0.
/// Bracketing + bisection (f~_- is continuous; the crossing is verified,
/// not assumed: 64 points above the root are scanned for a sign dip and
/// reported through multiple_windows). Points whose vacuum is already
/// separable (isotropy, omega = 0) return exact_zero instead of a root.
inline LimitTemperature limit_temperature(const ModelParams& p) {
  const NormalModeData m = diagonalize(p);
  if (!(m.lambda_minus > 0.0) || !m.positive_definite())
    throw ThermalUndefined("limit temperature defined only in the positive-definite sector");

  LimitTemperature out;
  auto g = [&](double t) { return detail::f_tilde_minus_at(m, t); };

  if (g(0.0) >= 0.0) {
    out.exact_zero = true;
    return out;
  }
  double lo = 1e-6 * m.lambda_minus;
  if (g(lo) >= 0.0) lo = 0.0;
  double hi = m.lambda_plus;
  bool bracketed = false;
  for (int i = 0; i < 60; ++i) {
    if (g(hi) > 0.0) {
      bracketed = true;
      break;
    }
    lo = hi;
    hi *= 2.0;
  }
  if (!bracketed)
    throw ConvergenceFailure("limit temperature: no sign change up to the doubling cap");
  out.bracket_lo = lo;
  out.bracket_hi = hi;

  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (g(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  out.t_e = 0.5 * (lo + hi);
  out.residual = std::abs(g(out.t_e));

  for (int i = 1; i <= 64; ++i) {
    const double t = out.t_e * (1.0 + 9.0 * i / 64.0);  // up to 10 * t_e
    if (g(t) < 0.0) {
      out.multiple_windows = true;
      break;
    }
  }
  return out;
}

/// Closed-form large-omega tail of the limit temperature (FixedK):
/// T_E ~ w_x w_y / (2 omega ln((w_x + w_y)/(w_x - w_y))), labels ordered so
/// that w_x > w_y. Returns 0 at isotropy (the log diverges).
inline double te_large_omega_asymptote(const ModelParams& p) {
  if (p.keff_x() <= 0.0 || p.keff_y() <= 0.0)
    throw SpecInvalid("limit-temperature tail needs positive effective constants");
  if (p.omega == 0.0) throw SpecInvalid("limit-temperature tail needs omega != 0");
  double wx = std::sqrt(p.keff_x());
  double wy = std::sqrt(p.keff_y());
  if (wy > wx) std::swap(wx, wy);
  if (wx == wy) return 0.0;
  return wx * wy /
         (2.0 * std::abs(p.omega) * std::log((wx + wy) / (wx - wy)));
}

/// Worker-count resolution: GAUSSMODE_THREADS caps (or disables, =1) the
/// hardware concurrency.
inline unsigned worker_count() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("GAUSSMODE_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1 && v < 1024) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

/// Deterministic parallel map: applies fn to indices [0, n) across workers,
/// results land in input order regardless of scheduling.
template <typename Fn>
inline void parallel_for_index(std::size_t n, Fn&& fn) {
  const unsigned workers = std::min<std::size_t>(worker_count(), n ? n : 1);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> next{0};
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  for (auto& t : pool) t.join();
}

/// Sweep axes. `lz` is an omega sweep whose purpose is the parametric
/// (mean_lz, entropy_x) curve; the schema is identical.
enum class SweepAxis { omega, temperature, ky_ratio, lz };

inline const char* axis_name(SweepAxis a) {
  switch (a) {
    case SweepAxis::omega: return "omega";
    case SweepAxis::temperature: return "temperature";
    case SweepAxis::ky_ratio: return "ky_ratio";
    case SweepAxis::lz: return "lz";
  }
  return "?";
}

/// One-axis sweep specification.
struct SweepSpec {
  SweepAxis axis = SweepAxis::omega;
  double lo = 0.0;
  double hi = 1.0;
  int samples = 2;
  bool log_spaced = false;
  ModelParams base;
  bool with_limit_temperature = false;

  void validate() const {
    if (!(lo < hi)) throw SpecInvalid("sweep range requires lo < hi");
    if (samples < 2) throw SpecInvalid("sweep requires at least 2 samples");
    if (log_spaced && !(lo > 0.0))
      throw SpecInvalid("log-spaced sweep requires lo > 0");
    if (axis == SweepAxis::temperature && lo < 0.0)
      throw SpecInvalid("temperature sweep requires lo >= 0");
  }
};

/// One sweep row: the axis value, the full report, and (optionally) the
/// limit temperature of the row's parameter point.
struct SweepRow {
  double axis_value = 0.0;
  EntanglementReport report;
  LimitTemperature te;
  bool has_te = false;
};

inline ModelParams params_for_axis_value(const SweepSpec& spec, double value) {
  ModelParams p = spec.base;
  switch (spec.axis) {
    case SweepAxis::omega:
    case SweepAxis::lz:
      p.omega = value;
      break;
    case SweepAxis::temperature:
      p.temperature = value;
      break;
    case SweepAxis::ky_ratio:
      p.ky = value * p.kx;
      break;
  }
  return p;
}

/// Runs the sweep. Unstable/degenerate rows carry the sector tag and NaNs;
/// the sweep itself never throws past validation. Rows are computed in
/// parallel and assembled in axis order.
inline std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  spec.validate();
  const int n = spec.samples;
  std::vector<SweepRow> rows(n);
  parallel_for_index(static_cast<std::size_t>(n), [&](std::size_t i) {
    double v;
    if (spec.log_spaced) {
      const double t = static_cast<double>(i) / (n - 1);
      v = spec.lo * std::pow(spec.hi / spec.lo, t);
    } else {
      v = spec.lo + (spec.hi - spec.lo) * static_cast<double>(i) / (n - 1);
    }
    SweepRow& row = rows[i];
    row.axis_value = v;
    const ModelParams p = params_for_axis_value(spec, v);
    row.report = evaluate_report(p);
    if (spec.with_limit_temperature) {
      try {
        row.te = limit_temperature(p);
        row.has_te = true;
      } catch (const Error&) {
        row.has_te = false;
      }
    }
  });
  return rows;
}

}  // namespace gaussmode
