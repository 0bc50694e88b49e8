#pragma once

#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <string>

#include "gaussmode/errors.hpp"

namespace gaussmode {

/// Which pair of spring constants is held fixed while the coupling
/// frequency omega varies.
///
/// FixedK      : lab-frame constants k_mu (charged particle in a uniform
///               magnetic field; the trap does not change with the field).
/// FixedKPrime : rotating-frame constants k'_mu = k_mu + omega^2 (rotating
///               anisotropic trap; the centrifugal term is absorbed).
enum class View { FixedK, FixedKPrime };

inline const char* view_name(View v) {
  return v == View::FixedK ? "fixedk" : "fixedkprime";
}

/// One parameter point. kx, ky are k_mu (FixedK) or k'_mu (FixedKPrime);
/// omega is the coupling (field/rotation half-) frequency; temperature >= 0,
/// all in dimensionless reference-frequency units.
struct ModelParams {
  View view = View::FixedK;
  double kx = 1.0;
  double ky = 1.0;
  double omega = 0.0;
  double temperature = 0.0;

  /// Rotating-frame constants k'_mu = k_mu + omega^2 (exact per view).
  double kprime_x() const {
    return view == View::FixedK ? kx + omega * omega : kx;
  }
  double kprime_y() const {
    return view == View::FixedK ? ky + omega * omega : ky;
  }
  /// Lab-frame (effective) constants k_mu = k'_mu - omega^2, computed
  /// without round-trip cancellation: in the FixedK view these are the
  /// stored inputs themselves.
  double keff_x() const {
    return view == View::FixedK ? kx : kx - omega * omega;
  }
  double keff_y() const {
    return view == View::FixedK ? ky : ky - omega * omega;
  }

  void validate() const {
    if (!(temperature >= 0.0)) throw SpecInvalid("temperature must be >= 0");
    if (!std::isfinite(kx) || !std::isfinite(ky) || !std::isfinite(omega))
      throw SpecInvalid("kx, ky, omega must be finite");
  }
};

/// View conversions (same physics, different fixed constants).
inline ModelParams to_fixed_kprime(const ModelParams& p) {
  if (p.view == View::FixedKPrime) return p;
  ModelParams q = p;
  q.view = View::FixedKPrime;
  q.kx = p.kx + p.omega * p.omega;
  q.ky = p.ky + p.omega * p.omega;
  return q;
}

inline ModelParams to_fixed_k(const ModelParams& p) {
  if (p.view == View::FixedK) return p;
  ModelParams q = p;
  q.view = View::FixedK;
  q.kx = p.kx - p.omega * p.omega;
  q.ky = p.ky - p.omega * p.omega;
  return q;
}

/// Dynamical-stability classification of a parameter point.
///
/// A        : positive definite Hamiltonian (both effective constants > 0).
/// B        : FixedK, both k_mu < 0, stabilized by a strong enough field.
/// B1       : FixedKPrime, both k'_mu > 0, rotation fast enough that both
///            effective constants turned negative.
/// B2       : FixedKPrime, one k'_mu < 0 (one-axis repulsive), stable in a
///            frequency window.
/// Landau   : lambda_- = 0 with lambda_+ > 0 (a free normal mode).
/// Unstable : some lambda_mu^2 < 0 or Delta^2 < 0.
/// Degenerate : Delta = 0 with omega != 0 (transformation does not exist).
enum class SectorTag { A, B, B1, B2, Landau, Unstable, Degenerate };

inline const char* sector_name(SectorTag t) {
  switch (t) {
    case SectorTag::A: return "A";
    case SectorTag::B: return "B";
    case SectorTag::B1: return "B1";
    case SectorTag::B2: return "B2";
    case SectorTag::Landau: return "Landau";
    case SectorTag::Unstable: return "Unstable";
    case SectorTag::Degenerate: return "Degenerate";
  }
  return "?";
}

/// Closed-form critical frequencies applicable to a (kx, ky, view) line.
/// Entries are absent when the corresponding boundary does not exist.
struct StabilityBoundaries {
  /// FixedK, both k_mu < 0: field strength above which the point is stable.
  std::optional<double> omega_c;
  /// FixedKPrime, both k'_mu > 0: lower edge of the instability window.
  std::optional<double> omega_c1;
  /// FixedKPrime, both k'_mu > 0: upper edge of the instability window.
  std::optional<double> omega_c2;
  /// FixedKPrime, mixed-sign k': lower edge of the stable window,
  /// sqrt of the positive constant.
  std::optional<double> b2_lower;
  /// FixedKPrime, mixed-sign k' with k'_+ + k'_- < 0: upper edge of the
  /// stable window (the Delta = 0 locus). Absent when the window is
  /// unbounded (k'_y >= -k'_x).
  std::optional<double> omega_c3;
};

/// All applicable critical frequencies for a (kx, ky) line in the given
/// view. Throws SpecInvalid for sign combinations with no boundary at all
/// (FixedK mixed signs, FixedKPrime both negative, FixedKPrime wedge closed).
inline StabilityBoundaries stability_boundaries(double kx, double ky, View view) {
  StabilityBoundaries b;
  if (view == View::FixedK) {
    if (kx < 0.0 && ky < 0.0) {
      b.omega_c = 0.5 * (std::sqrt(-kx) + std::sqrt(-ky));
      return b;
    }
    if (kx >= 0.0 && ky >= 0.0) return b;  // stable (or free-mode) for every omega
    throw SpecInvalid("FixedK with mixed-sign constants is unstable for every omega; no boundary defined");
  }
  // FixedKPrime
  if (kx > 0.0 && ky > 0.0) {
    b.omega_c1 = std::sqrt(std::min(kx, ky));
    b.omega_c2 = std::sqrt(std::max(kx, ky));
    return b;
  }
  if (kx <= 0.0 && ky <= 0.0)
    throw SpecInvalid("FixedKPrime with both constants <= 0 has no stable window; no boundary defined");
  // mixed signs: let kp be the positive one, kn the negative one
  const double kp = kx > 0.0 ? kx : ky;
  const double kn = kx > 0.0 ? ky : kx;
  if (kn <= -3.0 * kp)
    throw SpecInvalid("FixedKPrime one-axis-repulsive wedge is closed for k'_neg <= -3 k'_pos; no boundary defined");
  b.b2_lower = std::sqrt(kp);
  const double s = kp + kn;
  if (s < 0.0) {
    // Delta(omega) = 0 locus: omega^2 = (kp - kn)^2 / (8 |kp + kn|)
    b.omega_c3 = (kp - kn) / std::sqrt(8.0 * (-s));
  }
  return b;
}

/// Sector classification result: first-principles tag plus the applicable
/// closed-form boundaries as metadata, plus a flag marking points whose
/// omega lies within 1e-10 (relative) of a boundary.
struct SectorClass {
  SectorTag tag = SectorTag::Unstable;
  StabilityBoundaries boundaries;
  bool near_boundary = false;
};

namespace detail {
inline bool near_rel(double x, double y, double tol) {
  return std::abs(x - y) <= tol * std::max({1.0, std::abs(x), std::abs(y)});
}
}  // namespace detail

/// First-principles classification: evaluates Delta^2 and the normal-mode
/// frequencies and assigns the tag from their signs alone. The closed-form
/// boundaries are attached where defined; agreement between the two is a
/// tested invariant, not an input to the tag.
inline SectorClass classify_sector(const ModelParams& p) {
  p.validate();
  SectorClass out;
  try {
    out.boundaries = stability_boundaries(p.kx, p.ky, p.view);
  } catch (const SpecInvalid&) {
    // no boundary defined on this (kx, ky, view) line; metadata stays empty
  }

  const double om = std::abs(p.omega);
  const double kpx = p.kprime_x(), kpy = p.kprime_y();
  const double kex = p.keff_x(), key = p.keff_y();
  const double d = kpx - kpy;
  const double s = kpx + kpy;
  const double delta2 = 0.25 * d * d + 2.0 * om * om * s;

  const double btol = 1e-10;
  auto near_b = [&](const std::optional<double>& b) {
    return b && detail::near_rel(om, *b, btol);
  };
  out.near_boundary = near_b(out.boundaries.omega_c) || near_b(out.boundaries.omega_c1) ||
                      near_b(out.boundaries.omega_c2) || near_b(out.boundaries.b2_lower) ||
                      near_b(out.boundaries.omega_c3);

  if (delta2 < 0.0) {
    out.tag = SectorTag::Unstable;
    return out;
  }
  if (delta2 == 0.0 && om != 0.0) {
    out.tag = SectorTag::Degenerate;
    return out;
  }
  const double delta = std::sqrt(delta2);

  const double lp2 = 0.5 * s + om * om + delta;
  if (lp2 <= 0.0) {
    out.tag = SectorTag::Unstable;
    return out;
  }
  // lambda_-^2 via the product identity (exact effective constants):
  const double lm2 = (kex * key) / lp2;
  if (lm2 < 0.0) {
    out.tag = SectorTag::Unstable;
    return out;
  }
  if (lm2 == 0.0) {
    out.tag = SectorTag::Landau;
    return out;
  }
  if (kex > 0.0 && key > 0.0) {
    out.tag = SectorTag::A;
    return out;
  }
  // both effective constants negative (mixed signs would have lm2 < 0)
  if (p.view == View::FixedK) {
    out.tag = SectorTag::B;
  } else {
    out.tag = (p.kx > 0.0 && p.ky > 0.0) ? SectorTag::B1 : SectorTag::B2;
  }
  return out;
}

}  // namespace gaussmode
