#pragma once

// Correlator -> Negativity inversion per state family, OPH region
// classification, and separability-bound checks.
//
// Every inversion needs the caller to name the family: the same correlator
// value maps to different Negativities for different families when the
// measurement bases are fixed.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qclab/correlators.hpp"
#include "qclab/error.hpp"
#include "qclab/measurement.hpp"
#include "qclab/states.hpp"

namespace qclab {

enum class CorrelatorKind { MP, MI, PCC };
enum class OphRegion { Separable, BoundEntangled, NptEntangled };
enum class TargetFamily { NoisyBell, Werner, Oph };

inline std::string_view to_string(CorrelatorKind k) {
  switch (k) {
    case CorrelatorKind::MP: return "mp";
    case CorrelatorKind::MI: return "mi";
    case CorrelatorKind::PCC: return "pcc";
  }
  return "?";
}

inline std::string_view to_string(OphRegion r) {
  switch (r) {
    case OphRegion::Separable: return "separable";
    case OphRegion::BoundEntangled: return "bound";
    case OphRegion::NptEntangled: return "npt";
  }
  return "?";
}

inline std::string_view to_string(TargetFamily f) {
  switch (f) {
    case TargetFamily::NoisyBell: return "noisy_bell";
    case TargetFamily::Werner: return "werner";
    case TargetFamily::Oph: return "oph";
  }
  return "?";
}

struct InversionOptions {
  double tolerance = 1e-10;  // on the recovered parameter
  int max_iterations = 200;
  int monotone_samples = 64;
  double value_slack = 1e-10;  // how far a measured value may sit outside the attainable range
};

/// One (parameter, Negativity) pair consistent with a measured correlator.
struct Candidate {
  double param = 0.0;
  double negativity = 0.0;
};

struct CharacterizationResult {
  double negativity = 0.0;
  std::optional<double> aux_param;
  std::optional<OphRegion> region;
  bool ambiguous = false;
  std::vector<Candidate> candidates;
  std::string method;
};

// ---------------------------------------------------------------------------
// Forward relations: outcome tables written in terms of (a, N)

namespace detail {

inline std::vector<double> label_values(std::size_t d) {
  std::vector<double> v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = static_cast<double>(i);
  return v;
}

inline JointDistribution two_level_table(std::size_t d, double diag, double off) {
  std::vector<double> p(d * d, off);
  for (std::size_t i = 0; i < d; ++i) p[i * d + i] = diag;
  return JointDistribution::from_table(d, d, std::move(p), label_values(d), label_values(d));
}

}  // namespace detail

/// Noisy Bell Z⊗Z table; `n` is the signed Negativity expression, so the
/// table also covers separable members (n < 0).
inline JointDistribution noisy_bell_z_table(std::size_t d, double a, double n) {
  const double dd = static_cast<double>(d);
  return detail::two_level_table(d, (1.0 - a * (dd - 1.0) + 2.0 * n) / dd,
                                 a / dd - 2.0 * n / (dd * (dd - 1.0)));
}

/// Noisy Bell table in the (X, Xc) pairing: aδ_ij/d + (1−a)/d².
inline JointDistribution noisy_bell_x_table(std::size_t d, double a) {
  const double dd = static_cast<double>(d);
  return detail::two_level_table(d, a / dd + (1.0 - a) / (dd * dd), (1.0 - a) / (dd * dd));
}

/// Werner Z⊗Z table (identical in the same-basis X⊗X pairing).
inline JointDistribution werner_z_table(std::size_t d, double a) {
  const double dd = static_cast<double>(d);
  const double n = (1.0 - 2.0 * a) / dd;
  return detail::two_level_table(d, (1.0 - dd * n) / (dd * (dd + 1.0)), (1.0 + n) / (dd * dd - 1.0));
}

/// OPH table in the Z ⊗ ShiftedZ(k) basis: p(i,j) = <i, j⊕k|ρ|i, j⊕k>.
inline JointDistribution oph_table(double a, int k) {
  constexpr std::size_t d = kOphDim;
  std::vector<double> pz(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    pz[i * d + i] = 2.0 / 21.0;
    pz[i * d + (i + 1) % d] = a / 21.0;
    pz[((i + 1) % d) * d + i] = (5.0 - a) / 21.0;
  }
  std::vector<double> p(d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) p[i * d + j] = pz[i * d + mod_d(static_cast<long long>(j) + k, d)];
  return JointDistribution::from_table(d, d, std::move(p), detail::label_values(d),
                                       detail::label_values(d));
}

inline double correlator_value(const JointDistribution& jd, CorrelatorKind kind) {
  switch (kind) {
    case CorrelatorKind::MP: return mutual_predictability(jd);
    case CorrelatorKind::MI: return mutual_information(jd);
    case CorrelatorKind::PCC: {
      const auto r = pcc_distribution(jd);
      if (!r) throw Error(Errc::out_of_domain, "PCC undefined (zero marginal variance)");
      return *r;
    }
  }
  return 0.0;
}

inline double noisy_bell_x_correlator(CorrelatorKind kind, std::size_t d, double a) {
  return correlator_value(noisy_bell_x_table(d, a), kind);
}
inline double noisy_bell_z_correlator(CorrelatorKind kind, std::size_t d, double a, double n) {
  return correlator_value(noisy_bell_z_table(d, a, n), kind);
}
inline double werner_z_correlator(CorrelatorKind kind, std::size_t d, double a) {
  return correlator_value(werner_z_table(d, a), kind);
}
inline double oph_correlator(CorrelatorKind kind, double a, int k) {
  return correlator_value(oph_table(a, k), kind);
}

// ---------------------------------------------------------------------------
// Root finding

/// Samples f on `opts.monotone_samples` points over [lo, hi]; throws
/// not_monotone unless the samples are strictly increasing or decreasing.
/// Returns true for increasing.
inline bool require_strictly_monotone(const std::function<double(double)>& f, double lo, double hi,
                                      const InversionOptions& opts, std::string_view what) {
  const int n = std::max(2, opts.monotone_samples);
  double prev = f(lo);
  int sign = 0;
  for (int i = 1; i < n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    const double y = f(x);
    const int s = y > prev ? 1 : (y < prev ? -1 : 0);
    if (s == 0 || (sign != 0 && s != sign)) {
      throw Error(Errc::not_monotone, std::string(what) + " is not strictly monotone on [" +
                                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    sign = s;
    prev = y;
  }
  return sign > 0;
}

/// Solves f(x) = target on [lo, hi] for a monotone f (checked first).
inline double monotone_solve(const std::function<double(double)>& f, double lo, double hi,
                             double target, const InversionOptions& opts, std::string_view what) {
  const bool increasing = require_strictly_monotone(f, lo, hi, opts, what);
  const double f_lo = f(lo), f_hi = f(hi);
  const double y_min = std::min(f_lo, f_hi), y_max = std::max(f_lo, f_hi);
  if (target < y_min - opts.value_slack || target > y_max + opts.value_slack) {
    throw Error(Errc::bracket_failure, std::string(what) + ": value " + std::to_string(target) +
                                           " not bracketed by [" + std::to_string(y_min) + ", " +
                                           std::to_string(y_max) + "]");
  }
  if (target <= y_min) return increasing ? lo : hi;
  if (target >= y_max) return increasing ? hi : lo;
  for (int it = 0; it < opts.max_iterations && hi - lo > opts.tolerance; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if ((f(mid) < target) == increasing) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Golden-section search for the minimizer of a unimodal f on [lo, hi].
inline double locate_minimum(const std::function<double(double)>& f, double lo, double hi,
                             double tolerance = 1e-12) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  while (hi - lo > tolerance) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = f(x2);
    }
  }
  return 0.5 * (lo + hi);
}

namespace detail {

inline void require_dim(std::size_t d) {
  if (d < 2) throw Error(Errc::invalid_argument, "d must be >= 2");
}

inline double solve_or_domain(const std::function<double(double)>& f, double lo, double hi,
                              double target, const InversionOptions& opts, std::string_view what) {
  try {
    return monotone_solve(f, lo, hi, target, opts, what);
  } catch (const Error& e) {
    if (e.code() == Errc::bracket_failure) throw Error(Errc::out_of_domain, e.what());
    throw;
  }
}

inline void require_in_range(double v, double lo, double hi, double slack, std::string_view what) {
  if (!(v >= lo - slack && v <= hi + slack)) {
    throw Error(Errc::out_of_domain, std::string(what) + " = " + std::to_string(v) +
                                         " outside attainable range [" + std::to_string(lo) + ", " +
                                         std::to_string(hi) + "]");
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Noisy Bell

/// Two-step inversion: a from the X-basis correlator, then N from the
/// Z-basis correlator at that a.
inline CharacterizationResult invert_noisy_bell(double corr_x, double corr_z, CorrelatorKind kind,
                                                std::size_t d, const InversionOptions& opts = {}) {
  detail::require_dim(d);
  const double dd = static_cast<double>(d);

  double a = 0.0;
  if (kind == CorrelatorKind::MP) {
    detail::require_in_range(corr_x, 1.0 / dd, 1.0, opts.value_slack, "P_X");
    a = std::clamp((dd * corr_x - 1.0) / (dd - 1.0), 0.0, 1.0);
  } else {
    a = detail::solve_or_domain([&](double x) { return noisy_bell_x_correlator(kind, d, x); }, 0.0,
                                1.0, corr_x, opts, "noisy Bell X-basis correlator vs a");
  }

  // Attainable signed Negativity for this a, from colored noise B (lo) to
  // colored noise A (hi).
  const double lo = (a * dd - 1.0) / 2.0;
  const double hi = a * (dd - 1.0) / 2.0;
  double n = 0.0;
  if (kind == CorrelatorKind::MP) {
    const double s = (corr_z - 1.0 + a * (dd - 1.0)) / 2.0;
    detail::require_in_range(s, lo, hi, opts.value_slack, "signed Negativity from P_Z");
    n = std::max(0.0, std::min(s, hi));
  } else {
    auto f = [&](double s) { return noisy_bell_z_correlator(kind, d, a, s); };
    const double start = std::max(lo, 0.0);
    const double f_hi = f(hi);
    if (corr_z > f_hi + opts.value_slack) {
      throw Error(Errc::out_of_domain, "Z-basis correlator " + std::to_string(corr_z) +
                                           " above the attainable maximum " + std::to_string(f_hi));
    }
    if (hi - start <= opts.tolerance) {
      n = std::max(0.0, hi);
    } else if (corr_z <= f(start)) {
      if (lo > 0.0 && corr_z < f(lo) - opts.value_slack) {
        throw Error(Errc::out_of_domain, "Z-basis correlator below the attainable minimum");
      }
      if (kind == CorrelatorKind::PCC && corr_z < f(lo) - opts.value_slack) {
        throw Error(Errc::out_of_domain, "PCC_Z below the attainable minimum");
      }
      n = start;
    } else {
      n = monotone_solve(f, start, hi, corr_z, opts, "noisy Bell Z-basis correlator vs N");
    }
  }

  CharacterizationResult r;
  r.negativity = n;
  r.aux_param = a;
  r.candidates.push_back({a, n});
  r.method = "noisy_bell/" + std::string(to_string(kind)) + " (a from X,Xc; N from Z,Z)";
  return r;
}

// ---------------------------------------------------------------------------
// Werner

inline double werner_negativity(std::size_t d, double a) {
  return std::max(0.0, (1.0 - 2.0 * a) / static_cast<double>(d));
}

/// Where a ↦ I_Z(a) stops being injective. Values at or below `threshold`
/// have one preimage on each side of the interior minimum at `a_min`.
struct WernerMiBand {
  double a_min = 0.0;
  double value_min = 0.0;
  double threshold = 0.0;
  double value_at_0 = 0.0;
  double value_at_1 = 0.0;
};

inline WernerMiBand compute_werner_mi_band(std::size_t d) {
  auto f = [d](double a) { return werner_z_correlator(CorrelatorKind::MI, d, a); };
  WernerMiBand band;
  band.a_min = locate_minimum(f, 0.0, 1.0);
  band.value_min = f(band.a_min);
  band.value_at_0 = f(0.0);
  band.value_at_1 = f(1.0);
  if (band.a_min <= 1e-9 || band.a_min >= 1.0 - 1e-9) {
    throw Error(Errc::not_monotone, "Werner MI has no interior extremum for d=" + std::to_string(d));
  }
  band.threshold = std::min(band.value_at_0, band.value_at_1);
  return band;
}

/// Per-d cache; concurrent first calls may both compute, one result is kept.
inline WernerMiBand werner_mi_band(std::size_t d) {
  detail::require_dim(d);
  static std::mutex mu;
  static std::map<std::size_t, WernerMiBand> cache;
  {
    std::lock_guard lock(mu);
    if (auto it = cache.find(d); it != cache.end()) return it->second;
  }
  const WernerMiBand band = compute_werner_mi_band(d);
  std::lock_guard lock(mu);
  return cache.try_emplace(d, band).first->second;
}

inline CharacterizationResult invert_werner(double corr_z, CorrelatorKind kind, std::size_t d,
                                            const InversionOptions& opts = {}) {
  detail::require_dim(d);
  const double dd = static_cast<double>(d);
  auto f = [&](double a) { return werner_z_correlator(kind, d, a); };
  CharacterizationResult r;
  r.method = "werner/" + std::string(to_string(kind)) + " (Z,Z)";

  if (kind == CorrelatorKind::MP) {
    detail::require_in_range(corr_z, 0.0, 2.0 / (dd + 1.0), opts.value_slack, "P_Z");
    const double a = std::clamp(corr_z * (dd + 1.0) / 2.0, 0.0, 1.0);
    r.negativity = std::max(0.0, (1.0 - (dd + 1.0) * corr_z) / dd);
    r.aux_param = a;
    r.candidates.push_back({a, r.negativity});
    return r;
  }
  if (kind == CorrelatorKind::PCC) {
    const double a = detail::solve_or_domain(f, 0.0, 1.0, corr_z, opts, "Werner PCC_Z vs a");
    r.negativity = werner_negativity(d, a);
    r.aux_param = a;
    r.candidates.push_back({a, r.negativity});
    return r;
  }

  const WernerMiBand band = werner_mi_band(d);
  if (corr_z < band.value_min - opts.value_slack ||
      corr_z > std::max(band.value_at_0, band.value_at_1) + opts.value_slack) {
    throw Error(Errc::out_of_domain, "I_Z = " + std::to_string(corr_z) + " not attainable by a Werner state");
  }
  if (corr_z <= band.value_at_0 + opts.value_slack) {
    const double a = monotone_solve(f, 0.0, band.a_min, std::min(corr_z, band.value_at_0), opts,
                                    "Werner I_Z vs a (left branch)");
    r.candidates.push_back({a, werner_negativity(d, a)});
  }
  if (corr_z <= band.value_at_1 + opts.value_slack) {
    const double a = monotone_solve(f, band.a_min, 1.0, std::min(corr_z, band.value_at_1), opts,
                                    "Werner I_Z vs a (right branch)");
    r.candidates.push_back({a, werner_negativity(d, a)});
  }
  r.ambiguous = corr_z <= band.threshold + 1e-12;
  // The left branch is listed first and is the only one that reaches the
  // entangled region; it is reported as the primary answer.
  r.negativity = r.candidates.front().negativity;
  r.aux_param = r.candidates.front().param;
  return r;
}

// ---------------------------------------------------------------------------
// One-parameter Horodecki

/// Interval closures: separable [2,3], bound (3,4], NPT (4,5]. Values within
/// 1e-9 of a boundary go to the lower region.
inline OphRegion classify_oph(double a) {
  constexpr double eps = 1e-9;
  if (a <= 3.0 + eps) return OphRegion::Separable;
  if (a <= 4.0 + eps) return OphRegion::BoundEntangled;
  return OphRegion::NptEntangled;
}

/// Minimizer of the OPH mutual information over [2,5]; MI increases from here on.
inline double oph_mi_minimum() {
  static const double a_min = locate_minimum(
      [](double a) { return oph_correlator(CorrelatorKind::MI, a, 0); }, 2.0, 5.0);
  return a_min;
}

inline CharacterizationResult oph_from_correlator(double value, CorrelatorKind kind, int k = 1,
                                                  const InversionOptions& opts = {}) {
  const std::size_t shift = mod_d(k, kOphDim);
  double a = 0.0;
  switch (kind) {
    case CorrelatorKind::MP:
      if (shift == 0) {
        throw Error(Errc::unsupported, "MP in the unshifted basis is 2/7 for every a");
      }
      a = shift == 1 ? 7.0 * value : 5.0 - 7.0 * value;
      detail::require_in_range(a, 2.0, 5.0, 7.0 * opts.value_slack, "OPH parameter a");
      a = std::clamp(a, 2.0, 5.0);
      break;
    case CorrelatorKind::MI: {
      // MI is symmetric under a ↦ 5−a on the separable side; the increasing
      // branch is used, which leaves the region unchanged.
      const double a_min = oph_mi_minimum();
      auto f = [](double x) { return oph_correlator(CorrelatorKind::MI, x, 0); };
      a = detail::solve_or_domain(f, a_min, 5.0, value, opts, "OPH I_Z vs a");
      break;
    }
    case CorrelatorKind::PCC: {
      auto f = [k](double x) { return oph_correlator(CorrelatorKind::PCC, x, k); };
      a = detail::solve_or_domain(f, 2.0, 5.0, value, opts, "OPH PCC vs a");
      break;
    }
  }
  CharacterizationResult r;
  r.aux_param = a;
  r.region = classify_oph(a);
  r.negativity = *r.region == OphRegion::NptEntangled ? oph_negativity(a) : 0.0;
  r.candidates.push_back({a, r.negativity});
  r.method = "oph/" + std::string(to_string(kind)) + " (Z,shiftZ:" + std::to_string(shift) + ")";
  return r;
}

// ---------------------------------------------------------------------------
// Separability bounds

enum class BoundKind { SpenglerMP, MacconeMI, MacconePCC, StateDependent };
enum class Direction { Above, Below };

inline std::string_view to_string(BoundKind k) {
  switch (k) {
    case BoundKind::SpenglerMP: return "spengler_mp";
    case BoundKind::MacconeMI: return "maccone_mi";
    case BoundKind::MacconePCC: return "maccone_pcc";
    case BoundKind::StateDependent: return "state_dependent";
  }
  return "?";
}

/// Entanglement is certified when lhs lies beyond the threshold on the
/// `direction` side by more than 1e-12.
struct BoundVerdict {
  double lhs = 0.0;
  double threshold = 0.0;
  bool violated = false;
  BoundKind kind = BoundKind::SpenglerMP;
  Direction direction = Direction::Above;
};

inline constexpr double kBoundSlack = 1e-12;

inline BoundVerdict make_verdict(double lhs, double threshold, BoundKind kind,
                                 Direction dir = Direction::Above) {
  const bool violated = dir == Direction::Above ? lhs > threshold + kBoundSlack
                                                : lhs < threshold - kBoundSlack;
  return BoundVerdict{lhs, threshold, violated, kind, dir};
}

/// Σ P_i ≤ 1 + (m−1)/d over m mutually unbiased bases.
inline BoundVerdict bound_spengler(std::span<const double> mps, std::size_t d) {
  if (mps.empty()) throw Error(Errc::invalid_argument, "need at least one MP value");
  detail::require_dim(d);
  double sum = 0.0;
  for (double p : mps) sum += p;
  const double m = static_cast<double>(mps.size());
  return make_verdict(sum, 1.0 + (m - 1.0) / static_cast<double>(d), BoundKind::SpenglerMP);
}

/// I_AB + I_CD ≤ log2 d
inline BoundVerdict bound_maccone_mi(double i_ab, double i_cd, std::size_t d) {
  detail::require_dim(d);
  return make_verdict(i_ab + i_cd, std::log2(static_cast<double>(d)), BoundKind::MacconeMI);
}

/// |PCC_AB| + |PCC_CD| ≤ 1
inline BoundVerdict bound_maccone_pcc(double p_ab, double p_cd) {
  return make_verdict(std::abs(p_ab) + std::abs(p_cd), 1.0, BoundKind::MacconePCC);
}

namespace detail {

inline double require_aux(std::optional<double> aux) {
  if (!aux) throw Error(Errc::invalid_argument, "noisy Bell thresholds need the noise parameter a");
  if (!(*aux >= 0.0 && *aux <= 1.0)) throw Error(Errc::parameter_out_of_range, "a not in [0,1]");
  return *aux;
}

}  // namespace detail

/// Z-basis correlator value where the family's Negativity reaches 0 (for OPH:
/// the bound/NPT boundary a = 4 in the Z ⊗ ShiftedZ(k) basis).
inline double state_dependent_threshold(TargetFamily family, CorrelatorKind kind, std::size_t d,
                                        std::optional<double> aux = std::nullopt, int k = 1) {
  switch (family) {
    case TargetFamily::NoisyBell: {
      detail::require_dim(d);
      const double a = detail::require_aux(aux);
      const double dd = static_cast<double>(d);
      // Diagonal weight of the Z table at N = 0. For a > 1/d no member of the
      // family is separable and the linear continuation is used.
      const double p0 = 1.0 - a * (dd - 1.0);
      switch (kind) {
        case CorrelatorKind::MP: return p0;
        case CorrelatorKind::PCC: return (dd * p0 - 1.0) / (dd - 1.0);
        case CorrelatorKind::MI: {
          const double p = std::clamp(p0, 1.0 / dd, 1.0);
          return mutual_information(detail::two_level_table(d, p / dd, (1.0 - p) / (dd * (dd - 1.0))));
        }
      }
      break;
    }
    case TargetFamily::Werner:
      detail::require_dim(d);
      return werner_z_correlator(kind, d, 0.5);
    case TargetFamily::Oph:
      if (kind == CorrelatorKind::MP && mod_d(k, kOphDim) == 0) {
        throw Error(Errc::unsupported, "MP in the unshifted basis does not depend on a");
      }
      return oph_correlator(kind, 4.0, k);
  }
  throw Error(Errc::unsupported, "unsupported family/correlator combination");
}

/// Side of the threshold on which the family is entangled.
inline Direction entangled_side(TargetFamily family, CorrelatorKind kind, std::size_t d, int k = 1) {
  switch (family) {
    case TargetFamily::NoisyBell: return Direction::Above;
    case TargetFamily::Werner:
      // Werner correlations shrink toward the antisymmetric state, except MI,
      // which grows on the entangled branch.
      return kind == CorrelatorKind::MI ? Direction::Above : Direction::Below;
    case TargetFamily::Oph:
      return oph_correlator(kind, 5.0, k) > oph_correlator(kind, 4.0, k) ? Direction::Above
                                                                          : Direction::Below;
  }
  (void)d;
  return Direction::Above;
}

/// Threshold for the sum corr_Z + corr_X at N = 0.
inline double state_dependent_sum_threshold(TargetFamily family, CorrelatorKind kind, std::size_t d,
                                            std::optional<double> aux = std::nullopt) {
  switch (family) {
    case TargetFamily::NoisyBell: {
      const double a = detail::require_aux(aux);
      return state_dependent_threshold(family, kind, d, a) + noisy_bell_x_correlator(kind, d, a);
    }
    case TargetFamily::Werner:
      return 2.0 * state_dependent_threshold(family, kind, d);
    case TargetFamily::Oph:
      break;
  }
  throw Error(Errc::unsupported, "sum thresholds are defined for noisy Bell and Werner only");
}

/// State-dependent check of a Z-basis correlator. For Werner MI the verdict
/// presumes the entangled branch a ≤ a_min; invert_werner reports when a
/// measured value cannot tell the branches apart.
inline BoundVerdict state_dependent_verdict(TargetFamily family, CorrelatorKind kind, std::size_t d,
                                            double value, std::optional<double> aux = std::nullopt,
                                            int k = 1) {
  return make_verdict(value, state_dependent_threshold(family, kind, d, aux, k),
                      BoundKind::StateDependent, entangled_side(family, kind, d, k));
}

inline BoundVerdict state_dependent_sum_verdict(TargetFamily family, CorrelatorKind kind,
                                                std::size_t d, double sum,
                                                std::optional<double> aux = std::nullopt) {
  return make_verdict(sum, state_dependent_sum_threshold(family, kind, d, aux),
                      BoundKind::StateDependent, entangled_side(family, kind, d));
}

// ---------------------------------------------------------------------------
// PCC_Z + PCC_W = 1 + 2N/(d−1)

struct ConjectureTerms {
  double pcc_z = 0.0;
  double pcc_w = 0.0;
  double negativity = 0.0;
  double residual = 0.0;
};

inline ConjectureTerms conjecture_terms(const StateFamily& family) {
  if (!std::holds_alternative<PureSchmidt>(family) && !std::holds_alternative<CnaBell>(family)) {
    throw Error(Errc::unsupported, "the PCC_Z + PCC_W relation is established for pure_schmidt and cna_bell");
  }
  const auto rho = build_state(family);
  const std::size_t d = rho.dim_a();
  const auto z = make_observable(d, ObservableKind::Z);
  const auto w = make_observable(d, ObservableKind::W);
  const auto pz = pcc_observables(rho, z, z);
  const auto pw = pcc_observables(rho, w, w);
  if (!pz || !pw) {
    throw Error(Errc::out_of_domain, "PCC undefined for this state (Schmidt rank 1?)");
  }
  ConjectureTerms t;
  t.pcc_z = *pz;
  t.pcc_w = *pw;
  t.negativity = closed_form_negativity(family);
  t.residual = t.pcc_z + t.pcc_w - 1.0 - 2.0 * t.negativity / (static_cast<double>(d) - 1.0);
  return t;
}

inline double conjecture_residual(const StateFamily& family) { return conjecture_terms(family).residual; }

}  // namespace qclab
