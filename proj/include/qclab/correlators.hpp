#pragma once

// Mutual predictability, mutual information (bits) and Pearson correlation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>

#include "qclab/error.hpp"
#include "qclab/measurement.hpp"

namespace qclab {

namespace tol {
inline constexpr double variance_floor = 1e-14;
inline constexpr double zero_probability = 1e-15;
}  // namespace tol

/// Σ_i p(i, i⊕k)
inline double mutual_predictability(const JointDistribution& jd, int k = 0) {
  if (jd.dim_a() != jd.dim_b()) {
    throw Error(Errc::dimension_mismatch, "mutual predictability needs a square table");
  }
  const std::size_t d = jd.dim_a();
  double s = 0.0;
  for (std::size_t i = 0; i < d; ++i) s += jd(i, mod_d(static_cast<long long>(i) + k, d));
  return s;
}

namespace detail {

/// (1+x) ln(1+x) − x, accurate for small |x|.
inline double mi_kernel(double x) {
  if (std::abs(x) < 1e-2) {
    // Σ_{n≥2} (−x)^n / (n(n−1))
    double sum = 0.0, power = -x;
    for (int n = 2; n < 16; ++n) {
      power *= -x;
      sum += power / (n * (n - 1.0));
    }
    return sum;
  }
  return (1.0 + x) * std::log1p(x) - x;
}

}  // namespace detail

/// Σ p(i,j) log2(p(i,j) / (p_a(i) p_b(j))), with 0·log 0 = 0.
///
/// Evaluated as Σ q·[(1+x)ln(1+x) − x] with q = p_a p_b and p = q(1+x); the
/// dropped linear term Σ(p − q) vanishes, and every remaining term is
/// nonnegative, so near-independent tables do not lose their MI to rounding.
inline double mutual_information(const JointDistribution& jd) {
  double total = 0.0;
  for (double p : jd.table()) total += p;
  const auto pa = jd.marginal_a();
  const auto pb = jd.marginal_b();
  double mi = 0.0;
  for (std::size_t i = 0; i < jd.dim_a(); ++i)
    for (std::size_t j = 0; j < jd.dim_b(); ++j) {
      const double q = pa[i] * pb[j] / (total * total);
      if (q == 0.0) continue;
      const double p = jd(i, j) / total;
      mi += p < tol::zero_probability ? q : q * detail::mi_kernel((p - q) / q);
    }
  return std::max(0.0, mi / std::numbers::ln2);
}

/// Pearson correlation of the attached outcome values; nullopt when either
/// marginal variance is below 1e-14.
inline std::optional<double> pcc_distribution(const JointDistribution& jd) {
  const auto pa = jd.marginal_a();
  const auto pb = jd.marginal_b();
  const auto xa = jd.values_a();
  const auto xb = jd.values_b();
  double mean_a = 0.0, mean_b = 0.0, sq_a = 0.0, sq_b = 0.0, cross = 0.0;
  for (std::size_t i = 0; i < jd.dim_a(); ++i) {
    mean_a += pa[i] * xa[i];
    sq_a += pa[i] * xa[i] * xa[i];
  }
  for (std::size_t j = 0; j < jd.dim_b(); ++j) {
    mean_b += pb[j] * xb[j];
    sq_b += pb[j] * xb[j] * xb[j];
  }
  for (std::size_t i = 0; i < jd.dim_a(); ++i)
    for (std::size_t j = 0; j < jd.dim_b(); ++j) cross += jd(i, j) * xa[i] * xb[j];
  const double var_a = sq_a - mean_a * mean_a;
  const double var_b = sq_b - mean_b * mean_b;
  if (var_a < tol::variance_floor || var_b < tol::variance_floor) return std::nullopt;
  return (cross - mean_a * mean_b) / (std::sqrt(var_a) * std::sqrt(var_b));
}

/// PCC from operator expectations:
/// (<X⊗Y> − <X⊗1><1⊗Y>) / sqrt((<X²⊗1> − <X⊗1>²)(<1⊗Y²> − <1⊗Y>²))
inline std::optional<double> pcc_observables(const DensityMatrix& rho, const ComplexMatrix& op_a,
                                             const ComplexMatrix& op_b) {
  const auto id_a = identity_operator(rho.dim_a());
  const auto id_b = identity_operator(rho.dim_b());
  const double xy = expectation(rho, op_a, op_b);
  const double x1 = expectation(rho, op_a, id_b);
  const double y1 = expectation(rho, id_a, op_b);
  const double xx = expectation(rho, op_a * op_a, id_b);
  const double yy = expectation(rho, id_a, op_b * op_b);
  const double var_a = xx - x1 * x1;
  const double var_b = yy - y1 * y1;
  if (var_a < tol::variance_floor || var_b < tol::variance_floor) return std::nullopt;
  return (xy - x1 * y1) / (std::sqrt(var_a) * std::sqrt(var_b));
}

inline std::optional<double> pcc_observables(const DensityMatrix& rho, const Observable& op_a,
                                             const Observable& op_b) {
  return pcc_observables(rho, op_a.matrix, op_b.matrix);
}

struct CorrelatorReport {
  double mp = 0.0;
  double mi = 0.0;
  std::optional<double> pcc;
  std::string basis_a;
  std::string basis_b;
};

inline CorrelatorReport correlator_report(const JointDistribution& jd, const BasisLabel& a,
                                          const BasisLabel& b) {
  return CorrelatorReport{mutual_predictability(jd), mutual_information(jd), pcc_distribution(jd),
                          a.str(), b.str()};
}

/// Correlators of ρ in the basis pair (a, b). When either side is the W
/// eigenbasis, PCC goes through the operator form: W is degenerate, so its
/// spectral projectors rather than a single basis define the observable.
inline CorrelatorReport measure_correlators(const DensityMatrix& rho, const BasisLabel& a,
                                            const BasisLabel& b) {
  const auto basis_a = make_basis(rho.dim_a(), a);
  const auto basis_b = make_basis(rho.dim_b(), b);
  auto report = correlator_report(joint_distribution(rho, basis_a, basis_b), a, b);
  if (a.kind == BasisKind::WEigen || b.kind == BasisKind::WEigen) {
    auto op = [](const Basis& basis) {
      if (basis.label.kind == BasisKind::WEigen) return make_observable(basis.d, ObservableKind::W).matrix;
      ComplexMatrix m(basis.d, basis.d);
      for (std::size_t k = 0; k < basis.d; ++k)
        m = m + basis.values[k] * ComplexMatrix::outer(basis.vectors[k], basis.vectors[k]);
      return m;
    };
    report.pcc = pcc_observables(rho, op(basis_a), op(basis_b));
  }
  return report;
}

}  // namespace qclab
