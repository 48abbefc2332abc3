#pragma once

// Local measurement bases, observables and joint outcome statistics.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qclab/error.hpp"
#include "qclab/linalg.hpp"

namespace qclab {

namespace tol {
inline constexpr double orthonormal = 1e-12;
inline constexpr double probability_clamp = 1e-12;
inline constexpr double probability_sum = 1e-10;
inline constexpr double imaginary = 1e-10;
inline constexpr double zero_sum = 1e-12;
}  // namespace tol

/// Z: computational basis. X: Fourier basis (1/√d)Σ_j ω^{jk}|j>.
/// XConj: the complex-conjugate Fourier basis, i.e. X with outcome k relabelled
/// to −k. ShiftedZ(k): computational vectors with outcome j read off |j⊕k>.
/// WEigen: eigenbasis of the all-ones-off-diagonal W operator.
enum class BasisKind { Z, X, XConj, ShiftedZ, WEigen };

struct BasisLabel {
  BasisKind kind = BasisKind::Z;
  int shift = 0;

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;

  std::string str() const {
    switch (kind) {
      case BasisKind::Z: return "Z";
      case BasisKind::X: return "X";
      case BasisKind::XConj: return "Xc";
      case BasisKind::ShiftedZ: return "shiftZ:" + std::to_string(shift);
      case BasisKind::WEigen: return "W";
    }
    return "?";
  }
};

inline std::size_t mod_d(long long v, std::size_t d) {
  const auto dd = static_cast<long long>(d);
  return static_cast<std::size_t>(((v % dd) + dd) % dd);
}

struct Basis {
  std::size_t d = 0;
  std::vector<std::vector<complex>> vectors;
  std::vector<double> values;
  BasisLabel label;
};

namespace detail {

inline std::vector<complex> fourier_vector(std::size_t d, std::size_t k, double sign) {
  std::vector<complex> v(d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    // reduce jk mod d before taking the phase so large d keeps full accuracy
    const double phase = sign * 2.0 * std::numbers::pi * static_cast<double>((j * k) % d) /
                         static_cast<double>(d);
    v[j] = std::polar(norm, phase);
  }
  return v;
}

}  // namespace detail

inline Basis make_basis(std::size_t d, BasisLabel label) {
  if (d < 2) throw Error(Errc::invalid_argument, "basis dimension must be >= 2");
  Basis b;
  b.d = d;
  b.label = label;
  if (label.kind == BasisKind::ShiftedZ) b.label.shift = static_cast<int>(mod_d(label.shift, d));
  b.vectors.reserve(d);
  b.values.reserve(d);
  for (std::size_t k = 0; k < d; ++k) {
    switch (label.kind) {
      case BasisKind::Z:
      case BasisKind::ShiftedZ: {
        std::vector<complex> v(d, complex{0.0, 0.0});
        const std::size_t target =
            label.kind == BasisKind::Z ? k : mod_d(static_cast<long long>(k) + label.shift, d);
        v[target] = 1.0;
        b.vectors.push_back(std::move(v));
        b.values.push_back(static_cast<double>(k));
        break;
      }
      case BasisKind::X:
        b.vectors.push_back(detail::fourier_vector(d, k, +1.0));
        b.values.push_back(static_cast<double>(k));
        break;
      case BasisKind::XConj:
        b.vectors.push_back(detail::fourier_vector(d, k, -1.0));
        b.values.push_back(static_cast<double>(k));
        break;
      case BasisKind::WEigen:
        b.vectors.push_back(detail::fourier_vector(d, k, +1.0));
        b.values.push_back(k == 0 ? static_cast<double>(d) - 1.0 : -1.0);
        break;
    }
  }
  return b;
}

inline complex inner(std::span<const complex> u, std::span<const complex> v) {
  complex s{0.0, 0.0};
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

/// Worst |<v_i|v_j> − δ_ij| over the basis.
inline double orthonormality_error(const Basis& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < b.d; ++i)
    for (std::size_t j = 0; j < b.d; ++j) {
      const complex ip = inner(b.vectors[i], b.vectors[j]);
      worst = std::max(worst, std::abs(ip - complex{i == j ? 1.0 : 0.0, 0.0}));
    }
  return worst;
}

enum class ObservableKind { Z, W };

struct Observable {
  std::size_t d = 0;
  ComplexMatrix matrix;
  ObservableKind kind = ObservableKind::Z;
};

/// Z = diag(e_j) with distinct zero-sum e_j (default j − (d−1)/2);
/// W = Σ_{i≠j} |j><i|, zeros on the diagonal and ones elsewhere.
inline Observable make_observable(std::size_t d, ObservableKind kind,
                                  std::optional<std::vector<double>> zvalues = std::nullopt) {
  if (d < 2) throw Error(Errc::invalid_argument, "observable dimension must be >= 2");
  Observable o;
  o.d = d;
  o.kind = kind;
  if (kind == ObservableKind::W) {
    o.matrix = ComplexMatrix(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (i != j) o.matrix(i, j) = 1.0;
    return o;
  }
  std::vector<double> e;
  if (zvalues) {
    e = *zvalues;
    if (e.size() != d) throw Error(Errc::dimension_mismatch, "zvalues length != d");
    double sum = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      sum += e[i];
      for (std::size_t j = i + 1; j < d; ++j)
        if (e[i] == e[j]) throw Error(Errc::invalid_argument, "zvalues must be distinct");
    }
    if (std::abs(sum) > tol::zero_sum) throw Error(Errc::invalid_argument, "zvalues must sum to 0");
  } else {
    for (std::size_t j = 0; j < d; ++j)
      e.push_back(static_cast<double>(j) - (static_cast<double>(d) - 1.0) / 2.0);
  }
  o.matrix = ComplexMatrix::diagonal(e);
  return o;
}

/// dA×dB outcome table with marginals and the outcome values fed to PCC.
class JointDistribution {
 public:
  /// Validates and normalizes a raw table: entries down to −1e-12 clamp to 0,
  /// the total must be 1 within 1e-10.
  static JointDistribution from_table(std::size_t dim_a, std::size_t dim_b, std::vector<double> p,
                                      std::vector<double> values_a, std::vector<double> values_b) {
    if (p.size() != dim_a * dim_b || values_a.size() != dim_a || values_b.size() != dim_b) {
      throw Error(Errc::dimension_mismatch, "joint table shape mismatch");
    }
    double total = 0.0;
    for (auto& v : p) {
      if (v < -tol::probability_clamp) {
        throw Error(Errc::invalid_argument, "negative probability " + std::to_string(v));
      }
      if (v < 0.0) v = 0.0;
      total += v;
    }
    if (std::abs(total - 1.0) > tol::probability_sum) {
      throw Error(Errc::invalid_argument, "probabilities sum to " + std::to_string(total));
    }
    JointDistribution jd;
    jd.dim_a_ = dim_a;
    jd.dim_b_ = dim_b;
    jd.p_ = std::move(p);
    jd.values_a_ = std::move(values_a);
    jd.values_b_ = std::move(values_b);
    jd.marginal_a_.assign(dim_a, 0.0);
    jd.marginal_b_.assign(dim_b, 0.0);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_b; ++j) {
        jd.marginal_a_[i] += jd(i, j);
        jd.marginal_b_[j] += jd(i, j);
      }
    return jd;
  }

  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  double operator()(std::size_t i, std::size_t j) const { return p_[i * dim_b_ + j]; }
  std::span<const double> table() const noexcept { return p_; }
  std::span<const double> marginal_a() const noexcept { return marginal_a_; }
  std::span<const double> marginal_b() const noexcept { return marginal_b_; }
  std::span<const double> values_a() const noexcept { return values_a_; }
  std::span<const double> values_b() const noexcept { return values_b_; }

 private:
  JointDistribution() = default;

  std::size_t dim_a_ = 0;
  std::size_t dim_b_ = 0;
  std::vector<double> p_;
  std::vector<double> marginal_a_;
  std::vector<double> marginal_b_;
  std::vector<double> values_a_;
  std::vector<double> values_b_;
};

/// p(i,j) = <a_i,b_j|ρ|a_i,b_j>
inline JointDistribution joint_distribution(const DensityMatrix& rho, const Basis& basis_a,
                                            const Basis& basis_b) {
  if (basis_a.d != rho.dim_a() || basis_b.d != rho.dim_b()) {
    throw Error(Errc::dimension_mismatch, "basis dimensions (" + std::to_string(basis_a.d) + "," +
                                              std::to_string(basis_b.d) + ") vs state (" +
                                              std::to_string(rho.dim_a()) + "," +
                                              std::to_string(rho.dim_b()) + ")");
  }
  const auto& m = rho.matrix();
  const std::size_t n = rho.dim();
  std::vector<double> p;
  p.reserve(basis_a.d * basis_b.d);
  std::vector<complex> mv(n);
  for (const auto& va : basis_a.vectors)
    for (const auto& vb : basis_b.vectors) {
      const auto v = kron(std::span<const complex>(va), std::span<const complex>(vb));
      for (std::size_t r = 0; r < n; ++r) {
        complex s{0.0, 0.0};
        for (std::size_t c = 0; c < n; ++c) s += m(r, c) * v[c];
        mv[r] = s;
      }
      const complex e = inner(v, mv);
      if (std::abs(e.imag()) > tol::imaginary) {
        throw Error(Errc::imaginary_residue, "joint probability has imaginary part " +
                                                 std::to_string(e.imag()));
      }
      p.push_back(e.real());
    }
  return JointDistribution::from_table(basis_a.d, basis_b.d, std::move(p), basis_a.values,
                                       basis_b.values);
}

/// Moves column j to j⊕k on party B. Outcome values stay attached to column
/// positions, so the relabelled outcomes carry the labels of their new slots.
inline JointDistribution relabel_joint(const JointDistribution& jd, int k) {
  const std::size_t da = jd.dim_a(), db = jd.dim_b();
  std::vector<double> p(da * db, 0.0);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < db; ++j) p[i * db + mod_d(static_cast<long long>(j) + k, db)] = jd(i, j);
  return JointDistribution::from_table(da, db, std::move(p),
                                       {jd.values_a().begin(), jd.values_a().end()},
                                       {jd.values_b().begin(), jd.values_b().end()});
}

inline ComplexMatrix identity_operator(std::size_t d) { return ComplexMatrix::identity(d); }

/// Tr(ρ·(A⊗B)) without forming the Kronecker product.
inline double expectation(const DensityMatrix& rho, const ComplexMatrix& op_a,
                          const ComplexMatrix& op_b) {
  const std::size_t da = rho.dim_a(), db = rho.dim_b();
  if (op_a.rows() != da || op_a.cols() != da || op_b.rows() != db || op_b.cols() != db) {
    throw Error(Errc::dimension_mismatch, "operators " + op_a.shape() + " ⊗ " + op_b.shape() +
                                              " vs state dims (" + std::to_string(da) + "," +
                                              std::to_string(db) + ")");
  }
  const auto& m = rho.matrix();
  complex s{0.0, 0.0};
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t k = 0; k < db; ++k)
      for (std::size_t j = 0; j < da; ++j) {
        const complex aji = op_a(j, i);
        if (aji == complex{0.0, 0.0}) continue;
        for (std::size_t l = 0; l < db; ++l) s += m(i * db + k, j * db + l) * aji * op_b(l, k);
      }
  if (std::abs(s.imag()) > tol::imaginary) {
    throw Error(Errc::imaginary_residue, "expectation has imaginary part " + std::to_string(s.imag()));
  }
  return s.real();
}

inline double expectation(const DensityMatrix& rho, const Observable& op_a, const Observable& op_b) {
  return expectation(rho, op_a.matrix, op_b.matrix);
}

/// Parses "Z", "X", "Xc", "W" or "shiftZ:k".
inline BasisLabel parse_basis_label(std::string_view text) {
  if (text == "Z") return {BasisKind::Z, 0};
  if (text == "X") return {BasisKind::X, 0};
  if (text == "Xc") return {BasisKind::XConj, 0};
  if (text == "W") return {BasisKind::WEigen, 0};
  constexpr std::string_view prefix = "shiftZ:";
  if (text.starts_with(prefix)) {
    const std::string digits(text.substr(prefix.size()));
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(digits, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (!digits.empty() && used == digits.size()) return {BasisKind::ShiftedZ, k};
  }
  throw Error(Errc::invalid_argument, "unknown basis \"" + std::string(text) + "\"");
}

/// "A,B" -> (A, B)
inline std::pair<BasisLabel, BasisLabel> parse_basis_pair(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) {
    throw Error(Errc::invalid_argument, "basis pair must look like A,B (got \"" + std::string(text) + "\")");
  }
  return {parse_basis_label(text.substr(0, comma)), parse_basis_label(text.substr(comma + 1))};
}

}  // namespace qclab
