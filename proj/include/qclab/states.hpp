#pragma once

// Parametric two-qudit state families and their closed-form Negativity.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "qclab/error.hpp"
#include "qclab/linalg.hpp"

namespace qclab {

enum class NoiseKind { Isotropic, ColoredA, ColoredB };

/// One of the three separable noise states on its own.
struct NoiseOnly {
  NoiseKind kind = NoiseKind::Isotropic;
  std::size_t d = 2;
};

/// a|φ+><φ+| + (1-a)[b ρ_iso + (1-b)(c ρ_cna + (1-c) ρ_cnb)]
struct NoisyBell {
  std::size_t d = 2;
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
};

/// Weight a on the normalized symmetric projector; entangled for a < 1/2.
struct Werner {
  std::size_t d = 2;
  double a = 0.0;
};

/// One-parameter Horodecki two-qutrit state, 2 <= a <= 5.
struct Oph {
  double a = 2.0;
};

/// Σ_i √λ_i |i,i>, written directly in its Schmidt bases.
struct PureSchmidt {
  std::vector<double> lambdas;
};

/// p|φ+><φ+| + (1-p) ρ_cna
struct CnaBell {
  std::size_t d = 2;
  double p = 0.0;
};

using StateFamily = std::variant<NoiseOnly, NoisyBell, Werner, Oph, PureSchmidt, CnaBell>;

inline constexpr std::size_t kOphDim = 3;

namespace detail {

inline void require_unit_interval(double v, const char* field, std::string_view family) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(Errc::parameter_out_of_range, std::string(family) + "." + field + " = " +
                                                  std::to_string(v) + " not in [0,1]");
  }
}

inline void require_dimension(std::size_t d, std::string_view family) {
  if (d < 2) {
    throw Error(Errc::parameter_out_of_range,
                std::string(family) + ".d = " + std::to_string(d) + " must be >= 2");
  }
}

inline ComplexMatrix phi_plus_projector(std::size_t d) {
  const std::size_t n = d * d;
  ComplexMatrix m(n, n);
  const double w = 1.0 / static_cast<double>(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i * d + i, j * d + j) = w;
  return m;
}

inline ComplexMatrix noise_matrix(NoiseKind kind, std::size_t d) {
  const std::size_t n = d * d;
  const double dd = static_cast<double>(d);
  ComplexMatrix m(n, n);
  switch (kind) {
    case NoiseKind::Isotropic:
      for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0 / (dd * dd);
      break;
    case NoiseKind::ColoredA:
      for (std::size_t i = 0; i < d; ++i) m(i * d + i, i * d + i) = 1.0 / dd;
      break;
    case NoiseKind::ColoredB:
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          if (i != j) m(i * d + j, i * d + j) = 1.0 / (dd * (dd - 1.0));
      break;
  }
  return m;
}

/// Swap operator Σ_ij |i><j| ⊗ |j><i|.
inline ComplexMatrix swap_operator(std::size_t d) {
  const std::size_t n = d * d;
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) m(i * d + j, j * d + i) = 1.0;
  return m;
}

}  // namespace detail

inline std::string_view family_name(const StateFamily& f) {
  return std::visit(
      [](const auto& s) -> std::string_view {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NoiseOnly>) return "noise_only";
        else if constexpr (std::is_same_v<T, NoisyBell>) return "noisy_bell";
        else if constexpr (std::is_same_v<T, Werner>) return "werner";
        else if constexpr (std::is_same_v<T, Oph>) return "oph";
        else if constexpr (std::is_same_v<T, PureSchmidt>) return "pure_schmidt";
        else return "cna_bell";
      },
      f);
}

/// Local dimension d of the d×d system a family describes.
inline std::size_t family_dimension(const StateFamily& f) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Oph>) return kOphDim;
        else if constexpr (std::is_same_v<T, PureSchmidt>) return s.lambdas.size();
        else return s.d;
      },
      f);
}

/// Throws parameter_out_of_range naming the offending field. Never clamps.
inline void validate_family(const StateFamily& f) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NoiseOnly>) {
          detail::require_dimension(s.d, "noise_only");
        } else if constexpr (std::is_same_v<T, NoisyBell>) {
          detail::require_dimension(s.d, "noisy_bell");
          detail::require_unit_interval(s.a, "a", "noisy_bell");
          detail::require_unit_interval(s.b, "b", "noisy_bell");
          detail::require_unit_interval(s.c, "c", "noisy_bell");
        } else if constexpr (std::is_same_v<T, Werner>) {
          detail::require_dimension(s.d, "werner");
          detail::require_unit_interval(s.a, "a", "werner");
        } else if constexpr (std::is_same_v<T, Oph>) {
          if (!(s.a >= 2.0 && s.a <= 5.0)) {
            throw Error(Errc::parameter_out_of_range,
                        "oph.a = " + std::to_string(s.a) + " not in [2,5]");
          }
        } else if constexpr (std::is_same_v<T, PureSchmidt>) {
          detail::require_dimension(s.lambdas.size(), "pure_schmidt");
          double total = 0.0;
          for (std::size_t i = 0; i < s.lambdas.size(); ++i) {
            if (!(s.lambdas[i] >= 0.0)) {
              throw Error(Errc::parameter_out_of_range,
                          "pure_schmidt.lambdas[" + std::to_string(i) + "] is negative");
            }
            total += s.lambdas[i];
          }
          if (std::abs(total - 1.0) > 1e-12) {
            throw Error(Errc::parameter_out_of_range,
                        "pure_schmidt.lambdas sum to " + std::to_string(total));
          }
        } else {
          detail::require_dimension(s.d, "cna_bell");
          detail::require_unit_interval(s.p, "p", "cna_bell");
        }
      },
      f);
}

/// Unvalidated matrix for a family. Exposed so alternative builders can be
/// swapped into verification harnesses; normal callers use build_state.
inline ComplexMatrix state_matrix(const StateFamily& f) {
  validate_family(f);
  return std::visit(
      [](const auto& s) -> ComplexMatrix {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NoiseOnly>) {
          return detail::noise_matrix(s.kind, s.d);
        } else if constexpr (std::is_same_v<T, NoisyBell>) {
          const auto noise = s.b * detail::noise_matrix(NoiseKind::Isotropic, s.d) +
                             (1.0 - s.b) * (s.c * detail::noise_matrix(NoiseKind::ColoredA, s.d) +
                                            (1.0 - s.c) * detail::noise_matrix(NoiseKind::ColoredB, s.d));
          return s.a * detail::phi_plus_projector(s.d) + (1.0 - s.a) * noise;
        } else if constexpr (std::is_same_v<T, Werner>) {
          const double d = static_cast<double>(s.d);
          const auto id = ComplexMatrix::identity(s.d * s.d);
          const auto swap = detail::swap_operator(s.d);
          const auto p_sym = 0.5 * (id + swap);
          const auto p_as = 0.5 * (id - swap);
          return (s.a * 2.0 / (d * (d + 1.0))) * p_sym + ((1.0 - s.a) * 2.0 / (d * (d - 1.0))) * p_as;
        } else if constexpr (std::is_same_v<T, Oph>) {
          constexpr std::size_t d = kOphDim;
          ComplexMatrix sigma_plus(d * d, d * d), sigma_minus(d * d, d * d);
          for (std::size_t i = 0; i < d; ++i) {
            const std::size_t up = i * d + (i + 1) % d;    // |0,1>, |1,2>, |2,0>
            const std::size_t down = ((i + 1) % d) * d + i;  // |1,0>, |2,1>, |0,2>
            sigma_plus(up, up) = 1.0 / 3.0;
            sigma_minus(down, down) = 1.0 / 3.0;
          }
          return (2.0 / 7.0) * detail::phi_plus_projector(d) + (s.a / 7.0) * sigma_plus +
                 ((5.0 - s.a) / 7.0) * sigma_minus;
        } else if constexpr (std::is_same_v<T, PureSchmidt>) {
          const std::size_t d = s.lambdas.size();
          std::vector<complex> psi(d * d, complex{0.0, 0.0});
          for (std::size_t i = 0; i < d; ++i) psi[i * d + i] = std::sqrt(s.lambdas[i]);
          return ComplexMatrix::outer(psi, psi);
        } else {
          return s.p * detail::phi_plus_projector(s.d) +
                 (1.0 - s.p) * detail::noise_matrix(NoiseKind::ColoredA, s.d);
        }
      },
      f);
}

inline DensityMatrix build_state(const StateFamily& f) {
  const std::size_t d = family_dimension(f);
  return validate_density(state_matrix(f), d, d);
}

/// Signed Negativity expression before the max{0, ·} clamp, for the families
/// whose closed form has one. Negative values mean "separable, this far from
/// the boundary" and are what the Z-basis outcome tables are written in.
inline double negativity_expression(const NoisyBell& s) {
  const double d = static_cast<double>(s.d);
  return (-d + s.a * d * d + s.b - s.a * s.b + d * (1.0 - s.a) * (1.0 - s.b) * s.c) / (2.0 * d);
}

inline double negativity_expression(const Werner& s) {
  return (1.0 - 2.0 * s.a) / static_cast<double>(s.d);
}

inline double oph_negativity(double a) {
  if (a <= 4.0) return 0.0;
  return (2.0 * std::sqrt(41.0 - 20.0 * a + 4.0 * a * a) - 10.0) / 28.0;
}

inline double closed_form_negativity(const StateFamily& f) {
  validate_family(f);
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NoiseOnly>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, NoisyBell> || std::is_same_v<T, Werner>) {
          return std::max(0.0, negativity_expression(s));
        } else if constexpr (std::is_same_v<T, Oph>) {
          return oph_negativity(s.a);
        } else if constexpr (std::is_same_v<T, PureSchmidt>) {
          double sum = 0.0;
          for (std::size_t i = 0; i < s.lambdas.size(); ++i)
            for (std::size_t j = 0; j < s.lambdas.size(); ++j)
              if (i != j) sum += std::sqrt(s.lambdas[i] * s.lambdas[j]);
          return 0.5 * sum;
        } else {
          return s.p * (static_cast<double>(s.d) - 1.0) / 2.0;
        }
      },
      f);
}

}  // namespace qclab
