#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qclab/linalg.hpp"
#include "qclab/state_json.hpp"
#include "qclab/states.hpp"

using namespace qclab;
using Catch::Approx;

namespace {

// Entry of the noisy Bell density matrix, written out per basis pair.
double noisy_bell_entry(std::size_t d, double a, double b, double c, std::size_t i, std::size_t j,
                        std::size_t k, std::size_t l) {
  const double dd = static_cast<double>(d);
  double v = 0.0;
  if (i == j && k == l) v += a / dd;  // |ii><kk|
  if (i == k && j == l) {
    v += (1 - a) * b / (dd * dd);
    if (i == j) v += (1 - a) * (1 - b) * c / dd;
    else v += (1 - a) * (1 - b) * (1 - c) / (dd * (dd - 1));
  }
  return v;
}

ComplexMatrix random_unitary(std::mt19937& rng, std::size_t n) {
  // exp(iH) via eigen-free Cayley transform U = (I - iH)(I + iH)^-1 is awkward
  // without a solver; Gram-Schmidt on random complex columns is enough here.
  std::normal_distribution<double> g;
  std::vector<std::vector<complex>> cols(n, std::vector<complex>(n));
  for (auto& c : cols)
    for (auto& x : c) x = complex{g(rng), g(rng)};
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      complex dot{0, 0};
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(cols[j][r]) * cols[k][r];
      for (std::size_t r = 0; r < n; ++r) cols[k][r] -= dot * cols[j][r];
    }
    double norm = 0;
    for (auto& x : cols[k]) norm += std::norm(x);
    for (auto& x : cols[k]) x /= std::sqrt(norm);
  }
  ComplexMatrix u(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) u(r, c) = cols[c][r];
  return u;
}

std::vector<double> random_simplex(std::mt19937& rng, std::size_t d) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(d);
  double s = 0;
  for (auto& x : v) s += (x = e(rng));
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace

TEST_CASE("isotropic noise is I/d^2") {
  const auto rho = build_state(NoiseOnly{NoiseKind::Isotropic, 3});
  CHECK(rho.matrix().max_abs_diff((1.0 / 9.0) * ComplexMatrix::identity(9)) < 1e-15);
}

TEST_CASE("noisy Bell with a=1 is phi+ regardless of noise") {
  for (double b : {0.0, 0.4, 1.0})
    for (double c : {0.0, 0.7}) {
      const auto m = build_state(NoisyBell{3, 1.0, b, c}).matrix();
      for (std::size_t r = 0; r < 9; ++r)
        for (std::size_t s = 0; s < 9; ++s) {
          const bool support = r % 4 == 0 && s % 4 == 0;  // |ii> sits at index 4i for d=3
          CHECK(std::abs(m(r, s) - complex{support ? 1.0 / 3.0 : 0.0, 0.0}) < 1e-15);
        }
    }
}

TEST_CASE("noisy Bell matches the entrywise expansion") {
  for (std::size_t d : {2u, 3u, 4u})
    for (double a : {0.0, 0.3, 1.0})
      for (double b : {0.0, 0.5})
        for (double c : {0.2, 1.0}) {
          const auto m = build_state(NoisyBell{d, a, b, c}).matrix();
          for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
              for (std::size_t k = 0; k < d; ++k)
                for (std::size_t l = 0; l < d; ++l)
                  CHECK(std::abs(m(i * d + j, k * d + l) - noisy_bell_entry(d, a, b, c, i, j, k, l)) < 1e-14);
        }
}

TEST_CASE("OPH a=2.5 diagonal") {
  const auto m = build_state(Oph{2.5}).matrix();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double expected = i == j ? 2.0 / 21.0 : 2.5 / 21.0;
      CHECK(m(i * 3 + j, i * 3 + j).real() == Approx(expected).margin(1e-15));
    }
}

TEST_CASE("OPH sigma+ and sigma- sit on the cyclic pairs") {
  const auto m = build_state(Oph{4.0}).matrix();
  // sigma+ on |01>,|12>,|20> with weight a/21; sigma- on |10>,|21>,|02> with (5-a)/21
  for (auto [i, j] : {std::pair{0, 1}, {1, 2}, {2, 0}}) CHECK(m(i * 3 + j, i * 3 + j).real() == Approx(4.0 / 21));
  for (auto [i, j] : {std::pair{1, 0}, {2, 1}, {0, 2}}) CHECK(m(i * 3 + j, i * 3 + j).real() == Approx(1.0 / 21));
}

TEST_CASE("Werner weights the symmetric subspace by a") {
  // On |01>,|10> the symmetric and antisymmetric parts mix; on |00> only the
  // symmetric projector contributes.
  const double d = 3, a = 0.3;
  const auto m = build_state(Werner{3, a}).matrix();
  const double s = 2 * a / (d * (d + 1)), t = 2 * (1 - a) / (d * (d - 1));
  CHECK(m(0, 0).real() == Approx(s));
  CHECK(m(1, 1).real() == Approx((s + t) / 2));
  CHECK(m(1, 3).real() == Approx((s - t) / 2));
}

TEST_CASE("closed-form negativity examples") {
  CHECK(closed_form_negativity(NoisyBell{3, 0.8, 1.0, 0.3}) == Approx(11.0 / 15.0).margin(1e-14));
  CHECK(closed_form_negativity(Werner{3, 0.0}) == Approx(1.0 / 3.0).margin(1e-15));
  CHECK(closed_form_negativity(PureSchmidt{{0.5, 0.5}}) == Approx(0.5).margin(1e-15));
  CHECK(closed_form_negativity(Oph{3.5}) == 0.0);
  CHECK(closed_form_negativity(CnaBell{4, 0.3}) == Approx(0.45).margin(1e-15));
}

TEST_CASE("Werner entanglement begins below a = 1/2") {
  CHECK(closed_form_negativity(Werner{4, 0.49}) > 0.0);
  CHECK(closed_form_negativity(Werner{4, 0.5}) == 0.0);
  CHECK(negativity_numeric(build_state(Werner{4, 0.49})) > 1e-4);
  CHECK(negativity_numeric(build_state(Werner{4, 0.6})) == Approx(0.0).margin(1e-12));
}

TEST_CASE("closed forms agree with numeric negativity on random draws") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0, 1);
  for (std::size_t d = 2; d <= 8; ++d)
    for (int n = 0; n < 50; ++n) {
      const StateFamily fams[] = {NoisyBell{d, u(rng), u(rng), u(rng)}, Werner{d, u(rng)},
                                  PureSchmidt{random_simplex(rng, d)}, CnaBell{d, u(rng)}};
      for (const auto& f : fams) {
        INFO(to_json(f).dump());
        CHECK(negativity_numeric(build_state(f)) == Approx(closed_form_negativity(f)).margin(1e-9));
      }
    }
  for (int n = 0; n < 50; ++n) {
    const Oph o{2.0 + 3.0 * u(rng)};
    CHECK(negativity_numeric(build_state(o)) == Approx(closed_form_negativity(o)).margin(1e-9));
  }
}

TEST_CASE("separable instances have zero numeric negativity") {
  for (auto k : {NoiseKind::Isotropic, NoiseKind::ColoredA, NoiseKind::ColoredB})
    for (std::size_t d = 2; d <= 5; ++d) CHECK(negativity_numeric(build_state(NoiseOnly{k, d})) == Approx(0).margin(1e-12));
  for (double a = 0.5; a <= 1.0; a += 0.05) CHECK(negativity_numeric(build_state(Werner{3, a})) == Approx(0).margin(1e-12));
  for (double a = 2.0; a <= 4.0; a += 0.1) CHECK(negativity_numeric(build_state(Oph{a})) == Approx(0).margin(1e-12));
  CHECK(negativity_numeric(build_state(PureSchmidt{{1.0, 0.0, 0.0}})) == Approx(0).margin(1e-12));
}

TEST_CASE("every constructor output over a parameter grid is a valid state") {
  for (int i = 0; i < 100; ++i) {
    const double t = i / 99.0;
    CHECK_NOTHROW(build_state(NoisyBell{3, t, 1 - t, t}));
    CHECK_NOTHROW(build_state(Werner{4, t}));
    CHECK_NOTHROW(build_state(Oph{2 + 3 * t}));
    CHECK_NOTHROW(build_state(CnaBell{5, t}));
    const auto pt = partial_transpose(build_state(NoisyBell{3, t, 0.2, 0.7}), Subsystem::A);
    CHECK(pt.is_hermitian());
    CHECK(pt.trace().real() == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("CnaBell is noisy Bell with pure colored noise A") {
  for (std::size_t d : {2u, 3u, 6u})
    for (double p : {0.0, 0.35, 1.0})
      CHECK(state_matrix(CnaBell{d, p}).max_abs_diff(state_matrix(NoisyBell{d, p, 0.0, 1.0})) < 1e-14);
}

TEST_CASE("noisy Bell Z diagonal depends only on a and N") {
  // two different (b, c) with the same a and the same signed N expression
  const std::size_t d = 3;
  const double a = 0.2;
  const NoisyBell x{d, a, 0.0, 0.5};
  const double target = negativity_expression(x);
  // solve for c at b = 0.3: N is linear in c
  const double b = 0.3;
  const double n0 = negativity_expression(NoisyBell{d, a, b, 0.0});
  const double n1 = negativity_expression(NoisyBell{d, a, b, 1.0});
  const NoisyBell y{d, a, b, (target - n0) / (n1 - n0)};
  const auto mx = build_state(x).matrix(), my = build_state(y).matrix();
  for (std::size_t i = 0; i < d * d; ++i) CHECK(mx(i, i).real() == Approx(my(i, i).real()).margin(1e-14));
}

TEST_CASE("Werner is invariant under U x U") {
  std::mt19937 rng(99);
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto rho = build_state(Werner{d, 0.27}).matrix();
    for (int t = 0; t < 20; ++t) {
      const auto u = random_unitary(rng, d);
      const auto uu = kron(u, u);
      CHECK((uu * rho * uu.adjoint()).max_abs_diff(rho) < 1e-9);
    }
  }
}

TEST_CASE("parameter validation names the field and never clamps") {
  auto message = [](const StateFamily& f) {
    try {
      build_state(f);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::parameter_out_of_range);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK_THAT(message(NoisyBell{3, 1.2, 0, 0}), Catch::Matchers::ContainsSubstring("noisy_bell.a"));
  CHECK_THAT(message(NoisyBell{3, 0.2, -0.1, 0}), Catch::Matchers::ContainsSubstring("noisy_bell.b"));
  CHECK_THAT(message(NoisyBell{3, 0.2, 0, 2}), Catch::Matchers::ContainsSubstring("noisy_bell.c"));
  CHECK_THAT(message(Werner{1, 0.2}), Catch::Matchers::ContainsSubstring("werner.d"));
  CHECK_THAT(message(Oph{5.5}), Catch::Matchers::ContainsSubstring("oph.a"));
  CHECK_THAT(message(Oph{1.9}), Catch::Matchers::ContainsSubstring("oph.a"));
  CHECK_THAT(message(PureSchmidt{{0.5, 0.6}}), Catch::Matchers::ContainsSubstring("pure_schmidt.lambdas"));
  CHECK_THAT(message(PureSchmidt{{1.5, -0.5}}), Catch::Matchers::ContainsSubstring("lambdas[1]"));
  CHECK_THAT(message(CnaBell{3, -0.01}), Catch::Matchers::ContainsSubstring("cna_bell.p"));
  CHECK_THROWS_AS(closed_form_negativity(Werner{3, 1.5}), Error);
}

TEST_CASE("JSON descriptors round-trip") {
  const StateFamily fams[] = {NoiseOnly{NoiseKind::ColoredB, 4}, NoisyBell{3, 0.8, 0.5, 0.5}, Werner{5, 0.1},
                              Oph{4.5}, PureSchmidt{{0.25, 0.75}}, CnaBell{2, 0.6}};
  for (const auto& f : fams) {
    const auto back = family_from_json(to_json(f).dump());
    CHECK(to_json(back) == to_json(f));
    CHECK(family_name(back) == family_name(f));
  }
  const auto nb = std::get<NoisyBell>(family_from_json(R"({"family":"noisy_bell","d":3,"a":0.8,"b":0.5,"c":0.5})"));
  CHECK(nb.d == 3);
  CHECK(nb.a == 0.8);
}

TEST_CASE("JSON descriptor errors") {
  auto code = [](const std::string& text) {
    try {
      family_from_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::unsupported;
  };
  CHECK(code("{bad") == Errc::invalid_argument);
  CHECK(code("[1,2]") == Errc::invalid_argument);
  CHECK(code(R"({"family":"ghz","d":3})") == Errc::invalid_argument);
  CHECK(code(R"({"family":"werner","a":0.2})") == Errc::invalid_argument);
  CHECK(code(R"({"family":"werner","d":3,"a":"x"})") == Errc::invalid_argument);
  CHECK(code(R"({"family":"werner","d":1,"a":0.2})") == Errc::parameter_out_of_range);
  CHECK(code(R"({"family":"werner","d":3,"a":1.2})") == Errc::parameter_out_of_range);
  CHECK(code(R"({"family":"noise_only","kind":"pink","d":3})") == Errc::invalid_argument);
}
