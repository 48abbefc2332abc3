#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "qclab/measurement.hpp"
#include "qclab/states.hpp"

using namespace qclab;
using Catch::Approx;

namespace {

const BasisLabel Z{BasisKind::Z, 0};
const BasisLabel X{BasisKind::X, 0};
const BasisLabel Xc{BasisKind::XConj, 0};

BasisLabel shifted(int k) { return {BasisKind::ShiftedZ, k}; }

JointDistribution measure(const StateFamily& f, BasisLabel a, BasisLabel b) {
  const auto rho = build_state(f);
  return joint_distribution(rho, make_basis(rho.dim_a(), a), make_basis(rho.dim_b(), b));
}

// p(i,j) summed by brute force over ρ entries: Σ conj(a_i[r]b_j[s]) ρ(rs,tu) a_i[t]b_j[u]
double brute_probability(const DensityMatrix& rho, const std::vector<complex>& va,
                         const std::vector<complex>& vb) {
  const std::size_t da = va.size(), db = vb.size();
  complex s{0, 0};
  for (std::size_t r = 0; r < da; ++r)
    for (std::size_t q = 0; q < db; ++q)
      for (std::size_t t = 0; t < da; ++t)
        for (std::size_t u = 0; u < db; ++u)
          s += std::conj(va[r] * vb[q]) * rho.matrix()(r * db + q, t * db + u) * va[t] * vb[u];
  return s.real();
}

}  // namespace

TEST_CASE("X basis vectors are Fourier vectors") {
  const auto b = make_basis(3, X);
  const complex w = std::polar(1.0, 2 * std::numbers::pi / 3);
  const double n = 1 / std::sqrt(3.0);
  CHECK(std::abs(b.vectors[1][0] - n) < 1e-15);
  CHECK(std::abs(b.vectors[1][1] - n * w) < 1e-15);
  CHECK(std::abs(b.vectors[1][2] - n * w * w) < 1e-15);
  const auto c = make_basis(3, Xc);
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(c.vectors[1][j] - std::conj(b.vectors[1][j])) < 1e-15);
}

TEST_CASE("zero shift equals Z; shifts reduce mod d") {
  const auto z = make_basis(3, Z), s0 = make_basis(3, shifted(0)), s3 = make_basis(3, shifted(3));
  const auto sm1 = make_basis(3, shifted(-1)), s2 = make_basis(3, shifted(2));
  CHECK(z.vectors == s0.vectors);
  CHECK(z.vectors == s3.vectors);
  CHECK(sm1.vectors == s2.vectors);
  CHECK(sm1.label.shift == 2);
  // vector j of ShiftedZ(1) is |j+1>
  const auto s1 = make_basis(3, shifted(1));
  CHECK(s1.vectors[2][0] == complex{1, 0});
}

TEST_CASE("W eigenbasis values") {
  const auto b = make_basis(4, {BasisKind::WEigen, 0});
  CHECK(b.values == std::vector<double>{3, -1, -1, -1});
  CHECK_THROWS_AS(make_basis(1, Z), Error);
}

TEST_CASE("bases are orthonormal and Z, X are mutually unbiased") {
  for (std::size_t d = 2; d <= 12; ++d) {
    const auto z = make_basis(d, Z), x = make_basis(d, X), w = make_basis(d, {BasisKind::WEigen, 0});
    CHECK(orthonormality_error(z) < 1e-12);
    CHECK(orthonormality_error(x) < 1e-12);
    CHECK(orthonormality_error(make_basis(d, Xc)) < 1e-12);
    CHECK(orthonormality_error(w) < 1e-12);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        CHECK(std::norm(inner(z.vectors[i], x.vectors[k])) == Approx(1.0 / d).margin(1e-12));
        CHECK(std::norm(inner(z.vectors[i], w.vectors[k])) == Approx(1.0 / d).margin(1e-12));
      }
  }
}

TEST_CASE("observables") {
  const auto w = make_observable(3, ObservableKind::W).matrix;
  ComplexMatrix expected{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}};
  CHECK(w.max_abs_diff(expected) == 0.0);
  const auto z = make_observable(3, ObservableKind::Z).matrix;
  CHECK(z.max_abs_diff(ComplexMatrix{{-1, 0, 0}, {0, 0, 0}, {0, 0, 1}}) == 0.0);
  const auto ev = hermitian_eigenvalues(make_observable(5, ObservableKind::W).matrix);
  CHECK(ev[0] == Approx(-1).margin(1e-12));
  CHECK(ev[3] == Approx(-1).margin(1e-12));
  CHECK(ev[4] == Approx(4).margin(1e-12));
  CHECK_THROWS_AS(make_observable(3, ObservableKind::Z, std::vector<double>{1, 1, -2}), Error);
  CHECK_THROWS_AS(make_observable(3, ObservableKind::Z, std::vector<double>{0, 1, 2}), Error);
  CHECK_THROWS_AS(make_observable(3, ObservableKind::Z, std::vector<double>{1, -1}), Error);
  CHECK_NOTHROW(make_observable(3, ObservableKind::Z, std::vector<double>{-2, 0.5, 1.5}));
}

TEST_CASE("W squared identity") {
  for (std::size_t d = 2; d <= 16; ++d) {
    const auto w = make_observable(d, ObservableKind::W).matrix;
    const double dd = static_cast<double>(d);
    CHECK((w * w).max_abs_diff((dd - 1) * ComplexMatrix::identity(d) + (dd - 2) * w) < 1e-12);
  }
}

TEST_CASE("joint distribution agrees with brute-force contraction") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 10; ++t) {
    const auto rho = build_state(NoisyBell{3, u(rng), u(rng), u(rng)});
    for (auto [la, lb] : {std::pair{Z, Z}, {X, Xc}, {X, X}, {Z, shifted(2)}}) {
      const auto ba = make_basis(3, la), bb = make_basis(3, lb);
      const auto jd = joint_distribution(rho, ba, bb);
      for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
          CHECK(jd(i, j) == Approx(brute_probability(rho, ba.vectors[i], bb.vectors[j])).margin(1e-14));
    }
  }
}

TEST_CASE("noisy Bell Z table (d = 3)") {
  for (double a : {0.1, 0.4, 0.9})
    for (double b : {0.0, 0.6})
      for (double c : {0.0, 0.5, 1.0}) {
        const NoisyBell nb{3, a, b, c};
        const double n = negativity_expression(nb);  // signed, before clamping
        const auto jd = measure(nb, Z, Z);
        for (std::size_t i = 0; i < 3; ++i)
          for (std::size_t j = 0; j < 3; ++j)
            CHECK(jd(i, j) == Approx(i == j ? (1 - 2 * a + 2 * n) / 3 : a / 3 - n / 3).margin(1e-12));
      }
}

TEST_CASE("noisy Bell X table") {
  for (std::size_t d : {2u, 3u, 5u})
    for (double a : {0.0, 0.35, 1.0}) {
      const auto jd = measure(NoisyBell{d, a, 0.3, 0.6}, X, Xc);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          CHECK(jd(i, j) == Approx((i == j ? a / d : 0.0) + (1 - a) / (d * d)).margin(1e-12));
    }
}

TEST_CASE("Werner Z table") {
  for (std::size_t d : {2u, 3u, 6u})
    for (double a : {0.0, 0.25, 0.5, 0.8, 1.0}) {
      const double dd = static_cast<double>(d);
      const double n = (1 - 2 * a) / dd;  // signed
      const auto jd = measure(Werner{d, a}, Z, Z);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          CHECK(jd(i, j) == Approx(i == j ? (1 - dd * n) / (dd * (dd + 1)) : (1 + n) / (dd * dd - 1)).margin(1e-12));
      // same-basis X measurement sees the same table
      const auto jx = measure(Werner{d, a}, X, X);
      for (std::size_t i = 0; i < d * d; ++i) CHECK(jx.table()[i] == Approx(jd.table()[i]).margin(1e-12));
    }
}

TEST_CASE("noise tables in the X basis") {
  for (std::size_t d : {2u, 3u, 4u}) {
    const auto jd = measure(NoiseOnly{NoiseKind::ColoredA, d}, X, X);
    for (double p : jd.table()) CHECK(p == Approx(1.0 / (d * d)).margin(1e-12));
  }
}

TEST_CASE("OPH k=1 table") {
  for (double a : {2.0, 3.3, 4.0, 5.0}) {
    const auto jd = measure(Oph{a}, Z, shifted(1));
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(jd(i, i) == Approx(a / 21).margin(1e-12));
      CHECK(jd((i + 1) % 3, i) == Approx(2.0 / 21).margin(1e-12));
      CHECK(jd(i, (i + 1) % 3) == Approx((5 - a) / 21).margin(1e-12));
    }
  }
}

TEST_CASE("relabelling routes agree") {
  for (double a : {2.0, 2.7, 3.9, 4.6}) {
    const auto zz = measure(Oph{a}, Z, Z);
    for (int k = -3; k <= 4; ++k) {
      const auto direct = measure(Oph{a}, Z, shifted(k));
      const auto relabelled = relabel_joint(zz, -k);
      for (std::size_t i = 0; i < 9; ++i) CHECK(direct.table()[i] == Approx(relabelled.table()[i]).margin(1e-14));
      const auto back = relabel_joint(relabel_joint(zz, k), 3 - k);
      for (std::size_t i = 0; i < 9; ++i) CHECK(back.table()[i] == zz.table()[i]);
    }
    const auto same = relabel_joint(zz, 0);
    CHECK(std::equal(same.table().begin(), same.table().end(), zz.table().begin()));
  }
}

TEST_CASE("distribution validation") {
  CHECK_THROWS_AS(JointDistribution::from_table(2, 2, {0.5, 0.5, 0.1, 0.0}, {0, 1}, {0, 1}), Error);
  CHECK_THROWS_AS(JointDistribution::from_table(2, 2, {1.1, -0.1, 0.0, 0.0}, {0, 1}, {0, 1}), Error);
  CHECK_THROWS_AS(JointDistribution::from_table(2, 2, {1.0, 0.0, 0.0}, {0, 1}, {0, 1}), Error);
  const auto jd = JointDistribution::from_table(2, 2, {0.5, -5e-13, 0.25, 0.25 + 5e-13}, {0, 1}, {0, 1});
  CHECK(jd(0, 1) == 0.0);
  CHECK(jd.marginal_a()[0] == Approx(0.5));
  CHECK(jd.marginal_b()[1] == Approx(0.25));
  const auto rho = build_state(Werner{3, 0.2});
  CHECK_THROWS_AS(joint_distribution(rho, make_basis(2, Z), make_basis(3, Z)), Error);
}

TEST_CASE("expectation values") {
  std::mt19937 rng(8);
  for (int t = 0; t < 20; ++t) {
    const std::size_t d = 2 + t % 5;
    std::exponential_distribution<double> e;
    PureSchmidt ps;
    double s = 0;
    for (std::size_t i = 0; i < d; ++i) s += ps.lambdas.emplace_back(e(rng));
    for (auto& l : ps.lambdas) l /= s;
    const auto rho = build_state(ps);
    const auto w = make_observable(d, ObservableKind::W);
    CHECK(expectation(rho, w, w) == Approx(2 * closed_form_negativity(ps)).margin(1e-12));
    CHECK(expectation(rho, identity_operator(d), identity_operator(d)) == Approx(1).margin(1e-13));
  }
  for (double p : {0.0, 0.4, 1.0}) {
    const auto rho = build_state(CnaBell{4, p});
    CHECK(expectation(rho, make_observable(4, ObservableKind::W).matrix, identity_operator(4)) == Approx(0).margin(1e-14));
  }
  // agrees with Tr(ρ (A⊗B)) through an explicit Kronecker product
  const auto rho = build_state(Oph{4.4});
  const auto a = make_observable(3, ObservableKind::W).matrix;
  const auto b = make_observable(3, ObservableKind::Z).matrix;
  CHECK(expectation(rho, a, b) == Approx((rho.matrix() * kron(a, b)).trace().real()).margin(1e-14));
  CHECK_THROWS_AS(expectation(rho, identity_operator(2), b), Error);
}

TEST_CASE("basis labels parse") {
  CHECK(parse_basis_label("Z") == Z);
  CHECK(parse_basis_label("Xc") == Xc);
  CHECK(parse_basis_label("shiftZ:2") == shifted(2));
  CHECK(parse_basis_label("W").kind == BasisKind::WEigen);
  CHECK(parse_basis_pair("Z,shiftZ:1").second == shifted(1));
  CHECK_THROWS_AS(parse_basis_label("Y"), Error);
  CHECK_THROWS_AS(parse_basis_label("shiftZ:"), Error);
  CHECK_THROWS_AS(parse_basis_label("shiftZ:1x"), Error);
  CHECK_THROWS_AS(parse_basis_pair("ZZ"), Error);
  CHECK(shifted(-1).str() == "shiftZ:-1");
}
