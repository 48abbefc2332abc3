#include <catch_amalgamated.hpp>

#include "qclab/verify.hpp"

using namespace qclab;

TEST_CASE("fast verification passes with the real constructors") {
  VerifyConfig cfg;
  for (const auto& r : run_verification(cfg)) {
    INFO(format_check(r));
    CHECK(r.passed);
  }
}

TEST_CASE("a corrupted constructor constant fails verification") {
  VerifyConfig cfg;
  // Werner with the antisymmetric normalization 2/(d(d-1)) replaced by
  // 2/(d(d+1)), then renormalized so it still passes density validation.
  cfg.builder = [](const StateFamily& f) {
    if (const auto* w = std::get_if<Werner>(&f)) {
      const double d = static_cast<double>(w->d);
      const auto id = ComplexMatrix::identity(w->d * w->d);
      const auto swap = detail::swap_operator(w->d);
      const auto m = (w->a * 2.0 / (d * (d + 1.0))) * (0.5 * (id + swap)) +
                     ((1.0 - w->a) * 2.0 / (d * (d + 1.0))) * (0.5 * (id - swap));
      return (1.0 / m.trace().real()) * m;
    }
    return state_matrix(f);
  };
  const auto r = check_negativity_oracle(cfg);
  CHECK_FALSE(r.passed);
  CHECK_FALSE(check_joint_tables(cfg).passed);
  CHECK_FALSE(check_round_trips(cfg).passed);
  CHECK(check_w_identities(cfg).passed);  // does not build states
}

TEST_CASE("a corrupted OPH weight fails the table check") {
  VerifyConfig cfg;
  cfg.builder = [](const StateFamily& f) {
    if (const auto* o = std::get_if<Oph>(&f)) {
      const auto a = std::min(5.0, o->a * 1.01);
      return state_matrix(Oph{a});
    }
    return state_matrix(f);
  };
  CHECK_FALSE(check_oph_table(cfg).passed);
}

TEST_CASE("builder exceptions are reported as failures, not thrown") {
  VerifyConfig cfg;
  cfg.builder = [](const StateFamily& f) -> ComplexMatrix {
    if (std::holds_alternative<CnaBell>(f)) throw Error(Errc::unsupported, "nope");
    return state_matrix(f);
  };
  const auto r = check_conjecture(cfg);
  CHECK_FALSE(r.passed);
  CHECK_THAT(r.detail, Catch::Matchers::ContainsSubstring("nope"));
}
