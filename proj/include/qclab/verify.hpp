#pragma once

// Self-verification checks shared by `qclab verify` and the acceptance test.
// Every check that builds states goes through a StateBuilder so a harness can
// substitute a deliberately broken constructor.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qclab/characterization.hpp"
#include "qclab/correlators.hpp"
#include "qclab/figures.hpp"
#include "qclab/linalg.hpp"
#include "qclab/measurement.hpp"
#include "qclab/states.hpp"

namespace qclab {

using StateBuilder = std::function<ComplexMatrix(const StateFamily&)>;

enum class VerifyLevel { Fast, Full };

struct CheckResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyConfig {
  VerifyLevel level = VerifyLevel::Fast;
  StateBuilder builder = state_matrix;
  InversionOptions inversion{};
};

namespace verify_detail {

/// Tracks the worst deviation seen and the first failure message.
class Tally {
 public:
  explicit Tally(double limit) : limit_(limit) {}

  void observe(double err, const std::string& where) {
    if (!(err <= worst_)) {  // also catches NaN
      worst_ = std::isnan(err) ? INFINITY : err;
      if (!(err <= limit_) && first_failure_.empty()) first_failure_ = where;
    }
    ++count_;
  }
  void fail(const std::string& where) {
    ++count_;
    worst_ = INFINITY;
    if (first_failure_.empty()) first_failure_ = where;
  }
  bool ok() const { return first_failure_.empty(); }
  std::string summary() const {
    std::string s = std::to_string(count_) + " comparisons, max error " + format_number(worst_);
    if (!ok()) s += "; first failure at " + first_failure_;
    return s;
  }

 private:
  double limit_;
  double worst_ = 0.0;
  std::size_t count_ = 0;
  std::string first_failure_;
};

inline DensityMatrix make_state(const VerifyConfig& cfg, const StateFamily& f) {
  const std::size_t d = family_dimension(f);
  return validate_density(cfg.builder(f), d, d);
}

inline std::string describe(const StateFamily& f) { return to_json(f).dump(); }

inline std::vector<double> grid(double lo, double hi, std::size_t n) { return linspace(lo, hi, n); }

inline double table_error(const JointDistribution& x, const JointDistribution& y) {
  double e = 0.0;
  for (std::size_t i = 0; i < x.table().size(); ++i) e = std::max(e, std::abs(x.table()[i] - y.table()[i]));
  return e;
}

inline const BasisLabel kZ{BasisKind::Z, 0};
inline const BasisLabel kX{BasisKind::X, 0};
inline const BasisLabel kXc{BasisKind::XConj, 0};

inline double correlator(const JointDistribution& jd, CorrelatorKind k) { return correlator_value(jd, k); }

inline JointDistribution measure_jd(const DensityMatrix& rho, BasisLabel a, BasisLabel b) {
  return joint_distribution(rho, make_basis(rho.dim_a(), a), make_basis(rho.dim_b(), b));
}

template <class Body>
void guarded(Tally& t, const std::string& where, Body body) {
  try {
    body();
  } catch (const std::exception& e) {
    t.fail(where + ": " + e.what());
  }
}

}  // namespace verify_detail

// 1. Numeric Negativity against the closed forms.
inline CheckResult check_negativity_oracle(const VerifyConfig& cfg) {
  using namespace verify_detail;
  Tally t(1e-9);
  const auto g11 = grid(0.0, 1.0, 11);
  for (std::size_t d = 2; d <= 5; ++d)
    for (double a : g11)
      for (double b : g11)
        for (double c : g11) {
          const StateFamily f = NoisyBell{d, a, b, c};
          guarded(t, describe(f), [&] {
            t.observe(std::abs(negativity_numeric(make_state(cfg, f)) - closed_form_negativity(f)),
                      describe(f));
          });
        }
  for (std::size_t d = 2; d <= 6; ++d)
    for (double a : grid(0.0, 1.0, 101)) {
      const StateFamily f = Werner{d, a};
      guarded(t, describe(f), [&] {
        t.observe(std::abs(negativity_numeric(make_state(cfg, f)) - closed_form_negativity(f)), describe(f));
      });
    }
  for (double a : grid(2.0, 5.0, 301)) {
    const StateFamily f = Oph{a};
    guarded(t, describe(f), [&] {
      t.observe(std::abs(negativity_numeric(make_state(cfg, f)) - closed_form_negativity(f)), describe(f));
    });
  }
  return {1, "negativity matches closed forms", t.ok(), t.summary(), 0.0};
}

// 2. Measured outcome tables against the analytic tables.
inline CheckResult check_joint_tables(const VerifyConfig& cfg) {
  using namespace verify_detail;
  Tally t(1e-12);
  const auto g11 = grid(0.0, 1.0, 11);
  for (std::size_t d = 2; d <= 5; ++d)
    for (double a : g11)
      for (double b : g11)
        for (double c : g11) {
          const NoisyBell nb{d, a, b, c};
          guarded(t, describe(nb), [&] {
            const auto rho = make_state(cfg, nb);
            t.observe(table_error(measure_jd(rho, kZ, kZ), noisy_bell_z_table(d, a, negativity_expression(nb))),
                      describe(nb) + " Z,Z");
            t.observe(table_error(measure_jd(rho, kX, kXc), noisy_bell_x_table(d, a)), describe(nb) + " X,Xc");
          });
        }
  for (std::size_t d = 2; d <= 6; ++d)
    for (double a : grid(0.0, 1.0, 101)) {
      const Werner w{d, a};
      guarded(t, describe(w), [&] {
        t.observe(table_error(measure_jd(make_state(cfg, w), kZ, kZ), werner_z_table(d, a)), describe(w));
      });
    }
  for (double a : grid(2.0, 5.0, 301)) {
    const Oph o{a};
    guarded(t, describe(o), [&] {
      t.observe(table_error(measure_jd(make_state(cfg, o), kZ, {BasisKind::ShiftedZ, 1}), oph_table(a, 1)),
                describe(o));
    });
  }
  return {2, "joint distributions match analytic tables", t.ok(), t.summary(), 0.0};
}

// 3. OPH mutual predictability in the three shifted bases.
inline CheckResult check_oph_table(const VerifyConfig& cfg) {
  using namespace verify_detail;
  Tally t(1e-12);
  for (double a : grid(2.0, 5.0, 301)) {
    const Oph o{a};
    guarded(t, describe(o), [&] {
      const auto rho = make_state(cfg, o);
      const double expected[3] = {2.0 / 7.0, a / 7.0, (5.0 - a) / 7.0};
      for (int k = 0; k < 3; ++k) {
        const double mp = mutual_predictability(measure_jd(rho, kZ, {BasisKind::ShiftedZ, k}));
        t.observe(std::abs(mp - expected[k]), describe(o) + " k=" + std::to_string(k));
      }
    });
  }
  return {3, "OPH MP equals 2/7, a/7, (5-a)/7", t.ok(), t.summary(), 0.0};
}

// 4. W observable algebra.
inline CheckResult check_w_identities(const VerifyConfig&) {
  using namespace verify_detail;
  Tally t(1e-12);
  for (std::size_t d = 2; d <= 16; ++d) {
    const std::string where = "d=" + std::to_string(d);
    guarded(t, where, [&] {
      const auto w = make_observable(d, ObservableKind::W).matrix;
      const double dd = static_cast<double>(d);
      const auto rhs = (dd - 1.0) * ComplexMatrix::identity(d) + (dd - 2.0) * w;
      t.observe((w * w).max_abs_diff(rhs), where + " W^2");

      const auto ev = hermitian_eigenvalues(w);
      for (std::size_t i = 0; i < d; ++i) {
        const double expected = i + 1 == d ? dd - 1.0 : -1.0;
        t.observe(std::abs(ev[i] - expected) / dd, where + " spectrum");
      }

      const auto z = make_basis(d, kZ);
      const auto we = make_basis(d, {BasisKind::WEigen, 0});
      for (std::size_t k = 0; k < d; ++k) {
        for (std::size_t i = 0; i < d; ++i)
          t.observe(std::abs(std::norm(inner(z.vectors[i], we.vectors[k])) - 1.0 / dd), where + " overlap");
        // W w_k = λ_k w_k
        for (std::size_t r = 0; r < d; ++r) {
          complex s{0.0, 0.0};
          for (std::size_t c = 0; c < d; ++c) s += w(r, c) * we.vectors[k][c];
          t.observe(std::abs(s - we.values[k] * we.vectors[k][r]), where + " eigenvector");
        }
      }
    });
  }
  return {4, "W^2 identity, spectrum and overlaps", t.ok(), t.summary(), 0.0};
}

// 5. PCC_Z + PCC_W = 1 + 2N/(d-1).
inline CheckResult check_conjecture(const VerifyConfig& cfg) {
  using namespace verify_detail;
  Tally t(1e-10);
  const std::size_t dmax = cfg.level == VerifyLevel::Full ? 10 : 6;
  const std::size_t draws = cfg.level == VerifyLevel::Full ? 200 : 50;
  auto residual = [&](const StateFamily& f) {
    const auto rho = make_state(cfg, f);
    const std::size_t d = rho.dim_a();
    const auto z = make_observable(d, ObservableKind::Z);
    const auto w = make_observable(d, ObservableKind::W);
    const auto pz = pcc_observables(rho, z, z);
    const auto pw = pcc_observables(rho, w, w);
    if (!pz || !pw) throw Error(Errc::out_of_domain, "PCC undefined");
    return std::abs(*pz + *pw - 1.0 - 2.0 * closed_form_negativity(f) / (static_cast<double>(d) - 1.0));
  };
  std::mt19937 rng(20240611u);
  std::uniform_int_distribution<std::size_t> pick_d(2, dmax);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t n = 0; n < draws; ++n) {
    const std::size_t d = pick_d(rng);
    PureSchmidt ps;
    // rank between 2 and d: trailing coefficients may be zero
    std::uniform_int_distribution<std::size_t> pick_rank(2, d);
    const std::size_t rank = pick_rank(rng);
    double total = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double v = i < rank ? 0.05 + u(rng) : 0.0;
      ps.lambdas.push_back(v);
      total += v;
    }
    for (auto& l : ps.lambdas) l /= total;
    std::shuffle(ps.lambdas.begin(), ps.lambdas.end(), rng);
    guarded(t, describe(ps), [&] { t.observe(residual(ps), describe(ps)); });
  }
  for (std::size_t d = 2; d <= dmax; ++d)
    for (double p : grid(0.0, 1.0, 101)) {
      const CnaBell cb{d, p};
      guarded(t, describe(cb), [&] { t.observe(residual(cb), describe(cb)); });
    }
  return {5, "PCC_Z + PCC_W - 1 - 2N/(d-1) vanishes", t.ok(), t.summary(), 0.0};
}

// 6. Forward then invert recovers the Negativity.
inline CheckResult check_round_trips(const VerifyConfig& cfg) {
  using namespace verify_detail;
  Tally t(1e-8);
  const auto& opts = cfg.inversion;
  const CorrelatorKind kinds[] = {CorrelatorKind::MP, CorrelatorKind::MI, CorrelatorKind::PCC};
  const bool full = cfg.level == VerifyLevel::Full;

  const auto g_a = grid(0.0, 1.0, 11);
  const auto g_bc = grid(0.0, 1.0, full ? 11 : 5);
  for (std::size_t d = 2; d <= (full ? 5u : 3u); ++d)
    for (double a : g_a)
      for (double b : g_bc)
        for (double c : g_bc) {
          const NoisyBell nb{d, a, b, c};
          guarded(t, describe(nb), [&] {
            const auto rho = make_state(cfg, nb);
            const auto jx = measure_jd(rho, kX, kXc);
            const auto jz = measure_jd(rho, kZ, kZ);
            const double n = closed_form_negativity(nb);
            for (auto k : kinds) {
              const auto r = invert_noisy_bell(correlator(jx, k), correlator(jz, k), k, d, opts);
              t.observe(std::abs(r.negativity - n), describe(nb) + " " + std::string(to_string(k)));
            }
          });
        }

  for (std::size_t d = 2; d <= 6; ++d) {
    const auto band = werner_mi_band(d);
    for (double a : grid(0.0, 1.0, 101)) {
      const Werner w{d, a};
      guarded(t, describe(w), [&] {
        const auto jz = measure_jd(make_state(cfg, w), kZ, kZ);
        const double n = closed_form_negativity(w);
        for (auto k : kinds) {
          const double v = correlator(jz, k);
          const auto r = invert_werner(v, k, d, opts);
          const std::string where = describe(w) + " " + std::string(to_string(k));
          if (k != CorrelatorKind::MI) {
            t.observe(std::abs(r.negativity - n), where);
            continue;
          }
          const bool in_band = v <= band.threshold + 1e-12;
          if (r.ambiguous != in_band) {
            t.fail(where + " ambiguity flag");
          } else if (!in_band) {
            t.observe(std::abs(r.negativity - n), where);
          } else {
            double best = INFINITY;
            for (const auto& cand : r.candidates) best = std::min(best, std::abs(cand.negativity - n));
            t.observe(best, where + " (candidates)");
          }
        }
      });
    }
  }

  for (double a : grid(2.0, 5.0, 301)) {
    const Oph o{a};
    guarded(t, describe(o), [&] {
      const auto jd = measure_jd(make_state(cfg, o), kZ, {BasisKind::ShiftedZ, 1});
      const double n = closed_form_negativity(o);
      for (auto k : kinds) {
        const auto r = oph_from_correlator(correlator(jd, k), k, 1, opts);
        const std::string where = describe(o) + " " + std::string(to_string(k));
        if (r.region != classify_oph(a)) t.fail(where + " region");
        else t.observe(std::abs(r.negativity - n), where);
      }
    });
  }
  return {6, "inversion round trips", t.ok(), t.summary(), 0.0};
}

// 7. State-independent bounds miss entangled Werner states that the
// state-dependent thresholds catch; the Bell state violates all three.
inline CheckResult check_bound_landscape(const VerifyConfig& cfg) {
  using namespace verify_detail;
  Tally t(0.0);
  constexpr std::size_t d = 3;
  const CorrelatorKind kinds[] = {CorrelatorKind::MP, CorrelatorKind::MI, CorrelatorKind::PCC};
  for (int i = 1; i <= 21; ++i) {
    const Werner w{d, 0.3 + 0.2 * i / 22.0};
    const std::string where = describe(w);
    guarded(t, where, [&] {
      const auto rho = make_state(cfg, w);
      const auto jz = measure_jd(rho, kZ, kZ);
      const auto jx = measure_jd(rho, kX, kX);
      if (!(closed_form_negativity(w) > 0.0)) t.fail(where + " not entangled");
      const double mps[] = {mutual_predictability(jz), mutual_predictability(jx)};
      if (bound_spengler(mps, d).violated) t.fail(where + " Spengler violated");
      if (bound_maccone_mi(mutual_information(jz), mutual_information(jx), d).violated)
        t.fail(where + " Maccone MI violated");
      if (bound_maccone_pcc(correlator(jz, CorrelatorKind::PCC), correlator(jx, CorrelatorKind::PCC)).violated)
        t.fail(where + " Maccone PCC violated");
      for (auto k : kinds) {
        const double z = correlator(jz, k), x = correlator(jx, k);
        if (!state_dependent_verdict(TargetFamily::Werner, k, d, z).violated)
          t.fail(where + " state-dependent " + std::string(to_string(k)) + " missed");
        if (!state_dependent_sum_verdict(TargetFamily::Werner, k, d, z + x).violated)
          t.fail(where + " state-dependent sum " + std::string(to_string(k)) + " missed");
        t.observe(0.0, where);
      }
    });
  }
  const NoisyBell bell{d, 1.0, 0.0, 0.0};
  guarded(t, "bell", [&] {
    const auto rho = make_state(cfg, bell);
    const auto jz = measure_jd(rho, kZ, kZ);
    const auto jx = measure_jd(rho, kX, kXc);
    const double mps[] = {mutual_predictability(jz), mutual_predictability(jx)};
    if (!bound_spengler(mps, d).violated) t.fail("Bell: Spengler not violated");
    if (!bound_maccone_mi(mutual_information(jz), mutual_information(jx), d).violated)
      t.fail("Bell: Maccone MI not violated");
    if (!bound_maccone_pcc(correlator(jz, CorrelatorKind::PCC), correlator(jx, CorrelatorKind::PCC)).violated)
      t.fail("Bell: Maccone PCC not violated");
    t.observe(0.0, "bell");
  });
  return {7, "state-dependent bounds detect what fixed bounds miss", t.ok(), t.summary(), 0.0};
}

// 8. Figure CSVs are byte-identical across runs.
inline CheckResult check_figure_determinism(const VerifyConfig& cfg) {
  using namespace verify_detail;
  Tally t(0.0);
  const std::size_t steps = cfg.level == VerifyLevel::Full ? kDefaultSteps : 51;
  for (const auto& [id, name] : kFigureNames) {
    guarded(t, std::string(name), [&, id = id, name = name] {
      const auto first = figure_csv(id, steps);
      const auto second = figure_csv(id, steps);
      if (first != second || first.empty()) t.fail(std::string(name));
      else t.observe(0.0, std::string(name));
    });
  }
  return {8, "figure output is deterministic", t.ok(), t.summary(), 0.0};
}

inline std::vector<std::function<CheckResult(const VerifyConfig&)>> all_checks() {
  return {check_negativity_oracle, check_joint_tables,    check_oph_table,       check_w_identities,
          check_conjecture,        check_round_trips,     check_bound_landscape, check_figure_determinism};
}

inline CheckResult run_timed(const std::function<CheckResult(const VerifyConfig&)>& check,
                             const VerifyConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r = check(cfg);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

inline std::vector<CheckResult> run_verification(const VerifyConfig& cfg) {
  std::vector<CheckResult> out;
  for (const auto& c : all_checks()) out.push_back(run_timed(c, cfg));
  return out;
}

inline std::string format_check(const CheckResult& r) {
  char secs[32];
  std::snprintf(secs, sizeof secs, "%.2fs", r.seconds);
  return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name + " (" +
         secs + "): " + r.detail;
}

}  // namespace qclab
