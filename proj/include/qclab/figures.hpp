#pragma once

// Figure data sets and parameter sweeps rendered as CSV.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qclab/characterization.hpp"
#include "qclab/correlators.hpp"
#include "qclab/error.hpp"
#include "qclab/measurement.hpp"
#include "qclab/state_json.hpp"
#include "qclab/states.hpp"

namespace qclab {

enum class FigureId {
  MpNoisyBell,
  MiNoisyBell,
  PccNoisyBell,
  MpWerner,
  MiWerner,
  PccWerner,
  OphMp,
  OphMpNeg,
  OphMi,
  OphMiNeg,
  OphPcc,
  OphPccNeg,
  BoundsNoisyMp,
  BoundsNoisyMi,
  BoundsNoisyPcc,
  BoundsWernerMp,
  BoundsWernerMi,
  BoundsWernerPcc,
};

inline constexpr std::array<std::pair<FigureId, std::string_view>, 18> kFigureNames{{
    {FigureId::MpNoisyBell, "fig-mp-noisy-bell"},
    {FigureId::MiNoisyBell, "fig-mi-noisy-bell"},
    {FigureId::PccNoisyBell, "fig-pcc-noisy-bell"},
    {FigureId::MpWerner, "fig-mp-werner"},
    {FigureId::MiWerner, "fig-mi-werner"},
    {FigureId::PccWerner, "fig-pcc-werner"},
    {FigureId::OphMp, "fig-oph-mp"},
    {FigureId::OphMpNeg, "fig-oph-mp-neg"},
    {FigureId::OphMi, "fig-oph-mi"},
    {FigureId::OphMiNeg, "fig-oph-mi-neg"},
    {FigureId::OphPcc, "fig-oph-pcc"},
    {FigureId::OphPccNeg, "fig-oph-pcc-neg"},
    {FigureId::BoundsNoisyMp, "fig-bounds-noisy-mp"},
    {FigureId::BoundsNoisyMi, "fig-bounds-noisy-mi"},
    {FigureId::BoundsNoisyPcc, "fig-bounds-noisy-pcc"},
    {FigureId::BoundsWernerMp, "fig-bounds-werner-mp"},
    {FigureId::BoundsWernerMi, "fig-bounds-werner-mi"},
    {FigureId::BoundsWernerPcc, "fig-bounds-werner-pcc"},
}};

inline std::string_view to_string(FigureId id) {
  for (const auto& [fid, name] : kFigureNames)
    if (fid == id) return name;
  return "?";
}

inline FigureId parse_figure_id(std::string_view name) {
  for (const auto& [fid, n] : kFigureNames)
    if (n == name) return fid;
  throw Error(Errc::invalid_argument, "unknown figure id \"" + std::string(name) + "\"");
}

/// Header plus rows of already-formatted cells.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// 12 significant digits, '.' decimal point, no negative zero.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_number(*v) : std::string("nan");
}

inline std::string render_csv(const CsvTable& t) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

/// `count` evenly spaced points from lo to hi inclusive.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  if (count < 2) throw Error(Errc::invalid_argument, "need at least 2 sweep points");
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i)
    v[i] = i + 1 == count ? hi
                          : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
  return v;
}

/// Evaluates fn(i) for i in [0, n) on up to hardware_concurrency threads and
/// returns the results in index order. The first exception is rethrown.
template <class Fn>
auto parallel_map(std::size_t n, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<std::optional<R>> slots(n);
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](std::size_t w) {
    try {
      for (std::size_t i = w; i < n; i += workers) slots[i].emplace(fn(i));
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------
// Figure recipes

inline constexpr std::size_t kFigureDim = 3;
inline constexpr std::size_t kDefaultSteps = 201;
inline constexpr std::array<double, 5> kNoisyBellCurves{0.0, 0.25, 0.5, 0.75, 1.0};

namespace detail {

struct Correlators {
  double mp = 0.0;
  double mi = 0.0;
  std::optional<double> pcc;

  std::optional<double> get(CorrelatorKind k) const {
    switch (k) {
      case CorrelatorKind::MP: return mp;
      case CorrelatorKind::MI: return mi;
      case CorrelatorKind::PCC: return pcc;
    }
    return std::nullopt;
  }
};

inline Correlators measure(const DensityMatrix& rho, BasisLabel a, BasisLabel b) {
  const auto r = measure_correlators(rho, a, b);
  return {r.mp, r.mi, r.pcc};
}

inline std::string symbol(CorrelatorKind k) {
  switch (k) {
    case CorrelatorKind::MP: return "P";
    case CorrelatorKind::MI: return "I";
    case CorrelatorKind::PCC: return "PCC";
  }
  return "?";
}

inline const BasisLabel kZ{BasisKind::Z, 0};
inline const BasisLabel kX{BasisKind::X, 0};
inline const BasisLabel kXc{BasisKind::XConj, 0};

// Noisy Bell: top panel sweeps a (X-basis correlator), bottom panel sweeps
// c at b = 0 for each curve a.
inline CsvTable noisy_bell_figure(CorrelatorKind kind, std::size_t steps) {
  const std::string s = symbol(kind);
  CsvTable t{{"panel", "a", "c", s + "_X", s + "_Z", "negativity"}, {}};
  const auto grid = linspace(0.0, 1.0, steps);
  struct Point {
    bool top;
    double a, c;
  };
  std::vector<Point> pts;
  for (double a : grid) pts.push_back({true, a, 0.0});
  for (double a : kNoisyBellCurves)
    for (double c : grid) pts.push_back({false, a, c});
  t.rows = parallel_map(pts.size(), [&](std::size_t i) {
    const auto& p = pts[i];
    const NoisyBell nb{kFigureDim, p.a, 0.0, p.c};
    const auto rho = build_state(nb);
    const auto x = measure(rho, kX, kXc).get(kind);
    const auto z = measure(rho, kZ, kZ).get(kind);
    return std::vector<std::string>{p.top ? "top" : "bottom", format_number(p.a), format_number(p.c),
                                    format_optional(x), format_optional(z),
                                    format_number(closed_form_negativity(nb))};
  });
  return t;
}

inline CsvTable werner_figure(CorrelatorKind kind, std::size_t steps) {
  const std::string s = symbol(kind);
  CsvTable t{{"a", s + "_Z", "negativity"}, {}};
  if (kind == CorrelatorKind::MI) t.header.push_back("ambiguous");
  const auto grid = linspace(0.0, 1.0, steps);
  const std::optional<WernerMiBand> band =
      kind == CorrelatorKind::MI ? std::optional(werner_mi_band(kFigureDim)) : std::nullopt;
  t.rows = parallel_map(grid.size(), [&](std::size_t i) {
    const Werner w{kFigureDim, grid[i]};
    const auto z = measure(build_state(w), kZ, kZ).get(kind);
    std::vector<std::string> row{format_number(w.a), format_optional(z),
                                 format_number(closed_form_negativity(w))};
    if (band) row.push_back(z && *z <= band->threshold + 1e-12 ? "1" : "0");
    return row;
  });
  return t;
}

// OPH in the Z ⊗ ShiftedZ(1) basis. The "-neg" variants lead with the
// correlator value and carry only Negativity and region.
inline CsvTable oph_figure(CorrelatorKind kind, bool negativity_view, std::size_t steps) {
  const std::string col = symbol(kind) + "_Z";
  CsvTable t;
  t.header = negativity_view ? std::vector<std::string>{col, "negativity", "region"}
                             : std::vector<std::string>{"a", col, "region", "negativity"};
  const auto grid = linspace(2.0, 5.0, steps);
  const BasisLabel shift1{BasisKind::ShiftedZ, 1};
  t.rows = parallel_map(grid.size(), [&](std::size_t i) {
    const Oph o{grid[i]};
    const auto v = format_optional(measure(build_state(o), kZ, shift1).get(kind));
    const auto region = std::string(to_string(classify_oph(o.a)));
    const auto n = format_number(closed_form_negativity(o));
    return negativity_view ? std::vector<std::string>{v, n, region}
                           : std::vector<std::string>{format_number(o.a), v, region, n};
  });
  return t;
}

inline double state_independent_threshold(CorrelatorKind kind, std::size_t d) {
  switch (kind) {
    case CorrelatorKind::MP: return 1.0 + 1.0 / static_cast<double>(d);
    case CorrelatorKind::MI: return std::log2(static_cast<double>(d));
    case CorrelatorKind::PCC: return 1.0;
  }
  return 0.0;
}

inline double bound_lhs(CorrelatorKind kind, double z, double x) {
  return kind == CorrelatorKind::PCC ? std::abs(z) + std::abs(x) : z + x;
}

inline CsvTable bounds_noisy_figure(CorrelatorKind kind, std::size_t steps) {
  const std::string s = symbol(kind);
  CsvTable t{{"a", "c", s + "_Z", s + "_X", "sum", "bound_lhs", "state_independent",
              "state_dependent", "negativity"},
             {}};
  const auto grid = linspace(0.0, 1.0, steps);
  std::vector<std::pair<double, double>> pts;
  for (double a : kNoisyBellCurves)
    for (double c : grid) pts.emplace_back(a, c);
  const double si = state_independent_threshold(kind, kFigureDim);
  t.rows = parallel_map(pts.size(), [&](std::size_t i) {
    const NoisyBell nb{kFigureDim, pts[i].first, 0.0, pts[i].second};
    const auto rho = build_state(nb);
    const double z = measure(rho, kZ, kZ).get(kind).value_or(0.0);
    const double x = measure(rho, kX, kXc).get(kind).value_or(0.0);
    const double sd = state_dependent_sum_threshold(TargetFamily::NoisyBell, kind, kFigureDim, nb.a);
    return std::vector<std::string>{format_number(nb.a), format_number(nb.c), format_number(z),
                                    format_number(x), format_number(z + x),
                                    format_number(bound_lhs(kind, z, x)), format_number(si),
                                    format_number(sd), format_number(closed_form_negativity(nb))};
  });
  return t;
}

inline CsvTable bounds_werner_figure(CorrelatorKind kind, std::size_t steps) {
  const std::string s = symbol(kind);
  CsvTable t{{"a", s + "_Z", s + "_X", "sum", "bound_lhs", "state_independent", "state_dependent",
              "negativity"},
             {}};
  const auto grid = linspace(0.0, 1.0, steps);
  const double si = state_independent_threshold(kind, kFigureDim);
  const double sd = state_dependent_sum_threshold(TargetFamily::Werner, kind, kFigureDim);
  t.rows = parallel_map(grid.size(), [&](std::size_t i) {
    const Werner w{kFigureDim, grid[i]};
    const auto rho = build_state(w);
    const double z = measure(rho, kZ, kZ).get(kind).value_or(0.0);
    const double x = measure(rho, kX, kX).get(kind).value_or(0.0);
    return std::vector<std::string>{format_number(w.a), format_number(z), format_number(x),
                                    format_number(z + x), format_number(bound_lhs(kind, z, x)),
                                    format_number(si), format_number(sd),
                                    format_number(closed_form_negativity(w))};
  });
  return t;
}

}  // namespace detail

inline CsvTable figure_table(FigureId id, std::size_t steps = kDefaultSteps) {
  if (steps < 2) throw Error(Errc::invalid_argument, "steps must be >= 2");
  using K = CorrelatorKind;
  switch (id) {
    case FigureId::MpNoisyBell: return detail::noisy_bell_figure(K::MP, steps);
    case FigureId::MiNoisyBell: return detail::noisy_bell_figure(K::MI, steps);
    case FigureId::PccNoisyBell: return detail::noisy_bell_figure(K::PCC, steps);
    case FigureId::MpWerner: return detail::werner_figure(K::MP, steps);
    case FigureId::MiWerner: return detail::werner_figure(K::MI, steps);
    case FigureId::PccWerner: return detail::werner_figure(K::PCC, steps);
    case FigureId::OphMp: return detail::oph_figure(K::MP, false, steps);
    case FigureId::OphMpNeg: return detail::oph_figure(K::MP, true, steps);
    case FigureId::OphMi: return detail::oph_figure(K::MI, false, steps);
    case FigureId::OphMiNeg: return detail::oph_figure(K::MI, true, steps);
    case FigureId::OphPcc: return detail::oph_figure(K::PCC, false, steps);
    case FigureId::OphPccNeg: return detail::oph_figure(K::PCC, true, steps);
    case FigureId::BoundsNoisyMp: return detail::bounds_noisy_figure(K::MP, steps);
    case FigureId::BoundsNoisyMi: return detail::bounds_noisy_figure(K::MI, steps);
    case FigureId::BoundsNoisyPcc: return detail::bounds_noisy_figure(K::PCC, steps);
    case FigureId::BoundsWernerMp: return detail::bounds_werner_figure(K::MP, steps);
    case FigureId::BoundsWernerMi: return detail::bounds_werner_figure(K::MI, steps);
    case FigureId::BoundsWernerPcc: return detail::bounds_werner_figure(K::PCC, steps);
  }
  throw Error(Errc::invalid_argument, "unknown figure id");
}

inline std::string figure_csv(FigureId id, std::size_t steps = kDefaultSteps) {
  return render_csv(figure_table(id, steps));
}

// ---------------------------------------------------------------------------
// Sweeps

inline CorrelatorKind parse_correlator_kind(std::string_view s) {
  if (s == "mp") return CorrelatorKind::MP;
  if (s == "mi") return CorrelatorKind::MI;
  if (s == "pcc") return CorrelatorKind::PCC;
  throw Error(Errc::invalid_argument, "unknown correlator \"" + std::string(s) + "\" (mp|mi|pcc)");
}

inline std::vector<CorrelatorKind> parse_correlator_list(std::string_view s) {
  std::vector<CorrelatorKind> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto comma = s.find(',', start);
    const auto item = s.substr(start, comma == std::string_view::npos ? s.npos : comma - start);
    const auto k = parse_correlator_kind(item);
    if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct SweepParam {
  std::string name;
  double start = 0.0;
  double stop = 1.0;
  std::size_t steps = kDefaultSteps;
};

struct SweepSpec {
  nlohmann::json family;  // template descriptor; swept fields are overwritten
  std::vector<SweepParam> params;  // one or two, the last varies fastest
  BasisLabel basis_a;
  BasisLabel basis_b;
  std::vector<CorrelatorKind> correlators{CorrelatorKind::MP, CorrelatorKind::MI, CorrelatorKind::PCC};
};

/// Columns: swept parameters, numeric Negativity, then the requested
/// correlators in the chosen basis pair.
inline CsvTable run_sweep(const SweepSpec& spec) {
  if (spec.params.empty() || spec.params.size() > 2) {
    throw Error(Errc::invalid_argument, "a sweep takes one or two parameters");
  }
  CsvTable t;
  std::vector<std::vector<double>> grids;
  for (const auto& p : spec.params) {
    if (p.steps < 2) throw Error(Errc::invalid_argument, "steps must be >= 2");
    if (p.name == "family" || p.name == "kind" || p.name == "lambdas") {
      throw Error(Errc::invalid_argument, "cannot sweep field \"" + p.name + "\"");
    }
    t.header.push_back(p.name);
    grids.push_back(linspace(p.start, p.stop, p.steps));
  }
  t.header.push_back("negativity");
  const std::string suffix = spec.basis_a.str() + "|" + spec.basis_b.str();
  for (auto k : spec.correlators) t.header.push_back(std::string(to_string(k)) + "[" + suffix + "]");

  // Validate every grid point up front so a bad range fails before any output.
  const std::size_t inner = grids.size() == 2 ? grids[1].size() : 1;
  const std::size_t total = grids[0].size() * inner;
  std::vector<StateFamily> families;
  families.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    nlohmann::json j = spec.family;
    j[spec.params[0].name] = grids[0][i / inner];
    if (grids.size() == 2) j[spec.params[1].name] = grids[1][i % inner];
    families.push_back(family_from_json(j));
  }
  t.rows = parallel_map(total, [&](std::size_t i) {
    const auto rho = build_state(families[i]);
    std::vector<std::string> row;
    row.push_back(format_number(grids[0][i / inner]));
    if (grids.size() == 2) row.push_back(format_number(grids[1][i % inner]));
    row.push_back(format_number(negativity_numeric(rho)));
    const auto c = detail::measure(rho, spec.basis_a, spec.basis_b);
    for (auto k : spec.correlators) row.push_back(format_optional(c.get(k)));
    return row;
  });
  return t;
}

}  // namespace qclab
