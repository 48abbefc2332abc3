// qclab command-line front end.
//
// Exit codes: 0 ok, 1 verification failure, 2 input error, 3 inversion-domain error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qclab/characterization.hpp"
#include "qclab/correlators.hpp"
#include "qclab/error.hpp"
#include "qclab/figures.hpp"
#include "qclab/linalg.hpp"
#include "qclab/measurement.hpp"
#include "qclab/state_json.hpp"
#include "qclab/states.hpp"
#include "qclab/verify.hpp"

namespace {

using nlohmann::json;
using namespace qclab;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitDomain = 3;

/// Thrown for bad command-line input that is not a library Error.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return arg;
  std::ifstream in(arg);
  if (!in) throw InputError("cannot read state file \"" + arg + "\"");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_arg(const std::string& arg) {
  try {
    return json::parse(read_text(arg));
  } catch (const json::parse_error& e) {
    throw Error(Errc::invalid_argument, std::string("malformed JSON: ") + e.what());
  }
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file \"" + path + "\"");
  out << text;
  if (!out) throw InputError("failed writing \"" + path + "\"");
}

InversionOptions inversion_options() {
  InversionOptions opts;
  if (const char* env = std::getenv("QCLAB_TOL"); env && *env) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0)) {
      throw InputError(std::string("QCLAB_TOL must be a positive number, got \"") + env + "\"");
    }
    opts.tolerance = v;
  }
  return opts;
}

// --- compute --------------------------------------------------------------

struct ComputeArgs {
  std::string state;
  std::vector<std::string> bases;
  std::string correlators = "mp,mi,pcc";
};

int cmd_compute(const ComputeArgs& args) {
  const StateFamily family = family_from_json(parse_json_arg(args.state));
  const auto kinds = parse_correlator_list(args.correlators);
  std::vector<std::pair<BasisLabel, BasisLabel>> pairs;
  for (const auto& b : args.bases.empty() ? std::vector<std::string>{"Z,Z"} : args.bases)
    pairs.push_back(parse_basis_pair(b));

  const auto rho = build_state(family);
  const auto ev = hermitian_eigenvalues(rho.matrix());
  json out;
  out["state"] = to_json(family);
  out["dims"] = {rho.dim_a(), rho.dim_b()};
  out["trace"] = rho.matrix().trace().real();
  out["min_eigenvalue"] = ev.front();
  out["negativity"] = {{"numeric", negativity_numeric(rho)}, {"closed_form", closed_form_negativity(family)}};
  out["correlators"] = json::array();
  for (const auto& [a, b] : pairs) {
    const auto report = measure_correlators(rho, a, b);
    json entry;
    entry["bases"] = a.str() + "," + b.str();
    for (auto k : kinds) {
      switch (k) {
        case CorrelatorKind::MP: entry["mp"] = report.mp; break;
        case CorrelatorKind::MI: entry["mi"] = report.mi; break;
        case CorrelatorKind::PCC: entry["pcc"] = optional_number(report.pcc); break;
      }
    }
    out["correlators"].push_back(entry);
  }
  std::cout << out.dump(2) << '\n';
  return kExitOk;
}

// --- invert ---------------------------------------------------------------

struct InvertArgs {
  std::string family;
  std::string kind;
  std::optional<double> x;
  std::optional<double> z;
  std::optional<double> value;
  std::size_t d = 3;
  int k = 1;
};

json result_json(const CharacterizationResult& r) {
  json out;
  out["negativity"] = r.negativity;
  out["aux_param"] = optional_number(r.aux_param);
  out["region"] = r.region ? json(std::string(to_string(*r.region))) : json(nullptr);
  out["ambiguity"] = r.ambiguous;
  out["candidates"] = json::array();
  for (const auto& c : r.candidates) out["candidates"].push_back({{"param", c.param}, {"negativity", c.negativity}});
  out["method"] = r.method;
  return out;
}

int cmd_invert(const InvertArgs& args) {
  const auto kind = parse_correlator_kind(args.kind);
  const auto opts = inversion_options();
  // --value is an alias for the single Z-basis input.
  const auto z = args.z ? args.z : args.value;
  CharacterizationResult r;
  if (args.family == "noisy_bell") {
    if (!args.x || !z) throw InputError("noisy_bell inversion needs --x and --z");
    r = invert_noisy_bell(*args.x, *z, kind, args.d, opts);
  } else if (args.family == "werner") {
    if (!z) throw InputError("werner inversion needs --z (or --value)");
    r = invert_werner(*z, kind, args.d, opts);
  } else if (args.family == "oph") {
    if (!z) throw InputError("oph inversion needs --value");
    r = oph_from_correlator(*z, kind, args.k, opts);
  } else {
    throw InputError("--family must be noisy_bell, werner or oph");
  }
  std::cout << result_json(r).dump(2) << '\n';
  return kExitOk;
}

// --- figure / sweep -------------------------------------------------------

int cmd_figure(const std::string& id, std::size_t steps, const std::string& out) {
  write_output(figure_csv(parse_figure_id(id), steps), out);
  return kExitOk;
}

struct SweepArgs {
  std::string state;
  std::vector<std::string> params;  // name:start:stop
  std::size_t steps = kDefaultSteps;
  std::string bases = "Z,Z";
  std::string correlators = "mp,mi,pcc";
  std::string out;
};

SweepParam parse_sweep_param(const std::string& text, std::size_t steps) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3 || parts[0].empty()) throw InputError("--param must look like name:start:stop");
  SweepParam p;
  p.name = parts[0];
  try {
    std::size_t used = 0;
    p.start = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw InputError("bad start");
    p.stop = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw InputError("bad stop");
  } catch (const std::exception&) {
    throw InputError("--param " + text + ": start and stop must be numbers");
  }
  p.steps = steps;
  return p;
}

int cmd_sweep(const SweepArgs& args) {
  SweepSpec spec;
  spec.family = parse_json_arg(args.state);
  for (const auto& p : args.params) spec.params.push_back(parse_sweep_param(p, args.steps));
  std::tie(spec.basis_a, spec.basis_b) = parse_basis_pair(args.bases);
  spec.correlators = parse_correlator_list(args.correlators);
  write_output(render_csv(run_sweep(spec)), args.out);
  return kExitOk;
}

// --- verify ---------------------------------------------------------------

int cmd_verify(const std::string& level) {
  VerifyConfig cfg;
  if (level == "fast") cfg.level = VerifyLevel::Fast;
  else if (level == "full") cfg.level = VerifyLevel::Full;
  else throw InputError("--level must be fast or full");
  cfg.inversion = inversion_options();
  bool ok = true;
  for (const auto& check : all_checks()) {
    const auto r = run_timed(check, cfg);
    ok = ok && r.passed;
    std::cout << format_check(r) << '\n';
    std::cout.flush();
  }
  std::cout << (ok ? "all checks passed" : "verification FAILED") << '\n';
  return ok ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Negativity and statistical correlators of two-qudit states"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Negativity and correlators for one state (JSON report)");
  c->add_option("--state", compute.state, "state descriptor: inline JSON or a file path")->required();
  c->add_option("--bases", compute.bases, "basis pair A,B with A,B in Z|X|Xc|W|shiftZ:k (repeatable)");
  c->add_option("--correlators", compute.correlators, "comma list of mp,mi,pcc");

  InvertArgs invert;
  auto* inv = app.add_subcommand("invert", "recover the Negativity from measured correlators (JSON)");
  inv->add_option("--family", invert.family, "noisy_bell | werner | oph")->required();
  inv->add_option("--kind", invert.kind, "mp | mi | pcc")->required();
  inv->add_option("--x", invert.x, "X-basis correlator (noisy_bell)");
  inv->add_option("--z", invert.z, "Z-basis correlator");
  inv->add_option("--value", invert.value, "single correlator value (werner, oph)");
  inv->add_option("--d", invert.d, "local dimension (default 3)");
  inv->add_option("--k", invert.k, "OPH basis shift (default 1)");

  std::string figure_id, figure_out;
  std::size_t figure_steps = kDefaultSteps;
  auto* fig = app.add_subcommand("figure", "write a figure data set as CSV");
  fig->add_option("--figure", figure_id, "figure id, e.g. fig-oph-mp")->required();
  fig->add_option("--steps", figure_steps, "sweep points (default 201)");
  fig->add_option("--out", figure_out, "output path (default stdout)");

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "sweep one or two state parameters (CSV)");
  sw->add_option("--state", sweep.state, "template descriptor: inline JSON or a file path")->required();
  sw->add_option("--param", sweep.params, "name:start:stop (repeat once for a 2-D sweep)")->required();
  sw->add_option("--steps", sweep.steps, "points per swept parameter (default 201)");
  sw->add_option("--bases", sweep.bases, "basis pair A,B");
  sw->add_option("--correlators", sweep.correlators, "comma list of mp,mi,pcc");
  sw->add_option("--out", sweep.out, "output path (default stdout)");

  std::string level = "fast";
  auto* ver = app.add_subcommand("verify", "run the self-verification suite");
  ver->add_option("--level", level, "fast | full");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*c) return cmd_compute(compute);
    if (*inv) return cmd_invert(invert);
    if (*fig) return cmd_figure(figure_id, figure_steps, figure_out);
    if (*sw) return cmd_sweep(sweep);
    if (*ver) return cmd_verify(level);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    const bool domain = e.is_inversion_error() || (*inv && e.code() == Errc::unsupported);
    return domain ? kExitDomain : kExitInput;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}
