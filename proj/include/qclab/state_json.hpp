#pragma once

// JSON form of StateFamily, e.g. {"family":"noisy_bell","d":3,"a":0.8,"b":0.5,"c":0.5}.

#include <string>

#include <json.hpp>

#include "qclab/error.hpp"
#include "qclab/states.hpp"

namespace qclab {

namespace detail {

inline const nlohmann::json& require_field(const nlohmann::json& j, const char* field,
                                           const std::string& family) {
  if (!j.contains(field)) {
    throw Error(Errc::invalid_argument, family + ": missing field \"" + field + "\"");
  }
  return j.at(field);
}

inline double number_field(const nlohmann::json& j, const char* field, const std::string& family) {
  const auto& v = require_field(j, field, family);
  if (!v.is_number()) throw Error(Errc::invalid_argument, family + "." + field + " must be a number");
  return v.get<double>();
}

inline std::size_t dim_field(const nlohmann::json& j, const std::string& family) {
  const auto& v = require_field(j, "d", family);
  if (!v.is_number_integer() || v.get<long long>() < 2) {
    throw Error(Errc::parameter_out_of_range, family + ".d must be an integer >= 2");
  }
  return v.get<std::size_t>();
}

}  // namespace detail

inline std::string_view to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::Isotropic: return "isotropic";
    case NoiseKind::ColoredA: return "colored_a";
    case NoiseKind::ColoredB: return "colored_b";
  }
  return "isotropic";
}

inline nlohmann::json to_json(const StateFamily& f) {
  nlohmann::json j;
  j["family"] = std::string(family_name(f));
  std::visit(
      [&j](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, NoiseOnly>) {
          j["kind"] = std::string(to_string(s.kind));
          j["d"] = s.d;
        } else if constexpr (std::is_same_v<T, NoisyBell>) {
          j["d"] = s.d;
          j["a"] = s.a;
          j["b"] = s.b;
          j["c"] = s.c;
        } else if constexpr (std::is_same_v<T, Werner>) {
          j["d"] = s.d;
          j["a"] = s.a;
        } else if constexpr (std::is_same_v<T, Oph>) {
          j["a"] = s.a;
        } else if constexpr (std::is_same_v<T, PureSchmidt>) {
          j["lambdas"] = s.lambdas;
        } else {
          j["d"] = s.d;
          j["p"] = s.p;
        }
      },
      f);
  return j;
}

/// Parses and validates a descriptor. Throws Error with a field-level message.
inline StateFamily family_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(Errc::invalid_argument, "state descriptor must be a JSON object");
  if (!j.contains("family") || !j.at("family").is_string()) {
    throw Error(Errc::invalid_argument, "state descriptor needs a string \"family\" field");
  }
  const std::string fam = j.at("family").get<std::string>();
  StateFamily out;
  if (fam == "noise_only") {
    const auto& k = detail::require_field(j, "kind", fam);
    const std::string kind = k.is_string() ? k.get<std::string>() : "";
    NoiseKind nk;
    if (kind == "isotropic") nk = NoiseKind::Isotropic;
    else if (kind == "colored_a") nk = NoiseKind::ColoredA;
    else if (kind == "colored_b") nk = NoiseKind::ColoredB;
    else throw Error(Errc::invalid_argument, "noise_only.kind must be isotropic|colored_a|colored_b");
    out = NoiseOnly{nk, detail::dim_field(j, fam)};
  } else if (fam == "noisy_bell") {
    out = NoisyBell{detail::dim_field(j, fam), detail::number_field(j, "a", fam),
                    detail::number_field(j, "b", fam), detail::number_field(j, "c", fam)};
  } else if (fam == "werner") {
    out = Werner{detail::dim_field(j, fam), detail::number_field(j, "a", fam)};
  } else if (fam == "oph") {
    out = Oph{detail::number_field(j, "a", fam)};
  } else if (fam == "pure_schmidt") {
    const auto& l = detail::require_field(j, "lambdas", fam);
    if (!l.is_array()) throw Error(Errc::invalid_argument, "pure_schmidt.lambdas must be an array");
    PureSchmidt ps;
    for (const auto& v : l) {
      if (!v.is_number()) throw Error(Errc::invalid_argument, "pure_schmidt.lambdas must be numbers");
      ps.lambdas.push_back(v.get<double>());
    }
    out = std::move(ps);
  } else if (fam == "cna_bell") {
    out = CnaBell{detail::dim_field(j, fam), detail::number_field(j, "p", fam)};
  } else {
    throw Error(Errc::invalid_argument, "unknown family \"" + fam + "\"");
  }
  validate_family(out);
  return out;
}

inline StateFamily family_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::invalid_argument, std::string("malformed JSON: ") + e.what());
  }
  return family_from_json(j);
}

inline StateFamily family_from_json(const char* text) { return family_from_json(std::string(text)); }

}  // namespace qclab
