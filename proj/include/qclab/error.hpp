#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qclab {

enum class Errc {
  dimension_mismatch,
  not_hermitian,
  trace_mismatch,
  negative_eigenvalue,
  parameter_out_of_range,
  invalid_argument,
  imaginary_residue,
  not_converged,
  // inversion failures
  out_of_domain,
  bracket_failure,
  not_monotone,
  unsupported,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::not_hermitian: return "not_hermitian";
    case Errc::trace_mismatch: return "trace_mismatch";
    case Errc::negative_eigenvalue: return "negative_eigenvalue";
    case Errc::parameter_out_of_range: return "parameter_out_of_range";
    case Errc::invalid_argument: return "invalid_argument";
    case Errc::imaginary_residue: return "imaginary_residue";
    case Errc::not_converged: return "not_converged";
    case Errc::out_of_domain: return "out_of_domain";
    case Errc::bracket_failure: return "bracket_failure";
    case Errc::not_monotone: return "not_monotone";
    case Errc::unsupported: return "unsupported";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

  /// True for failures raised while inverting a correlator back to state parameters.
  bool is_inversion_error() const noexcept {
    return code_ == Errc::out_of_domain || code_ == Errc::bracket_failure ||
           code_ == Errc::not_monotone;
  }

 private:
  Errc code_;
};

}  // namespace qclab
