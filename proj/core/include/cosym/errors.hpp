#pragma once

#include <stdexcept>
#include <string>

namespace cosym {

enum class ErrorCode {
  invalid_argument,
  degenerate_volume,
  not_positive_definite,
  not_self_adjoint,
  not_antisymmetric,
  not_hyperbolic,
  not_symplectic,
  out_of_scope,
  monodromy_mismatch,
  not_hyperbolic_torsion,
  horizon_too_short,
  exponential_overflow,
  singular_operator,
  invalid_config,
};

const char* to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (and the CLI failure list) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "InvalidArgument";
    case ErrorCode::degenerate_volume: return "DegenerateVolume";
    case ErrorCode::not_positive_definite: return "NotPositiveDefinite";
    case ErrorCode::not_self_adjoint: return "NotSelfAdjoint";
    case ErrorCode::not_antisymmetric: return "NotAntisymmetric";
    case ErrorCode::not_hyperbolic: return "NotHyperbolic";
    case ErrorCode::not_symplectic: return "NotSymplectic";
    case ErrorCode::out_of_scope: return "OutOfScope";
    case ErrorCode::monodromy_mismatch: return "MonodromyMismatch";
    case ErrorCode::not_hyperbolic_torsion: return "NotHyperbolicTorsion";
    case ErrorCode::horizon_too_short: return "HorizonTooShort";
    case ErrorCode::exponential_overflow: return "ExponentialOverflow";
    case ErrorCode::singular_operator: return "SingularOperator";
    case ErrorCode::invalid_config: return "InvalidConfig";
  }
  return "Unknown";
}

}  // namespace cosym
