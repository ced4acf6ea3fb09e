#pragma once

#include <stdexcept>
#include <string>

namespace gca {

// Error classes surfaced by library operations. Axiom violations found by
// validate() are data, not errors; everything here is a precondition or
// input failure.
enum class ErrorCode {
  parent_mismatch,
  unknown_unit,
  not_orbit,
  isotropy,
  not_invariant,
  bad_group,
  not_principal,
  not_normal,
  not_selfadjoint,
  radius,
  bad_model,
  not_abelian,
  hypothesis_fails,
  no_separation,
  config,
  model_file,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::parent_mismatch: return "E_PARENT_MISMATCH";
    case ErrorCode::unknown_unit: return "E_UNKNOWN_UNIT";
    case ErrorCode::not_orbit: return "E_NOT_ORBIT";
    case ErrorCode::isotropy: return "E_ISOTROPY";
    case ErrorCode::not_invariant: return "E_NOT_INVARIANT";
    case ErrorCode::bad_group: return "E_BAD_GROUP";
    case ErrorCode::not_principal: return "E_NOT_PRINCIPAL";
    case ErrorCode::not_normal: return "E_NOT_NORMAL";
    case ErrorCode::not_selfadjoint: return "E_NOT_SELFADJOINT";
    case ErrorCode::radius: return "E_RADIUS";
    case ErrorCode::bad_model: return "E_BAD_MODEL";
    case ErrorCode::not_abelian: return "E_NOT_ABELIAN";
    case ErrorCode::hypothesis_fails: return "E_HYPOTHESIS_FAILS";
    case ErrorCode::no_separation: return "E_NO_SEPARATION";
    case ErrorCode::config: return "E_CONFIG";
    case ErrorCode::model_file: return "E_MODEL";
  }
  return "E_UNKNOWN";
}

}  // namespace gca
