#pragma once

#include <stdexcept>
#include <string>

namespace hpconc {

enum class errc {
  invalid_argument,
  arity_mismatch,
  space_too_large,
  scan_cap_exceeded,
  empty_subset,
  retry_exhausted,
  not_certified,
  parse_error,
};

inline const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::invalid_argument: return "invalid-argument";
    case errc::arity_mismatch: return "arity-mismatch";
    case errc::space_too_large: return "space-too-large";
    case errc::scan_cap_exceeded: return "scan-cap-exceeded";
    case errc::empty_subset: return "empty-subset";
    case errc::retry_exhausted: return "retry-exhausted";
    case errc::not_certified: return "not-certified";
    case errc::parse_error: return "parse-error";
  }
  return "unknown";
}

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace hpconc
