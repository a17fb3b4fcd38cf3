#pragma once

#include <stdexcept>
#include <string>

namespace hdx {

// Numeric values double as CLI exit codes.
enum class ErrorCode : int {
  kInvalidArgument = 2,
  kInfeasible = 3,
  kNumerical = 4,
  kIo = 5,
  kInternal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorCode::kInvalidArgument, what);
}

}  // namespace hdx
