#pragma once

#include <stdexcept>
#include <string>

namespace dslic {

enum class ErrorCode {
  invalid_argument = 1,
  io = 2,
  format = 3,
  range = 4,
  dimension = 5,
  empty = 6,
};

// Every failure raised by the core carries one of the codes above; the C API
// maps them 1:1 onto dslic_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dslic
