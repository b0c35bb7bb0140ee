#ifndef FZR_CORE_ERRORS_HPP
#define FZR_CORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fzr {

enum class ErrorCode {
  invalid_argument = 1,
  domain = 2,
  parse = 3,
  numeric = 4,  // non-convergence of an iterative routine
  io = 5,
  internal = 6,
};

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& msg) {
  if (!cond) throw Error(code, msg);
}

}  // namespace fzr

#endif
