#pragma once

#include <stdexcept>
#include <string>

namespace opwlab {

// Error taxonomy used across modules. Each value corresponds to one of the
// failure modes named in the operation contracts.
enum class Errc {
  invalid_argument,
  grid_too_small,
  resolution,
  numerical_failure,
  not_hilbert_schmidt,
  size_cap,
  division_floor,
  undefined_ratio,
  io,
  parse,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace opwlab
