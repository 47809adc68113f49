#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace retx {

enum class Errc {
  InvalidArgument,
  Overflow,
  NonConvergence,
  DegenerateTruncation,
  NotMonotone,
  QuadratureFailure,
  NotInteger,
  EllNotOne,
  NoRoot,
  ConfigInvalid,
  CouplingInvalid,
  UnknownPreset,
  IoFailure,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, const std::string& what) {
  if (!ok) fail(Errc::InvalidArgument, what);
}

}  // namespace retx
