#include "retx/error.hpp"

namespace retx {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Overflow: return "Overflow";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::DegenerateTruncation: return "DegenerateTruncation";
    case Errc::NotMonotone: return "NotMonotone";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::NotInteger: return "NotInteger";
    case Errc::EllNotOne: return "EllNotOne";
    case Errc::NoRoot: return "NoRoot";
    case Errc::ConfigInvalid: return "ConfigInvalid";
    case Errc::CouplingInvalid: return "CouplingInvalid";
    case Errc::UnknownPreset: return "UnknownPreset";
    case Errc::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

}  // namespace retx
