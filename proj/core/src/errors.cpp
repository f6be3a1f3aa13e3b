#include "weakmeas/errors.hpp"

namespace weakmeas {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::ZeroVector: return "ZeroVector";
    case Errc::InvalidState: return "InvalidState";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::IncompleteBasis: return "IncompleteBasis";
    case Errc::BadSubsystemIndex: return "BadSubsystemIndex";
    case Errc::BadDim: return "BadDim";
    case Errc::BadGrid: return "BadGrid";
    case Errc::InvalidCoupling: return "InvalidCoupling";
    case Errc::InvalidDirection: return "InvalidDirection";
    case Errc::NoPointerFactor: return "NoPointerFactor";
    case Errc::OrthogonalPrePost: return "OrthogonalPrePost";
    case Errc::ImpossiblePostselection: return "ImpossiblePostselection";
    case Errc::EmptySubEnsemble: return "EmptySubEnsemble";
    case Errc::ZeroStrength: return "ZeroStrength";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::TooManySteps: return "TooManySteps";
    case Errc::MultiStepLog: return "MultiStepLog";
    case Errc::ConfigMismatch: return "ConfigMismatch";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace weakmeas
