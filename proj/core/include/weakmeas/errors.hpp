#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace weakmeas {

enum class Errc {
  ZeroVector,
  InvalidState,
  DimMismatch,
  NotHermitian,
  IncompleteBasis,
  BadSubsystemIndex,
  BadDim,
  BadGrid,
  InvalidCoupling,
  InvalidDirection,
  NoPointerFactor,
  OrthogonalPrePost,
  ImpossiblePostselection,
  EmptySubEnsemble,
  ZeroStrength,
  InvalidConfig,
  TooManySteps,
  MultiStepLog,
  ConfigMismatch,
};

std::string_view to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (the CLI in particular) can map them onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what);

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace weakmeas
