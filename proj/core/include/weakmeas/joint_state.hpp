#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "weakmeas/qstate.hpp"
#include "weakmeas/rng.hpp"

namespace weakmeas {

enum class FactorRole { System, Pointer };

struct Factor {
  std::string label;
  std::size_t dim;
  FactorRole role;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Pure state on a tensor product of labelled factors.
///
/// Amplitudes are row-major over `factors()`: factor 0 is the slowest index.
/// Pointer factors precede the system factor, so a single coupling yields the
/// ordering |pointer>|system>.
class JointState {
 public:
  /// Validates that the factor dims multiply to `ket.dim()` and that the ket
  /// is normalized (1e-10).
  JointState(std::vector<Factor> factors, Ket ket);

  /// A lone system factor; the starting point for multi-pointer couplings.
  static JointState system_only(const Ket& system, std::string label = "S");

  const std::vector<Factor>& factors() const noexcept { return factors_; }
  const Ket& ket() const noexcept { return ket_; }

  std::size_t factor_count() const noexcept { return factors_.size(); }
  std::size_t system_index() const;
  std::vector<std::size_t> pointer_indices() const;
  std::optional<std::size_t> find(std::string_view label) const;

  /// Product of dims of factors strictly before / after `index`.
  std::size_t left_dim(std::size_t index) const;
  std::size_t right_dim(std::size_t index) const;

 private:
  std::vector<Factor> factors_;
  Ket ket_;
};

struct FactorMeasurement {
  std::size_t index;
  double probability;
  /// Remaining factors, renormalized. Empty factor list when the measured
  /// factor was the only one (the ket is then the 1-dim scalar 1).
  JointState remaining;
};

/// Reduced density matrix of one factor (partial trace over the rest).
DensityMatrix partial_state(const JointState& joint, std::size_t subsystem);

/// Unnormalized amplitude <b|_factor |joint>, as a ket over the other factors.
Ket contract_factor(const JointState& joint, std::size_t factor, const Ket& bra);

/// Born-rule measurement of one factor in an orthonormal basis; the measured
/// factor is removed from the returned state.
FactorMeasurement measure_factor(const JointState& joint, std::size_t factor,
                                 std::span<const Ket> basis, TrialStream& rng);

/// Inserts a new factor of dimension `branches.size()` at position `at`,
/// with amplitude |m>_new (branches[m] acting on factor `target`)|joint>.
/// Indices `at` and `target` refer to the input factor list.
JointState insert_branching_factor(const JointState& joint, std::size_t at, Factor factor,
                                   std::size_t target, std::span<const Operator> branches);

}  // namespace weakmeas
