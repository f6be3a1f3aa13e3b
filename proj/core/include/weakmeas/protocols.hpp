#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "weakmeas/qstate.hpp"
#include "weakmeas/unsharp.hpp"

namespace weakmeas {

/// Outcome of the final sharp measurement: + is the +1 eigenvalue of sigma.n.
enum class Sign { Plus, Minus };

constexpr char sign_label(Sign s) noexcept { return s == Sign::Plus ? '+' : '-'; }

/// Whether pointers are detected before the final system measurement
/// (couple, detect, repeat) or after it (couple everything, measure the
/// system, then detect every pointer).
enum class Order { PointerFirst, PostselectFirst };

/// Beyond this many weak steps the outcome space (2^(steps+1) tuples) is not
/// enumerated and the post-selection-first joint state is not materialized.
inline constexpr std::size_t kMaxEnumeratedSteps = 15;

struct WeakStep {
  BlochDirection direction;
  UnsharpCoupling coupling;
  Readout readout = Readout::Standard;

  friend bool operator==(const WeakStep&, const WeakStep&) = default;
};

struct ExperimentConfig {
  Ket pre = states::x_plus();
  std::vector<WeakStep> steps;
  BlochDirection final_direction = BlochDirection::Z();
  Order order = Order::PointerFirst;
  std::uint64_t trials = 1;
  std::uint64_t seed = 0;
  /// Worker threads for Monte Carlo runs; 0 picks hardware concurrency.
  /// Results never depend on this value.
  unsigned threads = 1;
  /// Keep the collapsed system state after every pointer detection
  /// (pointer-first runs only).
  bool record_states = false;

  /// Throws InvalidConfig (trials, steps, pre-state) or TooManySteps.
  void validate() const;
};

/// Same physical experiment: pre-state, steps and final direction agree.
bool same_experiment(const ExperimentConfig& a, const ExperimentConfig& b);

struct RunRecord {
  /// 1-based particle serial number.
  std::uint64_t serial = 0;
  std::vector<PointerOutcome> pointers;
  Sign final = Sign::Plus;
  /// Pointer and final reading disagree; set for single-step runs only.
  std::optional<bool> mismatch;
  /// System state after each pointer detection, when recording is enabled.
  std::vector<Ket> states;
};

struct RunLog {
  ExperimentConfig config;
  std::vector<RunRecord> records;
};

struct Outcome {
  std::vector<PointerOutcome> pointers;
  Sign final = Sign::Plus;

  friend auto operator<=>(const Outcome&, const Outcome&) = default;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct ProbabilityTable {
  ExperimentConfig source;
  std::map<Outcome, double> entries;

  double probability(const Outcome& o) const;
  double total() const;
  double final_marginal(Sign final) const;
  /// P(final | pointer reading `pointer` at `step`).
  double final_given_pointer(Sign final, std::size_t step, PointerOutcome pointer) const;
  /// P(pointer reading at `step` | final).
  double pointer_given_final(PointerOutcome pointer, std::size_t step, Sign final) const;
};

/// Eigenkets of sigma.n ordered {+, -}.
std::vector<Ket> final_basis(const BlochDirection& direction);

RunLog run_pointer_first(const ExperimentConfig& config);
RunLog run_postselect_first(const ExperimentConfig& config);
/// Pointer-first run of two or more steps, each step using a fresh pointer.
RunLog run_chain(const ExperimentConfig& config);
/// Dispatches on config.order.
RunLog run(const ExperimentConfig& config);

/// Exact joint distribution under config.order.
ProbabilityTable exact_distribution(const ExperimentConfig& config);
/// Pointer-first enumerates sequential Kraus amplitude products;
/// post-selection-first contracts the full (steps + 1)-factor joint state.
ProbabilityTable exact_distribution(const ExperimentConfig& config, Order order);

}  // namespace weakmeas
