#pragma once

#include <cstddef>
#include <vector>

#include "weakmeas/protocols.hpp"

namespace weakmeas {

/// Two-sided 95% normal quantile used for every interval in this module.
inline constexpr double kZ95 = 1.959963984540054;

/// Records of one log sharing a final outcome, in log order.
struct SubEnsemble {
  const RunLog* parent = nullptr;
  Sign selector = Sign::Plus;
  std::vector<RunRecord> records;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
};

/// Observed proportion with its Wilson score interval.
struct Proportion {
  std::size_t successes = 0;
  std::size_t trials = 0;
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
};

struct MeanEstimate {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

struct OutcomeComparison {
  Outcome outcome;
  std::size_t count = 0;
  double empirical = 0.0;
  double exact = 0.0;
  double z = 0.0;
};

struct ComparisonReport {
  std::vector<OutcomeComparison> rows;
  std::size_t trials = 0;
  double max_abs_z = 0.0;
  double total_variation = 0.0;
};

/// Wilson score interval at normal quantile `z`.
Proportion wilson(std::size_t successes, std::size_t trials, double z = kZ95);

SubEnsemble subensemble(const RunLog& log, Sign final);

/// Fraction of flagged records. Throws MultiStepLog for logs without flags.
Proportion mismatch_rate(const RunLog& log);

/// Frequency of `pointer` at `step` within the sub-ensemble.
Proportion conditional_frequency(const SubEnsemble& sub, PointerOutcome pointer, std::size_t step);

/// Mean of the +/-1-coded pointer readings at `step`; stderr is the sample
/// standard deviation over sqrt(N) (zero for a single record).
MeanEstimate pointer_mean(const SubEnsemble& sub, std::size_t step);

/// Empirical joint frequencies against an exact table: per-outcome binomial
/// z-scores and the total-variation distance.
///
/// An outcome with exact probability 0 gets z = 0 when unobserved and +inf
/// otherwise. Throws ConfigMismatch when the table was computed for another
/// experiment.
ComparisonReport compare(const RunLog& log, const ProbabilityTable& exact);

}  // namespace weakmeas
