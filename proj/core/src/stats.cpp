#include "weakmeas/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "weakmeas/errors.hpp"

namespace weakmeas {

Proportion wilson(std::size_t successes, std::size_t trials, double z) {
  Proportion out;
  out.successes = successes;
  out.trials = trials;
  if (trials == 0) return out;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  out.value = p;
  // The score interval touches the boundary exactly at 0 and n successes.
  out.lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  out.upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return out;
}

SubEnsemble subensemble(const RunLog& log, Sign final) {
  SubEnsemble sub{&log, final, {}};
  std::copy_if(log.records.begin(), log.records.end(), std::back_inserter(sub.records),
               [final](const RunRecord& r) { return r.final == final; });
  return sub;
}

Proportion mismatch_rate(const RunLog& log) {
  if (log.config.steps.size() != 1) {
    throw Error(Errc::MultiStepLog, "mismatch rate is defined for single-step logs only");
  }
  std::size_t flagged = 0;
  for (const RunRecord& r : log.records) {
    if (!r.mismatch) throw Error(Errc::MultiStepLog, "record without mismatch flag");
    if (*r.mismatch) ++flagged;
  }
  return wilson(flagged, log.records.size());
}

Proportion conditional_frequency(const SubEnsemble& sub, PointerOutcome pointer, std::size_t step) {
  if (sub.empty()) throw Error(Errc::EmptySubEnsemble, "conditional frequency of an empty sub-ensemble");
  std::size_t hits = 0;
  for (const RunRecord& r : sub.records) {
    if (step >= r.pointers.size()) throw Error(Errc::BadSubsystemIndex, "step index out of range");
    if (r.pointers[step] == pointer) ++hits;
  }
  return wilson(hits, sub.size());
}

MeanEstimate pointer_mean(const SubEnsemble& sub, std::size_t step) {
  if (sub.empty()) throw Error(Errc::EmptySubEnsemble, "pointer mean of an empty sub-ensemble");
  double sum = 0.0;
  for (const RunRecord& r : sub.records) {
    if (step >= r.pointers.size()) throw Error(Errc::BadSubsystemIndex, "step index out of range");
    sum += pointer_value(r.pointers[step]);
  }
  const double n = static_cast<double>(sub.size());
  const double mean = sum / n;
  if (sub.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (const RunRecord& r : sub.records) {
    const double d = pointer_value(r.pointers[step]) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

ComparisonReport compare(const RunLog& log, const ProbabilityTable& exact) {
  if (!same_experiment(log.config, exact.source)) {
    throw Error(Errc::ConfigMismatch, "probability table was computed for a different experiment");
  }
  const std::size_t steps = log.config.steps.size();
  for (const auto& [o, p] : exact.entries) {
    if (o.pointers.size() != steps) {
      throw Error(Errc::ConfigMismatch, "probability table has the wrong number of steps");
    }
  }

  std::map<Outcome, std::size_t> counts;
  for (const RunRecord& r : log.records) ++counts[Outcome{r.pointers, r.final}];

  ComparisonReport report;
  report.trials = log.records.size();
  const double n = static_cast<double>(report.trials);

  std::map<Outcome, double> all = exact.entries;
  for (const auto& [o, c] : counts) all.emplace(o, 0.0);

  double tv = 0.0;
  for (const auto& [o, p] : all) {
    OutcomeComparison row;
    row.outcome = o;
    const auto it = counts.find(o);
    row.count = it == counts.end() ? 0 : it->second;
    row.empirical = n > 0 ? static_cast<double>(row.count) / n : 0.0;
    row.exact = p;
    const double var = p * (1.0 - p) / n;
    const double diff = row.empirical - p;
    if (var > 0.0) {
      row.z = diff / std::sqrt(var);
    } else if (diff != 0.0) {
      row.z = std::copysign(std::numeric_limits<double>::infinity(), diff);
    }
    tv += std::abs(diff);
    report.max_abs_z = std::max(report.max_abs_z, std::abs(row.z));
    report.rows.push_back(std::move(row));
  }
  report.total_variation = std::clamp(0.5 * tv, 0.0, 1.0);
  return report;
}

}  // namespace weakmeas
