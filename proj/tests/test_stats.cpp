#include <doctest.h>

#include <cmath>

#include "weakmeas/errors.hpp"
#include "weakmeas/stats.hpp"

using namespace weakmeas;

namespace {

constexpr auto U = PointerOutcome::Up;
constexpr auto D = PointerOutcome::Down;

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::InvalidState;
}

ExperimentConfig single_z(UnsharpCoupling c, std::uint64_t trials, std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.steps = {WeakStep{BlochDirection::Z(), c}};
  cfg.trials = trials;
  cfg.seed = seed;
  return cfg;
}

// The eight hand-recorded runs with b^2 = 1/4.
RunLog eight_recorded_runs() {
  RunLog log{single_z(UnsharpCoupling(std::sqrt(0.75), 0.5), 8, 0), {}};
  const struct {
    PointerOutcome p;
    Sign s;
  } rows[] = {{D, Sign::Minus}, {U, Sign::Plus}, {U, Sign::Minus}, {D, Sign::Minus},
              {U, Sign::Plus},  {D, Sign::Plus}, {D, Sign::Minus}, {U, Sign::Plus}};
  std::uint64_t serial = 0;
  for (const auto& row : rows) {
    RunRecord r;
    r.serial = ++serial;
    r.pointers = {row.p};
    r.final = row.s;
    r.mismatch = (row.p == U) != (row.s == Sign::Plus);
    log.records.push_back(r);
  }
  return log;
}

std::vector<std::uint64_t> serials(const SubEnsemble& s) {
  std::vector<std::uint64_t> out;
  for (const RunRecord& r : s.records) out.push_back(r.serial);
  return out;
}

}  // namespace

TEST_CASE("eight recorded runs") {
  const RunLog log = eight_recorded_runs();
  const SubEnsemble plus = subensemble(log, Sign::Plus);
  const SubEnsemble minus = subensemble(log, Sign::Minus);
  CHECK(serials(plus) == std::vector<std::uint64_t>{2, 5, 6, 8});
  CHECK(serials(minus) == std::vector<std::uint64_t>{1, 3, 4, 7});
  CHECK(plus.parent == &log);
  for (const RunRecord& r : plus.records) CHECK(r.final == Sign::Plus);

  const Proportion m = mismatch_rate(log);
  CHECK(m.value == 0.25);
  CHECK(m.successes == 2);
  CHECK(m.lower < 0.25);
  CHECK(m.upper > 0.25);

  CHECK(conditional_frequency(plus, U, 0).value == 0.75);
  CHECK(pointer_mean(plus, 0).mean == 0.5);
  // Sample stdev of {1,1,-1,1} is 1, over sqrt(4).
  CHECK(pointer_mean(plus, 0).stderr_mean == doctest::Approx(0.5));
}

TEST_CASE("sub-ensemble edge cases") {
  RunLog log = eight_recorded_runs();
  for (RunRecord& r : log.records) r.final = Sign::Plus;
  const SubEnsemble none = subensemble(log, Sign::Minus);
  CHECK(none.empty());
  CHECK(code_of([&] { conditional_frequency(none, U, 0); }) == Errc::EmptySubEnsemble);
  CHECK(code_of([&] { pointer_mean(none, 0); }) == Errc::EmptySubEnsemble);
  CHECK(code_of([&] { pointer_mean(subensemble(log, Sign::Plus), 3); }) == Errc::BadSubsystemIndex);

  RunLog all_up = eight_recorded_runs();
  for (RunRecord& r : all_up.records) r.pointers = {U};
  CHECK(pointer_mean(subensemble(all_up, Sign::Plus), 0).mean == 1.0);
}

TEST_CASE("simulated logs") {
  const RunLog sharp = run(single_z(UnsharpCoupling::sharp(), 5000, 1));
  CHECK(mismatch_rate(sharp).value == 0.0);
  CHECK(mismatch_rate(sharp).lower == 0.0);

  const RunLog weak = run(single_z(UnsharpCoupling::maximally_weak(), 100000, 2));
  for (Sign s : {Sign::Plus, Sign::Minus}) {
    const SubEnsemble sub = subensemble(weak, s);
    const Proportion p = conditional_frequency(sub, U, 0);
    CHECK(std::abs(p.value - 0.5) < 4 * std::sqrt(0.25 / sub.size()));
  }

  const UnsharpCoupling c(std::sqrt(0.75), 0.5);
  const RunLog log = run(single_z(c, 100000, 3));
  CHECK(std::abs(mismatch_rate(log).value - 0.25) < 4 * std::sqrt(0.25 * 0.75 / 1e5));
  const SubEnsemble plus = subensemble(log, Sign::Plus);
  CHECK(std::abs(pointer_mean(plus, 0).mean - 0.5) < 4 * pointer_mean(plus, 0).stderr_mean);

  ExperimentConfig two = single_z(c, 10, 4);
  two.steps.push_back(two.steps.front());
  CHECK(code_of([&] { mismatch_rate(run(two)); }) == Errc::MultiStepLog);
}

TEST_CASE("partition and frequency algebra") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const double a2 = 0.5 + 0.05 * static_cast<double>(seed);
    const RunLog log = run(single_z(UnsharpCoupling::from_a(std::sqrt(a2)), 997, seed));
    const SubEnsemble plus = subensemble(log, Sign::Plus);
    const SubEnsemble minus = subensemble(log, Sign::Minus);
    CHECK(plus.size() + minus.size() == log.records.size());
    // Mismatches are d-readings among + plus u-readings among -.
    const std::size_t off = (plus.empty() ? 0 : conditional_frequency(plus, D, 0).successes) +
                            (minus.empty() ? 0 : conditional_frequency(minus, U, 0).successes);
    CHECK(mismatch_rate(log).successes == off);
    const double weighted =
        (plus.empty() ? 0.0 : conditional_frequency(plus, D, 0).value * plus.size()) +
        (minus.empty() ? 0.0 : conditional_frequency(minus, U, 0).value * minus.size());
    CHECK(mismatch_rate(log).value == doctest::Approx(weighted / log.records.size()).epsilon(1e-15));
  }
}

TEST_CASE("wilson interval") {
  const Proportion p = wilson(0, 10);
  CHECK(p.lower == 0.0);
  CHECK(p.upper > 0.0);
  CHECK(wilson(10, 10).upper == doctest::Approx(1.0));
  const Proportion mid = wilson(50, 100);
  CHECK(mid.lower == doctest::Approx(0.40383).epsilon(1e-4));
  CHECK(mid.upper == doctest::Approx(0.59617).epsilon(1e-4));

  // Coverage over 500 seeded replications at N = 1000.
  const UnsharpCoupling c(std::sqrt(0.75), 0.5);
  int covered = 0;
  for (std::uint64_t rep = 0; rep < 500; ++rep) {
    const Proportion m = mismatch_rate(run(single_z(c, 1000, 10000 + rep)));
    covered += m.lower <= 0.25 && 0.25 <= m.upper;
  }
  CHECK(covered >= 465);
  MESSAGE("coverage " << covered << "/500");
}

TEST_CASE("compare") {
  const UnsharpCoupling c(0.8, 0.6);
  const ExperimentConfig cfg = single_z(c, 100000, 8);
  const RunLog log = run(cfg);
  const ComparisonReport good = compare(log, exact_distribution(cfg));
  CHECK(good.rows.size() == 4);
  CHECK(good.trials == 100000);
  CHECK(good.total_variation < 0.01);
  CHECK(good.max_abs_z < 5);
  std::size_t counted = 0;
  for (const OutcomeComparison& row : good.rows) counted += row.count;
  CHECK(counted == 100000);

  // Swapped amplitudes: same experiment shape, wrong probabilities.
  ProbabilityTable wrong = exact_distribution(cfg);
  for (auto& [o, p] : wrong.entries) {
    p = (o.pointers[0] == U) == (o.final == Sign::Plus) ? c.b() * c.b() / 2 : c.a() * c.a() / 2;
  }
  const ComparisonReport bad = compare(log, wrong);
  CHECK(bad.max_abs_z > 10);
  CHECK(bad.total_variation > 0.2);
  CHECK(bad.total_variation <= 1.0);

  ExperimentConfig other = cfg;
  other.final_direction = BlochDirection::X();
  CHECK(code_of([&] { compare(log, exact_distribution(other)); }) == Errc::ConfigMismatch);

  // A probability-zero outcome that never occurs contributes z = 0.
  const ExperimentConfig sharp = single_z(UnsharpCoupling::sharp(), 1000, 9);
  const ComparisonReport s = compare(run(sharp), exact_distribution(sharp));
  CHECK(std::isfinite(s.max_abs_z));
  CHECK(s.total_variation < 0.1);
}

TEST_CASE("total variation shrinks with N") {
  const UnsharpCoupling c(0.9, std::sqrt(1 - 0.81));
  double previous = 1.0;
  for (std::uint64_t n : {1000ULL, 100000ULL}) {
    const ExperimentConfig cfg = single_z(c, n, 31);
    const double tv = compare(run(cfg), exact_distribution(cfg)).total_variation;
    CHECK(tv < previous);
    previous = tv;
  }
}
