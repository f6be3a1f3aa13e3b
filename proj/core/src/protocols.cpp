#include "weakmeas/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <thread>

#include "weakmeas/errors.hpp"
#include "weakmeas/joint_state.hpp"

namespace weakmeas {

namespace {

void require_order(const ExperimentConfig& config, Order order, const char* runner) {
  if (config.order != order) {
    throw Error(Errc::InvalidConfig, std::string(runner) + " called with the wrong measurement order");
  }
}

std::optional<bool> mismatch_flag(const std::vector<PointerOutcome>& pointers, Sign final) {
  if (pointers.size() != 1) return std::nullopt;
  const bool pointer_up = pointers.front() == PointerOutcome::Up;
  return pointer_up != (final == Sign::Plus);
}

PointerOutcome outcome_from_index(std::size_t i) {
  return i == 0 ? PointerOutcome::Up : PointerOutcome::Down;
}

// Fills records[i] = trial(i) for every trial, split into contiguous chunks
// across worker threads. Each trial draws from its own stream, so the result
// does not depend on the thread count.
RunLog run_trials(const ExperimentConfig& config,
                  const std::function<RunRecord(std::uint64_t, TrialStream&)>& trial) {
  RunLog log{config, {}};
  log.records.resize(config.trials);

  unsigned workers = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  workers = std::max(1u, workers);
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, config.trials));

  auto work = [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      TrialStream rng = TrialStream::for_trial(config.seed, i);
      log.records[i] = trial(i, rng);
      log.records[i].serial = i + 1;
    }
  };

  if (workers <= 1) {
    work(0, config.trials);
    return log;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::uint64_t chunk = (config.trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(config.trials, w * chunk);
    const std::uint64_t end = std::min<std::uint64_t>(config.trials, begin + chunk);
    if (begin < end) pool.emplace_back(work, begin, end);
  }
  pool.clear();  // joins
  return log;
}

// Enumerates every outcome tuple in the canonical order used by the table:
// pointers lexicographic (u < d), then final (+ < -).
template <typename Fn>
void for_each_outcome(std::size_t steps, Fn&& fn) {
  const std::size_t count = std::size_t{1} << steps;
  Outcome o;
  o.pointers.resize(steps);
  for (std::size_t bits = 0; bits < count; ++bits) {
    for (std::size_t j = 0; j < steps; ++j) {
      o.pointers[j] = ((bits >> (steps - 1 - j)) & 1U) ? PointerOutcome::Down : PointerOutcome::Up;
    }
    for (const Sign s : {Sign::Plus, Sign::Minus}) {
      o.final = s;
      fn(o);
    }
  }
}

ProbabilityTable enumerate_pointer_first(const ExperimentConfig& config) {
  std::vector<KrausPair> kraus;
  kraus.reserve(config.steps.size());
  for (const WeakStep& step : config.steps) {
    kraus.push_back(readout_kraus_ops(spin_observable(step.direction), step.coupling, step.readout));
  }
  const auto finals = final_basis(config.final_direction);
  const Ket pre = normalize(config.pre);

  ProbabilityTable table{config, {}};
  for_each_outcome(config.steps.size(), [&](const Outcome& o) {
    Ket branch = pre;
    for (std::size_t j = 0; j < o.pointers.size(); ++j) {
      branch = (o.pointers[j] == PointerOutcome::Up ? kraus[j].up : kraus[j].down) * branch;
    }
    const Ket& f = finals[o.final == Sign::Plus ? 0 : 1];
    table.entries.emplace(o, std::norm(inner(f, branch)));
  });
  return table;
}

ProbabilityTable enumerate_postselect_first(const ExperimentConfig& config) {
  JointState joint = JointState::system_only(normalize(config.pre));
  for (std::size_t j = 0; j < config.steps.size(); ++j) {
    const WeakStep& step = config.steps[j];
    joint = couple_pointer(joint, spin_observable(step.direction), step.coupling,
                           "P" + std::to_string(j + 1));
  }
  const auto finals = final_basis(config.final_direction);
  const std::size_t steps = config.steps.size();

  ProbabilityTable table{config, {}};
  std::array<std::vector<Complex>, 2> amplitudes;
  for (std::size_t f = 0; f < 2; ++f) {
    const Ket pointers = contract_factor(joint, joint.system_index(), finals[f]);
    std::vector<Complex> amps(pointers.amps().begin(), pointers.amps().end());
    // Rotate pointer j into its readout basis: amp'[k] = sum_m conj(r_k[m]) amp[m].
    for (std::size_t j = 0; j < steps; ++j) {
      const auto basis = pointer_basis(config.steps[j].readout);
      const std::size_t stride = std::size_t{1} << (steps - 1 - j);
      for (std::size_t base = 0; base < amps.size(); ++base) {
        if (base & stride) continue;
        const Complex up = amps[base];
        const Complex down = amps[base | stride];
        amps[base] = std::conj(basis[0][0]) * up + std::conj(basis[0][1]) * down;
        amps[base | stride] = std::conj(basis[1][0]) * up + std::conj(basis[1][1]) * down;
      }
    }
    amplitudes[f] = std::move(amps);
  }

  // Row-major pointer index: P1 is the most significant bit, matching for_each_outcome.
  std::size_t row = 0;
  for_each_outcome(steps, [&](const Outcome& o) {
    const std::size_t f = o.final == Sign::Plus ? 0 : 1;
    table.entries.emplace(o, std::norm(amplitudes[f][row]));
    if (f == 1) ++row;
  });
  return table;
}

}  // namespace

// --- config ----------------------------------------------------------------

void ExperimentConfig::validate() const {
  if (trials < 1) throw Error(Errc::InvalidConfig, "trials must be at least 1");
  if (steps.empty()) throw Error(Errc::InvalidConfig, "at least one weak step is required");
  if (pre.dim() != 2) throw Error(Errc::InvalidConfig, "pre-selected state must be a qubit");
  if (std::abs(pre.norm() - 1.0) > kNormTolerance) {
    throw Error(Errc::InvalidConfig, "pre-selected state must be normalized");
  }
}

bool same_experiment(const ExperimentConfig& a, const ExperimentConfig& b) {
  return approx_equal(a.pre, b.pre, 1e-12) && a.steps == b.steps &&
         a.final_direction == b.final_direction;
}

// --- ProbabilityTable ------------------------------------------------------

double ProbabilityTable::probability(const Outcome& o) const {
  const auto it = entries.find(o);
  return it == entries.end() ? 0.0 : it->second;
}

double ProbabilityTable::total() const {
  double t = 0.0;
  for (const auto& [o, p] : entries) t += p;
  return t;
}

double ProbabilityTable::final_marginal(Sign final) const {
  double t = 0.0;
  for (const auto& [o, p] : entries) {
    if (o.final == final) t += p;
  }
  return t;
}

double ProbabilityTable::final_given_pointer(Sign final, std::size_t step,
                                             PointerOutcome pointer) const {
  double joint = 0.0;
  double marginal = 0.0;
  for (const auto& [o, p] : entries) {
    if (step >= o.pointers.size() || o.pointers[step] != pointer) continue;
    marginal += p;
    if (o.final == final) joint += p;
  }
  return marginal > 0.0 ? joint / marginal : 0.0;
}

double ProbabilityTable::pointer_given_final(PointerOutcome pointer, std::size_t step,
                                             Sign final) const {
  double joint = 0.0;
  double marginal = 0.0;
  for (const auto& [o, p] : entries) {
    if (o.final != final || step >= o.pointers.size()) continue;
    marginal += p;
    if (o.pointers[step] == pointer) joint += p;
  }
  return marginal > 0.0 ? joint / marginal : 0.0;
}

// --- runners ---------------------------------------------------------------

std::vector<Ket> final_basis(const BlochDirection& direction) {
  const auto eig = eigenbasis(spin_observable(direction));
  return {eig[0].vector, eig[1].vector};
}

RunLog run_pointer_first(const ExperimentConfig& config) {
  config.validate();
  require_order(config, Order::PointerFirst, "run_pointer_first");

  std::vector<Operator> observables;
  for (const WeakStep& step : config.steps) observables.push_back(spin_observable(step.direction));
  const auto finals = final_basis(config.final_direction);

  return run_trials(config, [&](std::uint64_t, TrialStream& rng) {
    RunRecord rec;
    rec.pointers.reserve(config.steps.size());
    Ket system = config.pre;
    for (std::size_t j = 0; j < config.steps.size(); ++j) {
      const WeakStep& step = config.steps[j];
      const JointState joint = couple(system, observables[j], step.coupling);
      PointerDetection hit = detect_pointer(joint, rng, step.readout);
      rec.pointers.push_back(hit.outcome);
      system = std::move(hit.system);
      if (config.record_states) rec.states.push_back(system);
    }
    const BornOutcome last = born_sample(system, finals, rng);
    rec.final = last.index == 0 ? Sign::Plus : Sign::Minus;
    rec.mismatch = mismatch_flag(rec.pointers, rec.final);
    return rec;
  });
}

RunLog run_postselect_first(const ExperimentConfig& config) {
  config.validate();
  require_order(config, Order::PostselectFirst, "run_postselect_first");
  if (config.steps.size() > kMaxEnumeratedSteps) {
    throw Error(Errc::TooManySteps, "post-selection-first runs are limited to " +
                                        std::to_string(kMaxEnumeratedSteps) + " steps");
  }

  // Every trial starts from the same entangled state.
  JointState entangled = JointState::system_only(config.pre);
  for (std::size_t j = 0; j < config.steps.size(); ++j) {
    const WeakStep& step = config.steps[j];
    entangled = couple_pointer(entangled, spin_observable(step.direction), step.coupling,
                               "P" + std::to_string(j + 1));
  }
  const auto finals = final_basis(config.final_direction);
  std::vector<std::array<Ket, 2>> readouts;
  for (const WeakStep& step : config.steps) readouts.push_back(pointer_basis(step.readout));

  return run_trials(config, [&](std::uint64_t, TrialStream& rng) {
    RunRecord rec;
    const Postselection post = postselect_system(entangled, finals, rng);
    rec.final = post.index == 0 ? Sign::Plus : Sign::Minus;
    JointState pointers = post.pointers;
    for (std::size_t j = 0; j < config.steps.size(); ++j) {
      // Pointers stay ordered P1..Pn; the next undetected one is always factor 0.
      FactorMeasurement m = measure_factor(pointers, 0, readouts[j], rng);
      rec.pointers.push_back(outcome_from_index(m.index));
      pointers = std::move(m.remaining);
    }
    rec.mismatch = mismatch_flag(rec.pointers, rec.final);
    return rec;
  });
}

RunLog run_chain(const ExperimentConfig& config) {
  if (config.steps.size() < 2) {
    throw Error(Errc::InvalidConfig, "a chain needs at least two weak steps");
  }
  return run_pointer_first(config);
}

RunLog run(const ExperimentConfig& config) {
  return config.order == Order::PointerFirst ? run_pointer_first(config)
                                             : run_postselect_first(config);
}

ProbabilityTable exact_distribution(const ExperimentConfig& config) {
  return exact_distribution(config, config.order);
}

ProbabilityTable exact_distribution(const ExperimentConfig& config, Order order) {
  if (config.steps.size() > kMaxEnumeratedSteps) {
    throw Error(Errc::TooManySteps, "exact enumeration is limited to " +
                                        std::to_string(kMaxEnumeratedSteps) + " steps");
  }
  config.validate();
  return order == Order::PointerFirst ? enumerate_pointer_first(config)
                                      : enumerate_postselect_first(config);
}

}  // namespace weakmeas
