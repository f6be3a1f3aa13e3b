#include "weakmeas/weakvalue.hpp"

#include <cmath>

#include "weakmeas/errors.hpp"
#include "weakmeas/joint_state.hpp"

namespace weakmeas {

namespace {

constexpr double kImpossiblePostselection = 1e-12;

struct SubEnsembleMean {
  double mean;
  double stderr_mean;
  std::size_t count;
};

SubEnsembleMean postselected_mean(const RunLog& log, Readout expected) {
  if (log.config.steps.empty()) throw Error(Errc::InvalidConfig, "log has no weak steps");
  if (log.config.steps.front().readout != expected) {
    throw Error(Errc::InvalidConfig, expected == Readout::Standard
                                         ? "estimator needs a standard-readout log"
                                         : "conjugate log must use the conjugate readout");
  }
  std::size_t n = 0;
  std::size_t ups = 0;
  for (const RunRecord& r : log.records) {
    if (r.final != Sign::Plus) continue;
    ++n;
    if (r.pointers.front() == PointerOutcome::Up) ++ups;
  }
  if (n == 0) throw Error(Errc::EmptySubEnsemble, "no trials survived post-selection");
  const double nd = static_cast<double>(n);
  const double mean = (2.0 * static_cast<double>(ups) - nd) / nd;
  const double smoothed = (static_cast<double>(ups) + 1.0) / (nd + 2.0);
  return {mean, std::sqrt(4.0 * smoothed * (1.0 - smoothed) / nd), n};
}

}  // namespace

WeakValue weak_value(const Ket& pre, const Ket& post, const Operator& observable) {
  const Complex overlap = inner(post, pre);
  const double scale = pre.norm() * post.norm();
  if (scale <= kZeroNorm || std::abs(overlap) <= kOrthogonalOverlap * scale) {
    throw Error(Errc::OrthogonalPrePost,
                "pre- and post-selected states are orthogonal; the weak value is undefined");
  }
  return {inner(post, observable * pre) / overlap, pre, post, observable};
}

double exact_conditional_pointer_mean(const Ket& pre, const Ket& post, const Operator& observable,
                                      const UnsharpCoupling& coupling, Readout readout) {
  const JointState joint = couple(normalize(pre), observable, coupling);
  const Ket pointer = contract_factor(joint, joint.system_index(), normalize(post));
  const double p_post = pointer.norm_squared();
  if (p_post <= kImpossiblePostselection) {
    throw Error(Errc::ImpossiblePostselection, "post-selection probability is " +
                                                   std::to_string(p_post));
  }
  const auto basis = pointer_basis(readout);
  const double up = std::norm(inner(basis[0], pointer));
  const double down = std::norm(inner(basis[1], pointer));
  return (up - down) / p_post;
}

WeakValueEstimate estimate_weak_value(const RunLog& log, const UnsharpCoupling& coupling,
                                      const RunLog* conjugate) {
  const double eps = coupling.strength();
  if (eps <= 0.0) {
    throw Error(Errc::ZeroStrength, "a maximally weak coupling carries no information");
  }
  const SubEnsembleMean standard = postselected_mean(log, Readout::Standard);

  WeakValueEstimate est;
  est.epsilon = eps;
  est.trials_used = standard.count;
  est.re = standard.mean / (2.0 * eps);
  est.stderr_re = standard.stderr_mean / (2.0 * eps);
  if (conjugate != nullptr) {
    const SubEnsembleMean conj = postselected_mean(*conjugate, Readout::Conjugate);
    est.im = -conj.mean / (2.0 * eps);
    est.stderr_im = conj.stderr_mean / (2.0 * eps);
  }
  return est;
}

ExperimentConfig weak_value_experiment(const Ket& pre, const Ket& post,
                                       const BlochDirection& direction,
                                       const UnsharpCoupling& coupling, Readout readout,
                                       std::uint64_t trials, std::uint64_t seed) {
  const auto n = bloch_vector(post);
  ExperimentConfig config;
  config.pre = normalize(pre);
  config.steps = {WeakStep{direction, coupling, readout}};
  config.final_direction = BlochDirection::normalized(n[0], n[1], n[2]);
  config.order = Order::PointerFirst;
  config.trials = trials;
  config.seed = seed;
  return config;
}

}  // namespace weakmeas
