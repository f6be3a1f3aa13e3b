#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "weakmeas/protocols.hpp"
#include "weakmeas/qstate.hpp"
#include "weakmeas/unsharp.hpp"

namespace weakmeas {

/// |<post|pre>| at or below this is treated as orthogonal.
inline constexpr double kOrthogonalOverlap = 1e-12;

/// Normalized transition amplitude <post|O|pre> / <post|pre>.
struct WeakValue {
  Complex value;
  Ket pre;
  Ket post;
  Operator observable;
};

WeakValue weak_value(const Ket& pre, const Ket& post, const Operator& observable);

/// Exact mean of the +/-1-coded pointer reading over the runs post-selected
/// on `post`, obtained from the full coupled state.
///
/// With the standard readout and a spin observable this equals
/// 2 eps Re(W) / (1 + eps^2 |W|^2), where W is the weak value and eps the
/// coupling strength. The conjugate readout yields -2 eps Im(W) / (1 + eps^2 |W|^2).
double exact_conditional_pointer_mean(const Ket& pre, const Ket& post, const Operator& observable,
                                      const UnsharpCoupling& coupling,
                                      Readout readout = Readout::Standard);

struct WeakValueEstimate {
  double re = 0.0;
  std::optional<double> im;
  double stderr_re = 0.0;
  std::optional<double> stderr_im;
  std::size_t trials_used = 0;
  double epsilon = 0.0;
};

/// Estimates the weak value from the sub-ensemble of `log` whose final
/// outcome is +.
///
/// Re(W) ~ mean / (2 eps); Im(W) ~ -mean_conj / (2 eps) when a
/// conjugate-readout log of the same experiment is supplied. Both are only
/// first-order accurate in eps. Standard errors use the binomial variance of
/// the mean with an add-one smoothed frequency, so they stay positive when
/// every reading agrees.
WeakValueEstimate estimate_weak_value(const RunLog& log, const UnsharpCoupling& coupling,
                                      const RunLog* conjugate = nullptr);

/// Single-step pointer-first experiment that post-selects on `post`: the
/// final measurement is along the Bloch vector of `post`, outcome + selects.
ExperimentConfig weak_value_experiment(const Ket& pre, const Ket& post,
                                       const BlochDirection& direction,
                                       const UnsharpCoupling& coupling, Readout readout,
                                       std::uint64_t trials, std::uint64_t seed);

}  // namespace weakmeas
