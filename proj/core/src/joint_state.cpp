#include "weakmeas/joint_state.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "weakmeas/errors.hpp"

namespace weakmeas {

namespace {

std::size_t product_of_dims(const std::vector<Factor>& factors) {
  return std::accumulate(factors.begin(), factors.end(), std::size_t{1},
                         [](std::size_t acc, const Factor& f) { return acc * f.dim; });
}

void require_factor(const JointState& joint, std::size_t index) {
  if (index >= joint.factor_count()) {
    throw Error(Errc::BadSubsystemIndex, "factor index " + std::to_string(index) +
                                             " out of range (" +
                                             std::to_string(joint.factor_count()) + " factors)");
  }
}

}  // namespace

JointState::JointState(std::vector<Factor> factors, Ket ket)
    : factors_(std::move(factors)), ket_(std::move(ket)) {
  if (product_of_dims(factors_) != ket_.dim()) {
    throw Error(Errc::DimMismatch, "factor dims do not multiply to the ket dimension");
  }
  if (std::abs(ket_.norm() - 1.0) > kNormTolerance) {
    throw Error(Errc::InvalidState, "joint state must be normalized");
  }
}

JointState JointState::system_only(const Ket& system, std::string label) {
  return JointState({Factor{std::move(label), system.dim(), FactorRole::System}}, system);
}

std::size_t JointState::system_index() const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].role == FactorRole::System) return i;
  }
  throw Error(Errc::BadSubsystemIndex, "joint state has no system factor");
}

std::vector<std::size_t> JointState::pointer_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].role == FactorRole::Pointer) out.push_back(i);
  }
  return out;
}

std::optional<std::size_t> JointState::find(std::string_view label) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].label == label) return i;
  }
  return std::nullopt;
}

std::size_t JointState::left_dim(std::size_t index) const {
  std::size_t d = 1;
  for (std::size_t i = 0; i < index; ++i) d *= factors_[i].dim;
  return d;
}

std::size_t JointState::right_dim(std::size_t index) const {
  std::size_t d = 1;
  for (std::size_t i = index + 1; i < factors_.size(); ++i) d *= factors_[i].dim;
  return d;
}

DensityMatrix partial_state(const JointState& joint, std::size_t subsystem) {
  require_factor(joint, subsystem);
  const std::size_t left = joint.left_dim(subsystem);
  const std::size_t d = joint.factors()[subsystem].dim;
  const std::size_t right = joint.right_dim(subsystem);
  const auto amps = joint.ket().amps();

  std::vector<Complex> rho(d * d);
  for (std::size_t l = 0; l < left; ++l) {
    for (std::size_t r = 0; r < right; ++r) {
      for (std::size_t i = 0; i < d; ++i) {
        const Complex ai = amps[(l * d + i) * right + r];
        for (std::size_t j = 0; j < d; ++j) {
          rho[i * d + j] += ai * std::conj(amps[(l * d + j) * right + r]);
        }
      }
    }
  }
  return DensityMatrix(d, std::move(rho));
}

Ket contract_factor(const JointState& joint, std::size_t factor, const Ket& bra) {
  require_factor(joint, factor);
  const std::size_t d = joint.factors()[factor].dim;
  if (bra.dim() != d) throw Error(Errc::DimMismatch, "bra does not match factor dimension");
  const std::size_t left = joint.left_dim(factor);
  const std::size_t right = joint.right_dim(factor);
  const auto amps = joint.ket().amps();

  std::vector<Complex> out(left * right);
  for (std::size_t l = 0; l < left; ++l) {
    for (std::size_t i = 0; i < d; ++i) {
      const Complex b = std::conj(bra[i]);
      if (b == Complex{}) continue;
      for (std::size_t r = 0; r < right; ++r) {
        out[l * right + r] += b * amps[(l * d + i) * right + r];
      }
    }
  }
  return Ket(std::move(out));
}

FactorMeasurement measure_factor(const JointState& joint, std::size_t factor,
                                 std::span<const Ket> basis, TrialStream& rng) {
  require_factor(joint, factor);
  std::vector<Ket> branches;
  std::vector<double> probs;
  branches.reserve(basis.size());
  probs.reserve(basis.size());
  double total = 0.0;
  for (const Ket& b : basis) {
    branches.push_back(contract_factor(joint, factor, b));
    probs.push_back(branches.back().norm_squared());
    total += probs.back();
  }
  if (std::abs(total - 1.0) > kBornCompleteness) {
    throw Error(Errc::IncompleteBasis,
                "Born probabilities sum to " + std::to_string(total) + " instead of 1");
  }
  const std::size_t i = sample_index(probs, rng);

  std::vector<Factor> rest = joint.factors();
  rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(factor));
  return {i, probs[i], JointState(std::move(rest), normalize(branches[i]))};
}

JointState insert_branching_factor(const JointState& joint, std::size_t at, Factor factor,
                                   std::size_t target, std::span<const Operator> branches) {
  require_factor(joint, target);
  if (at > joint.factor_count()) throw Error(Errc::BadSubsystemIndex, "insert position out of range");
  if (branches.size() != factor.dim) {
    throw Error(Errc::DimMismatch, "need one branch operator per new basis state");
  }
  const std::size_t td = joint.factors()[target].dim;
  const std::size_t tl = joint.left_dim(target);
  const std::size_t tr = joint.right_dim(target);
  const auto amps = joint.ket().amps();
  const std::size_t n = amps.size();

  // Apply each branch operator to the target factor.
  std::vector<std::vector<Complex>> applied(branches.size(), std::vector<Complex>(n));
  for (std::size_t m = 0; m < branches.size(); ++m) {
    const Operator& op = branches[m];
    if (op.dim() != td) throw Error(Errc::DimMismatch, "branch operator does not fit target factor");
    for (std::size_t l = 0; l < tl; ++l) {
      for (std::size_t r = 0; r < tr; ++r) {
        for (std::size_t i = 0; i < td; ++i) {
          Complex acc{};
          for (std::size_t j = 0; j < td; ++j) acc += op(i, j) * amps[(l * td + j) * tr + r];
          applied[m][(l * td + i) * tr + r] = acc;
        }
      }
    }
  }

  // Splice the new index in at position `at`.
  const std::size_t left = joint.left_dim(at);
  const std::size_t right = n / left;
  std::vector<Complex> out(n * factor.dim);
  for (std::size_t l = 0; l < left; ++l) {
    for (std::size_t m = 0; m < factor.dim; ++m) {
      for (std::size_t r = 0; r < right; ++r) {
        out[(l * factor.dim + m) * right + r] = applied[m][l * right + r];
      }
    }
  }

  std::vector<Factor> factors = joint.factors();
  factors.insert(factors.begin() + static_cast<std::ptrdiff_t>(at), std::move(factor));
  return JointState(std::move(factors), normalize(Ket(std::move(out))));
}

}  // namespace weakmeas
