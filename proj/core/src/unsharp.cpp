#include "weakmeas/unsharp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "weakmeas/errors.hpp"

namespace weakmeas {

namespace {

constexpr double kCouplingTolerance = 1e-12;
constexpr double kMaxTruncatedMass = 1e-6;

void require_qubit_observable(const Operator& observable) {
  if (observable.dim() != 2) throw Error(Errc::BadDim, "observable must be 2x2");
  if (!observable.hermitian()) throw Error(Errc::NotHermitian, "observable must be Hermitian");
}

void require_qubit_state(const Ket& system) {
  if (system.dim() != 2) throw Error(Errc::BadDim, "system state must be 2-dimensional");
  if (std::abs(system.norm() - 1.0) > kNormTolerance) {
    throw Error(Errc::InvalidState, "system state must be normalized");
  }
}

std::array<Operator, 2> eigenprojectors(const Operator& observable) {
  const auto eig = eigenbasis(observable);
  return {Operator::projector(eig[0].vector), Operator::projector(eig[1].vector)};
}

}  // namespace

std::array<Ket, 2> pointer_basis(Readout readout) {
  if (readout == Readout::Standard) return {states::up(), states::down()};
  const double h = 1.0 / std::numbers::sqrt2;
  return {Ket{h, Complex(0, h)}, Ket{h, Complex(0, -h)}};
}

// --- UnsharpCoupling -------------------------------------------------------

UnsharpCoupling::UnsharpCoupling(double a, double b) : a_(a), b_(b) {
  if (!std::isfinite(a) || !std::isfinite(b)) {
    throw Error(Errc::InvalidCoupling, "coupling amplitudes must be finite");
  }
  if (std::abs(a * a + b * b - 1.0) > kCouplingTolerance) {
    throw Error(Errc::InvalidCoupling, "a^2 + b^2 must equal 1, got " + std::to_string(a * a + b * b));
  }
  if (b < 0.0 || b > a + kCouplingTolerance) {
    throw Error(Errc::InvalidCoupling, "coupling requires a >= b >= 0");
  }
}

UnsharpCoupling UnsharpCoupling::from_a(double a) {
  if (!(a <= 1.0) || a * a < 0.5 - kCouplingTolerance) {
    throw Error(Errc::InvalidCoupling, "a must lie in [1/sqrt2, 1]");
  }
  return {a, std::sqrt(std::max(0.0, 1.0 - a * a))};
}

UnsharpCoupling UnsharpCoupling::from_strength(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw Error(Errc::InvalidCoupling, "coupling strength must lie in [0, 1]");
  }
  const double scale = 1.0 / std::sqrt(2.0 * (1.0 + epsilon * epsilon));
  return {(1.0 + epsilon) * scale, (1.0 - epsilon) * scale};
}

UnsharpCoupling UnsharpCoupling::maximally_weak() {
  const double h = 1.0 / std::numbers::sqrt2;
  return {h, h};
}

// --- channel ---------------------------------------------------------------

KrausPair kraus_ops(const Operator& observable, const UnsharpCoupling& c) {
  require_qubit_observable(observable);
  const auto [plus, minus] = eigenprojectors(observable);
  return {Complex(c.a()) * plus + Complex(c.b()) * minus,
          Complex(c.b()) * plus + Complex(c.a()) * minus};
}

KrausPair readout_kraus_ops(const Operator& observable, const UnsharpCoupling& c, Readout readout) {
  const KrausPair m = kraus_ops(observable, c);
  if (readout == Readout::Standard) return m;
  const auto basis = pointer_basis(readout);
  auto branch = [&](const Ket& r) {
    return std::conj(r[0]) * m.up + std::conj(r[1]) * m.down;
  };
  return {branch(basis[0]), branch(basis[1])};
}

JointState couple(const Ket& system, const Operator& observable, const UnsharpCoupling& c) {
  require_qubit_state(system);
  return couple_pointer(JointState::system_only(system), observable, c, "P");
}

JointState couple_pointer(const JointState& joint, const Operator& observable,
                          const UnsharpCoupling& c, std::string label) {
  const std::size_t s = joint.system_index();
  if (joint.factors()[s].dim != 2) throw Error(Errc::BadDim, "system factor must be 2-dimensional");
  const KrausPair m = kraus_ops(observable, c);
  const std::array<Operator, 2> branches{m.up, m.down};
  return insert_branching_factor(joint, s, Factor{std::move(label), 2, FactorRole::Pointer}, s,
                                 branches);
}

PointerDetection detect_pointer(const JointState& joint, TrialStream& rng, Readout readout) {
  const auto pointers = joint.pointer_indices();
  if (pointers.size() != 1) {
    throw Error(Errc::NoPointerFactor, "expected exactly one undetected pointer factor, found " +
                                           std::to_string(pointers.size()));
  }
  const std::size_t p = pointers.front();
  if (joint.factors()[p].dim != 2) {
    throw Error(Errc::BadDim, "detect_pointer handles two-outcome pointers");
  }
  const auto basis = pointer_basis(readout);
  FactorMeasurement m = measure_factor(joint, p, basis, rng);
  return {m.index == 0 ? PointerOutcome::Up : PointerOutcome::Down, m.probability,
          m.remaining.ket()};
}

const Ket& Postselection::pointer() const {
  if (pointers.factor_count() != 1) {
    throw Error(Errc::NoPointerFactor, "post-selection left " +
                                           std::to_string(pointers.factor_count()) +
                                           " pointer factors, not one");
  }
  return pointers.ket();
}

Postselection postselect_system(const JointState& joint, std::span<const Ket> post_basis,
                                TrialStream& rng) {
  if (joint.pointer_indices().empty()) {
    throw Error(Errc::NoPointerFactor, "post-selection needs at least one pointer factor");
  }
  FactorMeasurement m = measure_factor(joint, joint.system_index(), post_basis, rng);
  return {m.index, m.probability, std::move(m.remaining)};
}

// --- continuous pointer ----------------------------------------------------

ContinuousGaussian ContinuousGaussian::with_defaults(double sigma, double shift) {
  return {256, 8.0 * std::max(sigma, shift), sigma, shift};
}

std::vector<double> ContinuousGaussian::positions() const {
  std::vector<double> x(grid_points);
  const double dx = spacing();
  for (std::size_t k = 0; k < grid_points; ++k) x[k] = -half_width + dx * static_cast<double>(k);
  return x;
}

double ContinuousGaussian::truncated_mass(double center) const {
  const double scale = sigma * std::numbers::sqrt2;
  return 0.5 * std::erfc((half_width + center) / scale) +
         0.5 * std::erfc((half_width - center) / scale);
}

void ContinuousGaussian::validate() const {
  if (grid_points < 16) throw Error(Errc::BadGrid, "continuous pointer needs at least 16 grid points");
  if (!(sigma > 0.0)) throw Error(Errc::BadGrid, "sigma must be positive");
  if (!(shift > 0.0) || shift > half_width / 2.0) {
    throw Error(Errc::BadGrid, "shift must satisfy 0 < s <= L/2");
  }
  if (spacing() > sigma) throw Error(Errc::BadGrid, "grid spacing exceeds sigma");
  const double lost = std::max(truncated_mass(shift), truncated_mass(-shift));
  if (lost > kMaxTruncatedMass) {
    throw Error(Errc::BadGrid, "Gaussian mass outside [-L, L] is " + std::to_string(lost));
  }
}

Ket ContinuousGaussian::packet(double center) const {
  const auto x = positions();
  std::vector<Complex> amps(grid_points);
  for (std::size_t k = 0; k < grid_points; ++k) {
    const double d = x[k] - center;
    amps[k] = std::exp(-d * d / (4.0 * sigma * sigma));
  }
  return normalize(Ket(std::move(amps)));
}

JointState couple_continuous(const Ket& system, const Operator& observable,
                             const ContinuousGaussian& model) {
  require_qubit_state(system);
  require_qubit_observable(observable);
  model.validate();

  const auto eig = eigenbasis(observable);
  const Ket plus_branch = tensor(model.packet(model.shift),
                                 inner(eig[0].vector, system) * eig[0].vector);
  const Ket minus_branch = tensor(model.packet(-model.shift),
                                  inner(eig[1].vector, system) * eig[1].vector);
  return JointState({Factor{"X", model.grid_points, FactorRole::Pointer},
                     Factor{"S", 2, FactorRole::System}},
                    normalize(plus_branch + minus_branch));
}

UnsharpCoupling binned_coupling(const ContinuousGaussian& model) {
  model.validate();
  const auto x = model.positions();
  const Ket p = model.packet(model.shift);
  double right = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double w = std::norm(p[k]);
    if (x[k] > 0.0) {
      right += w;
    } else if (x[k] == 0.0) {
      right += 0.5 * w;
    }
  }
  right = std::clamp(right, 0.5, 1.0);
  return {std::sqrt(right), std::sqrt(1.0 - right)};
}

}  // namespace weakmeas
