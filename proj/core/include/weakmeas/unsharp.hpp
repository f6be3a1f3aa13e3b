#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "weakmeas/joint_state.hpp"
#include "weakmeas/qstate.hpp"
#include "weakmeas/rng.hpp"

namespace weakmeas {

/// Pointer outcome labels. Up is basis index 0, Down is index 1; under the
/// conjugate readout they name (|u> + i|d>)/sqrt2 and (|u> - i|d>)/sqrt2.
enum class PointerOutcome { Up, Down };

/// Numeric coding of pointer outcomes shared by every estimator: u -> +1, d -> -1.
constexpr int pointer_value(PointerOutcome o) noexcept { return o == PointerOutcome::Up ? 1 : -1; }
constexpr char pointer_label(PointerOutcome o) noexcept { return o == PointerOutcome::Up ? 'u' : 'd'; }

/// Which orthonormal basis the pointer is detected in.
enum class Readout { Standard, Conjugate };

std::array<Ket, 2> pointer_basis(Readout readout);

/// Real amplitudes (a, b) with a^2 + b^2 = 1 and a >= b >= 0.
///
/// `a` is the amplitude for the pointer reading that agrees with the system
/// eigenstate, `b` the error amplitude. a = 1 is a sharp (projective)
/// measurement; a = b = 1/sqrt2 extracts no information at all.
class UnsharpCoupling {
 public:
  UnsharpCoupling(double a, double b);

  /// b = sqrt(1 - a^2); requires 1/sqrt2 <= a <= 1.
  static UnsharpCoupling from_a(double a);
  /// Solves (a - b)/(a + b) = epsilon for epsilon in [0, 1].
  static UnsharpCoupling from_strength(double epsilon);
  static UnsharpCoupling sharp() { return {1.0, 0.0}; }
  static UnsharpCoupling maximally_weak();

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  /// epsilon = (a - b)/(a + b): 1 when sharp, 0 when maximally weak.
  double strength() const noexcept { return (a_ - b_) / (a_ + b_); }

  friend bool operator==(const UnsharpCoupling&, const UnsharpCoupling&) = default;

 private:
  double a_;
  double b_;
};

struct KrausPair {
  Operator up;
  Operator down;
};

/// M_u = a P+ + b P-, M_d = b P+ + a P-, with P+/- the observable's
/// eigenprojectors (descending eigenvalue order).
KrausPair kraus_ops(const Operator& observable, const UnsharpCoupling& c);

/// Effective Kraus pair for detecting the pointer in `readout`'s basis:
/// K_k = sum_m conj(r_k[m]) M_m, with r_k the k-th readout basis ket.
KrausPair readout_kraus_ops(const Operator& observable, const UnsharpCoupling& c, Readout readout);

/// |u> M_u |system> + |d> M_d |system>, factors {P (pointer), S (system)}.
JointState couple(const Ket& system, const Operator& observable, const UnsharpCoupling& c);

/// Entangles a fresh two-state pointer with the system factor of `joint`.
/// The new pointer is inserted directly before the system factor, so
/// repeated calls give the ordering P1, P2, ..., S.
JointState couple_pointer(const JointState& joint, const Operator& observable,
                          const UnsharpCoupling& c, std::string label);

struct PointerDetection {
  PointerOutcome outcome;
  double probability;
  Ket system;
};

/// Detects the single pointer factor; the pointer is removed and the system
/// returned collapsed and renormalized.
PointerDetection detect_pointer(const JointState& joint, TrialStream& rng,
                                Readout readout = Readout::Standard);

struct Postselection {
  std::size_t index;
  double probability;
  /// Pointer factors left after the system was measured.
  JointState pointers;

  /// The pointer ket when exactly one pointer factor remains.
  const Ket& pointer() const;
};

Postselection postselect_system(const JointState& joint, std::span<const Ket> post_basis,
                                TrialStream& rng);

/// Discrete two-outcome pointer {|u>, |d>}.
struct DiscreteTwoOutcome {};

/// Position pointer sampled on a uniform grid over [-L, L].
///
/// The |+> branch carries a Gaussian wavepacket centred at +shift and the |->
/// branch one centred at -shift; |psi|^2 has standard deviation sigma.
struct ContinuousGaussian {
  std::size_t grid_points = 256;
  double half_width = 8.0;
  double sigma = 1.0;
  double shift = 1.0;

  /// 256 points, L = 8 max(sigma, shift).
  static ContinuousGaussian with_defaults(double sigma, double shift);

  /// Throws BadGrid on invalid parameters, on a grid spacing coarser than
  /// sigma, or when more than 1e-6 of either packet's mass falls outside [-L, L].
  void validate() const;

  double spacing() const noexcept {
    return 2.0 * half_width / static_cast<double>(grid_points - 1);
  }
  std::vector<double> positions() const;
  /// Normalized grid wavepacket centred at `center`.
  Ket packet(double center) const;
  /// Probability mass of a packet centred at `center` lying outside [-L, L].
  double truncated_mass(double center) const;
};

using PointerModel = std::variant<DiscreteTwoOutcome, ContinuousGaussian>;

JointState couple_continuous(const Ket& system, const Operator& observable,
                             const ContinuousGaussian& model);

/// Two-outcome channel obtained by reading the position pointer as u when
/// X > 0 and d when X < 0 (a grid point at X = 0 is split evenly).
UnsharpCoupling binned_coupling(const ContinuousGaussian& model);

}  // namespace weakmeas
