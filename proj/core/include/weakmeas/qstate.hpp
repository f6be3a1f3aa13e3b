#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "weakmeas/rng.hpp"

namespace weakmeas {

using Complex = std::complex<double>;

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kZeroNorm = 1e-12;
inline constexpr double kBornCompleteness = 1e-8;

/// Complex amplitude vector over a finite basis.
///
/// A Ket is not forced to unit norm on construction: the exact-distribution
/// code carries unnormalized branch amplitudes. Everything that consumes a
/// physical state documents whether it expects normalized input.
class Ket {
 public:
  explicit Ket(std::vector<Complex> amps);
  Ket(std::initializer_list<Complex> amps) : Ket(std::vector<Complex>(amps)) {}

  static Ket basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return amps_.size(); }
  std::span<const Complex> amps() const noexcept { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const noexcept;
  double norm() const noexcept;

  friend Ket operator*(Complex scale, const Ket& k);
  friend Ket operator+(const Ket& lhs, const Ket& rhs);

 private:
  std::vector<Complex> amps_;
};

/// Square complex matrix, row-major. The Hermitian flag is computed on
/// construction (tolerance kHermitianTolerance) and never stale.
class Operator {
 public:
  Operator(std::size_t dim, std::vector<Complex> entries);

  static Operator identity(std::size_t dim);
  /// |k><k|
  static Operator projector(const Ket& k);

  std::size_t dim() const noexcept { return dim_; }
  bool hermitian() const noexcept { return hermitian_; }
  std::span<const Complex> entries() const noexcept { return entries_; }
  Complex operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

  Operator adjoint() const;

  friend Operator operator+(const Operator& lhs, const Operator& rhs);
  friend Operator operator*(Complex scale, const Operator& op);
  friend Operator operator*(const Operator& lhs, const Operator& rhs);
  friend Ket operator*(const Operator& op, const Ket& k);

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
  bool hermitian_;
};

/// Unit 3-vector used to orient spin observables.
class BlochDirection {
 public:
  /// Rejects vectors whose norm differs from 1 by more than 1e-12.
  BlochDirection(double x, double y, double z);
  /// Rescales any nonzero vector onto the unit sphere.
  static BlochDirection normalized(double x, double y, double z);

  static BlochDirection X() { return {1, 0, 0}; }
  static BlochDirection Y() { return {0, 1, 0}; }
  static BlochDirection Z() { return {0, 0, 1}; }

  double x() const noexcept { return n_[0]; }
  double y() const noexcept { return n_[1]; }
  double z() const noexcept { return n_[2]; }
  const std::array<double, 3>& components() const noexcept { return n_; }

  BlochDirection operator-() const { return {-n_[0], -n_[1], -n_[2]}; }
  friend bool operator==(const BlochDirection&, const BlochDirection&) = default;

 private:
  std::array<double, 3> n_;
};

class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12) and unit trace (1e-10).
  DensityMatrix(std::size_t dim, std::vector<Complex> entries);

  std::size_t dim() const noexcept { return dim_; }
  std::span<const Complex> entries() const noexcept { return entries_; }
  Complex operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

  double trace() const;
  /// Tr(rho^2).
  double purity() const;

 private:
  std::size_t dim_;
  std::vector<Complex> entries_;
};

struct Eigenpair {
  double value;
  Ket vector;
};

struct BornOutcome {
  std::size_t index;
  double probability;
  Ket collapsed;
};

Ket normalize(const Ket& k);
Complex inner(const Ket& bra, const Ket& ket);
/// Row-major: the first factor is the slowest-varying index.
Ket tensor(const Ket& first, const Ket& second);
/// |<a|b>|^2
double fidelity(const Ket& a, const Ket& b);
bool approx_equal(const Ket& a, const Ket& b, double tol);
bool approx_equal(const Operator& a, const Operator& b, double tol);

Operator pauli_x();
Operator pauli_y();
Operator pauli_z();
/// n_x X + n_y Y + n_z Z
Operator spin_observable(const BlochDirection& n);

/// Orthonormal eigenkets of a 2x2 Hermitian operator, eigenvalues in
/// descending order, each ket phased so its first nonzero component is
/// real and positive.
std::vector<Eigenpair> eigenbasis(const Operator& op);

/// Born probabilities |<basis_i|k>|^2; throws IncompleteBasis when they do
/// not sum to 1 within kBornCompleteness.
std::vector<double> born_probabilities(const Ket& k, std::span<const Ket> basis);

/// Draws one basis index by cumulative inversion in basis order.
std::size_t sample_index(std::span<const double> probabilities, TrialStream& rng);

BornOutcome born_sample(const Ket& k, std::span<const Ket> basis, TrialStream& rng);

/// Expectation values of the three Pauli operators for a qubit ket.
std::array<double, 3> bloch_vector(const Ket& k);

namespace states {

Ket z_plus();
Ket z_minus();
Ket x_plus();
Ket x_minus();
Ket y_plus();
Ket y_minus();
/// Pointer basis |u>, |d>.
Ket up();
Ket down();
/// +1 eigenket of sigma.n (the spin-coherent state along n).
Ket along(const BlochDirection& n);
/// Accepts x+ x- y+ y- z+ z- (a trailing ASCII '-' or U+2212 for minus).
std::optional<Ket> named(std::string_view name);

}  // namespace states

}  // namespace weakmeas
