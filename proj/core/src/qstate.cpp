#include "weakmeas/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "weakmeas/errors.hpp"

namespace weakmeas {

namespace {

constexpr double kPhaseEpsilon = 1e-14;

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw Error(Errc::DimMismatch, std::string(what) + ": dimensions " + std::to_string(a) +
                                       " and " + std::to_string(b));
  }
}

// Multiplies by the phase that makes the first nonzero component real-positive.
Ket fix_phase(const Ket& k) {
  for (const Complex& c : k.amps()) {
    if (std::abs(c) > kPhaseEpsilon) return (std::conj(c) / std::abs(c)) * k;
  }
  return k;
}

}  // namespace

// --- Ket -------------------------------------------------------------------

Ket::Ket(std::vector<Complex> amps) : amps_(std::move(amps)) {
  if (amps_.empty()) throw Error(Errc::BadDim, "ket must have positive dimension");
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw Error(Errc::BadDim, "basis index out of range");
  std::vector<Complex> amps(dim);
  amps[index] = 1.0;
  return Ket(std::move(amps));
}

double Ket::norm_squared() const noexcept {
  return std::accumulate(amps_.begin(), amps_.end(), 0.0,
                         [](double acc, const Complex& c) { return acc + std::norm(c); });
}

double Ket::norm() const noexcept { return std::sqrt(norm_squared()); }

Ket operator*(Complex scale, const Ket& k) {
  std::vector<Complex> out(k.amps_.size());
  std::transform(k.amps_.begin(), k.amps_.end(), out.begin(),
                 [scale](const Complex& c) { return scale * c; });
  return Ket(std::move(out));
}

Ket operator+(const Ket& lhs, const Ket& rhs) {
  require_same_dim(lhs.dim(), rhs.dim(), "ket sum");
  std::vector<Complex> out(lhs.dim());
  std::transform(lhs.amps_.begin(), lhs.amps_.end(), rhs.amps_.begin(), out.begin(),
                 std::plus<>{});
  return Ket(std::move(out));
}

// --- Operator --------------------------------------------------------------

Operator::Operator(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)), hermitian_(true) {
  if (dim_ == 0 || entries_.size() != dim_ * dim_) {
    throw Error(Errc::BadDim, "operator entries must form a square matrix");
  }
  for (std::size_t r = 0; r < dim_ && hermitian_; ++r) {
    for (std::size_t c = r; c < dim_; ++c) {
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > kHermitianTolerance) {
        hermitian_ = false;
        break;
      }
    }
  }
}

Operator Operator::identity(std::size_t dim) {
  std::vector<Complex> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return Operator(dim, std::move(e));
}

Operator Operator::projector(const Ket& k) {
  const std::size_t n = k.dim();
  std::vector<Complex> e(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) e[r * n + c] = k[r] * std::conj(k[c]);
  }
  return Operator(n, std::move(e));
}

Operator Operator::adjoint() const {
  std::vector<Complex> e(entries_.size());
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = 0; c < dim_; ++c) e[c * dim_ + r] = std::conj((*this)(r, c));
  }
  return Operator(dim_, std::move(e));
}

Operator operator+(const Operator& lhs, const Operator& rhs) {
  require_same_dim(lhs.dim_, rhs.dim_, "operator sum");
  std::vector<Complex> e(lhs.entries_.size());
  std::transform(lhs.entries_.begin(), lhs.entries_.end(), rhs.entries_.begin(), e.begin(),
                 std::plus<>{});
  return Operator(lhs.dim_, std::move(e));
}

Operator operator*(Complex scale, const Operator& op) {
  std::vector<Complex> e(op.entries_.size());
  std::transform(op.entries_.begin(), op.entries_.end(), e.begin(),
                 [scale](const Complex& c) { return scale * c; });
  return Operator(op.dim_, std::move(e));
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  require_same_dim(lhs.dim_, rhs.dim_, "operator product");
  const std::size_t n = lhs.dim_;
  std::vector<Complex> e(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < n; ++k) {
      const Complex l = lhs(r, k);
      for (std::size_t c = 0; c < n; ++c) e[r * n + c] += l * rhs(k, c);
    }
  }
  return Operator(n, std::move(e));
}

Ket operator*(const Operator& op, const Ket& k) {
  require_same_dim(op.dim_, k.dim(), "operator application");
  std::vector<Complex> out(op.dim_);
  for (std::size_t r = 0; r < op.dim_; ++r) {
    for (std::size_t c = 0; c < op.dim_; ++c) out[r] += op(r, c) * k[c];
  }
  return Ket(std::move(out));
}

// --- BlochDirection --------------------------------------------------------

BlochDirection::BlochDirection(double x, double y, double z) : n_{x, y, z} {
  const double len = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(len) || std::abs(len - 1.0) > 1e-12) {
    throw Error(Errc::InvalidDirection, "Bloch direction must have unit norm, got |n| = " +
                                            std::to_string(len));
  }
}

BlochDirection BlochDirection::normalized(double x, double y, double z) {
  const double len = std::sqrt(x * x + y * y + z * z);
  if (!std::isfinite(len) || len <= kZeroNorm) {
    throw Error(Errc::InvalidDirection, "cannot normalize a zero Bloch vector");
  }
  return {x / len, y / len, z / len};
}

// --- DensityMatrix ---------------------------------------------------------

DensityMatrix::DensityMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), entries_(std::move(entries)) {
  if (dim_ == 0 || entries_.size() != dim_ * dim_) {
    throw Error(Errc::BadDim, "density matrix entries must form a square matrix");
  }
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = r; c < dim_; ++c) {
      if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > kHermitianTolerance) {
        throw Error(Errc::NotHermitian, "density matrix is not Hermitian");
      }
    }
  }
  if (std::abs(trace() - 1.0) > kNormTolerance) {
    throw Error(Errc::InvalidState, "density matrix trace " + std::to_string(trace()) + " != 1");
  }
}

double DensityMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i).real();
  return t;
}

double DensityMatrix::purity() const {
  // Tr(rho^2) = sum_rc |rho_rc|^2 for Hermitian rho.
  return std::accumulate(entries_.begin(), entries_.end(), 0.0,
                         [](double acc, const Complex& c) { return acc + std::norm(c); });
}

// --- free functions --------------------------------------------------------

Ket normalize(const Ket& k) {
  const double n = k.norm();
  if (n <= kZeroNorm) throw Error(Errc::ZeroVector, "cannot normalize a zero vector");
  return Complex(1.0 / n) * k;
}

Complex inner(const Ket& bra, const Ket& ket) {
  require_same_dim(bra.dim(), ket.dim(), "inner product");
  Complex acc{};
  for (std::size_t i = 0; i < bra.dim(); ++i) acc += std::conj(bra[i]) * ket[i];
  return acc;
}

Ket tensor(const Ket& first, const Ket& second) {
  std::vector<Complex> out;
  out.reserve(first.dim() * second.dim());
  for (const Complex& f : first.amps()) {
    for (const Complex& s : second.amps()) out.push_back(f * s);
  }
  return Ket(std::move(out));
}

double fidelity(const Ket& a, const Ket& b) { return std::norm(inner(a, b)); }

bool approx_equal(const Ket& a, const Ket& b, double tol) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    if (std::abs(a[i] - b[i]) > tol) return false;
  }
  return true;
}

bool approx_equal(const Operator& a, const Operator& b, double tol) {
  if (a.dim() != b.dim()) return false;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    if (std::abs(a.entries()[i] - b.entries()[i]) > tol) return false;
  }
  return true;
}

Operator pauli_x() { return Operator(2, {0, 1, 1, 0}); }
Operator pauli_y() { return Operator(2, {0, Complex(0, -1), Complex(0, 1), 0}); }
Operator pauli_z() { return Operator(2, {1, 0, 0, -1}); }

Operator spin_observable(const BlochDirection& n) {
  const Complex off(n.x(), -n.y());
  return Operator(2, {n.z(), off, std::conj(off), -n.z()});
}

std::vector<Eigenpair> eigenbasis(const Operator& op) {
  if (!op.hermitian()) throw Error(Errc::NotHermitian, "eigenbasis requires a Hermitian operator");
  if (op.dim() != 2) throw Error(Errc::BadDim, "eigenbasis is implemented for 2x2 operators only");

  const double p = op(0, 0).real();
  const double r = op(1, 1).real();
  const Complex q = op(0, 1);
  const double mean = 0.5 * (p + r);
  const double radius = std::hypot(0.5 * (p - r), std::abs(q));

  std::vector<Eigenpair> out;
  out.reserve(2);
  if (radius <= kPhaseEpsilon) {
    out.push_back({mean, Ket::basis(2, 0)});
    out.push_back({mean, Ket::basis(2, 1)});
    return out;
  }
  for (const double lambda : {mean + radius, mean - radius}) {
    // Two algebraically equivalent null vectors of (H - lambda); keep the
    // better-conditioned one.
    const Ket v1{Complex(lambda - r), std::conj(q)};
    const Ket v2{q, Complex(lambda - p)};
    const Ket& v = v1.norm_squared() >= v2.norm_squared() ? v1 : v2;
    out.push_back({lambda, fix_phase(normalize(v))});
  }
  return out;
}

std::vector<double> born_probabilities(const Ket& k, std::span<const Ket> basis) {
  std::vector<double> probs;
  probs.reserve(basis.size());
  double total = 0.0;
  for (const Ket& b : basis) {
    probs.push_back(std::norm(inner(b, k)));
    total += probs.back();
  }
  if (std::abs(total - 1.0) > kBornCompleteness) {
    throw Error(Errc::IncompleteBasis,
                "Born probabilities sum to " + std::to_string(total) + " instead of 1");
  }
  return probs;
}

std::size_t sample_index(std::span<const double> probabilities, TrialStream& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    cumulative += probabilities[i];
    last_nonzero = i;
    if (u < cumulative) return i;
  }
  // Rounding can leave the cumulative sum a hair below 1.
  return last_nonzero;
}

BornOutcome born_sample(const Ket& k, std::span<const Ket> basis, TrialStream& rng) {
  const std::vector<double> probs = born_probabilities(k, basis);
  const std::size_t i = sample_index(probs, rng);
  return {i, probs[i], basis[i]};
}

std::array<double, 3> bloch_vector(const Ket& k) {
  if (k.dim() != 2) throw Error(Errc::BadDim, "Bloch vector is defined for qubit kets");
  const Ket n = normalize(k);
  return {inner(n, pauli_x() * n).real(), inner(n, pauli_y() * n).real(),
          inner(n, pauli_z() * n).real()};
}

namespace states {

namespace {
const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
}

Ket z_plus() { return Ket{1.0, 0.0}; }
Ket z_minus() { return Ket{0.0, 1.0}; }
Ket x_plus() { return Ket{kInvSqrt2, kInvSqrt2}; }
Ket x_minus() { return Ket{kInvSqrt2, -kInvSqrt2}; }
Ket y_plus() { return Ket{kInvSqrt2, Complex(0, kInvSqrt2)}; }
Ket y_minus() { return Ket{kInvSqrt2, Complex(0, -kInvSqrt2)}; }
Ket up() { return Ket{1.0, 0.0}; }
Ket down() { return Ket{0.0, 1.0}; }

Ket along(const BlochDirection& n) { return eigenbasis(spin_observable(n)).front().vector; }

std::optional<Ket> named(std::string_view name) {
  constexpr std::string_view kUnicodeMinus = "−";
  if (name.size() < 2) return std::nullopt;
  const char axis = name.front();
  const std::string_view sign = name.substr(1);
  bool plus;
  if (sign == "+") {
    plus = true;
  } else if (sign == "-" || sign == kUnicodeMinus) {
    plus = false;
  } else {
    return std::nullopt;
  }
  switch (axis) {
    case 'x': return plus ? x_plus() : x_minus();
    case 'y': return plus ? y_plus() : y_minus();
    case 'z': return plus ? z_plus() : z_minus();
    default: return std::nullopt;
  }
}

}  // namespace states

}  // namespace weakmeas
