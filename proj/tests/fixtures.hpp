#pragma once

// Seeded random inputs shared by the unit tests and the acceptance run.
// Everything is drawn from TrialStream so the sets are identical on every
// platform and standard library.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "weakmeas/qstate.hpp"
#include "weakmeas/rng.hpp"

namespace fixtures {

using namespace weakmeas;

inline BlochDirection sphere_point(TrialStream& rng) {
  const double z = 1 - 2 * rng.uniform();
  const double phi = 2 * std::numbers::pi * rng.uniform();
  const double r = std::sqrt(std::max(0.0, 1 - z * z));
  return BlochDirection::normalized(r * std::cos(phi), r * std::sin(phi), z);
}

struct Triple {
  Ket pre;
  Ket post;
  BlochDirection dir;
};

/// Random (pre, post, sigma.n) triples with |<post|pre>| > 0.05.
inline std::vector<Triple> random_triples(std::size_t count) {
  std::vector<Triple> out;
  TrialStream rng(0x5EED);
  while (out.size() < count) {
    Triple t{states::along(sphere_point(rng)), states::along(sphere_point(rng)), sphere_point(rng)};
    if (std::abs(inner(t.post, t.pre)) > 0.05) out.push_back(t);
  }
  return out;
}

/// Worst |bias| / (eps^2 (1 + |W|^2)) over random_triples(50) and eps <= 0.1,
/// measured once and frozen.
inline constexpr double kBiasC = 4.0;

}  // namespace fixtures
