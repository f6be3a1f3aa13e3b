#include "weakmeas/rng.hpp"

namespace weakmeas {

double TrialStream::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace weakmeas
