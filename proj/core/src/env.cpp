#include "msv/env.hpp"

#include <stdexcept>

namespace msv {

Sample make_sample(int x0, int x1) {
  if ((x0 != 0 && x0 != 1) || (x1 != 0 && x1 != 1))
    throw std::invalid_argument("XOR inputs must be binary");
  return Sample{{x0, x1}, x0 ^ x1};
}

Sample sample_input(Rng& rng) {
  const auto pattern = static_cast<int>(rng.below(4));
  return make_sample(pattern >> 1, pattern & 1);
}

int reward(int y, int target) { return y == target ? 1 : 0; }

Sample XorEnvironment::next(Rng& rng) {
  if (mode_ == Presentation::Uniform) return sample_input(rng);
  const auto pattern = static_cast<int>(cursor_++ % 4);
  return make_sample(pattern >> 1, pattern & 1);
}

}  // namespace msv
