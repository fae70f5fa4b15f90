#pragma once

#include <array>
#include <cstddef>

#include "msv/random.hpp"

namespace msv {

struct Sample {
  std::array<int, 2> x{};
  int target = 0;
};

enum class Presentation { Uniform, Cyclic };

Sample make_sample(int x0, int x1);

/// One of the four input patterns, drawn uniformly and independently.
Sample sample_input(Rng& rng);

/// 1 if the emitted bit matches the target, 0 otherwise.
int reward(int y, int target);

/// XOR task. Uniform mode draws i.i.d. patterns; cyclic mode walks
/// (0,0), (0,1), (1,0), (1,1) in order and ignores the RNG.
class XorEnvironment {
 public:
  explicit XorEnvironment(Presentation mode = Presentation::Uniform) : mode_(mode) {}

  Sample next(Rng& rng);
  Presentation mode() const { return mode_; }

 private:
  Presentation mode_;
  std::size_t cursor_ = 0;
};

}  // namespace msv
