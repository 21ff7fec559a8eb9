#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lanekit {

// Seeded mt19937_64 with explicitly spelled-out derivations, so streams
// reproduce across compilers and standard libraries (std:: distributions
// are implementation-defined; these formulas are not).
class PortableRng {
 public:
  explicit PortableRng(std::uint64_t seed) : eng_(seed) {}

  // [0,1) from the top 53 bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Inclusive bounds.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform() *
                                 (static_cast<double>(hi) - lo + 1.0));
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller, one cached spare per pair.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace lanekit
