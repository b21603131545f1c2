#pragma once
// Shared helpers for the test suite: a fixed-stream RNG (so test data is
// identical across platforms/compilers) and random field builders.

#include <cstdint>
#include <random>

#include "toruskam/field.hpp"

namespace tk_test {

using toruskam::cd;
using toruskam::MultiIndex;
using toruskam::TorusField;
using toruskam::Truncation;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  // uniform in [0,1): derived from raw 64-bit draws, not std:: distributions,
  // so identical seeds give identical streams everywhere
  double uniform() { return (eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  cd unit_complex() {
    const double re = 2.0 * uniform() - 1.0, im = 2.0 * uniform() - 1.0;
    return {re, im};
  }
  std::uint64_t raw() { return eng_(); }
  int integer(int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(uniform() * (hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

// Random field with coefficients damped like <ell,j>^{-decay}.
inline TorusField random_field(const Truncation& tr, Rng& rng, double decay = 2.0) {
  TorusField u(tr);
  toruskam::for_each_mode(tr, [&](const MultiIndex& ell, int j, std::int64_t f) {
    const double w = toruskam::mode_weight(ell, j, tr.nu);
    u.coeffs()[f] = rng.unit_complex() * std::pow(w, -decay);
  });
  return u;
}

inline TorusField random_real_field(const Truncation& tr, Rng& rng, double decay = 2.0) {
  return random_field(tr, rng, decay).symmetrized_real();
}

inline TorusField random_real_even_field(const Truncation& tr, Rng& rng, double decay = 2.0) {
  return random_field(tr, rng, decay).symmetrized_real().symmetrized_even_x();
}

}  // namespace tk_test
