#ifndef BCH_TEST_HELPERS_HPP
#define BCH_TEST_HELPERS_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "bch/algebra.hpp"

namespace bch_test {

using bch::Cplx;

// Deterministic draws independent of libstdc++ distribution details.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : rng_(seed * 0x9e3779b97f4a7c15ULL + 17) { rng_.discard(8); }
  double unit() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  double range(double lo, double hi) { return lo + (hi - lo) * unit(); }
  Cplx annulus(double lo, double hi) {
    const double r = range(lo, hi), th = 2.0 * std::numbers::pi * unit();
    return Cplx(r * std::cos(th), r * std::sin(th));
  }
  Cplx disc(double radius) { return annulus(0.0, radius); }

 private:
  std::mt19937_64 rng_;
};

inline double rel_dev(Cplx a, Cplx b) {
  return std::abs(a - b) / std::max({1e-30, std::abs(a), std::abs(b)});
}

}  // namespace bch_test

#endif
