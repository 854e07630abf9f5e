#include "bch/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace bch {
namespace detail {

double dist_to_pole(Cplx a, long long* k_out) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  const long long k = std::llround(a.imag() / two_pi);
  if (k_out) *k_out = k;
  if (k == 0) return std::numeric_limits<double>::infinity();
  return std::abs(a - Cplx(0.0, two_pi * static_cast<double>(k)));
}

void require_off_pole(Cplx arg, const char* where) {
  long long k = 0;
  if (dist_to_pole(arg, &k) < kPoleGuard) {
    std::ostringstream msg;
    msg << where << ": argument (" << arg.real() << ", " << arg.imag()
        << ") within " << kPoleGuard << " of the pole 2*pi*i*" << k;
    throw Error(errc::pole, msg.str());
  }
}

Cplx s_series(Cplx a) {
  const Cplx x2 = a * a / 4.0;  // (a/2)^2
  Cplx term(1.0), sum(1.0);
  for (int k = 1; k <= 12; ++k) {
    term *= x2 / static_cast<double>((2 * k) * (2 * k + 1));
    sum += term;
    if (std::abs(term) < 1e-20) break;
  }
  return sum;
}

Cplx s_direct(Cplx a) {
  const Cplx half = a / 2.0;
  return std::sinh(half) / half;
}

Cplx f_raw(Cplx u, Cplx v) {
  return ((u - v) * std::exp(u + v) - (u * std::exp(u) - v * std::exp(v))) /
         (u * v * (std::exp(u) - std::exp(v)));
}

Cplx f_composed(Cplx u, Cplx v) {
  // f(u,v) = (e^{u/2} s(v)/s(v-u) - 1)/u; symmetric, so divide by the larger
  // argument to keep the cancellation in (g-1) bounded.
  if (std::abs(u) < std::abs(v)) std::swap(u, v);
  require_off_pole(v - u, "f_vbv");
  return (std::exp(u / 2.0) * s(v) / s(v - u) - 1.0) / u;
}

Cplx f_series(Cplx u, Cplx v) {
  // Write f = (e^{u psi} - 1)/u with u*psi = u/2 + log s(v) - log s(v-u).
  // log s(a) = a^2/24 - a^4/2880 + a^6/181440 - a^8/9676800 + O(a^10), and the
  // differences of even powers factor as u*(2v-u)*(...), so psi is exact.
  const Cplx w = v - u;
  const Cplx v2 = v * v, w2 = w * w;
  const Cplx v4 = v2 * v2, w4 = w2 * w2;
  const Cplx v6 = v4 * v2, w6 = w4 * w2;
  const Cplx psi = 0.5 + (2.0 * v - u) * (1.0 / 24.0 - (v2 + w2) / 2880.0 +
                                          (v4 + v2 * w2 + w4) / 181440.0 -
                                          (v6 + v4 * w2 + v2 * w4 + w6) / 9676800.0);
  const Cplx x = u * psi;
  Cplx term(1.0), e1(1.0);  // (e^x - 1)/x
  for (int k = 2; k <= 8; ++k) {
    term *= x / static_cast<double>(k);
    e1 += term;
  }
  return psi * e1;
}

}  // namespace detail

Cplx s(Cplx a) {
  if (std::abs(a) < kSeriesThreshold) return detail::s_series(a);
  return detail::s_direct(a);
}

Cplx s_alpha(Cplx alpha, Cplx a) {
  // sinh(alpha a/2)/(a/2) = alpha * s(alpha a); also correct at alpha = 0.
  return alpha * s(alpha * a);
}

Cplx f_vbv(Cplx u, Cplx v) {
  if (std::max(std::abs(u), std::abs(v)) < kSeriesThreshold) return detail::f_series(u, v);
  return detail::f_composed(u, v);
}

Cplx g_kernel(Cplx alpha, Cplx u, Cplx v) {
  const Cplx au = alpha * u;
  detail::require_off_pole(v - au, "g_kernel");
  return std::exp(au / 2.0) * s(v) / s(v - au);
}

Cplx h_kernel(Cplx alpha, Cplx u, Cplx v) {
  const Cplx au = alpha * u;
  detail::require_off_pole(v - au, "h_kernel");
  return std::exp(v / 2.0) * s_alpha(alpha, u) / s(v - au);
}

Cplx l_kernel(Cplx alpha, Cplx u, Cplx v) {
  // alpha * f(alpha u, v): finite as u -> 0, and f handles its own limits.
  return alpha * f_vbv(alpha * u, v);
}

}  // namespace bch
