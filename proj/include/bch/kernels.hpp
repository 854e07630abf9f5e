#ifndef BCH_KERNELS_HPP
#define BCH_KERNELS_HPP

#include <complex>

#include "bch/errors.hpp"

namespace bch {

using Cplx = std::complex<double>;

/// |argument| below this switches the scalar kernels to their Maclaurin branch.
inline constexpr double kSeriesThreshold = 1e-3;

/// Distance to a nonzero multiple of 2*pi*i below which division by s(...)
/// is treated as a genuine pole.
inline constexpr double kPoleGuard = 1e-8;

/// s(a) = sinh(a/2) / (a/2). Entire; equals 1 at a = 0.
Cplx s(Cplx a);

/// s_alpha(a) = sinh(alpha*a/2) / (a/2). Tends to alpha as a -> 0.
Cplx s_alpha(Cplx alpha, Cplx a);

/// Symmetric two-exponential composition function
///   f(u,v) = ((u-v)e^{u+v} - (u e^u - v e^v)) / (u v (e^u - e^v)),
/// with the removable singularities at u = 0, v = 0 and u = v filled in.
/// Throws errc::pole when e^u = e^v with u != v.
Cplx f_vbv(Cplx u, Cplx v);

/// g_alpha(u,v) = 1 + alpha*u*f(alpha*u, v) = e^{alpha u/2} s(v) / s(v - alpha u)
Cplx g_kernel(Cplx alpha, Cplx u, Cplx v);

/// h_alpha(u,v) = alpha*(1 + v*f(alpha*u, v)) = e^{v/2} s_alpha(u) / s(v - alpha u)
Cplx h_kernel(Cplx alpha, Cplx u, Cplx v);

/// l_alpha(u,v) = alpha*f(alpha*u, v); finite as u -> 0.
Cplx l_kernel(Cplx alpha, Cplx u, Cplx v);

namespace detail {

// Individual evaluation branches, exposed so the tests can probe the
// crossover continuity directly.
Cplx s_series(Cplx a);
Cplx s_direct(Cplx a);
Cplx f_series(Cplx u, Cplx v);    // valid for |u|, |v| below the threshold
Cplx f_composed(Cplx u, Cplx v);  // (e^{u/2} s(v)/s(v-u) - 1)/u, divides by the larger of u,v
Cplx f_raw(Cplx u, Cplx v);       // the textbook quotient, no singularity handling

/// Distance from a to the nearest nonzero 2*pi*i*k; the nearest k is written
/// to *k_out when given. Returns +inf when the nearest k would be 0.
double dist_to_pole(Cplx a, long long* k_out = nullptr);

/// Throws errc::pole when `arg` (a denominator argument of 1/s) is within
/// kPoleGuard of a nonzero multiple of 2*pi*i.
void require_off_pole(Cplx arg, const char* where);

}  // namespace detail

}  // namespace bch

#endif
