#ifndef BCH_ALPHA_HPP
#define BCH_ALPHA_HPP

#include <optional>
#include <vector>

#include "bch/algebra.hpp"

namespace bch {

enum class AlphaBranch {
  closed_form,
  quadratic_root_plus,
  quadratic_root_minus,
  factor_xu,
  factor_xz,
  polynomial_root,
  newton,
};

std::string to_string(AlphaBranch branch);

/// One solution of the fundamental equation for the decomposition parameter.
struct AlphaSolution {
  Cplx alpha;
  Cplx beta;        // 1 - alpha, kept explicitly
  double residual;  // |fundamental_residual| at alpha
  AlphaBranch branch;
  bool admissible;  // exclusion condition: v - alpha*u and w - beta*z away from 2*pi*i*k
};

/// Left-hand side of the fundamental equation at alpha:
///   h_a(u,v)[h_b(z,w)(u+z) + g_b(z,w)(m-w)] + g_a(u,v)[h_b(z,w)(p-v) - g_b(z,w)n]
/// with b = 1 - alpha. Vanishes exactly when the regrouped pair closes.
Cplx fundamental_residual(const AlgebraSpec& spec, Cplx alpha);

/// Checks the exclusion condition: v - alpha*u and w - beta*z must stay at
/// least kPoleGuard away from 2*pi*i*k for all nonzero |k| <= 64.
bool alpha_admissible(const AlgebraSpec& spec, Cplx alpha);

/// Builds an AlphaSolution for a candidate value: residual + admissibility.
AlphaSolution make_alpha_solution(const AlgebraSpec& spec, Cplx alpha, AlphaBranch branch);

/// All closed-form solutions for the spec's type: one root for the linear
/// types, both quadratic roots for T4, both factor roots for T5. Throws
/// errc::degenerate_denominator when the type's formula is undefined and
/// errc::inadmissible_only when no candidate passes the exclusion check.
std::vector<AlphaSolution> solve_alpha(const AlgebraSpec& spec, const AlgebraType& type);

/// Coefficients of the exponential polynomial in x = e^alpha equivalent to
/// the fundamental equation when u,z != 0:
///   c_upz x^{u+z} + c_u x^u + c_z x^z + c_0 = 0.
struct AlphaEquation {
  Cplx c_upz, c_u, c_z, c_0;
  Cplx u, z;
};

/// Throws errc::unsupported_shape when u = 0 or z = 0 (the per-type formulas
/// apply there instead).
AlphaEquation build_alpha_polynomial(const AlgebraSpec& spec);

/// Evaluates the exponential polynomial at alpha.
Cplx alpha_equation_eval(const AlphaEquation& eq, Cplx alpha);

/// Roots of the alpha equation. When u/z is a ratio of small integers P/Q the
/// equation becomes a true polynomial in y = e^{alpha u / P}, solved through
/// companion-matrix eigenvalues and mapped back on the principal branch.
/// Otherwise the provided seed is refined by damped Newton iteration.
std::vector<AlphaSolution> solve_alpha_generic(const AlgebraSpec& spec, const AlphaEquation& eq,
                                               std::optional<Cplx> seed = std::nullopt);

/// Damped Newton on the fundamental residual from the given seed.
AlphaSolution refine_alpha_newton(const AlgebraSpec& spec, Cplx seed);

}  // namespace bch

#endif
