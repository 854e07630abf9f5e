#ifndef BCH_CLOSED_FORM_HPP
#define BCH_CLOSED_FORM_HPP

#include <vector>

#include "bch/alpha.hpp"

namespace bch {

/// Parameters of the regrouped pair: [X~, Y~] = u~ X~ + v~ Y~ + c~ I.
struct TildeParams {
  Cplx u_tilde, v_tilde, c_tilde;
};

TildeParams tilde_params(const AlgebraSpec& spec, const AlphaSolution& alpha);

/// Coefficients of the closed exponent:
///   exp(X) exp(Y) exp(Z) = exp(A X + B Y + C Z + D I).
struct ClosedForm {
  Cplx A, B, C, D;
  AlphaSolution alpha;
  TildeParams tilde;
  AlgebraType type;
};

/// Assembles the closed form at one already-solved alpha.
ClosedForm compose3_at(const AlgebraSpec& spec, const AlgebraType& type,
                       const AlphaSolution& alpha);

/// Classifies, solves for alpha and assembles the closed form; one result per
/// admissible alpha.
std::vector<ClosedForm> compose3(const AlgebraSpec& spec);

/// Two-exponential composition under [X,Y] = uX + vY + cI:
///   exp(X) exp(Y) = exp(coeff_x X + coeff_y Y + coeff_i I).
struct Compose2Coeffs {
  Cplx coeff_x, coeff_y, coeff_i;
};

Compose2Coeffs compose2_vbv(Cplx u, Cplx v, Cplx c);

/// Reparameterizes the spec for a rescaled middle element Y -> lambda0 * Y.
AlgebraSpec scale_middle(const AlgebraSpec& spec, double lambda0);

/// Coefficients of exp(X) exp(Z) = exp(A X + B Y + C Z + D I), obtained as the
/// lambda0 -> 0 limit of compose3 with Y scaled by lambda0, by Richardson
/// extrapolation over lambda0 in {1e-3, 1e-4, 1e-5}. B multiplies the
/// unscaled Y. The embedded alpha/tilde metadata is that of the finest level.
ClosedForm compose2_limit(const AlgebraSpec& spec);

/// Result of composing exp(l_{-k} L_{-k}) exp(l_0 L_0) exp(l_k L_k) for
/// Virasoro generators with central charge `central`.
///
/// For l0 != 0 the coefficients apply to (X, Y, Z, I) = (l_{-k}L_{-k},
/// l_0 L_0, l_k L_k, I) and `form` carries the full compose3 output. For
/// l0 = 0 the two-factor formula is evaluated directly and B applies to the
/// unscaled L_0.
struct VirasoroResult {
  Cplx A, B, C, D;
  Cplx lambda_plus, lambda_minus;  // split parameters, e^{-k l+-} are the quadratic roots
  Cplx c_k;                        // central coefficient in the L-basis
  AlgebraSpec spec;                // induced spec (l0 != 0 path only)
  std::vector<ClosedForm> forms;   // compose3 results (l0 != 0 path only)
  double explicit_form_dev;        // max |compose3 - explicit formula| cross-check
  bool two_factor;                 // true when the l0 = 0 route was taken
};

VirasoroResult virasoro_compose(int k, Cplx lambda_minus_k, Cplx lambda_0, Cplx lambda_k,
                                Cplx central);

}  // namespace bch

#endif
