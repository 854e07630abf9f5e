#ifndef BCH_ORACLE_HPP
#define BCH_ORACLE_HPP

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

#include "bch/closed_form.hpp"

namespace bch {

/// Coefficient vector on the ordered basis (X, Y, Z, I).
using Vec4 = std::array<Cplx, 4>;

double max_abs(const Vec4& v);

/// Bracket table on span{X, Y, Z, I} built from a spec's structure constants.
/// The table is antisymmetric and I is central by construction.
class StructureAlgebra {
 public:
  explicit StructureAlgebra(const AlgebraSpec& spec);

  /// Bilinear extension of the basis bracket table.
  Vec4 bracket(const Vec4& a, const Vec4& b) const;

  /// Max modulus of the Jacobi identity over all basis triples.
  double jacobi_basis_residual() const;

  const AlgebraSpec& spec() const { return spec_; }

 private:
  AlgebraSpec spec_;
  Vec4 table_[4][4];
};

inline constexpr int kMinSeriesOrder = 1;
inline constexpr int kMaxSeriesOrder = 20;

/// log(exp(a) exp(b)) truncated at the given total commutator order,
/// evaluated inside the 4-dimensional algebra. Throws errc::order_out_of_range
/// for order outside [1, 20]. Meaningful only when the inputs are small enough
/// that the first omitted order is negligible; that scale discipline is the
/// caller's.
Vec4 bch_series(const StructureAlgebra& alg, const Vec4& a, const Vec4& b, int order);

/// Ground-truth (A, B, C, D): bch(bch(X, Y), Z) at the truncation order.
Vec4 triple_product_series(const StructureAlgebra& alg, int order);

using Matrix = Eigen::MatrixXcd;

/// Scaling-and-squaring Pade matrix exponential.
Matrix matrix_exp(const Matrix& m);

/// Principal matrix logarithm by inverse scaling (repeated principal square
/// roots on the Schur form) plus a log series. Throws errc::not_near_identity
/// when an eigenvalue lies on the closed negative real axis.
Matrix matrix_log_near_identity(const Matrix& m);

/// Explicit matrix images of X, Y, Z, I realizing a spec's brackets.
struct MatrixRep {
  std::string name;
  Matrix X, Y, Z, I;
  AlgebraSpec spec;
  int dim = 0;
};

/// Max Frobenius deviation of the rep's commutators from the spec's brackets.
double rep_commutator_mismatch(const MatrixRep& rep);

/// || exp(X)exp(Y)exp(Z) - exp(A X + B Y + C Z + D I) ||_F in the rep.
/// Throws errc::rep_spec_mismatch when the rep fails its bracket check.
double verify_matrix(const MatrixRep& rep, Cplx A, Cplx B, Cplx C, Cplx D);
double verify_matrix(const MatrixRep& rep, const ClosedForm& cf);

/// 3x3 strictly-upper-triangular rep of the central family
///   [X,Y] = cI, [Y,Z] = dI, [X,Z] = eI   (requires c != 0).
/// The Z image lies in span{X, Y}, so the four images have rank 3; use
/// heisenberg_rank4_rep when coefficient extraction needs independence.
MatrixRep heisenberg_rep(Cplx c, Cplx d = 0.0, Cplx e = 0.0);

/// 6x6 direct-sum variant of heisenberg_rep whose four images are linearly
/// independent, suitable for coefficient extraction.
MatrixRep heisenberg_rank4_rep(Cplx c, Cplx d = 0.0, Cplx e = 0.0);

/// 2x2 rep of the Virasoro restriction j,k in {-1,0,1}: images of
/// (l_{-k} L_{-k}, l_0 L_0, l_k L_k, 0) for k = +-1 (central term vanishes).
MatrixRep sl2_virasoro_rep(int k, Cplx lm, Cplx l0, Cplx lk);

/// Canonical instances: heisenberg3, sl2_virasoro_k1, heisenberg6.
std::vector<MatrixRep> builtin_reps();

/// Least-squares coefficients expressing `target` in the span of the rep
/// images, with the residual of the fit written to *fit_residual when given.
Vec4 extract_coefficients(const MatrixRep& rep, const Matrix& target,
                          double* fit_residual = nullptr);

}  // namespace bch

#endif
