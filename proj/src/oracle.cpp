#include "bch/oracle.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace bch {

double max_abs(const Vec4& v) {
  double out = 0.0;
  for (const Cplx& x : v) out = std::max(out, std::abs(x));
  return out;
}

namespace {

Vec4 add(const Vec4& a, const Vec4& b) {
  return Vec4{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}
Vec4 sub(const Vec4& a, const Vec4& b) {
  return Vec4{a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}
Vec4 scaled(const Vec4& a, Cplx c) { return Vec4{a[0] * c, a[1] * c, a[2] * c, a[3] * c}; }
void accumulate(Vec4& a, const Vec4& b) {
  for (int i = 0; i < 4; ++i) a[i] += b[i];
}

}  // namespace

StructureAlgebra::StructureAlgebra(const AlgebraSpec& spec) : spec_(spec) {
  for (auto& row : table_)
    for (auto& cell : row) cell = Vec4{};
  auto set = [&](int i, int j, Vec4 v) {
    table_[i][j] = v;
    table_[j][i] = scaled(v, -1.0);
  };
  set(0, 1, Vec4{spec.u, spec.v, 0.0, spec.c});
  set(1, 2, Vec4{0.0, spec.w, spec.z, spec.d});
  set(0, 2, Vec4{spec.m, spec.n, spec.p, spec.e});
  // rows/columns of I stay zero: I is central
}

Vec4 StructureAlgebra::bracket(const Vec4& a, const Vec4& b) const {
  Vec4 out{};
  for (int i = 0; i < 3; ++i) {  // I is central, skip i/j = 3
    if (a[i] == Cplx(0.0)) continue;
    for (int j = 0; j < 3; ++j) {
      if (i == j || b[j] == Cplx(0.0)) continue;
      const Cplx coef = a[i] * b[j];
      const Vec4& t = table_[i][j];
      for (int k = 0; k < 4; ++k) out[k] += coef * t[k];
    }
  }
  return out;
}

double StructureAlgebra::jacobi_basis_residual() const {
  double worst = 0.0;
  Vec4 basis[4] = {Vec4{1, 0, 0, 0}, Vec4{0, 1, 0, 0}, Vec4{0, 0, 1, 0}, Vec4{0, 0, 0, 1}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        Vec4 acc = bracket(basis[i], bracket(basis[j], basis[k]));
        accumulate(acc, bracket(basis[j], bracket(basis[k], basis[i])));
        accumulate(acc, bracket(basis[k], bracket(basis[i], basis[j])));
        worst = std::max(worst, max_abs(acc));
      }
  return worst;
}

namespace {

// B_{2p}/(2p)! for p = 1..10
constexpr double kBernOverFact[11] = {
    0.0,
    0.08333333333333333,       // B2/2!
    -0.001388888888888889,     // B4/4!
    3.306878306878307e-05,     // B6/6!
    -8.267195767195768e-07,    // B8/8!
    2.08767569878681e-08,      // B10/10!
    -5.284190138687493e-10,    // B12/12!
    1.3382536530684679e-11,    // B14/14!
    -3.3896802963225827e-13,   // B16/16!
    8.586062056277845e-15,     // B18/18!
    -2.174868698558062e-16,    // B20/20!
};

}  // namespace

Vec4 bch_series(const StructureAlgebra& alg, const Vec4& a, const Vec4& b, int order) {
  if (order < kMinSeriesOrder || order > kMaxSeriesOrder) {
    std::ostringstream msg;
    msg << "series order " << order << " outside [" << kMinSeriesOrder << ", "
        << kMaxSeriesOrder << "]";
    throw Error(errc::order_out_of_range, msg.str());
  }
  // Graded recursion for Z = log(e^a e^b) = sum_n Z_n:
  //   (n+1) Z_{n+1} = 1/2 [a-b, Z_n]
  //     + sum_{p>=1, 2p<=n} B_{2p}/(2p)! sum_{k_1+...+k_{2p}=n} [Z_{k_1},[...,[Z_{k_{2p}}, a+b]...]]
  // with V[m][j] accumulating the inner depth-m sums.
  const Vec4 apb = add(a, b), amb = sub(a, b);
  std::vector<Vec4> Z(static_cast<size_t>(order) + 1, Vec4{});
  Z[1] = apb;
  std::vector<std::vector<Vec4>> V(static_cast<size_t>(order) + 1,
                                   std::vector<Vec4>(static_cast<size_t>(order) + 1, Vec4{}));
  for (int n = 1; n < order; ++n) {
    V[1][n] = alg.bracket(Z[n], apb);
    for (int m = 2; m <= n; ++m) {
      Vec4 acc{};
      for (int k = 1; k <= n - m + 1; ++k) accumulate(acc, alg.bracket(Z[k], V[m - 1][n - k]));
      V[m][n] = acc;
    }
    Vec4 rhs = scaled(alg.bracket(amb, Z[n]), 0.5);
    for (int p = 1; 2 * p <= n; ++p) accumulate(rhs, scaled(V[2 * p][n], kBernOverFact[p]));
    Z[static_cast<size_t>(n) + 1] = scaled(rhs, 1.0 / (n + 1.0));
  }
  Vec4 total{};
  for (int n = 1; n <= order; ++n) accumulate(total, Z[static_cast<size_t>(n)]);
  return total;
}

Vec4 triple_product_series(const StructureAlgebra& alg, int order) {
  const Vec4 X{1, 0, 0, 0}, Y{0, 1, 0, 0}, Z{0, 0, 1, 0};
  return bch_series(alg, bch_series(alg, X, Y, order), Z, order);
}

Matrix matrix_exp(const Matrix& m) {
  // Scaling and squaring with the (13,13) Pade approximant.
  static const double b[14] = {64764752532480000., 32382376266240000., 7771770303897600.,
                               1187353796428800.,  129060195264000.,   10559470521600.,
                               670442572800.,      33522128640.,       1323241920.,
                               40840800.,          960960.,            16380.,
                               182.,               1.};
  const Eigen::Index n = m.rows();
  const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
  constexpr double theta13 = 5.371920351148152;
  int squarings = 0;
  if (norm1 > theta13) {
    std::frexp(norm1 / theta13, &squarings);
    if (squarings < 0) squarings = 0;
  }
  const Matrix A = m * std::ldexp(1.0, -squarings);
  const Matrix A2 = A * A;
  const Matrix A4 = A2 * A2;
  const Matrix A6 = A4 * A2;
  const Matrix ident = Matrix::Identity(n, n);
  Matrix U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) + b[7] * A6 + b[5] * A4 +
                  b[3] * A2 + b[1] * ident);
  Matrix V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) + b[6] * A6 + b[4] * A4 + b[2] * A2 +
             b[0] * ident;
  Matrix result = (V - U).partialPivLu().solve(V + U);
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

namespace {

// Principal square root of an upper-triangular matrix (Bjorck-Hammarling).
Matrix triangular_sqrt(const Matrix& T) {
  const Eigen::Index n = T.rows();
  Matrix S = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) S(i, i) = std::sqrt(T(i, i));
  for (Eigen::Index off = 1; off < n; ++off) {
    for (Eigen::Index i = 0; i + off < n; ++i) {
      const Eigen::Index j = i + off;
      Cplx acc = T(i, j);
      for (Eigen::Index k = i + 1; k < j; ++k) acc -= S(i, k) * S(k, j);
      S(i, j) = acc / (S(i, i) + S(j, j));
    }
  }
  return S;
}

}  // namespace

Matrix matrix_log_near_identity(const Matrix& m) {
  const Eigen::Index n = m.rows();
  Eigen::ComplexSchur<Matrix> schur(m);
  if (schur.info() != Eigen::Success)
    throw Error(errc::not_near_identity, "Schur decomposition failed");
  Matrix T = schur.matrixT();
  const Matrix Q = schur.matrixU();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Cplx lambda = T(i, i);
    if (std::abs(lambda) == 0.0 ||
        (lambda.real() < 0.0 && std::abs(lambda.imag()) <= 1e-14 * std::abs(lambda)))
      throw Error(errc::not_near_identity,
                  "eigenvalue on the closed negative real axis; principal log undefined");
  }
  const Matrix ident = Matrix::Identity(n, n);
  int sqrts = 0;
  while ((T - ident).cwiseAbs().maxCoeff() > 0.25 && sqrts < 64) {
    T = triangular_sqrt(T);
    ++sqrts;
  }
  const Matrix E = T - ident;
  Matrix term = E;
  Matrix acc = E;
  for (int k = 2; k <= 60; ++k) {
    term = term * E;
    acc += term * ((k % 2 == 0) ? -1.0 / k : 1.0 / k);
    if (term.cwiseAbs().maxCoeff() / k < 1e-18) break;
  }
  acc *= std::ldexp(1.0, sqrts);
  return Q * acc * Q.adjoint();
}

double rep_commutator_mismatch(const MatrixRep& rep) {
  auto comm = [](const Matrix& a, const Matrix& b) { return a * b - b * a; };
  const AlgebraSpec& s = rep.spec;
  double worst = 0.0;
  worst = std::max(worst,
                   (comm(rep.X, rep.Y) - (s.u * rep.X + s.v * rep.Y + s.c * rep.I)).norm());
  worst = std::max(worst,
                   (comm(rep.Y, rep.Z) - (s.w * rep.Y + s.z * rep.Z + s.d * rep.I)).norm());
  worst = std::max(worst, (comm(rep.X, rep.Z) -
                           (s.m * rep.X + s.n * rep.Y + s.p * rep.Z + s.e * rep.I)).norm());
  worst = std::max(worst, comm(rep.X, rep.I).norm());
  worst = std::max(worst, comm(rep.Y, rep.I).norm());
  worst = std::max(worst, comm(rep.Z, rep.I).norm());
  return worst;
}

double verify_matrix(const MatrixRep& rep, Cplx A, Cplx B, Cplx C, Cplx D) {
  const double img_norm = std::max(
      {rep.X.norm(), rep.Y.norm(), rep.Z.norm(), rep.I.norm(), 1.0});
  const double mismatch = rep_commutator_mismatch(rep);
  if (mismatch > 1e-12 * img_norm * img_norm) {
    std::ostringstream msg;
    msg << "rep '" << rep.name << "' violates the spec brackets by " << mismatch;
    throw Error(errc::rep_spec_mismatch, msg.str());
  }
  const Matrix lhs = matrix_exp(rep.X) * matrix_exp(rep.Y) * matrix_exp(rep.Z);
  const Matrix rhs = matrix_exp(A * rep.X + B * rep.Y + C * rep.Z + D * rep.I);
  return (lhs - rhs).norm();
}

double verify_matrix(const MatrixRep& rep, const ClosedForm& cf) {
  return verify_matrix(rep, cf.A, cf.B, cf.C, cf.D);
}

MatrixRep heisenberg_rep(Cplx c, Cplx d, Cplx e) {
  if (std::abs(c) == 0.0)
    throw Error(errc::bad_input, "heisenberg rep needs c != 0");
  MatrixRep rep;
  rep.name = "heisenberg3";
  rep.dim = 3;
  rep.X = Matrix::Zero(3, 3);
  rep.Y = Matrix::Zero(3, 3);
  rep.Z = Matrix::Zero(3, 3);
  rep.I = Matrix::Zero(3, 3);
  rep.X(0, 1) = 1.0;             // E12
  rep.Y(1, 2) = 1.0;             // E23
  rep.I(0, 2) = 1.0 / c;         // [X,Y] = E13 = c * I
  rep.Z(0, 1) = -d / c;          // solves [Y,Z] = dI, [X,Z] = eI
  rep.Z(1, 2) = e / c;
  rep.spec.c = c;
  rep.spec.d = d;
  rep.spec.e = e;
  return rep;
}

MatrixRep heisenberg_rank4_rep(Cplx c, Cplx d, Cplx e) {
  const MatrixRep base = heisenberg_rep(c, d, e);
  MatrixRep rep;
  rep.name = "heisenberg6";
  rep.dim = 6;
  auto embed = [](const Matrix& top, const Matrix& bottom) {
    Matrix out = Matrix::Zero(6, 6);
    out.block(0, 0, 3, 3) = top;
    out.block(3, 3, 3, 3) = bottom;
    return out;
  };
  // Second block shifts Z by the central E13; the images become rank 4.
  Matrix z2 = base.Z;
  z2(0, 2) = 1.0;
  rep.X = embed(base.X, base.X);
  rep.Y = embed(base.Y, base.Y);
  rep.Z = embed(base.Z, z2);
  rep.I = embed(base.I, base.I);
  rep.spec = base.spec;
  return rep;
}

MatrixRep sl2_virasoro_rep(int k, Cplx lm, Cplx l0, Cplx lk) {
  if (k != 1 && k != -1)
    throw Error(errc::bad_input, "sl2 rep exists for k = +-1 only");
  // L_{-1} = f, L_0 = h/2, L_1 = -e in the standard sl2 basis; the central
  // term vanishes at |k| = 1.
  Matrix Lm1 = Matrix::Zero(2, 2), L0 = Matrix::Zero(2, 2), Lp1 = Matrix::Zero(2, 2);
  Lm1(1, 0) = 1.0;
  L0(0, 0) = 0.5;
  L0(1, 1) = -0.5;
  Lp1(0, 1) = -1.0;
  const Matrix Lneg = (k == 1) ? Lm1 : Lp1;
  const Matrix Lpos = (k == 1) ? Lp1 : Lm1;

  MatrixRep rep;
  rep.name = (k == 1) ? "sl2_virasoro_k1" : "sl2_virasoro_km1";
  rep.dim = 2;
  rep.X = lm * Lneg;
  rep.Z = lk * Lpos;
  rep.I = Matrix::Zero(2, 2);
  const double kd = static_cast<double>(k);
  if (l0 == Cplx(0.0)) {
    // Two-factor convention: Y is the unscaled L_0, matching the l0 = 0
    // closed form whose B applies to L_0 itself.
    rep.Y = L0;
    rep.spec.u = rep.spec.z = kd;
    rep.spec.n = 2.0 * kd * lm * lk;
  } else {
    rep.Y = l0 * L0;
    rep.spec.u = rep.spec.z = kd * l0;
    rep.spec.n = 2.0 * kd * lm * lk / l0;
  }
  return rep;
}

std::vector<MatrixRep> builtin_reps() {
  return {heisenberg_rep(1.0), sl2_virasoro_rep(1, 0.1, 0.1, 0.1),
          heisenberg_rank4_rep(1.0, 0.5, -0.25)};
}

Vec4 extract_coefficients(const MatrixRep& rep, const Matrix& target, double* fit_residual) {
  const Eigen::Index n2 = rep.dim * rep.dim;
  Eigen::MatrixXcd S(n2, 4);
  S.col(0) = rep.X.reshaped();
  S.col(1) = rep.Y.reshaped();
  S.col(2) = rep.Z.reshaped();
  S.col(3) = rep.I.reshaped();
  const Eigen::VectorXcd t = target.reshaped();
  const Eigen::VectorXcd sol = S.colPivHouseholderQr().solve(t);
  if (fit_residual) *fit_residual = (S * sol - t).norm();
  return Vec4{sol(0), sol(1), sol(2), sol(3)};
}

}  // namespace bch
