#include "bch/alpha.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace bch {

std::string to_string(AlphaBranch branch) {
  switch (branch) {
    case AlphaBranch::closed_form: return "closed_form";
    case AlphaBranch::quadratic_root_plus: return "quadratic_root_plus";
    case AlphaBranch::quadratic_root_minus: return "quadratic_root_minus";
    case AlphaBranch::factor_xu: return "factor_xu";
    case AlphaBranch::factor_xz: return "factor_xz";
    case AlphaBranch::polynomial_root: return "polynomial_root";
    case AlphaBranch::newton: return "newton";
  }
  return "?";
}

Cplx fundamental_residual(const AlgebraSpec& sp, Cplx alpha) {
  const Cplx beta = 1.0 - alpha;
  const Cplx gA = g_kernel(alpha, sp.u, sp.v);
  const Cplx hA = h_kernel(alpha, sp.u, sp.v);
  const Cplx gB = g_kernel(beta, sp.z, sp.w);
  const Cplx hB = h_kernel(beta, sp.z, sp.w);
  return hA * (hB * (sp.u + sp.z) + gB * (sp.m - sp.w)) +
         gA * (hB * (sp.p - sp.v) - gB * sp.n);
}

namespace {

// |k| <= 64 scan window for the exclusion condition.
bool off_excluded_points(Cplx arg) {
  long long k = 0;
  const double dist = detail::dist_to_pole(arg, &k);
  if (k == 0 || std::llabs(k) > 64) return true;
  return dist > kPoleGuard;
}

double residual_or_huge(const AlgebraSpec& sp, Cplx alpha) {
  try {
    return std::abs(fundamental_residual(sp, alpha));
  } catch (const Error& e) {
    if (e.code() == errc::pole) return std::numeric_limits<double>::max();
    throw;
  }
}

}  // namespace

bool alpha_admissible(const AlgebraSpec& sp, Cplx alpha) {
  const Cplx beta = 1.0 - alpha;
  return off_excluded_points(sp.v - alpha * sp.u) && off_excluded_points(sp.w - beta * sp.z);
}

AlphaSolution make_alpha_solution(const AlgebraSpec& sp, Cplx alpha, AlphaBranch branch) {
  AlphaSolution out;
  out.alpha = alpha;
  out.beta = 1.0 - alpha;
  out.branch = branch;
  out.admissible = alpha_admissible(sp, alpha);
  out.residual = residual_or_huge(sp, alpha);
  if (out.residual == std::numeric_limits<double>::max()) out.admissible = false;
  return out;
}

namespace {

const char* type1_denominator_name(TypeTag tag) {
  switch (tag) {
    case TypeTag::T1a: return "(v-w) s(v-w)";
    case TypeTag::T1b: return "(m-w)(e^{v/2} w s(w) - e^{w/2} v s(v))";
    case TypeTag::T1c_i: return "(m-w)(w-v) s(w-v)";
    case TypeTag::T1c_ii: return "m(d-c)";
    case TypeTag::T1c_iii: return "m-w";
    case TypeTag::T1c_iv: return "p-v";
    case TypeTag::T1c_v: return "m-p";
    default: return "?";
  }
}

// u = z = 0 master form of the fundamental equation: alpha * k1 = k0 with
//   k1 = e^{v/2} s(w)(m-w) - e^{w/2} s(v)(p-v)
//   k0 = s(v)(n s(w) - e^{w/2}(p-v)).
// Every rational per-family solution is a specialization of this quotient.
std::vector<AlphaSolution> solve_type1(const AlgebraSpec& sp, TypeTag tag) {
  const Cplx sv = s(sp.v), sw = s(sp.w);
  const Cplx ev = std::exp(sp.v / 2.0), ew = std::exp(sp.w / 2.0);
  const Cplx k1 = ev * sw * (sp.m - sp.w) - ew * sv * (sp.p - sp.v);
  const Cplx k0 = sv * (sp.n * sw - ew * (sp.p - sp.v));
  const double ref = std::max({std::abs(ev * sw * (sp.m - sp.w)), std::abs(ew * sv * (sp.p - sp.v)),
                               std::abs(sv * sp.n * sw), std::abs(sv * ew * (sp.p - sp.v)),
                               std::numeric_limits<double>::min()});
  if (std::abs(k1) <= 1e-12 * ref) {
    if (std::abs(k0) <= 1e-12 * ref) {
      // Identically satisfied (e.g. all commutators central or zero): every
      // alpha works, return the canonical midpoint.
      return {make_alpha_solution(sp, 0.5, AlphaBranch::closed_form)};
    }
    std::ostringstream msg;
    msg << "type " << to_string(tag) << " alpha formula denominator "
        << type1_denominator_name(tag) << " vanishes";
    throw Error(errc::degenerate_denominator, msg.str());
  }
  return {make_alpha_solution(sp, k0 / k1, AlphaBranch::closed_form)};
}

Cplx t4_quadratic_b(const AlgebraSpec& sp) {
  // Monic quadratic in x^u for u = z, m = -w, p = -v:
  //   x^{2u} + b x^u + e^{u+v-w} = 0.
  // The n-term carries e^{(2u+v-w)/2}; expanding the exponential polynomial
  // for u = z forces this exponent, and the Virasoro specialization
  // (S = 1 + e^{-u} - k^2 l_{-k} l_k) only follows from it.
  return (sp.n * sp.u / 2.0) * s(sp.v) * s(sp.w) * std::exp(sp.u + (sp.v - sp.w) / 2.0) -
         std::exp(sp.u) - std::exp(sp.v) + std::exp(sp.u + sp.v) - std::exp(sp.u + sp.v - sp.w);
}

std::vector<AlphaSolution> solve_type4(const AlgebraSpec& sp) {
  const Cplx b = t4_quadratic_b(sp);
  const Cplx disc = std::sqrt(b * b - 4.0 * std::exp(sp.u + sp.v - sp.w));
  const Cplx xp = (-b + disc) / 2.0;
  const Cplx xm = (-b - disc) / 2.0;
  std::vector<AlphaSolution> out;
  out.push_back(make_alpha_solution(sp, std::log(xp) / sp.u, AlphaBranch::quadratic_root_plus));
  if (std::abs(xp - xm) > 1e-14 * (std::abs(xp) + std::abs(xm)))
    out.push_back(make_alpha_solution(sp, std::log(xm) / sp.u, AlphaBranch::quadratic_root_minus));
  return out;
}

}  // namespace

std::vector<AlphaSolution> solve_alpha(const AlgebraSpec& sp, const AlgebraType& type) {
  std::vector<AlphaSolution> out;
  switch (type.tag) {
    case TypeTag::T1a:
    case TypeTag::T1b:
    case TypeTag::T1c_i:
    case TypeTag::T1c_ii:
    case TypeTag::T1c_iii:
    case TypeTag::T1c_iv:
    case TypeTag::T1c_v:
      out = solve_type1(sp, type.tag);
      break;
    case TypeTag::T2a:
      out = {make_alpha_solution(sp, -sp.p / sp.z, AlphaBranch::closed_form)};
      break;
    case TypeTag::T2b:
      out = {make_alpha_solution(sp, -sp.n / sp.w, AlphaBranch::closed_form)};
      break;
    case TypeTag::T3a:
      out = {make_alpha_solution(sp, (sp.m + sp.u) / sp.u, AlphaBranch::closed_form)};
      break;
    case TypeTag::T3b:
      out = {make_alpha_solution(sp, sp.v / sp.u, AlphaBranch::closed_form)};
      break;
    case TypeTag::T4:
      out = solve_type4(sp);
      break;
    case TypeTag::T5:
      out = {make_alpha_solution(sp, sp.v / sp.u, AlphaBranch::factor_xu),
             make_alpha_solution(sp, 1.0 - sp.w / sp.z, AlphaBranch::factor_xz)};
      break;
  }
  if (std::none_of(out.begin(), out.end(), [](const AlphaSolution& a) { return a.admissible; }))
    throw Error(errc::inadmissible_only,
                "every alpha candidate violates the exclusion condition");
  return out;
}

AlphaEquation build_alpha_polynomial(const AlgebraSpec& sp) {
  const double scale = std::max(1.0, sp.max_modulus());
  if (std::abs(sp.u) <= kDefaultClassifyTol * scale || std::abs(sp.z) <= kDefaultClassifyTol * scale)
    throw Error(errc::unsupported_shape,
                "exponential polynomial needs u != 0 and z != 0; use the per-type formulas");
  const Cplx u = sp.u, v = sp.v, w = sp.w, z = sp.z;
  const Cplx sv = s(v), sw = s(w);
  const Cplx q = (u + z) / (u * z);
  AlphaEquation eq;
  eq.u = u;
  eq.z = z;
  eq.c_upz = std::exp((w - 2.0 * z) / 2.0) * (q * std::exp(v / 2.0) + (sp.p - v) / z * sv);
  eq.c_u = sp.n * sv * sw - q * std::exp((v + w) / 2.0) -
           (sp.m - w) / u * sw * std::exp(v / 2.0) - (sp.p - v) / z * sv * std::exp(w / 2.0);
  eq.c_z = -q * std::exp((v + w - 2.0 * z) / 2.0);
  eq.c_0 = q * std::exp((v + w) / 2.0) + (sp.m - w) / u * sw * std::exp(v / 2.0);
  return eq;
}

Cplx alpha_equation_eval(const AlphaEquation& eq, Cplx alpha) {
  return eq.c_upz * std::exp(alpha * (eq.u + eq.z)) + eq.c_u * std::exp(alpha * eq.u) +
         eq.c_z * std::exp(alpha * eq.z) + eq.c_0;
}

namespace {

// u/z = P/Q with small integers, or nullopt.
struct Ratio {
  long long p, q;
};

std::optional<Ratio> rational_ratio(Cplx u, Cplx z) {
  const Cplx r = u / z;
  for (long long q = 1; q <= 16; ++q) {
    const double preal = r.real() * static_cast<double>(q);
    const long long p = std::llround(preal);
    if (p == 0 || std::llabs(p) > 16) continue;
    const Cplx approx(static_cast<double>(p) / static_cast<double>(q), 0.0);
    if (std::abs(r - approx) <= 1e-9 * std::max(1.0, std::abs(r))) {
      const long long g = std::gcd(p, q);
      return Ratio{p / g, q / g};
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<AlphaSolution> solve_alpha_generic(const AlgebraSpec& spec, const AlphaEquation& eq,
                                               std::optional<Cplx> seed) {
  const auto ratio = rational_ratio(eq.u, eq.z);
  if (!ratio) {
    if (seed) return {refine_alpha_newton(spec, *seed)};
    throw Error(errc::unsupported_ratio,
                "u/z is not a small rational; supply a seed for Newton refinement");
  }
  const long long P = ratio->p, Q = ratio->q;

  // Substitute y = e^{alpha u / P}: x^u = y^P, x^z = y^Q.
  const long long exps[4] = {P + Q, P, Q, 0};
  const Cplx coefs[4] = {eq.c_upz, eq.c_u, eq.c_z, eq.c_0};
  const long long emin = *std::min_element(exps, exps + 4);
  const long long emax = *std::max_element(exps, exps + 4);
  std::vector<Cplx> poly(static_cast<size_t>(emax - emin) + 1, Cplx(0.0));
  for (int i = 0; i < 4; ++i) poly[static_cast<size_t>(exps[i] - emin)] += coefs[i];

  double cmax = 0.0;
  for (const Cplx& c : poly) cmax = std::max(cmax, std::abs(c));
  if (cmax == 0.0)
    throw Error(errc::no_isolated_roots, "alpha equation is identically zero");
  size_t hi = poly.size() - 1, lo = 0;
  while (hi > 0 && std::abs(poly[hi]) <= 1e-14 * cmax) --hi;
  while (lo < hi && std::abs(poly[lo]) <= 1e-14 * cmax) ++lo;  // y = 0 is never admissible
  const size_t deg = hi - lo;
  if (deg == 0)
    throw Error(errc::no_isolated_roots, "alpha equation has no isolated roots");

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(deg),
                                                      static_cast<Eigen::Index>(deg));
  for (size_t i = 0; i + 1 < deg; ++i) companion(static_cast<Eigen::Index>(i) + 1,
                                                 static_cast<Eigen::Index>(i)) = 1.0;
  for (size_t i = 0; i < deg; ++i)
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg) - 1) =
        -poly[lo + i] / poly[hi];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, /*computeEigenvectors=*/false);

  std::vector<AlphaSolution> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Cplx y = es.eigenvalues()(i);
    if (std::abs(y) < 1e-300) continue;
    Cplx alpha = static_cast<double>(P) * std::log(y) / eq.u;
    // polish: accept a Newton-refined root only when it stays nearby and
    // strictly improves the residual
    AlphaSolution cand = make_alpha_solution(spec, alpha, AlphaBranch::polynomial_root);
    try {
      AlphaSolution polished = refine_alpha_newton(spec, alpha);
      if (polished.residual < cand.residual &&
          std::abs(polished.alpha - alpha) < 1e-6 * std::max(1.0, std::abs(alpha))) {
        polished.branch = AlphaBranch::polynomial_root;
        cand = polished;
      }
    } catch (const Error&) {
      // keep the unpolished candidate
    }
    const bool dup = std::any_of(out.begin(), out.end(), [&](const AlphaSolution& a) {
      return std::abs(a.alpha - cand.alpha) <= 1e-9 * (1.0 + std::abs(cand.alpha));
    });
    if (!dup) out.push_back(cand);
  }
  std::sort(out.begin(), out.end(), [](const AlphaSolution& a, const AlphaSolution& b) {
    if (a.alpha.real() != b.alpha.real()) return a.alpha.real() < b.alpha.real();
    return a.alpha.imag() < b.alpha.imag();
  });
  return out;
}

AlphaSolution refine_alpha_newton(const AlgebraSpec& spec, Cplx seed) {
  Cplx a = seed;
  double r = residual_or_huge(spec, a);
  bool step_converged = false;
  for (int iter = 0; iter < 200 && r >= 1e-12; ++iter) {
    const double h = 1e-7 * std::max(1.0, std::abs(a));
    Cplx fa, fp;
    try {
      fa = fundamental_residual(spec, a);
      fp = (fundamental_residual(spec, a + h) - fundamental_residual(spec, a - h)) / (2.0 * h);
    } catch (const Error& e) {
      if (e.code() != errc::pole) throw;
      throw Error(errc::no_convergence, "Newton stepped onto a pole");
    }
    if (std::abs(fp) == 0.0)
      throw Error(errc::no_convergence, "Newton derivative vanished");
    const Cplx full_step = -fa / fp;
    double lambda = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 20; ++halving, lambda /= 2.0) {
      const Cplx trial = a + lambda * full_step;
      const double rt = residual_or_huge(spec, trial);
      if (rt < r) {
        a = trial;
        r = rt;
        improved = true;
        break;
      }
    }
    if (!improved) break;
    if (std::abs(lambda * full_step) < 1e-15 * std::max(1.0, std::abs(a))) {
      step_converged = true;
      break;
    }
  }
  if (r >= 1e-12 && !step_converged) {
    std::ostringstream msg;
    msg << "Newton refinement stalled at residual " << r;
    throw Error(errc::no_convergence, msg.str());
  }
  return make_alpha_solution(spec, a, AlphaBranch::newton);
}

}  // namespace bch
