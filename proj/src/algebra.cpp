#include "bch/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace bch {

double AlgebraSpec::max_modulus() const {
  double out = 0.0;
  for (Cplx x : {u, v, c, w, z, d, m, n, p, e}) out = std::max(out, std::abs(x));
  return out;
}

double JacobiResidual::max_modulus() const {
  return std::max(std::max(std::abs(r1), std::abs(r2)), std::max(std::abs(r3), std::abs(r4)));
}

JacobiResidual jacobi_residual(const AlgebraSpec& s) {
  return JacobiResidual{
      s.u * s.w + s.m * s.z,
      s.v * s.m - s.w * s.p + s.n * (s.z - s.u),
      s.p * s.u + s.z * s.v,
      s.c * (s.w + s.m) + s.e * (s.z - s.u) - s.d * (s.p + s.v),
  };
}

std::string to_string(TypeTag tag) {
  switch (tag) {
    case TypeTag::T1a: return "T1a";
    case TypeTag::T1b: return "T1b";
    case TypeTag::T1c_i: return "T1c_i";
    case TypeTag::T1c_ii: return "T1c_ii";
    case TypeTag::T1c_iii: return "T1c_iii";
    case TypeTag::T1c_iv: return "T1c_iv";
    case TypeTag::T1c_v: return "T1c_v";
    case TypeTag::T2a: return "T2a";
    case TypeTag::T2b: return "T2b";
    case TypeTag::T3a: return "T3a";
    case TypeTag::T3b: return "T3b";
    case TypeTag::T4: return "T4";
    case TypeTag::T5: return "T5";
  }
  return "?";
}

TypeTag type_tag_from_string(const std::string& name) {
  for (TypeTag tag : kAllTypeTags)
    if (to_string(tag) == name) return tag;
  throw Error(errc::bad_input, "unknown type tag: " + name);
}

AlgebraType type_info(TypeTag tag) {
  switch (tag) {
    case TypeTag::T1a: return {tag, {"e", "n"}, 6};
    case TypeTag::T1b: return {tag, {"e", "m", "n"}, 6};
    case TypeTag::T1c_i: return {tag, {"e", "m", "n"}, 5};
    case TypeTag::T1c_ii: return {tag, {"e", "m", "n"}, 5};
    case TypeTag::T1c_iii: return {tag, {"e", "m", "n"}, 5};
    case TypeTag::T1c_iv: return {tag, {"e", "n", "p"}, 5};
    case TypeTag::T1c_v: return {tag, {"e", "m", "n", "p"}, 4};
    case TypeTag::T2a: return {tag, {"p"}, 4};
    case TypeTag::T2b: return {tag, {"n"}, 5};
    case TypeTag::T3a: return {tag, {"m"}, 4};
    case TypeTag::T3b: return {tag, {"n"}, 5};
    case TypeTag::T4: return {tag, {"e", "n"}, 8};
    case TypeTag::T5: return {tag, {}, 6};
  }
  throw Error(errc::bad_input, "bad tag");
}

std::vector<std::string> complete_spec_params(TypeTag tag) {
  switch (tag) {
    case TypeTag::T1a: return {"c", "d", "v", "w", "n", "e"};
    case TypeTag::T1b: return {"c", "v", "w", "m", "n", "e"};
    case TypeTag::T1c_i: return {"v", "w", "m", "n", "e"};
    case TypeTag::T1c_ii: return {"c", "d", "m", "n", "e"};
    case TypeTag::T1c_iii: return {"d", "w", "m", "n", "e"};
    case TypeTag::T1c_iv: return {"c", "v", "n", "p", "e"};
    case TypeTag::T1c_v: return {"m", "n", "p", "e"};
    case TypeTag::T2a: return {"z", "c", "d", "p"};
    case TypeTag::T2b: return {"z", "w", "c", "d", "n"};
    case TypeTag::T3a: return {"u", "c", "d", "m"};
    case TypeTag::T3b: return {"u", "v", "c", "d", "n"};
    case TypeTag::T4: return {"u", "v", "c", "w", "d", "n", "e"};
    case TypeTag::T5: return {"u", "v", "c", "w", "z", "d"};
  }
  throw Error(errc::bad_input, "bad tag");
}

namespace {

[[noreturn]] void throw_ambiguous(const char* what, double mag, double tol) {
  std::ostringstream msg;
  msg << "classification ambiguous: |" << what << "| = " << mag
      << " lies in the gray zone (" << tol << ", " << 10 * tol << ")";
  throw Error(errc::ambiguous_classification, msg.str());
}

}  // namespace

AlgebraType classify(const AlgebraSpec& sp, double tol) {
  const double S = sp.max_modulus();
  const double jacobi_tol = tol * std::max(1.0, S * S);
  const double jr = jacobi_residual(sp).max_modulus();
  if (jr >= jacobi_tol) {
    std::ostringstream msg;
    msg << "Jacobi residual " << jr << " exceeds tolerance " << jacobi_tol;
    throw Error(errc::jacobi_violation, msg.str());
  }
  if (S == 0.0) return type_info(TypeTag::T1c_v);

  const double t_lin = tol * S;      // zero threshold for single parameters
  const double t_prod = tol * S * S; // zero threshold for cw - dv
  auto is_zero = [&](Cplx x, const char* what) {
    const double a = std::abs(x);
    if (a > t_lin && a < 10 * t_lin) throw_ambiguous(what, a, t_lin);
    return a <= t_lin;
  };
  auto is_zero_prod = [&](Cplx x, const char* what) {
    const double a = std::abs(x);
    if (a > t_prod && a < 10 * t_prod) throw_ambiguous(what, a, t_prod);
    return a <= t_prod;
  };

  const bool zu = is_zero(sp.u, "u");
  const bool zz = is_zero(sp.z, "z");

  if (zu && zz) {
    if (!is_zero_prod(sp.c * sp.w - sp.d * sp.v, "cw-dv")) return type_info(TypeTag::T1a);
    if (!is_zero_prod(sp.c * sp.w, "cw")) return type_info(TypeTag::T1b);
    // cw = dv = 0: branch on which of (c, d, v, w) survive
    const bool nz_v = !is_zero(sp.v, "v");
    const bool nz_w = !is_zero(sp.w, "w");
    const bool nz_c = !is_zero(sp.c, "c");
    const bool nz_d = !is_zero(sp.d, "d");
    if (nz_v && nz_w) return type_info(TypeTag::T1c_i);
    if (nz_c && nz_d) return type_info(TypeTag::T1c_ii);
    if (nz_d || nz_w) {
      AlgebraType t = type_info(TypeTag::T1c_iii);
      if (!(nz_d && nz_w)) t.dimension = 4;  // reduced (d) or (w) variant
      return t;
    }
    if (nz_c || nz_v) {
      AlgebraType t = type_info(TypeTag::T1c_iv);
      if (!(nz_c && nz_v)) t.dimension = 4;  // reduced (c) or (v) variant
      return t;
    }
    return type_info(TypeTag::T1c_v);
  }
  if (zu && !zz) {
    return is_zero(sp.w, "w") ? type_info(TypeTag::T2a) : type_info(TypeTag::T2b);
  }
  if (!zu && zz) {
    return is_zero(sp.v, "v") ? type_info(TypeTag::T3a) : type_info(TypeTag::T3b);
  }
  return is_zero(sp.u - sp.z, "u-z") ? type_info(TypeTag::T4) : type_info(TypeTag::T5);
}

namespace {

class FreeValues {
 public:
  FreeValues(TypeTag tag, const std::map<std::string, Cplx>& values) : values_(values) {
    const auto expected = complete_spec_params(tag);
    for (const auto& [name, unused] : values) {
      if (std::find(expected.begin(), expected.end(), name) == expected.end())
        throw Error(errc::extraneous_parameter,
                    "type " + to_string(tag) + " does not take parameter '" + name + "'");
    }
    for (const auto& name : expected) {
      if (!values.count(name))
        throw Error(errc::missing_parameter,
                    "type " + to_string(tag) + " needs parameter '" + name + "'");
    }
  }
  Cplx operator[](const std::string& name) const { return values_.at(name); }

 private:
  const std::map<std::string, Cplx>& values_;
};

Cplx safe_div(Cplx num, Cplx den, const char* what) {
  if (std::abs(den) < 1e-150)
    throw Error(errc::degenerate_division,
                std::string("constraint denominator '") + what + "' vanishes");
  return num / den;
}

}  // namespace

AlgebraSpec complete_spec(TypeTag tag, const std::map<std::string, Cplx>& free_values) {
  const FreeValues in(tag, free_values);
  AlgebraSpec s;
  switch (tag) {
    case TypeTag::T1a:
      s.c = in["c"]; s.d = in["d"]; s.v = in["v"]; s.w = in["w"];
      s.n = in["n"]; s.e = in["e"];
      s.m = -s.w; s.p = -s.v;
      break;
    case TypeTag::T1b:
      s.c = in["c"]; s.v = in["v"]; s.w = in["w"];
      s.m = in["m"]; s.n = in["n"]; s.e = in["e"];
      s.d = safe_div(s.c * s.w, s.v, "v");  // the case condition cw = dv
      s.p = safe_div(s.v * s.m, s.w, "w");
      break;
    case TypeTag::T1c_i:
      s.v = in["v"]; s.w = in["w"]; s.m = in["m"]; s.n = in["n"]; s.e = in["e"];
      s.p = safe_div(s.m * s.v, s.w, "w");
      break;
    case TypeTag::T1c_ii:
      s.c = in["c"]; s.d = in["d"]; s.m = in["m"]; s.n = in["n"]; s.e = in["e"];
      s.p = safe_div(s.c * s.m, s.d, "d");
      break;
    case TypeTag::T1c_iii:
      s.d = in["d"]; s.w = in["w"]; s.m = in["m"]; s.n = in["n"]; s.e = in["e"];
      break;  // p = 0
    case TypeTag::T1c_iv:
      s.c = in["c"]; s.v = in["v"]; s.n = in["n"]; s.p = in["p"]; s.e = in["e"];
      break;  // m = 0
    case TypeTag::T1c_v:
      s.m = in["m"]; s.n = in["n"]; s.p = in["p"]; s.e = in["e"];
      break;
    case TypeTag::T2a:
      s.z = in["z"]; s.c = in["c"]; s.d = in["d"]; s.p = in["p"];
      s.e = safe_div(s.p * s.d, s.z, "z");
      break;
    case TypeTag::T2b:
      s.z = in["z"]; s.w = in["w"]; s.c = in["c"]; s.d = in["d"]; s.n = in["n"];
      s.p = safe_div(s.n * s.z, s.w, "w");
      s.e = safe_div(s.d * s.n, s.w, "w") - safe_div(s.c * s.w, s.z, "z");
      break;
    case TypeTag::T3a:
      s.u = in["u"]; s.c = in["c"]; s.d = in["d"]; s.m = in["m"];
      s.e = safe_div(s.c * s.m, s.u, "u");
      break;
    case TypeTag::T3b:
      s.u = in["u"]; s.v = in["v"]; s.c = in["c"]; s.d = in["d"]; s.n = in["n"];
      s.m = safe_div(s.n * s.u, s.v, "v");
      s.e = safe_div(s.c * s.n, s.v, "v") - safe_div(s.d * s.v, s.u, "u");
      break;
    case TypeTag::T4:
      s.u = in["u"]; s.v = in["v"]; s.c = in["c"]; s.w = in["w"]; s.d = in["d"];
      s.n = in["n"]; s.e = in["e"];
      s.z = s.u; s.m = -s.w; s.p = -s.v;
      break;
    case TypeTag::T5:
      s.u = in["u"]; s.v = in["v"]; s.c = in["c"];
      s.w = in["w"]; s.z = in["z"]; s.d = in["d"];
      s.m = -safe_div(s.u * s.w, s.z, "z");
      s.n = -s.v * s.w * (safe_div(1.0, s.u, "u") + safe_div(1.0, s.z, "z"));
      s.p = -safe_div(s.v * s.z, s.u, "u");
      s.e = -safe_div(s.c * s.w, s.z, "z") - safe_div(s.d * s.v, s.u, "u");
      break;
  }
  return s;
}

namespace {

// Deterministic draws independent of the standard library's distribution
// implementations: only mt19937_64 output words are consumed.
class Draw {
 public:
  Draw(TypeTag tag, std::uint64_t seed)
      : rng_(seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(tag) + 1) {
    rng_.discard(8);
  }
  double unit() {  // [0, 1)
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }
  // complex with modulus in [lo, hi]
  Cplx annulus(double lo, double hi) {
    const double r = lo + (hi - lo) * unit();
    const double th = 2.0 * std::numbers::pi * unit();
    return Cplx(r * std::cos(th), r * std::sin(th));
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

AlgebraSpec sample_spec(TypeTag tag, std::uint64_t seed, double scale) {
  if (!(scale > 0.0)) throw Error(errc::bad_input, "sample_spec: scale must be positive");
  Draw rnd(tag, seed);
  const double s1 = scale, lo = 0.1 * scale;
  std::map<std::string, Cplx> vals;

  // Rejection margins keep every defining (in)equality and every per-type
  // alpha-formula denominator at least scale/10 away from zero, so sampled
  // specs classify back unambiguously and always solve.
  auto apart = [&](Cplx a, Cplx b) { return std::abs(a - b) >= 0.1 * scale; };
  for (int attempt = 0; attempt < 1000; ++attempt) {
    vals.clear();
    switch (tag) {
      case TypeTag::T1a: {
        const Cplx v = rnd.annulus(lo, s1), w = rnd.annulus(lo, s1);
        const Cplx c = rnd.annulus(lo, s1), d = rnd.annulus(lo, s1);
        if (!apart(v, w)) continue;
        const double pm = std::max(std::abs(c * w), std::abs(d * v));
        if (std::abs(c * w - d * v) < 0.1 * pm) continue;
        vals = {{"c", c}, {"d", d}, {"v", v}, {"w", w},
                {"n", rnd.annulus(lo, s1)}, {"e", rnd.annulus(lo, s1)}};
        break;
      }
      case TypeTag::T1b: {
        const Cplx c = rnd.annulus(0.3 * s1, s1), v = rnd.annulus(0.3 * s1, s1);
        const Cplx w = rnd.annulus(0.3 * s1, s1), m = rnd.annulus(lo, s1);
        if (!apart(v, w) || !apart(m, w)) continue;
        vals = {{"c", c}, {"v", v}, {"w", w}, {"m", m},
                {"n", rnd.annulus(lo, s1)}, {"e", rnd.annulus(lo, s1)}};
        break;
      }
      case TypeTag::T1c_i: {
        const Cplx v = rnd.annulus(0.3 * s1, s1), w = rnd.annulus(0.3 * s1, s1);
        const Cplx m = rnd.annulus(lo, s1);
        if (!apart(v, w) || !apart(m, w)) continue;
        vals = {{"v", v}, {"w", w}, {"m", m},
                {"n", rnd.annulus(lo, s1)}, {"e", rnd.annulus(lo, s1)}};
        break;
      }
      case TypeTag::T1c_ii: {
        const Cplx c = rnd.annulus(0.3 * s1, s1), d = rnd.annulus(0.3 * s1, s1);
        const Cplx m = rnd.annulus(lo, s1);
        if (!apart(c, d)) continue;
        vals = {{"c", c}, {"d", d}, {"m", m},
                {"n", rnd.annulus(lo, s1)}, {"e", rnd.annulus(lo, s1)}};
        break;
      }
      case TypeTag::T1c_iii: {
        const Cplx d = rnd.annulus(0.3 * s1, s1), w = rnd.annulus(0.3 * s1, s1);
        const Cplx m = rnd.annulus(lo, s1);
        if (!apart(m, w)) continue;
        vals = {{"d", d}, {"w", w}, {"m", m},
                {"n", rnd.annulus(lo, s1)}, {"e", rnd.annulus(lo, s1)}};
        break;
      }
      case TypeTag::T1c_iv: {
        const Cplx c = rnd.annulus(0.3 * s1, s1), v = rnd.annulus(0.3 * s1, s1);
        const Cplx p = rnd.annulus(lo, s1);
        if (!apart(p, v)) continue;
        vals = {{"c", c}, {"v", v}, {"p", p},
                {"n", rnd.annulus(lo, s1)}, {"e", rnd.annulus(lo, s1)}};
        break;
      }
      case TypeTag::T1c_v: {
        const Cplx m = rnd.annulus(lo, s1), p = rnd.annulus(lo, s1);
        if (!apart(m, p)) continue;
        vals = {{"m", m}, {"n", rnd.annulus(lo, s1)}, {"p", p}, {"e", rnd.annulus(lo, s1)}};
        break;
      }
      case TypeTag::T2a:
        vals = {{"z", rnd.annulus(0.6 * s1, s1)}, {"c", rnd.annulus(lo, s1)},
                {"d", rnd.annulus(lo, s1)}, {"p", rnd.annulus(lo, s1)}};
        break;
      case TypeTag::T2b:
        vals = {{"z", rnd.annulus(0.6 * s1, s1)}, {"w", rnd.annulus(0.6 * s1, s1)},
                {"c", rnd.annulus(lo, s1)}, {"d", rnd.annulus(lo, s1)},
                {"n", rnd.annulus(lo, s1)}};
        break;
      case TypeTag::T3a:
        vals = {{"u", rnd.annulus(0.6 * s1, s1)}, {"c", rnd.annulus(lo, s1)},
                {"d", rnd.annulus(lo, s1)}, {"m", rnd.annulus(lo, s1)}};
        break;
      case TypeTag::T3b:
        vals = {{"u", rnd.annulus(0.6 * s1, s1)}, {"v", rnd.annulus(0.6 * s1, s1)},
                {"c", rnd.annulus(lo, s1)}, {"d", rnd.annulus(lo, s1)},
                {"n", rnd.annulus(lo, s1)}};
        break;
      case TypeTag::T4:
        vals = {{"u", rnd.annulus(0.6 * s1, s1)}, {"v", rnd.annulus(lo, s1)},
                {"c", rnd.annulus(lo, s1)}, {"w", rnd.annulus(lo, s1)},
                {"d", rnd.annulus(lo, s1)}, {"n", rnd.annulus(lo, s1)},
                {"e", rnd.annulus(lo, s1)}};
        break;
      case TypeTag::T5: {
        const Cplx u = rnd.annulus(0.6 * s1, s1), z = rnd.annulus(0.6 * s1, s1);
        if (std::abs(u - z) < 0.2 * scale) continue;
        vals = {{"u", u}, {"v", rnd.annulus(lo, 0.6 * s1)}, {"c", rnd.annulus(lo, s1)},
                {"w", rnd.annulus(lo, 0.6 * s1)}, {"z", z}, {"d", rnd.annulus(lo, s1)}};
        break;
      }
    }
    if (!vals.empty()) return complete_spec(tag, vals);
  }
  throw Error(errc::bad_input, "sample_spec: margin rejection did not terminate");
}

}  // namespace bch
