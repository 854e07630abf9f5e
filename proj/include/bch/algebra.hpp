#ifndef BCH_ALGEBRA_HPP
#define BCH_ALGEBRA_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bch/kernels.hpp"

namespace bch {

/// Structure constants of a commutator algebra on span{X, Y, Z, I}:
///   [X,Y] = uX + vY + cI,  [Y,Z] = wY + zZ + dI,  [X,Z] = mX + nY + pZ + eI,
/// with I central.
struct AlgebraSpec {
  Cplx u{}, v{}, c{};
  Cplx w{}, z{}, d{};
  Cplx m{}, n{}, p{}, e{};

  /// Largest modulus among the ten parameters.
  double max_modulus() const;

  bool operator==(const AlgebraSpec&) const = default;
};

/// The four left-hand sides of the Jacobi linear system.
struct JacobiResidual {
  Cplx r1;  // uw + mz
  Cplx r2;  // vm - wp + n(z-u)
  Cplx r3;  // pu + zv
  Cplx r4;  // c(w+m) + e(z-u) - d(p+v)

  double max_modulus() const;
};

JacobiResidual jacobi_residual(const AlgebraSpec& spec);

/// The thirteen Jacobi-consistent families.
enum class TypeTag {
  T1a,     // u=z=0, cw != dv
  T1b,     // u=z=0, cw = dv != 0
  T1c_i,   // u=z=0, cw=dv=0, pattern (v,w)
  T1c_ii,  // (c,d)
  T1c_iii, // (d,w) or (d) or (w)
  T1c_iv,  // (c,v) or (c) or (v)
  T1c_v,   // all six pair parameters zero
  T2a,     // u=0, z!=0, w=0
  T2b,     // u=0, z!=0, w!=0
  T3a,     // u!=0, z=0, v=0
  T3b,     // u!=0, z=0, v!=0
  T4,      // u=z != 0
  T5,      // u != z, uz != 0
};

inline constexpr TypeTag kAllTypeTags[] = {
    TypeTag::T1a,    TypeTag::T1b,    TypeTag::T1c_i,  TypeTag::T1c_ii,
    TypeTag::T1c_iii, TypeTag::T1c_iv, TypeTag::T1c_v, TypeTag::T2a,
    TypeTag::T2b,    TypeTag::T3a,    TypeTag::T3b,    TypeTag::T4,
    TypeTag::T5,
};

std::string to_string(TypeTag tag);
TypeTag type_tag_from_string(const std::string& name);

struct AlgebraType {
  TypeTag tag;
  std::vector<std::string> free_params;  // parameters of [X,Z] left unfixed by Jacobi
  int dimension;                         // number of parameters unfixed overall
};

/// Static per-type data (free parameter list and the generic dimension).
AlgebraType type_info(TypeTag tag);

/// Names of the values complete_spec expects for a type. Includes the free
/// pair parameters that select a member of the family, not just the [X,Z]
/// slots (e.g. T1a takes c,d,v,w,n,e).
std::vector<std::string> complete_spec_params(TypeTag tag);

inline constexpr double kDefaultClassifyTol = 1e-12;

/// Determines the unique family of a Jacobi-consistent spec.
///
/// A parameter counts as zero when its modulus is below tol relative to the
/// largest parameter modulus. Throws errc::jacobi_violation when the Jacobi
/// residual exceeds tolerance and errc::ambiguous_classification when a
/// defining magnitude falls between tol and 10*tol of zero. The reported
/// dimension accounts for the reduced (d)/(w) and (c)/(v) variants of
/// types 1c-iii and 1c-iv.
AlgebraType classify(const AlgebraSpec& spec, double tol = kDefaultClassifyTol);

/// Builds the full spec of a type from its free values, solving the type's
/// Jacobi constraints for the remaining parameters.
AlgebraSpec complete_spec(TypeTag tag, const std::map<std::string, Cplx>& free_values);

/// Deterministic pseudo-random Jacobi-consistent spec of the given type.
/// Free parameters have modulus <= scale and the type's defining
/// (in)equalities hold with margin, so classification round-trips.
AlgebraSpec sample_spec(TypeTag tag, std::uint64_t seed, double scale);

}  // namespace bch

#endif
