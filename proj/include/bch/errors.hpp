#ifndef BCH_ERRORS_HPP
#define BCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bch {

/// Failure categories raised across the library. Every throw site uses
/// bch::Error so callers can branch on the code instead of parsing messages.
enum class errc {
  pole,                      // evaluation lands on a genuine pole (s(arg) = 0, arg != 0)
  jacobi_violation,          // spec does not satisfy the Jacobi linear system
  ambiguous_classification,  // a defining magnitude sits in the gray zone near zero
  missing_parameter,         // complete_spec: required free value absent
  extraneous_parameter,      // complete_spec: value supplied that the type does not take
  degenerate_division,       // complete_spec: constraint denominator vanishes
  degenerate_denominator,    // solve_alpha: per-type formula denominator vanishes
  inadmissible_only,         // every alpha candidate violates the exclusion condition
  unsupported_shape,         // exponential polynomial undefined (u = 0 or z = 0)
  unsupported_ratio,         // u/z not a small rational and no Newton seed given
  no_convergence,            // Newton refinement failed
  no_isolated_roots,         // alpha equation is identically zero
  order_out_of_range,        // series order outside [1, 20]
  not_near_identity,         // principal matrix log undefined for this spectrum
  rep_spec_mismatch,         // matrix images do not realize the spec's brackets
  limit_unstable,            // Richardson levels disagree in the two-factor limit
  bad_input,                 // malformed JSON / CLI input
};

class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace bch

#endif
