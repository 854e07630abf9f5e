#ifndef BCH_JSON_IO_HPP
#define BCH_JSON_IO_HPP

#include <json.hpp>

#include "bch/closed_form.hpp"

namespace bch {

inline constexpr const char* kSpecSchema = "bch-spec/1";

/// Complex numbers serialize as two-element [re, im] arrays; bare numbers are
/// accepted on input as a shorthand for [x, 0].
nlohmann::json cplx_to_json(Cplx value);
Cplx cplx_from_json(const nlohmann::json& j);

/// Spec object: {"schema": "bch-spec/1", "u": [re,im], ..., "e": [re,im]}.
/// Missing keys default to zero; unknown keys raise errc::bad_input.
nlohmann::json spec_to_json(const AlgebraSpec& spec);
AlgebraSpec spec_from_json(const nlohmann::json& j);

nlohmann::json closed_form_to_json(const ClosedForm& cf);

}  // namespace bch

#endif
