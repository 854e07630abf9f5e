#include "bch/json_io.hpp"

#include <algorithm>
#include <cmath>

namespace bch {

using nlohmann::json;

json cplx_to_json(Cplx value) { return json::array({value.real(), value.imag()}); }

Cplx cplx_from_json(const json& j) {
  if (j.is_number()) return Cplx(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    const Cplx out(j[0].get<double>(), j[1].get<double>());
    if (!std::isfinite(out.real()) || !std::isfinite(out.imag()))
      throw Error(errc::bad_input, "complex value must be finite");
    return out;
  }
  throw Error(errc::bad_input, "complex value must be a number or a [re, im] array");
}

json spec_to_json(const AlgebraSpec& s) {
  json j;
  j["schema"] = kSpecSchema;
  j["u"] = cplx_to_json(s.u);
  j["v"] = cplx_to_json(s.v);
  j["c"] = cplx_to_json(s.c);
  j["w"] = cplx_to_json(s.w);
  j["z"] = cplx_to_json(s.z);
  j["d"] = cplx_to_json(s.d);
  j["m"] = cplx_to_json(s.m);
  j["n"] = cplx_to_json(s.n);
  j["p"] = cplx_to_json(s.p);
  j["e"] = cplx_to_json(s.e);
  return j;
}

AlgebraSpec spec_from_json(const json& j) {
  if (!j.is_object()) throw Error(errc::bad_input, "spec must be a JSON object");
  if (j.contains("schema") && j["schema"] != kSpecSchema)
    throw Error(errc::bad_input, "unsupported schema; expected \"" + std::string(kSpecSchema) + "\"");
  static const char* keys[] = {"u", "v", "c", "w", "z", "d", "m", "n", "p", "e"};
  for (const auto& [key, unused] : j.items()) {
    if (key == "schema") continue;
    if (std::find_if(std::begin(keys), std::end(keys),
                     [&](const char* k) { return key == k; }) == std::end(keys))
      throw Error(errc::bad_input, "unknown spec key '" + key + "'");
  }
  AlgebraSpec s;
  auto get = [&](const char* key) { return j.contains(key) ? cplx_from_json(j[key]) : Cplx(0.0); };
  s.u = get("u");
  s.v = get("v");
  s.c = get("c");
  s.w = get("w");
  s.z = get("z");
  s.d = get("d");
  s.m = get("m");
  s.n = get("n");
  s.p = get("p");
  s.e = get("e");
  return s;
}

json closed_form_to_json(const ClosedForm& cf) {
  json j;
  j["A"] = cplx_to_json(cf.A);
  j["B"] = cplx_to_json(cf.B);
  j["C"] = cplx_to_json(cf.C);
  j["D"] = cplx_to_json(cf.D);
  j["alpha"] = cplx_to_json(cf.alpha.alpha);
  j["beta"] = cplx_to_json(cf.alpha.beta);
  j["branch"] = to_string(cf.alpha.branch);
  j["admissible"] = cf.alpha.admissible;
  j["alpha_residual"] = cf.alpha.residual;
  j["u_tilde"] = cplx_to_json(cf.tilde.u_tilde);
  j["v_tilde"] = cplx_to_json(cf.tilde.v_tilde);
  j["c_tilde"] = cplx_to_json(cf.tilde.c_tilde);
  j["type"] = to_string(cf.type.tag);
  return j;
}

}  // namespace bch
