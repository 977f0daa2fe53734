#pragma once

#include <string>

#include "jetext/jets.hpp"

namespace jetext {

// Parse a field from its JSON form:
//   { "dim": n, "m": m, "p": p, "points": [[..],..],
//     "jets": [ { "<alpha as 'a0,a1,..'>": coeff, ... }, ... ] }
// with coeff = D^alpha P(point); omitted alphas are zero.
JetField parse_jet_field(const std::string& json_text);

// Emit the same schema deterministically (all coefficients, fixed order).
std::string write_jet_field(const JetField& f);

}  // namespace jetext
