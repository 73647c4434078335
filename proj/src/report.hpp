#pragma once

#include <string>

#include "checks.hpp"

namespace slantgeo {

// Machine format: canonical JSON with sorted keys and %.17g doubles;
// byte-identical for a fixed manifest and seed (timings are excluded).
std::string emit_machine(const RunReport& rep);

// Human format: one aligned line per check, the discrepancy table and a
// summary, including wall-clock per check.
std::string emit_human(const RunReport& rep);

}  // namespace slantgeo
