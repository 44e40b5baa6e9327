#pragma once

#include <ostream>

namespace nrsurf {

// Runs the nine gate checks, printing one pass/fail line each. Returns true
// when every check passes.
bool run_acceptance(std::ostream& out);

}  // namespace nrsurf
