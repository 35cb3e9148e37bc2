#pragma once

// Built-in end-to-end verification: ten numbered checks covering the exact
// ODE identities, the period-lattice reproduction, point counts, the
// torsion gcd, cusp counts, the finiteness bounds, and the property suites.

#include <iosfwd>
#include <optional>

namespace modparam {

// Runs the checks (all ten, or a single one when `only` is set), printing
// exactly one line per check:
//   criterion N: PASS (<detail>)
//   criterion N: FAIL (<detail>)
// Returns the number of failing checks.
int run_acceptance(std::ostream& os, std::optional<int> only = std::nullopt);

}  // namespace modparam
