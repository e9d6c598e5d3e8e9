#pragma once

#include <iosfwd>
#include <string>

#include "su11/fock.hpp"

namespace su11 {

// State file layout:
//   { "n_max": int, "amplitudes": [ { "na": int, "nb": int, "re": float, "im": float } ] }
// Unlisted sites are zero. Writers list only nonzero sites, ordered by (na, nb).

TwoModeState read_state(std::istream& in);
TwoModeState read_state_file(const std::string& path);

void write_state(std::ostream& out, const TwoModeState& state);
void write_state_file(const std::string& path, const TwoModeState& state);

}  // namespace su11
