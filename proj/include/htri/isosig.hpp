#pragma once

#include <string>

#include "htri/triangulation.hpp"

namespace htri {

// Canonical string invariant of the combinatorial isomorphism class: the
// lexicographically least destination encoding over all (start tet,
// start labelling) choices of a breadth-first relabelling.
std::string iso_signature(const Triangulation& tri);

// Rebuilds a triangulation from its signature (inverse of iso_signature
// up to isomorphism).
Triangulation from_iso_signature(const std::string& sig);

// Applies an arbitrary relabelling: tetrahedron i (with vertex map perms[i])
// becomes tetrahedron order[i] of the result.  Used in tests.
Triangulation relabel(const Triangulation& tri, const std::vector<int>& order,
                      const std::vector<Perm4>& perms);

}  // namespace htri
