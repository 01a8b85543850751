#pragma once

#include <vector>

#include "htri/triangulation.hpp"

namespace htri {

// A directed edge of a tetrahedron, used to mark an edge path through the
// complex (for us: the distinguished knotted edge).
struct EdgeMarker {
    int tet = -1;
    int a = 0;  // tail vertex label
    int b = 1;  // head vertex label
    bool operator==(const EdgeMarker&) const = default;
};

// Barycentric subdivision: each tetrahedron becomes its 24 flag
// tetrahedra.  Any markers are rewritten to the corresponding paths of
// subdivided edges (each marked edge becomes two).
Triangulation barycentric_subdivide(const Triangulation& tri,
                                    std::vector<EdgeMarker>* markers = nullptr);

}  // namespace htri
