#pragma once

#include <vector>

#include "htri/triangulation.hpp"

namespace htri {

// Identified cells of a generalised triangulation.  Edge classes carry a
// direction: edge_sign is +-1 relative to the class representative, or the
// whole class is flagged inconsistent when some identification reverses an
// edge onto itself.
struct Skeleton {
    int tets = 0;
    int vertices = 0;
    int edges = 0;
    int faces = 0;

    std::vector<int> vertex_class;   // 4*tets entries, index tet*4+v
    std::vector<int> edge_class;     // 6*tets entries, index tet*6+e
    std::vector<int> edge_sign;      // +-1 vs class representative
    std::vector<char> edge_consistent;  // per edge class
    std::vector<int> face_class;     // 4*tets entries, index tet*4+f

    bool connected = false;
    bool orientable = false;
    std::vector<int> tet_orientation;  // +-1 when orientable, else empty

    long euler() const { return long(vertices) - edges + faces - tets; }

    int vclass(int tet, int v) const { return vertex_class[tet * 4 + v]; }
    int eclass(int tet, int a, int b) const { return edge_class[tet * 6 + edge_index(a, b)]; }
    // Sign of the directed edge a->b against its class representative.
    int esign(int tet, int a, int b) const {
        int s = edge_sign[tet * 6 + edge_index(a, b)];
        return a < b ? s : -s;
    }
    int fclass(int tet, int f) const { return face_class[tet * 4 + f]; }
};

Skeleton compute_skeleton(const Triangulation& tri);

// The link of a vertex class, as a triangulated surface built from the
// tetrahedron corners in that class.
struct Surface {
    int triangles = 0;
    long euler = 0;
    bool closed = false;
    bool orientable = false;
    bool connected = false;
    int boundary_curves = 0;

    bool is_sphere() const { return closed && connected && euler == 2; }
    bool is_torus() const { return closed && connected && orientable && euler == 0; }
    bool is_disc() const { return !closed && connected && euler == 1 && boundary_curves == 1; }
};

Surface vertex_link(const Triangulation& tri, const Skeleton& sk, int vertex_cls);

// True when the complex is a simplicial complex: every cell has distinct
// vertex classes and no two distinct cells of equal dimension share the
// same vertex-class set.
bool is_simplicial(const Triangulation& tri);
bool is_simplicial(const Triangulation& tri, const Skeleton& sk);

}  // namespace htri
