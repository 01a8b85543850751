#pragma once

#include <array>
#include <utility>
#include <vector>

#include "htri/flatfal.hpp"
#include "htri/triangulation.hpp"

namespace htri {

// One of the two mirror-image ideal polyhedra obtained by cutting the
// augmented link complement along the crossing discs and the projection
// plane.  Vertices 0..c-1 are circle vertices, the rest are strand-arc
// vertices.  White faces correspond to regions of the flat diagram;
// shaded faces are the crossing-disc triangles, two per circle.
struct PolyFace {
    bool shaded = false;
    std::vector<int> corners;  // vertex ids, cyclic
    std::vector<int> edges;    // edges[k] joins corners[k] and corners[k+1]
};

struct IdealPolyhedron {
    int circles = 0;
    int vertices = 0;    // circles + strand arcs
    int edge_count = 0;  // 6 per circle: three segment pieces on two sides
    std::vector<PolyFace> faces;
    bool degenerate_remnant = false;  // c == 2

    int white_count() const;
    int shaded_count() const;
    void validate() const;
};

IdealPolyhedron build_polyhedra(const FlatFAL& f);

// Per-circle bookkeeping for a crossing-circle cusp.
struct CuspMarking {
    int circle = -1;
    bool half_twist = false;
    int fill_n = 0;     // requested slope 1/n
    int twist_sign = 0;  // handedness of the source twist region

    // After triangulate_fal: the four cusp-pyramid tetrahedra, circle
    // vertex at label 0.  Order: the two halves of polyhedron 1 (diagonal
    // at the east-p corner), then the two halves of polyhedron 2.
    std::array<int, 4> pyramid{-1, -1, -1, -1};

    // After prism_adjust: the two tetrahedra meeting the replaced cusp,
    // new cusp vertex at label 0, base face = face 0.
    std::array<int, 2> cusp_tet{-1, -1};
    // Slope labels of the three boundary edge classes left when the two
    // cusp tetrahedra are removed.  slope[k] labels the edge class of the
    // base edge of cusp_tet[0] lying in its side face k+1, i.e. base edge
    // {2,3} for k=0, {1,3} for k=1, {1,2} for k=2.  Each pair (p, q)
    // denotes the slope p/q; the three are {0/1, 1/0, +-1/1}.
    std::array<std::pair<int, int>, 3> slope{{{0, 0}, {0, 0}, {0, 0}}};

    bool adjusted = false;
    bool filled = false;
};

// A triangular face with two edges in one edge class, identified in an
// orientation-preserving manner towards a common vertex (the tip).  Such
// a face spans a curve on the cusp its tip meets.
struct HatFace {
    int tet = -1;
    int face = -1;
    int tip = -1;   // vertex label of `tet`
    int cusp = -1;  // vertex class of the tip at discovery time
    bool eligible = true;  // the two sides of the face lie in distinct tets

    bool operator<(const HatFace& o) const {
        return tet != o.tet ? tet < o.tet : face < o.face;
    }
};

struct FALTriangulation {
    Triangulation tri;
    std::vector<CuspMarking> cusps;  // one per crossing circle
    std::vector<HatFace> hats;       // recorded by prism_adjust
    FlatFAL source;
};

// Ideal triangulation of the augmented link complement: cusp pyramids
// (four tetrahedra per circle) plus the coned remnants of the two
// polyhedra.  At most 2(6c-4) tetrahedra; exactly 8 when c = 2.
FALTriangulation triangulate_fal(const FlatFAL& f);

// Rewrites all tetrahedron indices stored in the cusp markings and hats
// after a remove_tets call (remap as returned by Triangulation::remove_tets).
void apply_remap(FALTriangulation& ft, const std::vector<int>& remap);

// Replaces the four pyramid tetrahedra of one circle so that the circle
// cusp meets exactly two tetrahedra in one ideal vertex each, with the
// boundary slopes labelled, and a hat face spanning the meridian of the
// adjacent knot-strand cusp appears.  Net tetrahedron change: +1 for a
// flat circle, 0 for a half-twisted one.
HatFace prism_adjust(FALTriangulation& ft, int circle);

}  // namespace htri
