#pragma once

#include <string>
#include <vector>

#include "htri/dehnfill.hpp"
#include "htri/falbuild.hpp"
#include "htri/subdivide.hpp"

namespace htri {

// One construction stage and its effect on the tetrahedron count.
struct StageDelta {
    std::string stage;
    int before = 0;
    int after = 0;
    int delta() const { return after - before; }
};

// A closed one-vertex triangulation with a distinguished edge E, together
// with everything needed to undo the final insertion and to audit the
// construction: the source diagram, the executed fills, the hat face the
// folded tetrahedron was inserted along, and the pre-insertion signature.
struct HTriangulation {
    Triangulation tri;
    EdgeMarker E;  // the distinguished edge

    FlatFAL source;
    std::vector<FareyPath> fills;    // one per crossing circle, in order
    HatFace hat;                     // in the pre-insertion complex
    int folded_tet = -1;             // index of the inserted tetrahedron
    std::string ideal_sig;           // signature of the pre-insertion complex
    std::vector<StageDelta> stages;  // tetrahedron-count audit trail
};

// All faces whose two side edges, oriented toward a common vertex (the
// tip), lie in one edge class compatibly.  Such a face spans a closed
// curve on the boundary component its tip meets.  Faces whose two sides
// bound the same tetrahedron are returned flagged ineligible.
std::vector<HatFace> find_hat_triangle(const Triangulation& tri);

// Closes the complex by cutting it open along the hat face and inserting
// one extra tetrahedron, folded onto itself across the marked edge E.
// The two cut copies of the face receive the two free faces of the fold
// so that removing the tetrahedron and regluing the copies directly
// restores the input exactly.  The ideal vertex becomes material: the
// result is closed with every vertex identified to one class.
HTriangulation insert_folded_tetrahedron(const Triangulation& tri, const HatFace& hat);

// Exact inverse of insert_folded_tetrahedron: deletes the folded
// tetrahedron and reglues the two exposed faces by the recorded map.
// The result equals the pre-insertion complex gluing-for-gluing.
Triangulation edge_complement(const HTriangulation& h);

// Necessary conditions for the construction's claims, each reported
// individually.  `pass()` is the conjunction.
struct VerifyReport {
    bool closed = false;
    bool orientable = false;
    bool one_vertex = false;
    bool euler_zero = false;
    bool link_sphere = false;
    bool h1_trivial = false;
    bool count_ok = false;          // tets <= 12c + sum|n_i| - 7
    bool round_trip = false;        // edge_complement signature matches
    bool complement_h1_ok = false;  // edge complement has H1 = Z
    bool stage_bounds_ok = false;   // per-stage deltas within their bounds

    int tets = 0;
    int count_bound = 0;
    std::string json() const;

    bool pass() const {
        return closed && orientable && one_vertex && euler_zero && link_sphere &&
               h1_trivial && count_ok && round_trip && complement_h1_ok && stage_bounds_ok;
    }
};

VerifyReport verify(const HTriangulation& h);

// End-to-end construction from a flat augmented diagram: ideal
// triangulation, per-circle prism adjustment, per-circle filling, and the
// final insertion along the least recorded hat.  Deterministic.
HTriangulation build_htri(const FlatFAL& f);

// Convenience overload from a knot diagram.
HTriangulation build_htri(const PDCode& pd, bool assume_twist_reduced = false);

}  // namespace htri
