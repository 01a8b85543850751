#pragma once

#include <array>
#include <string>
#include <vector>

#include "htri/falbuild.hpp"

namespace htri {

// A boundary slope p/q in canonical form: gcd(|p|, |q|) = 1, q >= 0, and
// p = 1 when q = 0.  The slope -p/q equals p/-q; canonicalisation folds
// the sign into p.
struct Slope {
    int p = 0;
    int q = 1;

    Slope() = default;
    Slope(int p_, int q_);

    bool operator==(const Slope&) const = default;
    std::string str() const;
};

// |det| of a slope pair; the slopes are Farey-adjacent when this is 1.
int slope_det(const Slope& a, const Slope& b);

// The two common Farey neighbours of an adjacent pair.
std::array<Slope, 2> farey_mates(const Slope& a, const Slope& b);

// A walk through the Farey triangulation from a start triangle to the
// position from which folding realises the target slope.  Each step
// layers one tetrahedron over the boundary edge currently carrying the
// slope in the named slot and replaces that slot's slope by the Farey
// mate of the other two.  The walk ends with a fold over `fold_slot`.
struct FareyPath {
    std::array<Slope, 3> start{};
    Slope target;
    bool extra_exceptional = false;  // target was an edge of the start triangle
    std::vector<int> layer_slots;    // slot index 0..2 per layered tetrahedron
    std::array<Slope, 3> final_triangle{};
    int fold_slot = -1;

    int layered_tets() const { return static_cast<int>(layer_slots.size()); }
    std::string json() const;
};

// Computes the walk.  The start slopes must form a Farey triangle
// (pairwise adjacent).  Guarantees |layer_slots| <= |n| - 1 when the
// target is 1/n with |n| >= 2 and the start triangle is {0/1, 1/0, ±1},
// and <= 1 when |n| <= 1.
FareyPath farey_path(const std::array<Slope, 3>& start, const Slope& target);

// Fills the cusp of one crossing circle along the given slope: removes
// the two cusp tetrahedra, layers tetrahedra following the Farey walk
// and folds the two exposed faces.  Everything outside the removed pair
// and the new tetrahedra is untouched.  Returns the executed path.
FareyPath fill_crossing_circle(FALTriangulation& ft, int circle, const Slope& target);

// Convenience: fill with the circle's recorded slope 1/n.
FareyPath fill_crossing_circle(FALTriangulation& ft, int circle);

}  // namespace htri
