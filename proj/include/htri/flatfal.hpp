#pragma once

#include <string>
#include <vector>

#include "htri/pd.hpp"

namespace htri {

struct FlatCircle {
    bool half_twist = false;
    int n = 0;  // fill slope 1/n; n = 0 encodes the trivial slope 1/0
    int sign = 0;  // handedness of the source twist region (0 for sum circles)
};

// The flat fully augmented diagram as a planar combinatorial map.  Every
// crossing circle i contributes four nodes -- segment endpoints x_i, y_i
// (degree 1) and strand punctures p_i, q_i (degree 4) -- and a block of
// ten darts:
//
//   10i+0 sx   at x_i, along [x_i, p_i]        10i+5 sy   at y_i
//   10i+1 spx  at p_i, toward x_i              10i+6 pw   at p_i, strand west
//   10i+2 spq  at p_i, toward q_i              10i+7 pe   at p_i, strand east
//   10i+3 sqp  at q_i, toward p_i              10i+8 qw   at q_i, strand west
//   10i+4 sqy  at q_i, toward y_i              10i+9 qe   at q_i, strand east
//
// Rotations (counterclockwise) are fixed: at p_i the cycle is
// (pe, spx, pw, spq), at q_i it is (qe, sqp, qw, sqy); thus the side-A
// strand darts (left of the directed segment x->p->q->y) are pe and qe.
// Strand arcs pair the east/west darts of (possibly different) circles
// via theta.
struct FlatFAL {
    std::vector<FlatCircle> circles;
    std::vector<int> theta;      // dart involution
    std::vector<int> sigma;      // rotation: next dart counterclockwise
    std::vector<int> dart_node;  // node index = 4*circle + {0:x,1:p,2:q,3:y}

    int c() const { return static_cast<int>(circles.size()); }
    int darts() const { return static_cast<int>(theta.size()); }

    static int sx(int i) { return 10 * i; }
    static int spx(int i) { return 10 * i + 1; }
    static int spq(int i) { return 10 * i + 2; }
    static int sqp(int i) { return 10 * i + 3; }
    static int sqy(int i) { return 10 * i + 4; }
    static int sy(int i) { return 10 * i + 5; }
    static int pw(int i) { return 10 * i + 6; }
    static int pe(int i) { return 10 * i + 7; }
    static int qw(int i) { return 10 * i + 8; }
    static int qe(int i) { return 10 * i + 9; }

    // Knot strand components of the augmented link (half twists swap the
    // two passages through a circle).
    int strand_components() const;

    // Face cycles of the flat map (next dart = sigma(theta(dart))).
    std::vector<std::vector<int>> faces() const;

    // Structural checks: involution/rotation well-formed, sphere Euler
    // count, each circle punctured exactly twice.  Throws KnotError.
    void validate() const;

    std::string to_json() const;
    static FlatFAL from_json(const std::string& text);
};

// Skeleton with c circles and fixed internal wiring but no strand arcs.
FlatFAL make_flat_skeleton(int c);

// Generic augmentation (one circle per twist region) with the
// single-region (2,q) special case.
FlatFAL augment(const PDCode& pd, const std::vector<TwistRegion>& regions,
                bool assume_twist_reduced = false);
inline FlatFAL augment(const PDCode& pd, bool assume_twist_reduced = false) {
    return augment(pd, detect_twist_regions(pd), assume_twist_reduced);
}

// The chain-of-circles augmentation of the (2,q) torus knot: q circles,
// each with a half twist, all slopes 1/0.
FlatFAL torus_2q_fal(int q);

// Connected sum: cross-join the two diagrams and add one crossing circle
// around the two bridge strands (no half twist, slope 1/0).
FlatFAL connected_sum(const FlatFAL& a, const FlatFAL& b);

// Twist knot J(k, l): two twist regions with k and l crossings, k, l >= 2
// and not both odd (J(k, l) with both parameters odd is a different family
// and is rejected).  The diagram is the augmented figure-eight layout; the
// odd parameter, if any, is placed on the second circle.
FlatFAL twist_knot_fal(int k, int l);

// t-fold connected sum of the (2,3) torus knot, t >= 1.
FlatFAL trefoil_sum_fal(int t);

}  // namespace htri
