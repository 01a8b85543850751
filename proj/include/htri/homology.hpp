#pragma once

#include <map>

#include "htri/skeleton.hpp"
#include "htri/snf.hpp"

namespace htri {

// Presentation of H1 of the complex minus its vertices, read off a
// spanning tree of the face-pairing graph: one generator per glued face
// class off the tree, one relator per closed edge rotation orbit.
// (Removing the vertices does not change H1 when all links are spheres.)
struct H1Presentation {
    int generators = 0;
    Matrix relators;
    std::vector<int> face_generator;  // face class -> generator index, or -1
};

H1Presentation h1_presentation(const Triangulation& tri, const Skeleton& sk);

AbelianGroup h1(const Triangulation& tri, const Skeleton& sk);
AbelianGroup h1(const Triangulation& tri);

// H1 of the full complex as a CW space, with evaluation of 1-cycle
// classes.  Used as an independent cross-check of h1() and to test which
// boundary curves die in a filling fragment.
class ChainH1 {
public:
    explicit ChainH1(const Triangulation& tri);
    ChainH1(const Triangulation& tri, const Skeleton& sk);

    const AbelianGroup& group() const { return group_; }

    // cycle: edge class -> coefficient, w.r.t. the class representative
    // directions of the skeleton.  Must be a 1-cycle.
    std::vector<Int> class_of(const std::map<int, Int>& cycle) const;
    bool is_zero(const std::map<int, Int>& cycle) const;

private:
    void build(const Triangulation& tri, const Skeleton& sk);

    AbelianGroup group_;
    int edges_ = 0;
    std::vector<int> kernel_cols_;   // columns of V1 spanning ker d1
    Matrix v1inv_;                   // inverse of the d1 column transform
    Matrix u2_;                      // row transform of the quotient SNF
    std::vector<Int> quot_diag_;     // diag of the quotient SNF, one per kernel dim
};

}  // namespace htri
