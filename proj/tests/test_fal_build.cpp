#include <set>

#include "doctest.h"
#include "htri/falbuild.hpp"
#include "htri/homology.hpp"
#include "htri/isosig.hpp"
#include "htri/skeleton.hpp"

using namespace htri;

namespace {

const char* kTrefoil = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
const char* kFigureEight = "X[4,2,5,1] X[2,7,3,8] X[8,6,1,5] X[6,3,7,4]";

FlatFAL fig8_fal() { return augment(parse_pd(kFigureEight)); }
FlatFAL trefoil_fal() { return augment(parse_pd(kTrefoil)); }

// Number of tetrahedron corners in each vertex class.
std::vector<int> corner_counts(const Triangulation& tri, const Skeleton& sk) {
    std::vector<int> cnt(sk.vertices, 0);
    for (int t = 0; t < tri.size(); ++t)
        for (int v = 0; v < 4; ++v) ++cnt[sk.vclass(t, v)];
    return cnt;
}

void check_cusped(const Triangulation& tri, int expected_cusps) {
    tri.check_valid();
    REQUIRE(tri.is_closed());
    Skeleton sk = compute_skeleton(tri);
    REQUIRE(sk.connected);
    REQUIRE(sk.orientable);
    for (int e = 0; e < sk.edges; ++e) REQUIRE(sk.edge_consistent[e]);
    REQUIRE(sk.vertices == expected_cusps);
    for (int v = 0; v < sk.vertices; ++v) CHECK(vertex_link(tri, sk, v).is_torus());
    AbelianGroup h = h1(tri, sk);
    CHECK(h.rank == expected_cusps);
    CHECK(h.torsion.empty());
}

}  // namespace

TEST_CASE("polyhedra of the two-circle augmentation are octahedra") {
    IdealPolyhedron P = build_polyhedra(fig8_fal());
    CHECK(P.circles == 2);
    CHECK(P.vertices == 6);
    CHECK(P.edge_count == 12);
    CHECK(P.white_count() == 4);
    CHECK(P.shaded_count() == 4);
    CHECK(P.degenerate_remnant);
    // Octahedron combinatorics: all faces are triangles.
    for (const auto& f : P.faces) CHECK(f.corners.size() == 3);
}

TEST_CASE("polyhedra of the three-circle chain") {
    IdealPolyhedron P = build_polyhedra(torus_2q_fal(3));
    CHECK(P.circles == 3);
    CHECK(P.vertices == 9);
    CHECK(P.edge_count == 18);
    CHECK(P.white_count() == 5);
    CHECK(P.shaded_count() == 6);
    CHECK_FALSE(P.degenerate_remnant);
}

TEST_CASE("two-circle augmentation triangulates with eight tetrahedra") {
    FlatFAL f = fig8_fal();
    FALTriangulation ft = triangulate_fal(f);
    CHECK(ft.tri.size() == 8);
    check_cusped(ft.tri, 2 + f.strand_components());
}

TEST_CASE("chain augmentations meet the size bound") {
    for (int q = 3; q <= 7; q += 2) {
        FlatFAL f = torus_2q_fal(q);
        FALTriangulation ft = triangulate_fal(f);
        CHECK(ft.tri.size() <= 2 * (6 * q - 4));
        check_cusped(ft.tri, q + f.strand_components());
    }
}

TEST_CASE("every circle cusp meets exactly its four pyramid corners") {
    for (FlatFAL f : {fig8_fal(), trefoil_fal()}) {
        FALTriangulation ft = triangulate_fal(f);
        Skeleton sk = compute_skeleton(ft.tri);
        auto cnt = corner_counts(ft.tri, sk);
        std::set<int> circle_classes;
        for (const auto& m : ft.cusps) {
            int cls = sk.vclass(m.pyramid[0], 0);
            circle_classes.insert(cls);
            CHECK(cnt[cls] == 4);
            for (int k = 0; k < 4; ++k) CHECK(sk.vclass(m.pyramid[k], 0) == cls);
        }
        CHECK(static_cast<int>(circle_classes.size()) == f.c());
    }
}

TEST_CASE("connected sum of augmentations triangulates") {
    FlatFAL f = connected_sum(trefoil_fal(), fig8_fal());
    FALTriangulation ft = triangulate_fal(f);
    CHECK(ft.tri.size() <= 2 * (6 * f.c() - 4));
    check_cusped(ft.tri, f.c() + f.strand_components());
}

TEST_CASE("prism adjustment of a flat circle") {
    FlatFAL f = fig8_fal();
    FALTriangulation ft = triangulate_fal(f);
    int cusps = 2 + f.strand_components();
    int before = ft.tri.size();
    HatFace hat = prism_adjust(ft, 0);
    CHECK(ft.tri.size() == before + 1);
    CHECK(ft.cusps[0].adjusted);
    CHECK(hat.tet >= 0);
    check_cusped(ft.tri, cusps);

    // The circle cusp now meets exactly two tetrahedron corners.
    Skeleton sk = compute_skeleton(ft.tri);
    auto cnt = corner_counts(ft.tri, sk);
    CHECK(cnt[sk.vclass(ft.cusps[0].cusp_tet[0], 0)] == 2);

    // Second circle too; sizes stay within the overall prism bound.
    prism_adjust(ft, 1);
    CHECK(ft.tri.size() == before + 2);
    CHECK(ft.tri.size() <= 13 * f.c() - 8);
    check_cusped(ft.tri, cusps);
    CHECK(ft.hats.size() == 2);

    // Deterministic output: the signature round-trips.
    std::string sig = iso_signature(ft.tri);
    CHECK(iso_signature(from_iso_signature(sig)) == sig);
}

TEST_CASE("prism adjustment refuses a repeat run") {
    FALTriangulation ft = triangulate_fal(fig8_fal());
    prism_adjust(ft, 0);
    CHECK_THROWS_AS(prism_adjust(ft, 0), TriError);
}
