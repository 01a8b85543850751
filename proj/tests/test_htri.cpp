#include <string>
#include <vector>

#include "cover_oracle.hpp"
#include "doctest.h"
#include "htri/homology.hpp"
#include "htri/htri.hpp"
#include "htri/io.hpp"
#include "htri/isosig.hpp"
#include "htri/skeleton.hpp"

using namespace htri;

namespace {

const char* kTrefoil = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
const char* kFigureEight = "X[4,2,5,1] X[2,7,3,8] X[8,6,1,5] X[6,3,7,4]";

void check_closed_sphere_like(const HTriangulation& h) {
    h.tri.check_valid();
    CHECK(h.tri.is_closed());
    Skeleton sk = compute_skeleton(h.tri);
    CHECK(sk.connected);
    CHECK(sk.orientable);
    CHECK(sk.vertices == 1);
    CHECK(sk.euler() == 0);
    CHECK(vertex_link(h.tri, sk, 0).is_sphere());
    AbelianGroup g = h1(h.tri, sk);
    CHECK(g.rank == 0);
    CHECK(g.torsion.empty());
}

}  // namespace

TEST_CASE("hat detection on a lone and a folded tetrahedron") {
    Triangulation tri;
    tri.add_tet();
    CHECK(find_hat_triangle(tri).empty());

    // Gluing faces 0 and 1 of one tetrahedron to each other identifies
    // the edges 02~12 and 03~13, making faces 2 and 3 hat faces -- but
    // they are unglued, so nothing qualifies yet.
    tri.glue(0, 1, 0, Perm4(1, 0, 2, 3));
    CHECK(find_hat_triangle(tri).empty());

    // Closing them against each other: both sides of each hat face bound
    // the same tetrahedron, so the hats are found but flagged ineligible.
    tri.glue(0, 2, 0, Perm4(0, 1, 3, 2));
    auto hats = find_hat_triangle(tri);
    CHECK(!hats.empty());
    for (const HatFace& h : hats) CHECK(!h.eligible);
    CHECK_THROWS_AS(insert_folded_tetrahedron(tri, hats.front()), TriError);
}

TEST_CASE("construction-recorded hats are rediscovered") {
    FlatFAL f = augment(parse_pd(kTrefoil));
    FALTriangulation ft = triangulate_fal(f);
    for (int i = 0; i < f.c(); ++i) prism_adjust(ft, i);
    auto found = find_hat_triangle(ft.tri);
    // One recorded hat per crossing circle, each present in the scan.
    CHECK(static_cast<int>(ft.hats.size()) == f.c());
    for (const HatFace& rec : ft.hats) {
        bool present = false;
        for (const HatFace& h : found)
            present |= (h.tet == rec.tet && h.face == rec.face && h.tip == rec.tip);
        CHECK(present);
    }
}

TEST_CASE("insertion closes the complement into a one-vertex complex") {
    for (const char* pd : {kTrefoil, kFigureEight}) {
        FlatFAL f = augment(parse_pd(pd));
        HTriangulation h = build_htri(f);
        check_closed_sphere_like(h);
        // Exactly one extra tetrahedron over the filled complement.
        Triangulation comp = edge_complement(h);
        CHECK(h.tri.size() == comp.size() + 1);
        // The marked edge sits in the inserted tetrahedron with both
        // endpoints on the unique vertex (trivially, there is only one).
        CHECK(h.E.tet == h.folded_tet);
        // Exact round trip, including the gluing table.
        CHECK(iso_signature(comp) == h.ideal_sig);
        AbelianGroup g = h1(comp);
        CHECK(g.rank == 1);
        CHECK(g.torsion.empty());
        // Re-inserting along the same hat reproduces the closed complex.
        HTriangulation again = insert_folded_tetrahedron(comp, h.hat);
        CHECK(iso_signature(again.tri) == iso_signature(h.tri));
    }
}

TEST_CASE("edge complement is the exact inverse, table for table") {
    HTriangulation h = build_htri(twist_knot_fal(2, 3));
    Triangulation comp = edge_complement(h);
    TriFile a, b;
    a.tri = comp;
    FALTriangulation ft = triangulate_fal(twist_knot_fal(2, 3));
    for (int i = 0; i < 2; ++i) prism_adjust(ft, i);
    for (int i = 0; i < 2; ++i) fill_crossing_circle(ft, i);
    b.tri = ft.tri;
    CHECK(write_tri(a) == write_tri(b));
}

TEST_CASE("the complement identifies the knot via its double cover") {
    auto det = [](const FlatFAL& f) {
        HTriangulation h = build_htri(f);
        return cover_oracle::cover_signature(edge_complement(h));
    };
    CHECK(det(trefoil_sum_fal(1)) == "Z^1+Z/3;");
    CHECK(det(twist_knot_fal(2, 2)) == "Z^1+Z/5;");
    CHECK(det(twist_knot_fal(2, 3)) == "Z^1+Z/7;");
    CHECK(det(twist_knot_fal(3, 4)) == "Z^1+Z/13;");
    CHECK(det(trefoil_sum_fal(2)) == "Z^1+Z/3+Z/3;");
}

TEST_CASE("twist knot generator canonicalises the odd parameter") {
    HTriangulation a = build_htri(twist_knot_fal(3, 2));
    HTriangulation b = build_htri(twist_knot_fal(2, 3));
    CHECK(iso_signature(a.tri) == iso_signature(b.tri));
    CHECK_THROWS_AS(twist_knot_fal(3, 3), KnotError);
    CHECK_THROWS_AS(twist_knot_fal(1, 2), KnotError);
}

TEST_CASE("verification report covers every claim") {
    HTriangulation h = build_htri(trefoil_sum_fal(1));
    VerifyReport r = verify(h);
    CHECK(r.pass());
    CHECK(r.tets <= 29);
    CHECK(r.count_bound == 12 * 3 + 0 - 7);

    // Tampering with the audit trail is caught.
    HTriangulation bad = h;
    bad.stages[1].after += 1;
    CHECK(!verify(bad).stage_bounds_ok);
    bad = h;
    bad.stages.pop_back();
    CHECK(!verify(bad).stage_bounds_ok);

    // A wrong insertion record breaks the round trip.
    bad = h;
    bad.ideal_sig = "x";
    CHECK(!verify(bad).round_trip);
}

TEST_CASE("tetrahedron counts meet the family bounds") {
    for (int t : {1, 2, 3}) {
        HTriangulation h = build_htri(trefoil_sum_fal(t));
        CHECK(h.source.c() == 4 * t - 1);
        CHECK(h.tri.size() <= 48 * t - 19);
        for (const FlatCircle& c : h.source.circles) CHECK(c.n == 0);
        CHECK(verify(h).pass());
    }
    for (int k : {2, 3, 4, 6})
        for (int l : {2, 3, 4, 6}) {
            if (k % 2 == 1 && l % 2 == 1) continue;
            HTriangulation h = build_htri(twist_knot_fal(k, l));
            CHECK(h.tri.size() <= 12 * 2 + k / 2 + l / 2 - 7);
            CHECK(verify(h).pass());
        }
}
