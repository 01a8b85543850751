#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "htri/dehnfill.hpp"
#include "htri/homology.hpp"
#include "htri/isosig.hpp"
#include "htri/skeleton.hpp"

using namespace htri;

namespace {

// Independent oracle for the length of the walk from a Farey triangle to
// a target slope.  The walk layers one tetrahedron per triangle flip and
// the final fold (at a triangle having the target as a corner) is free,
// so the length is the flip distance to the nearest such triangle minus
// one -- computed here by breadth-first search over the Farey graph
// (each neighbour replaces one corner by the other common mate of the
// remaining two).  A target that is already a corner of the start
// triangle cannot be folded immediately; the walk steps off and folds
// back, costing exactly one layer.
int oracle_steps(const std::array<Slope, 3>& start, const Slope& target) {
    auto has = [&](const std::array<Slope, 3>& t) {
        return t[0] == target || t[1] == target || t[2] == target;
    };
    if (has(start)) return 1;
    auto key = [](std::array<Slope, 3> t) {
        std::vector<std::string> v = {t[0].str(), t[1].str(), t[2].str()};
        std::sort(v.begin(), v.end());
        return v[0] + "|" + v[1] + "|" + v[2];
    };
    std::vector<std::pair<std::array<Slope, 3>, int>> queue{{start, 0}};
    std::set<std::string> seen{key(start)};
    for (size_t head = 0; head < queue.size(); ++head) {
        auto [tri, d] = queue[head];
        REQUIRE(d < 1000);
        for (int i = 0; i < 3; ++i) {
            auto mates = farey_mates(tri[(i + 1) % 3], tri[(i + 2) % 3]);
            std::array<Slope, 3> next = tri;
            next[i] = (mates[0] == tri[i]) ? mates[1] : mates[0];
            if (has(next)) return d;  // the flip into this triangle is the last layer
            if (seen.insert(key(next)).second) queue.push_back({next, d + 1});
        }
    }
    REQUIRE(false);
    return -1;
}

FlatFAL j22() { return twist_knot_fal(2, 2); }

}  // namespace

TEST_CASE("slope canonical form and Farey adjacency") {
    CHECK(Slope(2, -4).p == -1);
    CHECK(Slope(2, -4).q == 2);
    CHECK(Slope(-3, 0).p == 1);
    CHECK(Slope(-3, 0).q == 0);
    CHECK(slope_det(Slope(0, 1), Slope(1, 0)) == 1);
    auto m = farey_mates(Slope(0, 1), Slope(1, 0));
    CHECK(((m[0] == Slope(1, 1) && m[1] == Slope(-1, 1)) ||
           (m[0] == Slope(-1, 1) && m[1] == Slope(1, 1))));
}

TEST_CASE("Farey walk lengths match the descent oracle for 1/n") {
    std::array<Slope, 3> flat = {Slope(1, 1), Slope(1, 0), Slope(0, 1)};
    std::array<Slope, 3> half = {Slope(-1, 1), Slope(1, 0), Slope(0, 1)};
    for (auto& start : {flat, half})
        for (int n = -50; n <= 50; ++n) {
            Slope target(1, n);
            FareyPath p = farey_path(start, target);
            CHECK(p.layered_tets() == oracle_steps(start, target));
            // Growth limit: at most |n| - 1 layers for |n| >= 2, else 1.
            int limit = std::abs(n) >= 2 ? std::abs(n) - 1 : 1;
            CHECK(p.layered_tets() <= limit);
            CHECK(p.fold_slot >= 0);
            // The fold realises the target: it lies on the final triangle.
            bool on = false;
            for (const Slope& s : p.final_triangle) on |= (s == target);
            CHECK(on);
        }
}

TEST_CASE("filling is local to the cusp pair and its new layers") {
    FlatFAL f = j22();
    FALTriangulation ft = triangulate_fal(f);
    for (int i = 0; i < f.c(); ++i) prism_adjust(ft, i);

    Triangulation before = ft.tri;
    std::array<int, 2> cusp = ft.cusps[0].cusp_tet;
    fill_crossing_circle(ft, 0);

    // Map old indices to new: the two cusp tetrahedra were removed.
    std::vector<int> remap(before.size());
    int next = 0;
    for (int t = 0; t < before.size(); ++t)
        remap[t] = (t == cusp[0] || t == cusp[1]) ? -1 : next++;
    for (int t = 0; t < before.size(); ++t) {
        if (remap[t] < 0) continue;
        for (int fc = 0; fc < 4; ++fc) {
            Gluing g = before.gluing(t, fc);
            if (g.glued() && (g.tet == cusp[0] || g.tet == cusp[1])) continue;
            Gluing h = ft.tri.gluing(remap[t], fc);
            if (!g.glued()) {
                CHECK(!h.glued());
                continue;
            }
            CHECK(h.tet == remap[g.tet]);
            CHECK(h.perm == g.perm);
        }
    }
}

TEST_CASE("homology ladder: rank c + s, minus one per fill, one at the end") {
    for (FlatFAL f : {trefoil_sum_fal(1), j22(), twist_knot_fal(2, 4)}) {
        FALTriangulation ft = triangulate_fal(f);
        for (int i = 0; i < f.c(); ++i) prism_adjust(ft, i);
        int rank = f.c() + f.strand_components();
        {
            AbelianGroup h = h1(ft.tri);
            CHECK(h.rank == rank);
            CHECK(h.torsion.empty());
        }
        for (int i = 0; i < f.c(); ++i) {
            fill_crossing_circle(ft, i);
            --rank;
            AbelianGroup h = h1(ft.tri);
            CHECK(h.rank == rank);
            CHECK(h.torsion.empty());
        }
        CHECK(rank == 1);
    }
}

TEST_CASE("final signature does not depend on the fill order") {
    for (FlatFAL f : {j22(), trefoil_sum_fal(1)}) {
        std::vector<int> order(f.c());
        for (int i = 0; i < f.c(); ++i) order[i] = i;
        std::string first;
        do {
            FALTriangulation ft = triangulate_fal(f);
            for (int i = 0; i < f.c(); ++i) prism_adjust(ft, i);
            for (int i : order) fill_crossing_circle(ft, i);
            std::string sig = iso_signature(ft.tri);
            if (first.empty())
                first = sig;
            else
                CHECK(sig == first);
        } while (std::next_permutation(order.begin(), order.end()));
    }
}

TEST_CASE("filling a torus-exterior slope is rejected on unmarked cusps") {
    FlatFAL f = j22();
    FALTriangulation ft = triangulate_fal(f);
    // Filling before the prism adjustment has no cusp marking to use.
    CHECK_THROWS_AS(fill_crossing_circle(ft, 0), TriError);
}
