#include <algorithm>
#include <set>
#include <string>

#include "doctest.h"
#include "htri/flatfal.hpp"
#include "htri/pd.hpp"

using namespace htri;

namespace {

// Left-handed trefoil, the closure of a three-crossing bigon cycle.
const char* kTrefoil = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";

// Figure-eight knot as the braid closure of (s1 s2^-1)^2, arcs numbered
// along the strand.
const char* kFigureEight = "X[4,2,5,1] X[2,7,3,8] X[8,6,1,5] X[6,3,7,4]";

// Pretzel P(1,2,1,3): the two lone crossings sit in different twist
// regions but share their top and bottom faces, so a four-point curve
// joins them without bounding a twist region.
const char* kPretzel1213 =
    "X[1,5,2,4] X[3,11,4,10] X[9,3,10,2] X[11,9,12,8] "
    "X[7,1,8,14] X[13,7,14,6] X[5,13,6,12]";

// Trefoil with an extra Reidemeister-I kink on one arc.
const char* kKinkedTrefoil = "X[8,4,2,5] X[3,6,4,1] X[5,2,6,3] X[1,8,7,7]";

KnotErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const KnotError& err) {
        return err.kind;
    }
    REQUIRE(false);
    return KnotErrorKind::Syntax;
}

}  // namespace

TEST_CASE("trefoil PD parses with consistent flow") {
    PDCode pd = parse_pd(kTrefoil);
    CHECK(pd.crossings.size() == 3);
    CHECK(pd.arc_count == 6);
    for (const auto& x : pd.crossings) CHECK(x.sign == pd.crossings[0].sign);

    DiagramMap map = DiagramMap::from_pd(pd);
    auto faces = trace_faces(map);
    CHECK(faces.size() == 5);  // V - E + F = 2 with V = 3, E = 6

    auto regions = detect_twist_regions(pd);
    REQUIRE(regions.size() == 1);
    CHECK(regions[0].t() == 3);
    CHECK(regions[0].cyclic);
    CHECK(check_twist_reduced(pd).reduced);
}

TEST_CASE("figure-eight PD has two twist regions of opposite handedness") {
    PDCode pd = parse_pd(kFigureEight);
    CHECK(pd.crossings.size() == 4);
    CHECK(pd.arc_count == 8);
    CHECK(trace_faces(DiagramMap::from_pd(pd)).size() == 6);

    auto regions = detect_twist_regions(pd);
    REQUIRE(regions.size() == 2);
    CHECK(regions[0].t() == 2);
    CHECK(regions[1].t() == 2);
    CHECK(!regions[0].cyclic);
    CHECK(!regions[1].cyclic);
    CHECK(regions[0].sign == -regions[1].sign);
    CHECK(check_twist_reduced(pd).reduced);
}

TEST_CASE("diagram input error taxonomy") {
    CHECK(kind_of([] { parse_pd("X[1,2,3]"); }) == KnotErrorKind::Syntax);
    CHECK(kind_of([] { parse_pd("hello"); }) == KnotErrorKind::Syntax);
    // Arc 3 appears three times, arc 1 once.
    CHECK(kind_of([] { parse_pd("X[1,4,2,3] X[3,6,4,5] X[5,2,6,3]"); }) ==
          KnotErrorKind::ArcConsistency);
    // Hopf link: two strand components.
    CHECK(kind_of([] { parse_pd("X[4,1,3,2] X[2,3,1,4]"); }) == KnotErrorKind::NotAKnot);
    // Virtual trefoil: consistent flow but genus one.
    CHECK(kind_of([] {
              PDCode pd = parse_pd("X[1,3,2,4] X[2,4,3,1]");
              trace_faces(DiagramMap::from_pd(pd));
          }) == KnotErrorKind::NonPlanar);
}

TEST_CASE("kink is rejected as not twist reduced") {
    PDCode pd = parse_pd(kKinkedTrefoil);
    auto rep = check_twist_reduced(pd);
    CHECK(!rep.reduced);
    CHECK(kind_of([&] { augment(pd); }) == KnotErrorKind::NotTwistReduced);
}

TEST_CASE("pretzel P(1,2,1,3) fails the four-point-curve condition") {
    PDCode pd = parse_pd(kPretzel1213);
    CHECK(pd.crossings.size() == 7);
    CHECK(pd.arc_count == 14);
    CHECK(trace_faces(DiagramMap::from_pd(pd)).size() == 9);

    auto regions = detect_twist_regions(pd);
    std::multiset<int> sizes;
    for (const auto& r : regions) sizes.insert(r.t());
    CHECK(sizes == std::multiset<int>({1, 1, 2, 3}));

    auto rep = check_twist_reduced(pd);
    CHECK(!rep.reduced);
    REQUIRE(rep.witness_a >= 0);
    REQUIRE(rep.witness_b >= 0);
    // The witness crossings must come from different twist regions.
    auto region_of = [&](int x) {
        for (size_t i = 0; i < regions.size(); ++i)
            for (int y : regions[i].crossings)
                if (y == x) return static_cast<int>(i);
        return -1;
    };
    CHECK(region_of(rep.witness_a) != region_of(rep.witness_b));

    CHECK(kind_of([&] { augment(pd); }) == KnotErrorKind::NotTwistReduced);
}

TEST_CASE("augmenting the trefoil yields the three-circle chain") {
    PDCode pd = parse_pd(kTrefoil);
    FlatFAL f = augment(pd);
    f.validate();
    CHECK(f.c() == 3);
    for (const auto& ci : f.circles) {
        CHECK(ci.half_twist);
        CHECK(ci.n == 0);
    }
    CHECK(f.strand_components() == 1);
    CHECK(f.faces().size() == static_cast<size_t>(f.c() + 2));
}

TEST_CASE("augmenting the figure-eight yields two full-twist circles") {
    PDCode pd = parse_pd(kFigureEight);
    FlatFAL f = augment(pd);
    f.validate();
    CHECK(f.c() == 2);
    std::multiset<int> ns;
    for (const auto& ci : f.circles) {
        CHECK(!ci.half_twist);
        ns.insert(ci.n);
    }
    CHECK(ns == std::multiset<int>({-1, 1}));
    CHECK(f.strand_components() == 1);
    CHECK(f.faces().size() == 4);
}

TEST_CASE("augmentation of a mixed diagram when reduction is assumed") {
    PDCode pd = parse_pd(kPretzel1213);
    FlatFAL f = augment(pd, detect_twist_regions(pd), /*assume_twist_reduced=*/true);
    f.validate();
    CHECK(f.c() == 4);
    std::multiset<int> ts;
    for (const auto& ci : f.circles) ts.insert(2 * std::abs(ci.n) + (ci.half_twist ? 1 : 0));
    CHECK(ts == std::multiset<int>({1, 1, 2, 3}));
    CHECK(f.strand_components() == 1);
    CHECK(f.faces().size() == 6);
}

TEST_CASE("flat diagram JSON round trip") {
    FlatFAL f = augment(parse_pd(kFigureEight));
    FlatFAL g = FlatFAL::from_json(f.to_json());
    CHECK(g.theta == f.theta);
    CHECK(g.c() == f.c());
    for (int i = 0; i < f.c(); ++i) {
        CHECK(g.circles[i].half_twist == f.circles[i].half_twist);
        CHECK(g.circles[i].n == f.circles[i].n);
        CHECK(g.circles[i].sign == f.circles[i].sign);
    }
}

TEST_CASE("connected sum wires a bridge circle and stays planar") {
    FlatFAL a = augment(parse_pd(kTrefoil));
    FlatFAL b = augment(parse_pd(kFigureEight));
    FlatFAL s = connected_sum(a, b);
    s.validate();
    CHECK(s.c() == 6);
    CHECK(!s.circles[5].half_twist);
    CHECK(s.circles[5].n == 0);
    CHECK(s.strand_components() == 1);
    CHECK(s.faces().size() == static_cast<size_t>(s.c() + 2));
}
