#include "htri/dehnfill.hpp"

#include <algorithm>
#include <numeric>

#include "htri/skeleton.hpp"

namespace htri {

Slope::Slope(int p_, int q_) : p(p_), q(q_) {
    if (p == 0 && q == 0) throw TriError("slope: 0/0 is not a slope");
    int g = std::gcd(std::abs(p), std::abs(q));
    p /= g;
    q /= g;
    if (q < 0 || (q == 0 && p < 0)) {
        p = -p;
        q = -q;
    }
}

std::string Slope::str() const {
    return std::to_string(p) + "/" + std::to_string(q);
}

int slope_det(const Slope& a, const Slope& b) {
    return std::abs(a.p * b.q - a.q * b.p);
}

std::array<Slope, 2> farey_mates(const Slope& a, const Slope& b) {
    if (slope_det(a, b) != 1) throw TriError("farey_mates: slopes are not adjacent");
    return {Slope(a.p + b.p, a.q + b.q), Slope(a.p - b.p, a.q - b.q)};
}

namespace {

// The corner of the triangle opposite slot r means: the edge formed by
// the other two slots.  Folding over slot r produces the Farey mate of
// that edge other than the corner slope itself.
Slope fold_result(const std::array<Slope, 3>& tri, int r) {
    const Slope& a = tri[(r + 1) % 3];
    const Slope& b = tri[(r + 2) % 3];
    auto m = farey_mates(a, b);
    return m[0] == tri[r] ? m[1] : m[0];
}

}  // namespace

FareyPath farey_path(const std::array<Slope, 3>& start, const Slope& target) {
    for (int i = 0; i < 3; ++i)
        if (slope_det(start[i], start[(i + 1) % 3]) != 1)
            throw TriError("farey_path: start slopes do not form a Farey triangle");

    FareyPath path;
    path.start = start;
    path.target = target;
    std::array<Slope, 3> tri = start;

    for (int guard = 0; guard < 4096; ++guard) {
        // Finished when folding over some slot realises the target.
        for (int r = 0; r < 3; ++r) {
            if (fold_result(tri, r) == target) {
                path.final_triangle = tri;
                path.fold_slot = r;
                return path;
            }
        }
        // Extra-exceptional: the target is a corner of the triangle.  One
        // layering moves it off the triangle; the next pass folds.
        int step = -1;
        for (int r = 0; r < 3 && step < 0; ++r)
            if (tri[r] == target) {
                step = r;
                path.extra_exceptional = true;
            }
        if (step < 0) {
            // Walk: layer over the slot whose opposite edge separates the
            // triangle from the target.
            for (int r = 0; r < 3 && step < 0; ++r) {
                const Slope& u = tri[(r + 1) % 3];
                const Slope& v = tri[(r + 2) % 3];
                int det = u.p * v.q - u.q * v.p;
                // target = x*u + y*v; corner = xw*u + yw*v.
                int x = (target.p * v.q - target.q * v.p) / det;
                int y = (u.p * target.q - u.q * target.p) / det;
                int xw = (tri[r].p * v.q - tri[r].q * v.p) / det;
                int yw = (u.p * tri[r].q - u.q * tri[r].p) / det;
                if (x != 0 && y != 0 && ((x > 0) == (y > 0)) != ((xw > 0) == (yw > 0)))
                    step = r;
            }
        }
        if (step < 0) throw TriError("farey_path: no step towards " + target.str());
        tri[step] = fold_result(tri, step);
        path.layer_slots.push_back(step);
    }
    throw TriError("farey_path: walk did not terminate");
}

std::string FareyPath::json() const {
    std::string s = "{\"start\":[";
    for (int i = 0; i < 3; ++i)
        s += (i ? ",\"" : "\"") + start[i].str() + "\"";
    s += "],\"target\":\"" + target.str() + "\",\"extra_exceptional\":";
    s += extra_exceptional ? "true" : "false";
    s += ",\"layer_slots\":[";
    for (size_t i = 0; i < layer_slots.size(); ++i)
        s += (i ? "," : "") + std::to_string(layer_slots[i]);
    s += "],\"final\":[";
    for (int i = 0; i < 3; ++i)
        s += (i ? ",\"" : "\"") + final_triangle[i].str() + "\"";
    s += "],\"fold_slot\":" + std::to_string(fold_slot) + "}";
    return s;
}

namespace {

// An open boundary face slot with its three edges labelled by slope
// slots 0..2 (vertex-label pairs within this tetrahedron).
struct BoundarySlot {
    int tet = -1;
    int face = -1;
    std::array<std::array<int, 2>, 3> ev{};

    int third(int r) const {
        for (int v = 0; v < 4; ++v)
            if (v != face && v != ev[r][0] && v != ev[r][1]) return v;
        throw TriError("fill: degenerate boundary edge labels");
    }
    int role_of(int a, int b) const {
        for (int r = 0; r < 3; ++r)
            if ((ev[r][0] == a && ev[r][1] == b) || (ev[r][0] == b && ev[r][1] == a))
                return r;
        throw TriError("fill: boundary edge has no slope label");
    }
};

Perm4 make_perm(int i0, int i1, int i2, int i3) {
    Perm4 p(i0, i1, i2, i3);
    if (!p.is_valid()) throw TriError("fill: inconsistent boundary labels");
    return p;
}

}  // namespace

FareyPath fill_crossing_circle(FALTriangulation& ft, int circle, const Slope& target) {
    if (circle < 0 || circle >= static_cast<int>(ft.cusps.size()))
        throw TriError("fill: no such circle");
    CuspMarking& M = ft.cusps[circle];
    if (!M.adjusted || M.filled)
        throw TriError("fill: circle cusp is not in the two-tetrahedron state");
    Triangulation& tri = ft.tri;
    int c0 = M.cusp_tet[0], c1 = M.cusp_tet[1];
    if (c0 < 0 || c1 < 0 || c0 == c1) throw TriError("fill: bad cusp tetrahedra");

    Gluing G[2] = {tri.gluing(c0, 0), tri.gluing(c1, 0)};
    for (const Gluing& g : G) {
        if (!g.glued()) throw TriError("fill: cusp base face is open");
        if (g.tet == c0 || g.tet == c1)
            throw TriError("fill: cusp base face glued to the cusp pair");
    }

    // Slope slots on the two base triangles.  Slot r labels the base edge
    // of c0 inside its side face r+1; the side gluings carry the labels
    // over to c1.
    auto base_edge = [](int f) {
        std::array<int, 2> e{};
        int k = 0;
        for (int v = 1; v < 4; ++v)
            if (v != f) e[k++] = v;
        return e;
    };
    BoundarySlot B[2];
    B[0].tet = G[0].tet;
    B[0].face = G[0].perm[0];
    B[1].tet = G[1].tet;
    B[1].face = G[1].perm[0];
    for (int r = 0; r < 3; ++r) {
        auto e = base_edge(r + 1);
        B[0].ev[r] = {G[0].perm[e[0]], G[0].perm[e[1]]};
        Gluing s = tri.gluing(c0, r + 1);
        if (!s.glued() || s.tet != c1 || s.perm[0] != 0)
            throw TriError("fill: cusp side faces do not pair the two cusp tetrahedra");
        B[1].ev[r] = {G[1].perm[s.perm[e[0]]], G[1].perm[s.perm[e[1]]]};
        if (s.perm[e[0]] == 0 || s.perm[e[1]] == 0)
            throw TriError("fill: cusp side gluing does not fix the cusp vertex");
    }
    for (int i = 0; i < 2; ++i)
        for (int r = 0; r < 3; ++r)
            B[i].role_of(B[i].ev[r][0], B[i].ev[r][1]);  // sanity: labels well formed

    std::array<Slope, 3> start = {Slope(M.slope[0].first, M.slope[0].second),
                                  Slope(M.slope[1].first, M.slope[1].second),
                                  Slope(M.slope[2].first, M.slope[2].second)};
    FareyPath path = farey_path(start, target);

    std::vector<int> remap = tri.remove_tets({c0, c1});
    apply_remap(ft, remap);
    B[0].tet = remap[B[0].tet];
    B[1].tet = remap[B[1].tet];

    Skeleton sk = compute_skeleton(tri);
    if (!sk.orientable) throw TriError("fill: complex not orientable");
    std::vector<int> sign = sk.tet_orientation;

    for (int slot : path.layer_slots) {
        int L = tri.add_tet();
        sign.push_back(0);
        // Faces 2 and 3 of the new tetrahedron share edge {0,1}; they cover
        // the two boundary triangles with {0,1} along the layered edge.
        auto e0 = B[0].ev[slot];
        int th0 = B[0].third(slot);
        Perm4 p0 = make_perm(e0[0], e0[1], B[0].face, th0);
        sign[L] = p0.is_even() ? -sign[B[0].tet] : sign[B[0].tet];
        auto e1 = B[1].ev[slot];
        int th1 = B[1].third(slot);
        Perm4 p1 = make_perm(e1[0], e1[1], th1, B[1].face);
        if (p1.is_even() == (sign[L] == sign[B[1].tet]))
            p1 = make_perm(e1[1], e1[0], th1, B[1].face);
        BoundarySlot old0 = B[0], old1 = B[1];
        tri.glue(L, 2, old0.tet, p0);
        tri.glue(L, 3, old1.tet, p1);
        // New boundary: faces 0 and 1 of L.  Edge {2,3} is the fresh
        // diagonal in the layered slot; the other edges inherit labels
        // through the two gluings.
        B[0] = BoundarySlot{L, 0, {}};
        B[1] = BoundarySlot{L, 1, {}};
        B[0].ev[slot] = {2, 3};
        B[1].ev[slot] = {2, 3};
        B[0].ev[old1.role_of(p1[1], p1[2])] = {1, 2};
        B[0].ev[old0.role_of(p0[1], p0[3])] = {1, 3};
        B[1].ev[old1.role_of(p1[0], p1[2])] = {0, 2};
        B[1].ev[old0.role_of(p0[0], p0[3])] = {0, 3};
        for (int i = 0; i < 2; ++i) {
            int mask = 0;
            for (int r = 0; r < 3; ++r) mask |= 1 << B[i].ev[r][0] | 1 << B[i].ev[r][1];
            if (mask != (0xF & ~(1 << B[i].face)))
                throw TriError("fill: layering produced inconsistent labels");
        }
    }

    // Fold the two remaining boundary triangles over the fold slot.
    auto e0 = B[0].ev[path.fold_slot];
    auto e1 = B[1].ev[path.fold_slot];
    int th0 = B[0].third(path.fold_slot);
    int th1 = B[1].third(path.fold_slot);
    int img[4];
    img[e0[0]] = e1[0];
    img[e0[1]] = e1[1];
    img[th0] = th1;
    img[B[0].face] = B[1].face;
    Perm4 m = make_perm(img[0], img[1], img[2], img[3]);
    if (m.is_even() == (sign[B[0].tet] == sign[B[1].tet])) {
        std::swap(img[e0[0]], img[e0[1]]);
        m = make_perm(img[0], img[1], img[2], img[3]);
    }
    tri.glue(B[0].tet, B[0].face, B[1].tet, m);

    M.filled = true;
    M.cusp_tet = {-1, -1};
    tri.check_valid();
    return path;
}

FareyPath fill_crossing_circle(FALTriangulation& ft, int circle) {
    const CuspMarking& M = ft.cusps[circle];
    return fill_crossing_circle(ft, circle, Slope(1, M.fill_n));
}

}  // namespace htri
