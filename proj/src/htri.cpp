#include "htri/htri.hpp"

#include <algorithm>
#include <cstdlib>

#include "htri/homology.hpp"
#include "htri/isosig.hpp"
#include "json.hpp"

namespace htri {

std::vector<HatFace> find_hat_triangle(const Triangulation& tri) {
    std::vector<HatFace> out;
    if (tri.empty()) return out;
    Skeleton sk = compute_skeleton(tri);
    for (int t = 0; t < tri.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            if (tri.is_boundary(t, f)) continue;
            for (int tip = 0; tip < 4; ++tip) {
                if (tip == f) continue;
                int a = -1, b = -1;
                for (int v = 0; v < 4; ++v)
                    if (v != f && v != tip) (a < 0 ? a : b) = v;
                if (sk.eclass(t, a, tip) != sk.eclass(t, b, tip)) continue;
                if (sk.esign(t, a, tip) != sk.esign(t, b, tip)) continue;
                HatFace h;
                h.tet = t;
                h.face = f;
                h.tip = tip;
                h.cusp = sk.vclass(t, tip);
                h.eligible = (tri.dest(t, f).tet != t);
                out.push_back(h);
            }
        }
    return out;
}

// The folded tetrahedron carries the marked edge between vertices 2 and 3
// and is folded by gluing its face 1 to its face 0, exchanging vertices 0
// and 1 and fixing the marked edge pointwise.  Its faces 3 and 2 land on
// the two copies of the cut-open hat face, with vertices 2 resp. 3 at the
// tip, so that the composite map across the tetrahedron reproduces the
// original face gluing.
HTriangulation insert_folded_tetrahedron(const Triangulation& tri, const HatFace& hat) {
    {
        Skeleton sk = compute_skeleton(tri);
        int a = -1, b = -1;
        for (int v = 0; v < 4; ++v)
            if (v != hat.face && v != hat.tip) (a < 0 ? a : b) = v;
        if (hat.tet < 0 || hat.tet >= tri.size() || hat.face < 0 || hat.face > 3 ||
            hat.tip < 0 || hat.tip > 3 || hat.tip == hat.face ||
            sk.eclass(hat.tet, a, hat.tip) != sk.eclass(hat.tet, b, hat.tip) ||
            sk.esign(hat.tet, a, hat.tip) != sk.esign(hat.tet, b, hat.tip))
            throw TriError("insert_folded_tetrahedron: not a hat face");
        if (tri.is_boundary(hat.tet, hat.face) ||
            tri.dest(hat.tet, hat.face).tet == hat.tet)
            throw TriError("insert_folded_tetrahedron: hat face not between two tetrahedra");
    }

    HTriangulation h;
    h.tri = tri;
    h.hat = hat;
    h.ideal_sig = iso_signature(tri);

    Gluing g = h.tri.unglue(hat.tet, hat.face);
    int d = h.tri.add_tet();
    h.folded_tet = d;
    h.E = {d, 2, 3};
    h.tri.glue(d, 1, d, Perm4(1, 0, 2, 3));

    int a = -1, b = -1;
    for (int v = 0; v < 4; ++v)
        if (v != hat.face && v != hat.tip) (a < 0 ? a : b) = v;
    const Perm4 swap23 = Perm4::transposition(2, 3);
    for (int flip = 0; flip < 2; ++flip) {
        int p[4];
        p[0] = flip ? b : a;
        p[1] = flip ? a : b;
        p[2] = hat.tip;
        p[3] = hat.face;
        Perm4 P(p[0], p[1], p[2], p[3]);
        Perm4 Q = g.perm * P * swap23;
        h.tri.glue(d, 3, hat.tet, P);
        h.tri.glue(d, 2, g.tet, Q);
        h.tri.check_valid();
        if (compute_skeleton(h.tri).orientable) return h;
        // The other assignment of the two base corners carries the
        // orientation through; undo and retry.
        h.tri.unglue(d, 3);
        h.tri.unglue(d, 2);
    }
    throw TriError("insert_folded_tetrahedron: orientation mismatch");
}

Triangulation edge_complement(const HTriangulation& h) {
    int d = h.folded_tet;
    if (d < 0 || d >= h.tri.size())
        throw TriError("edge_complement: missing insertion record");
    Triangulation tri = h.tri;
    Gluing gp = tri.unglue(d, 3);
    Gluing gq = tri.unglue(d, 2);
    tri.unglue(d, 1);
    // Composite map across the removed tetrahedron: face 3 to face 2 via
    // the exchange of the two non-base vertices.
    Perm4 re = gq.perm * Perm4::transposition(2, 3) * gp.perm.inverse();
    tri.glue(gp.tet, gp.perm[3], gq.tet, re);
    tri.remove_tets({d});
    tri.check_valid();
    return tri;
}

VerifyReport verify(const HTriangulation& h) {
    VerifyReport r;
    r.tets = h.tri.size();
    Skeleton sk = compute_skeleton(h.tri);
    r.closed = h.tri.is_closed();
    r.orientable = sk.orientable && sk.connected;
    r.one_vertex = (sk.vertices == 1);
    r.euler_zero = (sk.euler() == 0);
    r.link_sphere = r.one_vertex && vertex_link(h.tri, sk, 0).is_sphere();
    AbelianGroup g = h1(h.tri, sk);
    r.h1_trivial = (g.rank == 0 && g.torsion.empty());

    int c = h.source.c();
    int sum_n = 0;
    for (const FlatCircle& ci : h.source.circles) sum_n += std::abs(ci.n);
    r.count_bound = 12 * c + sum_n - 7;
    r.count_ok = (c > 0 && r.tets <= r.count_bound);

    try {
        Triangulation comp = edge_complement(h);
        r.round_trip = (iso_signature(comp) == h.ideal_sig);
        AbelianGroup hc = h1(comp);
        r.complement_h1_ok = (hc.rank == 1 && hc.torsion.empty());
    } catch (const TriError&) {
        r.round_trip = r.complement_h1_ok = false;
    }

    // Audit trail: stages must chain, sum to the final count, and respect
    // the per-stage growth limits.
    r.stage_bounds_ok = !h.stages.empty();
    int prev = 0;
    size_t fill_idx = 0;
    for (const StageDelta& s : h.stages) {
        if (s.before != prev) r.stage_bounds_ok = false;
        prev = s.after;
        if (s.stage == "triangulate") {
            if (s.after > 2 * (6 * c - 4)) r.stage_bounds_ok = false;
            if (c == 2 && s.after != 8) r.stage_bounds_ok = false;
        } else if (s.stage.rfind("prism", 0) == 0) {
            int circle = std::atoi(s.stage.c_str() + 6);
            bool half = h.source.circles[circle].half_twist;
            if (s.delta() != (half ? 0 : 1)) r.stage_bounds_ok = false;
        } else if (s.stage.rfind("fill", 0) == 0) {
            int circle = std::atoi(s.stage.c_str() + 5);
            int n = h.source.circles[circle].n;
            int limit = std::abs(n) >= 2 ? std::abs(n) - 1 : 1;
            if (fill_idx >= h.fills.size() ||
                h.fills[fill_idx].layered_tets() > limit)
                r.stage_bounds_ok = false;
            ++fill_idx;
        } else if (s.stage == "fold") {
            if (s.delta() != 1) r.stage_bounds_ok = false;
        } else {
            r.stage_bounds_ok = false;
        }
    }
    if (prev != r.tets || fill_idx != h.fills.size()) r.stage_bounds_ok = false;
    return r;
}

std::string VerifyReport::json() const {
    nlohmann::json j;
    j["closed"] = closed;
    j["orientable"] = orientable;
    j["one_vertex"] = one_vertex;
    j["euler_zero"] = euler_zero;
    j["link_sphere"] = link_sphere;
    j["h1_trivial"] = h1_trivial;
    j["count_ok"] = count_ok;
    j["round_trip"] = round_trip;
    j["complement_h1_ok"] = complement_h1_ok;
    j["stage_bounds_ok"] = stage_bounds_ok;
    j["tets"] = tets;
    j["count_bound"] = count_bound;
    j["pass"] = pass();
    return j.dump(2);
}

HTriangulation build_htri(const FlatFAL& f) {
    FALTriangulation ft = triangulate_fal(f);
    std::vector<StageDelta> stages;
    stages.push_back({"triangulate", 0, ft.tri.size()});

    for (int i = 0; i < f.c(); ++i) {
        int before = ft.tri.size();
        prism_adjust(ft, i);
        stages.push_back({"prism " + std::to_string(i), before, ft.tri.size()});
    }

    std::vector<FareyPath> fills;
    for (int i = 0; i < f.c(); ++i) {
        int before = ft.tri.size();
        fills.push_back(fill_crossing_circle(ft, i));
        stages.push_back({"fill " + std::to_string(i), before, ft.tri.size()});
    }

    // Every recorded hat is still a hat after the fills; take the least
    // eligible one for determinism.
    const HatFace* best = nullptr;
    for (const HatFace& hf : ft.hats) {
        if (hf.tet < 0 || !hf.eligible) continue;
        if (ft.tri.dest(hf.tet, hf.face).tet == hf.tet) continue;
        if (!best || hf < *best) best = &hf;
    }
    if (!best) throw TriError("build_htri: no eligible hat face survived the fills");

    int before = ft.tri.size();
    HTriangulation h = insert_folded_tetrahedron(ft.tri, *best);
    stages.push_back({"fold", before, h.tri.size()});
    h.source = f;
    h.fills = std::move(fills);
    h.stages = std::move(stages);
    return h;
}

HTriangulation build_htri(const PDCode& pd, bool assume_twist_reduced) {
    return build_htri(augment(pd, assume_twist_reduced));
}

}  // namespace htri
