#include "htri/moves.hpp"

#include <stdexcept>

namespace htri {

namespace {

// Both moves rebuild a small neighbourhood from scratch.  To keep the
// "leave untouched on failure" contract cheap, they work on a copy once
// the candidate configuration looks right and commit only after
// check_valid passes.
bool commit_if_valid(Triangulation& dst, Triangulation& scratch) {
    try {
        scratch.check_valid();
    } catch (const std::exception&) {
        return false;
    }
    dst = std::move(scratch);
    return true;
}

}  // namespace

bool move_23(Triangulation& tri, int tA, int fA, std::array<int, 3>* created,
             std::vector<int>* remap_out) {
    Gluing gf = tri.gluing(tA, fA);
    if (!gf.glued() || gf.tet == tA) return false;
    Triangulation work = tri;
    int tB = gf.tet;
    int a = fA, b = gf.perm[fA];
    // l = the face labels of A opposite the shared face, m = their images.
    std::array<int, 3> l{}, m{};
    {
        int j = 0;
        for (int v = 0; v < 4; ++v)
            if (v != a) l[j++] = v;
    }
    for (int j = 0; j < 3; ++j) m[j] = gf.perm[l[j]];

    // Record the six outer faces before tearing the pair down.
    struct Old {
        int tet, face;
        Gluing g;
    };
    std::vector<Old> olds;
    for (int i = 0; i < 3; ++i) olds.push_back({tA, l[i], work.gluing(tA, l[i])});
    for (int i = 0; i < 3; ++i) olds.push_back({tB, m[i], work.gluing(tB, m[i])});

    std::vector<int> remap = work.remove_tets({tA, tB});
    int T[3];
    for (int i = 0; i < 3; ++i) T[i] = work.add_tet();
    // New tetrahedron i: label 0 at the old apex of A, 1 at the apex of B,
    // labels 2,3 on the central edge.  Neighbours share the central edge.
    for (int i = 0; i < 3; ++i) work.glue(T[i], 2, T[(i + 1) % 3], Perm4(0, 1, 3, 2));

    // Where each old corner slot lands in the new triple.
    auto new_slot = [&](int oldtet, int oldface, int oldlbl) -> std::array<int, 2> {
        if (oldtet == tA) {
            int i = 0;
            while (l[i] != oldface) ++i;
            if (oldlbl == a) return {T[i], 0};
            if (oldlbl == l[(i + 1) % 3]) return {T[i], 2};
            if (oldlbl == l[(i + 2) % 3]) return {T[i], 3};
            return {T[i], 1};
        }
        int i = 0;
        while (m[i] != oldface) ++i;
        if (oldlbl == b) return {T[i], 1};
        if (oldlbl == m[(i + 1) % 3]) return {T[i], 2};
        if (oldlbl == m[(i + 2) % 3]) return {T[i], 3};
        return {T[i], 0};
    };
    for (int i = 0; i < 6; ++i) {
        const Old& o = olds[i];
        if (!o.g.glued()) continue;
        int nt = (i < 3) ? T[i] : T[i - 3];
        int nf = (i < 3) ? 1 : 0;
        if (work.gluing(nt, nf).glued()) continue;  // already set as a partner
        int p[4] = {-1, -1, -1, -1};
        if (o.g.tet == tA || o.g.tet == tB) {
            // Two outer faces of the pair were glued to each other; they
            // become a gluing between two of the new tetrahedra.
            for (int v = 0; v < 4; ++v) {
                if (v == o.face) continue;
                auto s = new_slot(o.tet, o.face, v);
                auto d = new_slot(o.g.tet, o.g.perm[o.face], o.g.perm[v]);
                p[s[1]] = d[1];
            }
            auto df = new_slot(o.g.tet, o.g.perm[o.face], o.g.perm[o.face]);
            p[nf] = df[1];
            work.glue(nt, nf, df[0], Perm4(p[0], p[1], p[2], p[3]));
        } else {
            int dt = remap[o.g.tet];
            for (int v = 0; v < 4; ++v) {
                if (v == o.face) {
                    p[nf] = o.g.perm[v];
                    continue;
                }
                auto s = new_slot(o.tet, o.face, v);
                p[s[1]] = o.g.perm[v];
            }
            work.glue(nt, nf, dt, Perm4(p[0], p[1], p[2], p[3]));
        }
    }
    if (!commit_if_valid(tri, work)) return false;
    if (created) *created = {T[0], T[1], T[2]};
    if (remap_out) *remap_out = remap;
    return true;
}

bool move_32(Triangulation& tri, int t0, int a0, int b0,
             std::array<int, 2>* created, std::vector<int>* remap_out) {
    // Walk around the edge (a0, b0) collecting the incident tetrahedra.
    std::vector<std::array<int, 3>> ring;  // tet, a, b
    int t = t0, a = a0, b = b0;
    int c = -1;
    for (int v = 0; v < 4; ++v)
        if (v != a && v != b) {
            c = v;
            break;
        }
    int start_t = t, start_a = a, start_b = b;
    do {
        ring.push_back({t, a, b});
        Gluing g = tri.gluing(t, c);
        if (!g.glued()) return false;
        int t2 = g.tet, a2 = g.perm[a], b2 = g.perm[b], in = g.perm[c];
        int c2 = 6 - in - a2 - b2;
        t = t2;
        a = a2;
        b = b2;
        c = c2;
    } while (!(t == start_t &&
               ((a == start_a && b == start_b) || (a == start_b && b == start_a))) &&
             ring.size() < 64);
    if (ring.size() >= 64) return false;
    // A ring that closes with the edge reversed is not a bipyramid.
    if (!(t == start_t && a == start_a && b == start_b)) return false;
    if (ring.size() != 3) return false;
    if (ring[0][0] == ring[1][0] || ring[0][0] == ring[2][0] ||
        ring[1][0] == ring[2][0])
        return false;

    // Redo the walk recording, per tetrahedron, the labels of the two
    // equator vertices: piv[i] names e_i, ent[i] names e_{i+1}.
    std::vector<int> piv(3), ent(3);
    t = start_t;
    a = start_a;
    b = start_b;
    for (int v = 0; v < 4; ++v)
        if (v != a && v != b) {
            c = v;
            break;
        }
    for (int i = 0; i < 3; ++i) {
        piv[i] = c;
        Gluing g = tri.gluing(t, c);
        int t2 = g.tet, a2 = g.perm[a], b2 = g.perm[b], in = g.perm[c];
        ent[(i + 1) % 3] = in;
        int c2 = 6 - in - a2 - b2;
        t = t2;
        a = a2;
        b = b2;
        c = c2;
        ring[(i + 1) % 3] = {t, a, b};
    }
    Gluing extA[3], extB[3];  // faces opposite the edge poles x=a, y=b
    for (int i = 0; i < 3; ++i) {
        extA[i] = tri.gluing(ring[i][0], ring[i][1]);
        extB[i] = tri.gluing(ring[i][0], ring[i][2]);
        if (!extA[i].glued() || !extB[i].glued()) return false;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (extA[i].tet == ring[j][0] || extB[i].tet == ring[j][0]) return false;

    Triangulation work = tri;
    // R[i]: labels of x, y, e_i, e_{i+1} within tetrahedron i.
    int R[3][4];
    for (int i = 0; i < 3; ++i) {
        R[i][0] = ring[i][1];
        R[i][1] = ring[i][2];
        R[i][2] = piv[i];
        R[i][3] = ent[i];
    }
    std::vector<int> rm = {ring[0][0], ring[1][0], ring[2][0]};
    std::vector<int> remap = work.remove_tets(rm);
    for (int i = 0; i < 3; ++i) {
        extA[i].tet = remap[extA[i].tet];
        extB[i].tet = remap[extB[i].tet];
    }
    // New pair: U = (x, e0, e1, e2), W = (y, e0, e1, e2).
    int U = work.add_tet();
    int W = work.add_tet();
    work.glue(U, 0, W, Perm4(0, 1, 2, 3));
    for (int i = 0; i < 3; ++i) {
        {
            // Old face opposite x in tetrahedron i = (y, e_i, e_{i+1});
            // in W that triangle is the face opposite e_{i+2}.
            int p[4];
            p[0] = extA[i].perm[R[i][1]];
            p[(i % 3) + 1] = extA[i].perm[R[i][2]];
            p[((i + 1) % 3) + 1] = extA[i].perm[R[i][3]];
            p[((i + 2) % 3) + 1] = extA[i].perm[R[i][0]];
            work.glue(W, ((i + 2) % 3) + 1, extA[i].tet, Perm4(p[0], p[1], p[2], p[3]));
        }
        {
            int p[4];
            p[0] = extB[i].perm[R[i][0]];
            p[(i % 3) + 1] = extB[i].perm[R[i][2]];
            p[((i + 1) % 3) + 1] = extB[i].perm[R[i][3]];
            p[((i + 2) % 3) + 1] = extB[i].perm[R[i][1]];
            work.glue(U, ((i + 2) % 3) + 1, extB[i].tet, Perm4(p[0], p[1], p[2], p[3]));
        }
    }
    if (!commit_if_valid(tri, work)) return false;
    if (created) *created = {U, W};
    if (remap_out) *remap_out = remap;
    return true;
}

}  // namespace htri
