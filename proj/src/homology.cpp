#include "htri/homology.hpp"

#include <algorithm>
#include <set>

namespace htri {

namespace {

// State of a rotation walk around an edge: directed edge (a->b) of a
// tetrahedron, about to leave through face f.
struct RotState {
    int tet, a, b, f;
    bool operator<(const RotState& o) const {
        return std::tie(tet, a, b, f) < std::tie(o.tet, o.a, o.b, o.f);
    }
    bool operator==(const RotState&) const = default;
};

}  // namespace

H1Presentation h1_presentation(const Triangulation& tri, const Skeleton& sk) {
    const int n = tri.size();
    H1Presentation pres;
    pres.face_generator.assign(sk.faces, -1);
    if (n == 0) return pres;

    // Spanning forest of the face-pairing graph; canonical slot of a glued
    // face class is the lexicographically smaller (tet, face).
    std::vector<FacePointer> slot0(sk.faces, FacePointer{});
    std::vector<char> glued_cls(sk.faces, 0);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            int c = sk.fclass(t, f);
            if (!tri.gluing(t, f).glued()) continue;
            glued_cls[c] = 1;
            FacePointer fp{t, f};
            if (slot0[c].tet < 0 || fp < slot0[c]) slot0[c] = fp;
        }
    std::vector<char> in_tree(sk.faces, 0);
    std::vector<char> seen(n, 0);
    for (int root = 0; root < n; ++root) {
        if (seen[root]) continue;
        seen[root] = 1;
        std::vector<int> stack{root};
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            for (int f = 0; f < 4; ++f) {
                const Gluing& g = tri.gluing(t, f);
                if (!g.glued() || seen[g.tet]) continue;
                seen[g.tet] = 1;
                in_tree[sk.fclass(t, f)] = 1;
                stack.push_back(g.tet);
            }
        }
    }
    for (int c = 0; c < sk.faces; ++c)
        if (glued_cls[c] && !in_tree[c]) pres.face_generator[c] = pres.generators++;

    // Edge rotation orbits.  Open orbits (hitting a boundary face) give no
    // relator; each closed orbit gives one, and we also mark the reversed
    // orbit visited so each undirected orbit is used once.
    std::set<RotState> visited;
    auto advance = [&](const RotState& s) -> std::pair<bool, RotState> {
        const Gluing& g = tri.gluing(s.tet, s.f);
        if (!g.glued()) return {false, {}};
        int a = g.perm[s.a], b = g.perm[s.b], in = g.perm[s.f];
        return {true, RotState{g.tet, a, b, 6 - a - b - in}};
    };
    auto gen_step = [&](const RotState& s, std::vector<Int>& word) {
        int c = sk.fclass(s.tet, s.f);
        int gidx = pres.face_generator[c];
        if (gidx < 0) return;
        word[gidx] += (slot0[c] == FacePointer{s.tet, s.f}) ? 1 : -1;
    };

    for (int t = 0; t < n; ++t)
        for (int e = 0; e < 6; ++e)
            for (int k = 0; k < 2; ++k) {
                int a = kEdgeV[e][k], b = kEdgeV[e][1 - k];
                for (int f : faces_of_edge(a, b)) {
                    RotState start{t, a, b, f};
                    if (visited.count(start)) continue;
                    std::vector<Int> word(pres.generators, 0);
                    std::vector<RotState> path{start};
                    RotState s = start;
                    bool closed = false;
                    while (true) {
                        auto [ok, next] = advance(s);
                        if (!ok) break;  // open orbit
                        gen_step(s, word);
                        if (next == start) {
                            closed = true;
                            break;
                        }
                        s = next;
                        path.push_back(s);
                    }
                    for (const RotState& p : path) {
                        visited.insert(p);
                        // Reversed state: direction flipped, leaving through
                        // the face the forward walk entered by.
                        visited.insert(RotState{p.tet, p.b, p.a, 6 - p.a - p.b - p.f});
                    }
                    if (closed && std::any_of(word.begin(), word.end(),
                                              [](const Int& x) { return x != 0; }))
                        pres.relators.push_back(std::move(word));
                }
            }
    return pres;
}

AbelianGroup h1(const Triangulation& tri, const Skeleton& sk) {
    H1Presentation p = h1_presentation(tri, sk);
    return cokernel(std::move(p.relators), p.generators);
}

AbelianGroup h1(const Triangulation& tri) { return h1(tri, compute_skeleton(tri)); }

ChainH1::ChainH1(const Triangulation& tri) { build(tri, compute_skeleton(tri)); }
ChainH1::ChainH1(const Triangulation& tri, const Skeleton& sk) { build(tri, sk); }

void ChainH1::build(const Triangulation& tri, const Skeleton& sk) {
    for (char ok : sk.edge_consistent)
        if (!ok) throw TriError("ChainH1: edge identified with itself reversed");
    edges_ = sk.edges;
    const int n = tri.size();

    // Representative slot per face class and representative directed edge
    // per edge class (the instance with sign +1 found first).
    std::vector<FacePointer> frep(sk.faces, FacePointer{-1, -1});
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f)
            if (frep[sk.fclass(t, f)].tet < 0) frep[sk.fclass(t, f)] = {t, f};
    std::vector<std::pair<int, int>> erep(sk.edges, {-1, -1});  // (tet, edge)
    for (int t = 0; t < n; ++t)
        for (int e = 0; e < 6; ++e) {
            int c = sk.edge_class[t * 6 + e];
            if (erep[c].first < 0 && sk.edge_sign[t * 6 + e] == 1) erep[c] = {t, e};
        }

    // d1: vertices x edges.
    Matrix d1(sk.vertices, std::vector<Int>(sk.edges, 0));
    for (int c = 0; c < sk.edges; ++c) {
        auto [t, e] = erep[c];
        int a = kEdgeV[e][0], b = kEdgeV[e][1];
        d1[sk.vclass(t, b)][c] += 1;
        d1[sk.vclass(t, a)][c] -= 1;
    }
    // d2: edges x faces, using the cycle x->y->z->x on sorted face labels.
    Matrix d2(sk.edges, std::vector<Int>(sk.faces, 0));
    for (int c = 0; c < sk.faces; ++c) {
        auto [t, f] = frep[c];
        int vs[3], k = 0;
        for (int v = 0; v < 4; ++v)
            if (v != f) vs[k++] = v;
        int x = vs[0], y = vs[1], z = vs[2];
        d2[sk.eclass(t, x, y)][c] += sk.esign(t, x, y);
        d2[sk.eclass(t, y, z)][c] += sk.esign(t, y, z);
        d2[sk.eclass(t, x, z)][c] -= sk.esign(t, x, z);
    }

    SNF s1 = smith_normal_form(d1, true);
    v1inv_ = std::move(s1.Vinv);
    const size_t lim1 = std::min<size_t>(sk.vertices, sk.edges);
    for (int j = 0; j < sk.edges; ++j)
        if (static_cast<size_t>(j) >= lim1 || s1.diag[j] == 0) kernel_cols_.push_back(j);
    const size_t kdim = kernel_cols_.size();

    // Kernel coordinates of each face boundary.
    Matrix P(kdim, std::vector<Int>(sk.faces, 0));
    for (int c = 0; c < sk.faces; ++c) {
        for (size_t i = 0; i < kdim; ++i) {
            Int acc = 0;
            const auto& row = v1inv_[kernel_cols_[i]];
            for (int e = 0; e < sk.edges; ++e) acc += row[e] * d2[e][c];
            P[i][c] = acc;
        }
    }
    SNF s2 = smith_normal_form(P, true);
    u2_ = std::move(s2.U);
    quot_diag_.assign(kdim, 0);
    for (size_t i = 0; i < kdim && i < s2.diag.size(); ++i) quot_diag_[i] = s2.diag[i];

    std::vector<std::vector<Int>> rel;
    for (size_t i = 0; i < kdim; ++i) {
        if (quot_diag_[i] == 0) continue;
        std::vector<Int> r(kdim, 0);
        r[i] = quot_diag_[i];
        rel.push_back(std::move(r));
    }
    // The quotient in U2-coordinates is diagonal, so the group reads off
    // directly; cokernel() folds the invariant factors.
    group_ = cokernel(std::move(rel), static_cast<int>(kdim));
}

std::vector<Int> ChainH1::class_of(const std::map<int, Int>& cycle) const {
    std::vector<Int> w(edges_, 0);
    for (const auto& [e, k] : cycle) {
        if (e < 0 || e >= edges_) throw TriError("class_of: edge class out of range");
        w[e] = k;
    }
    // Coordinates in the V1 basis; the cycle condition is that all
    // non-kernel coordinates vanish.
    std::vector<Int> c(v1inv_.size(), 0);
    for (size_t i = 0; i < v1inv_.size(); ++i) {
        Int acc = 0;
        for (int e = 0; e < edges_; ++e) acc += v1inv_[i][e] * w[e];
        c[i] = acc;
    }
    std::set<int> kset(kernel_cols_.begin(), kernel_cols_.end());
    for (size_t i = 0; i < c.size(); ++i)
        if (!kset.count(static_cast<int>(i)) && c[i] != 0)
            throw TriError("class_of: not a 1-cycle");
    std::vector<Int> kc(kernel_cols_.size());
    for (size_t i = 0; i < kernel_cols_.size(); ++i) kc[i] = c[kernel_cols_[i]];

    std::vector<Int> u(kc.size(), 0);
    for (size_t i = 0; i < kc.size(); ++i) {
        Int acc = 0;
        for (size_t j = 0; j < kc.size(); ++j) acc += u2_[i][j] * kc[j];
        u[i] = acc;
    }
    for (size_t i = 0; i < u.size(); ++i) {
        if (quot_diag_[i] == 0) continue;
        u[i] %= quot_diag_[i];
        if (u[i] < 0) u[i] += quot_diag_[i];
    }
    return u;
}

bool ChainH1::is_zero(const std::map<int, Int>& cycle) const {
    auto u = class_of(cycle);
    return std::all_of(u.begin(), u.end(), [](const Int& x) { return x == 0; });
}

}  // namespace htri
