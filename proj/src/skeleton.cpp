#include "htri/skeleton.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace htri {

namespace {

// Union-find; the signed variant tracks a +-1 weight to the root so that
// orientation reversals of identified edges can be detected.
struct UF {
    std::vector<int> parent;
    explicit UF(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    }
};

struct SignedUF {
    std::vector<int> parent;
    std::vector<int> sign;      // sign relative to parent
    std::vector<char> bad;      // set on the root when a reversal is found
    explicit SignedUF(int n) : parent(n), sign(n, 1), bad(n, 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::pair<int, int> find(int x) {
        if (parent[x] == x) return {x, 1};
        auto [r, s] = find(parent[x]);
        parent[x] = r;
        sign[x] *= s;
        return {r, sign[x]};
    }
    // Declare x ~ y with relative sign rel.
    void unite(int x, int y, int rel) {
        auto [rx, sx] = find(x);
        auto [ry, sy] = find(y);
        if (rx == ry) {
            if (sx * sy != rel) bad[rx] = 1;
            return;
        }
        int lo = std::min(rx, ry), hi = std::max(rx, ry);
        // sign of hi relative to lo so that sign(x)*sign(y) == rel holds.
        parent[hi] = lo;
        sign[hi] = sx * sy * rel;
        bad[lo] = static_cast<char>(bad[lo] | bad[hi]);
    }
};

std::vector<int> compress(UF& uf, int n, int* count) {
    std::vector<int> cls(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        int r = uf.find(i);
        if (cls[r] < 0) cls[r] = next++;
        if (i != r) cls[i] = cls[r];
    }
    *count = next;
    return cls;
}

}  // namespace

Skeleton compute_skeleton(const Triangulation& tri) {
    tri.check_valid();
    const int n = tri.size();
    Skeleton sk;
    sk.tets = n;

    // Faces: each glued pair is one class, each open slot its own class.
    sk.face_class.assign(4 * n, -1);
    int nf = 0;
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            if (sk.face_class[t * 4 + f] >= 0) continue;
            sk.face_class[t * 4 + f] = nf;
            const Gluing& g = tri.gluing(t, f);
            if (g.glued()) sk.face_class[g.tet * 4 + g.perm[f]] = nf;
            ++nf;
        }
    sk.faces = nf;

    // Vertices and directed edges, identified across every gluing.
    UF vuf(4 * n);
    SignedUF euf(6 * n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.gluing(t, f);
            if (!g.glued()) continue;
            for (int v = 0; v < 4; ++v)
                if (v != f) vuf.unite(t * 4 + v, g.tet * 4 + g.perm[v]);
            for (int e = 0; e < 6; ++e) {
                int a = kEdgeV[e][0], b = kEdgeV[e][1];
                if (a == f || b == f) continue;
                int ia = g.perm[a], ib = g.perm[b];
                int rel = ia < ib ? 1 : -1;
                euf.unite(t * 6 + e, g.tet * 6 + edge_index(ia, ib), rel);
            }
        }
    sk.vertex_class = compress(vuf, 4 * n, &sk.vertices);

    sk.edge_class.assign(6 * n, -1);
    sk.edge_sign.assign(6 * n, 1);
    std::vector<int> root_cls(6 * n, -1);
    int ne = 0;
    for (int i = 0; i < 6 * n; ++i) {
        auto [r, s] = euf.find(i);
        if (root_cls[r] < 0) {
            root_cls[r] = ne++;
            sk.edge_consistent.push_back(!euf.bad[r]);
        }
        sk.edge_class[i] = root_cls[r];
        sk.edge_sign[i] = s;
    }
    sk.edges = ne;

    // Connectivity and orientability over the face-pairing graph.
    std::vector<int> orient(n, 0);
    bool oriented = true;
    int comps = 0;
    for (int start = 0; start < n; ++start) {
        if (orient[start] != 0) continue;
        ++comps;
        orient[start] = 1;
        std::vector<int> stack{start};
        while (!stack.empty()) {
            int t = stack.back();
            stack.pop_back();
            for (int f = 0; f < 4; ++f) {
                const Gluing& g = tri.gluing(t, f);
                if (!g.glued()) continue;
                // Like-oriented tetrahedra must be glued by odd permutations.
                int want = g.perm.is_even() ? -orient[t] : orient[t];
                if (orient[g.tet] == 0) {
                    orient[g.tet] = want;
                    stack.push_back(g.tet);
                } else if (orient[g.tet] != want) {
                    oriented = false;
                }
            }
        }
    }
    sk.connected = (comps <= 1);
    sk.orientable = oriented;
    if (oriented) sk.tet_orientation = std::move(orient);
    return sk;
}

Surface vertex_link(const Triangulation& tri, const Skeleton& sk, int vertex_cls) {
    const int n = tri.size();
    // Link triangles are tetrahedron corners (t,v) in the class; their
    // sides are the faces of t other than v.
    std::vector<int> corner_id(4 * n, -1);
    std::vector<std::pair<int, int>> corners;
    for (int t = 0; t < n; ++t)
        for (int v = 0; v < 4; ++v)
            if (sk.vclass(t, v) == vertex_cls) {
                corner_id[t * 4 + v] = static_cast<int>(corners.size());
                corners.push_back({t, v});
            }
    Surface s;
    s.triangles = static_cast<int>(corners.size());
    if (s.triangles == 0) return s;

    // Link vertices: ends (t, v, w) of tetrahedron edges at v, identified
    // across the two faces containing edge {v,w}.
    auto le_idx = [&](int cid, int w) { return cid * 4 + w; };
    UF lv(static_cast<int>(corners.size()) * 4);
    int glued_sides = 0, open_sides = 0;
    for (int cid = 0; cid < s.triangles; ++cid) {
        auto [t, v] = corners[cid];
        for (int f = 0; f < 4; ++f) {
            if (f == v) continue;
            const Gluing& g = tri.gluing(t, f);
            if (!g.glued()) {
                ++open_sides;
                continue;
            }
            ++glued_sides;
            int cid2 = corner_id[g.tet * 4 + g.perm[v]];
            for (int w = 0; w < 4; ++w) {
                if (w == v || w == f) continue;
                lv.unite(le_idx(cid, w), le_idx(cid2, g.perm[w]));
            }
        }
    }
    int lverts = 0;
    {
        std::set<int> roots;
        for (int cid = 0; cid < s.triangles; ++cid) {
            auto [t, v] = corners[cid];
            for (int w = 0; w < 4; ++w)
                if (w != v) roots.insert(lv.find(le_idx(cid, w)));
        }
        lverts = static_cast<int>(roots.size());
    }
    int ledges = glued_sides / 2 + open_sides;
    s.euler = long(lverts) - ledges + s.triangles;
    s.closed = (open_sides == 0);

    // Connectivity of the link.
    {
        UF cuf(s.triangles);
        for (int cid = 0; cid < s.triangles; ++cid) {
            auto [t, v] = corners[cid];
            for (int f = 0; f < 4; ++f) {
                if (f == v) continue;
                const Gluing& g = tri.gluing(t, f);
                if (g.glued()) cuf.unite(cid, corner_id[g.tet * 4 + g.perm[v]]);
            }
        }
        std::set<int> roots;
        for (int cid = 0; cid < s.triangles; ++cid) roots.insert(cuf.find(cid));
        s.connected = roots.size() <= 1;
    }

    // Orientability: orient each link triangle with a sign; a side gluing
    // is compatible when it reverses the induced edge direction.  The sign
    // convention below writes the triangle's vertex cycle as a permutation
    // of its sorted vertex labels.
    auto tri_parity = [](int x, int y, int z) {
        // Parity of (x,y,z) relative to sorted order: +1 even, -1 odd.
        int inv = (x > y) + (x > z) + (y > z);
        return inv % 2 == 0 ? 1 : -1;
    };
    std::vector<int> lorient(s.triangles, 0);
    bool lorientable = true;
    for (int seed = 0; seed < s.triangles; ++seed) {
        if (lorient[seed] != 0) continue;
        lorient[seed] = 1;
        std::vector<int> stack{seed};
        while (!stack.empty()) {
            int cid = stack.back();
            stack.pop_back();
            auto [t, v] = corners[cid];
            for (int f = 0; f < 4; ++f) {
                if (f == v) continue;
                const Gluing& g = tri.gluing(t, f);
                if (!g.glued()) continue;
                int cid2 = corner_id[g.tet * 4 + g.perm[v]];
                // Shared side has vertex labels {x,y} = the two labels of t
                // other than v and f; its image labels are perm[x], perm[y].
                int x = -1, y = -1;
                for (int w = 0; w < 4; ++w)
                    if (w != v && w != f) (x < 0 ? x : y) = w;
                int want = -lorient[cid] * tri_parity(x, y, f) *
                           tri_parity(g.perm[x], g.perm[y], g.perm[f]);
                if (lorient[cid2] == 0) {
                    lorient[cid2] = want;
                    stack.push_back(cid2);
                } else if (lorient[cid2] != want) {
                    lorientable = false;
                }
            }
        }
    }
    s.orientable = lorientable;

    // Boundary curves: the open sides form a closed 1-manifold on the link
    // vertex classes, so curves are connected components of that graph.
    if (!s.closed) {
        UF buf(static_cast<int>(corners.size()) * 4);
        std::set<int> on_boundary;
        for (int cid = 0; cid < s.triangles; ++cid) {
            auto [t, v] = corners[cid];
            for (int f = 0; f < 4; ++f) {
                if (f == v || !tri.is_boundary(t, f)) continue;
                int x = -1, y = -1;
                for (int w = 0; w < 4; ++w)
                    if (w != v && w != f) (x < 0 ? x : y) = w;
                buf.unite(lv.find(le_idx(cid, x)), lv.find(le_idx(cid, y)));
                on_boundary.insert(lv.find(le_idx(cid, x)));
                on_boundary.insert(lv.find(le_idx(cid, y)));
            }
        }
        std::set<int> roots;
        for (int r : on_boundary) roots.insert(buf.find(r));
        s.boundary_curves = static_cast<int>(roots.size());
    }
    return s;
}

bool is_simplicial(const Triangulation& tri, const Skeleton& sk) {
    const int n = tri.size();
    std::set<std::pair<int, int>> epairs;
    std::map<int, std::pair<int, int>> eclass_pair;
    std::set<std::array<int, 3>> ftrips;
    std::map<int, std::array<int, 3>> fclass_trip;
    std::set<std::array<int, 4>> tquads;
    for (int t = 0; t < n; ++t) {
        std::array<int, 4> q{sk.vclass(t, 0), sk.vclass(t, 1), sk.vclass(t, 2), sk.vclass(t, 3)};
        std::sort(q.begin(), q.end());
        for (int i = 0; i < 3; ++i)
            if (q[i] == q[i + 1]) return false;
        if (!tquads.insert(q).second) return false;
        for (int e = 0; e < 6; ++e) {
            int a = sk.vclass(t, kEdgeV[e][0]), b = sk.vclass(t, kEdgeV[e][1]);
            auto pr = std::minmax(a, b);
            std::pair<int, int> pp{pr.first, pr.second};
            int cls = sk.edge_class[t * 6 + e];
            auto it = eclass_pair.find(cls);
            if (it == eclass_pair.end()) {
                if (!epairs.insert(pp).second) return false;  // two edges, same vertices
                eclass_pair[cls] = pp;
            } else if (it->second != pp) {
                return false;
            }
        }
        for (int f = 0; f < 4; ++f) {
            std::array<int, 3> tr{};
            int k = 0;
            for (int v = 0; v < 4; ++v)
                if (v != f) tr[k++] = sk.vclass(t, v);
            std::sort(tr.begin(), tr.end());
            int cls = sk.fclass(t, f);
            auto it = fclass_trip.find(cls);
            if (it == fclass_trip.end()) {
                if (!ftrips.insert(tr).second) return false;
                fclass_trip[cls] = tr;
            } else if (it->second != tr) {
                return false;
            }
        }
    }
    return true;
}

bool is_simplicial(const Triangulation& tri) {
    return is_simplicial(tri, compute_skeleton(tri));
}

}  // namespace htri
