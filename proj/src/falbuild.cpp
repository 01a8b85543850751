#include "htri/falbuild.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>

#include "htri/moves.hpp"
#include "htri/skeleton.hpp"

namespace htri {

namespace {

// ---------------------------------------------------------------------
// Flat-diagram bookkeeping shared by the polyhedron builder and the
// triangulator.

bool is_strand_dart(int d) { return d % 10 >= 6; }

// Strand arcs: orbits {d, theta(d)} over strand darts, numbered in
// increasing order of their least dart.
std::vector<int> arc_of_dart(const FlatFAL& f) {
    std::vector<int> arc(f.darts(), -1);
    int next = 0;
    for (int d = 0; d < f.darts(); ++d) {
        if (!is_strand_dart(d) || arc[d] >= 0) continue;
        arc[d] = arc[f.theta[d]] = next++;
    }
    return arc;
}

int arc_count(const FlatFAL& f) { return 2 * f.c(); }

// Edge ids of the polyhedron: per circle the three segment pieces
// [x,p], [p,q], [q,y] on the east and west side.
long edge_xp_e(int i) { return 6L * i + 0; }
long edge_xp_w(int i) { return 6L * i + 1; }
long edge_pq_e(int i) { return 6L * i + 2; }
long edge_pq_w(int i) { return 6L * i + 3; }
long edge_qy_e(int i) { return 6L * i + 4; }
long edge_qy_w(int i) { return 6L * i + 5; }

struct Polygon {
    std::vector<int> corners;  // vertex ids; circle vertices are < c
    std::vector<long> edges;   // edges[k] joins corners[k], corners[k+1]
};

// White face of a region of the flat diagram, as an alternating
// corner/edge cycle.  Faces are traced with the region on the right of
// each dart, so all white polygons are consistently oriented.
Polygon white_polygon(const FlatFAL& f, const std::vector<int>& cycle,
                      const std::vector<int>& arc) {
    int c = f.c();
    std::vector<std::pair<bool, long>> items;  // (is_corner, id)
    for (int d : cycle) {
        int i = d / 10;
        switch (d % 10) {
            case 0:  // sx: wrap around the x stub, then the west piece
                items.emplace_back(true, i);
                items.emplace_back(false, edge_xp_w(i));
                break;
            case 1: items.emplace_back(false, edge_xp_e(i)); break;
            case 2: items.emplace_back(false, edge_pq_w(i)); break;
            case 3: items.emplace_back(false, edge_pq_e(i)); break;
            case 4: items.emplace_back(false, edge_qy_w(i)); break;
            case 5:  // sy: wrap around the y stub, then the east piece
                items.emplace_back(true, i);
                items.emplace_back(false, edge_qy_e(i));
                break;
            default: items.emplace_back(true, c + arc[d]); break;
        }
    }
    // Rotate so the cycle starts with a corner, then split.
    int n = static_cast<int>(items.size());
    int start = 0;
    while (start < n && !items[start].first) ++start;
    if (start == n) throw TriError("white face without corners");
    Polygon poly;
    for (int k = 0; k < n; ++k) {
        auto& it = items[(start + k) % n];
        if (it.first) poly.corners.push_back(static_cast<int>(it.second));
        else poly.edges.push_back(it.second);
    }
    if (poly.corners.size() != poly.edges.size() || poly.corners.empty())
        throw TriError("white face does not alternate corners and edges");
    return poly;
}

std::vector<Polygon> white_polygons(const FlatFAL& f, const std::vector<int>& arc) {
    std::vector<Polygon> out;
    for (const auto& cyc : f.faces()) out.push_back(white_polygon(f, cyc, arc));
    return out;
}

long chord_x(const FlatFAL& f, int i) { return 6L * f.c() + 2 * i; }
long chord_y(const FlatFAL& f, int i) { return 6L * f.c() + 2 * i + 1; }

// Cuts the circle-vertex corners off a white polygon; the two stub
// pieces around each such corner become a single chord edge.
Polygon truncate_white(const FlatFAL& f, const Polygon& poly) {
    int c = f.c();
    int k = static_cast<int>(poly.corners.size());
    Polygon out;
    for (int j = 0; j < k; ++j) {
        if (poly.corners[j] < c) continue;
        out.corners.push_back(poly.corners[j]);
        int jn = (j + 1) % k;
        if (poly.corners[jn] >= c) {
            out.edges.push_back(poly.edges[j]);
        } else {
            int i = poly.corners[jn];
            long nxt = poly.edges[jn];
            if (nxt == edge_xp_w(i)) out.edges.push_back(chord_x(f, i));
            else if (nxt == edge_qy_e(i)) out.edges.push_back(chord_y(f, i));
            else throw TriError("stub wrap with unexpected edges");
        }
    }
    if (out.corners.empty()) throw TriError("white face collapses under truncation");
    return out;
}

// ---------------------------------------------------------------------
// Remnant boundary machinery.  The remnant of each polyhedron (the
// complement of the cusp pyramids) is a ball whose boundary sphere is
// triangulated by the fanned truncated white faces plus the pyramid
// base rectangles, and is then coned from a boundary vertex.

struct RTri {
    std::array<int, 3> v;   // corner vertex ids
    std::array<long, 3> e;  // e[k] joins v[k], v[k+1]
    // Base triangles only: the already-built pyramid slot behind this
    // triangle; outer_lbl[j] = tetrahedron vertex label of corner j.
    int outer_tet = -1;
    int outer_face = -1;
    std::array<int, 3> outer_lbl{};
    bool is_base = false;
};

// A white face whose truncation is a digon is squashed flat; the record
// keeps its two boundary edges and its two corner vertices so that the
// gluing between the remnants can still pass through the squashed face.
struct DroppedDigon {
    int e1, e2;  // dense edge indices of the two sides
    int u0, u1;  // corner vertices (e1 runs u0 -> u1, e2 runs u1 -> u0)
};

// One end of a gluing chain: either a concrete tetrahedron face or a
// triangle token (shared face whose covering is resolved by the chain).
// m[] maps the three "spots" of the wire to tetrahedron vertex labels
// (concrete) or to corner positions of the token triangle.
struct WEnd {
    int token = -1;  // triangle index, or -1 when concrete
    int tet = -1;
    int face = -1;
    std::array<int, 3> m{};
};

struct Wire {
    WEnd a, b;
    bool used = false;
};

}  // namespace

// ---------------------------------------------------------------------

int IdealPolyhedron::white_count() const {
    int n = 0;
    for (const auto& fc : faces)
        if (!fc.shaded) ++n;
    return n;
}

int IdealPolyhedron::shaded_count() const {
    return static_cast<int>(faces.size()) - white_count();
}

void IdealPolyhedron::validate() const {
    // Each edge lies in exactly two faces, one white and one shaded.
    std::map<int, std::pair<int, int>> edge_use;  // edge -> (white, shaded)
    std::vector<int> corner_cnt(vertices, 0), shade_cnt(vertices, 0);
    for (const auto& fc : faces) {
        if (fc.corners.size() != fc.edges.size() || fc.corners.empty())
            throw TriError("polyhedron face is not an alternating cycle");
        if (fc.shaded && fc.corners.size() != 3)
            throw TriError("shaded face is not a triangle");
        for (int e : fc.edges) {
            auto& u = edge_use[e];
            (fc.shaded ? u.second : u.first)++;
        }
        for (int v : fc.corners) {
            if (v < 0 || v >= vertices) throw TriError("face corner out of range");
            ++corner_cnt[v];
            if (fc.shaded) ++shade_cnt[v];
        }
    }
    if (static_cast<int>(edge_use.size()) != edge_count)
        throw TriError("polyhedron edge count mismatch");
    for (auto& [e, u] : edge_use)
        if (u.first != 1 || u.second != 1)
            throw TriError("polyhedron edge is not between one white and one shaded face");
    // Every ideal vertex has four corners, two white and two shaded.
    for (int v = 0; v < vertices; ++v)
        if (corner_cnt[v] != 4 || shade_cnt[v] != 2)
            throw TriError("ideal vertex without four alternating corners");
    long euler = long(vertices) - edge_count + static_cast<long>(faces.size());
    if (euler != 2) throw TriError("polyhedron boundary is not a sphere");
}

IdealPolyhedron build_polyhedra(const FlatFAL& f) {
    f.validate();
    int c = f.c();
    auto arc = arc_of_dart(f);

    IdealPolyhedron P;
    P.circles = c;
    P.vertices = c + arc_count(f);
    P.edge_count = 6 * c;
    P.degenerate_remnant = (c == 2);

    for (const auto& poly : white_polygons(f, arc)) {
        if (poly.corners.size() == 1)
            throw KnotError(KnotErrorKind::Unsupported,
                            "flat diagram has a monogon region (removable crossing circle)");
        PolyFace fc;
        fc.shaded = false;
        fc.corners = poly.corners;
        for (long e : poly.edges) fc.edges.push_back(static_cast<int>(e));
        P.faces.push_back(std::move(fc));
    }
    for (int i = 0; i < c; ++i) {
        PolyFace east, west;
        east.shaded = west.shaded = true;
        east.corners = {i, c + arc[FlatFAL::pe(i)], c + arc[FlatFAL::qe(i)]};
        east.edges = {static_cast<int>(edge_xp_e(i)), static_cast<int>(edge_pq_e(i)),
                      static_cast<int>(edge_qy_e(i))};
        west.corners = {i, c + arc[FlatFAL::pw(i)], c + arc[FlatFAL::qw(i)]};
        west.edges = {static_cast<int>(edge_xp_w(i)), static_cast<int>(edge_pq_w(i)),
                      static_cast<int>(edge_qy_w(i))};
        P.faces.push_back(std::move(east));
        P.faces.push_back(std::move(west));
    }
    P.validate();
    return P;
}

// ---------------------------------------------------------------------

FALTriangulation triangulate_fal(const FlatFAL& f) {
    f.validate();
    int c = f.c();
    if (c < 2)
        throw KnotError(KnotErrorKind::Unsupported,
                        "need at least two crossing circles");
    build_polyhedra(f);  // structural validation (monogons etc.)

    auto arc = arc_of_dart(f);
    FALTriangulation ft;
    ft.source = f;
    Triangulation& tri = ft.tri;

    // Cusp pyramids: per circle, two tetrahedra in each polyhedron.  The
    // rectangle corners around circle vertex i are n1..n4 = the arcs at
    // the east-p, east-q, west-q, west-p passages; polyhedron 1 uses the
    // (n1,n3) diagonal, polyhedron 2 the mirrored one.
    ft.cusps.resize(c);
    std::vector<std::array<int, 4>> rect(c);
    for (int i = 0; i < c; ++i) {
        int n1 = c + arc[FlatFAL::pe(i)], n2 = c + arc[FlatFAL::qe(i)];
        int n3 = c + arc[FlatFAL::qw(i)], n4 = c + arc[FlatFAL::pw(i)];
        rect[i] = {n1, n2, n3, n4};
        int t1 = tri.add_tet();  // (v, n1, n2, n3)
        int t2 = tri.add_tet();  // (v, n1, n3, n4)
        int t3 = tri.add_tet();  // (v, m2, m3, m4)
        int t4 = tri.add_tet();  // (v, m2, m4, m1)
        ft.cusps[i].circle = i;
        ft.cusps[i].half_twist = f.circles[i].half_twist;
        ft.cusps[i].fill_n = f.circles[i].n;
        ft.cusps[i].twist_sign = f.circles[i].sign;
        ft.cusps[i].pyramid = {t1, t2, t3, t4};
        // Pyramid diagonals.
        tri.glue(t1, 2, t2, Perm4(0, 1, 3, 2));
        tri.glue(t3, 2, t4, Perm4(0, 1, 3, 2));
        // White-face corners at the two stubs, polyhedron 1 <-> 2.
        tri.glue(t1, 1, t3, Perm4(0, 3, 1, 2));
        tri.glue(t2, 2, t4, Perm4(0, 3, 1, 2));
        // Crossing-disc (shaded) triangles.
        if (f.circles[i].half_twist) {
            tri.glue(t1, 3, t3, Perm4(0, 2, 3, 1));
            tri.glue(t2, 1, t4, Perm4(0, 2, 3, 1));
        } else {
            tri.glue(t1, 3, t2, Perm4(0, 3, 2, 1));
            tri.glue(t4, 2, t3, Perm4(0, 2, 1, 3));
        }
    }

    // Remnant boundary triangles.  Truncated white faces are shared by
    // both remnants; base rectangles belong to one of them.
    std::vector<RTri> tris;
    std::vector<std::vector<int>> surf(2);
    std::map<long, int> edense;  // edge id -> dense index
    auto eidx = [&](long e) {
        auto it = edense.find(e);
        if (it != edense.end()) return it->second;
        int k = static_cast<int>(edense.size());
        edense.emplace(e, k);
        return k;
    };

    long next_edge = 6L * c + 2L * c;  // after segment pieces and chords
    std::vector<DroppedDigon> digons;
    for (const auto& raw : white_polygons(f, arc)) {
        Polygon poly = truncate_white(f, raw);
        int k = static_cast<int>(poly.corners.size());
        if (k == 1) throw TriError("monogon remnant face");
        if (k == 2) {
            digons.push_back({eidx(poly.edges[0]), eidx(poly.edges[1]), poly.corners[0],
                              poly.corners[1]});
            continue;
        }
        int lo = static_cast<int>(std::min_element(poly.corners.begin(), poly.corners.end()) -
                                  poly.corners.begin());
        auto cor = [&](int j) { return poly.corners[(lo + j) % k]; };
        auto edg = [&](int j) { return poly.edges[(lo + j) % k]; };
        std::vector<long> diag(k);  // diag[j]: chord from corner 0 to corner j
        for (int j = 2; j < k - 1; ++j) diag[j] = next_edge++;
        for (int j = 1; j <= k - 2; ++j) {
            RTri t;
            t.v = {cor(0), cor(j), cor(j + 1)};
            t.e = {j == 1 ? edg(0) : diag[j], edg(j), j == k - 2 ? edg(k - 1) : diag[j + 1]};
            int id = static_cast<int>(tris.size());
            tris.push_back(t);
            surf[0].push_back(id);
            surf[1].push_back(id);
        }
    }
    for (int i = 0; i < c; ++i) {
        auto [n1, n2, n3, n4] = rect[i];
        long d1 = next_edge++, d2 = next_edge++;  // pyramid-base diagonals
        auto add = [&](int poly, std::array<int, 3> v, std::array<long, 3> e, int tet) {
            RTri t;
            t.v = v;
            t.e = e;
            t.is_base = true;
            t.outer_tet = tet;
            t.outer_face = 0;
            t.outer_lbl = {1, 2, 3};
            int id = static_cast<int>(tris.size());
            tris.push_back(t);
            surf[poly].push_back(id);
        };
        add(0, {n1, n2, n3}, {edge_pq_e(i), chord_y(f, i), d1}, ft.cusps[i].pyramid[0]);
        add(0, {n1, n3, n4}, {d1, edge_pq_w(i), chord_x(f, i)}, ft.cusps[i].pyramid[1]);
        add(1, {n2, n3, n4}, {chord_y(f, i), edge_pq_w(i), d2}, ft.cusps[i].pyramid[2]);
        add(1, {n2, n4, n1}, {d2, chord_x(f, i), edge_pq_e(i)}, ft.cusps[i].pyramid[3]);
    }

    // Dense edge indices.
    for (auto& t : tris)
        for (long& e : t.e) e = eidx(e);

    // Squashing a digon flat identifies its two boundary edges, which is a
    // homeomorphism only while those edges are still distinct in the final
    // complex.  Track the identifications with a union-find: the crossing
    // disc gluings already match the east and west [p,q] pieces of each
    // circle, and every squashed digon merges its own pair.  A digon whose
    // edges are already identified (the closed chain of tangencies) must
    // instead survive as an internal wall, built from a tetrahedron pillow.
    std::map<int, int> uf;
    std::function<int(int)> find = [&](int e) {
        auto it = uf.find(e);
        if (it == uf.end() || it->second == e) return uf[e] = e;
        return uf[e] = find(it->second);
    };
    for (int i = 0; i < c; ++i) uf[find(eidx(edge_pq_e(i)))] = find(eidx(edge_pq_w(i)));
    std::vector<bool> pillow(digons.size(), false);
    for (size_t di = 0; di < digons.size(); ++di) {
        int r1 = find(digons[di].e1), r2 = find(digons[di].e2);
        if (r1 == r2) pillow[di] = true;
        else uf[r1] = r2;
    }

    // Cone apex choice, one boundary vertex per remnant, maximizing the
    // triangle incidence (fewest cone tetrahedra).  A vertex that occurs
    // twice in some boundary triangle cannot be an apex, nor can a corner
    // of a surviving digon wall (the pillow needs free flanks there), and
    // the candidate's star must be a disc: its triangles must be connected
    // through the boundary edges at the vertex (folded digons make their
    // two flanks adjacent), or the cone would pinch at the apex.
    auto star_is_disc = [&](int k, int v) {
        std::vector<int> star;
        for (int id : surf[k])
            if (std::count(tris[id].v.begin(), tris[id].v.end(), v)) star.push_back(id);
        if (star.empty()) return false;
        std::map<int, std::vector<int>> slot;  // edge through v -> star triangles
        for (int id : star)
            for (int j = 0; j < 3; ++j)
                if (tris[id].v[j] == v || tris[id].v[(j + 1) % 3] == v)
                    slot[static_cast<int>(tris[id].e[j])].push_back(id);
        for (size_t di = 0; di < digons.size(); ++di) {
            const auto& d = digons[di];
            if (pillow[di] || (d.u0 != v && d.u1 != v)) continue;
            auto &s1 = slot[d.e1], &s2 = slot[d.e2];
            for (int id : s2) s1.push_back(id);
            s2 = s1;
        }
        std::map<int, int> comp;
        std::function<int(int)> root = [&](int x) {
            auto it = comp.find(x);
            if (it == comp.end() || it->second == x) return comp[x] = x;
            return comp[x] = root(it->second);
        };
        for (auto& [e, ids] : slot)
            for (size_t j = 1; j < ids.size(); ++j) comp[root(ids[0])] = root(ids[j]);
        for (int id : star)
            if (root(id) != root(star[0])) return false;
        // Degenerate remnant: the star covers the whole boundary and there
        // is nothing to cone at all.
        if (star.size() == surf[k].size()) return true;
        // Otherwise the boundary of the star must be a simple cycle, or
        // the complement of the star is pinched and the cone falls apart.
        std::map<int, int> bnd;
        for (int id : star)
            for (int j = 0; j < 3; ++j)
                if (tris[id].v[j] != v && tris[id].v[(j + 1) % 3] != v) {
                    ++bnd[tris[id].v[j]];
                    ++bnd[tris[id].v[(j + 1) % 3]];
                }
        for (auto [bv, n] : bnd)
            if (n != 2) return false;
        return true;
    };
    std::array<int, 2> w{-1, -1};
    for (int k = 0; k < 2; ++k) {
        std::map<int, int> inc;
        std::set<int> banned;
        for (size_t di = 0; di < digons.size(); ++di)
            if (pillow[di]) banned.insert({digons[di].u0, digons[di].u1});
        for (int id : surf[k]) {
            std::set<int> seen;
            for (int v : tris[id].v)
                if (!seen.insert(v).second) banned.insert(v);
            for (int v : seen) ++inc[v];
        }
        int bestn = -1;
        for (auto [v, n] : inc)
            if (!banned.count(v) && n > bestn && star_is_disc(k, v)) bestn = n, w[k] = v;
        if (w[k] < 0) throw TriError("no admissible cone vertex for a remnant");
    }

    std::vector<std::array<int, 2>> cone(tris.size(), {-1, -1});  // cone tet per polyhedron
    std::vector<Wire> wires;
    for (int k = 0; k < 2; ++k)
        for (int id : surf[k]) {
            if (std::count(tris[id].v.begin(), tris[id].v.end(), w[k])) continue;
            cone[id][k] = tri.add_tet();  // (w, v0, v1, v2)
            Wire wr;
            wr.a = {-1, cone[id][k], 0, {1, 2, 3}};
            wr.b = {id, -1, -1, {0, 1, 2}};
            wires.push_back(wr);
        }

    // One end of a dihedral wire at edge slot (id, j) of surface k.  Wire
    // spots 0 and 1 sit at the vertices a0 and a1 of the edge, spot 2 at
    // the cone apex: a cone side face when the triangle has a cone tet,
    // otherwise the triangle itself as a chain token.
    auto end_of = [&](int k, int id, int j, int a0, int a1) -> WEnd {
        const RTri& t = tris[id];
        int s0 = -1, s1 = -1;
        for (int s : {j, (j + 1) % 3}) {
            if (t.v[s] == a0) s0 = s;
            if (t.v[s] == a1) s1 = s;
        }
        if (s0 < 0 || s1 < 0 || s0 == s1)
            throw TriError("remnant boundary edge endpoint mismatch");
        if (cone[id][k] >= 0) return {-1, cone[id][k], 3 - s0 - s1 + 1, {s0 + 1, s1 + 1, 0}};
        if (t.v[3 - s0 - s1] != w[k]) throw TriError("remnant cone face mismatch");
        return {id, -1, -1, {s0, s1, 3 - s0 - s1}};
    };

    // Dihedral gluings within each remnant, across boundary edges with two
    // sides in that surface.  Edges through the apex close up on their own.
    std::array<std::map<int, std::vector<std::pair<int, int>>>, 2> by_edge;
    for (int k = 0; k < 2; ++k)
        for (int id : surf[k])
            for (int j = 0; j < 3; ++j)
                by_edge[k][static_cast<int>(tris[id].e[j])].emplace_back(id, j);
    std::set<int> digon_edges;
    for (const auto& d : digons) digon_edges.insert({d.e1, d.e2});
    for (int k = 0; k < 2; ++k)
        for (auto& [e, inc2] : by_edge[k]) {
            if (inc2.size() == 1 && digon_edges.count(e)) continue;  // handled below
            if (inc2.size() != 2) throw TriError("remnant boundary edge without two sides");
            auto [idA, jA] = inc2[0];
            auto [idB, jB] = inc2[1];
            int a0 = tris[idA].v[jA], a1 = tris[idA].v[(jA + 1) % 3];
            if (!(tris[idB].v[jB] == a1 && tris[idB].v[(jB + 1) % 3] == a0))
                throw TriError("remnant boundary edge orientation mismatch");
            if (a0 == w[k] || a1 == w[k]) continue;
            Wire wr;
            wr.a = end_of(k, idA, jA, a0, a1);
            wr.b = end_of(k, idB, jB, a0, a1);
            wires.push_back(wr);
        }

    // A squashable digon folds onto a single edge; its two former edges
    // become one, and on each remnant side the faces that used to flank the
    // digon fold onto each other.  When a remnant's apex is a digon corner
    // the flanking faces there meet along the apex fan already and nothing
    // needs to be glued on that side.  A surviving digon instead becomes an
    // internal wall: a two-tetrahedron pillow whose four outer faces glue
    // to the flanks on both remnant sides, keeping the two edges distinct.
    for (size_t di = 0; di < digons.size(); ++di) {
        const auto& d = digons[di];
        auto single = [&](int k, int e) {
            auto& v = by_edge[k][e];
            if (v.size() != 1) throw TriError("squashed digon edge is not free");
            return v[0];
        };
        auto flank = [&](int k, int e) {
            auto [id, j] = single(k, e);
            int a0 = tris[id].v[j], a1 = tris[id].v[(j + 1) % 3];
            return std::tuple<WEnd, int, int>(end_of(k, id, j, a0, a1), a0, a1);
        };
        if (pillow[di]) {
            int ta = tri.add_tet();  // (x0, u0, u1, x1)
            int tb = tri.add_tet();  // (x0, u1, u0, x1)
            tri.glue(ta, 1, tb, Perm4(0, 2, 1, 3));
            tri.glue(ta, 2, tb, Perm4(0, 2, 1, 3));
            for (int k = 0; k < 2; ++k) {
                // Remnant k meets the wall at face 3 (k = 0, apex spot at
                // label 0) or face 0 (k = 1, apex spot at label 3).
                int face = k == 0 ? 3 : 0, apex_lbl = k == 0 ? 0 : 3;
                for (int which = 0; which < 2; ++which) {
                    int t = which == 0 ? ta : tb;
                    int e = which == 0 ? d.e1 : d.e2;
                    int head = which == 0 ? d.u0 : d.u1;  // label 1 of t
                    auto [end, a0, a1] = flank(k, e);
                    Wire wr;
                    wr.a = end;
                    wr.b = {-1, t, face,
                            {a0 == head ? 1 : 2, a1 == head ? 1 : 2, apex_lbl}};
                    if (wr.b.m[0] == wr.b.m[1])
                        throw TriError("digon wall corner mismatch");
                    wires.push_back(wr);
                }
            }
            continue;
        }
        for (int k = 0; k < 2; ++k) {
            if (w[k] == d.u0 || w[k] == d.u1) continue;
            auto [endA, a0, a1] = flank(k, d.e1);
            auto [idB, jB] = single(k, d.e2);
            if (!(tris[idB].v[jB] == a1 && tris[idB].v[(jB + 1) % 3] == a0))
                throw TriError("folded digon orientation mismatch");
            Wire wr;
            wr.a = endA;
            wr.b = end_of(k, idB, jB, a0, a1);
            wires.push_back(wr);
        }
    }
    // Exterior wires: pyramid bases behind base triangles, and the white
    // interface between the two remnants.
    for (int id = 0; id < static_cast<int>(tris.size()); ++id) {
        const RTri& t = tris[id];
        if (!t.is_base) continue;
        Wire wr;
        wr.a = {-1, t.outer_tet, t.outer_face, t.outer_lbl};
        wr.b = {id, -1, -1, {0, 1, 2}};
        wires.push_back(wr);
    }

    // Every token (triangle) now has exactly two wire ends; chains between
    // concrete ends yield the face gluings.
    std::vector<std::vector<std::pair<int, int>>> at_token(tris.size());  // (wire, end)
    for (int wi = 0; wi < static_cast<int>(wires.size()); ++wi) {
        if (wires[wi].a.token >= 0) at_token[wires[wi].a.token].emplace_back(wi, 0);
        if (wires[wi].b.token >= 0) at_token[wires[wi].b.token].emplace_back(wi, 1);
    }
    for (int id = 0; id < static_cast<int>(tris.size()); ++id)
        if (!at_token[id].empty() && at_token[id].size() != 2)
            throw TriError("remnant face with unexpected covering count");

    auto other_end = [&](int wi, int e) -> const WEnd& {
        return e == 0 ? wires[wi].b : wires[wi].a;
    };
    auto end_ref = [&](int wi, int e) -> const WEnd& {
        return e == 0 ? wires[wi].a : wires[wi].b;
    };
    for (int wi = 0; wi < static_cast<int>(wires.size()); ++wi) {
        for (int side = 0; side < 2; ++side) {
            if (wires[wi].used || end_ref(wi, side).token >= 0) continue;
            // Walk the chain starting from this concrete end.
            wires[wi].used = true;
            const WEnd* cur = &end_ref(wi, side);
            int stet = cur->tet, sface = cur->face;
            std::array<int, 3> spot_lbl = cur->m;  // spot -> source label
            const WEnd* nxt = &other_end(wi, side);
            int guard = 0;
            while (nxt->token >= 0) {
                if (++guard > 1000) throw TriError("remnant gluing chain does not terminate");
                int tok = nxt->token;
                std::array<int, 3> pos_lbl{};  // token corner position -> source label
                for (int s = 0; s < 3; ++s) pos_lbl[nxt->m[s]] = spot_lbl[s];
                // Continue through the other wire at this token.
                auto [w1, e1] = at_token[tok][0];
                auto [w2, e2] = at_token[tok][1];
                int nwi, nend;
                if (!wires[w1].used) nwi = w1, nend = e1;
                else if (!wires[w2].used) nwi = w2, nend = e2;
                else throw TriError("remnant gluing chain revisits a face");
                wires[nwi].used = true;
                const WEnd& here = end_ref(nwi, nend);
                for (int s = 0; s < 3; ++s) spot_lbl[s] = pos_lbl[here.m[s]];
                nxt = &other_end(nwi, nend);
            }
            // Glue source slot to destination slot.
            int p[4] = {-1, -1, -1, -1};
            for (int s = 0; s < 3; ++s) p[spot_lbl[s]] = nxt->m[s];
            p[sface] = nxt->face;
            tri.glue(stet, sface, nxt->tet, Perm4(p[0], p[1], p[2], p[3]));
        }
    }

    tri.check_valid();
    if (!tri.is_closed()) throw TriError("augmented-link triangulation is not closed");
    if (tri.size() > 2 * (6 * c - 4)) throw TriError("tetrahedron bound exceeded");
    return ft;
}

// ---------------------------------------------------------------------
// Prism adjustment.

namespace {

// Composes the former base gluing g (labels 1,2,3 = rectangle corners,
// g[0] = exterior face) with a corner assignment of a new face:
// spots s = 0,1,2 are the rectangle corners in base order, lbl[s] the new
// tetrahedron's labels, face the new tetrahedron's face.
Perm4 reattach(const Gluing& g, std::array<int, 3> corner, std::array<int, 3> lbl, int face) {
    int p[4] = {-1, -1, -1, -1};
    for (int s = 0; s < 3; ++s) p[lbl[s]] = g.perm[corner[s]];
    p[face] = g.perm[0];
    return Perm4(p[0], p[1], p[2], p[3]);
}

// Triangulated prism over the hole left by the four pyramid tetrahedra,
// base and top identified, plus two tetrahedra over the cap from a new
// ideal vertex u.  Returns {p1, p2, p3, f1, f2}.
// Pt1 = (b1,b2,b3,t1), Pt2 = (b2,b3,t1,t2), Pt3 = (b3,t1,t2,t3),
// f1 = (u,b1,b3,t1), f2 = (u,b3,t1,t3).
std::array<int, 5> attach_prism(Triangulation& tri, const std::array<Gluing, 4>& g) {
    int p1 = tri.add_tet(), p2 = tri.add_tet(), p3 = tri.add_tet();
    int f1 = tri.add_tet(), f2 = tri.add_tet();
    tri.glue(p1, 0, p2, Perm4(3, 0, 1, 2));
    tri.glue(p2, 0, p3, Perm4(3, 0, 1, 2));
    // Base-to-top identification b_k -> t_k: the new hat face.
    tri.glue(p1, 3, p3, Perm4(1, 2, 3, 0));
    // Side rectangles onto the former pyramid bases.
    // (b1,b2,t2,t1) -> (n2,n1,n4,n3); (b2,b3,t3,t2) -> (m1,m2,m3,m4).
    tri.glue(p1, 2, g[0].tet, reattach(g[0], {2, 1, 3}, {0, 1, 3}, 2));  // (b1,b2,t1)->(n2,n1,n3)
    tri.glue(p2, 1, g[1].tet, reattach(g[1], {1, 2, 3}, {0, 2, 3}, 1));  // (b2,t1,t2)->(n1,n3,n4)
    tri.glue(p2, 2, g[3].tet, reattach(g[3], {3, 1, 2}, {0, 1, 3}, 2));  // (b2,b3,t2)->(m1,m2,m4)
    tri.glue(p3, 1, g[2].tet, reattach(g[2], {1, 2, 3}, {0, 3, 2}, 1));  // (b3,t3,t2)->(m2,m3,m4)
    // Cusp tetrahedra over the cap square (b3,b1,t1,t3).
    tri.glue(f1, 0, p1, Perm4(1, 0, 2, 3));
    tri.glue(f2, 0, p3, Perm4(2, 0, 1, 3));
    tri.glue(f1, 1, f2, Perm4(0, 3, 1, 2));  // (u,b3,t1) -> (u,b3,t1)
    tri.glue(f1, 3, f2, Perm4(0, 2, 3, 1));  // (u,b1,b3) -> (u,t1,t3)
    tri.glue(f1, 2, f2, Perm4(0, 1, 2, 3));  // (u,b1,t1) -> (u,b3,t3)
    return {p1, p2, p3, f1, f2};
}

// Renames the vertices of one tetrahedron: vertex v becomes s[v].  All
// gluings (including self-gluings) are rewired to match.
void relabel_tet(Triangulation& tri, int t, const Perm4& s) {
    std::array<Gluing, 4> old;
    for (int f = 0; f < 4; ++f) {
        old[f] = tri.gluing(t, f);
        if (old[f].glued()) tri.unglue(t, f);
    }
    Perm4 sinv = s.inverse();
    for (int f = 0; f < 4; ++f) {
        if (!old[f].glued()) continue;
        if (tri.gluing(t, s[f]).glued()) continue;  // self-gluing pair done
        Perm4 p = old[f].perm * sinv;
        if (old[f].tet == t) p = s * p;
        tri.glue(t, s[f], old[f].tet, p);
    }
}

// The candidate test used by the half-twist rebuild: a closed, connected,
// orientable complex in which the rebuilt region (the listed block of
// tetrahedra) carries exactly one vertex class with two corners, both
// inside the block, with torus link -- the rebuilt crossing-circle cusp --
// plus a hat face whose tip avoids that class.  Hat faces inside the block
// are preferred; faces on protected tetrahedra or on the new cusp pair
// (removed later by the filling) are never used.  Other circles\' cusps
// elsewhere in the complex are ignored.  Fills in cusp/hat on success.
bool half_rebuild_ok(Triangulation& tri, const std::vector<int>& block_tets,
                     const std::vector<char>& protect,
                     std::array<int, 2>* cusp, std::array<int, 2>* cusp_lbl,
                     HatFace* hat) {
    if (!tri.is_closed()) return false;
    std::vector<char> inblock(tri.size(), 0);
    for (int t : block_tets)
        if (t >= 0 && t < tri.size()) inblock[t] = 1;
    Skeleton sk = compute_skeleton(tri);
    if (!sk.connected || !sk.orientable) return false;
    std::vector<int> corners(sk.vertices, 0);
    for (int t = 0; t < tri.size(); ++t)
        for (int v = 0; v < 4; ++v) ++corners[sk.vclass(t, v)];
    std::vector<char> allin(sk.vertices, 1);
    for (int t = 0; t < tri.size(); ++t)
        if (!inblock[t])
            for (int v = 0; v < 4; ++v) allin[sk.vclass(t, v)] = 0;
    int ucls = -1;
    for (int cls = 0; cls < sk.vertices; ++cls) {
        if (corners[cls] != 2 || !allin[cls]) continue;
        if (!vertex_link(tri, sk, cls).is_torus()) continue;
        if (ucls >= 0) return false;  // ambiguous: refuse
        ucls = cls;
    }
    if (ucls < 0) return false;
    int c0 = -1, c1 = -1, l0 = -1, l1 = -1;
    for (int t = 0; t < tri.size(); ++t)
        for (int v = 0; v < 4; ++v)
            if (sk.vclass(t, v) == ucls) {
                (c0 < 0 ? c0 : c1) = t;
                (l0 < 0 ? l0 : l1) = v;
            }
    if (c0 == c1) return false;  // both corners in one tetrahedron
    std::vector<int> order(block_tets);
    for (int t = 0; t < tri.size(); ++t)
        if (!inblock[t]) order.push_back(t);
    for (int t : order) {
        if (t == c0 || t == c1) continue;
        if (t < static_cast<int>(protect.size()) && protect[t]) continue;
        for (int f = 0; f < 4; ++f)
            for (int tip = 0; tip < 4; ++tip) {
                if (tip == f) continue;
                int a = -1, b = -1;
                for (int v = 0; v < 4; ++v)
                    if (v != f && v != tip) (a < 0 ? a : b) = v;
                if (sk.eclass(t, a, tip) != sk.eclass(t, b, tip) ||
                    sk.esign(t, a, tip) != sk.esign(t, b, tip))
                    continue;
                if (sk.vclass(t, tip) == ucls) continue;
                if (tri.dest(t, f).tet == t) continue;
                if (cusp) *cusp = {c0, c1};
                if (cusp_lbl) *cusp_lbl = {l0, l1};
                if (hat) {
                    hat->tet = t;
                    hat->face = f;
                    hat->tip = tip;
                }
                return true;
            }
    }
    return false;
}

// Bounded search for a rebuild of the prism region that sheds one
// tetrahedron: sequences of at most three bistellar moves anchored at the
// freshly attached block.  Deterministic (fixed iteration order, first
// acceptable result wins).
bool half_simplify(Triangulation& tri, const std::array<int, 5>& prism,
                   const std::vector<char>& protect, std::vector<int>* final_remap,
                   std::array<int, 2>* cusp, std::array<int, 2>* cusp_lbl,
                   HatFace* hat) {
    int target = tri.size() - 1;
    std::set<std::string> seen;
    long nodes = 0;
    auto hash = [](const Triangulation& t) {
        std::string h;
        for (int i = 0; i < t.size(); ++i)
            for (int f = 0; f < 4; ++f) {
                Gluing g = t.gluing(i, f);
                h += static_cast<char>(g.glued() ? g.tet + 1 : 0);
                h += static_cast<char>(g.glued() ? g.perm[0] * 64 + g.perm[1] * 16 +
                                                       g.perm[2] * 4 + g.perm[3]
                                                 : 255);
            }
        return h;
    };
    // Compose the cumulative original-index -> current-index map with one
    // move's remap; reject moves that consume a protected tetrahedron
    // (one referenced by another circle's bookkeeping or a recorded hat).
    auto advance = [&](const std::vector<int>& cum, const std::vector<char>& prot,
                       const std::vector<int>& mv, int newsize, std::vector<int>& ncum,
                       std::vector<char>& nprot) -> bool {
        for (size_t x = 0; x < prot.size(); ++x)
            if (prot[x] && mv[x] < 0) return false;
        ncum.assign(cum.size(), -1);
        for (size_t i = 0; i < cum.size(); ++i)
            if (cum[i] >= 0) ncum[i] = mv[cum[i]];
        nprot.assign(newsize, 0);
        for (size_t x = 0; x < prot.size(); ++x)
            if (prot[x] && mv[x] >= 0) nprot[mv[x]] = 1;
        return true;
    };
    std::function<bool(const Triangulation&, const std::vector<int>&,
                       const std::vector<char>&, const std::vector<int>&, int)>
        dfs = [&](const Triangulation& cur, const std::vector<int>& block,
                  const std::vector<char>& prot, const std::vector<int>& cum,
                  int depth) -> bool {
        if (++nodes > 2000000) return false;
        if (cur.size() == target) {
            Triangulation cand = cur;
            if (half_rebuild_ok(cand, block, prot, cusp, cusp_lbl, hat)) {
                tri = cand;
                if (final_remap) *final_remap = cum;
                return true;
            }
        }
        if (depth == 0) return false;
        std::set<int> bs(block.begin(), block.end());
        for (int t : block)
            for (int f = 0; f < 4; ++f) {
                Gluing g = cur.gluing(t, f);
                if (!g.glued() || g.tet == t) continue;
                if (bs.count(g.tet) && g.tet < t) continue;
                Triangulation nt = cur;
                std::array<int, 3> out{};
                std::vector<int> remap;
                if (!move_23(nt, t, f, &out, &remap)) continue;
                std::vector<int> ncum;
                std::vector<char> nprot;
                if (!advance(cum, prot, remap, nt.size(), ncum, nprot)) continue;
                if (!seen.insert(hash(nt)).second) continue;
                std::vector<int> nb;
                for (int x : block)
                    if (remap[x] >= 0) nb.push_back(remap[x]);
                nb.insert(nb.end(), out.begin(), out.end());
                std::sort(nb.begin(), nb.end());
                nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
                if (dfs(nt, nb, nprot, ncum, depth - 1)) return true;
            }
        for (int t : block)
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) {
                    Triangulation nt = cur;
                    std::array<int, 2> out{};
                    std::vector<int> remap;
                    if (!move_32(nt, t, a, b, &out, &remap)) continue;
                    std::vector<int> ncum;
                    std::vector<char> nprot;
                    if (!advance(cum, prot, remap, nt.size(), ncum, nprot)) continue;
                    if (!seen.insert(hash(nt)).second) continue;
                    std::vector<int> nb;
                    for (int x : block)
                        if (remap[x] >= 0) nb.push_back(remap[x]);
                    nb.insert(nb.end(), out.begin(), out.end());
                    std::sort(nb.begin(), nb.end());
                    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
                    if (dfs(nt, nb, nprot, ncum, depth - 1)) return true;
                }
        return false;
    };
    std::vector<int> block(prism.begin(), prism.end());
    std::vector<int> ident(tri.size());
    for (size_t i = 0; i < ident.size(); ++i) ident[i] = static_cast<int>(i);
    std::vector<char> prot = protect;
    prot.resize(tri.size(), 0);
    for (int depth = 3; depth <= 5; ++depth) {
        nodes = 0;
        seen.clear();
        if (dfs(tri, block, prot, ident, depth)) return true;
    }
    return false;
}

}  // namespace

void apply_remap(FALTriangulation& ft, const std::vector<int>& remap) {
    for (auto& m : ft.cusps) {
        for (int& t : m.pyramid)
            if (t >= 0) t = remap[t];
        for (int& t : m.cusp_tet)
            if (t >= 0) t = remap[t];
    }
    for (auto& h : ft.hats)
        if (h.tet >= 0) h.tet = remap[h.tet];
}

HatFace prism_adjust(FALTriangulation& ft, int circle) {
    if (circle < 0 || circle >= static_cast<int>(ft.cusps.size()))
        throw TriError("prism_adjust: no such circle");
    CuspMarking& M = ft.cusps[circle];
    if (M.adjusted || M.filled) throw TriError("prism_adjust: circle already processed");
    Triangulation& tri = ft.tri;

    // Precondition: the cusp meets exactly the four pyramid tetrahedra,
    // circle vertex at label 0.
    {
        Skeleton sk = compute_skeleton(tri);
        int cls = sk.vclass(M.pyramid[0], 0);
        int cnt = 0;
        for (int t = 0; t < tri.size(); ++t)
            for (int v = 0; v < 4; ++v)
                if (sk.vclass(t, v) == cls) ++cnt;
        if (cnt != 4) throw TriError("prism_adjust: cusp does not meet exactly four corners");
        for (int k = 0; k < 4; ++k)
            if (sk.vclass(M.pyramid[k], 0) != cls)
                throw TriError("prism_adjust: pyramid tetrahedra out of place");
    }

    // Everything below edits the complex in place; restore the original
    // state if any stage fails so a caller can observe the failure without
    // being left with a half-rebuilt complex.
    struct Restore {
        FALTriangulation& ft;
        Triangulation tri;
        std::vector<CuspMarking> cusps;
        std::vector<HatFace> hats;
        bool armed = true;
        explicit Restore(FALTriangulation& f)
            : ft(f), tri(f.tri), cusps(f.cusps), hats(f.hats) {}
        ~Restore() {
            if (!armed) return;
            ft.tri = std::move(tri);
            ft.cusps = std::move(cusps);
            ft.hats = std::move(hats);
        }
    } restore(ft);

    // Record the exterior gluings behind the four pyramid bases.
    std::array<Gluing, 4> g;
    for (int k = 0; k < 4; ++k) {
        g[k] = tri.gluing(M.pyramid[k], 0);
        if (!g[k].glued()) throw TriError("prism_adjust: open pyramid base");
        for (int j = 0; j < 4; ++j)
            if (g[k].tet == M.pyramid[j])
                throw TriError("prism_adjust: pyramid base glued to the cusp itself");
    }

    std::vector<int> remap = tri.remove_tets(
        {M.pyramid[0], M.pyramid[1], M.pyramid[2], M.pyramid[3]});
    for (auto& gl : g) gl.tet = remap[gl.tet];
    apply_remap(ft, remap);
    M.pyramid = {-1, -1, -1, -1};

    HatFace hat;
    if (!M.half_twist) {
        auto blk = attach_prism(tri, g);
        M.cusp_tet = {blk[3], blk[4]};
        // Slope labels, indexed by the side faces 1,2,3 of the first cusp
        // tetrahedron (calibrated against the family homology oracles).
        M.slope = {{{1, 1}, {1, 0}, {0, 1}}};
        hat.tet = blk[0];
        hat.face = 3;
        hat.tip = 1;  // b2
    } else {
        // Half twist: the region is rebuilt with no net change in the
        // tetrahedron count.  The half twist is realised by re-routing the
        // four base attachments before the block goes back in: two of the
        // bases swap destinations and the outer two pick up a rotation of
        // their corner labels.  With the re-routed gluings the usual prism
        // attaches as in the untwisted case; a short sequence of bistellar
        // moves then sheds one tetrahedron again.
        if (M.twist_sign != 1 && M.twist_sign != -1)
            throw TriError("prism_adjust: half-twisted circle without a handedness");
        // Tetrahedra recorded by other circles or previous hats must
        // survive the bistellar search untouched.
        std::vector<char> protect(tri.size(), 0);
        for (const auto& other : ft.cusps) {
            if (&other == &M) continue;
            for (int t : other.pyramid)
                if (t >= 0) protect[t] = 1;
            for (int t : other.cusp_tet)
                if (t >= 0) protect[t] = 1;
        }
        for (const auto& h : ft.hats)
            if (h.tet >= 0) protect[h.tet] = 1;
        std::array<int, 2> cusp{}, clbl{};
        std::array<Gluing, 4> gs = {
            Gluing{g[0].tet, g[0].perm * Perm4(0, 2, 1, 3)},
            g[2],
            g[1],
            Gluing{g[3].tet, g[3].perm * Perm4(0, 3, 2, 1)}};
        auto blk = attach_prism(tri, gs);
        std::vector<int> simp_remap;
        bool rebuilt = half_simplify(tri, blk, protect, &simp_remap, &cusp, &clbl, &hat);
        if (!rebuilt) throw TriError("prism_adjust: no half-twist rebuild found");
        apply_remap(ft, simp_remap);
        // Normalise: cusp vertex at label 0 of both cusp tetrahedra.
        for (int i = 0; i < 2; ++i) {
            if (clbl[i] == 0) continue;
            int p[4] = {0, 1, 2, 3};
            std::swap(p[0], p[clbl[i]]);
            Perm4 s(p[0], p[1], p[2], p[3]);
            relabel_tet(tri, cusp[i], s);
            if (hat.tet == cusp[i]) {
                hat.face = s[hat.face];
                hat.tip = s[hat.tip];
            }
        }
        M.cusp_tet = {cusp[0], cusp[1]};
        // The retained crossing keeps the handedness of the source twist
        // region, which flips the diagonal boundary label (calibrated
        // against the family homology oracles).
        M.slope = {{{1, 0}, {-M.twist_sign, 1}, {0, 1}}};
    }

    tri.check_valid();
    Skeleton sk = compute_skeleton(tri);
    if (!sk.orientable || !sk.connected)
        throw TriError("prism_adjust: complex no longer orientable/connected");
    // New cusp: the link of u must be a torus met by exactly two corners.
    {
        int cls = sk.vclass(M.cusp_tet[0], 0);
        if (sk.vclass(M.cusp_tet[1], 0) != cls)
            throw TriError("prism_adjust: cusp tetrahedra disagree on the cusp vertex");
        int cnt = 0;
        for (int t = 0; t < tri.size(); ++t)
            for (int v = 0; v < 4; ++v)
                if (sk.vclass(t, v) == cls) ++cnt;
        if (cnt != 2) throw TriError("prism_adjust: new cusp corner count is not two");
        if (!vertex_link(tri, sk, cls).is_torus())
            throw TriError("prism_adjust: new cusp link is not a torus");
    }
    // Hat condition: the two side edges of the hat face, oriented toward
    // the tip, lie in one edge class compatibly.
    {
        int a = -1, b = -1;
        for (int v = 0; v < 4; ++v)
            if (v != hat.face && v != hat.tip) (a < 0 ? a : b) = v;
        if (sk.eclass(hat.tet, a, hat.tip) != sk.eclass(hat.tet, b, hat.tip) ||
            sk.esign(hat.tet, a, hat.tip) != sk.esign(hat.tet, b, hat.tip))
            throw TriError("prism_adjust: hat edges are not identified tip-to-tip");
        hat.cusp = sk.vclass(hat.tet, hat.tip);
        FacePointer o = tri.dest(hat.tet, hat.face);
        hat.eligible = (o.tet != hat.tet);
    }
    M.adjusted = true;
    ft.hats.push_back(hat);
    restore.armed = false;
    return hat;
}

}  // namespace htri
