#include "htri/subdivide.hpp"

namespace htri {

// Flag tetrahedra: for a permutation s of {0,1,2,3}, the flag (t, s) has
// vertices (original vertex s0, midpoint of edge s0s1, centre of the face
// s0s1s2, barycentre of t).  Walls between flags of one tetrahedron glue
// by the identity, as does the outer wall across an original face gluing.
Triangulation barycentric_subdivide(const Triangulation& tri,
                                    std::vector<EdgeMarker>* markers) {
    const int n = tri.size();
    Triangulation out;
    out.add_tets(n * 24);
    auto flag_id = [](int t, const Perm4& s) { return t * 24 + s.index(); };

    for (int t = 0; t < n; ++t)
        for (int si = 0; si < 24; ++si) {
            Perm4 s = Perm4::from_index(si);
            int self = flag_id(t, s);
            // Internal walls: swapping adjacent positions of the flag.
            for (int j = 0; j < 3; ++j) {
                Perm4 other = s * Perm4::transposition(j, j + 1);
                if (!out.gluing(self, j).glued())
                    out.glue(self, j, flag_id(t, other), Perm4());
            }
            // Outer wall: inside the original face opposite s[3].
            const Gluing& g = tri.gluing(t, s[3]);
            if (!g.glued()) continue;
            Perm4 other = g.perm * s;
            if (!out.gluing(self, 3).glued())
                out.glue(self, 3, flag_id(g.tet, other), Perm4());
        }
    out.check_valid();

    if (markers) {
        std::vector<EdgeMarker> next;
        next.reserve(markers->size() * 2);
        for (const EdgeMarker& m : *markers) {
            if (m.tet < 0 || m.tet >= n || m.a == m.b)
                throw TriError("barycentric_subdivide: bad marker");
            int c = -1, d = -1;
            for (int v = 0; v < 4; ++v)
                if (v != m.a && v != m.b) (c < 0 ? c : d) = v;
            // a -> midpoint, then midpoint -> b.
            next.push_back({flag_id(m.tet, Perm4(m.a, m.b, c, d)), 0, 1});
            next.push_back({flag_id(m.tet, Perm4(m.b, m.a, c, d)), 1, 0});
        }
        *markers = std::move(next);
    }
    return out;
}

}  // namespace htri
