#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "htri/perm4.hpp"

namespace htri {

struct TriError : std::runtime_error {
    explicit TriError(const std::string& msg) : std::runtime_error(msg) {}
};

// A face slot of a tetrahedron.  Face f is the face opposite vertex f.
struct FacePointer {
    int tet = -1;
    int face = -1;
    bool operator==(const FacePointer&) const = default;
    bool operator<(const FacePointer& o) const {
        return tet != o.tet ? tet < o.tet : face < o.face;
    }
};

struct Gluing {
    int tet = -1;   // destination tetrahedron, -1 when the slot is open
    Perm4 perm;     // vertex map (source labels -> destination labels)
    bool glued() const { return tet >= 0; }
};

// A generalised triangulation: a set of abstract tetrahedra with face
// slots glued in pairs by affine maps.  Two faces of one tetrahedron may
// be glued to each other, but a face is never glued to itself.
class Triangulation {
public:
    int add_tet() {
        glu_.emplace_back();
        return static_cast<int>(glu_.size()) - 1;
    }
    int add_tets(int n) {
        int first = static_cast<int>(glu_.size());
        glu_.resize(glu_.size() + n);
        return first;
    }

    int size() const { return static_cast<int>(glu_.size()); }
    bool empty() const { return glu_.empty(); }

    const Gluing& gluing(int tet, int face) const {
        check_slot(tet, face);
        return glu_[tet][face];
    }
    bool is_boundary(int tet, int face) const { return !gluing(tet, face).glued(); }

    FacePointer dest(int tet, int face) const {
        const Gluing& g = gluing(tet, face);
        if (!g.glued()) return {};
        return {g.tet, g.perm[face]};
    }

    // Glues face `face` of `tet` to tetrahedron `to` via `perm`; the
    // destination face is perm[face].  Both slots must be open.
    void glue(int tet, int face, int to, const Perm4& perm) {
        check_slot(tet, face);
        check_slot(to, 0);
        if (!perm.is_valid()) throw TriError("glue: invalid permutation");
        int dface = perm[face];
        if (tet == to && face == dface)
            throw TriError("glue: a face may not be glued to itself");
        if (glu_[tet][face].glued()) throw TriError("glue: source slot already glued");
        if (glu_[to][dface].glued()) throw TriError("glue: destination slot already glued");
        glu_[tet][face] = {to, perm};
        glu_[to][dface] = {tet, perm.inverse()};
    }

    // Opens both slots of a glued face; returns the former destination.
    Gluing unglue(int tet, int face) {
        check_slot(tet, face);
        Gluing g = glu_[tet][face];
        if (!g.glued()) throw TriError("unglue: slot is not glued");
        glu_[tet][face] = {};
        glu_[g.tet][g.perm[face]] = {};
        return g;
    }

    int boundary_face_count() const {
        int n = 0;
        for (const auto& t : glu_)
            for (const auto& g : t)
                if (!g.glued()) ++n;
        return n;
    }
    bool is_closed() const { return boundary_face_count() == 0; }

    // Removes the listed tetrahedra (any gluings onto them become open
    // slots) and returns the old-index -> new-index map, with -1 for
    // removed tetrahedra.
    std::vector<int> remove_tets(const std::vector<int>& ids) {
        std::vector<char> gone(glu_.size(), 0);
        for (int t : ids) {
            check_slot(t, 0);
            gone[t] = 1;
        }
        for (int t = 0; t < size(); ++t) {
            if (!gone[t]) continue;
            for (int f = 0; f < 4; ++f)
                if (glu_[t][f].glued()) unglue(t, f);
        }
        std::vector<int> remap(glu_.size(), -1);
        std::vector<std::array<Gluing, 4>> next;
        for (int t = 0; t < size(); ++t) {
            if (gone[t]) continue;
            remap[t] = static_cast<int>(next.size());
            next.push_back(glu_[t]);
        }
        for (auto& tet : next)
            for (auto& g : tet)
                if (g.glued()) g.tet = remap[g.tet];
        glu_ = std::move(next);
        return remap;
    }

    // Internal consistency: every gluing must be mirrored by its inverse.
    void check_valid() const {
        for (int t = 0; t < size(); ++t)
            for (int f = 0; f < 4; ++f) {
                const Gluing& g = glu_[t][f];
                if (!g.glued()) continue;
                if (!g.perm.is_valid()) throw TriError("check_valid: invalid permutation");
                if (g.tet < 0 || g.tet >= size()) throw TriError("check_valid: bad tet index");
                int df = g.perm[f];
                if (g.tet == t && df == f) throw TriError("check_valid: face glued to itself");
                const Gluing& back = glu_[g.tet][df];
                if (!back.glued() || back.tet != t || !(back.perm == g.perm.inverse()) || back.perm[df] != f)
                    throw TriError("check_valid: gluing is not an involution");
            }
    }

private:
    void check_slot(int tet, int face) const {
        if (tet < 0 || tet >= size()) throw TriError("tetrahedron index out of range");
        if (face < 0 || face > 3) throw TriError("face index out of range");
    }

    std::vector<std::array<Gluing, 4>> glu_;
};

// Edge numbering within a tetrahedron: edges 0..5 are the vertex pairs
// 01, 02, 03, 12, 13, 23 in that order.
inline constexpr int kEdgeV[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
inline constexpr int kEdgeIdx[4][4] = {
    {-1, 0, 1, 2}, {0, -1, 3, 4}, {1, 3, -1, 5}, {2, 4, 5, -1}};

inline int edge_index(int a, int b) { return kEdgeIdx[a][b]; }

// The two faces of a tetrahedron containing edge {a,b} are the faces
// opposite the other two vertices.
inline std::array<int, 2> faces_of_edge(int a, int b) {
    std::array<int, 2> r{};
    int k = 0;
    for (int v = 0; v < 4; ++v)
        if (v != a && v != b) r[k++] = v;
    return r;
}

}  // namespace htri
