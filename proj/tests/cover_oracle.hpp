// Test-side oracle: first homology of every connected double cover of a
// complex, as a sorted multiset string.  For the complement of a knot,
// the unique connected double cover has H1 = Z plus the homology of the
// double branched cover, a cyclic group whose order is the knot
// determinant -- so this fingerprint pins down which knot a complement
// belongs to, independently of how the complex was built.
#pragma once

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "htri/homology.hpp"
#include "htri/skeleton.hpp"
#include "htri/triangulation.hpp"

namespace cover_oracle {

using namespace htri;

// One GF(2) variable per glued face pair.
inline std::map<std::pair<int, int>, int> face_vars(const Triangulation& tri) {
    std::map<std::pair<int, int>, int> fidx;
    int n = 0;
    for (int t = 0; t < tri.size(); ++t)
        for (int f = 0; f < 4; ++f) {
            auto g = tri.gluing(t, f);
            if (!g.glued()) continue;
            if (std::make_pair(t, f) <= std::make_pair(g.tet, g.perm[f])) {
                fidx[{t, f}] = n;
                fidx[{g.tet, g.perm[f]}] = n;
                ++n;
            }
        }
    return fidx;
}

// All nontrivial classes in H^1(complex; Z/2), each as a face-pair
// assignment: cocycle condition is even parity around every edge class
// (walked explicitly), modulo flipping all faces of one tetrahedron.
inline std::vector<std::vector<int>> cocycle_classes(const Triangulation& tri) {
    auto fidx = face_vars(tri);
    int n = 0;
    for (auto& kv : fidx) n = std::max(n, kv.second + 1);

    std::vector<std::vector<int>> rows;
    std::set<std::pair<int, std::pair<int, int>>> seen;
    for (int t0 = 0; t0 < tri.size(); ++t0)
        for (int a0 = 0; a0 < 4; ++a0)
            for (int b0 = a0 + 1; b0 < 4; ++b0) {
                if (seen.count({t0, {a0, b0}})) continue;
                std::vector<int> row(n, 0);
                int t = t0, a = a0, b = b0, f = -1;
                for (int v = 0; v < 4; ++v)
                    if (v != a && v != b) {
                        f = v;
                        break;
                    }
                int st = t, sa = a, sb = b, sf = f, guard = 0;
                do {
                    if (++guard > 100000) throw TriError("edge walk stuck");
                    seen.insert({t, {std::min(a, b), std::max(a, b)}});
                    auto g = tri.gluing(t, f);
                    if (!g.glued()) throw TriError("cover oracle needs a closed complex");
                    row[fidx.at({t, f})] ^= 1;
                    int nt = g.tet, na = g.perm[a], nb = g.perm[b], back = g.perm[f];
                    int nf = -1;
                    for (int v = 0; v < 4; ++v)
                        if (v != na && v != nb && v != back) nf = v;
                    t = nt;
                    a = na;
                    b = nb;
                    f = nf;
                } while (!(t == st && ((a == sa && b == sb) || (a == sb && b == sa)) && f == sf));
                rows.push_back(row);
            }

    // Solution space of the cocycle system.
    int m = static_cast<int>(rows.size());
    std::vector<std::vector<int>> R = rows;
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < n && r < m; ++c) {
        int p = -1;
        for (int i = r; i < m; ++i)
            if (R[i][c]) {
                p = i;
                break;
            }
        if (p < 0) continue;
        std::swap(R[r], R[p]);
        for (int i = 0; i < m; ++i)
            if (i != r && R[i][c])
                for (int j = 0; j < n; ++j) R[i][j] ^= R[r][j];
        pivot_col.push_back(c);
        ++r;
    }
    std::vector<int> is_piv(n, 0);
    for (int c : pivot_col) is_piv[c] = 1;
    std::vector<std::vector<int>> kernel;
    for (int c = 0; c < n; ++c) {
        if (is_piv[c]) continue;
        std::vector<int> v(n, 0);
        v[c] = 1;
        for (int i = 0; i < r; ++i)
            if (R[i][c]) v[pivot_col[i]] = 1;
        kernel.push_back(v);
    }

    // Quotient by coboundaries (flip all glued faces of one tetrahedron).
    std::vector<std::vector<int>> basis;
    std::vector<int> bpiv;
    auto reduce = [&](std::vector<int> v) {
        for (size_t i = 0; i < basis.size(); ++i)
            if (v[bpiv[i]])
                for (int j = 0; j < n; ++j) v[j] ^= basis[i][j];
        return v;
    };
    auto add_basis = [&](std::vector<int> v) {
        v = reduce(v);
        for (int c = 0; c < n; ++c)
            if (v[c]) {
                basis.push_back(v);
                bpiv.push_back(c);
                return true;
            }
        return false;
    };
    for (int t = 0; t < tri.size(); ++t) {
        std::vector<int> v(n, 0);
        for (int f = 0; f < 4; ++f)
            if (tri.gluing(t, f).glued()) v[fidx.at({t, f})] ^= 1;
        add_basis(v);
    }
    std::vector<std::vector<int>> quot;
    for (auto& v : kernel)
        if (add_basis(v)) quot.push_back(v);

    std::vector<std::vector<int>> out;
    int k = static_cast<int>(quot.size());
    if (k > 12) throw TriError("cover oracle: H^1(.;Z/2) too large");
    for (long msk = 1; msk < (1L << k); ++msk) {
        std::vector<int> v(n, 0);
        for (int i = 0; i < k; ++i)
            if ((msk >> i) & 1)
                for (int j = 0; j < n; ++j) v[j] ^= quot[i][j];
        out.push_back(v);
    }
    return out;
}

inline Triangulation double_cover(const Triangulation& tri, const std::vector<int>& eps,
                                  const std::map<std::pair<int, int>, int>& fidx) {
    Triangulation cov;
    int T = tri.size();
    cov.add_tets(2 * T);
    for (int t = 0; t < T; ++t)
        for (int f = 0; f < 4; ++f) {
            auto g = tri.gluing(t, f);
            if (!g.glued()) continue;
            int e = eps[fidx.at({t, f})];
            for (int s = 0; s < 2; ++s)
                if (!cov.gluing(t + s * T, f).glued())
                    cov.glue(t + s * T, f, g.tet + (s ^ e) * T, g.perm);
        }
    return cov;
}

// Sorted multiset of H1 over all double covers ("disc" for the
// disconnected ones).
inline std::string cover_signature(const Triangulation& tri) {
    auto classes = cocycle_classes(tri);
    auto fidx = face_vars(tri);
    std::multiset<std::string> items;
    for (auto& eps : classes) {
        Triangulation cov = double_cover(tri, eps, fidx);
        cov.check_valid();
        Skeleton csk = compute_skeleton(cov);
        std::ostringstream os;
        if (!csk.connected) {
            os << "disc";
        } else {
            AbelianGroup h = h1(cov, csk);
            os << "Z^" << h.rank;
            for (const auto& t : h.torsion) os << "+Z/" << t;
        }
        items.insert(os.str());
    }
    std::ostringstream os;
    for (auto& s : items) os << s << ";";
    return os.str();
}

}  // namespace cover_oracle
