#include "htri/isosig.hpp"

#include <algorithm>

namespace htri {

namespace {

// Face tokens of a canonical breadth-first encoding.  Flattened so that
// lexicographic comparison over the int sequence is unambiguous (every
// token starts with its type).
constexpr int kBoundary = 0;
constexpr int kNew = 1;
constexpr int kSeen = 2;

std::vector<int> encode_from(const Triangulation& tri, int start, const Perm4& p0) {
    const int n = tri.size();
    std::vector<int> canon_of(n, -1), orig_of(n, -1);
    std::vector<Perm4> sigma(n);
    canon_of[start] = 0;
    orig_of[0] = start;
    sigma[start] = p0;
    int discovered = 1;
    std::vector<int> seq;
    seq.reserve(n * 6);
    for (int k = 0; k < discovered; ++k) {
        int t = orig_of[k];
        Perm4 si = sigma[t];
        Perm4 si_inv = si.inverse();
        for (int phi = 0; phi < 4; ++phi) {
            int f = si_inv[phi];
            const Gluing& g = tri.gluing(t, f);
            if (!g.glued()) {
                seq.push_back(kBoundary);
                continue;
            }
            int u = g.tet;
            if (canon_of[u] < 0) {
                // First visit: choose the destination labelling so that the
                // canonical gluing permutation is the identity.
                sigma[u] = si * g.perm.inverse();
                canon_of[u] = discovered;
                orig_of[discovered] = u;
                ++discovered;
                seq.push_back(kNew);
            } else {
                Perm4 cp = sigma[u] * g.perm * si_inv;
                seq.push_back(kSeen);
                seq.push_back(canon_of[u]);
                seq.push_back(cp.index());
            }
        }
    }
    // For disconnected complexes this encodes just the component of
    // `start`; the caller writes the component size in the header.
    return seq;
}

// 5 bits per character plus a continuation bit.
constexpr char kAlpha[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+-";

void put_uint(std::string& s, unsigned v) {
    do {
        unsigned chunk = v & 31u;
        v >>= 5;
        s += kAlpha[chunk | (v ? 32u : 0u)];
    } while (v);
}

unsigned get_uint(const std::string& s, size_t& pos) {
    unsigned v = 0;
    int shift = 0;
    while (true) {
        if (pos >= s.size()) throw TriError("iso signature: truncated");
        const char* p = std::find(kAlpha, kAlpha + 64, s[pos++]);
        if (p == kAlpha + 64) throw TriError("iso signature: bad character");
        unsigned d = static_cast<unsigned>(p - kAlpha);
        v |= (d & 31u) << shift;
        shift += 5;
        if (!(d & 32u)) return v;
    }
}

}  // namespace

std::string iso_signature(const Triangulation& tri) {
    tri.check_valid();
    const int n = tri.size();
    if (n == 0) return "A";
    // Components are encoded separately and concatenated in sorted order,
    // so the signature is well defined for disconnected complexes too.
    std::vector<char> used(n, 0);
    std::vector<std::string> parts;
    for (int seed = 0; seed < n; ++seed) {
        if (used[seed]) continue;
        // Collect the component.
        std::vector<int> comp{seed};
        used[seed] = 1;
        for (size_t i = 0; i < comp.size(); ++i)
            for (int f = 0; f < 4; ++f) {
                const Gluing& g = tri.gluing(comp[i], f);
                if (g.glued() && !used[g.tet]) {
                    used[g.tet] = 1;
                    comp.push_back(g.tet);
                }
            }
        std::vector<int> best;
        for (int start : comp)
            for (int pi = 0; pi < 24; ++pi) {
                std::vector<int> seq = encode_from(tri, start, Perm4::from_index(pi));
                if (best.empty() || seq < best) best = std::move(seq);
            }
        std::string s;
        put_uint(s, static_cast<unsigned>(comp.size()));
        for (size_t i = 0; i < best.size();) {
            switch (best[i]) {
                case kBoundary:
                    s += 'A' + 0;  // literal 0
                    ++i;
                    break;
                case kNew:
                    s += 'B';
                    ++i;
                    break;
                default:
                    s += 'C';
                    put_uint(s, static_cast<unsigned>(best[i + 1]));
                    put_uint(s, static_cast<unsigned>(best[i + 2]));
                    i += 3;
            }
        }
        parts.push_back(std::move(s));
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += '.';
        out += parts[i];
    }
    return out;
}

Triangulation from_iso_signature(const std::string& sig) {
    Triangulation tri;
    if (sig == "A") return tri;
    size_t pos = 0;
    while (pos < sig.size()) {
        size_t end = sig.find('.', pos);
        if (end == std::string::npos) end = sig.size();
        std::string part = sig.substr(pos, end - pos);
        pos = end + 1;

        size_t p = 0;
        unsigned n = get_uint(part, p);
        int base = tri.size();
        tri.add_tets(static_cast<int>(n));
        int discovered = 1;
        for (int k = 0; k < static_cast<int>(n); ++k)
            for (int phi = 0; phi < 4; ++phi) {
                if (p >= part.size()) throw TriError("iso signature: truncated part");
                char tok = part[p++];
                if (tok == 'A') continue;  // boundary
                if (tok == 'B') {
                    int dest = discovered++;
                    if (dest >= static_cast<int>(n)) throw TriError("iso signature: overflow");
                    tri.glue(base + k, phi, base + dest, Perm4());
                } else if (tok == 'C') {
                    int dest = static_cast<int>(get_uint(part, p));
                    Perm4 cp = Perm4::from_index(static_cast<int>(get_uint(part, p)));
                    if (dest < 0 || dest >= static_cast<int>(n)) throw TriError("iso signature: bad dest");
                    if (tri.gluing(base + k, phi).glued()) {
                        // Second encounter of an already-made gluing.
                        const Gluing& g = tri.gluing(base + k, phi);
                        if (g.tet != base + dest || !(g.perm == cp))
                            throw TriError("iso signature: inconsistent gluing");
                    } else {
                        tri.glue(base + k, phi, base + dest, cp);
                    }
                } else {
                    throw TriError("iso signature: bad token");
                }
            }
        if (discovered != static_cast<int>(n)) throw TriError("iso signature: not connected");
    }
    tri.check_valid();
    return tri;
}

Triangulation relabel(const Triangulation& tri, const std::vector<int>& order,
                      const std::vector<Perm4>& perms) {
    const int n = tri.size();
    if (static_cast<int>(order.size()) != n || static_cast<int>(perms.size()) != n)
        throw TriError("relabel: size mismatch");
    Triangulation out;
    out.add_tets(n);
    for (int t = 0; t < n; ++t)
        for (int f = 0; f < 4; ++f) {
            const Gluing& g = tri.gluing(t, f);
            if (!g.glued()) continue;
            int nt = order[t], nf = perms[t][f];
            if (out.gluing(nt, nf).glued()) continue;
            Perm4 np = perms[g.tet] * g.perm * perms[t].inverse();
            out.glue(nt, nf, order[g.tet], np);
        }
    out.check_valid();
    return out;
}

}  // namespace htri
