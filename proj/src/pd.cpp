#include "htri/pd.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace htri {

namespace {

// Arc ends: for each arc label, the darts (4*crossing + slot) where it
// appears.  Every label must appear exactly twice.
std::map<int, std::vector<int>> arc_ends(const PDCode& pd) {
    std::map<int, std::vector<int>> ends;
    for (size_t c = 0; c < pd.crossings.size(); ++c)
        for (int s = 0; s < 4; ++s) ends[pd.crossings[c].arcs[s]].push_back(4 * static_cast<int>(c) + s);
    return ends;
}

}  // namespace

PDCode parse_pd(const std::string& text) {
    PDCode pd;
    std::istringstream in(text);
    std::string tok;
    while (in >> tok) {
        if (tok.size() < 2 || (tok[0] != 'X' && tok[0] != 'x'))
            throw KnotError(KnotErrorKind::Syntax, "expected X[a,b,c,d], got '" + tok + "'");
        if (tok[1] != '[' || tok.back() != ']')
            throw KnotError(KnotErrorKind::Syntax, "malformed tuple '" + tok + "'");
        std::string body = tok.substr(2, tok.size() - 3);
        for (char& ch : body)
            if (ch == ',') ch = ' ';
        std::istringstream nums(body);
        Crossing x;
        int k = 0, v;
        while (nums >> v) {
            if (k >= 4) throw KnotError(KnotErrorKind::Syntax, "tuple with more than 4 arcs");
            if (v <= 0) throw KnotError(KnotErrorKind::Syntax, "arc labels must be positive");
            x.arcs[k++] = v;
        }
        if (k != 4 || !nums.eof())
            throw KnotError(KnotErrorKind::Syntax, "tuple must hold exactly 4 arc labels");
        pd.crossings.push_back(x);
    }
    if (pd.crossings.empty()) throw KnotError(KnotErrorKind::Syntax, "no crossings");

    auto ends = arc_ends(pd);
    for (const auto& [label, ds] : ends)
        if (ds.size() != 2)
            throw KnotError(KnotErrorKind::ArcConsistency,
                            "arc " + std::to_string(label) + " appears " +
                                std::to_string(ds.size()) + " times");
    pd.arc_count = static_cast<int>(ends.size());

    // Strand components: arcs joined through crossings by slot pairs
    // (0,2) and (1,3).
    {
        std::map<int, int> comp;
        for (const auto& [label, ds] : ends) comp[label] = label;
        std::function<int(int)> find = [&](int x) {
            while (comp[x] != x) x = comp[x] = comp[comp[x]];
            return x;
        };
        for (const Crossing& x : pd.crossings) {
            comp[find(x.arcs[0])] = find(x.arcs[2]);
            comp[find(x.arcs[1])] = find(x.arcs[3]);
        }
        std::set<int> roots;
        for (const auto& [label, ds] : ends) roots.insert(find(label));
        if (roots.size() != 1)
            throw KnotError(KnotErrorKind::NotAKnot,
                            std::to_string(roots.size()) + " strand components");
    }

    // Orient the strand flow.  arrival[dart] = strand enters the crossing
    // at this slot.  Under-strand: slot 0 in, slot 2 out; over-strand:
    // slots 1 and 3 opposite; arc ends opposite each other.
    {
        const int n = static_cast<int>(pd.crossings.size());
        std::vector<int> arrival(4 * n, -1);
        for (int c = 0; c < n; ++c) {
            arrival[4 * c + 0] = 1;
            arrival[4 * c + 2] = 0;
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (int c = 0; c < n; ++c) {
                int a = arrival[4 * c + 1], b = arrival[4 * c + 3];
                if (a >= 0 && b < 0) { arrival[4 * c + 3] = 1 - a; changed = true; }
                if (b >= 0 && a < 0) { arrival[4 * c + 1] = 1 - b; changed = true; }
                if (a >= 0 && b >= 0 && a == b)
                    throw KnotError(KnotErrorKind::ArcConsistency, "inconsistent strand flow");
            }
            for (const auto& [label, ds] : ends) {
                int a = arrival[ds[0]], b = arrival[ds[1]];
                if (a >= 0 && b < 0) { arrival[ds[1]] = 1 - a; changed = true; }
                if (b >= 0 && a < 0) { arrival[ds[0]] = 1 - b; changed = true; }
                if (a >= 0 && b >= 0 && a == b)
                    throw KnotError(KnotErrorKind::ArcConsistency,
                                    "arc " + std::to_string(label) + " flows badly");
            }
        }
        for (int c = 0; c < n; ++c) {
            if (arrival[4 * c + 1] < 0)
                throw KnotError(KnotErrorKind::ArcConsistency, "undetermined strand flow");
            pd.crossings[c].sign = arrival[4 * c + 3] ? 1 : -1;
        }
    }
    return pd;
}

DiagramMap DiagramMap::from_pd(const PDCode& pd) {
    DiagramMap m;
    m.theta.assign(4 * pd.crossings.size(), -1);
    for (const auto& [label, ds] : arc_ends(pd)) {
        if (ds.size() != 2 || ds[0] == ds[1])
            throw KnotError(KnotErrorKind::ArcConsistency, "bad arc pairing");
        m.theta[ds[0]] = ds[1];
        m.theta[ds[1]] = ds[0];
    }
    return m;
}

std::vector<std::vector<int>> trace_faces(const DiagramMap& map) {
    const int n = map.darts();
    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> faces;
    for (int d0 = 0; d0 < n; ++d0) {
        if (seen[d0]) continue;
        std::vector<int> cyc;
        int d = d0;
        do {
            seen[d] = 1;
            cyc.push_back(d);
            d = DiagramMap::rot_next(map.theta[d]);
        } while (d != d0);
        faces.push_back(std::move(cyc));
    }
    long V = n / 4, E = n / 2, F = static_cast<long>(faces.size());
    if (V - E + F != 2)
        throw KnotError(KnotErrorKind::NonPlanar, "rotation system is not planar (V-E+F = " +
                                                      std::to_string(V - E + F) + ")");
    return faces;
}

std::vector<TwistRegion> detect_twist_regions(const PDCode& pd) {
    DiagramMap map = DiagramMap::from_pd(pd);
    auto faces = trace_faces(map);
    const int n = static_cast<int>(pd.crossings.size());

    // Bigon adjacency between distinct crossings.
    std::vector<std::set<int>> adj(n);
    for (const auto& f : faces) {
        if (f.size() != 2) continue;
        int c1 = f[0] / 4, c2 = f[1] / 4;
        if (c1 == c2) continue;  // kink-like; not a twist bigon
        adj[c1].insert(c2);
        adj[c2].insert(c1);
    }
    std::vector<TwistRegion> regions;
    std::vector<char> used(n, 0);
    for (int c = 0; c < n; ++c) {
        if (used[c]) continue;
        // Find a chain end (degree <= 1), else the chain is a cycle.
        int start = c;
        {
            std::set<int> walk_seen{start};
            int cur = start, prev = -1;
            while (adj[cur].size() == 2) {
                int nxt = -1;
                for (int x : adj[cur])
                    if (x != prev) nxt = x;
                if (nxt < 0 || walk_seen.count(nxt)) break;  // cycle
                walk_seen.insert(nxt);
                prev = cur;
                cur = nxt;
            }
            if (adj[cur].size() <= 1) start = cur;
        }
        TwistRegion r;
        int cur = start, prev = -1;
        while (cur >= 0 && !used[cur]) {
            used[cur] = 1;
            r.crossings.push_back(cur);
            int nxt = -1;
            for (int x : adj[cur])
                if (x != prev) nxt = x;
            prev = cur;
            cur = nxt;
        }
        r.cyclic = (cur >= 0 && cur == start && r.crossings.size() > 2);
        r.sign = pd.crossings[r.crossings.front()].sign;
        regions.push_back(std::move(r));
    }
    return regions;
}

TwistReducedReport check_twist_reduced(const PDCode& pd) {
    DiagramMap map = DiagramMap::from_pd(pd);
    auto faces = trace_faces(map);
    TwistReducedReport rep;

    for (const auto& f : faces)
        if (f.size() == 1) {
            rep.reduced = false;
            rep.witness_a = rep.witness_b = f[0] / 4;
            rep.reason = "monogon (reducible kink) at crossing " + std::to_string(f[0] / 4);
            return rep;
        }

    auto regions = detect_twist_regions(pd);
    std::vector<int> region_of(pd.crossings.size(), -1);
    for (size_t i = 0; i < regions.size(); ++i) {
        for (int c : regions[i].crossings) region_of[c] = static_cast<int>(i);
        for (int c : regions[i].crossings)
            if (pd.crossings[c].sign != regions[i].sign) {
                rep.reduced = false;
                rep.witness_a = regions[i].crossings.front();
                rep.witness_b = c;
                rep.reason = "bigon chain with mixed crossing signs (reducible clasp)";
                return rep;
            }
    }

    // face_at[4c+k] = face between darts k and k+1 of crossing c (the
    // quadrant after dart k, counterclockwise).
    std::vector<int> face_at(map.darts(), -1);
    for (size_t fi = 0; fi < faces.size(); ++fi)
        for (int d : faces[fi]) {
            // Dart d lies on this face; the quadrant it borders at its own
            // crossing is the one before d (between rot_prev(d) and d).
            int prev = (d & ~3) | ((d + 3) & 3);
            face_at[prev] = static_cast<int>(fi);
        }

    // A 4-point curve joining crossings x and y passes through two faces
    // that meet both crossings at opposite quadrants.  If x and y are in
    // different twist regions, the diagram is not twist-reduced.
    const int n = static_cast<int>(pd.crossings.size());
    for (int x = 0; x < n; ++x)
        for (int y = x + 1; y < n; ++y) {
            if (region_of[x] == region_of[y]) continue;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    if (face_at[4 * x + i] == face_at[4 * y + j] &&
                        face_at[4 * x + ((i + 2) & 3)] == face_at[4 * y + ((j + 2) & 3)]) {
                        rep.reduced = false;
                        rep.witness_a = x;
                        rep.witness_b = y;
                        rep.reason = "4-point curve through crossings " + std::to_string(x) +
                                     " and " + std::to_string(y) +
                                     " joining distinct twist regions";
                        return rep;
                    }
                }
        }
    return rep;
}

}  // namespace htri
