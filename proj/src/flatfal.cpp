#include "htri/flatfal.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "json.hpp"

namespace htri {

namespace {

int find_root(std::vector<int>& uf, int x) {
    while (uf[x] != x) {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    return x;
}

void unite(std::vector<int>& uf, int a, int b) {
    uf[find_root(uf, a)] = find_root(uf, b);
}

}  // namespace

FlatFAL make_flat_skeleton(int c) {
    FlatFAL f;
    f.circles.resize(c);
    f.theta.assign(10 * c, -1);
    f.sigma.assign(10 * c, -1);
    f.dart_node.assign(10 * c, -1);
    for (int i = 0; i < c; ++i) {
        // Segment arcs within the circle.
        f.theta[FlatFAL::sx(i)] = FlatFAL::spx(i);
        f.theta[FlatFAL::spx(i)] = FlatFAL::sx(i);
        f.theta[FlatFAL::spq(i)] = FlatFAL::sqp(i);
        f.theta[FlatFAL::sqp(i)] = FlatFAL::spq(i);
        f.theta[FlatFAL::sqy(i)] = FlatFAL::sy(i);
        f.theta[FlatFAL::sy(i)] = FlatFAL::sqy(i);
        // Rotations: degree-one endpoints fix themselves; punctures cycle
        // counterclockwise east -> segment-up -> west -> segment-down.
        f.sigma[FlatFAL::sx(i)] = FlatFAL::sx(i);
        f.sigma[FlatFAL::sy(i)] = FlatFAL::sy(i);
        f.sigma[FlatFAL::pe(i)] = FlatFAL::spx(i);
        f.sigma[FlatFAL::spx(i)] = FlatFAL::pw(i);
        f.sigma[FlatFAL::pw(i)] = FlatFAL::spq(i);
        f.sigma[FlatFAL::spq(i)] = FlatFAL::pe(i);
        f.sigma[FlatFAL::qe(i)] = FlatFAL::sqp(i);
        f.sigma[FlatFAL::sqp(i)] = FlatFAL::qw(i);
        f.sigma[FlatFAL::qw(i)] = FlatFAL::sqy(i);
        f.sigma[FlatFAL::sqy(i)] = FlatFAL::qe(i);
        f.dart_node[FlatFAL::sx(i)] = 4 * i;
        f.dart_node[FlatFAL::spx(i)] = 4 * i + 1;
        f.dart_node[FlatFAL::spq(i)] = 4 * i + 1;
        f.dart_node[FlatFAL::pw(i)] = 4 * i + 1;
        f.dart_node[FlatFAL::pe(i)] = 4 * i + 1;
        f.dart_node[FlatFAL::sqp(i)] = 4 * i + 2;
        f.dart_node[FlatFAL::sqy(i)] = 4 * i + 2;
        f.dart_node[FlatFAL::qw(i)] = 4 * i + 2;
        f.dart_node[FlatFAL::qe(i)] = 4 * i + 2;
        f.dart_node[FlatFAL::sy(i)] = 4 * i + 3;
    }
    return f;
}

int FlatFAL::strand_components() const {
    std::vector<int> uf(darts());
    std::iota(uf.begin(), uf.end(), 0);
    for (int i = 0; i < c(); ++i) {
        if (circles[i].half_twist) {
            unite(uf, pw(i), qe(i));
            unite(uf, qw(i), pe(i));
        } else {
            unite(uf, pw(i), pe(i));
            unite(uf, qw(i), qe(i));
        }
    }
    std::set<int> roots;
    for (int i = 0; i < c(); ++i) {
        unite(uf, pw(i), theta[pw(i)]);
        unite(uf, pe(i), theta[pe(i)]);
        unite(uf, qw(i), theta[qw(i)]);
        unite(uf, qe(i), theta[qe(i)]);
    }
    for (int i = 0; i < c(); ++i) {
        roots.insert(find_root(uf, pw(i)));
        roots.insert(find_root(uf, pe(i)));
        roots.insert(find_root(uf, qw(i)));
        roots.insert(find_root(uf, qe(i)));
    }
    return static_cast<int>(roots.size());
}

std::vector<std::vector<int>> FlatFAL::faces() const {
    std::vector<std::vector<int>> out;
    std::vector<char> seen(darts(), 0);
    for (int d = 0; d < darts(); ++d) {
        if (seen[d]) continue;
        std::vector<int> cyc;
        int e = d;
        do {
            seen[e] = 1;
            cyc.push_back(e);
            e = sigma[theta[e]];
        } while (e != d);
        out.push_back(std::move(cyc));
    }
    return out;
}

void FlatFAL::validate() const {
    if (darts() != 10 * c() || static_cast<int>(sigma.size()) != darts() ||
        static_cast<int>(dart_node.size()) != darts())
        throw KnotError(KnotErrorKind::Unsupported, "malformed flat diagram arrays");
    for (int d = 0; d < darts(); ++d) {
        int t = theta[d];
        if (t < 0 || t >= darts() || t == d || theta[t] != d)
            throw KnotError(KnotErrorKind::Unsupported,
                            "flat diagram arc pairing is not an involution");
        if (dart_node[d] < 0 || sigma[d] < 0 || dart_node[sigma[d]] != dart_node[d])
            throw KnotError(KnotErrorKind::Unsupported, "flat diagram rotation is malformed");
    }
    // Strand darts must pair with strand darts of some circle.
    for (int i = 0; i < c(); ++i)
        for (int leg : {pw(i), pe(i), qw(i), qe(i)})
            if (theta[leg] % 10 < 6)
                throw KnotError(KnotErrorKind::Unsupported,
                                "circle strand dart wired into a segment");
    // Connectivity over nodes.
    std::vector<int> uf(4 * c());
    std::iota(uf.begin(), uf.end(), 0);
    for (int d = 0; d < darts(); ++d) unite(uf, dart_node[d], dart_node[theta[d]]);
    std::set<int> comps;
    for (int n = 0; n < 4 * c(); ++n) comps.insert(find_root(uf, n));
    if (comps.size() != 1)
        throw KnotError(KnotErrorKind::Unsupported, "flat diagram is disconnected");
    // Sphere Euler characteristic.
    int v = 4 * c();
    int e = darts() / 2;
    int fcount = static_cast<int>(faces().size());
    if (v - e + fcount != 2)
        throw KnotError(KnotErrorKind::NonPlanar, "flat diagram is not planar");
}

std::string FlatFAL::to_json() const {
    nlohmann::json j;
    j["circles"] = nlohmann::json::array();
    for (const auto& ci : circles)
        j["circles"].push_back({{"half_twist", ci.half_twist}, {"n", ci.n}, {"sign", ci.sign}});
    // The rotation system and segment arcs are canonical per circle, so the
    // strand-arc matching determines the whole map.
    nlohmann::json arcs = nlohmann::json::array();
    for (int i = 0; i < c(); ++i)
        for (int leg : {pw(i), pe(i), qw(i), qe(i)})
            if (theta[leg] > leg) arcs.push_back({leg, theta[leg]});
    j["strand_arcs"] = arcs;
    return j.dump(2);
}

FlatFAL FlatFAL::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw KnotError(KnotErrorKind::Syntax, std::string("bad flat diagram JSON: ") + ex.what());
    }
    if (!j.contains("circles") || !j.contains("strand_arcs"))
        throw KnotError(KnotErrorKind::Syntax, "flat diagram JSON missing fields");
    FlatFAL f = make_flat_skeleton(static_cast<int>(j["circles"].size()));
    for (int i = 0; i < f.c(); ++i) {
        const auto& ci = j["circles"][i];
        f.circles[i].half_twist = ci.at("half_twist").get<bool>();
        f.circles[i].n = ci.at("n").get<int>();
        f.circles[i].sign = ci.value("sign", 0);
    }
    for (const auto& arc : j["strand_arcs"]) {
        int a = arc.at(0).get<int>();
        int b = arc.at(1).get<int>();
        if (a < 0 || b < 0 || a >= f.darts() || b >= f.darts())
            throw KnotError(KnotErrorKind::Syntax, "strand arc dart out of range");
        f.theta[a] = b;
        f.theta[b] = a;
    }
    f.validate();
    return f;
}

FlatFAL torus_2q_fal(int q) {
    if (q < 3 || q % 2 == 0)
        throw KnotError(KnotErrorKind::Unsupported, "chain augmentation needs odd q >= 3");
    FlatFAL f = make_flat_skeleton(q);
    for (int i = 0; i < q; ++i) {
        int j = (i + 1) % q;
        f.theta[FlatFAL::pe(i)] = FlatFAL::pw(j);
        f.theta[FlatFAL::pw(j)] = FlatFAL::pe(i);
        f.theta[FlatFAL::qe(i)] = FlatFAL::qw(j);
        f.theta[FlatFAL::qw(j)] = FlatFAL::qe(i);
        f.circles[i].half_twist = true;
        f.circles[i].n = 0;
        f.circles[i].sign = 1;
    }
    f.validate();
    return f;
}

namespace {

// Counterclockwise rotation of the four strand ends left exposed by a
// twist-region chain once all of its bigon arcs are contracted away.
std::vector<int> chain_boundary(const DiagramMap& map, const std::vector<char>& internal,
                                int start) {
    std::vector<int> seq;
    int d = start;
    do {
        seq.push_back(d);
        int e = DiagramMap::rot_next(d);
        while (internal[e]) e = DiagramMap::rot_next(map.theta[e]);
        d = e;
    } while (d != start && seq.size() <= 4);
    if (seq.size() != 4)
        throw KnotError(KnotErrorKind::Unsupported, "twist region boundary is degenerate");
    return seq;
}

}  // namespace

FlatFAL augment(const PDCode& pd, const std::vector<TwistRegion>& regions,
                bool assume_twist_reduced) {
    if (!assume_twist_reduced) {
        TwistReducedReport rep = check_twist_reduced(pd);
        if (!rep.reduced)
            throw KnotError(KnotErrorKind::NotTwistReduced,
                            "diagram is not twist reduced: " + rep.reason);
    }
    if (regions.size() == 1 && regions.front().cyclic) {
        FlatFAL f = torus_2q_fal(regions.front().t());
        for (auto& ci : f.circles) ci.sign = regions.front().sign;
        return f;
    }
    for (const auto& r : regions)
        if (r.cyclic)
            throw KnotError(KnotErrorKind::Unsupported,
                            "cyclic twist region in a multi-region diagram");

    DiagramMap map = DiagramMap::from_pd(pd);
    auto faces = trace_faces(map);

    // Bigon arcs between consecutive crossings of a chain are swallowed by
    // the circle gadget that replaces the chain.
    std::vector<char> internal(map.darts(), 0);
    for (const auto& fc : faces) {
        if (fc.size() != 2 || fc[0] / 4 == fc[1] / 4) continue;
        for (int d : fc) {
            internal[d] = 1;
            internal[map.theta[d]] = 1;
        }
    }

    int c = static_cast<int>(regions.size());
    FlatFAL f = make_flat_skeleton(c);
    std::vector<int> leg_of(map.darts(), -1);

    for (int i = 0; i < c; ++i) {
        const TwistRegion& r = regions[i];
        f.circles[i].half_twist = (r.t() % 2 == 1);
        f.circles[i].n = r.sign * (r.t() / 2);
        f.circles[i].sign = r.sign;

        // Anchored boundary (d1, d2, d3, d4): the strands run through the
        // replacing circle as {d1, d4} and {d2, d3}.
        std::array<int, 4> anchored{};
        if (r.t() == 1) {
            // Orientation-respecting smoothing of a lone crossing: positive
            // crossings pair slots {0,1} and {2,3}, negative {0,3} and {1,2}.
            int base = 4 * r.crossings[0];
            if (pd.crossings[r.crossings[0]].sign > 0)
                anchored = {base + 1, base + 2, base + 3, base + 0};
            else
                anchored = {base + 0, base + 1, base + 2, base + 3};
        } else {
            int least = -1;
            for (int x : r.crossings)
                for (int s = 0; s < 4; ++s)
                    if (!internal[4 * x + s] && (least < 0 || 4 * x + s < least)) least = 4 * x + s;
            std::vector<int> seq = chain_boundary(map, internal, least);
            // Rotate so the first two darts sit at the same end crossing;
            // among valid rotations start with the smallest dart.
            int best = -1;
            for (int k = 0; k < 4; ++k)
                if (seq[k] / 4 == seq[(k + 1) % 4] / 4 && (best < 0 || seq[k] < seq[best]))
                    best = k;
            if (best < 0)
                throw KnotError(KnotErrorKind::Unsupported, "twist region ends are tangled");
            for (int k = 0; k < 4; ++k) anchored[k] = seq[(best + k) % 4];
        }
        // The contracted circle gadget exposes (pe, pw, qw, qe)
        // counterclockwise with through-strands {pw,pe} and {qw,qe};
        // matching rotations and strand pairs fixes the attachment.
        leg_of[anchored[0]] = FlatFAL::qe(i);
        leg_of[anchored[1]] = FlatFAL::pe(i);
        leg_of[anchored[2]] = FlatFAL::pw(i);
        leg_of[anchored[3]] = FlatFAL::qw(i);
    }

    for (int d = 0; d < map.darts(); ++d) {
        if (internal[d]) continue;
        int d2 = map.theta[d];
        if (leg_of[d] < 0 || leg_of[d2] < 0)
            throw KnotError(KnotErrorKind::Unsupported, "unassigned strand end in augmentation");
        f.theta[leg_of[d]] = leg_of[d2];
    }
    f.validate();
    return f;
}

FlatFAL connected_sum(const FlatFAL& a, const FlatFAL& b) {
    int ca = a.c();
    int cb = b.c();
    int j = ca + cb;  // the new bridge circle
    FlatFAL f = make_flat_skeleton(ca + cb + 1);
    for (int i = 0; i < ca; ++i) f.circles[i] = a.circles[i];
    for (int i = 0; i < cb; ++i) f.circles[ca + i] = b.circles[i];
    f.circles[j] = FlatCircle{false, 0, 0};

    auto copy_strands = [&f](const FlatFAL& src, int off) {
        for (int i = 0; i < src.c(); ++i)
            for (int leg : {FlatFAL::pw(i), FlatFAL::pe(i), FlatFAL::qw(i), FlatFAL::qe(i)})
                f.theta[leg + off] = src.theta[leg] + off;
    };
    copy_strands(a, 0);
    copy_strands(b, 10 * ca);

    // Cut the lowest-numbered strand arc in each summand and run both loose
    // ends of one through the new circle to the matching ends of the other.
    // Two of the four end pairings keep the sphere embedding; take the
    // first that does.
    int a1 = -1;
    for (int d = 0; d < 10 * ca && a1 < 0; ++d)
        if (d % 10 >= 6) a1 = d;
    int a2 = f.theta[a1];
    int b1 = -1;
    for (int d = 10 * ca; d < 10 * (ca + cb) && b1 < 0; ++d)
        if (d % 10 >= 6) b1 = d;
    int b2 = f.theta[b1];

    for (int flip = 0; flip < 2; ++flip) {
        int u = flip ? b2 : b1;
        int v = flip ? b1 : b2;
        f.theta[a1] = FlatFAL::pw(j);
        f.theta[FlatFAL::pw(j)] = a1;
        f.theta[FlatFAL::pe(j)] = u;
        f.theta[u] = FlatFAL::pe(j);
        f.theta[a2] = FlatFAL::qw(j);
        f.theta[FlatFAL::qw(j)] = a2;
        f.theta[FlatFAL::qe(j)] = v;
        f.theta[v] = FlatFAL::qe(j);
        int ve = 4 * f.c() - f.darts() / 2 + static_cast<int>(f.faces().size());
        if (ve == 2) break;
        if (flip == 1)
            throw KnotError(KnotErrorKind::Unsupported, "connected sum lost planarity");
    }
    f.validate();
    return f;
}

FlatFAL twist_knot_fal(int k, int l) {
    if (k < 2 || l < 2)
        throw KnotError(KnotErrorKind::Unsupported, "twist knot parameters must be at least 2");
    if (k % 2 == 1 && l % 2 == 1)
        throw KnotError(KnotErrorKind::Unsupported,
                        "twist knot with both parameters odd is omitted");
    // The flat augmented diagram is the same for every member of the
    // family; only the circle fill data vary.  Start from the two-region
    // alternating diagram with two crossings per region and rescale.  The
    // even parameter goes on the first circle.
    if (k % 2 == 1) std::swap(k, l);
    FlatFAL f = augment(parse_pd("X[4,2,5,1] X[2,7,3,8] X[8,6,1,5] X[6,3,7,4]"));
    int t[2] = {k, l};
    for (int i = 0; i < 2; ++i) {
        f.circles[i].half_twist = (t[i] % 2 == 1);
        f.circles[i].n = f.circles[i].sign * (t[i] / 2);
    }
    return f;
}

FlatFAL trefoil_sum_fal(int t) {
    if (t < 1)
        throw KnotError(KnotErrorKind::Unsupported, "trefoil sum needs at least one summand");
    FlatFAL f = torus_2q_fal(3);
    for (int i = 1; i < t; ++i) f = connected_sum(f, torus_2q_fal(3));
    return f;
}

}  // namespace htri
