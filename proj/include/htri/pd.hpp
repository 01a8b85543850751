#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace htri {

// Error taxonomy for diagram input handling.
enum class KnotErrorKind {
    Syntax,
    ArcConsistency,
    NotAKnot,
    NonPlanar,
    NotTwistReduced,
    Unsupported,
};

struct KnotError : std::runtime_error {
    KnotErrorKind kind;
    KnotError(KnotErrorKind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

// One PD crossing: incident arc labels counterclockwise, starting from the
// incoming under-strand.  sign is the crossing handedness (+1 when the
// over-strand enters at slot 3).
struct Crossing {
    std::array<int, 4> arcs{};
    int sign = 0;
};

struct PDCode {
    std::vector<Crossing> crossings;
    int arc_count = 0;
};

// Parses `X[a,b,c,d]` tuples (whitespace separated).  Validates arc
// multiplicity, orientability of the strand flow, and that the diagram is
// a single-component knot.
PDCode parse_pd(const std::string& text);

// Combinatorial map of the 4-valent diagram graph.  Dart 4*c + s is slot s
// of crossing c; rotation is slot order (counterclockwise).
struct DiagramMap {
    std::vector<int> theta;  // fixed-point-free involution pairing arc ends

    int darts() const { return static_cast<int>(theta.size()); }
    static int rot_next(int d) { return (d & ~3) | ((d + 1) & 3); }
    static DiagramMap from_pd(const PDCode& pd);
};

// Face cycles of the map (next dart of a face = rotation successor of the
// opposite dart).  Throws NonPlanar when V - E + F != 2.
std::vector<std::vector<int>> trace_faces(const DiagramMap& map);

struct TwistRegion {
    std::vector<int> crossings;  // in chain order
    int sign = 0;
    bool cyclic = false;  // bigon chain closes up (single-region (2,q) diagrams)
    int t() const { return static_cast<int>(crossings.size()); }
};

// Maximal bigon chains; every crossing belongs to exactly one region.
std::vector<TwistRegion> detect_twist_regions(const PDCode& pd);

struct TwistReducedReport {
    bool reduced = true;
    // When not reduced: two crossings joined by a 4-point curve that does
    // not bound a twist region (best-effort witness).
    int witness_a = -1;
    int witness_b = -1;
    std::string reason;
};

TwistReducedReport check_twist_reduced(const PDCode& pd);

}  // namespace htri
