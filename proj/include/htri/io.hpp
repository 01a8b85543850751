#pragma once

#include <string>
#include <vector>

#include "htri/htri.hpp"

namespace htri {

// A triangulation file: the gluing table plus optional marked data (the
// distinguished edge as a path of tetrahedron edges, and hat faces).
//
// Text format:
//   tri <tet_count>
//   t <i>: <dest0> <dest1> <dest2> <dest3>
//   edge E <tet> <edge-index>        (zero or more, a path)
//   hat <tet> <face>                 (zero or more)
// where each <dest> is `-` for a boundary face or `<j>:<perm>` with perm
// the 4-digit image of 0123.  Edge indices 0..5 number the vertex pairs
// 01, 02, 03, 12, 13, 23.
struct TriFile {
    Triangulation tri;
    std::vector<EdgeMarker> edges;
    std::vector<HatFace> hats;  // only tet and face are stored
};

std::string write_tri(const TriFile& tf);

// Parses the text format.  Rejects malformed input and gluing tables
// that are not involutions (mismatched partner entries).
TriFile read_tri(const std::string& text);

// The same schema as JSON.
std::string write_tri_json(const TriFile& tf);
TriFile read_tri_json(const std::string& text);

// Full record of a constructed triangulation, including the source
// diagram, fills, hat, pre-insertion signature and stage audit, so that
// verification can be re-run from the file alone.
std::string htri_to_json(const HTriangulation& h);
HTriangulation htri_from_json(const std::string& text);

// The marked-data view of a constructed triangulation (edge E + the hat
// used), for the text format.
TriFile to_tri_file(const HTriangulation& h);

}  // namespace htri
