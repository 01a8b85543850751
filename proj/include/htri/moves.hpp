#pragma once

#include <array>
#include <vector>

#include "htri/triangulation.hpp"

namespace htri {

// Bistellar (Pachner) moves.  Both operate in place and leave the
// triangulation untouched when they return false.  Removed tetrahedra
// shift the indices of everything above them, exactly as in
// Triangulation::remove_tets; the optional remap receives that index map.

// Replaces the two tetrahedra sharing face (tet, face) by three around the
// dual edge.  Fails if the face is open, glued to the same tetrahedron, or
// if the result would not be a valid triangulation.  The three new
// tetrahedra are appended at the end (reported via created).
bool move_23(Triangulation& tri, int tet, int face,
             std::array<int, 3>* created = nullptr,
             std::vector<int>* remap = nullptr);

// Inverse move: collapses the three distinct tetrahedra around the edge
// (a, b) of tet into two.  Fails unless the edge has degree three with
// three distinct tetrahedra whose outer faces leave the triple, or if the
// result would not be a valid triangulation.  The two new tetrahedra are
// appended at the end (reported via created).
bool move_32(Triangulation& tri, int tet, int a, int b,
             std::array<int, 2>* created = nullptr,
             std::vector<int>* remap = nullptr);

}  // namespace htri
