#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <vector>

namespace htri {

using Int = boost::multiprecision::cpp_int;
using Matrix = std::vector<std::vector<Int>>;  // row-major

// Diagonalisation D = U * M * V with U, V unimodular and the diagonal
// entries nonnegative (not necessarily divisibility-chained; cokernel()
// folds them into invariant factors).  U, V, Vinv are optional.
struct SNF {
    std::vector<Int> diag;
    Matrix U, V, Vinv;
};

SNF smith_normal_form(Matrix M, bool want_transforms = false);

struct AbelianGroup {
    int rank = 0;
    std::vector<Int> torsion;  // invariant factors, each > 1, each dividing the next

    bool trivial() const { return rank == 0 && torsion.empty(); }
    bool is_free(int r) const { return rank == r && torsion.empty(); }
    bool operator==(const AbelianGroup&) const = default;
    std::string str() const;
};

// Cokernel of the relation matrix (rows = relators, columns = generators).
AbelianGroup cokernel(Matrix relations, int generators);

}  // namespace htri
