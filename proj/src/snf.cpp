#include "htri/snf.hpp"

#include <algorithm>
#include <sstream>

namespace htri {

namespace {

Matrix identity(size_t n) {
    Matrix m(n, std::vector<Int>(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

Int iabs(const Int& x) { return x < 0 ? Int(-x) : x; }

}  // namespace

// Textbook Smith normal form by integer row/column reduction.  A cheap
// pre-pass eliminates with +-1 pivots (which dominate in the sparse
// incidence matrices we feed it) before the general algorithm runs.
SNF smith_normal_form(Matrix M, bool want_transforms) {
    const size_t rows = M.size();
    const size_t cols = rows ? M[0].size() : 0;
    SNF out;
    if (want_transforms) {
        out.U = identity(rows);
        out.V = identity(cols);
        out.Vinv = identity(cols);
    }

    auto row_add = [&](size_t dst, size_t src, const Int& k) {  // row dst += k*row src
        for (size_t j = 0; j < cols; ++j) M[dst][j] += k * M[src][j];
        if (want_transforms)
            for (size_t j = 0; j < rows; ++j) out.U[dst][j] += k * out.U[src][j];
    };
    auto col_add = [&](size_t dst, size_t src, const Int& k) {  // col dst += k*col src
        for (size_t i = 0; i < rows; ++i) M[i][dst] += k * M[i][src];
        if (want_transforms) {
            for (size_t i = 0; i < cols; ++i) out.V[i][dst] += k * out.V[i][src];
            // (V * E)^-1 = E^-1 * Vinv where E^-1 subtracts k of column dst from src rows.
            for (size_t j = 0; j < cols; ++j) out.Vinv[src][j] -= k * out.Vinv[dst][j];
        }
    };
    auto row_swap = [&](size_t a, size_t b) {
        if (a == b) return;
        std::swap(M[a], M[b]);
        if (want_transforms) std::swap(out.U[a], out.U[b]);
    };
    auto col_swap = [&](size_t a, size_t b) {
        if (a == b) return;
        for (size_t i = 0; i < rows; ++i) std::swap(M[i][a], M[i][b]);
        if (want_transforms) {
            for (size_t i = 0; i < cols; ++i) std::swap(out.V[i][a], out.V[i][b]);
            std::swap(out.Vinv[a], out.Vinv[b]);
        }
    };
    auto row_negate = [&](size_t a) {
        for (size_t j = 0; j < cols; ++j) M[a][j] = -M[a][j];
        if (want_transforms)
            for (size_t j = 0; j < rows; ++j) out.U[a][j] = -out.U[a][j];
    };

    size_t t = 0;  // current pivot position
    const size_t lim = std::min(rows, cols);
    while (t < lim) {
        // Find a nonzero pivot, preferring +-1.
        size_t pi = rows, pj = cols;
        bool unit = false;
        for (size_t i = t; i < rows && !unit; ++i)
            for (size_t j = t; j < cols; ++j) {
                if (M[i][j] == 0) continue;
                if (pi == rows) { pi = i; pj = j; }
                if (iabs(M[i][j]) == 1) { pi = i; pj = j; unit = true; break; }
            }
        if (pi == rows) break;  // all zero
        row_swap(t, pi);
        col_swap(t, pj);
        if (M[t][t] < 0) row_negate(t);

        bool again = true;
        while (again) {
            again = false;
            if (M[t][t] < 0) row_negate(t);
            for (size_t i = t + 1; i < rows; ++i) {
                if (M[i][t] == 0) continue;
                Int q = M[i][t] / M[t][t];
                row_add(i, t, -q);
                if (M[i][t] != 0) {  // remainder smaller than pivot: swap up
                    row_swap(t, i);
                    if (M[t][t] < 0) row_negate(t);
                    again = true;
                }
            }
            for (size_t j = t + 1; j < cols; ++j) {
                if (M[t][j] == 0) continue;
                Int q = M[t][j] / M[t][t];
                col_add(j, t, -q);
                if (M[t][j] != 0) {
                    col_swap(t, j);
                    again = true;
                    break;  // row entries disturbed; restart
                }
            }
        }
        if (M[t][t] < 0) row_negate(t);
        ++t;
    }

    out.diag.assign(lim, 0);
    for (size_t i = 0; i < lim; ++i) out.diag[i] = M[i][i];
    return out;
}

AbelianGroup cokernel(Matrix relations, int generators) {
    if (relations.empty()) return AbelianGroup{generators, {}};
    for (auto& r : relations)
        if (static_cast<int>(r.size()) != generators)
            throw std::runtime_error("cokernel: ragged relation matrix");
    SNF s = smith_normal_form(std::move(relations));
    AbelianGroup g;
    int nonzero = 0;
    std::vector<Int> ds;
    for (const Int& d : s.diag) {
        if (d == 0) continue;
        ++nonzero;
        if (d > 1) ds.push_back(d);
    }
    // Fold the diagonal into invariant factors: for a diagonal matrix the
    // pair (a, b) is equivalent to (gcd(a,b), lcm(a,b)).
    for (bool changed = true; changed;) {
        changed = false;
        for (size_t i = 0; i < ds.size(); ++i)
            for (size_t j = i + 1; j < ds.size(); ++j) {
                if (ds[j] % ds[i] == 0) continue;
                Int g2 = boost::multiprecision::gcd(ds[i], ds[j]);
                Int l2 = ds[i] / g2 * ds[j];
                ds[i] = g2;
                ds[j] = l2;
                changed = true;
            }
    }
    std::sort(ds.begin(), ds.end());
    for (const Int& d : ds)
        if (d > 1) g.torsion.push_back(d);
    g.rank = generators - nonzero;
    return g;
}

std::string AbelianGroup::str() const {
    if (trivial()) return "0";
    std::ostringstream os;
    bool first = true;
    if (rank > 0) {
        os << "Z";
        if (rank > 1) os << "^" << rank;
        first = false;
    }
    for (const Int& d : torsion) {
        if (!first) os << " + ";
        os << "Z/" << d;
        first = false;
    }
    return os.str();
}

}  // namespace htri
