#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <cobar/ring.hpp>

namespace cobar {

// Dense matrices, row-major.  MatZ is used for lattice computations over Z,
// MatF for elimination over rings where every nonzero element is a unit.
using MatZ = std::vector<std::vector<mpz_class>>;
using MatF = std::vector<std::vector<RingElem>>;

inline MatZ zmat_zero(size_t rows, size_t cols) {
    return MatZ(rows, std::vector<mpz_class>(cols, 0));
}

inline MatZ zmat_identity(size_t n) {
    MatZ m = zmat_zero(n, n);
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

inline MatZ zmat_mul(const MatZ& a, const MatZ& b) {
    if (a.empty() || b.empty()) return zmat_zero(a.size(), b.empty() ? 0 : b[0].size());
    MatZ r = zmat_zero(a.size(), b[0].size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t k = 0; k < b.size(); ++k) {
            if (a[i][k] == 0) continue;
            for (size_t j = 0; j < b[0].size(); ++j) r[i][j] += a[i][k] * b[k][j];
        }
    return r;
}

inline std::vector<mpz_class> zmat_apply(const MatZ& a, const std::vector<mpz_class>& x) {
    std::vector<mpz_class> r(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < x.size(); ++j) r[i] += a[i][j] * x[j];
    return r;
}

// U*A*V = S with S diagonal, S[i][i] >= 0 and S[i][i] | S[i+1][i+1].
// U, V are unimodular; Uinv and Vinv are maintained alongside so callers can
// change basis without re-inverting.
struct SmithDecomposition {
    MatZ S, U, Uinv, V, Vinv;
    size_t rank = 0;

    std::vector<mpz_class> invariants() const {
        std::vector<mpz_class> d;
        for (size_t i = 0; i < rank; ++i) d.push_back(S[i][i]);
        return d;
    }
};

inline SmithDecomposition smith_normal_form(MatZ a) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    SmithDecomposition d;
    d.U = zmat_identity(rows);
    d.Uinv = zmat_identity(rows);
    d.V = zmat_identity(cols);
    d.Vinv = zmat_identity(cols);

    // Row ops mirror onto U; the inverse op goes onto Uinv columns so that
    // U*Uinv stays the identity.  Columns and V behave dually.
    auto swap_rows = [&](size_t i, size_t j) {
        if (i == j) return;
        std::swap(a[i], a[j]);
        std::swap(d.U[i], d.U[j]);
        for (size_t r = 0; r < rows; ++r) std::swap(d.Uinv[r][i], d.Uinv[r][j]);
    };
    auto swap_cols = [&](size_t i, size_t j) {
        if (i == j) return;
        for (size_t r = 0; r < rows; ++r) std::swap(a[r][i], a[r][j]);
        for (size_t r = 0; r < cols; ++r) std::swap(d.V[r][i], d.V[r][j]);
        std::swap(d.Vinv[i], d.Vinv[j]);
    };
    auto add_row = [&](size_t i, size_t j, const mpz_class& c) {  // row_i += c*row_j
        for (size_t k = 0; k < cols; ++k) a[i][k] += c * a[j][k];
        for (size_t k = 0; k < rows; ++k) d.U[i][k] += c * d.U[j][k];
        for (size_t k = 0; k < rows; ++k) d.Uinv[k][j] -= c * d.Uinv[k][i];
    };
    auto add_col = [&](size_t i, size_t j, const mpz_class& c) {  // col_i += c*col_j
        for (size_t k = 0; k < rows; ++k) a[k][i] += c * a[k][j];
        for (size_t k = 0; k < cols; ++k) d.V[k][i] += c * d.V[k][j];
        for (size_t k = 0; k < cols; ++k) d.Vinv[j][k] -= c * d.Vinv[i][k];
    };
    auto negate_row = [&](size_t i) {
        for (size_t k = 0; k < cols; ++k) a[i][k] = -a[i][k];
        for (size_t k = 0; k < rows; ++k) d.U[i][k] = -d.U[i][k];
        for (size_t k = 0; k < rows; ++k) d.Uinv[k][i] = -d.Uinv[k][i];
    };

    size_t k = 0;
    while (k < rows && k < cols) {
        // Smallest nonzero pivot in the trailing submatrix.
        size_t pr = rows, pc = cols;
        for (size_t i = k; i < rows; ++i)
            for (size_t j = k; j < cols; ++j) {
                if (a[i][j] == 0) continue;
                if (pr == rows || mpz_cmpabs(a[i][j].get_mpz_t(), a[pr][pc].get_mpz_t()) < 0) {
                    pr = i;
                    pc = j;
                }
            }
        if (pr == rows) break;
        swap_rows(k, pr);
        swap_cols(k, pc);

        bool dirty = false;
        for (size_t i = k + 1; i < rows; ++i) {
            if (a[i][k] == 0) continue;
            mpz_class q = a[i][k] / a[k][k];
            if (q != 0) add_row(i, k, -q);
            if (a[i][k] != 0) dirty = true;
        }
        for (size_t j = k + 1; j < cols; ++j) {
            if (a[k][j] == 0) continue;
            mpz_class q = a[k][j] / a[k][k];
            if (q != 0) add_col(j, k, -q);
            if (a[k][j] != 0) dirty = true;
        }
        if (dirty) continue;  // remainders left; pick a smaller pivot next pass

        // Pivot must divide the rest of the submatrix for the invariant chain.
        bool divides = true;
        for (size_t i = k + 1; i < rows && divides; ++i)
            for (size_t j = k + 1; j < cols && divides; ++j)
                if (a[i][j] % a[k][k] != 0) {
                    add_row(k, i, 1);
                    divides = false;
                }
        if (!divides) continue;

        if (a[k][k] < 0) negate_row(k);
        ++k;
    }
    d.rank = k;
    d.S = std::move(a);
    return d;
}

// Basis of { x : A x = 0 } as a list of integer vectors.  The basis spans the
// full kernel lattice (it is saturated) because V is unimodular.
inline std::vector<std::vector<mpz_class>> integer_kernel(const MatZ& a) {
    const size_t cols = a.empty() ? 0 : a[0].size();
    if (a.empty()) {
        std::vector<std::vector<mpz_class>> basis;
        for (size_t j = 0; j < cols; ++j) {
            std::vector<mpz_class> e(cols, 0);
            e[j] = 1;
            basis.push_back(std::move(e));
        }
        return basis;
    }
    SmithDecomposition d = smith_normal_form(a);
    std::vector<std::vector<mpz_class>> basis;
    for (size_t j = d.rank; j < cols; ++j) {
        std::vector<mpz_class> v(cols);
        for (size_t i = 0; i < cols; ++i) v[i] = d.V[i][j];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solve A x = b over the integers, if possible.
inline std::optional<std::vector<mpz_class>> integer_solve(const MatZ& a,
                                                           const std::vector<mpz_class>& b) {
    const size_t rows = a.size();
    const size_t cols = rows == 0 ? 0 : a[0].size();
    SmithDecomposition d = smith_normal_form(a);
    std::vector<mpz_class> ub = zmat_apply(d.U, b);
    std::vector<mpz_class> y(cols, 0);
    for (size_t i = 0; i < rows; ++i) {
        if (i < d.rank) {
            mpz_class q, r;
            mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), ub[i].get_mpz_t(),
                        d.S[i][i].get_mpz_t());
            if (r != 0) return std::nullopt;
            if (i < cols) y[i] = q;
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    return zmat_apply(d.V, y);
}

// Elimination over a coefficient ring in which every nonzero element that
// appears as a pivot is a unit (Q, Z/p).  Throws if a nonzero non-unit pivot
// column is encountered.
inline std::vector<size_t> reduce_echelon(MatF& m) {
    std::vector<size_t> pivots;
    if (m.empty()) return pivots;
    const size_t rows = m.size(), cols = m[0].size();
    size_t row = 0;
    for (size_t col = 0; col < cols && row < rows; ++col) {
        size_t sel = rows;
        for (size_t i = row; i < rows; ++i)
            if (!m[i][col].is_zero()) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        std::swap(m[row], m[sel]);
        auto inv = m[row][col].inverse();
        if (!inv) throw Error("elimination hit a non-invertible pivot over " +
                              m[row][col].ring()->str());
        for (size_t j = col; j < cols; ++j) m[row][j] = m[row][j] * *inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == row || m[i][col].is_zero()) continue;
            RingElem f = m[i][col];
            for (size_t j = col; j < cols; ++j) m[i][j] = m[i][j] - f * m[row][j];
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::vector<std::vector<RingElem>> field_kernel(MatF m, const RingPtr& ring) {
    const size_t cols = m.empty() ? 0 : m[0].size();
    std::vector<size_t> pivots = reduce_echelon(m);
    std::vector<bool> is_pivot(cols, false);
    for (size_t p : pivots) is_pivot[p] = true;
    std::vector<std::vector<RingElem>> basis;
    for (size_t freec = 0; freec < cols; ++freec) {
        if (is_pivot[freec]) continue;
        std::vector<RingElem> v(cols, RingElem::zero(ring));
        v[freec] = RingElem::one(ring);
        for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m[r][freec];
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace cobar
