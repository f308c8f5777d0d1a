#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "xhom/scalar.hpp"

namespace xhom {

template <class F>
using Vec = std::vector<F>;

template <class F>
Vec<F> zero_vec(std::size_t n) { return Vec<F>(n, F::zero()); }

template <class F>
Vec<F> unit_vec(std::size_t n, std::size_t i) {
    Vec<F> v(n, F::zero());
    v.at(i) = F::one();
    return v;
}

template <class F>
bool is_zero_vec(const Vec<F>& v) {
    for (const auto& x : v)
        if (!x.is_zero()) return false;
    return true;
}

// Sparse matrix over an exact field. Entries are kept row-major sorted with
// no duplicates and no explicit zeros once normalize() has run; the builder
// API (add/set) may leave the entry list unnormalized until then.
template <class F>
class SparseMatrix {
public:
    struct Entry {
        std::size_t row, col;
        F val;
    };

    SparseMatrix() : rows_(0), cols_(0) {}
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    static SparseMatrix identity(std::size_t n) {
        SparseMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.entries_.push_back({i, i, F::one()});
        m.normalized_ = true;
        return m;
    }

    static SparseMatrix zero(std::size_t rows, std::size_t cols) { return SparseMatrix(rows, cols); }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    // Accumulating insert; duplicates are merged by normalize().
    void add(std::size_t r, std::size_t c, const F& v) {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("SparseMatrix::add: position out of range");
        if (v.is_zero()) return;
        entries_.push_back({r, c, v});
        normalized_ = false;
    }

    void normalize() const {
        if (normalized_) return;
        auto& es = entries_;
        std::sort(es.begin(), es.end(), [](const Entry& a, const Entry& b) {
            return a.row != b.row ? a.row < b.row : a.col < b.col;
        });
        std::vector<Entry> out;
        out.reserve(es.size());
        for (const auto& e : es) {
            if (!out.empty() && out.back().row == e.row && out.back().col == e.col)
                out.back().val += e.val;
            else
                out.push_back(e);
        }
        out.erase(std::remove_if(out.begin(), out.end(),
                                 [](const Entry& e) { return e.val.is_zero(); }),
                  out.end());
        es = std::move(out);
        normalized_ = true;
    }

    const std::vector<Entry>& entries() const {
        normalize();
        return entries_;
    }

    F get(std::size_t r, std::size_t c) const {
        normalize();
        auto it = std::lower_bound(entries_.begin(), entries_.end(), std::make_pair(r, c),
                                   [](const Entry& e, const std::pair<std::size_t, std::size_t>& p) {
                                       return e.row != p.first ? e.row < p.first : e.col < p.second;
                                   });
        if (it != entries_.end() && it->row == r && it->col == c) return it->val;
        return F::zero();
    }

    std::size_t nnz() const { normalize(); return entries_.size(); }

    double density() const {
        if (rows_ == 0 || cols_ == 0) return 0.0;
        return static_cast<double>(nnz()) / (static_cast<double>(rows_) * static_cast<double>(cols_));
    }

    bool operator==(const SparseMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) return false;
        normalize();
        o.normalize();
        if (entries_.size() != o.entries_.size()) return false;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto& a = entries_[i];
            const auto& b = o.entries_[i];
            if (a.row != b.row || a.col != b.col || !(a.val == b.val)) return false;
        }
        return true;
    }

    bool is_zero() const { return nnz() == 0; }

    SparseMatrix operator+(const SparseMatrix& o) const {
        require_shape(o.rows_, o.cols_, "operator+");
        SparseMatrix m(rows_, cols_);
        for (const auto& e : entries()) m.entries_.push_back(e);
        for (const auto& e : o.entries()) m.entries_.push_back(e);
        m.normalized_ = false;
        m.normalize();
        return m;
    }

    SparseMatrix operator-(const SparseMatrix& o) const { return *this + o.scaled(-F::one()); }

    SparseMatrix scaled(const F& c) const {
        SparseMatrix m(rows_, cols_);
        if (c.is_zero()) return m;
        for (const auto& e : entries()) m.entries_.push_back({e.row, e.col, e.val * c});
        m.normalized_ = true;
        return m;
    }

    SparseMatrix operator*(const SparseMatrix& o) const {
        if (cols_ != o.rows_)
            throw std::invalid_argument("SparseMatrix::operator*: inner dimensions disagree");
        normalize();
        o.normalize();
        // Row-major accumulate: for each entry (i,k) of *this, walk row k of o.
        std::vector<std::size_t> row_start(o.rows_ + 1, o.entries_.size());
        for (std::size_t idx = o.entries_.size(); idx-- > 0;) row_start[o.entries_[idx].row] = idx;
        for (std::size_t r = o.rows_; r-- > 0;)
            if (row_start[r] == o.entries_.size()) row_start[r] = row_start[r + 1];

        SparseMatrix m(rows_, o.cols_);
        std::vector<F> acc(o.cols_, F::zero());
        std::vector<std::size_t> touched;
        std::size_t i = 0;
        while (i < entries_.size()) {
            std::size_t row = entries_[i].row;
            touched.clear();
            for (; i < entries_.size() && entries_[i].row == row; ++i) {
                const F& a = entries_[i].val;
                std::size_t k = entries_[i].col;
                for (std::size_t j = row_start[k]; j < row_start[k + 1]; ++j) {
                    const auto& e = o.entries_[j];
                    if (acc[e.col].is_zero()) touched.push_back(e.col);
                    acc[e.col] += a * e.val;
                }
            }
            std::sort(touched.begin(), touched.end());
            for (std::size_t c : touched) {
                if (!acc[c].is_zero()) m.entries_.push_back({row, c, acc[c]});
                acc[c] = F::zero();
            }
        }
        m.normalized_ = true;
        return m;
    }

    Vec<F> apply(const Vec<F>& x) const {
        if (x.size() != cols_) throw std::invalid_argument("SparseMatrix::apply: length mismatch");
        Vec<F> y(rows_, F::zero());
        for (const auto& e : entries()) y[e.row] += e.val * x[e.col];
        return y;
    }

    SparseMatrix transpose() const {
        SparseMatrix m(cols_, rows_);
        for (const auto& e : entries()) m.entries_.push_back({e.col, e.row, e.val});
        m.normalized_ = false;
        return m;
    }

    // Kronecker product respecting row-major tuple bases.
    static SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
        SparseMatrix m(a.rows_ * b.rows_, a.cols_ * b.cols_);
        for (const auto& ea : a.entries())
            for (const auto& eb : b.entries())
                m.entries_.push_back({ea.row * b.rows_ + eb.row, ea.col * b.cols_ + eb.col, ea.val * eb.val});
        m.normalized_ = false;
        return m;
    }

    static SparseMatrix vcat(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.cols_ != b.cols_) throw std::invalid_argument("SparseMatrix::vcat: column mismatch");
        SparseMatrix m(a.rows_ + b.rows_, a.cols_);
        for (const auto& e : a.entries()) m.entries_.push_back(e);
        for (const auto& e : b.entries()) m.entries_.push_back({e.row + a.rows_, e.col, e.val});
        m.normalized_ = true;
        return m;
    }

    static SparseMatrix hcat(const SparseMatrix& a, const SparseMatrix& b) {
        if (a.rows_ != b.rows_) throw std::invalid_argument("SparseMatrix::hcat: row mismatch");
        SparseMatrix m(a.rows_, a.cols_ + b.cols_);
        for (const auto& e : a.entries()) m.entries_.push_back(e);
        for (const auto& e : b.entries()) m.entries_.push_back({e.row, e.col + a.cols_, e.val});
        m.normalized_ = false;
        return m;
    }

    static SparseMatrix from_rows(const std::vector<Vec<F>>& rows, std::size_t cols) {
        SparseMatrix m(rows.size(), cols);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (rows[r].size() != cols) throw std::invalid_argument("SparseMatrix::from_rows: ragged input");
            for (std::size_t c = 0; c < cols; ++c)
                if (!rows[r][c].is_zero()) m.entries_.push_back({r, c, rows[r][c]});
        }
        m.normalized_ = true;
        return m;
    }

    static SparseMatrix from_columns(const std::vector<Vec<F>>& cols, std::size_t rows) {
        SparseMatrix m(rows, cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) {
            if (cols[c].size() != rows) throw std::invalid_argument("SparseMatrix::from_columns: ragged input");
            for (std::size_t r = 0; r < rows; ++r)
                if (!cols[c][r].is_zero()) m.entries_.push_back({r, c, cols[c][r]});
        }
        m.normalized_ = false;
        return m;
    }

    Vec<F> row_vec(std::size_t r) const {
        Vec<F> v(cols_, F::zero());
        for (const auto& e : entries())
            if (e.row == r) v[e.col] = e.val;
        return v;
    }

    Vec<F> col_vec(std::size_t c) const {
        Vec<F> v(rows_, F::zero());
        for (const auto& e : entries())
            if (e.col == c) v[e.row] = e.val;
        return v;
    }

private:
    void require_shape(std::size_t r, std::size_t c, const char* op) const {
        if (rows_ != r || cols_ != c)
            throw std::invalid_argument(std::string("SparseMatrix::") + op + ": shape mismatch");
    }

    std::size_t rows_, cols_;
    mutable std::vector<Entry> entries_;
    mutable bool normalized_ = true;
};

// Row echelon machinery. Deterministic throughout: pivots are chosen by
// lowest column index, rows processed in input order; no pivoting heuristics.
// The eliminator keeps rows sparse (sorted col/val lists) while the input is
// thin and switches to dense rows past a density threshold.
template <class F>
struct RrefResult {
    std::size_t rows = 0, cols = 0, rank = 0;
    std::vector<std::size_t> pivot_cols;   // increasing
    SparseMatrix<F> reduced;               // rank x cols, fully reduced rows
};

namespace detail {

template <class F>
using SparseRow = std::vector<std::pair<std::size_t, F>>; // sorted by column

template <class F>
SparseRow<F> axpy(const SparseRow<F>& x, const F& a, const SparseRow<F>& y) {
    // x + a*y, merged by column
    SparseRow<F> out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            out.push_back(x[i++]);
        } else if (i == x.size() || y[j].first < x[i].first) {
            F v = a * y[j].second;
            if (!v.is_zero()) out.emplace_back(y[j].first, v);
            ++j;
        } else {
            F v = x[i].second + a * y[j].second;
            if (!v.is_zero()) out.emplace_back(x[i].first, v);
            ++i; ++j;
        }
    }
    return out;
}

} // namespace detail

template <class F>
RrefResult<F> rref(const SparseMatrix<F>& m, int force_mode = 0) {
    // force_mode: 0 = auto (dense when density > 0.25), 1 = sparse, 2 = dense.
    RrefResult<F> res;
    res.rows = m.rows();
    res.cols = m.cols();
    bool dense = force_mode == 2 || (force_mode == 0 && m.density() > 0.25);

    if (dense) {
        std::vector<Vec<F>> rows(m.rows(), Vec<F>(m.cols(), F::zero()));
        for (const auto& e : m.entries()) rows[e.row][e.col] = e.val;
        std::vector<Vec<F>> red;       // reduced rows so far
        std::vector<std::size_t> piv;  // their pivot columns
        for (auto& r : rows) {
            for (std::size_t k = 0; k < red.size(); ++k) {
                const F& c = r[piv[k]];
                if (c.is_zero()) continue;
                F f = -c;
                for (std::size_t j = 0; j < m.cols(); ++j)
                    if (!red[k][j].is_zero()) r[j] += f * red[k][j];
            }
            std::size_t p = 0;
            while (p < r.size() && r[p].is_zero()) ++p;
            if (p == r.size()) continue;
            F lead = r[p];
            for (auto& x : r) x = x / lead;
            for (std::size_t k = 0; k < red.size(); ++k) {
                const F& c = red[k][p];
                if (c.is_zero()) continue;
                F f = -c;
                for (std::size_t j = 0; j < m.cols(); ++j)
                    if (!r[j].is_zero()) red[k][j] += f * r[j];
            }
            // insert keeping pivot columns sorted
            std::size_t pos = 0;
            while (pos < piv.size() && piv[pos] < p) ++pos;
            red.insert(red.begin() + pos, std::move(r));
            piv.insert(piv.begin() + pos, p);
        }
        res.rank = red.size();
        res.pivot_cols = piv;
        res.reduced = SparseMatrix<F>::from_rows(red, m.cols());
        return res;
    }

    std::vector<detail::SparseRow<F>> red;
    std::vector<std::size_t> piv;
    std::vector<detail::SparseRow<F>> input(m.rows());
    for (const auto& e : m.entries()) input[e.row].emplace_back(e.col, e.val);
    for (auto& r : input) {
        for (std::size_t k = 0; k < red.size(); ++k) {
            auto it = std::lower_bound(r.begin(), r.end(), piv[k],
                                       [](const std::pair<std::size_t, F>& e, std::size_t c) { return e.first < c; });
            if (it == r.end() || it->first != piv[k]) continue;
            r = detail::axpy(r, -it->second, red[k]);
        }
        if (r.empty()) continue;
        F lead = r.front().second;
        std::size_t p = r.front().first;
        for (auto& e : r) e.second = e.second / lead;
        for (std::size_t k = 0; k < red.size(); ++k) {
            auto it = std::lower_bound(red[k].begin(), red[k].end(), p,
                                       [](const std::pair<std::size_t, F>& e, std::size_t c) { return e.first < c; });
            if (it == red[k].end() || it->first != p) continue;
            red[k] = detail::axpy(red[k], -it->second, r);
        }
        std::size_t pos = 0;
        while (pos < piv.size() && piv[pos] < p) ++pos;
        red.insert(red.begin() + pos, std::move(r));
        piv.insert(piv.begin() + pos, p);
    }
    res.rank = red.size();
    res.pivot_cols = piv;
    SparseMatrix<F> out(red.size(), m.cols());
    for (std::size_t r = 0; r < red.size(); ++r)
        for (const auto& e : red[r]) out.add(r, e.first, e.second);
    res.reduced = out;
    return res;
}

template <class F>
std::size_t mat_rank(const SparseMatrix<F>& m) { return rref(m).rank; }

// Kernel basis from the RREF: one vector per free column, reduced w.r.t. the
// deterministic pivot rule (entry 1 at the free column, back-filled pivots).
template <class F>
std::vector<Vec<F>> mat_kernel(const SparseMatrix<F>& m) {
    RrefResult<F> r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (std::size_t p : r.pivot_cols) is_pivot[p] = true;
    std::vector<Vec<F>> basis;
    for (std::size_t c = 0; c < m.cols(); ++c) {
        if (is_pivot[c]) continue;
        Vec<F> v(m.cols(), F::zero());
        v[c] = F::one();
        for (std::size_t i = 0; i < r.rank; ++i) {
            F coeff = r.reduced.get(i, c);
            if (!coeff.is_zero()) v[r.pivot_cols[i]] = -coeff;
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

// Deterministic solve: free variables are set to zero; empty optional when
// the system is inconsistent.
template <class F>
std::optional<Vec<F>> mat_solve(const SparseMatrix<F>& m, const Vec<F>& b) {
    if (b.size() != m.rows()) throw std::invalid_argument("mat_solve: rhs length mismatch");
    SparseMatrix<F> aug(m.rows(), m.cols() + 1);
    for (const auto& e : m.entries()) aug.add(e.row, e.col, e.val);
    for (std::size_t i = 0; i < b.size(); ++i)
        if (!b[i].is_zero()) aug.add(i, m.cols(), b[i]);
    RrefResult<F> r = rref(aug);
    Vec<F> x(m.cols(), F::zero());
    for (std::size_t i = 0; i < r.rank; ++i) {
        if (r.pivot_cols[i] == m.cols()) return std::nullopt; // pivot in the rhs column
        x[r.pivot_cols[i]] = r.reduced.get(i, m.cols());
    }
    return x;
}

// Inverse of a square matrix, or empty when singular.
template <class F>
std::optional<SparseMatrix<F>> mat_inverse(const SparseMatrix<F>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("mat_inverse: matrix not square");
    std::size_t n = m.rows();
    RrefResult<F> r = rref(SparseMatrix<F>::hcat(m, SparseMatrix<F>::identity(n)));
    if (r.rank != n) return std::nullopt;
    for (std::size_t i = 0; i < n; ++i)
        if (r.pivot_cols[i] != i) return std::nullopt;
    SparseMatrix<F> inv(n, n);
    for (const auto& e : r.reduced.entries())
        if (e.col >= n) inv.add(e.row, e.col - n, e.val);
    return inv;
}

// Incremental echelon basis of a subspace; used for filtrations, spectral
// sequences and membership tests.
template <class F>
class Echelon {
public:
    explicit Echelon(std::size_t cols) : cols_(cols) {}

    std::size_t dim() const { return rows_.size(); }
    std::size_t cols() const { return cols_; }

    // Returns true when v was independent (and so grew the basis).
    bool insert(Vec<F> v) {
        reduce_in_place(v);
        std::size_t p = 0;
        while (p < cols_ && v[p].is_zero()) ++p;
        if (p == cols_) return false;
        F lead = v[p];
        for (auto& x : v) x = x / lead;
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const F& c = rows_[k][p];
            if (c.is_zero()) continue;
            F f = -c;
            for (std::size_t j = 0; j < cols_; ++j)
                if (!v[j].is_zero()) rows_[k][j] += f * v[j];
        }
        std::size_t pos = 0;
        while (pos < pivots_.size() && pivots_[pos] < p) ++pos;
        rows_.insert(rows_.begin() + pos, std::move(v));
        pivots_.insert(pivots_.begin() + pos, p);
        return true;
    }

    void insert_all(const std::vector<Vec<F>>& vs) {
        for (const auto& v : vs) insert(v);
    }

    Vec<F> reduce(Vec<F> v) const {
        reduce_in_place(v);
        return v;
    }

    bool contains(const Vec<F>& v) const { return is_zero_vec(reduce(v)); }

    const std::vector<Vec<F>>& basis() const { return rows_; }
    const std::vector<std::size_t>& pivots() const { return pivots_; }

    // Unit vectors at non-pivot coordinates: a deterministic complement.
    std::vector<Vec<F>> complement() const {
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t p : pivots_) is_pivot[p] = true;
        std::vector<Vec<F>> out;
        for (std::size_t c = 0; c < cols_; ++c)
            if (!is_pivot[c]) out.push_back(unit_vec<F>(cols_, c));
        return out;
    }

    // Coordinates of v on the complement basis: v reduced then read off at
    // non-pivot positions. v lies in the subspace iff these all vanish.
    Vec<F> complement_coordinates(const Vec<F>& v) const {
        Vec<F> red = reduce(v);
        std::vector<bool> is_pivot(cols_, false);
        for (std::size_t p : pivots_) is_pivot[p] = true;
        Vec<F> out;
        for (std::size_t c = 0; c < cols_; ++c)
            if (!is_pivot[c]) out.push_back(red[c]);
        return out;
    }

private:
    void reduce_in_place(Vec<F>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Echelon: length mismatch");
        for (std::size_t k = 0; k < rows_.size(); ++k) {
            const F& c = v[pivots_[k]];
            if (c.is_zero()) continue;
            F f = -c;
            for (std::size_t j = 0; j < cols_; ++j)
                if (!rows_[k][j].is_zero()) v[j] += f * rows_[k][j];
        }
    }

    std::size_t cols_;
    std::vector<Vec<F>> rows_;
    std::vector<std::size_t> pivots_;
};

// Intersection of two subspaces given by spanning sets, via the kernel of
// the stacked coefficient matrix.
template <class F>
std::vector<Vec<F>> subspace_intersection(const std::vector<Vec<F>>& u,
                                          const std::vector<Vec<F>>& w,
                                          std::size_t ambient) {
    if (u.empty() || w.empty()) return {};
    SparseMatrix<F> m(ambient, u.size() + w.size());
    for (std::size_t j = 0; j < u.size(); ++j)
        for (std::size_t i = 0; i < ambient; ++i)
            if (!u[j][i].is_zero()) m.add(i, j, u[j][i]);
    for (std::size_t j = 0; j < w.size(); ++j)
        for (std::size_t i = 0; i < ambient; ++i)
            if (!w[j][i].is_zero()) m.add(i, u.size() + j, -w[j][i]);
    Echelon<F> ech(ambient);
    for (const auto& kv : mat_kernel(m)) {
        Vec<F> v(ambient, F::zero());
        for (std::size_t j = 0; j < u.size(); ++j)
            if (!kv[j].is_zero())
                for (std::size_t i = 0; i < ambient; ++i) v[i] += kv[j] * u[j][i];
        ech.insert(std::move(v));
    }
    // Echelonized basis: deterministic regardless of the spanning sets given.
    return ech.basis();
}

} // namespace xhom
