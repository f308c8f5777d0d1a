#pragma once

#include <cstddef>
#include <vector>

#include "xhom/sparse_matrix.hpp"

namespace xhom {

// Presentation of a quotient vector space parent/span(relations).
//
// The quotient basis consists of the classes of the parent basis vectors at
// the non-pivot (free) columns of the echelonized relation matrix, in
// increasing column order. projection sends a parent vector to its class in
// those coordinates; section embeds the class representatives back.
template <class F>
struct QuotientPresentation {
    std::size_t parent_dim = 0;
    std::size_t dim = 0;
    std::vector<std::size_t> free_cols;   // quotient basis = classes of e_{free_cols[i]}
    SparseMatrix<F> relations;            // echelonized, rank x parent_dim
    SparseMatrix<F> projection;           // dim x parent_dim
    SparseMatrix<F> section;              // parent_dim x dim

    static QuotientPresentation trivial(std::size_t n) {
        QuotientPresentation q;
        q.parent_dim = q.dim = n;
        q.free_cols.resize(n);
        for (std::size_t i = 0; i < n; ++i) q.free_cols[i] = i;
        q.relations = SparseMatrix<F>(0, n);
        q.projection = SparseMatrix<F>::identity(n);
        q.section = SparseMatrix<F>::identity(n);
        return q;
    }

    bool is_trivial() const { return parent_dim == dim; }
};

template <class F>
QuotientPresentation<F> quotient_space(std::size_t parent_dim, const SparseMatrix<F>& relations) {
    if (relations.cols() != parent_dim)
        throw std::invalid_argument("quotient_space: relation width mismatch");
    RrefResult<F> r = rref(relations);
    QuotientPresentation<F> q;
    q.parent_dim = parent_dim;
    q.dim = parent_dim - r.rank;
    q.relations = r.reduced;
    std::vector<bool> is_pivot(parent_dim, false);
    for (std::size_t p : r.pivot_cols) is_pivot[p] = true;
    for (std::size_t c = 0; c < parent_dim; ++c)
        if (!is_pivot[c]) q.free_cols.push_back(c);

    // e_{free j} |-> its own class; e_{pivot_i} |-> -(free part of row i).
    std::vector<std::size_t> quotient_index(parent_dim, static_cast<std::size_t>(-1));
    for (std::size_t j = 0; j < q.free_cols.size(); ++j) quotient_index[q.free_cols[j]] = j;
    SparseMatrix<F> proj(q.dim, parent_dim);
    for (std::size_t j = 0; j < q.free_cols.size(); ++j) proj.add(j, q.free_cols[j], F::one());
    for (std::size_t i = 0; i < r.rank; ++i) {
        std::size_t p = r.pivot_cols[i];
        for (const auto& e : r.reduced.entries()) {
            if (e.row != i || e.col == p) continue;
            proj.add(quotient_index[e.col], p, -e.val);
        }
    }
    q.projection = proj;

    SparseMatrix<F> sect(parent_dim, q.dim);
    for (std::size_t j = 0; j < q.free_cols.size(); ++j) sect.add(q.free_cols[j], j, F::one());
    q.section = sect;
    return q;
}

} // namespace xhom
