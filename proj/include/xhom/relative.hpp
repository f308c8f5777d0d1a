#pragma once

#include <string>

#include "xhom/linmap.hpp"
#include "xhom/space.hpp"

namespace xhom {

// Relative tensor product m (x)_K n: quotient of m (x) n by the span of
// m.lambda (x) n - m (x) lambda.n over basis triples. The subalgebra K enters
// through its two action matrices; right_action: M (x) K -> M (input index
// i*k_dim + t), left_action: K (x) N -> N (input index t*dim N + j).
//
// When every generated relation vanishes (K = k acting by scaling, say) the
// plain tensor space is returned unchanged.
template <class F>
SpacePtr<F> relative_tensor(const std::string& name, SpacePtr<F> m, SpacePtr<F> n,
                            const SparseMatrix<F>& right_action, const SparseMatrix<F>& left_action,
                            std::size_t k_dim) {
    if (right_action.cols() != m->dim() * k_dim || right_action.rows() != m->dim())
        throw std::invalid_argument("relative_tensor: right action shape mismatch");
    if (left_action.cols() != k_dim * n->dim() || left_action.rows() != n->dim())
        throw std::invalid_argument("relative_tensor: left action shape mismatch");

    auto tensor = make_tensor_space<F>(name + "~free", {m, n});
    std::size_t dm = m->dim(), dn = n->dim();
    SparseMatrix<F> rels(dm * dn * k_dim, dm * dn);
    std::size_t row = 0;
    bool any = false;
    for (std::size_t i = 0; i < dm; ++i)
        for (std::size_t t = 0; t < k_dim; ++t) {
            Vec<F> mi_lam = right_action.col_vec(i * k_dim + t); // m_i . lambda_t in M coords
            for (std::size_t j = 0; j < dn; ++j) {
                for (std::size_t p = 0; p < dm; ++p)
                    if (!mi_lam[p].is_zero()) { rels.add(row, p * dn + j, mi_lam[p]); any = true; }
                Vec<F> lam_nj = left_action.col_vec(t * dn + j); // lambda_t . n_j in N coords
                for (std::size_t q = 0; q < dn; ++q)
                    if (!lam_nj[q].is_zero()) { rels.add(row, i * dn + q, -lam_nj[q]); any = true; }
                ++row;
            }
        }
    (void)any;
    if (rref(rels).rank == 0) {
        auto plain = make_tensor_space<F>(name, {m, n});
        return plain;
    }
    return make_quotient_space<F>(name, tensor, rels);
}

// Coinvariants M(x) = M/[M,K]: quotient by lambda.m - m.lambda.
// left_action: K (x) M -> M (input index t*dim M + i); right_action:
// M (x) K -> M (input index i*k_dim + t).
template <class F>
SpacePtr<F> coinvariants(const std::string& name, SpacePtr<F> m,
                         const SparseMatrix<F>& left_action, const SparseMatrix<F>& right_action,
                         std::size_t k_dim) {
    if (left_action.cols() != k_dim * m->dim() || left_action.rows() != m->dim())
        throw std::invalid_argument("coinvariants: left action shape mismatch");
    if (right_action.cols() != m->dim() * k_dim || right_action.rows() != m->dim())
        throw std::invalid_argument("coinvariants: right action shape mismatch");

    std::size_t dm = m->dim();
    SparseMatrix<F> rels(dm * k_dim, dm);
    std::size_t row = 0;
    for (std::size_t t = 0; t < k_dim; ++t)
        for (std::size_t i = 0; i < dm; ++i) {
            Vec<F> lm = left_action.col_vec(t * dm + i);
            Vec<F> ml = right_action.col_vec(i * k_dim + t);
            for (std::size_t p = 0; p < dm; ++p) {
                F v = lm[p] - ml[p];
                if (!v.is_zero()) rels.add(row, p, v);
            }
            ++row;
        }
    if (rref(rels).rank == 0) return m;
    return make_quotient_space<F>(name, m, rels);
}

} // namespace xhom
