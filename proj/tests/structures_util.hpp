#pragma once

// Small hand-checked structures shared across test suites.

#include <vector>

#include "xhom/algebra.hpp"
#include "xhom/braided.hpp"
#include "xhom/space.hpp"

namespace xhom::testutil {

template <class F>
SparseMatrix<F> table(std::size_t rows, std::size_t cols, const std::vector<long>& vals) {
    SparseMatrix<F> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (vals[i * cols + j] != 0) m.add(i, j, F::from_int(vals[i * cols + j]));
    return m;
}

template <class F>
Vec<F> unit_of(std::size_t dim) {
    Vec<F> v(dim, F::zero());
    v[0] = F::one();
    return v;
}

// Group algebra k[Z/2] = <1, g>, flip braiding, S = id.
template <class F>
BraidedBialgebra<F> z2_hopf() {
    auto space = make_space<F>("kZ2", {"1", "g"});
    auto alg = make_algebra<F>(space,
                               table<F>(2, 4, {1, 0, 0, 1, //
                                               0, 1, 1, 0}),
                               unit_of<F>(2));
    auto coalg = make_coalgebra<F>(space,
                                   table<F>(4, 2, {1, 0, //
                                                   0, 0, //
                                                   0, 0, //
                                                   0, 1}),
                                   table<F>(1, 2, {1, 1}));
    return make_braided<F>(alg, coalg, flip_matrix<F>(2, 2),
                           table<F>(2, 2, {1, 0, 0, 1}));
}

// Super-line k[y]/(y^2) with primitive y, braiding the graded flip
// c(y⊗y) = -y⊗y, antipode S(y) = -y.
template <class F>
BraidedBialgebra<F> superline_hopf() {
    auto space = make_space<F>("kY", {"1", "y"});
    auto alg = make_algebra<F>(space,
                               table<F>(2, 4, {1, 0, 0, 0, //
                                               0, 1, 1, 0}),
                               unit_of<F>(2));
    auto coalg = make_coalgebra<F>(space,
                                   table<F>(4, 2, {1, 0, //
                                                   0, 1, //
                                                   0, 1, //
                                                   0, 0}),
                                   table<F>(1, 2, {1, 0}));
    auto braid = table<F>(4, 4, {1, 0, 0, 0, //
                                 0, 0, 1, 0, //
                                 0, 1, 0, 0, //
                                 0, 0, 0, -1});
    return make_braided<F>(alg, coalg, braid, table<F>(2, 2, {1, 0, 0, -1}));
}

// Monoid bialgebra k{1, t} with t^2 = t and grouplike t; has no antipode.
template <class F>
BraidedBialgebra<F> monoid_bialgebra() {
    auto space = make_space<F>("kM", {"1", "t"});
    auto alg = make_algebra<F>(space,
                               table<F>(2, 4, {1, 0, 0, 0, //
                                               0, 1, 1, 1}),
                               unit_of<F>(2));
    auto coalg = make_coalgebra<F>(space,
                                   table<F>(4, 2, {1, 0, //
                                                   0, 0, //
                                                   0, 0, //
                                                   0, 1}),
                                   table<F>(1, 2, {1, 1}));
    return make_braided<F>(alg, coalg, flip_matrix<F>(2, 2));
}

// Dual numbers k[x]/(x^2).
template <class F>
Algebra<F> kx2_algebra() {
    auto space = make_space<F>("kX", {"1", "x"});
    return make_algebra<F>(space,
                           table<F>(2, 4, {1, 0, 0, 0, //
                                           0, 1, 1, 0}),
                           unit_of<F>(2));
}

// 2x2 matrix algebra, basis E11, E12, E21, E22.
template <class F>
Algebra<F> mat2_algebra() {
    auto space = make_space<F>("M2", {"E11", "E12", "E21", "E22"});
    SparseMatrix<F> mult(4, 16);
    auto idx = [](std::size_t i, std::size_t j) { return i * 2 + j; };
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l)
                    if (j == k) mult.add(idx(i, l), idx(i, j) * 4 + idx(k, l), F::one());
    Vec<F> unit(4, F::zero());
    unit[0] = F::one();
    unit[3] = F::one();
    return Algebra<F>{space, LinMap<F>(make_tensor_space<F>("M2^2", {space, space}), space, mult),
                      unit};
}

// rho(g⊗x) = sign * x on (k[Z/2], k[x]/(x^2)).
template <class F>
WeakAction<F> z2_sign_action(const BraidedBialgebra<F>& h, const Algebra<F>& a, long sign) {
    return make_weak_action<F>(h, a,
                               table<F>(2, 4, {1, 0, 1, 0, //
                                               0, 1, 0, sign}));
}

// Trivial cocycle f = eta∘(eps⊗eps), optionally overriding f(g⊗g) = x.
template <class F>
BraidedCocycle<F> z2_cocycle(const BraidedBialgebra<F>& h, const Algebra<F>& a, bool gg_to_x) {
    auto m = table<F>(2, 4, {1, 1, 1, 1, //
                             0, 0, 0, 0});
    if (gg_to_x) {
        m = table<F>(2, 4, {1, 1, 1, 0, //
                            0, 0, 0, 1});
    }
    return make_cocycle<F>(h, a, m);
}

} // namespace xhom::testutil
