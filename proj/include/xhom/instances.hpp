#pragma once

// Built-in instances: small crossed products exercising every code path
// (group algebra, graded smash products, a nontrivial cocycle, a raw
// non-Hopf twisting, and a prime-2 variant). Each builder returns the
// validated product together with the candidate coefficient (K) and
// stability (R) sub-bases.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xhom/crossed_product.hpp"

namespace xhom {

template <class F>
struct Instance {
    std::string name;
    std::string kind;            // "brzezinski" | "hopf-crossed" | "yd-group"
    std::string preferred_field; // cli default, e.g. "p:101" or "p:2"
    CrossedProduct<F> product;
    ValidationReport report;
    std::vector<std::vector<std::size_t>> coeff_choices;  // K options, default first
    std::vector<std::vector<std::size_t>> stable_choices; // R options, default first
};

namespace builtin {

template <class F>
SparseMatrix<F> from_table(std::size_t rows, std::size_t cols, const std::vector<long>& vals) {
    SparseMatrix<F> m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (vals[i * cols + j] != 0) m.add(i, j, F::from_int(vals[i * cols + j]));
    return m;
}

template <class F>
Vec<F> basis_unit(std::size_t dim) {
    Vec<F> v(dim, F::zero());
    v[0] = F::one();
    return v;
}

// k itself.
template <class F>
Algebra<F> trivial_algebra() {
    auto space = make_space<F>("k1", {"1"});
    return make_algebra<F>(space, from_table<F>(1, 1, {1}), basis_unit<F>(1));
}

// k[Z/2] as a plain algebra, basis {1, g}.
template <class F>
Algebra<F> z2_group_algebra() {
    auto space = make_space<F>("kZ2", {"1", "g"});
    return make_algebra<F>(space,
                           from_table<F>(2, 4,
                                         {1, 0, 0, 1, //
                                          0, 1, 1, 0}),
                           basis_unit<F>(2));
}

// k[x]/(x^2), basis {1, x}.
template <class F>
Algebra<F> dual_numbers() {
    auto space = make_space<F>("kX", {"1", "x"});
    return make_algebra<F>(space,
                           from_table<F>(2, 4,
                                         {1, 0, 0, 0, //
                                          0, 1, 1, 0}),
                           basis_unit<F>(2));
}

// k[Z/2] as a Hopf algebra: flip braiding, antipode the identity.
template <class F>
BraidedBialgebra<F> z2_group_hopf() {
    auto alg = z2_group_algebra<F>();
    auto coalg = make_coalgebra<F>(alg.space,
                                   from_table<F>(4, 2,
                                                 {1, 0, //
                                                  0, 0, //
                                                  0, 0, //
                                                  0, 1}),
                                   from_table<F>(1, 2, {1, 1}));
    return make_braided<F>(alg, coalg, flip_matrix<F>(2, 2),
                           SparseMatrix<F>::identity(2));
}

// The graded line k[y]/(y^2) with y primitive and odd: the braiding is the
// graded flip, the antipode negates y.
template <class F>
BraidedBialgebra<F> superline_hopf() {
    auto space = make_space<F>("kY", {"1", "y"});
    auto alg = make_algebra<F>(space,
                               from_table<F>(2, 4,
                                             {1, 0, 0, 0, //
                                              0, 1, 1, 0}),
                               basis_unit<F>(2));
    auto coalg = make_coalgebra<F>(space,
                                   from_table<F>(4, 2,
                                                 {1, 0, //
                                                  0, 1, //
                                                  0, 1, //
                                                  0, 0}),
                                   from_table<F>(1, 2, {1, 0}));
    auto braid = from_table<F>(4, 4,
                               {1, 0, 0, 0, //
                                0, 0, 1, 0, //
                                0, 1, 0, 0, //
                                0, 0, 0, -1});
    auto antipode = from_table<F>(2, 2,
                                  {1, 0, //
                                   0, -1});
    return make_braided<F>(alg, coalg, braid, antipode);
}

// H⊗A -> A⊗H for 2-dimensional H = {1, h} and A = {1, a}: the flip with the
// given sign on h⊗a.
template <class F>
SparseMatrix<F> signed_flip(long sign) {
    return from_table<F>(4, 4,
                         {1, 0, 0, 0, //
                          0, 0, 1, 0, //
                          0, 1, 0, 0, //
                          0, 0, 0, sign});
}

// rho(h⊗a) = eps(h)a for 2-dimensional H (second basis vector counit 0) and
// 2-dimensional A.
template <class F>
SparseMatrix<F> trivial_action_2x2() {
    return from_table<F>(2, 4,
                         {1, 0, 0, 0, //
                          0, 1, 0, 0});
}

} // namespace builtin

inline std::vector<std::string> builtin_names() {
    return {"group-z2", "group-z2-char2", "sweedler", "superline-smash",
            "quantum-plane-q", "yd-z2"};
}

// Builds a named instance over the active field. For quantum-plane-q the unit
// q defaults to 3, falling back to -1 when 3 vanishes in the field.
template <class F>
Instance<F> make_builtin(const std::string& name, std::optional<F> q = std::nullopt) {
    using builtin::from_table;
    Instance<F> inst;
    inst.name = name;
    inst.preferred_field = "p:101";

    if (name == "group-z2" || name == "group-z2-char2") {
        auto h = builtin::z2_group_hopf<F>();
        auto a = builtin::trivial_algebra<F>();
        auto s = make_transposition<F>(h, a, SparseMatrix<F>::identity(2));
        auto rho = make_weak_action<F>(h, a, from_table<F>(1, 2, {1, 1}));
        auto f = make_cocycle<F>(h, a, from_table<F>(1, 4, {1, 1, 1, 1}));
        auto built = build_hopf_crossed(h, a, s, rho, f, {0});
        inst.kind = "hopf-crossed";
        if (name == "group-z2-char2") inst.preferred_field = "p:2";
        inst.product = std::move(built.product);
        inst.report = std::move(built.report);
        inst.coeff_choices = {{0}};
        inst.stable_choices = {{0}};
        return inst;
    }
    if (name == "sweedler") {
        auto h = builtin::superline_hopf<F>();
        auto a = builtin::z2_group_algebra<F>();
        auto s = make_transposition<F>(h, a, builtin::signed_flip<F>(-1));
        auto rho = make_weak_action<F>(h, a, builtin::trivial_action_2x2<F>());
        auto f = make_cocycle<F>(h, a,
                                 from_table<F>(2, 4,
                                               {1, 0, 0, 0, //
                                                0, 0, 0, 0}));
        auto built = build_hopf_crossed(h, a, s, rho, f, {0});
        inst.kind = "hopf-crossed";
        inst.product = std::move(built.product);
        inst.report = std::move(built.report);
        inst.coeff_choices = {{0}, {0, 1}};
        inst.stable_choices = {{0}, {0, 1}};
        return inst;
    }
    if (name == "superline-smash") {
        auto h = builtin::superline_hopf<F>();
        auto a = builtin::dual_numbers<F>();
        auto s = make_transposition<F>(h, a, builtin::signed_flip<F>(-1));
        auto rho = make_weak_action<F>(h, a, builtin::trivial_action_2x2<F>());
        auto f = make_cocycle<F>(h, a,
                                 from_table<F>(2, 4,
                                               {1, 0, 0, 0, //
                                                0, 0, 0, 0}));
        auto built = build_hopf_crossed(h, a, s, rho, f, {0});
        inst.kind = "hopf-crossed";
        inst.product = std::move(built.product);
        inst.report = std::move(built.report);
        inst.coeff_choices = {{0}, {0, 1}};
        inst.stable_choices = {{0}, {0, 1}};
        return inst;
    }
    if (name == "quantum-plane-q") {
        auto a = builtin::dual_numbers<F>();
        auto fiber = make_space<F>("kV", {"1", "v"});
        F qq = q ? *q : (F::from_int(3).is_zero() ? -F::one() : F::from_int(3));
        if (qq.is_zero())
            throw std::invalid_argument("quantum-plane-q: q must be a field unit");
        SparseMatrix<F> chi(4, 4);
        chi.add(0, 0, F::one());
        chi.add(2, 1, F::one());
        chi.add(1, 2, F::one());
        chi.add(3, 3, qq);
        SparseMatrix<F> coc(4, 4);
        coc.add(0, 0, F::one());
        coc.add(1, 1, F::one());
        coc.add(1, 2, F::one());
        auto built = build_brzezinski(a, fiber, builtin::basis_unit<F>(2), chi, coc, {0});
        inst.kind = "brzezinski";
        inst.product = std::move(built.product);
        inst.report = std::move(built.report);
        inst.coeff_choices = {{0}, {0, 1}};
        inst.stable_choices = {{0}, {0, 1}};
        return inst;
    }
    if (name == "yd-z2") {
        auto h = builtin::z2_group_hopf<F>();
        auto a = builtin::dual_numbers<F>();
        auto s = make_transposition<F>(h, a, builtin::signed_flip<F>(1));
        auto rho = make_weak_action<F>(h, a,
                                       from_table<F>(2, 4,
                                                     {1, 0, 1, 0, //
                                                      0, 1, 0, -1}));
        auto f = make_cocycle<F>(h, a,
                                 from_table<F>(2, 4,
                                               {1, 1, 1, -1, //
                                                0, 0, 0, 0}));
        auto built = build_hopf_crossed(h, a, s, rho, f, {0});
        inst.kind = "yd-group";
        inst.product = std::move(built.product);
        inst.report = std::move(built.report);
        inst.coeff_choices = {{0}, {0, 1}};
        inst.stable_choices = {{0}, {0, 1}};
        return inst;
    }
    throw std::invalid_argument("unknown builtin instance: " + name);
}

} // namespace xhom
