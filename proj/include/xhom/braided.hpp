#pragma once

// Braided bialgebras and Hopf algebras, transpositions, weak actions and
// cocycles, with exact validators for every defining axiom, plus the
// convolution algebra on Hom(C, E) (convolve, unit, inverses, antipode).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "xhom/algebra.hpp"
#include "xhom/linmap.hpp"
#include "xhom/space.hpp"

namespace xhom {

template <class F>
struct BraidedBialgebra {
    Algebra<F> alg;
    Coalgebra<F> coalg;
    LinMap<F> braid;     // c: H⊗H -> H⊗H
    LinMap<F> braid_inv; // zero map when the braid is singular
    bool braid_invertible = false;
    std::optional<LinMap<F>> antipode; // present for a braided Hopf algebra

    const SpacePtr<F>& space() const { return alg.space; }
    std::size_t dim() const { return alg.dim(); }
    const LinMap<F>& mult() const { return alg.mult; }
    const LinMap<F>& comult() const { return coalg.comult; }
    const LinMap<F>& counit() const { return coalg.counit; }
    LinMap<F> unit_map() const { return alg.unit_map(); }
};

template <class F>
BraidedBialgebra<F> make_braided(Algebra<F> alg, Coalgebra<F> coalg,
                                 const SparseMatrix<F>& braid_matrix,
                                 std::optional<SparseMatrix<F>> antipode_matrix = std::nullopt) {
    if (alg.space != coalg.space)
        throw std::invalid_argument("make_braided: algebra and coalgebra must share a space");
    BraidedBialgebra<F> h;
    auto sq = make_tensor_space<F>(alg.space->name + "^2", {alg.space, alg.space});
    h.braid = LinMap<F>(sq, sq, braid_matrix);
    auto inv = mat_inverse(braid_matrix);
    if (inv) {
        h.braid_inv = LinMap<F>(sq, sq, *inv);
        h.braid_invertible = true;
    } else {
        h.braid_inv = zero_map(sq, sq);
    }
    if (antipode_matrix)
        h.antipode = LinMap<F>(alg.space, alg.space, *antipode_matrix);
    h.alg = std::move(alg);
    h.coalg = std::move(coalg);
    return h;
}

// s: H⊗A -> A⊗H, invertible.
template <class F>
struct Transposition {
    LinMap<F> map;
    LinMap<F> inverse;
    bool invertible = false;
};

template <class F>
Transposition<F> make_transposition(const BraidedBialgebra<F>& h, const Algebra<F>& a,
                                    const SparseMatrix<F>& matrix) {
    auto ha = make_tensor_space<F>("H&A", {h.space(), a.space});
    auto ah = make_tensor_space<F>("A&H", {a.space, h.space()});
    Transposition<F> t;
    t.map = LinMap<F>(ha, ah, matrix);
    auto inv = mat_inverse(matrix);
    if (inv) {
        t.inverse = LinMap<F>(ah, ha, *inv);
        t.invertible = true;
    } else {
        t.inverse = zero_map(ah, ha);
    }
    return t;
}

// rho: H⊗A -> A.
template <class F>
struct WeakAction {
    LinMap<F> map;
};

template <class F>
WeakAction<F> make_weak_action(const BraidedBialgebra<F>& h, const Algebra<F>& a,
                               const SparseMatrix<F>& matrix) {
    auto ha = make_tensor_space<F>("H&A", {h.space(), a.space});
    return WeakAction<F>{LinMap<F>(ha, a.space, matrix)};
}

// f: H⊗H -> A.
template <class F>
struct BraidedCocycle {
    LinMap<F> map;
};

template <class F>
BraidedCocycle<F> make_cocycle(const BraidedBialgebra<F>& h, const Algebra<F>& a,
                               const SparseMatrix<F>& matrix) {
    auto sq = make_tensor_space<F>(h.space()->name + "^2", {h.space(), h.space()});
    return BraidedCocycle<F>{LinMap<F>(sq, a.space, matrix)};
}

// ---------------------------------------------------------------------------
// Convolution algebra on Hom(C, E): u * v := mu_E ∘ (u ⊗ v) ∘ Delta_C.
// ---------------------------------------------------------------------------

template <class F>
LinMap<F> convolve(const Coalgebra<F>& c, const Algebra<F>& e,
                   const LinMap<F>& u, const LinMap<F>& v) {
    return compose_chain<F>({c.comult, tensor_of_maps<F>({u, v}), e.mult});
}

template <class F>
LinMap<F> convolution_unit(const Coalgebra<F>& c, const Algebra<F>& e) {
    return compose(e.unit_map(), c.counit);
}

namespace detail {

// Column-stacked vectorization of a hom C -> E.
template <class F>
Vec<F> vec_hom(const SparseMatrix<F>& m) {
    Vec<F> v(m.rows() * m.cols(), F::zero());
    for (const auto& en : m.entries()) v[en.col * m.rows() + en.row] = en.val;
    return v;
}

template <class F>
SparseMatrix<F> unvec_hom(const Vec<F>& v, std::size_t rows, std::size_t cols) {
    SparseMatrix<F> m(rows, cols);
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i)
            if (!v[j * rows + i].is_zero()) m.add(i, j, v[j * rows + i]);
    return m;
}

// Matrix of x -> u*x (left = false) or x -> x*u (left = true) on vec(Hom(C,E)).
template <class F>
SparseMatrix<F> convolution_operator(const Coalgebra<F>& c, const Algebra<F>& e,
                                     const LinMap<F>& u, bool left) {
    std::size_t rows = e.dim(), cols = c.dim();
    std::size_t n = rows * cols;
    SparseMatrix<F> op(n, n);
    for (std::size_t q = 0; q < cols; ++q) {
        for (std::size_t p = 0; p < rows; ++p) {
            SparseMatrix<F> elem(rows, cols);
            elem.add(p, q, F::one());
            LinMap<F> x(c.space, e.space, elem);
            LinMap<F> prod = left ? convolve(c, e, x, u) : convolve(c, e, u, x);
            Vec<F> col = vec_hom(prod.mat);
            for (std::size_t i = 0; i < n; ++i)
                if (!col[i].is_zero()) op.add(i, q * rows + p, col[i]);
        }
    }
    return op;
}

} // namespace detail

// Solves u * v = v * u = unit; empty when u is not convolution invertible.
template <class F>
std::optional<LinMap<F>> convolution_inverse(const Coalgebra<F>& c, const Algebra<F>& e,
                                             const LinMap<F>& u) {
    auto right = detail::convolution_operator(c, e, u, false); // x -> u*x
    auto left = detail::convolution_operator(c, e, u, true);   // x -> x*u
    Vec<F> unit_vec = detail::vec_hom(convolution_unit(c, e).mat);
    Vec<F> rhs(unit_vec);
    rhs.insert(rhs.end(), unit_vec.begin(), unit_vec.end());
    auto sol = mat_solve(SparseMatrix<F>::vcat(right, left), rhs);
    if (!sol) return std::nullopt;
    return LinMap<F>(c.space, e.space, detail::unvec_hom(*sol, e.dim(), c.dim()));
}

// Solves S * id = id * S = eta∘eps on a braided bialgebra.
template <class F>
std::optional<LinMap<F>> solve_antipode(const BraidedBialgebra<F>& h) {
    return convolution_inverse(h.coalg, h.alg, identity_map(h.space()));
}

// ---------------------------------------------------------------------------
// Validators. Every axiom is an exact matrix identity; failures carry the
// first differing domain basis tuple.
// ---------------------------------------------------------------------------

template <class F>
ValidationReport validate_braided(const BraidedBialgebra<F>& h) {
    ValidationReport rep;
    rep.merge(validate_algebra(h.alg));
    rep.merge(validate_coalgebra(h.coalg));

    auto id = identity_map(h.space());
    const auto& c = h.braid;
    const auto& mu = h.mult();
    const auto& de = h.comult();
    const auto& ep = h.counit();
    auto eta = h.unit_map();

    if (!h.braid_invertible) rep.failures.push_back("braid not bijective");

    check_axiom(rep, "braid equation",
                compose_chain<F>({tensor_of_maps<F>({c, id}), tensor_of_maps<F>({id, c}),
                                  tensor_of_maps<F>({c, id})}),
                compose_chain<F>({tensor_of_maps<F>({id, c}), tensor_of_maps<F>({c, id}),
                                  tensor_of_maps<F>({id, c})}));

    check_axiom(rep, "braid compatible with mult (left)",
                compose(c, tensor_of_maps<F>({mu, id})),
                compose_chain<F>({tensor_of_maps<F>({id, c}), tensor_of_maps<F>({c, id}),
                                  tensor_of_maps<F>({id, mu})}));
    check_axiom(rep, "braid compatible with mult (right)",
                compose(c, tensor_of_maps<F>({id, mu})),
                compose_chain<F>({tensor_of_maps<F>({c, id}), tensor_of_maps<F>({id, c}),
                                  tensor_of_maps<F>({mu, id})}));
    check_axiom(rep, "braid compatible with unit (left)",
                compose(c, tensor_of_maps<F>({eta, id})), tensor_of_maps<F>({id, eta}));
    check_axiom(rep, "braid compatible with unit (right)",
                compose(c, tensor_of_maps<F>({id, eta})), tensor_of_maps<F>({eta, id}));

    check_axiom(rep, "braid compatible with comult (left)",
                compose(tensor_of_maps<F>({de, id}), c),
                compose_chain<F>({tensor_of_maps<F>({id, de}), tensor_of_maps<F>({c, id}),
                                  tensor_of_maps<F>({id, c})}));
    check_axiom(rep, "braid compatible with comult (right)",
                compose(tensor_of_maps<F>({id, de}), c),
                compose_chain<F>({tensor_of_maps<F>({de, id}), tensor_of_maps<F>({id, c}),
                                  tensor_of_maps<F>({c, id})}));
    check_axiom(rep, "braid compatible with counit (left)",
                compose(tensor_of_maps<F>({ep, id}), c), tensor_of_maps<F>({id, ep}));
    check_axiom(rep, "braid compatible with counit (right)",
                compose(tensor_of_maps<F>({id, ep}), c), tensor_of_maps<F>({ep, id}));

    check_axiom(rep, "unit is a coalgebra map (comult)", compose(de, eta),
                tensor_of_maps<F>({eta, eta}));
    check_axiom(rep, "unit is a coalgebra map (counit)", compose(ep, eta),
                identity_map(ground_space<F>()));
    check_axiom(rep, "counit is an algebra map", compose(ep, mu), tensor_of_maps<F>({ep, ep}));

    check_axiom(rep, "comult compatible with mult", compose(de, mu),
                compose_chain<F>({tensor_of_maps<F>({de, de}),
                                  tensor_of_maps<F>({id, c, id}),
                                  tensor_of_maps<F>({mu, mu})}));

    if (h.antipode) {
        auto conv_unit = convolution_unit(h.coalg, h.alg);
        check_axiom(rep, "antipode (left)", convolve(h.coalg, h.alg, *h.antipode, id), conv_unit);
        check_axiom(rep, "antipode (right)", convolve(h.coalg, h.alg, id, *h.antipode), conv_unit);
    }
    return rep;
}

template <class F>
ValidationReport validate_transposition(const Transposition<F>& t, const BraidedBialgebra<F>& h,
                                        const Algebra<F>& a) {
    ValidationReport rep;
    auto idh = identity_map(h.space());
    auto ida = identity_map(a.space);
    const auto& s = t.map;
    const auto& c = h.braid;
    const auto& muh = h.mult();
    const auto& mua = a.mult;
    const auto& de = h.comult();
    const auto& ep = h.counit();
    auto etah = h.unit_map();
    auto etaa = a.unit_map();

    if (!t.invertible) rep.failures.push_back("transposition not bijective");

    check_axiom(rep, "s compatible with mult of A",
                compose(s, tensor_of_maps<F>({idh, mua})),
                compose_chain<F>({tensor_of_maps<F>({s, ida}), tensor_of_maps<F>({ida, s}),
                                  tensor_of_maps<F>({mua, idh})}));
    check_axiom(rep, "s(h⊗1) = 1⊗h", compose(s, tensor_of_maps<F>({idh, etaa})),
                tensor_of_maps<F>({etaa, idh}));
    check_axiom(rep, "s compatible with mult of H",
                compose(s, tensor_of_maps<F>({muh, ida})),
                compose_chain<F>({tensor_of_maps<F>({idh, s}), tensor_of_maps<F>({s, idh}),
                                  tensor_of_maps<F>({ida, muh})}));
    check_axiom(rep, "s(1⊗a) = a⊗1", compose(s, tensor_of_maps<F>({etah, ida})),
                tensor_of_maps<F>({ida, etah}));
    check_axiom(rep, "s compatible with braid",
                compose_chain<F>({tensor_of_maps<F>({c, ida}), tensor_of_maps<F>({idh, s}),
                                  tensor_of_maps<F>({s, idh})}),
                compose_chain<F>({tensor_of_maps<F>({idh, s}), tensor_of_maps<F>({s, idh}),
                                  tensor_of_maps<F>({ida, c})}));
    check_axiom(rep, "s compatible with comult",
                compose(tensor_of_maps<F>({ida, de}), s),
                compose_chain<F>({tensor_of_maps<F>({de, ida}), tensor_of_maps<F>({idh, s}),
                                  tensor_of_maps<F>({s, idh})}));
    check_axiom(rep, "s compatible with counit",
                compose(tensor_of_maps<F>({ida, ep}), s), tensor_of_maps<F>({ep, ida}));

    if (t.invertible && h.braid_invertible) {
        const auto& si = t.inverse;
        const auto& ci = h.braid_inv;
        check_axiom(rep, "derived: inverse braid relation",
                    compose_chain<F>({tensor_of_maps<F>({ida, ci}), tensor_of_maps<F>({si, idh}),
                                      tensor_of_maps<F>({idh, si})}),
                    compose_chain<F>({tensor_of_maps<F>({si, idh}), tensor_of_maps<F>({idh, si}),
                                      tensor_of_maps<F>({ci, ida})}));
        check_axiom(rep, "derived: s inverse compatible with mult of A",
                    compose(si, tensor_of_maps<F>({mua, idh})),
                    compose_chain<F>({tensor_of_maps<F>({ida, si}), tensor_of_maps<F>({si, ida}),
                                      tensor_of_maps<F>({idh, mua})}));
        check_axiom(rep, "derived: s inverse compatible with mult of H",
                    compose(si, tensor_of_maps<F>({ida, muh})),
                    compose_chain<F>({tensor_of_maps<F>({si, idh}), tensor_of_maps<F>({idh, si}),
                                      tensor_of_maps<F>({muh, ida})}));
        check_axiom(rep, "derived: s inverse compatible with comult",
                    compose(tensor_of_maps<F>({de, ida}), si),
                    compose_chain<F>({tensor_of_maps<F>({ida, de}), tensor_of_maps<F>({si, idh}),
                                      tensor_of_maps<F>({idh, si})}));
    }
    return rep;
}

template <class F>
ValidationReport validate_weak_action(const WeakAction<F>& action, const Transposition<F>& t,
                                      const BraidedBialgebra<F>& h, const Algebra<F>& a,
                                      bool require_action = false) {
    ValidationReport rep;
    auto idh = identity_map(h.space());
    auto ida = identity_map(a.space);
    const auto& rho = action.map;
    const auto& s = t.map;
    const auto& c = h.braid;
    const auto& mua = a.mult;
    const auto& de = h.comult();
    auto etaa = a.unit_map();

    check_axiom(rep, "weak action (1): multiplicativity",
                compose(rho, tensor_of_maps<F>({idh, mua})),
                compose_chain<F>({tensor_of_maps<F>({de, ida, ida}),
                                  tensor_of_maps<F>({idh, s, ida}),
                                  tensor_of_maps<F>({rho, rho}), mua}));
    check_axiom(rep, "weak action (2): rho(h⊗1) = eps(h)1",
                compose(rho, tensor_of_maps<F>({idh, etaa})),
                compose(etaa, h.counit()));
    check_axiom(rep, "weak action (3): rho(1⊗a) = a",
                compose(rho, tensor_of_maps<F>({h.unit_map(), ida})), ida);
    check_axiom(rep, "weak action (4): compatibility with s",
                compose(s, tensor_of_maps<F>({idh, rho})),
                compose_chain<F>({tensor_of_maps<F>({c, ida}), tensor_of_maps<F>({idh, s}),
                                  tensor_of_maps<F>({rho, idh})}));

    {
        ValidationReport action_rep;
        check_axiom(action_rep, "action axiom: rho∘(H⊗rho) = rho∘(mu⊗A)",
                    compose(rho, tensor_of_maps<F>({idh, rho})),
                    compose(rho, tensor_of_maps<F>({h.mult(), ida})));
        if (require_action) {
            rep.merge(action_rep);
        } else {
            rep.notes.push_back(action_rep.ok() ? "action axiom holds (rho is an s-action)"
                                                : "action axiom does not hold (weak action only)");
        }
    }

    if (t.invertible && h.braid_invertible) {
        check_axiom(rep, "derived: inverse weak-action relation",
                    compose_chain<F>({tensor_of_maps<F>({identity_map(h.space()), t.inverse}),
                                      tensor_of_maps<F>({h.braid_inv, ida}),
                                      tensor_of_maps<F>({idh, rho})}),
                    compose(t.inverse, tensor_of_maps<F>({rho, idh})));
    }
    return rep;
}

template <class F>
ValidationReport validate_cocycle(const BraidedCocycle<F>& cocycle, const WeakAction<F>& action,
                                  const Transposition<F>& t, const BraidedBialgebra<F>& h,
                                  const Algebra<F>& a) {
    ValidationReport rep;
    auto idh = identity_map(h.space());
    auto ida = identity_map(a.space);
    const auto& f = cocycle.map;
    const auto& rho = action.map;
    const auto& s = t.map;
    const auto& c = h.braid;
    const auto& muh = h.mult();
    const auto& mua = a.mult;
    const auto& de = h.comult();
    auto etah = h.unit_map();
    auto eta_eps = compose(a.unit_map(), h.counit());

    check_axiom(rep, "normality: f(1⊗x) = eps(x)1",
                compose(f, tensor_of_maps<F>({etah, idh})), eta_eps);
    check_axiom(rep, "normality: f(x⊗1) = eps(x)1",
                compose(f, tensor_of_maps<F>({idh, etah})), eta_eps);

    check_axiom(rep, "cocycle condition",
                compose_chain<F>({tensor_of_maps<F>({de, de, de}),
                                  tensor_of_maps<F>({idh, c, c, idh}),
                                  tensor_of_maps<F>({idh, idh, c, idh, idh}),
                                  tensor_of_maps<F>({idh, f, idh, muh}),
                                  tensor_of_maps<F>({rho, idh, idh}),
                                  tensor_of_maps<F>({ida, f}), mua}),
                compose_chain<F>({tensor_of_maps<F>({de, de, idh}),
                                  tensor_of_maps<F>({idh, c, idh, idh}),
                                  tensor_of_maps<F>({f, muh, idh}),
                                  tensor_of_maps<F>({ida, f}), mua}));

    check_axiom(rep, "twisted module condition",
                compose_chain<F>({tensor_of_maps<F>({de, de, ida}),
                                  tensor_of_maps<F>({idh, c, idh, ida}),
                                  tensor_of_maps<F>({idh, idh, idh, s}),
                                  tensor_of_maps<F>({idh, idh, s, idh}),
                                  tensor_of_maps<F>({idh, rho, f}),
                                  tensor_of_maps<F>({rho, ida}), mua}),
                compose_chain<F>({tensor_of_maps<F>({de, de, ida}),
                                  tensor_of_maps<F>({idh, c, idh, ida}),
                                  tensor_of_maps<F>({idh, idh, muh, ida}),
                                  tensor_of_maps<F>({f, rho}), mua}));

    check_axiom(rep, "compatibility with s",
                compose_chain<F>({tensor_of_maps<F>({c, idh}), tensor_of_maps<F>({idh, c}),
                                  tensor_of_maps<F>({f, idh})}),
                compose(s, tensor_of_maps<F>({idh, f})));
    return rep;
}

} // namespace xhom
