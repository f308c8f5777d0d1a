#pragma once

// Normalized Hochschild chain and cochain complexes of an algebra E relative
// to a designated subalgebra K, with coefficients in an E-bimodule M. Chains
// live in (M (x)_K Ebar^{(x)_K *})/[.,K] with Ebar = E/K; the Connes operator
// is available when M is E itself. Also: chain-level cup and cap products and
// the weight filtration counting tensor slots inside a second subalgebra.
//
// Everything is built by quotient presentations over the Ebar-level tensor
// spaces, and every induced operator passes through induced_map, so
// representative independence is machine-checked at construction time.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "xhom/algebra.hpp"
#include "xhom/linmap.hpp"
#include "xhom/quotient.hpp"
#include "xhom/space.hpp"
#include "xhom/sparse_matrix.hpp"

namespace xhom {

namespace detail {

inline std::size_t dim_pow(std::size_t d, std::size_t n) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < n; ++i) out *= d;
    return out;
}

// Permutation of row-major tuple bases: output slot j reads input slot
// (j + step) mod n.
template <class F>
SparseMatrix<F> tensor_rotation(std::size_t d, std::size_t n, std::size_t step) {
    std::size_t total = dim_pow(d, n);
    SparseMatrix<F> m(total, total);
    std::vector<std::size_t> digit(n, 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (std::size_t j = n; j-- > 0;) {
            digit[j] = rest % d;
            rest /= d;
        }
        std::size_t out = 0;
        for (std::size_t j = 0; j < n; ++j) out = out * d + digit[(j + step) % n];
        m.add(out, idx, F::one());
    }
    return m;
}

template <class F>
Vec<F> kron_vec(const std::vector<Vec<F>>& parts) {
    Vec<F> acc(1, F::one());
    for (const auto& p : parts) {
        Vec<F> next(acc.size() * p.size(), F::zero());
        for (std::size_t i = 0; i < acc.size(); ++i) {
            if (acc[i].is_zero()) continue;
            for (std::size_t j = 0; j < p.size(); ++j)
                if (!p[j].is_zero()) next[i * p.size() + j] = acc[i] * p[j];
        }
        acc = std::move(next);
    }
    return acc;
}

// Column-major flattening of a matrix map, index = col * rows + row.
template <class F>
Vec<F> flatten_map(const SparseMatrix<F>& m) {
    Vec<F> v(m.rows() * m.cols(), F::zero());
    for (const auto& e : m.entries()) v[e.col * m.rows() + e.row] += e.val;
    return v;
}

template <class F>
SparseMatrix<F> unflatten_map(const Vec<F>& v, std::size_t rows, std::size_t cols) {
    if (v.size() != rows * cols) throw std::invalid_argument("unflatten_map: length mismatch");
    SparseMatrix<F> m(rows, cols);
    for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r)
            if (!v[c * rows + r].is_zero()) m.add(r, c, v[c * rows + r]);
    return m;
}

// The action of each K-basis element on M and on Ebar, as plain matrices.
template <class F>
struct SubActions {
    std::vector<SparseMatrix<F>> left_m, right_m;       // on coefficients
    std::vector<SparseMatrix<F>> left_ebar, right_ebar; // on Ebar classes
};

template <class F>
SubActions<F> sub_actions(const Algebra<F>& alg, const std::vector<std::size_t>& sub,
                          const Bimodule<F>& coeff, const SparseMatrix<F>& proj,
                          const SparseMatrix<F>& sect) {
    std::size_t de = alg.dim(), dm = coeff.dim();
    SubActions<F> out;
    for (std::size_t t : sub) {
        SparseMatrix<F> col(de, 1);
        col.add(t, 0, F::one());
        out.left_m.push_back(coeff.left.mat * SparseMatrix<F>::kron(col, SparseMatrix<F>::identity(dm)));
        out.right_m.push_back(coeff.right.mat * SparseMatrix<F>::kron(SparseMatrix<F>::identity(dm), col));
        out.left_ebar.push_back(proj * alg.mult.mat * SparseMatrix<F>::kron(col, sect));
        out.right_ebar.push_back(proj * alg.mult.mat * SparseMatrix<F>::kron(sect, col));
    }
    return out;
}

// Rows spanning the junction and trace relations of degree r inside the
// parent space M (x) Ebar^{(x)r}: for every lambda in the K-basis,
//   m.lambda (x) x1 ... - m (x) lambda.x1 ...          (junction 0)
//   ... xi.lambda (x) x(i+1) ... - ... xi (x) lambda.x(i+1) ...
//   lambda.m (x) x1..xr - m (x) x1 .. xr.lambda        (trace)
template <class F>
SparseMatrix<F> bar_relations(const SubActions<F>& act, std::size_t dm, std::size_t debar,
                              std::size_t r) {
    std::size_t total = dm * dim_pow(debar, r);
    SparseMatrix<F> rels(0, total);
    auto add_gen = [&](const SparseMatrix<F>& gen) { rels = SparseMatrix<F>::vcat(rels, gen.transpose()); };
    for (std::size_t t = 0; t < act.left_m.size(); ++t) {
        if (r == 0) {
            add_gen(act.left_m[t] - act.right_m[t]);
            continue;
        }
        std::size_t tail = dim_pow(debar, r - 1);
        add_gen(SparseMatrix<F>::kron(act.right_m[t], SparseMatrix<F>::identity(dim_pow(debar, r))) -
                SparseMatrix<F>::kron(SparseMatrix<F>::kron(SparseMatrix<F>::identity(dm), act.left_ebar[t]),
                                      SparseMatrix<F>::identity(tail)));
        for (std::size_t p = 1; p < r; ++p) {
            std::size_t head = dm * dim_pow(debar, p - 1);
            std::size_t rest = dim_pow(debar, r - 1 - p);
            SparseMatrix<F> ih = SparseMatrix<F>::identity(head);
            SparseMatrix<F> ir = SparseMatrix<F>::identity(rest);
            add_gen(SparseMatrix<F>::kron(SparseMatrix<F>::kron(ih, act.right_ebar[t]),
                                          SparseMatrix<F>::kron(SparseMatrix<F>::identity(debar), ir)) -
                    SparseMatrix<F>::kron(SparseMatrix<F>::kron(ih, SparseMatrix<F>::identity(debar)),
                                          SparseMatrix<F>::kron(act.left_ebar[t], ir)));
        }
        add_gen(SparseMatrix<F>::kron(act.left_m[t], SparseMatrix<F>::identity(dim_pow(debar, r))) -
                SparseMatrix<F>::kron(SparseMatrix<F>::identity(dm * dim_pow(debar, r - 1)), act.right_ebar[t]));
    }
    return rels;
}

} // namespace detail

template <class F>
struct BarComplex {
    Algebra<F> alg;               // E
    std::vector<std::size_t> sub; // K sub-basis of E
    Bimodule<F> coeff;            // M
    bool cyclic = false;          // M is E acting on itself

    SpacePtr<F> ebar;             // E/K
    LinMap<F> ebar_proj, ebar_sect;

    std::vector<SpacePtr<F>> parent;           // parent[r] = M (x) Ebar^{(x)r}
    std::vector<SpacePtr<F>> chain;            // chain[r] = parent[r] / relations
    std::vector<LinMap<F>> project, section;   // parent[r] <-> chain[r]
    std::vector<LinMap<F>> boundary;           // boundary[r]: chain[r] -> chain[r-1]; [0] maps to 0
    std::vector<LinMap<F>> connes;             // connes[r]: chain[r] -> chain[r+1] (cyclic only)
    ValidationReport report;

    std::size_t degrees() const { return chain.empty() ? 0 : chain.size() - 1; }
};

inline constexpr std::size_t max_bar_degree = 6;

template <class F>
BarComplex<F> bar_chain(const Algebra<F>& alg, const std::vector<std::size_t>& sub,
                        const Bimodule<F>& coeff, std::size_t degrees) {
    {
        if (degrees > max_bar_degree)
            throw std::invalid_argument("bar_chain: maximum supported degree is " +
                                        std::to_string(max_bar_degree));
        ValidationReport pre = validate_subalgebra(alg, sub, "subalgebra K");
        if (!pre.ok()) throw std::invalid_argument("bar_chain: " + pre.failures.front());
        ValidationReport bm = validate_bimodule(coeff, alg);
        if (!bm.ok()) throw std::invalid_argument("bar_chain: invalid bimodule: " + bm.failures.front());
    }

    BarComplex<F> bc;
    bc.alg = alg;
    bc.sub = sub;
    bc.coeff = coeff;
    bc.cyclic = coeff.space == alg.space && coeff.left.mat == alg.mult.mat &&
                coeff.right.mat == alg.mult.mat;

    std::size_t de = alg.dim(), dm = coeff.dim();
    SparseMatrix<F> krel(sub.size(), de);
    for (std::size_t t = 0; t < sub.size(); ++t) krel.add(t, sub[t], F::one());
    bc.ebar = make_quotient_space<F>(alg.space->name + "/K", alg.space, krel);
    bc.ebar_proj = LinMap<F>(alg.space, bc.ebar, bc.ebar->pres->projection);
    bc.ebar_sect = LinMap<F>(bc.ebar, alg.space, bc.ebar->pres->section);
    std::size_t debar = bc.ebar->dim();

    auto act = detail::sub_actions(alg, sub, coeff, bc.ebar_proj.mat, bc.ebar_sect.mat);

    for (std::size_t r = 0; r <= degrees; ++r) {
        SpacePtr<F> par;
        if (r == 0) {
            par = coeff.space;
        } else {
            std::vector<SpacePtr<F>> factors{coeff.space};
            for (std::size_t i = 0; i < r; ++i) factors.push_back(bc.ebar);
            par = make_tensor_space<F>("", factors);
        }
        bc.parent.push_back(par);
        auto x = make_quotient_space<F>("bar" + std::to_string(r), par,
                                        detail::bar_relations(act, dm, debar, r));
        bc.chain.push_back(x);
        bc.project.push_back(LinMap<F>(par, x, x->pres->projection));
        bc.section.push_back(LinMap<F>(x, par, x->pres->section));
    }

    // Multiplication of Ebar classes through chosen representatives; only the
    // alternating sum below is canonical, and induced_map checks that.
    SparseMatrix<F> mbar =
        bc.ebar_proj.mat * alg.mult.mat * SparseMatrix<F>::kron(bc.ebar_sect.mat, bc.ebar_sect.mat);

    bc.boundary.push_back(LinMap<F>(bc.chain[0], make_space<F>("0", std::size_t{0}),
                                    SparseMatrix<F>(0, bc.chain[0]->dim())));
    for (std::size_t r = 1; r <= degrees; ++r) {
        std::size_t tail = detail::dim_pow(debar, r - 1);
        SparseMatrix<F> b = SparseMatrix<F>::kron(
            coeff.right.mat * SparseMatrix<F>::kron(SparseMatrix<F>::identity(dm), bc.ebar_sect.mat),
            SparseMatrix<F>::identity(tail));
        F sign = F::one();
        for (std::size_t p = 1; p < r; ++p) {
            sign = -sign;
            SparseMatrix<F> face = SparseMatrix<F>::kron(
                SparseMatrix<F>::kron(SparseMatrix<F>::identity(dm * detail::dim_pow(debar, p - 1)), mbar),
                SparseMatrix<F>::identity(detail::dim_pow(debar, r - 1 - p)));
            b = b + face.scaled(sign);
        }
        sign = -sign;
        SparseMatrix<F> last =
            SparseMatrix<F>::kron(coeff.left.mat, SparseMatrix<F>::identity(tail)) *
            SparseMatrix<F>::kron(bc.ebar_sect.mat, SparseMatrix<F>::identity(dm * tail)) *
            flip_matrix<F>(dm * tail, debar);
        b = b + last.scaled(sign);
        bc.boundary.push_back(
            induced_map(b, bc.chain[r], bc.chain[r - 1], "bar boundary " + std::to_string(r)));
    }

    if (bc.cyclic) {
        for (std::size_t r = 0; r < degrees; ++r) {
            std::size_t dn = detail::dim_pow(debar, r + 1);
            SparseMatrix<F> step1 =
                SparseMatrix<F>::kron(bc.ebar_proj.mat, SparseMatrix<F>::identity(detail::dim_pow(debar, r)));
            SparseMatrix<F> insert_unit = SparseMatrix<F>::kron(alg.unit_map().mat, SparseMatrix<F>::identity(dn));
            SparseMatrix<F> acc(de * dn, dm * detail::dim_pow(debar, r));
            for (std::size_t i = 0; i <= r; ++i) {
                SparseMatrix<F> term = insert_unit * detail::tensor_rotation<F>(debar, r + 1, i) * step1;
                bool negative = (i * r) % 2 == 1;
                acc = acc + (negative ? term.scaled(-F::one()) : term);
            }
            bc.connes.push_back(
                induced_map(acc, bc.chain[r], bc.chain[r + 1], "cyclic operator " + std::to_string(r)));
        }
        bc.report.notes.push_back("coefficients are the algebra itself: cyclic operator built");
    } else {
        bc.report.notes.push_back("coefficients differ from the algebra: cyclic operator skipped");
    }

    for (std::size_t r = 2; r <= degrees; ++r)
        check_axiom(bc.report, "b∘b = 0 in degree " + std::to_string(r),
                    compose(bc.boundary[r - 1], bc.boundary[r]),
                    zero_map(bc.chain[r], bc.chain[r - 2]));
    if (bc.cyclic) {
        for (std::size_t r = 0; r + 2 <= degrees; ++r)
            check_axiom(bc.report, "B∘B = 0 in degree " + std::to_string(r),
                        compose(bc.connes[r + 1], bc.connes[r]), zero_map(bc.chain[r], bc.chain[r + 2]));
        for (std::size_t r = 0; r + 1 <= degrees; ++r) {
            LinMap<F> anti = compose(bc.boundary[r + 1], bc.connes[r]);
            if (r >= 1) anti = LinMap<F>(bc.chain[r], bc.chain[r],
                                         anti.mat + compose(bc.connes[r - 1], bc.boundary[r]).mat);
            check_axiom(bc.report, "b∘B + B∘b = 0 in degree " + std::to_string(r), anti,
                        zero_map(bc.chain[r], bc.chain[r]));
        }
    }
    return bc;
}

template <class F>
BarComplex<F> bar_chain(const Algebra<F>& alg, const std::vector<std::size_t>& sub,
                        std::size_t degrees) {
    return bar_chain(alg, sub, regular_bimodule(alg), degrees);
}

template <class F>
const std::vector<LinMap<F>>& connes_B(const BarComplex<F>& bc) {
    if (!bc.cyclic)
        throw std::invalid_argument("connes_B: coefficients must be the algebra acting on itself");
    return bc.connes;
}

// Homology dimensions in degrees 0..N-1; the top degree would need the next
// boundary, so it is not reported.
template <class F>
std::vector<std::size_t> bar_homology_dims(const BarComplex<F>& bc) {
    std::size_t n = bc.degrees();
    std::vector<std::size_t> ranks(n + 2, 0);
    for (std::size_t r = 1; r <= n; ++r) ranks[r] = mat_rank(bc.boundary[r].mat);
    std::vector<std::size_t> h;
    for (std::size_t r = 0; r < n; ++r)
        h.push_back(bc.chain[r]->dim() - ranks[r] - ranks[r + 1]);
    return h;
}

// Cochain complex Hom_{K-bimod}(Ebar^{(x)_K *}, M) with the dual Hochschild
// differential. Degree r is realized as the subspace of all maps
// Ebar^{(x)r} -> M that kill the junction relations and intertwine the outer
// K-actions; hom_basis[r] columns are those maps, flattened column-major.
template <class F>
struct BarCochain {
    Algebra<F> alg;
    std::vector<std::size_t> sub;
    Bimodule<F> coeff;

    SpacePtr<F> ebar;
    LinMap<F> ebar_proj, ebar_sect;

    std::vector<SpacePtr<F>> cochain;       // abstract degree-r spaces
    std::vector<SparseMatrix<F>> hom_basis; // (dim M * dim Ebar^r) x dim cochain[r]
    std::vector<LinMap<F>> coboundary;      // coboundary[r]: cochain[r] -> cochain[r+1]
    ValidationReport report;

    std::size_t degrees() const { return cochain.empty() ? 0 : cochain.size() - 1; }
};

template <class F>
BarCochain<F> bar_cochain(const Algebra<F>& alg, const std::vector<std::size_t>& sub,
                          const Bimodule<F>& coeff, std::size_t degrees) {
    {
        if (degrees > max_bar_degree)
            throw std::invalid_argument("bar_cochain: maximum supported degree is " +
                                        std::to_string(max_bar_degree));
        ValidationReport pre = validate_subalgebra(alg, sub, "subalgebra K");
        if (!pre.ok()) throw std::invalid_argument("bar_cochain: " + pre.failures.front());
        ValidationReport bm = validate_bimodule(coeff, alg);
        if (!bm.ok()) throw std::invalid_argument("bar_cochain: invalid bimodule: " + bm.failures.front());
    }

    BarCochain<F> ch;
    ch.alg = alg;
    ch.sub = sub;
    ch.coeff = coeff;

    std::size_t de = alg.dim(), dm = coeff.dim();
    SparseMatrix<F> krel(sub.size(), de);
    for (std::size_t t = 0; t < sub.size(); ++t) krel.add(t, sub[t], F::one());
    ch.ebar = make_quotient_space<F>(alg.space->name + "/K", alg.space, krel);
    ch.ebar_proj = LinMap<F>(alg.space, ch.ebar, ch.ebar->pres->projection);
    ch.ebar_sect = LinMap<F>(ch.ebar, alg.space, ch.ebar->pres->section);
    std::size_t debar = ch.ebar->dim();

    auto act = detail::sub_actions(alg, sub, coeff, ch.ebar_proj.mat, ch.ebar_sect.mat);

    for (std::size_t r = 0; r <= degrees; ++r) {
        std::size_t dom = detail::dim_pow(debar, r);
        std::size_t flat = dm * dom;
        SparseMatrix<F> constraints(0, flat);
        auto add_rows = [&](const SparseMatrix<F>& m) {
            constraints = SparseMatrix<F>::vcat(constraints, m);
        };
        for (std::size_t t = 0; t < sub.size(); ++t) {
            if (r == 0) {
                // Maps K -> M are pinned by the value at 1, constrained to the
                // K-commutant of M.
                add_rows(act.left_m[t] - act.right_m[t]);
                continue;
            }
            std::size_t tail = detail::dim_pow(debar, r - 1);
            SparseMatrix<F> lt = SparseMatrix<F>::kron(act.left_ebar[t], SparseMatrix<F>::identity(tail));
            SparseMatrix<F> rt = SparseMatrix<F>::kron(SparseMatrix<F>::identity(tail), act.right_ebar[t]);
            add_rows(SparseMatrix<F>::kron(lt.transpose(), SparseMatrix<F>::identity(dm)) -
                     SparseMatrix<F>::kron(SparseMatrix<F>::identity(dom), act.left_m[t]));
            add_rows(SparseMatrix<F>::kron(rt.transpose(), SparseMatrix<F>::identity(dm)) -
                     SparseMatrix<F>::kron(SparseMatrix<F>::identity(dom), act.right_m[t]));
            for (std::size_t p = 1; p < r; ++p) {
                std::size_t head = detail::dim_pow(debar, p - 1);
                std::size_t rest = detail::dim_pow(debar, r - 1 - p);
                SparseMatrix<F> joint =
                    SparseMatrix<F>::kron(
                        SparseMatrix<F>::kron(SparseMatrix<F>::identity(head), act.right_ebar[t]),
                        SparseMatrix<F>::kron(SparseMatrix<F>::identity(debar), SparseMatrix<F>::identity(rest))) -
                    SparseMatrix<F>::kron(
                        SparseMatrix<F>::kron(SparseMatrix<F>::identity(head), SparseMatrix<F>::identity(debar)),
                        SparseMatrix<F>::kron(act.left_ebar[t], SparseMatrix<F>::identity(rest)));
                add_rows(SparseMatrix<F>::kron(joint.transpose(), SparseMatrix<F>::identity(dm)));
            }
        }
        std::vector<Vec<F>> sol = mat_kernel(constraints);
        SparseMatrix<F> basis(flat, sol.size());
        for (std::size_t j = 0; j < sol.size(); ++j)
            for (std::size_t i = 0; i < flat; ++i)
                if (!sol[j][i].is_zero()) basis.add(i, j, sol[j][i]);
        ch.hom_basis.push_back(std::move(basis));
        ch.cochain.push_back(make_space<F>("cobar" + std::to_string(r), sol.size()));
    }

    SparseMatrix<F> mbar =
        ch.ebar_proj.mat * alg.mult.mat * SparseMatrix<F>::kron(ch.ebar_sect.mat, ch.ebar_sect.mat);

    for (std::size_t r = 0; r < degrees; ++r) {
        std::size_t dom = detail::dim_pow(debar, r);
        SparseMatrix<F> op(ch.cochain[r + 1]->dim(), ch.cochain[r]->dim());
        bool consistent = true;
        for (std::size_t j = 0; j < ch.cochain[r]->dim(); ++j) {
            SparseMatrix<F> a = detail::unflatten_map(
                Vec<F>(ch.hom_basis[r].col_vec(j)), dm, dom);
            SparseMatrix<F> d = coeff.left.mat * SparseMatrix<F>::kron(ch.ebar_sect.mat, a);
            F sign = F::one();
            for (std::size_t p = 1; p <= r; ++p) {
                sign = -sign;
                SparseMatrix<F> face =
                    a * SparseMatrix<F>::kron(
                            SparseMatrix<F>::kron(SparseMatrix<F>::identity(detail::dim_pow(debar, p - 1)), mbar),
                            SparseMatrix<F>::identity(detail::dim_pow(debar, r - p)));
                d = d + face.scaled(sign);
            }
            sign = -sign;
            d = d + (coeff.right.mat * SparseMatrix<F>::kron(a, ch.ebar_sect.mat)).scaled(sign);
            auto coords = mat_solve(ch.hom_basis[r + 1], detail::flatten_map(d));
            if (!coords) {
                ch.report.failures.push_back("cochain differential leaves the bimodule-map subspace in degree " +
                                             std::to_string(r));
                consistent = false;
                break;
            }
            for (std::size_t i = 0; i < coords->size(); ++i)
                if (!(*coords)[i].is_zero()) op.add(i, j, (*coords)[i]);
        }
        if (!consistent) break;
        ch.coboundary.push_back(LinMap<F>(ch.cochain[r], ch.cochain[r + 1], std::move(op)));
    }

    for (std::size_t r = 0; r + 1 < ch.coboundary.size(); ++r)
        check_axiom(ch.report, "b*∘b* = 0 in degree " + std::to_string(r),
                    compose(ch.coboundary[r + 1], ch.coboundary[r]),
                    zero_map(ch.cochain[r], ch.cochain[r + 2]));
    return ch;
}

// Cohomology dimensions in degrees 0..N-1.
template <class F>
std::vector<std::size_t> bar_cohomology_dims(const BarCochain<F>& ch) {
    std::size_t n = ch.degrees();
    std::vector<std::size_t> ranks(n + 1, 0);
    for (std::size_t r = 0; r < ch.coboundary.size(); ++r) ranks[r + 1] = mat_rank(ch.coboundary[r].mat);
    std::vector<std::size_t> h;
    for (std::size_t r = 0; r < n; ++r)
        h.push_back(ch.cochain[r]->dim() - ranks[r + 1] - ranks[r]);
    return h;
}

// Cup product of cochains with values in the algebra:
// (beta ~ beta')(x_{1,m+n}) = beta(x_{1m}) beta'(x_{m+1,m+n}).
// Inputs and output are coordinate vectors on the cochain bases.
template <class F>
Vec<F> bar_cup(const BarCochain<F>& ch, std::size_t m, const Vec<F>& beta, std::size_t n,
               const Vec<F>& beta2) {
    if (ch.coeff.space != ch.alg.space)
        throw std::invalid_argument("bar_cup: cochain values must lie in the algebra");
    if (m > ch.degrees() || n > ch.degrees() || m + n > ch.degrees())
        throw std::invalid_argument("bar_cup: degree overflow");
    std::size_t de = ch.alg.dim(), debar = ch.ebar->dim();
    SparseMatrix<F> am = detail::unflatten_map(ch.hom_basis[m].apply(beta), de, detail::dim_pow(debar, m));
    SparseMatrix<F> an = detail::unflatten_map(ch.hom_basis[n].apply(beta2), de, detail::dim_pow(debar, n));
    SparseMatrix<F> cup = ch.alg.mult.mat * SparseMatrix<F>::kron(am, an);
    auto coords = mat_solve(ch.hom_basis[m + n], detail::flatten_map(cup));
    if (!coords)
        throw std::logic_error("bar_cup: product left the bimodule-map subspace");
    return *coords;
}

// Cap product against a degree-m cochain with values in the algebra, as a map
// chain[n] -> chain[n-m]:  [m (x) x_{1n}] ~ beta = [m.beta(x_{1m}) (x) x_{m+1,n}].
template <class F>
LinMap<F> bar_cap_map(const BarComplex<F>& bc, std::size_t n, const BarCochain<F>& ch,
                      std::size_t m, const Vec<F>& beta) {
    if (ch.coeff.space != ch.alg.space)
        throw std::invalid_argument("bar_cap: cochain values must lie in the algebra");
    if (bc.alg.space != ch.alg.space || bc.sub != ch.sub)
        throw std::invalid_argument("bar_cap: chain and cochain complexes disagree");
    if (n > bc.degrees() || m > ch.degrees() || m > n)
        throw std::invalid_argument("bar_cap: degree out of range");
    std::size_t de = bc.alg.dim(), dm = bc.coeff.dim(), debar = bc.ebar->dim();
    SparseMatrix<F> a = detail::unflatten_map(ch.hom_basis[m].apply(beta), de, detail::dim_pow(debar, m));
    SparseMatrix<F> par = SparseMatrix<F>::kron(
        bc.coeff.right.mat * SparseMatrix<F>::kron(SparseMatrix<F>::identity(dm), a),
        SparseMatrix<F>::identity(detail::dim_pow(debar, n - m)));
    return induced_map(par, bc.chain[n], bc.chain[n - m], "cap product");
}

// Element form of the cap product. The zero convention for m > n is reported
// as an empty coordinate vector.
template <class F>
Vec<F> bar_cap(const BarComplex<F>& bc, std::size_t n, const Vec<F>& x, const BarCochain<F>& ch,
               std::size_t m, const Vec<F>& beta) {
    if (m > n) return Vec<F>{};
    return bar_cap_map(bc, n, ch, m, beta).mat.apply(x);
}

// Weight filtration of the chain complex by a subalgebra A of E containing K:
// F^i in degree r is spanned by the classes with at least r-i tensor slots
// inside the image of A.
template <class F>
struct BarFiltration {
    std::vector<std::size_t> base; // A sub-basis of E
    // layer[i][r]: echelonized basis columns of F^i inside chain[r]
    std::vector<std::vector<SparseMatrix<F>>> layer;
    ValidationReport report;
};

template <class F>
BarFiltration<F> bar_filtration(const BarComplex<F>& bc, const std::vector<std::size_t>& base) {
    {
        ValidationReport pre = validate_subalgebra(bc.alg, base, "filtration base A");
        if (!pre.ok()) throw std::invalid_argument("bar_filtration: " + pre.failures.front());
        for (std::size_t t : bc.sub)
            if (std::find(base.begin(), base.end(), t) == base.end())
                throw std::invalid_argument("bar_filtration: base does not contain the subalgebra K");
    }
    BarFiltration<F> out;
    out.base = base;
    std::size_t nmax = bc.degrees();
    std::size_t dm = bc.coeff.dim(), debar = bc.ebar->dim();

    // Spanning set of the image of A inside Ebar (zero classes dropped).
    std::vector<Vec<F>> abar;
    for (std::size_t j : base) {
        Vec<F> v(debar, F::zero());
        for (const auto& e : bc.ebar_proj.mat.entries())
            if (e.col == j) v[e.row] += e.val;
        if (!is_zero_vec(v)) abar.push_back(std::move(v));
    }
    std::vector<Vec<F>> ebasis;
    for (std::size_t j = 0; j < debar; ++j) ebasis.push_back(unit_vec<F>(debar, j));

    std::vector<std::vector<Echelon<F>>> ech(nmax + 1);
    out.layer.resize(nmax + 1);
    for (std::size_t i = 0; i <= nmax; ++i) {
        for (std::size_t r = 0; r <= nmax; ++r) {
            Echelon<F> e(bc.chain[r]->dim());
            std::size_t need = r > i ? r - i : 0;
            // Choose which slots carry A-classes, then run over all products.
            std::vector<std::size_t> pick(need);
            for (std::size_t k = 0; k < need; ++k) pick[k] = k;
            bool more = true;
            while (more) {
                std::vector<const std::vector<Vec<F>>*> pools(r, &ebasis);
                for (std::size_t k = 0; k < need; ++k) pools[pick[k]] = &abar;
                std::vector<std::size_t> at(r, 0);
                bool pool_empty = false;
                for (std::size_t sl = 0; sl < r; ++sl)
                    if (pools[sl]->empty()) pool_empty = true;
                bool run = !pool_empty;
                while (run) {
                    for (std::size_t mi = 0; mi < dm; ++mi) {
                        std::vector<Vec<F>> parts{unit_vec<F>(dm, mi)};
                        for (std::size_t sl = 0; sl < r; ++sl) parts.push_back((*pools[sl])[at[sl]]);
                        e.insert(bc.project[r].mat.apply(detail::kron_vec(parts)));
                    }
                    std::size_t sl = r;
                    run = false;
                    while (sl-- > 0) {
                        if (++at[sl] < pools[sl]->size()) {
                            run = true;
                            break;
                        }
                        at[sl] = 0;
                    }
                }
                // next slot pattern
                more = false;
                std::size_t k = need;
                while (k-- > 0) {
                    if (++pick[k] <= r - (need - k)) {
                        for (std::size_t l = k + 1; l < need; ++l) pick[l] = pick[l - 1] + 1;
                        more = true;
                        break;
                    }
                }
            }
            SparseMatrix<F> cols(bc.chain[r]->dim(), e.dim());
            for (std::size_t j = 0; j < e.dim(); ++j)
                for (std::size_t p = 0; p < bc.chain[r]->dim(); ++p)
                    if (!e.basis()[j][p].is_zero()) cols.add(p, j, e.basis()[j][p]);
            out.layer[i].push_back(std::move(cols));
            ech[i].push_back(std::move(e));
        }
    }

    for (std::size_t r = 0; r <= nmax; ++r) {
        if (ech[std::min(r, nmax)][r].dim() != bc.chain[r]->dim())
            out.report.failures.push_back("filtration is not exhaustive in degree " + std::to_string(r));
        for (std::size_t i = 0; i + 1 <= nmax; ++i)
            for (const auto& v : ech[i][r].basis())
                if (!ech[i + 1][r].contains(v)) {
                    out.report.failures.push_back("filtration layers not nested at degree " +
                                                  std::to_string(r) + ", layer " + std::to_string(i));
                    break;
                }
    }
    for (std::size_t r = 1; r <= nmax; ++r)
        for (std::size_t i = 0; i <= nmax; ++i) {
            for (const auto& v : ech[i][r].basis())
                if (!ech[i][r - 1].contains(bc.boundary[r].mat.apply(v))) {
                    out.report.failures.push_back("boundary leaves filtration layer " + std::to_string(i) +
                                                  " in degree " + std::to_string(r));
                    break;
                }
        }
    if (bc.cyclic) {
        for (std::size_t r = 0; r < nmax; ++r)
            for (std::size_t i = 0; i < nmax; ++i) {
                for (const auto& v : ech[i][r].basis())
                    if (!ech[i + 1][r + 1].contains(bc.connes[r].mat.apply(v))) {
                        out.report.failures.push_back("cyclic operator leaves the shifted layer " +
                                                      std::to_string(i + 1) + " in degree " +
                                                      std::to_string(r));
                        break;
                    }
            }
    }
    return out;
}

} // namespace xhom
