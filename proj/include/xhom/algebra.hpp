#pragma once

// Finite-dimensional algebras, coalgebras and bimodules presented by structure
// matrices, together with axiom validators that report the first failing basis
// tuple of each broken axiom.

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "xhom/linmap.hpp"
#include "xhom/space.hpp"

namespace xhom {

struct ValidationReport {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    bool ok() const { return failures.empty(); }

    void merge(const ValidationReport& other) {
        failures.insert(failures.end(), other.failures.begin(), other.failures.end());
        notes.insert(notes.end(), other.notes.begin(), other.notes.end());
    }

    std::string str() const {
        if (ok() && notes.empty()) return "pass";
        std::ostringstream out;
        if (ok()) out << "pass";
        for (std::size_t i = 0; i < failures.size(); ++i) {
            if (i > 0 || ok()) out << "\n";
            out << "fail: " << failures[i];
        }
        for (const auto& n : notes) out << "\nnote: " << n;
        return out.str();
    }
};

namespace detail {

template <class F>
std::string basis_label(const SpacePtr<F>& sp, std::size_t idx) {
    if (sp && idx < sp->labels.size()) return sp->labels[idx];
    return "e" + std::to_string(idx);
}

inline void merge_prefixed(ValidationReport& rep, const ValidationReport& sub,
                           const std::string& prefix) {
    for (const auto& f : sub.failures) rep.failures.push_back(prefix + f);
    for (const auto& n : sub.notes) rep.notes.push_back(prefix + n);
}

template <class F>
std::string pair_label(const SpacePtr<F>& left, std::size_t i, const SpacePtr<F>& right,
                       std::size_t j) {
    return tuple_label({basis_label(left, i), basis_label(right, j)});
}

// True when every basis index in idx is valid, strictly increasing.
inline bool valid_subbasis(const std::vector<std::size_t>& idx, std::size_t dim) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (idx[k] >= dim) return false;
        if (k > 0 && idx[k] <= idx[k - 1]) return false;
    }
    return !idx.empty();
}

// Support of a coordinate vector inside the sub-basis: the first offending
// coordinate index, or nullopt when the vector lies in the span.
template <class F>
std::optional<std::size_t> support_outside(const Vec<F>& v, const std::vector<bool>& allowed) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero() && !allowed[i]) return i;
    return std::nullopt;
}

} // namespace detail

// Records a failure when lhs != rhs, with the first differing domain basis
// vector as witness.
template <class F>
bool check_axiom(ValidationReport& rep, const std::string& name,
                 const LinMap<F>& lhs, const LinMap<F>& rhs) {
    if (lhs.mat.rows() != rhs.mat.rows() || lhs.mat.cols() != rhs.mat.cols()) {
        rep.failures.push_back(name + ": shape mismatch " +
                               std::to_string(lhs.mat.rows()) + "x" + std::to_string(lhs.mat.cols()) + " vs " +
                               std::to_string(rhs.mat.rows()) + "x" + std::to_string(rhs.mat.cols()));
        return false;
    }
    if (lhs.mat == rhs.mat) return true;
    for (std::size_t c = 0; c < lhs.mat.cols(); ++c) {
        for (std::size_t r = 0; r < lhs.mat.rows(); ++r) {
            if (lhs.mat.get(r, c) == rhs.mat.get(r, c)) continue;
            rep.failures.push_back(name + "; witness " + detail::basis_label(lhs.dom, c));
            return false;
        }
    }
    rep.failures.push_back(name);
    return false;
}

template <class F>
struct Algebra {
    SpacePtr<F> space;
    LinMap<F> mult; // space⊗space -> space
    Vec<F> unit;    // coordinates of the identity element

    std::size_t dim() const { return space->dim(); }

    LinMap<F> unit_map() const {
        SparseMatrix<F> m(dim(), 1);
        for (std::size_t i = 0; i < unit.size(); ++i)
            if (!unit[i].is_zero()) m.add(i, 0, unit[i]);
        return LinMap<F>(ground_space<F>(), space, m);
    }

    // mu_n: iterated product, mu_1 = id, mu_{n+1} = mu ∘ (mu_n ⊗ id); mu_0 is
    // the unit map.
    LinMap<F> mult_n(std::size_t n) const {
        if (n == 0) return unit_map();
        LinMap<F> acc = identity_map(space);
        for (std::size_t i = 1; i < n; ++i)
            acc = compose(mult, tensor_of_maps<F>({acc, identity_map(space)}));
        return acc;
    }

    Vec<F> mul(const Vec<F>& x, const Vec<F>& y) const {
        if (x.size() != dim() || y.size() != dim())
            throw std::invalid_argument("Algebra::mul: element dimension mismatch");
        Vec<F> t(dim() * dim(), F::zero());
        for (std::size_t i = 0; i < dim(); ++i)
            for (std::size_t j = 0; j < dim(); ++j)
                if (!x[i].is_zero() && !y[j].is_zero()) t[i * dim() + j] = x[i] * y[j];
        return mult.mat.apply(t);
    }
};

template <class F>
Algebra<F> make_algebra(SpacePtr<F> space, const SparseMatrix<F>& mult_matrix, Vec<F> unit) {
    auto sq = make_tensor_space<F>(space->name + "^2", {space, space});
    if (unit.size() != space->dim())
        throw std::invalid_argument("make_algebra: unit dimension mismatch");
    return Algebra<F>{space, LinMap<F>(sq, space, mult_matrix), std::move(unit)};
}

template <class F>
struct Coalgebra {
    SpacePtr<F> space;
    LinMap<F> comult; // space -> space⊗space
    LinMap<F> counit; // space -> k

    std::size_t dim() const { return space->dim(); }
};

template <class F>
Coalgebra<F> make_coalgebra(SpacePtr<F> space, const SparseMatrix<F>& comult_matrix,
                            const SparseMatrix<F>& counit_matrix) {
    auto sq = make_tensor_space<F>(space->name + "^2", {space, space});
    return Coalgebra<F>{space, LinMap<F>(space, sq, comult_matrix),
                        LinMap<F>(space, ground_space<F>(), counit_matrix)};
}

// M with a left and a right action of the same algebra.
template <class F>
struct Bimodule {
    SpacePtr<F> space;
    LinMap<F> left;  // E⊗M -> M
    LinMap<F> right; // M⊗E -> M

    std::size_t dim() const { return space->dim(); }
};

template <class F>
Bimodule<F> make_bimodule(SpacePtr<F> space, const Algebra<F>& alg,
                          const SparseMatrix<F>& left_matrix, const SparseMatrix<F>& right_matrix) {
    auto em = make_tensor_space<F>("E&" + space->name, {alg.space, space});
    auto me = make_tensor_space<F>(space->name + "&E", {space, alg.space});
    return Bimodule<F>{space, LinMap<F>(em, space, left_matrix), LinMap<F>(me, space, right_matrix)};
}

// The algebra acting on itself by multiplication.
template <class F>
Bimodule<F> regular_bimodule(const Algebra<F>& alg) {
    return make_bimodule(alg.space, alg, alg.mult.mat, alg.mult.mat);
}

template <class F>
ValidationReport validate_algebra(const Algebra<F>& a) {
    ValidationReport rep;
    auto id = identity_map(a.space);
    auto mu = a.mult;
    auto eta = a.unit_map();
    check_axiom(rep, "associativity", compose(mu, tensor_of_maps<F>({mu, id})),
                compose(mu, tensor_of_maps<F>({id, mu})));
    check_axiom(rep, "left unit law", compose(mu, tensor_of_maps<F>({eta, id})), id);
    check_axiom(rep, "right unit law", compose(mu, tensor_of_maps<F>({id, eta})), id);
    return rep;
}

template <class F>
ValidationReport validate_coalgebra(const Coalgebra<F>& c) {
    ValidationReport rep;
    auto id = identity_map(c.space);
    auto de = c.comult;
    auto ep = c.counit;
    check_axiom(rep, "coassociativity", compose(tensor_of_maps<F>({de, id}), de),
                compose(tensor_of_maps<F>({id, de}), de));
    check_axiom(rep, "left counit law", compose(tensor_of_maps<F>({ep, id}), de), id);
    check_axiom(rep, "right counit law", compose(tensor_of_maps<F>({id, ep}), de), id);
    return rep;
}

template <class F>
ValidationReport validate_bimodule(const Bimodule<F>& m, const Algebra<F>& a) {
    ValidationReport rep;
    auto idm = identity_map(m.space);
    auto ida = identity_map(a.space);
    auto eta = a.unit_map();
    check_axiom(rep, "left action associativity",
                compose(m.left, tensor_of_maps<F>({a.mult, idm})),
                compose(m.left, tensor_of_maps<F>({ida, m.left})));
    check_axiom(rep, "right action associativity",
                compose(m.right, tensor_of_maps<F>({m.right, ida})),
                compose(m.right, tensor_of_maps<F>({idm, a.mult})));
    check_axiom(rep, "left unit action", compose(m.left, tensor_of_maps<F>({eta, idm})), idm);
    check_axiom(rep, "right unit action", compose(m.right, tensor_of_maps<F>({idm, eta})), idm);
    check_axiom(rep, "action commutation",
                compose(m.right, tensor_of_maps<F>({m.left, ida})),
                compose(m.left, tensor_of_maps<F>({ida, m.right})));
    return rep;
}

// Checks that the sub-basis spans a unital subalgebra of a.
template <class F>
ValidationReport validate_subalgebra(const Algebra<F>& a, const std::vector<std::size_t>& idx,
                                     const std::string& who) {
    ValidationReport rep;
    if (!detail::valid_subbasis(idx, a.dim())) {
        rep.failures.push_back(who + ": sub-basis indices must be strictly increasing and in range");
        return rep;
    }
    std::vector<bool> allowed(a.dim(), false);
    for (std::size_t i : idx) allowed[i] = true;
    if (auto bad = detail::support_outside(a.unit, allowed))
        rep.failures.push_back(who + ": unit has a component outside the sub-basis; witness " +
                               detail::basis_label(a.space, *bad));
    for (std::size_t i : idx) {
        for (std::size_t j : idx) {
            Vec<F> col(a.dim(), F::zero());
            for (std::size_t r = 0; r < a.dim(); ++r) col[r] = a.mult.mat.get(r, i * a.dim() + j);
            if (auto bad = detail::support_outside(col, allowed)) {
                rep.failures.push_back(who + ": not closed under multiplication; witness " +
                                       detail::pair_label(a.space, i, a.space, j) + " -> " +
                                       detail::basis_label(a.space, *bad));
                return rep;
            }
        }
    }
    return rep;
}

} // namespace xhom
