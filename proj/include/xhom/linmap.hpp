#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "xhom/space.hpp"

namespace xhom {

// Linear map between labeled spaces. Matrices act on column vectors, so
// composition g after f is matrix(g) * matrix(f). The space handles are
// diagnostic; dimension agreement is what is enforced.
template <class F>
struct LinMap {
    SpacePtr<F> dom, cod;
    SparseMatrix<F> mat;

    LinMap() = default;
    LinMap(SpacePtr<F> d, SpacePtr<F> c, SparseMatrix<F> m) : dom(std::move(d)), cod(std::move(c)), mat(std::move(m)) {
        if (dom && mat.cols() != dom->dim())
            throw std::invalid_argument("LinMap: matrix width != dim(" + dom->name + ")");
        if (cod && mat.rows() != cod->dim())
            throw std::invalid_argument("LinMap: matrix height != dim(" + cod->name + ")");
    }

    std::size_t dom_dim() const { return mat.cols(); }
    std::size_t cod_dim() const { return mat.rows(); }

    Vec<F> operator()(const Vec<F>& v) const { return mat.apply(v); }

    bool operator==(const LinMap& o) const { return mat == o.mat; }
};

template <class F>
LinMap<F> identity_map(SpacePtr<F> s) {
    return LinMap<F>(s, s, SparseMatrix<F>::identity(s->dim()));
}

template <class F>
LinMap<F> zero_map(SpacePtr<F> dom, SpacePtr<F> cod) {
    return LinMap<F>(dom, cod, SparseMatrix<F>::zero(cod->dim(), dom->dim()));
}

template <class F>
LinMap<F> compose(const LinMap<F>& g, const LinMap<F>& f) {
    if (g.dom_dim() != f.cod_dim()) {
        std::string lhs = f.cod ? f.cod->name : "dim " + std::to_string(f.cod_dim());
        std::string rhs = g.dom ? g.dom->name : "dim " + std::to_string(g.dom_dim());
        throw std::invalid_argument("compose: junction mismatch, got " + lhs + " feeding " + rhs);
    }
    return LinMap<F>(f.dom, g.cod, g.mat * f.mat);
}

// Diagram order: maps[0] applied first (diagram top), so the composite is
// maps[n-1] o ... o maps[0].
template <class F>
LinMap<F> compose_chain(const std::vector<LinMap<F>>& maps) {
    if (maps.empty()) throw std::invalid_argument("compose_chain: empty chain");
    LinMap<F> acc = maps.front();
    for (std::size_t i = 1; i < maps.size(); ++i) {
        if (maps[i].dom_dim() != acc.cod_dim()) {
            std::string lhs = acc.cod ? acc.cod->name : "dim " + std::to_string(acc.cod_dim());
            std::string rhs = maps[i].dom ? maps[i].dom->name : "dim " + std::to_string(maps[i].dom_dim());
            throw std::invalid_argument("compose_chain: junction " + std::to_string(i) +
                                        " mismatch, got " + lhs + " feeding " + rhs);
        }
        acc = LinMap<F>(acc.dom, maps[i].cod, maps[i].mat * acc.mat);
    }
    return acc;
}

template <class F>
LinMap<F> tensor_of_maps(const std::vector<LinMap<F>>& maps) {
    if (maps.empty()) {
        auto k = ground_space<F>();
        return identity_map(k);
    }
    SparseMatrix<F> m = SparseMatrix<F>::identity(1);
    std::vector<SpacePtr<F>> doms, cods;
    bool have_spaces = true;
    for (const auto& f : maps) {
        m = SparseMatrix<F>::kron(m, f.mat);
        if (f.dom && f.cod) {
            doms.push_back(f.dom);
            cods.push_back(f.cod);
        } else {
            have_spaces = false;
        }
    }
    LinMap<F> out;
    out.mat = std::move(m);
    if (have_spaces) {
        out.dom = maps.size() == 1 ? maps[0].dom : make_tensor_space<F>("", doms);
        out.cod = maps.size() == 1 ? maps[0].cod : make_tensor_space<F>("", cods);
    }
    return out;
}

// Flip v (x) w |-> w (x) v as a permutation matrix on row-major pair bases.
template <class F>
LinMap<F> flip_map(SpacePtr<F> v, SpacePtr<F> w) {
    std::size_t dv = v->dim(), dw = w->dim();
    SparseMatrix<F> m(dv * dw, dv * dw);
    for (std::size_t i = 0; i < dv; ++i)
        for (std::size_t j = 0; j < dw; ++j)
            m.add(j * dv + i, i * dw + j, F::one());
    return LinMap<F>(make_tensor_space<F>("", {v, w}), make_tensor_space<F>("", {w, v}), std::move(m));
}

template <class F>
SparseMatrix<F> flip_matrix(std::size_t dv, std::size_t dw) {
    SparseMatrix<F> m(dv * dw, dv * dw);
    for (std::size_t i = 0; i < dv; ++i)
        for (std::size_t j = 0; j < dw; ++j)
            m.add(j * dv + i, i * dw + j, F::one());
    return m;
}

// Map induced on quotients by a parent-level map. Well-definedness (the
// projected map annihilates the domain relations) is always checked; a
// convention bug upstream surfaces here instead of corrupting results.
template <class F>
LinMap<F> induced_map(const SparseMatrix<F>& parent_map, SpacePtr<F> dom, SpacePtr<F> cod,
                      const std::string& what = "induced_map") {
    const SparseMatrix<F> pd = dom->is_quotient() ? dom->pres->section : SparseMatrix<F>::identity(dom->dim());
    const SparseMatrix<F> pc = cod->is_quotient() ? cod->pres->projection : SparseMatrix<F>::identity(cod->dim());
    if (dom->is_quotient()) {
        SparseMatrix<F> pushed = pc * parent_map; // cod-classes of parent images
        SparseMatrix<F> on_rels = pushed * dom->pres->relations.transpose();
        if (!on_rels.is_zero())
            throw std::logic_error(what + ": not well defined on the quotient " + dom->name);
    }
    return LinMap<F>(dom, cod, pc * parent_map * pd);
}

} // namespace xhom
