#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "xhom/quotient.hpp"
#include "xhom/sparse_matrix.hpp"

namespace xhom {

// Labeled finite-dimensional vector space. A space is either plain (its
// basis labels stand for themselves) or carries a quotient presentation over
// a plain parent space, in which case the labels name the classes of the
// parent basis vectors at the free columns of the echelonized relations.
//
// Tensor spaces use row-major tuple indexing: index = ((i0*d1 + i1)*d2 + i2)...
template <class F>
struct Space {
    std::string name;
    std::vector<std::string> labels;
    std::shared_ptr<const QuotientPresentation<F>> pres; // null for plain spaces
    std::shared_ptr<const Space<F>> parent;              // set iff pres is set

    std::size_t dim() const { return labels.size(); }
    bool is_quotient() const { return pres != nullptr; }
};

template <class F>
using SpacePtr = std::shared_ptr<const Space<F>>;

template <class F>
SpacePtr<F> make_space(std::string name, std::vector<std::string> labels) {
    auto s = std::make_shared<Space<F>>();
    s->name = std::move(name);
    s->labels = std::move(labels);
    return s;
}

template <class F>
SpacePtr<F> make_space(std::string name, std::size_t dim) {
    std::vector<std::string> labels(dim);
    for (std::size_t i = 0; i < dim; ++i) labels[i] = "e" + std::to_string(i);
    return make_space<F>(std::move(name), std::move(labels));
}

// Quotient of a plain space by the span of relation rows.
template <class F>
SpacePtr<F> make_quotient_space(std::string name, SpacePtr<F> parent, const SparseMatrix<F>& relations) {
    auto q = std::make_shared<QuotientPresentation<F>>(quotient_space(parent->dim(), relations));
    auto s = std::make_shared<Space<F>>();
    s->name = std::move(name);
    for (std::size_t j : q->free_cols) s->labels.push_back("[" + parent->labels[j] + "]");
    s->pres = q;
    s->parent = parent;
    return s;
}

// Mixed-radix shape helper for generator enumeration over tensor factors.
struct Shape {
    std::vector<std::size_t> dims;

    std::size_t total() const {
        std::size_t t = 1;
        for (std::size_t d : dims) t *= d;
        return t;
    }

    std::size_t index(const std::vector<std::size_t>& tuple) const {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < dims.size(); ++i) idx = idx * dims[i] + tuple[i];
        return idx;
    }

    std::vector<std::size_t> decode(std::size_t idx) const {
        std::vector<std::size_t> tuple(dims.size(), 0);
        for (std::size_t i = dims.size(); i-- > 0;) {
            tuple[i] = idx % dims[i];
            idx /= dims[i];
        }
        return tuple;
    }
};

namespace detail {

inline std::string tuple_label(const std::vector<std::string>& parts) {
    if (parts.empty()) return "()";
    std::string out = "(";
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += "|";
        out += parts[i];
    }
    return out + ")";
}

} // namespace detail

// Tensor product space. For quotient factors the result is presented over
// the tensor product of the parents; with lowest-index pivoting the free
// columns of the combined relations are exactly the tuples of factor free
// columns, so the reduced basis keeps the row-major tuple structure and
// Kronecker products of reduced matrices remain valid.
template <class F>
SpacePtr<F> make_tensor_space(std::string name, const std::vector<SpacePtr<F>>& factors) {
    bool any_quotient = false;
    for (const auto& f : factors)
        if (f->is_quotient()) any_quotient = true;

    auto s = std::make_shared<Space<F>>();
    s->name = std::move(name);

    Shape shape;
    for (const auto& f : factors) shape.dims.push_back(f->dim());
    std::size_t total = shape.total();
    s->labels.reserve(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        auto t = shape.decode(idx);
        std::vector<std::string> parts;
        for (std::size_t i = 0; i < factors.size(); ++i) parts.push_back(factors[i]->labels[t[i]]);
        s->labels.push_back(detail::tuple_label(parts));
    }

    if (any_quotient) {
        std::vector<SpacePtr<F>> parents;
        for (const auto& f : factors) parents.push_back(f->is_quotient() ? f->parent : f);
        auto parent = make_tensor_space<F>(s->name + "~parent", parents);

        auto q = std::make_shared<QuotientPresentation<F>>();
        q->parent_dim = parent->dim();
        q->dim = total;
        SparseMatrix<F> proj = SparseMatrix<F>::identity(1);
        SparseMatrix<F> sect = SparseMatrix<F>::identity(1);
        for (const auto& f : factors) {
            SparseMatrix<F> p = f->is_quotient() ? f->pres->projection : SparseMatrix<F>::identity(f->dim());
            SparseMatrix<F> se = f->is_quotient() ? f->pres->section : SparseMatrix<F>::identity(f->dim());
            proj = SparseMatrix<F>::kron(proj, p);
            sect = SparseMatrix<F>::kron(sect, se);
        }
        q->projection = proj;
        q->section = sect;

        // Relation generators: rel_i placed in one slot, identities elsewhere.
        SparseMatrix<F> rels(0, parent->dim());
        std::vector<std::size_t> pdims;
        for (const auto& p : parents) pdims.push_back(p->dim());
        for (std::size_t slot = 0; slot < factors.size(); ++slot) {
            if (!factors[slot]->is_quotient()) continue;
            const SparseMatrix<F>& r = factors[slot]->pres->relations;
            if (r.rows() == 0) continue;
            SparseMatrix<F> block = SparseMatrix<F>::identity(1);
            for (std::size_t i = 0; i < factors.size(); ++i)
                block = SparseMatrix<F>::kron(block, i == slot ? r : SparseMatrix<F>::identity(pdims[i]));
            rels = rels.rows() == 0 ? block : SparseMatrix<F>::vcat(rels, block);
        }
        q->relations = rref(rels).reduced;
        // The section columns are unit vectors, so its nonzero rows are the
        // free columns of the combined relations, already in quotient order.
        for (const auto& e : q->section.entries()) q->free_cols.push_back(e.row);
        std::sort(q->free_cols.begin(), q->free_cols.end());

        s->pres = q;
        s->parent = parent;
    }
    return s;
}

// Ground field as the empty tensor product.
template <class F>
SpacePtr<F> ground_space() {
    return make_space<F>("k", std::vector<std::string>{"1"});
}

} // namespace xhom
