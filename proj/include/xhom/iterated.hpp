#pragma once

// Iterated operators built by unrolling their defining recursions into
// explicit matrices: block transpositions s_{sr} / c_{sr} / chi_{jl}, the
// braided comultiplication of H^{⊗_c s}, the reversal g_s, and the iterated
// weak actions rho_r and rho_{sr}.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "xhom/algebra.hpp"
#include "xhom/braided.hpp"
#include "xhom/linmap.hpp"
#include "xhom/space.hpp"

namespace xhom {

inline std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t out = 1;
    for (std::size_t i = 0; i < exp; ++i) out *= base;
    return out;
}

template <class F>
SpacePtr<F> tensor_power(const SpacePtr<F>& s, std::size_t n) {
    if (n == 0) return ground_space<F>();
    if (n == 1) return s;
    std::vector<SpacePtr<F>> factors(n, s);
    return make_tensor_space<F>(s->name + "^" + std::to_string(n), factors);
}

namespace detail {

template <class F>
SpacePtr<F> power_pair_space(const SpacePtr<F>& a, std::size_t na,
                             const SpacePtr<F>& b, std::size_t nb) {
    std::vector<SpacePtr<F>> factors;
    factors.insert(factors.end(), na, a);
    factors.insert(factors.end(), nb, b);
    if (factors.empty()) return ground_space<F>();
    return make_tensor_space<F>(a->name + "^" + std::to_string(na) + "&" + b->name + "^" +
                                    std::to_string(nb),
                                factors);
}

} // namespace detail

// Unrolls the s_{sr} pattern for any cross: H⊗A -> A⊗H, giving the map
// H^{⊗s}⊗A^{⊗r} -> A^{⊗r}⊗H^{⊗s} that carries the H factors to the right:
//   s_{11} = cross
//   s_{1,r+1} = (A^{⊗r}⊗cross)∘(s_{1r}⊗A)
//   s_{s+1,r} = (s_{1r}⊗H^{⊗s})∘(H⊗s_{sr}).
// With s = 0 or r = 0 the map is the identity.
template <class F>
LinMap<F> iterated_cross(const LinMap<F>& cross, const SpacePtr<F>& h, const SpacePtr<F>& a,
                         std::size_t s, std::size_t r) {
    std::size_t dh = h->dim(), da = a->dim();
    auto dom = detail::power_pair_space(h, s, a, r);
    auto cod = detail::power_pair_space(a, r, h, s);
    if (s == 0 || r == 0) return LinMap<F>(dom, cod, SparseMatrix<F>::identity(dom->dim()));

    std::vector<SparseMatrix<F>> row; // row[l-1] = matrix of s_{1,l}
    row.push_back(cross.mat);
    for (std::size_t l = 1; l < r; ++l) {
        SparseMatrix<F> prev = SparseMatrix<F>::kron(row.back(), SparseMatrix<F>::identity(da));
        SparseMatrix<F> step = SparseMatrix<F>::kron(SparseMatrix<F>::identity(ipow(da, l)), cross.mat);
        row.push_back(step * prev);
    }

    SparseMatrix<F> acc = row[r - 1]; // s_{1,r}
    for (std::size_t k = 1; k < s; ++k) {
        SparseMatrix<F> inner = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dh), acc);
        SparseMatrix<F> outer = SparseMatrix<F>::kron(row[r - 1], SparseMatrix<F>::identity(ipow(dh, k)));
        acc = outer * inner;
    }
    return LinMap<F>(dom, cod, acc);
}

template <class F>
LinMap<F> build_s_sr(const Transposition<F>& t, const BraidedBialgebra<F>& h, const Algebra<F>& a,
                     std::size_t s, std::size_t r) {
    return iterated_cross(t.map, h.space(), a.space, s, r);
}

template <class F>
LinMap<F> build_c_sr(const BraidedBialgebra<F>& h, std::size_t s, std::size_t r) {
    return iterated_cross(h.braid, h.space(), h.space(), s, r);
}

// p_c_s: H^{⊗2s} -> H^{⊗2s}, carrying the second member of each adjacent pair
// to the right: p_1 = id, p_s = (H⊗p_{s-1}⊗H)∘(H⊗c^{⊗(s-1)}⊗H).
template <class F>
SparseMatrix<F> build_p_c(const BraidedBialgebra<F>& h, std::size_t s) {
    std::size_t dh = h.dim();
    if (s == 0) return SparseMatrix<F>::identity(1);
    if (s == 1) return SparseMatrix<F>::identity(dh * dh);
    SparseMatrix<F> inner = build_p_c(h, s - 1);
    SparseMatrix<F> id_h = SparseMatrix<F>::identity(dh);
    SparseMatrix<F> crossings = SparseMatrix<F>::identity(1);
    for (std::size_t i = 0; i + 1 < s; ++i)
        crossings = SparseMatrix<F>::kron(crossings, h.braid.mat);
    SparseMatrix<F> first = SparseMatrix<F>::kron(SparseMatrix<F>::kron(id_h, crossings), id_h);
    SparseMatrix<F> second = SparseMatrix<F>::kron(SparseMatrix<F>::kron(id_h, inner), id_h);
    return second * first;
}

// The coalgebra H^{⊗_c s}: comultiplication p_c_s∘Δ^{⊗s}, counit eps^{⊗s}.
template <class F>
Coalgebra<F> coalgebra_power_c(const BraidedBialgebra<F>& h, std::size_t s) {
    auto space = tensor_power(h.space(), s);
    if (s == 0) {
        return Coalgebra<F>{space, identity_map(space),
                            LinMap<F>(space, ground_space<F>(), SparseMatrix<F>::identity(1))};
    }
    std::vector<LinMap<F>> deltas(s, h.comult());
    std::vector<LinMap<F>> counits(s, h.counit());
    SparseMatrix<F> comult = build_p_c(h, s) * tensor_of_maps<F>(deltas).mat;
    auto sq = make_tensor_space<F>(space->name + "^2", {space, space});
    return Coalgebra<F>{space, LinMap<F>(space, sq, comult),
                        LinMap<F>(space, ground_space<F>(), tensor_of_maps<F>(counits).mat)};
}

// g_s: H^{⊗s} -> H^{⊗s}, carrying the i-th factor to place s-i+1:
// g_2 = c, g_{s+1} = (H⊗g_s)∘c_{s1}; g_0 and g_1 are identities.
template <class F>
LinMap<F> build_g(const BraidedBialgebra<F>& h, std::size_t s) {
    auto space = tensor_power(h.space(), s);
    if (s <= 1) return LinMap<F>(space, space, SparseMatrix<F>::identity(space->dim()));
    std::size_t dh = h.dim();
    SparseMatrix<F> acc = h.braid.mat; // g_2
    for (std::size_t k = 2; k < s; ++k) {
        SparseMatrix<F> c_k1 = iterated_cross(h.braid, h.space(), h.space(), k, 1).mat;
        acc = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dh), acc) * c_k1;
    }
    return LinMap<F>(space, space, acc);
}

template <class F>
LinMap<F> build_chi_jl(const LinMap<F>& chi, const SpacePtr<F>& v, const SpacePtr<F>& a,
                       std::size_t j, std::size_t l) {
    return iterated_cross(chi, v, a, j, l);
}

// rho_r: H⊗A^{⊗r} -> A^{⊗r}:
//   rho_1 = rho, rho_{r+1} = (rho_r⊗rho)∘(H⊗s_{1r}⊗A)∘(Δ⊗A^{⊗(r+1)}).
template <class F>
LinMap<F> build_rho_r(const WeakAction<F>& action, const Transposition<F>& t,
                      const BraidedBialgebra<F>& h, const Algebra<F>& a, std::size_t r) {
    if (r == 0) throw std::invalid_argument("build_rho_r: r must be >= 1");
    LinMap<F> acc = action.map; // rho_1
    for (std::size_t k = 1; k < r; ++k) {
        auto dom = detail::power_pair_space(h.space(), 1, a.space, k + 1);
        auto cod = tensor_power(a.space, k + 1);
        std::size_t da = a.dim();
        SparseMatrix<F> step1 =
            SparseMatrix<F>::kron(h.comult().mat, SparseMatrix<F>::identity(ipow(da, k + 1)));
        SparseMatrix<F> s1k = iterated_cross(t.map, h.space(), a.space, 1, k).mat;
        SparseMatrix<F> step2 = SparseMatrix<F>::kron(
            SparseMatrix<F>::kron(SparseMatrix<F>::identity(h.dim()), s1k),
            SparseMatrix<F>::identity(da));
        SparseMatrix<F> step3 = SparseMatrix<F>::kron(acc.mat, action.map.mat);
        acc = LinMap<F>(dom, cod, step3 * (step2 * step1));
    }
    return acc;
}

// rho_{sr}: H^{⊗s}⊗A^{⊗r} -> A^{⊗r}:
//   rho_{1r} = rho_r, rho_{s+1,r} = rho_{1r}∘(H⊗rho_{sr}).
template <class F>
LinMap<F> build_rho_sr(const WeakAction<F>& action, const Transposition<F>& t,
                       const BraidedBialgebra<F>& h, const Algebra<F>& a, std::size_t s,
                       std::size_t r) {
    if (s == 0 || r == 0) throw std::invalid_argument("build_rho_sr: s and r must be >= 1");
    LinMap<F> rho_1r = build_rho_r(action, t, h, a, r);
    SparseMatrix<F> acc = rho_1r.mat;
    for (std::size_t k = 1; k < s; ++k)
        acc = rho_1r.mat * SparseMatrix<F>::kron(SparseMatrix<F>::identity(h.dim()), acc);
    auto dom = detail::power_pair_space(h.space(), s, a.space, r);
    return LinMap<F>(dom, tensor_power(a.space, r), acc);
}

} // namespace xhom
