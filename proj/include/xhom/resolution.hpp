#pragma once

// Small free resolution of a crossed product E = A #_chi V over its
// enveloping algebra, relative to a designated subalgebra K of A. The cells
//
//   X_{rs} = (E (x) Vbar^{(x)s}) (x)_K Abar^{(x)_K r} (x)_K E,
//   Y_s   = (E (x) Vbar^{(x)s}) (x)_A E,
//
// are realized on the reduced slot coordinates E (x) Vbar^s (x) Abar^r (x) E
// with the junction identifications imposed as machine-checked quotient
// presentations (they vanish identically when K = k, leaving plain spaces).
// The module provides the column differentials with their contracting
// homotopy, the row differentials with theirs, the higher diagonals d^l
// obtained by unrolling their defining recursion on unit right flanks and
// extending E-bilinearly, the total complex with its contraction, and the
// comparison maps phi / psi / omega to the normalized two-sided bar
// resolution of E over K, all validated degree by degree.
//
// Every map that is only canonical after descending to the identified cell
// passes through induced_map, so a wrong sign or a missing crossing surfaces
// as an exception at construction time instead of corrupting homology.

#include <array>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "xhom/algebra.hpp"
#include "xhom/crossed_product.hpp"
#include "xhom/homotopy.hpp"
#include "xhom/iterated.hpp"
#include "xhom/linmap.hpp"
#include "xhom/quotient.hpp"
#include "xhom/space.hpp"
#include "xhom/sparse_matrix.hpp"

namespace xhom {

inline constexpr std::size_t max_resolution_degree = 6;

// Direct sum with per-block offsets; labels are prefixed by the block tag.
template <class F>
struct BlockSpace {
    SpacePtr<F> space;
    std::vector<std::size_t> offsets, dims;

    std::size_t blocks() const { return dims.size(); }
};

template <class F>
BlockSpace<F> make_block_space(const std::string& name, const std::vector<SpacePtr<F>>& parts,
                               const std::vector<std::string>& tags) {
    BlockSpace<F> bs;
    std::vector<std::string> labels;
    for (std::size_t b = 0; b < parts.size(); ++b) {
        bs.offsets.push_back(labels.size());
        bs.dims.push_back(parts[b]->dim());
        for (const auto& lab : parts[b]->labels) labels.push_back(tags[b] + lab);
    }
    bs.space = make_space<F>(name, labels);
    return bs;
}

template <class F>
SparseMatrix<F> block_embed_mat(const BlockSpace<F>& bs, std::size_t b) {
    SparseMatrix<F> m(bs.space->dim(), bs.dims[b]);
    for (std::size_t j = 0; j < bs.dims[b]; ++j) m.add(bs.offsets[b] + j, j, F::one());
    return m;
}

template <class F>
SparseMatrix<F> block_project_mat(const BlockSpace<F>& bs, std::size_t b) {
    SparseMatrix<F> m(bs.dims[b], bs.space->dim());
    for (std::size_t j = 0; j < bs.dims[b]; ++j) m.add(j, bs.offsets[b] + j, F::one());
    return m;
}

// One cell of the resolution: a space presented over its reduced slot
// coordinates. proj and sect are identities when the presentation is plain.
template <class F>
struct ResolutionCell {
    std::size_t r = 0, s = 0;
    SpacePtr<F> space;
    std::size_t plain_dim = 0;
    SparseMatrix<F> proj, sect; // cell <-> slot coordinates
    SparseMatrix<F> rels;       // rows, over slot coordinates (possibly none)
};

namespace detail {

// Basis change adapted to a chain of subspaces of a slot space: columns list
// echelon bases of the cumulative spans first, then unit vectors completing
// them. mask[j] = index of the first stage whose span contains column j (or
// stages() for the completion part).
template <class F>
struct AdaptedSlot {
    SparseMatrix<F> to_adapted;   // slot -> adapted coordinates (inverse basis)
    std::vector<std::size_t> mask;
    std::size_t dim = 0;

    std::size_t stages() const { return stage_ranks.size(); }
    std::vector<std::size_t> stage_ranks;
};

template <class F>
AdaptedSlot<F> adapt_slot(std::size_t dim, const std::vector<SparseMatrix<F>>& stage_gens) {
    AdaptedSlot<F> out;
    out.dim = dim;
    Echelon<F> ech(dim);
    std::vector<Vec<F>> cols;
    for (const auto& g : stage_gens) {
        for (std::size_t c = 0; c < g.cols(); ++c) {
            Vec<F> v = zero_vec<F>(dim);
            for (const auto& e : g.entries())
                if (e.col == c) v[e.row] = e.val;
            if (ech.insert(v)) cols.push_back(v);
        }
        out.stage_ranks.push_back(cols.size());
        for (std::size_t j = out.mask.size(); j < cols.size(); ++j)
            out.mask.push_back(out.stage_ranks.size() - 1);
    }
    for (std::size_t u = 0; u < dim && cols.size() < dim; ++u) {
        Vec<F> v = zero_vec<F>(dim);
        v[u] = F::one();
        if (ech.insert(v)) {
            cols.push_back(v);
            out.mask.push_back(stage_gens.size());
        }
    }
    SparseMatrix<F> U(dim, dim);
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < dim; ++i)
            if (!cols[j][i].is_zero()) U.add(i, j, cols[j][i]);
    auto inv = mat_inverse(U);
    if (!inv) throw std::logic_error("adapt_slot: basis completion failed");
    out.to_adapted = *inv;
    return out;
}

} // namespace detail

template <class F>
class Resolution {
public:
    Resolution(const CrossedProduct<F>& cp, const std::vector<std::size_t>& coeff, std::size_t degrees)
        : cp_(cp), K_(coeff), N_(degrees) {
        if (N_ > max_resolution_degree)
            throw std::invalid_argument("Resolution: degree cap is " + std::to_string(max_resolution_degree));
        if (!detail::valid_subbasis(K_, cp_.base_dim()))
            throw std::invalid_argument("Resolution: coefficient indices are not a sub-basis of the base");
        init_base();
    }

    // ---- structure handles ----

    const CrossedProduct<F>& product() const { return cp_; }
    const std::vector<std::size_t>& coeff() const { return K_; }
    std::size_t degrees() const { return N_; }
    SpacePtr<F> vbar() const { return Vb_; }
    SpacePtr<F> abar() const { return Ab_; }
    SpacePtr<F> ebar() const { return Eb_; }
    const SparseMatrix<F>& vbar_proj() const { return pVb_; }
    const SparseMatrix<F>& vbar_sect() const { return sVb_; }
    const SparseMatrix<F>& abar_proj() const { return pAb_; }
    const SparseMatrix<F>& abar_sect() const { return sAb_; }
    const SparseMatrix<F>& ebar_proj() const { return pEb_; }
    const SparseMatrix<F>& ebar_sect() const { return sEb_; }
    const SparseMatrix<F>& base_incl() const { return iA_; }
    const SparseMatrix<F>& coeff_incl() const { return iK_; }
    const SparseMatrix<F>& gamma() const { return gammaV_; }

    // chi descended to Vbar (x) A -> A (x) Vbar.
    const SparseMatrix<F>& chi_vbar() const { return chi_vbar_; }
    // chi descended to V (x) Abar -> Abar (x) V.
    const SparseMatrix<F>& chi_coeff() const { return chi_coeff_; }

    // Vbar^s (x) A -> A (x) Vbar^s.
    const SparseMatrix<F>& cross_vbar_pow(std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = cross_vb_.find(s);
        if (it == cross_vb_.end()) {
            LinMap<F> c;
            c.mat = chi_vbar_;
            it = cross_vb_.emplace(s, iterated_cross(c, Vb_, Aspace_, s, 1).mat).first;
        }
        return it->second;
    }

    // V^j (x) Abar^l -> Abar^l (x) V^j.
    const SparseMatrix<F>& cross_coeff_pow(std::size_t j, std::size_t l) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto key = std::make_pair(j, l);
        auto it = cross_cf_.find(key);
        if (it == cross_cf_.end()) {
            LinMap<F> c;
            c.mat = chi_coeff_;
            it = cross_cf_.emplace(key, iterated_cross(c, Vspace_, Ab_, j, l).mat).first;
        }
        return it->second;
    }

    // Right A-action on L_s = E (x) Vbar^s: cross the scalar through the
    // Vbar slots, then multiply into the left flank.
    const SparseMatrix<F>& right_action(std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = ract_.find(s);
        if (it == ract_.end()) {
            std::size_t body = ipow(dVb_, s);
            SparseMatrix<F> m = SparseMatrix<F>::kron(rmulEA_, SparseMatrix<F>::identity(body)) *
                                SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_), cross_vbar_pow(s));
            it = ract_.emplace(s, std::move(m)).first;
        }
        return it->second;
    }

    // ---- cells ----

    const ResolutionCell<F>& cell(std::size_t r, std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto key = std::make_pair(r, s);
        auto it = cells_.find(key);
        if (it == cells_.end()) it = cells_.emplace(key, build_xcell(r, s)).first;
        return it->second;
    }

    const ResolutionCell<F>& ycell(std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = ycells_.find(s);
        if (it == ycells_.end()) it = ycells_.emplace(s, build_ycell(s)).first;
        return it->second;
    }

    const ResolutionCell<F>& barcell(std::size_t n) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = barcells_.find(n);
        if (it == barcells_.end()) it = barcells_.emplace(n, build_barcell(n)).first;
        return it->second;
    }

    // X_n = (+)_{r+s=n} X_{rs}, blocks ordered by increasing r.
    const BlockSpace<F>& total_space(std::size_t n) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = xtot_.find(n);
        if (it == xtot_.end()) {
            std::vector<SpacePtr<F>> parts;
            std::vector<std::string> tags;
            for (std::size_t r = 0; r <= n; ++r) {
                parts.push_back(cell(r, n - r).space);
                tags.push_back("X(" + std::to_string(r) + "," + std::to_string(n - r) + ")");
            }
            it = xtot_.emplace(n, make_block_space<F>("X_" + std::to_string(n), parts, tags)).first;
        }
        return it->second;
    }

    // ---- column family: partial_s : Y_s -> Y_{s-1} and its contraction ----

    const LinMap<F>& column_d(std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = coldiff_.find(s);
        if (it == coldiff_.end()) {
            SparseMatrix<F> m(ipow(dVb_, s - 1) * dE_ * dE_, ipow(dVb_, s) * dE_ * dE_);
            for (std::size_t i = 0; i <= s; ++i) {
                SparseMatrix<F> f = i < s
                    ? SparseMatrix<F>::kron(lface(s, i), SparseMatrix<F>::identity(dE_))
                    : SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_ * ipow(dVb_, s - 1)),
                                            mu_ * SparseMatrix<F>::kron(gamma_sect_, SparseMatrix<F>::identity(dE_)));
                m = m + f.scaled(sign(i));
            }
            it = coldiff_.emplace(s, induced_map(m, ycell(s).space, ycell(s - 1).space, "column differential")).first;
        }
        return it->second;
    }

    // sigma^{-1}_s; index 0 is E -> Y_0, index s >= 1 is Y_{s-1} -> Y_s.
    const LinMap<F>& column_sigma(std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = sigy_.find(s);
        if (it == sigy_.end()) {
            if (s == 0) {
                SparseMatrix<F> m = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_), etaE_).scaled(-F::one());
                it = sigy_.emplace(0, induced_map(m, Espace_, ycell(0).space, "column contraction")).first;
            } else {
                std::size_t sm = s - 1;
                std::size_t body = ipow(dVb_, sm);
                SparseMatrix<F> step1 = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_ * body), barE_);
                SparseMatrix<F> step2 = SparseMatrix<F>::kron(
                    SparseMatrix<F>::identity(dE_),
                    SparseMatrix<F>::kron(cross_vbar_pow(sm), SparseMatrix<F>::identity(dVb_)));
                SparseMatrix<F> step3 = SparseMatrix<F>::kron(rmulEA_, SparseMatrix<F>::identity(body * dVb_));
                SparseMatrix<F> step4 = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_ * body * dVb_), etaE_);
                SparseMatrix<F> m = (step4 * step3 * step2 * step1).scaled(sign(sm));
                it = sigy_.emplace(s, induced_map(m, ycell(sm).space, ycell(s).space, "column contraction")).first;
            }
        }
        return it->second;
    }

    // Augmentations (unsigned multiplication maps; the augmented complexes
    // use their negatives on the X and Y sides).
    LinMap<F> column_aug() const { return induced_map(mu_, ycell(0).space, Espace_, "column augmentation"); }
    LinMap<F> total_aug() const { return induced_map(mu_, cell(0, 0).space, Espace_, "total augmentation"); }
    LinMap<F> bar_aug() const { return induced_map(mu_, barcell(0).space, Espace_, "bar augmentation"); }

    // ---- row family: d^0_{rs} : X_{rs} -> X_{r-1,s} and its contraction ----

    const LinMap<F>& row_d(std::size_t r, std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto key = std::make_pair(r, s);
        auto it = rowdiff_.find(key);
        if (it == rowdiff_.end()) {
            std::size_t Ls = dE_ * ipow(dVb_, s);
            SparseMatrix<F> m(Ls * ipow(dAb_, r - 1) * dE_, Ls * ipow(dAb_, r) * dE_);
            for (std::size_t p = 0; p <= r; ++p) {
                SparseMatrix<F> f;
                if (p == 0) {
                    SparseMatrix<F> merge = right_action(s) * SparseMatrix<F>::kron(SparseMatrix<F>::identity(Ls), sAb_);
                    f = SparseMatrix<F>::kron(merge, SparseMatrix<F>::identity(ipow(dAb_, r - 1) * dE_));
                } else if (p < r) {
                    f = SparseMatrix<F>::kron(
                        SparseMatrix<F>::identity(Ls * ipow(dAb_, p - 1)),
                        SparseMatrix<F>::kron(mAb_, SparseMatrix<F>::identity(ipow(dAb_, r - p - 1) * dE_)));
                } else {
                    SparseMatrix<F> merge = mu_ * SparseMatrix<F>::kron(iA_ * sAb_, SparseMatrix<F>::identity(dE_));
                    f = SparseMatrix<F>::kron(SparseMatrix<F>::identity(Ls * ipow(dAb_, r - 1)), merge);
                }
                m = m + f.scaled(sign(p));
            }
            m = m.scaled(sign(s));
            it = rowdiff_.emplace(key, induced_map(m, cell(r, s).space, cell(r - 1, s).space, "row differential")).first;
        }
        return it->second;
    }

    // nu_s : X_{0s} -> Y_s, induced by the identity on slot coordinates.
    const LinMap<F>& nu(std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = nu_.find(s);
        if (it == nu_.end()) {
            SparseMatrix<F> id = SparseMatrix<F>::identity(cell(0, s).plain_dim);
            it = nu_.emplace(s, induced_map(id, cell(0, s).space, ycell(s).space, "nu")).first;
        }
        return it->second;
    }

    // sigma^0 with target X_{rs}: from Y_s when r = 0, else from X_{r-1,s}.
    // Both split the right flank E = A (x) gamma(V); the X-to-X version
    // carries the sign (-1)^{r+s}.
    const LinMap<F>& row_sigma(std::size_t r, std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto key = std::make_pair(r, s);
        auto it = sigrow_.find(key);
        if (it == sigrow_.end()) {
            std::size_t Ls = dE_ * ipow(dVb_, s);
            LinMap<F> out;
            if (r == 0) {
                SparseMatrix<F> m =
                    SparseMatrix<F>::kron(right_action(s), SparseMatrix<F>::identity(dE_)) *
                    SparseMatrix<F>::kron(SparseMatrix<F>::identity(Ls), splitA_);
                out = induced_map(m, ycell(s).space, cell(0, s).space, "row contraction");
            } else {
                SparseMatrix<F> m = SparseMatrix<F>::kron(
                    SparseMatrix<F>::identity(Ls * ipow(dAb_, r - 1)),
                    SparseMatrix<F>::kron(pAb_, gammaV_));
                m = m.scaled(sign(r + s));
                out = induced_map(m, cell(r - 1, s).space, cell(r, s).space, "row contraction");
            }
            it = sigrow_.emplace(key, std::move(out)).first;
        }
        return it->second;
    }

    // ---- higher diagonals d^l and contraction diagonals sigma^l ----

    // d^l_{rs} : X_{rs} -> X_{r+l-1, s-l}, 1 <= l <= s. Built by evaluating
    // the defining recursion on unit right flanks and extending E-bilinearly.
    const LinMap<F>& diagonal_d(std::size_t l, std::size_t r, std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        if (l < 1 || l > s) throw std::invalid_argument("diagonal_d: need 1 <= l <= s");
        std::array<std::size_t, 3> key{l, r, s};
        auto it = dl_.find(key);
        if (it != dl_.end()) return it->second;

        SparseMatrix<F> comp;
        if (l == 1 && r == 0) {
            comp = row_sigma(0, s - 1).mat * column_d(s).mat * nu(s).mat;
        } else if (l == 1) {
            comp = (row_sigma(r, s - 1).mat * diagonal_d(1, r - 1, s).mat * row_d(r, s).mat).scaled(-F::one());
        } else {
            comp = SparseMatrix<F>(cell(r + l - 1, s - l).space->dim(), cell(r, s).space->dim());
            std::size_t j0 = r == 0 ? 1 : 0;
            for (std::size_t j = j0; j < l; ++j) {
                SparseMatrix<F> inner = j == 0 ? row_d(r, s).mat : diagonal_d(j, r, s).mat;
                std::size_t rj = r + (j == 0 ? 0 : j) - 1;  // r-index after the first step
                std::size_t sj = j == 0 ? s : s - j;
                SparseMatrix<F> mid = diagonal_d(l - j, rj, sj).mat;
                comp = comp + row_sigma(r + l - 1, s - l).mat * mid * inner;
            }
            comp = comp.scaled(-F::one());
        }
        LinMap<F> ext = extend_unit_flank(cell(r, s), flank_target(cell(r + l - 1, s - l)), comp,
                                          "diagonal differential");
        return dl_.emplace(key, std::move(ext)).first->second;
    }

    // Closed single-diagonal form: the alternating sum of the column faces
    // acting on the Vbar block, with the last face crossing the final Vbar
    // slot through the Abar block before multiplying into the right flank.
    LinMap<F> diagonal_d1_closed(std::size_t r, std::size_t s) const {
        std::size_t Ls = dE_ * ipow(dVb_, s);
        std::size_t tail = ipow(dAb_, r) * dE_;
        SparseMatrix<F> m(dE_ * ipow(dVb_, s - 1) * tail, Ls * tail);
        for (std::size_t i = 0; i < s; ++i)
            m = m + SparseMatrix<F>::kron(lface(s, i), SparseMatrix<F>::identity(tail)).scaled(sign(i));
        std::size_t head = dE_ * ipow(dVb_, s - 1);
        SparseMatrix<F> wrap =
            SparseMatrix<F>::kron(SparseMatrix<F>::identity(head * ipow(dAb_, r)),
                                  mu_ * SparseMatrix<F>::kron(gammaV_, SparseMatrix<F>::identity(dE_))) *
        SparseMatrix<F>::kron(SparseMatrix<F>::identity(head),
                                  SparseMatrix<F>::kron(cross_coeff_pow(1, r), SparseMatrix<F>::identity(dE_))) *
            SparseMatrix<F>::kron(SparseMatrix<F>::identity(head),
                                  SparseMatrix<F>::kron(sVb_, SparseMatrix<F>::identity(tail)));
        m = m + wrap.scaled(sign(s));
        return induced_map(m, cell(r, s).space, cell(r, s - 1).space, "closed diagonal");
    }

    // sigma^l with target X_{rs}: domain X_{r-l-1, s+l} for r > l, and
    // Y_{s+l} for r = l (the leftmost diagonal). sigma^0 is row_sigma.
    const LinMap<F>& diagonal_sigma(std::size_t l, std::size_t r, std::size_t s) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        if (l == 0) return row_sigma(r, s);
        if (r < l + 1 && r != l) throw std::invalid_argument("diagonal_sigma: bad target indices");
        std::array<std::size_t, 3> key{l, r, s};
        auto it = sl_.find(key);
        if (it != sl_.end()) return it->second;

        SparseMatrix<F> comp(cell(r, s).space->dim(),
                             r == l ? ycell(s + l).space->dim() : cell(r - l - 1, s + l).space->dim());
        for (std::size_t i = 0; i < l; ++i) {
            // sigma^i lands in X_{r-l+i, s+l-i}; d^{l-i} carries it to X_{r-1, s}.
            const LinMap<F>& si = diagonal_sigma(i, r - l + i, s + l - i);
            const LinMap<F>& dmid = diagonal_d(l - i, r - l + i, s + l - i);
            comp = comp + row_sigma(r, s).mat * dmid.mat * si.mat;
        }
        comp = comp.scaled(-F::one());
        LinMap<F> out(r == l ? ycell(s + l).space : cell(r - l - 1, s + l).space, cell(r, s).space, comp);
        return sl_.emplace(key, std::move(out)).first->second;
    }

    // ---- total complex and its contraction ----

    const LinMap<F>& total_d(std::size_t n) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = dtot_.find(n);
        if (it != dtot_.end()) return it->second;
        const BlockSpace<F>& src = total_space(n);
        const BlockSpace<F>& tgt = total_space(n - 1);
        SparseMatrix<F> m(tgt.space->dim(), src.space->dim());
        for (std::size_t r = 0; r <= n; ++r) {
            std::size_t s = n - r;
            for (std::size_t l = r == 0 ? 1 : 0; l <= s; ++l) {
                const SparseMatrix<F>& piece = l == 0 ? row_d(r, s).mat : diagonal_d(l, r, s).mat;
                std::size_t tr = r + (l == 0 ? 0 : l) - 1;
                m = m + block_embed_mat(tgt, tr) * piece * block_project_mat(src, r);
            }
        }
        return dtot_.emplace(n, LinMap<F>(src.space, tgt.space, std::move(m))).first->second;
    }

    // sigma-bar_n; index 0 is E -> X_0, index n >= 1 is X_{n-1} -> X_n.
    const LinMap<F>& total_sigma(std::size_t n) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = sbar_.find(n);
        if (it != sbar_.end()) return it->second;
        const BlockSpace<F>& tgt = total_space(n);
        LinMap<F> out;
        if (n == 0) {
            SparseMatrix<F> m = block_embed_mat(tgt, 0) * row_sigma(0, 0).mat * column_sigma(0).mat;
            out = LinMap<F>(Espace_, tgt.space, std::move(m));
        } else {
            const BlockSpace<F>& src = total_space(n - 1);
            SparseMatrix<F> m(tgt.space->dim(), src.space->dim());
            SparseMatrix<F> lift = column_sigma(n).mat * nu(n - 1).mat * block_project_mat(src, 0);
            for (std::size_t l = 0; l <= n; ++l)
                m = m + (block_embed_mat(tgt, l) * diagonal_sigma(l, l, n - l).mat * lift).scaled(-F::one());
            for (std::size_t r = 0; r + 1 <= n; ++r) {
                std::size_t s = n - 1 - r;
                for (std::size_t l = 0; l <= s; ++l)
                    m = m + block_embed_mat(tgt, r + l + 1) * diagonal_sigma(l, r + l + 1, s - l).mat *
                            block_project_mat(src, r);
            }
            out = LinMap<F>(src.space, tgt.space, std::move(m));
        }
        return sbar_.emplace(n, std::move(out)).first->second;
    }

    // ---- normalized two-sided bar resolution of E over K ----

    const LinMap<F>& bar_b(std::size_t n) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = barb_.find(n);
        if (it != barb_.end()) return it->second;
        std::size_t mid = ipow(dEb_, n);
        SparseMatrix<F> m(dE_ * ipow(dEb_, n - 1) * dE_, dE_ * mid * dE_);
        for (std::size_t i = 0; i <= n; ++i) {
            SparseMatrix<F> f;
            if (i == 0) {
                f = SparseMatrix<F>::kron(mu_ * SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_), sEb_),
                                          SparseMatrix<F>::identity(ipow(dEb_, n - 1) * dE_));
            } else if (i < n) {
                f = SparseMatrix<F>::kron(
                    SparseMatrix<F>::identity(dE_ * ipow(dEb_, i - 1)),
                    SparseMatrix<F>::kron(mEb_, SparseMatrix<F>::identity(ipow(dEb_, n - i - 1) * dE_)));
            } else {
                f = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_ * ipow(dEb_, n - 1)),
                                          mu_ * SparseMatrix<F>::kron(sEb_, SparseMatrix<F>::identity(dE_)));
            }
            m = m + f.scaled(sign(i));
        }
        return barb_.emplace(n, induced_map(m, barcell(n).space, barcell(n - 1).space, "bar differential")).first->second;
    }

    // xi_n; index 0 is E -> Bar_0, index n >= 1 is Bar_{n-1} -> Bar_n, with
    // the sign (-1)^n, barring the right flank and appending a unit.
    const LinMap<F>& xi(std::size_t n) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = xi_.find(n);
        if (it != xi_.end()) return it->second;
        LinMap<F> out;
        if (n == 0) {
            SparseMatrix<F> m = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_), etaE_);
            out = induced_map(m, Espace_, barcell(0).space, "bar contraction");
        } else {
            SparseMatrix<F> fl = SparseMatrix<F>::kron(pEb_, etaE_);
            SparseMatrix<F> m = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_ * ipow(dEb_, n - 1)), fl);
            m = m.scaled(sign(n));
            out = induced_map(m, barcell(n - 1).space, barcell(n).space, "bar contraction");
        }
        return xi_.emplace(n, std::move(out)).first->second;
    }

    // ---- comparison maps ----

    const LinMap<F>& phi(std::size_t n) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = phi_.find(n);
        if (it != phi_.end()) return it->second;
        LinMap<F> out;
        if (n == 0) {
            out = LinMap<F>(total_space(0).space, barcell(0).space,
                            SparseMatrix<F>::identity(barcell(0).space->dim()));
        } else {
            const BlockSpace<F>& src = total_space(n);
            SparseMatrix<F> comp = xi(n).mat * phi(n - 1).mat * total_d(n).mat;
            SparseMatrix<F> m(barcell(n).space->dim(), src.space->dim());
            for (std::size_t r = 0; r <= n; ++r) {
                LinMap<F> ext = extend_unit_flank(cell(r, n - r), flank_target(barcell(n)),
                                                  comp * block_embed_mat(src, r), "phi");
                m = m + ext.mat * block_project_mat(src, r);
            }
            out = LinMap<F>(src.space, barcell(n).space, std::move(m));
        }
        return phi_.emplace(n, std::move(out)).first->second;
    }

    const LinMap<F>& psi(std::size_t n) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = psi_.find(n);
        if (it != psi_.end()) return it->second;
        LinMap<F> out;
        if (n == 0) {
            out = LinMap<F>(barcell(0).space, total_space(0).space,
                            SparseMatrix<F>::identity(barcell(0).space->dim()));
        } else {
            SparseMatrix<F> comp = total_sigma(n).mat * psi(n - 1).mat * bar_b(n).mat;
            out = extend_unit_flank(barcell(n), block_flank_target(n), comp, "psi");
        }
        return psi_.emplace(n, std::move(out)).first->second;
    }

    // omega_n : Bar_{n-1} -> Bar_n; omega_1 = 0.
    const LinMap<F>& omega(std::size_t n) const {
        std::lock_guard<std::recursive_mutex> g(mx_);
        auto it = omega_.find(n);
        if (it != omega_.end()) return it->second;
        LinMap<F> out;
        if (n == 1) {
            out = zero_map(barcell(0).space, barcell(1).space);
        } else {
            std::size_t m = n - 1;
            SparseMatrix<F> inner = phi(m).mat * psi(m).mat;
            inner = inner + SparseMatrix<F>::identity(barcell(m).space->dim()).scaled(-F::one());
            inner = inner + (omega(m).mat * bar_b(m).mat).scaled(-F::one());
            out = extend_unit_flank(barcell(m), flank_target(barcell(n)), xi(n).mat * inner, "omega");
        }
        return omega_.emplace(n, std::move(out)).first->second;
    }

    // ---- filtrations ----

    // Column indices of the slot-adapted basis of Bar_n whose middle tuple
    // has at least n-i slots inside the image of A; their images under the
    // adapted basis (composed with the cell projection) span F^i(Bar_n).
    // special_counts lists, per adapted tuple, how many middles are special.
    SparseMatrix<F> bar_adapted_basis(std::size_t n) const {
        SparseMatrix<F> mid = SparseMatrix<F>::identity(1);
        for (std::size_t j = 0; j < n; ++j) mid = SparseMatrix<F>::kron(mid, eb_from_adapted_);
        SparseMatrix<F> full = SparseMatrix<F>::kron(
            SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_), mid), SparseMatrix<F>::identity(dE_));
        return barcell(n).proj * full;
    }

    SparseMatrix<F> bar_to_adapted(std::size_t n) const {
        SparseMatrix<F> mid = SparseMatrix<F>::identity(1);
        for (std::size_t j = 0; j < n; ++j) mid = SparseMatrix<F>::kron(mid, eb_adapt_.to_adapted);
        SparseMatrix<F> full = SparseMatrix<F>::kron(
            SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_), mid), SparseMatrix<F>::identity(dE_));
        return full * barcell(n).sect;
    }

    // Number of special (image-of-A) middle coordinates of an adapted plain
    // index at bar degree n.
    std::size_t bar_special_count(std::size_t n, std::size_t plain_idx) const {
        std::size_t special = eb_adapt_.stage_ranks.empty() ? 0 : eb_adapt_.stage_ranks[0];
        std::vector<std::size_t> dims(n + 2, dEb_);
        dims.front() = dims.back() = dE_;
        Shape sh{dims};
        auto t = sh.decode(plain_idx);
        std::size_t count = 0;
        for (std::size_t j = 1; j + 1 < t.size(); ++j)
            if (t[j] < special) ++count;
        return count;
    }

    // ---- flank extension ----

    struct FlankTarget {
        SpacePtr<F> space;
        std::vector<SparseMatrix<F>> rmul; // right multiplication per E-basis vector
    };

    FlankTarget flank_target(const ResolutionCell<F>& c) const {
        FlankTarget t;
        t.space = c.space;
        t.rmul = right_mults(c);
        return t;
    }

    FlankTarget block_flank_target(std::size_t n) const {
        const BlockSpace<F>& bs = total_space(n);
        FlankTarget t;
        t.space = bs.space;
        for (std::size_t y = 0; y < dE_; ++y) {
            SparseMatrix<F> m(bs.space->dim(), bs.space->dim());
            for (std::size_t r = 0; r <= n; ++r) {
                const auto& rm = right_mults(cell(r, n - r));
                m = m + block_embed_mat(bs, r) * rm[y] * block_project_mat(bs, r);
            }
            t.rmul.push_back(std::move(m));
        }
        return t;
    }

    // Right E-linear extension off the unit right flank: comp is a cell-level
    // map out of src whose values are only trusted on z (x) 1; the result
    // sends z (x) y to comp(z (x) 1).y and must annihilate the source
    // relations, which is the convention trap this machinery exists to catch.
    LinMap<F> extend_unit_flank(const ResolutionCell<F>& src, const FlankTarget& tgt,
                                const SparseMatrix<F>& comp, const std::string& what) const {
        std::size_t body = src.plain_dim / dE_;
        SparseMatrix<F> emb1(src.plain_dim, body);
        for (std::size_t j = 0; j < body; ++j)
            for (std::size_t y = 0; y < dE_; ++y)
                if (!unitE_[y].is_zero()) emb1.add(j * dE_ + y, j, unitE_[y]);
        SparseMatrix<F> T = comp * (src.proj * emb1);
        SparseMatrix<F> P(tgt.space->dim(), src.plain_dim);
        for (std::size_t y = 0; y < dE_; ++y) {
            SparseMatrix<F> sel(body, src.plain_dim);
            for (std::size_t j = 0; j < body; ++j) sel.add(j, j * dE_ + y, F::one());
            P = P + tgt.rmul[y] * T * sel;
        }
        if (src.rels.rows() > 0 && !(P * src.rels.transpose()).is_zero())
            throw std::logic_error(what + ": flank extension does not descend to " + src.space->name);
        return LinMap<F>(src.space, tgt.space, P * src.sect);
    }

    // ---- validation ----

    ValidationReport validate() const;

private:
    CrossedProduct<F> cp_;
    std::vector<std::size_t> K_;
    std::size_t N_;

    std::size_t dA_ = 0, dV_ = 0, dE_ = 0, dK_ = 0, dVb_ = 0, dAb_ = 0, dEb_ = 0;
    SpacePtr<F> Aspace_, Vspace_, Espace_, Vb_, Ab_, Eb_;
    SparseMatrix<F> muA_, mu_, etaA_, etaE_;
    Vec<F> unitE_;
    SparseMatrix<F> iA_, iK_, colKE_, gammaV_, gamma_sect_;
    SparseMatrix<F> pVb_, sVb_, pAb_, sAb_, pEb_, sEb_;
    SparseMatrix<F> chi_vbar_, chi_coeff_;
    SparseMatrix<F> rmulEA_, splitA_, barE_, mAb_, mEb_;
    detail::AdaptedSlot<F> eb_adapt_;
    SparseMatrix<F> eb_from_adapted_;

    mutable std::recursive_mutex mx_;
    mutable std::map<std::pair<std::size_t, std::size_t>, ResolutionCell<F>> cells_;
    mutable std::map<std::size_t, ResolutionCell<F>> ycells_, barcells_;
    mutable std::map<std::size_t, BlockSpace<F>> xtot_;
    mutable std::map<std::size_t, SparseMatrix<F>> cross_vb_, ract_;
    mutable std::map<std::pair<std::size_t, std::size_t>, SparseMatrix<F>> cross_cf_;
    mutable std::map<std::size_t, std::vector<SparseMatrix<F>>> lface_;
    mutable std::map<std::size_t, LinMap<F>> coldiff_, sigy_, nu_, dtot_, sbar_, barb_, xi_, phi_, psi_, omega_;
    mutable std::map<std::pair<std::size_t, std::size_t>, LinMap<F>> rowdiff_, sigrow_;
    mutable std::map<std::array<std::size_t, 3>, LinMap<F>> dl_, sl_;
    mutable std::map<const Space<F>*, std::vector<SparseMatrix<F>>> rmul_;

    static F sign(std::size_t k) { return k % 2 == 0 ? F::one() : -F::one(); }

    static SparseMatrix<F> column_of(const SparseMatrix<F>& m, std::size_t c) {
        SparseMatrix<F> col(m.rows(), 1);
        for (const auto& e : m.entries())
            if (e.col == c) col.add(e.row, 0, e.val);
        return col;
    }

    struct Reduced {
        SpacePtr<F> space;
        SparseMatrix<F> proj, sect;
    };

    static Reduced reduce_slot(const std::string& name, SpacePtr<F> parent, const SparseMatrix<F>& rel_rows) {
        QuotientPresentation<F> q = quotient_space(parent->dim(), rel_rows);
        std::vector<std::string> labels;
        for (std::size_t j : q.free_cols) labels.push_back("[" + parent->labels[j] + "]");
        return Reduced{make_space<F>(name, labels), q.projection, q.section};
    }

    void init_base() {
        dA_ = cp_.base_dim();
        dV_ = cp_.fiber_dim();
        dE_ = cp_.total_dim();
        dK_ = K_.size();
        Aspace_ = cp_.base.space;
        Vspace_ = cp_.fiber;
        Espace_ = cp_.total.space;
        muA_ = cp_.base.mult.mat;
        mu_ = cp_.total.mult.mat;
        etaA_ = cp_.base.unit_map().mat;
        etaE_ = cp_.total.unit_map().mat;
        unitE_ = cp_.total.unit;
        iA_ = cp_.base_inclusion().mat;
        gammaV_ = cp_.fiber_section().mat;
        iK_ = SparseMatrix<F>(dA_, dK_);
        for (std::size_t t = 0; t < dK_; ++t) iK_.add(K_[t], t, F::one());
        colKE_ = iA_ * iK_;

        SparseMatrix<F> vrel(1, dV_);
        for (std::size_t j = 0; j < dV_; ++j)
            if (!cp_.fiber_unit[j].is_zero()) vrel.add(0, j, cp_.fiber_unit[j]);
        Reduced rv = reduce_slot("Vbar", Vspace_, vrel);
        Vb_ = rv.space; pVb_ = rv.proj; sVb_ = rv.sect;
        dVb_ = Vb_->dim();

        SparseMatrix<F> arel(dK_, dA_);
        for (std::size_t t = 0; t < dK_; ++t) arel.add(t, K_[t], F::one());
        Reduced ra = reduce_slot("Abar", Aspace_, arel);
        Ab_ = ra.space; pAb_ = ra.proj; sAb_ = ra.sect;
        dAb_ = Ab_->dim();

        Reduced re = reduce_slot("Ebar", Espace_, colKE_.transpose());
        Eb_ = re.space; pEb_ = re.proj; sEb_ = re.sect;
        dEb_ = Eb_->dim();

        rmulEA_ = mu_ * SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_), iA_);
        splitA_ = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dA_), gammaV_);
        barE_ = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dA_), pVb_);
        gamma_sect_ = gammaV_ * sVb_;
        mAb_ = pAb_ * muA_ * SparseMatrix<F>::kron(sAb_, sAb_);
        mEb_ = pEb_ * mu_ * SparseMatrix<F>::kron(sEb_, sEb_);

        chi_vbar_ = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dA_), pVb_) * cp_.chi.mat *
                    SparseMatrix<F>::kron(sVb_, SparseMatrix<F>::identity(dA_));
        chi_coeff_ = SparseMatrix<F>::kron(pAb_, SparseMatrix<F>::identity(dV_)) * cp_.chi.mat *
                     SparseMatrix<F>::kron(SparseMatrix<F>::identity(dV_), sAb_);

        eb_adapt_ = detail::adapt_slot<F>(dEb_, {pEb_ * iA_});
        auto inv = mat_inverse(eb_adapt_.to_adapted);
        eb_from_adapted_ = *inv;
    }

    const std::vector<SparseMatrix<F>>& right_mults(const ResolutionCell<F>& c) const {
        auto it = rmul_.find(c.space.get());
        if (it != rmul_.end()) return it->second;
        std::vector<SparseMatrix<F>> out;
        std::size_t body = c.plain_dim / dE_;
        for (std::size_t y = 0; y < dE_; ++y) {
            SparseMatrix<F> col(dE_, 1);
            col.add(y, 0, F::one());
            SparseMatrix<F> plain = SparseMatrix<F>::kron(
                SparseMatrix<F>::identity(body), mu_ * SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_), col));
            out.push_back(induced_map(plain, c.space, c.space, "right flank action").mat);
        }
        return rmul_.emplace(c.space.get(), std::move(out)).first->second;
    }

    // Column faces restricted to L_s = E (x) Vbar^s, indices 0..s-1 (the last
    // face, which touches the right flank, is assembled by the callers).
    const std::vector<SparseMatrix<F>>& lface_family(std::size_t s) const {
        auto it = lface_.find(s);
        if (it != lface_.end()) return it->second;
        std::vector<SparseMatrix<F>> faces;
        SparseMatrix<F> mg = SparseMatrix<F>::kron(SparseMatrix<F>::identity(dA_), pVb_) * mu_ *
                             SparseMatrix<F>::kron(gamma_sect_, gamma_sect_); // Vbar^2 -> A (x) Vbar
        for (std::size_t i = 0; i < s; ++i) {
            SparseMatrix<F> f;
            if (i == 0) {
                f = SparseMatrix<F>::kron(mu_ * SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_), gamma_sect_),
                                          SparseMatrix<F>::identity(ipow(dVb_, s - 1)));
            } else {
                std::size_t pre = ipow(dVb_, i - 1), post = ipow(dVb_, s - i - 1);
                SparseMatrix<F> step1 = SparseMatrix<F>::kron(
                    SparseMatrix<F>::identity(dE_ * pre),
                    SparseMatrix<F>::kron(mg, SparseMatrix<F>::identity(post)));
                SparseMatrix<F> step2 = SparseMatrix<F>::kron(
                    SparseMatrix<F>::identity(dE_),
                    SparseMatrix<F>::kron(cross_vbar_pow(i - 1), SparseMatrix<F>::identity(ipow(dVb_, s - i))));
                SparseMatrix<F> step3 =
                    SparseMatrix<F>::kron(rmulEA_, SparseMatrix<F>::identity(ipow(dVb_, s - 1)));
                f = step3 * step2 * step1;
            }
            faces.push_back(std::move(f));
        }
        return lface_.emplace(s, std::move(faces)).first->second;
    }

    SparseMatrix<F> lface(std::size_t s, std::size_t i) const { return lface_family(s)[i]; }

    // Junction relation rows over the reduced slot coordinates; zero blocks
    // (always the case for K = k) are dropped.
    static void append_rels(SparseMatrix<F>& rels, const SparseMatrix<F>& gen) {
        if (gen.is_zero()) return;
        SparseMatrix<F> rows = gen.transpose();
        rels = rels.rows() == 0 ? rows : SparseMatrix<F>::vcat(rels, rows);
    }

    ResolutionCell<F> build_xcell(std::size_t r, std::size_t s) const {
        std::vector<SpacePtr<F>> factors;
        factors.push_back(Espace_);
        for (std::size_t j = 0; j < s; ++j) factors.push_back(Vb_);
        for (std::size_t j = 0; j < r; ++j) factors.push_back(Ab_);
        factors.push_back(Espace_);
        std::string name = "X(" + std::to_string(r) + "," + std::to_string(s) + ")";
        auto plain = make_tensor_space<F>(name + "~slots", factors);
        std::size_t Ls = dE_ * ipow(dVb_, s);

        SparseMatrix<F> rels(0, plain->dim());
        for (std::size_t t = 0; plain->dim() > 0 && t < dK_; ++t) {
            SparseMatrix<F> lam = column_of(iK_, t);
            SparseMatrix<F> lamE = column_of(colKE_, t);
            SparseMatrix<F> Rls = right_action(s) * SparseMatrix<F>::kron(SparseMatrix<F>::identity(Ls), lam);
            SparseMatrix<F> LA = pAb_ * muA_ * SparseMatrix<F>::kron(lam, sAb_);
            SparseMatrix<F> RA = pAb_ * muA_ * SparseMatrix<F>::kron(sAb_, lam);
            SparseMatrix<F> LE = mu_ * SparseMatrix<F>::kron(lamE, SparseMatrix<F>::identity(dE_));
            std::size_t tail = ipow(dAb_, r) * dE_;
            // junction after L_s
            SparseMatrix<F> nxt = r > 0
                ? SparseMatrix<F>::kron(LA, SparseMatrix<F>::identity(ipow(dAb_, r - 1) * dE_))
                : LE;
            append_rels(rels, SparseMatrix<F>::kron(Rls, SparseMatrix<F>::identity(tail)) -
                                  SparseMatrix<F>::kron(SparseMatrix<F>::identity(Ls), nxt));
            // junctions between Abar slots
            for (std::size_t p = 1; p < r; ++p) {
                SparseMatrix<F> pair = SparseMatrix<F>::kron(RA, SparseMatrix<F>::identity(dAb_)) -
                                       SparseMatrix<F>::kron(SparseMatrix<F>::identity(dAb_), LA);
                append_rels(rels, SparseMatrix<F>::kron(
                                      SparseMatrix<F>::identity(Ls * ipow(dAb_, p - 1)),
                                      SparseMatrix<F>::kron(pair, SparseMatrix<F>::identity(ipow(dAb_, r - p - 1) * dE_))));
            }
            // junction before the right flank
            if (r > 0) {
                SparseMatrix<F> pair = SparseMatrix<F>::kron(RA, SparseMatrix<F>::identity(dE_)) -
                                       SparseMatrix<F>::kron(SparseMatrix<F>::identity(dAb_), LE);
                append_rels(rels, SparseMatrix<F>::kron(SparseMatrix<F>::identity(Ls * ipow(dAb_, r - 1)), pair));
            }
        }
        return finish_cell(r, s, name, plain, rels);
    }

    ResolutionCell<F> build_ycell(std::size_t s) const {
        std::vector<SpacePtr<F>> factors;
        factors.push_back(Espace_);
        for (std::size_t j = 0; j < s; ++j) factors.push_back(Vb_);
        factors.push_back(Espace_);
        std::string name = "Y(" + std::to_string(s) + ")";
        auto plain = make_tensor_space<F>(name + "~slots", factors);
        std::size_t Ls = dE_ * ipow(dVb_, s);
        SparseMatrix<F> rels(0, plain->dim());
        for (std::size_t a = 0; a < dA_; ++a) {
            SparseMatrix<F> cola(dA_, 1);
            cola.add(a, 0, F::one());
            SparseMatrix<F> Rls = right_action(s) * SparseMatrix<F>::kron(SparseMatrix<F>::identity(Ls), cola);
            SparseMatrix<F> LE = mu_ * SparseMatrix<F>::kron(iA_ * cola, SparseMatrix<F>::identity(dE_));
            append_rels(rels, SparseMatrix<F>::kron(Rls, SparseMatrix<F>::identity(dE_)) -
                                  SparseMatrix<F>::kron(SparseMatrix<F>::identity(Ls), LE));
        }
        ResolutionCell<F> c = finish_cell(0, s, name, plain, rels);
        return c;
    }

    ResolutionCell<F> build_barcell(std::size_t n) const {
        std::vector<SpacePtr<F>> factors;
        factors.push_back(Espace_);
        for (std::size_t j = 0; j < n; ++j) factors.push_back(Eb_);
        factors.push_back(Espace_);
        std::string name = "Bar(" + std::to_string(n) + ")";
        auto plain = make_tensor_space<F>(name + "~slots", factors);
        SparseMatrix<F> rels(0, plain->dim());
        for (std::size_t t = 0; t < dK_; ++t) {
            SparseMatrix<F> lamE = column_of(colKE_, t);
            SparseMatrix<F> RE = mu_ * SparseMatrix<F>::kron(SparseMatrix<F>::identity(dE_), lamE);
            SparseMatrix<F> LE = mu_ * SparseMatrix<F>::kron(lamE, SparseMatrix<F>::identity(dE_));
            SparseMatrix<F> REb = pEb_ * mu_ * SparseMatrix<F>::kron(sEb_, lamE);
            SparseMatrix<F> LEb = pEb_ * mu_ * SparseMatrix<F>::kron(lamE, sEb_);
            for (std::size_t j = 0; j <= n; ++j) {
                std::size_t pre = j == 0 ? 1 : dE_ * ipow(dEb_, j - 1);
                std::size_t post = j == n ? 1 : ipow(dEb_, n - j - 1) * dE_;
                const SparseMatrix<F>& R = j == 0 ? RE : REb;
                const SparseMatrix<F>& L = j == n ? LE : LEb;
                std::size_t dr = j == 0 ? dE_ : dEb_;
                std::size_t dl = j == n ? dE_ : dEb_;
                SparseMatrix<F> pair = SparseMatrix<F>::kron(R, SparseMatrix<F>::identity(dl)) -
                                       SparseMatrix<F>::kron(SparseMatrix<F>::identity(dr), L);
                append_rels(rels, SparseMatrix<F>::kron(
                                      SparseMatrix<F>::identity(pre),
                                      SparseMatrix<F>::kron(pair, SparseMatrix<F>::identity(post))));
            }
        }
        return finish_cell(n, 0, name, plain, rels);
    }

    ResolutionCell<F> finish_cell(std::size_t r, std::size_t s, const std::string& name,
                                  SpacePtr<F> plain, const SparseMatrix<F>& rels) const {
        ResolutionCell<F> c;
        c.r = r;
        c.s = s;
        c.plain_dim = plain->dim();
        if (rels.rows() == 0) {
            auto sp = make_space<F>(name, plain->labels);
            c.space = sp;
            c.proj = SparseMatrix<F>::identity(c.plain_dim);
            c.sect = SparseMatrix<F>::identity(c.plain_dim);
            c.rels = SparseMatrix<F>(0, c.plain_dim);
        } else {
            auto sp = make_quotient_space<F>(name, plain, rels);
            c.space = sp;
            c.proj = sp->pres->projection;
            c.sect = sp->pres->section;
            c.rels = sp->pres->relations;
        }
        return c;
    }
};

// Bundled construction result: the lazily built resolution plus the full
// validation sweep forced through the requested degrees.
template <class F>
struct BuiltResolution {
    std::shared_ptr<Resolution<F>> res;
    ValidationReport report;
};

template <class F>
ValidationReport Resolution<F>::validate() const {
    ValidationReport rep;
    auto idmat = [](std::size_t d) { return SparseMatrix<F>::identity(d); };
    auto checkm = [&rep](const std::string& name, const SparseMatrix<F>& lhs, const SparseMatrix<F>& rhs) {
        if (!(lhs == rhs)) rep.failures.push_back(name);
    };
    auto checkz = [&rep](const std::string& name, const SparseMatrix<F>& m) {
        if (!m.is_zero()) rep.failures.push_back(name);
    };

    // coefficient sub-basis sanity
    {
        std::vector<bool> allowed(dA_, false);
        for (std::size_t t : K_) allowed[t] = true;
        if (detail::support_outside(cp_.base.unit, allowed))
            rep.failures.push_back("coefficient span does not contain the unit");
        for (std::size_t t : K_)
            for (std::size_t u : K_) {
                Vec<F> prod = muA_.apply(unit_vec<F>(dA_ * dA_, K_[t] * dA_ + K_[u]));
                if (detail::support_outside(prod, allowed)) {
                    rep.failures.push_back("coefficient span is not multiplicatively closed");
                    t = u = K_.size();
                    break;
                }
            }
        checkm("unit crossing normalization",
               cp_.chi.mat * SparseMatrix<F>::kron(cp_.fiber_unit_map().mat, idmat(dA_)),
               SparseMatrix<F>::kron(idmat(dA_), cp_.fiber_unit_map().mat));
        checkz("coefficient crossing stability",
               SparseMatrix<F>::kron(pAb_, idmat(dV_)) * cp_.chi.mat *
                   SparseMatrix<F>::kron(idmat(dV_), iK_));
    }
    if (!rep.failures.empty()) {
        rep.notes.push_back("structural preconditions failed; map validation skipped");
        return rep;
    }

    // column complexes
    checkz("column augmentation vanishes on boundaries", column_aug().mat * column_d(1).mat);
    for (std::size_t s = 2; s <= N_; ++s)
        checkz("column d d = 0 at s = " + std::to_string(s), column_d(s - 1).mat * column_d(s).mat);
    checkm("column contraction at the augmentation",
           column_aug().mat.scaled(-F::one()) * column_sigma(0).mat, idmat(dE_));
    for (std::size_t s = 0; s + 1 <= N_; ++s) {
        SparseMatrix<F> lhs = column_d(s + 1).mat.scaled(-F::one()) * column_sigma(s + 1).mat;
        lhs = lhs + (s == 0 ? column_sigma(0).mat * column_aug().mat.scaled(-F::one())
                            : column_sigma(s).mat * column_d(s).mat.scaled(-F::one()));
        checkm("column contraction at s = " + std::to_string(s), lhs, idmat(ycell(s).space->dim()));
    }

    // row complexes
    for (std::size_t s = 0; s <= N_; ++s) {
        for (std::size_t r = 2; r + s <= N_; ++r)
            checkz("row d d = 0 at (" + std::to_string(r) + "," + std::to_string(s) + ")",
                   row_d(r - 1, s).mat * row_d(r, s).mat);
        checkm("row contraction onto Y at s = " + std::to_string(s),
               nu(s).mat * row_sigma(0, s).mat, idmat(ycell(s).space->dim()));
        if (1 + s <= N_) {
            SparseMatrix<F> lhs = row_d(1, s).mat * row_sigma(1, s).mat + row_sigma(0, s).mat * nu(s).mat;
            checkm("row contraction at (0," + std::to_string(s) + ")", lhs, idmat(cell(0, s).space->dim()));
        }
        for (std::size_t r = 1; r + 1 + s <= N_; ++r) {
            SparseMatrix<F> lhs = row_d(r + 1, s).mat * row_sigma(r + 1, s).mat +
                                  row_sigma(r, s).mat * row_d(r, s).mat;
            checkm("row contraction at (" + std::to_string(r) + "," + std::to_string(s) + ")",
                   lhs, idmat(cell(r, s).space->dim()));
        }
    }

    // closed single-diagonal form
    for (std::size_t s = 1; s <= N_; ++s)
        for (std::size_t r = 0; r + s <= N_; ++r)
            checkm("single diagonal closed form at (" + std::to_string(r) + "," + std::to_string(s) + ")",
                   diagonal_d(1, r, s).mat, diagonal_d1_closed(r, s).mat);

    // total complex
    checkz("total augmentation vanishes on boundaries", total_aug().mat * total_d(1).mat * block_embed_mat(total_space(1), 0));
    checkz("total augmentation vanishes on boundaries (row block)",
           total_aug().mat * total_d(1).mat * block_embed_mat(total_space(1), 1));
    for (std::size_t n = 2; n <= N_; ++n)
        checkz("total d d = 0 at n = " + std::to_string(n), total_d(n - 1).mat * total_d(n).mat);
    checkm("total contraction at the augmentation",
           total_aug().mat.scaled(-F::one()) * total_sigma(0).mat, idmat(dE_));
    for (std::size_t n = 0; n + 1 <= N_; ++n) {
        SparseMatrix<F> lhs = total_d(n + 1).mat * total_sigma(n + 1).mat;
        lhs = lhs + (n == 0 ? total_sigma(0).mat * total_aug().mat.scaled(-F::one())
                            : total_sigma(n).mat * total_d(n).mat);
        checkm("total contraction at n = " + std::to_string(n), lhs, idmat(total_space(n).space->dim()));
    }

    // bar resolution
    checkz("bar augmentation vanishes on boundaries", bar_aug().mat * bar_b(1).mat);
    for (std::size_t n = 2; n <= N_; ++n)
        checkz("bar d d = 0 at n = " + std::to_string(n), bar_b(n - 1).mat * bar_b(n).mat);
    checkm("bar contraction at the augmentation", bar_aug().mat * xi(0).mat, idmat(dE_));
    for (std::size_t n = 0; n + 1 <= N_; ++n) {
        SparseMatrix<F> lhs = bar_b(n + 1).mat * xi(n + 1).mat;
        lhs = lhs + (n == 0 ? xi(0).mat * bar_aug().mat : xi(n).mat * bar_b(n).mat);
        checkm("bar contraction at n = " + std::to_string(n), lhs, idmat(barcell(n).space->dim()));
    }

    // comparison maps
    for (std::size_t n = 0; n <= N_; ++n) {
        checkm("psi phi = id at n = " + std::to_string(n), psi(n).mat * phi(n).mat,
               idmat(total_space(n).space->dim()));
        if (n >= 1) {
            checkm("phi chain map at n = " + std::to_string(n), bar_b(n).mat * phi(n).mat,
                   phi(n - 1).mat * total_d(n).mat);
            checkm("psi chain map at n = " + std::to_string(n), total_d(n).mat * psi(n).mat,
                   psi(n - 1).mat * bar_b(n).mat);
        }
    }
    for (std::size_t n = 0; n + 1 <= N_; ++n) {
        SparseMatrix<F> lhs = phi(n).mat * psi(n).mat;
        lhs = lhs + idmat(barcell(n).space->dim()).scaled(-F::one());
        SparseMatrix<F> rhs = bar_b(n + 1).mat * omega(n + 1).mat;
        if (n >= 1) rhs = rhs + omega(n).mat * bar_b(n).mat;
        checkm("comparison homotopy at n = " + std::to_string(n), lhs, rhs);
    }
    rep.notes.push_back("comparison homotopy at degree " + std::to_string(N_) +
                        " not formed (omega stops below top)");

    // filtration preservation: per column of the adapted bases, the number
    // of special middle slots may only grow along phi / psi / omega.
    for (std::size_t n = 0; n <= N_; ++n) {
        const BlockSpace<F>& bs = total_space(n);
        SparseMatrix<F> phad = bar_to_adapted(n) * phi(n).mat;
        bool bad = false;
        for (const auto& e : phad.entries()) {
            std::size_t r = 0;
            while (r + 1 < bs.blocks() && bs.offsets[r + 1] <= e.col) ++r;
            std::size_t srcs = n - r;
            if (bar_special_count(n, e.row) < n - srcs) { bad = true; break; }
        }
        if (bad) rep.failures.push_back("phi filtration preservation at n = " + std::to_string(n));

        SparseMatrix<F> adapted = bar_adapted_basis(n);
        SparseMatrix<F> psim = psi(n).mat * adapted;
        bad = false;
        for (const auto& e : psim.entries()) {
            std::size_t r = 0;
            while (r + 1 < bs.blocks() && bs.offsets[r + 1] <= e.row) ++r;
            std::size_t tgts = n - r;
            if (tgts > n - bar_special_count(n, e.col)) { bad = true; break; }
        }
        if (bad) rep.failures.push_back("psi filtration preservation at n = " + std::to_string(n));

        if (n + 1 <= N_) {
            SparseMatrix<F> om = bar_to_adapted(n + 1) * omega(n + 1).mat * adapted;
            bad = false;
            for (const auto& e : om.entries()) {
                std::size_t need = bar_special_count(n, e.col) + 1;
                if (bar_special_count(n + 1, e.row) < need) { bad = true; break; }
            }
            if (bad) rep.failures.push_back("omega filtration preservation at n = " + std::to_string(n));
        }
    }
    return rep;
}

// Builds the resolution through total degree `degrees` and forces the full
// validation sweep.
template <class F>
BuiltResolution<F> build_resolution(const CrossedProduct<F>& cp, const std::vector<std::size_t>& coeff,
                                    std::size_t degrees) {
    BuiltResolution<F> out;
    out.res = std::make_shared<Resolution<F>>(cp, coeff, degrees);
    out.report = out.res->validate();
    return out;
}

// The comparison maps and homotopy packaged as deformation retract data:
// big = bar resolution, small = total complex, incl = psi^T... (incl is psi's
// partner phi does not include into bar; here incl : X -> Bar is phi, proj
// is psi, and omega is the homotopy on the bar side).
template <class F>
HomotopyData<F> comparison_maps(const Resolution<F>& res) {
    HomotopyData<F> data;
    std::vector<SpacePtr<F>> bspaces, xspaces;
    std::vector<LinMap<F>> bd, xd;
    for (std::size_t n = 0; n <= res.degrees(); ++n) {
        bspaces.push_back(res.barcell(n).space);
        xspaces.push_back(res.total_space(n).space);
        if (n >= 1) {
            bd.push_back(res.bar_b(n));
            xd.push_back(res.total_d(n));
        }
        data.incl.push_back(res.phi(n));
        data.proj.push_back(res.psi(n));
        if (n + 1 <= res.degrees()) data.h.push_back(res.omega(n + 1));
    }
    data.big = make_graded_complex(bspaces, bd);
    data.small = make_graded_complex(xspaces, xd);
    data.special = false;
    data.report = validate_homotopy(data);
    return data;
}

} // namespace xhom
