#pragma once

// Chain-level homotopy machinery shared by the resolution and homology
// layers: graded complexes with validated differentials, deformation retract
// data, the basic perturbation lemma, and truncated total complexes of mixed
// complexes (the u-power bookkeeping behind cyclic, negative and periodic
// homology).
//
// Indexing convention: a complex stores d[n] : spaces[n] -> spaces[n-1] for
// n >= 1; d[0] is a zero placeholder that takes part in no identity. A
// homotopy h stores h[n] : big_n -> big_{n+1} for 0 <= n < top, so the
// homotopy identity at the top degree cannot be formed and is skipped with a
// note rather than checked.

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "xhom/algebra.hpp"
#include "xhom/linmap.hpp"
#include "xhom/space.hpp"
#include "xhom/sparse_matrix.hpp"

namespace xhom {

// Non-negatively graded chain complex over degrees 0 .. spaces.size()-1.
template <class F>
struct GradedComplex {
    std::vector<SpacePtr<F>> spaces;
    std::vector<LinMap<F>> d; // d[n] : spaces[n] -> spaces[n-1]; d[0] placeholder

    std::size_t top() const { return spaces.empty() ? 0 : spaces.size() - 1; }
};

// Assemble from target-indexed maps: maps[r] : spaces[r+1] -> spaces[r],
// the shape chain builders naturally produce.
template <class F>
GradedComplex<F> make_graded_complex(const std::vector<SpacePtr<F>>& spaces,
                                     const std::vector<LinMap<F>>& maps) {
    if (spaces.empty()) throw std::invalid_argument("make_graded_complex: no spaces");
    if (maps.size() + 1 != spaces.size())
        throw std::invalid_argument("make_graded_complex: need one map per consecutive degree pair");
    GradedComplex<F> c;
    c.spaces = spaces;
    c.d.push_back(zero_map(spaces[0], spaces[0]));
    for (std::size_t r = 0; r < maps.size(); ++r) {
        if (maps[r].dom_dim() != spaces[r + 1]->dim() || maps[r].cod_dim() != spaces[r]->dim())
            throw std::invalid_argument("make_graded_complex: map " + std::to_string(r) + " shape mismatch");
        c.d.push_back(maps[r]);
    }
    return c;
}

template <class F>
ValidationReport validate_complex(const GradedComplex<F>& c) {
    ValidationReport rep;
    for (std::size_t n = 2; n <= c.top(); ++n)
        if (!(c.d[n - 1].mat * c.d[n].mat).is_zero())
            rep.failures.push_back("d o d != 0 out of degree " + std::to_string(n));
    return rep;
}

// Homology dimensions ker d_n / im d_{n+1} for 0 <= n <= min(upto, top-1);
// the top degree is omitted because the incoming boundary is not stored.
template <class F>
std::vector<std::size_t> homology_dims(const GradedComplex<F>& c, std::size_t upto) {
    std::vector<std::size_t> out;
    if (c.spaces.empty()) return out;
    for (std::size_t n = 0; n + 1 <= c.top() && n <= upto; ++n) {
        std::size_t cycles = n == 0 ? c.spaces[0]->dim()
                                    : c.spaces[n]->dim() - mat_rank(c.d[n].mat);
        out.push_back(cycles - mat_rank(c.d[n + 1].mat));
    }
    return out;
}

// Deformation retract data between big (Y, d) and small (X, d) over the same
// degree range: proj o incl = id, incl o proj - id = d h + h d, incl and proj
// chain maps. `special` additionally claims the side conditions h incl = 0,
// proj h = 0, h h = 0.
template <class F>
struct HomotopyData {
    GradedComplex<F> big, small;
    std::vector<LinMap<F>> incl; // incl[n] : small_n -> big_n
    std::vector<LinMap<F>> proj; // proj[n] : big_n -> small_n
    std::vector<LinMap<F>> h;    // h[n] : big_n -> big_{n+1}, 0 <= n < top
    bool special = false;
    ValidationReport report;
};

// Check the retract identities through degree check_top (defaults to the
// whole built range). Degrees whose ingredients are not stored are skipped
// with a note so truncation never masquerades as success.
template <class F>
ValidationReport validate_homotopy(const HomotopyData<F>& data, std::size_t check_top = static_cast<std::size_t>(-1)) {
    ValidationReport rep;
    std::size_t top = data.big.top();
    if (data.small.top() != top) {
        rep.failures.push_back("degree ranges of the two complexes differ");
        return rep;
    }
    if (data.incl.size() != top + 1 || data.proj.size() != top + 1 || data.h.size() + 1 < top + 1) {
        rep.failures.push_back("map families do not cover the degree range");
        return rep;
    }
    if (check_top > top) check_top = top;

    for (std::size_t n = 0; n <= check_top; ++n) {
        if (!(data.proj[n].mat * data.incl[n].mat == SparseMatrix<F>::identity(data.small.spaces[n]->dim())))
            rep.failures.push_back("proj o incl != id at degree " + std::to_string(n));
        if (n >= 1) {
            if (!(data.big.d[n].mat * data.incl[n].mat == data.incl[n - 1].mat * data.small.d[n].mat))
                rep.failures.push_back("incl is not a chain map at degree " + std::to_string(n));
            if (!(data.small.d[n].mat * data.proj[n].mat == data.proj[n - 1].mat * data.big.d[n].mat))
                rep.failures.push_back("proj is not a chain map at degree " + std::to_string(n));
        }
        if (n + 1 <= top && n <= check_top) {
            SparseMatrix<F> lhs = data.incl[n].mat * data.proj[n].mat;
            lhs = lhs + SparseMatrix<F>::identity(data.big.spaces[n]->dim()).scaled(-F::one());
            SparseMatrix<F> rhs = data.big.d[n + 1].mat * data.h[n].mat;
            if (n >= 1) rhs = rhs + data.h[n - 1].mat * data.big.d[n].mat;
            if (!(lhs == rhs))
                rep.failures.push_back("homotopy identity fails at degree " + std::to_string(n));
        }
    }
    if (check_top == top)
        rep.notes.push_back("homotopy identity at degree " + std::to_string(top) + " not formed (h stops below top)");
    if (data.special) {
        for (std::size_t n = 0; n + 1 <= top; ++n) {
            if (n <= check_top && !(data.h[n].mat * data.incl[n].mat).is_zero())
                rep.failures.push_back("side condition h incl != 0 at degree " + std::to_string(n));
            if (n + 1 <= check_top && !(data.proj[n + 1].mat * data.h[n].mat).is_zero())
                rep.failures.push_back("side condition proj h != 0 at degree " + std::to_string(n));
            if (n + 2 <= top && n + 1 <= check_top && !(data.h[n + 1].mat * data.h[n].mat).is_zero())
                rep.failures.push_back("side condition h h != 0 at degree " + std::to_string(n));
        }
    }
    return rep;
}

// Basic perturbation lemma. delta[n] : big_n -> big_{n-1} is assumed to
// square the perturbed differential to zero wherever the output is used
// (complexes arising from truncated windows satisfy this away from the
// edges, which is why it is not enforced here), and delta o h must be
// nilpotent degreewise; then with A := sum_k delta (h delta)^k the data
//   d_big + delta, d_small + proj A incl, incl + h A incl,
//   proj + proj A h, h + h A h
// is again a deformation retract. Corrections to proj and h at the top
// degree would need maps beyond the range, so those two stay uncorrected
// there; the output identities are validated through check_top, which
// defaults to top-1 and should be lowered by callers working on truncations.
template <class F>
HomotopyData<F> perturb(const HomotopyData<F>& data, const std::vector<LinMap<F>>& delta,
                        std::size_t check_top = static_cast<std::size_t>(-1)) {
    std::size_t top = data.big.top();
    if (delta.size() != top + 1)
        throw std::invalid_argument("perturb: need one perturbation per degree (index 0 unused)");
    for (std::size_t n = 1; n <= top; ++n)
        if (delta[n].dom_dim() != data.big.spaces[n]->dim() || delta[n].cod_dim() != data.big.spaces[n - 1]->dim())
            throw std::invalid_argument("perturb: perturbation shape mismatch at degree " + std::to_string(n));

    // A[n] = delta + delta h delta + ... ; the series must terminate.
    std::vector<SparseMatrix<F>> A;
    A.push_back(delta[0].mat);
    for (std::size_t n = 1; n <= top; ++n) {
        SparseMatrix<F> term = delta[n].mat;
        SparseMatrix<F> acc = term;
        std::size_t bound = data.big.spaces[n - 1]->dim() + 1;
        std::size_t k = 0;
        while (!term.is_zero()) {
            if (++k > bound)
                throw std::invalid_argument("perturb: (id - delta h) is not invertible at degree " + std::to_string(n));
            term = delta[n].mat * (data.h[n - 1].mat * term);
            acc = acc + term;
        }
        A.push_back(acc);
    }

    HomotopyData<F> out;
    out.big = data.big;
    out.small = data.small;
    out.incl = data.incl;
    out.proj = data.proj;
    out.h = data.h;
    out.special = data.special;
    for (std::size_t n = 1; n <= top; ++n) {
        out.big.d[n].mat = data.big.d[n].mat + delta[n].mat;
        out.small.d[n].mat = data.small.d[n].mat + data.proj[n - 1].mat * (A[n] * data.incl[n].mat);
        out.incl[n].mat = data.incl[n].mat + data.h[n - 1].mat * (A[n] * data.incl[n].mat);
    }
    for (std::size_t n = 0; n + 1 <= top; ++n) {
        out.proj[n].mat = data.proj[n].mat + data.proj[n].mat * (A[n + 1] * data.h[n].mat);
        out.h[n].mat = data.h[n].mat + data.h[n].mat * (A[n + 1] * data.h[n].mat);
    }
    if (check_top == static_cast<std::size_t>(-1)) check_top = top == 0 ? 0 : top - 1;
    out.report = validate_homotopy(out, check_top);
    out.report.notes.push_back("perturbed identities validated through degree " + std::to_string(check_top));
    return out;
}

// Mixed complex (C, b, B): b[n] : C_n -> C_{n-1} with b[0] a placeholder,
// B[n] : C_n -> C_{n+1} stored for 0 <= n < top.
template <class F>
struct MixedComplex {
    std::vector<SpacePtr<F>> spaces;
    std::vector<LinMap<F>> b;
    std::vector<LinMap<F>> B;

    std::size_t top() const { return spaces.empty() ? 0 : spaces.size() - 1; }
};

template <class F>
ValidationReport validate_mixed(const MixedComplex<F>& mc) {
    ValidationReport rep;
    std::size_t top = mc.top();
    if (mc.b.size() != top + 1 || mc.B.size() + 1 < top + 1) {
        rep.failures.push_back("mixed complex map families do not cover the degree range");
        return rep;
    }
    for (std::size_t n = 2; n <= top; ++n)
        if (!(mc.b[n - 1].mat * mc.b[n].mat).is_zero())
            rep.failures.push_back("b b != 0 out of degree " + std::to_string(n));
    for (std::size_t n = 0; n + 2 <= top; ++n)
        if (!(mc.B[n + 1].mat * mc.B[n].mat).is_zero())
            rep.failures.push_back("B B != 0 out of degree " + std::to_string(n));
    for (std::size_t n = 0; n + 1 <= top; ++n) {
        SparseMatrix<F> anti = mc.b[n + 1].mat * mc.B[n].mat;
        if (n >= 1) anti = anti + mc.B[n - 1].mat * mc.b[n].mat;
        if (!anti.is_zero())
            rep.failures.push_back("b B + B b != 0 at degree " + std::to_string(n));
    }
    return rep;
}

// Truncated total complex of a mixed complex with a formal variable u of
// homological degree 2: Tot_n = (+)_i C_{n-2i} u^i over the u-power window
// lo <= i <= hi, with D(x u^i) = b(x) u^i + B(x) u^{i-1}. Blocks are ordered
// by increasing u-power. When u_bounded_below is set, the missing B
// component out of i = lo is a genuine zero (first-quadrant case); otherwise
// every component that falls off the window or past the stored C-degrees is
// a truncation artifact, and identity checks must stay away from it.
template <class F>
struct TotalComplex {
    MixedComplex<F> base;
    GradedComplex<F> complex;
    long lo = 0, hi = 0;
    bool u_bounded_below = true;
    std::vector<std::vector<long>> powers;          // powers[n]: u-powers present in Tot_n
    std::vector<std::vector<std::size_t>> offsets;  // matching column offsets

    // Index of power i in powers[n], or npos when the block is absent.
    std::size_t block_pos(std::size_t n, long i) const {
        for (std::size_t p = 0; p < powers[n].size(); ++p)
            if (powers[n][p] == i) return p;
        return static_cast<std::size_t>(-1);
    }
};

namespace detail {

inline std::string power_label(long i, const std::string& base) {
    return "u^" + std::to_string(i) + "." + base;
}

} // namespace detail

// Every outgoing component of D from block (n, i) is either stored or a
// genuine zero, so D restricted to this block is exact (not truncated). The
// b component never truncates: its target block exists whenever the source
// has positive C-degree. The B component is genuinely zero off the bottom of
// a first-quadrant window, and otherwise needs both the stored operator and
// the target block.
template <class F>
bool tot_block_complete(const TotalComplex<F>& tot, std::size_t n, long i) {
    if (tot.block_pos(n, i) == static_cast<std::size_t>(-1)) return false;
    long m = static_cast<long>(n) - 2 * i;
    if (tot.u_bounded_below && i == tot.lo) return true;
    if (n == 0) return false;
    if (m + 1 > static_cast<long>(tot.base.top())) return false;
    if (i - 1 < tot.lo) return false;
    return true;
}

template <class F>
TotalComplex<F> total_complex(const MixedComplex<F>& mc, std::size_t degrees, long lo, long hi,
                              bool u_bounded_below) {
    if (lo > hi) throw std::invalid_argument("total_complex: empty u-power window");
    TotalComplex<F> tot;
    tot.base = mc;
    tot.lo = lo;
    tot.hi = hi;
    tot.u_bounded_below = u_bounded_below;
    long ctop = static_cast<long>(mc.top());

    std::vector<SpacePtr<F>> spaces;
    for (std::size_t n = 0; n <= degrees; ++n) {
        std::vector<long> pws;
        std::vector<std::size_t> offs;
        std::vector<std::string> labels;
        for (long i = lo; i <= hi; ++i) {
            long m = static_cast<long>(n) - 2 * i;
            if (m < 0 || m > ctop) continue;
            pws.push_back(i);
            offs.push_back(labels.size());
            for (const auto& lab : mc.spaces[static_cast<std::size_t>(m)]->labels)
                labels.push_back(detail::power_label(i, lab));
        }
        tot.powers.push_back(pws);
        tot.offsets.push_back(offs);
        spaces.push_back(make_space<F>("Tot_" + std::to_string(n), labels));
    }

    std::vector<LinMap<F>> maps;
    for (std::size_t n = 1; n <= degrees; ++n) {
        SparseMatrix<F> D(spaces[n - 1]->dim(), spaces[n]->dim());
        for (std::size_t p = 0; p < tot.powers[n].size(); ++p) {
            long i = tot.powers[n][p];
            std::size_t m = static_cast<std::size_t>(static_cast<long>(n) - 2 * i);
            std::size_t src_off = tot.offsets[n][p];
            std::size_t tp = tot.block_pos(n - 1, i);
            if (m >= 1 && tp != static_cast<std::size_t>(-1)) {
                for (const auto& e : mc.b[m].mat.entries())
                    D.add(tot.offsets[n - 1][tp] + e.row, src_off + e.col, e.val);
            }
            std::size_t tq = tot.block_pos(n - 1, i - 1);
            if (m + 1 <= mc.top() && tq != static_cast<std::size_t>(-1)) {
                for (const auto& e : mc.B[m].mat.entries())
                    D.add(tot.offsets[n - 1][tq] + e.row, src_off + e.col, e.val);
            }
        }
        maps.push_back(LinMap<F>(spaces[n], spaces[n - 1], std::move(D)));
    }
    tot.complex = make_graded_complex(spaces, maps);
    return tot;
}

// D o D restricted to the columns of every block whose one- and two-step
// neighborhoods are complete; truncation-exposed blocks are listed as notes.
template <class F>
ValidationReport validate_total(const TotalComplex<F>& tot) {
    ValidationReport rep;
    std::size_t degrees = tot.complex.top();
    for (std::size_t n = 2; n <= degrees; ++n) {
        SparseMatrix<F> sq = tot.complex.d[n - 1].mat * tot.complex.d[n].mat;
        for (std::size_t p = 0; p < tot.powers[n].size(); ++p) {
            long i = tot.powers[n][p];
            long m = static_cast<long>(n) - 2 * i;
            bool safe = tot_block_complete(tot, n, i);
            if (safe && m >= 1 && !tot_block_complete(tot, n - 1, i)) safe = false;
            if (safe && !(tot.u_bounded_below && i == tot.lo) && !tot_block_complete(tot, n - 1, i - 1))
                safe = false;
            std::size_t off = tot.offsets[n][p];
            std::size_t w = tot.base.spaces[static_cast<std::size_t>(m)]->dim();
            if (!safe) {
                rep.notes.push_back("D^2 block (" + std::to_string(n) + ", u^" + std::to_string(i) +
                                    ") skipped: truncation edge");
                continue;
            }
            bool bad = false;
            for (const auto& e : sq.entries())
                if (e.col >= off && e.col < off + w) { bad = true; break; }
            if (bad)
                rep.failures.push_back("D^2 != 0 on block (" + std::to_string(n) + ", u^" + std::to_string(i) + ")");
        }
    }
    return rep;
}

// Embedding of the C_{n-2i} block into Tot_n, and the matching projection.
template <class F>
LinMap<F> block_embed(const TotalComplex<F>& tot, std::size_t n, long i) {
    std::size_t p = tot.block_pos(n, i);
    if (p == static_cast<std::size_t>(-1))
        throw std::invalid_argument("block_embed: block absent");
    std::size_t m = static_cast<std::size_t>(static_cast<long>(n) - 2 * i);
    std::size_t w = tot.base.spaces[m]->dim();
    SparseMatrix<F> e(tot.complex.spaces[n]->dim(), w);
    for (std::size_t j = 0; j < w; ++j) e.add(tot.offsets[n][p] + j, j, F::one());
    return LinMap<F>(tot.base.spaces[m], tot.complex.spaces[n], std::move(e));
}

template <class F>
LinMap<F> block_project(const TotalComplex<F>& tot, std::size_t n, long i) {
    std::size_t p = tot.block_pos(n, i);
    if (p == static_cast<std::size_t>(-1))
        throw std::invalid_argument("block_project: block absent");
    std::size_t m = static_cast<std::size_t>(static_cast<long>(n) - 2 * i);
    std::size_t w = tot.base.spaces[m]->dim();
    SparseMatrix<F> e(w, tot.complex.spaces[n]->dim());
    for (std::size_t j = 0; j < w; ++j) e.add(j, tot.offsets[n][p] + j, F::one());
    return LinMap<F>(tot.complex.spaces[n], tot.base.spaces[m], std::move(e));
}

} // namespace xhom
