#include <gtest/gtest.h>

#include <random>

#include "xhom/linmap.hpp"
#include "xhom/relative.hpp"
#include "xhom/space.hpp"

using namespace xhom;

namespace {

template <class F>
LinMap<F> random_map(std::mt19937_64& rng, SpacePtr<F> dom, SpacePtr<F> cod) {
    SparseMatrix<F> m(cod->dim(), dom->dim());
    std::uniform_int_distribution<int> val(-4, 4);
    for (std::size_t r = 0; r < cod->dim(); ++r)
        for (std::size_t c = 0; c < dom->dim(); ++c)
            m.add(r, c, F::from_int(val(rng)));
    return LinMap<F>(dom, cod, m);
}

// Group algebra k[Z/2] multiplication as a raw matrix: basis {1, g}.
template <class F>
SparseMatrix<F> z2_mult() {
    SparseMatrix<F> m(2, 4);
    m.add(0, 0, F::one()); // 1*1 = 1
    m.add(1, 1, F::one()); // 1*g = g
    m.add(1, 2, F::one()); // g*1 = g
    m.add(0, 3, F::one()); // g*g = 1
    return m;
}

// 2x2 matrix algebra, basis {E00, E01, E10, E11}in row-major order.
template <class F>
SparseMatrix<F> mat2_mult() {
    SparseMatrix<F> m(4, 16);
    auto idx = [](std::size_t i, std::size_t j) { return i * 2 + j; };
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                for (std::size_t l = 0; l < 2; ++l)
                    if (j == k) m.add(idx(i, l), idx(i, j) * 4 + idx(k, l), F::one());
    return m;
}

} // namespace

TEST(Space, TensorBasics) {
    Fp::set_modulus(101);
    auto a = make_space<Fp>("A", 2);
    auto b = make_space<Fp>("B", 3);
    auto t = make_tensor_space<Fp>("T", {a, b});
    EXPECT_EQ(t->dim(), 6u);
    EXPECT_EQ(t->labels[1], "(e0|e1)");

    auto empty = make_tensor_space<Fp>("k", {});
    EXPECT_EQ(empty->dim(), 1u);
}

TEST(Space, QuotientThenTensorEqualsTensorThenQuotient) {
    Fp::set_modulus(101);
    auto p = make_space<Fp>("P", 3);
    SparseMatrix<Fp> rel(1, 3);
    rel.add(0, 0, Fp::one());
    rel.add(0, 2, -Fp::one()); // e0 ~ e2
    auto q = make_quotient_space<Fp>("Q", p, rel);
    EXPECT_EQ(q->dim(), 2u);

    auto b = make_space<Fp>("B", 2);
    auto qt = make_tensor_space<Fp>("QT", {q, b});
    EXPECT_EQ(qt->dim(), 4u);
    ASSERT_TRUE(qt->is_quotient());
    EXPECT_EQ(qt->parent->dim(), 6u);

    // Independently: quotient the full tensor space by rel (x) id.
    auto pb = make_tensor_space<Fp>("PB", {p, b});
    SparseMatrix<Fp> rel2 = SparseMatrix<Fp>::kron(rel, SparseMatrix<Fp>::identity(2));
    auto q2 = quotient_space(pb->dim(), rel2);
    EXPECT_EQ(q2.dim, qt->dim());
    EXPECT_EQ(q2.projection, qt->pres->projection);
    EXPECT_EQ(q2.section, qt->pres->section);
}

TEST(LinMap, TensorOfMaps) {
    Fp::set_modulus(101);
    auto a2 = make_space<Fp>("A2", 2);
    auto a3 = make_space<Fp>("A3", 3);
    auto t = tensor_of_maps<Fp>({identity_map(a2), identity_map(a3)});
    EXPECT_EQ(t.mat, SparseMatrix<Fp>::identity(6));

    std::mt19937_64 rng(3);
    auto f = random_map<Fp>(rng, a2, a3);
    auto one = make_tensor_space<Fp>("k", {});
    auto t2 = tensor_of_maps<Fp>({f, identity_map(one)});
    EXPECT_EQ(t2.mat, f.mat);
}

TEST(LinMap, TensorFunctorial) {
    Fp::set_modulus(101);
    std::mt19937_64 rng(11);
    auto x = make_space<Fp>("X", 2), y = make_space<Fp>("Y", 3), z = make_space<Fp>("Z", 2);
    for (int trial = 0; trial < 5; ++trial) {
        auto f = random_map<Fp>(rng, y, z), fp = random_map<Fp>(rng, x, y);
        auto g = random_map<Fp>(rng, y, x), gp = random_map<Fp>(rng, z, y);
        auto lhs = tensor_of_maps<Fp>({compose(f, fp), compose(g, gp)});
        auto rhs = compose(tensor_of_maps<Fp>({f, g}), tensor_of_maps<Fp>({fp, gp}));
        EXPECT_EQ(lhs.mat, rhs.mat);
    }
}

TEST(LinMap, Flip) {
    Fp::set_modulus(101);
    auto one = make_space<Fp>("k", 1);
    auto n = make_space<Fp>("N", 4);
    EXPECT_EQ(flip_map<Fp>(one, n).mat, SparseMatrix<Fp>::identity(4));

    auto two = make_space<Fp>("T", 2);
    auto tau = flip_map<Fp>(two, two);
    EXPECT_EQ(compose(tau, tau).mat, SparseMatrix<Fp>::identity(4));

    auto v = make_space<Fp>("V", 2), w = make_space<Fp>("W", 3);
    auto vw = flip_map<Fp>(v, w), wv = flip_map<Fp>(w, v);
    EXPECT_EQ(compose(wv, vw).mat, SparseMatrix<Fp>::identity(6));
}

TEST(LinMap, ComposeChain) {
    Fp::set_modulus(101);
    std::mt19937_64 rng(17);
    auto x = make_space<Fp>("X", 3), y = make_space<Fp>("Y", 2);
    auto f = random_map<Fp>(rng, x, y);
    EXPECT_EQ(compose_chain<Fp>({f}).mat, f.mat);

    auto g = random_map<Fp>(rng, y, x);
    EXPECT_EQ(compose_chain<Fp>({f, g}).mat, (g.mat * f.mat));
    EXPECT_THROW(compose_chain<Fp>({f, f}), std::invalid_argument);
}

TEST(LinMap, InducedOnQuotient) {
    Fp::set_modulus(101);
    auto p = make_space<Fp>("P", 2);
    SparseMatrix<Fp> rel(1, 2);
    rel.add(0, 0, Fp::one());
    rel.add(0, 1, -Fp::one());
    auto q = make_quotient_space<Fp>("Q", p, rel);

    // x |-> (sum of coordinates) e0 descends; projection of e0 - e1 is zero.
    SparseMatrix<Fp> sum(2, 2);
    sum.add(0, 0, Fp::one());
    sum.add(0, 1, Fp::one());
    auto ind = induced_map<Fp>(sum, q, q, "sum");
    EXPECT_EQ(ind.mat.rows(), 1u);

    // x |-> x does descend (identity), and round trips with section/projection.
    auto idq = induced_map<Fp>(SparseMatrix<Fp>::identity(2), q, q, "id");
    EXPECT_EQ(idq.mat, SparseMatrix<Fp>::identity(1));

    // e0 |-> e0, e1 |-> 0 does not descend.
    SparseMatrix<Fp> bad(2, 2);
    bad.add(0, 0, Fp::one());
    EXPECT_THROW(induced_map<Fp>(bad, q, q, "bad"), std::logic_error);
}

TEST(Relative, TrivialSubalgebra) {
    Fp::set_modulus(101);
    auto m = make_space<Fp>("M", 2);
    auto n = make_space<Fp>("N", 3);
    // K = k acting by scaling on both sides.
    SparseMatrix<Fp> right = SparseMatrix<Fp>::identity(2);
    SparseMatrix<Fp> left = SparseMatrix<Fp>::identity(3);
    auto t = relative_tensor<Fp>("T", m, n, right, left, 1);
    EXPECT_EQ(t->dim(), 6u);
    EXPECT_FALSE(t->is_quotient());
}

TEST(Relative, RegularBimoduleOverItself) {
    Fp::set_modulus(101);
    auto a = make_space<Fp>("kZ2", 2);
    auto mult = z2_mult<Fp>();
    // A (x)_A A with regular actions has dimension dim A.
    auto t = relative_tensor<Fp>("AxA", a, a, mult, mult, 2);
    EXPECT_EQ(t->dim(), 2u);
}

TEST(Relative, MiddleAssociativity) {
    Fp::set_modulus(101);
    auto a = make_space<Fp>("kZ2", 2);
    auto mult = z2_mult<Fp>();
    auto left = relative_tensor<Fp>("L", relative_tensor<Fp>("MN", a, a, mult, mult, 2), a,
                                    // right action of K on (M (x)_K N): act on the last factor.
                                    induced_map<Fp>(SparseMatrix<Fp>::kron(SparseMatrix<Fp>::identity(2), mult),
                                                    make_tensor_space<Fp>("", {relative_tensor<Fp>("MN", a, a, mult, mult, 2), make_space<Fp>("K", 2)}),
                                                    relative_tensor<Fp>("MN", a, a, mult, mult, 2), "act").mat,
                                    mult, 2);
    auto right = relative_tensor<Fp>("R", a, relative_tensor<Fp>("NP", a, a, mult, mult, 2), mult,
                                     induced_map<Fp>(SparseMatrix<Fp>::kron(mult, SparseMatrix<Fp>::identity(2)),
                                                     make_tensor_space<Fp>("", {make_space<Fp>("K", 2), relative_tensor<Fp>("NP", a, a, mult, mult, 2)}),
                                                     relative_tensor<Fp>("NP", a, a, mult, mult, 2), "act").mat,
                                     2);
    EXPECT_EQ(left->dim(), right->dim());
    EXPECT_EQ(left->dim(), 2u);
}

TEST(Relative, CoinvariantsCases) {
    Fp::set_modulus(101);
    // Commutative regular bimodule: commutators vanish, quotient is everything.
    auto a = make_space<Fp>("kZ2", 2);
    auto mult = z2_mult<Fp>();
    auto c = coinvariants<Fp>("C", a, mult, mult, 2);
    EXPECT_EQ(c->dim(), 2u);

    // 2x2 matrix algebra over itself: commutator space has codimension 1.
    auto m2 = make_space<Fp>("M2", 4);
    auto mm = mat2_mult<Fp>();
    auto tr = coinvariants<Fp>("Tr", m2, mm, mm, 4);
    EXPECT_EQ(tr->dim(), 1u);
}
