#include <gtest/gtest.h>

#include "structures_util.hpp"
#include "xhom/algebra.hpp"
#include "xhom/braided.hpp"
#include "xhom/iterated.hpp"
#include "xhom/scalar.hpp"

using namespace xhom;
using namespace xhom::testutil;

namespace {

bool mentions(const ValidationReport& rep, const std::string& needle) {
    for (const auto& f : rep.failures)
        if (f.find(needle) != std::string::npos) return true;
    return false;
}

} // namespace

TEST(ValidateAlgebra, PassingCases) {
    Fp::set_modulus(101);
    EXPECT_TRUE(validate_algebra(z2_hopf<Fp>().alg).ok());
    EXPECT_TRUE(validate_algebra(kx2_algebra<Fp>()).ok());
    EXPECT_TRUE(validate_algebra(mat2_algebra<Fp>()).ok());
    EXPECT_TRUE(validate_algebra(mat2_algebra<Rat>()).ok());
}

TEST(ValidateAlgebra, SwappedStructureConstant) {
    Fp::set_modulus(101);
    // Swapping the g-column outputs (1·g = 1 and g·g = g) breaks the left
    // unit law at basis vector g.
    auto space = make_space<Fp>("kZ2", {"1", "g"});
    auto broken = make_algebra<Fp>(space,
                                   table<Fp>(2, 4, {1, 1, 0, 0, //
                                                    0, 0, 1, 1}),
                                   unit_of<Fp>(2));
    auto rep = validate_algebra(broken);
    ASSERT_FALSE(rep.ok());
    EXPECT_TRUE(mentions(rep, "left unit law"));
    EXPECT_TRUE(mentions(rep, "g"));
}

TEST(ValidateCoalgebra, Cases) {
    Fp::set_modulus(101);
    EXPECT_TRUE(validate_coalgebra(z2_hopf<Fp>().coalg).ok());
    EXPECT_TRUE(validate_coalgebra(superline_hopf<Fp>().coalg).ok());

    auto space = make_space<Fp>("kZ2", {"1", "g"});
    auto broken = make_coalgebra<Fp>(space,
                                     table<Fp>(4, 2, {1, 0, //
                                                      0, 0, //
                                                      0, 1, //
                                                      0, 0}),
                                     table<Fp>(1, 2, {1, 1}));
    auto rep = validate_coalgebra(broken);
    ASSERT_FALSE(rep.ok());
    EXPECT_TRUE(mentions(rep, "counit law"));
}

TEST(ValidateBraided, GroupAlgebraAndSuperline) {
    Fp::set_modulus(101);
    EXPECT_TRUE(validate_braided(z2_hopf<Fp>()).ok());
    EXPECT_TRUE(validate_braided(superline_hopf<Fp>()).ok());
    EXPECT_TRUE(validate_braided(superline_hopf<Rat>()).ok());
    EXPECT_TRUE(validate_braided(monoid_bialgebra<Fp>()).ok());
}

TEST(ValidateBraided, SuperlineWithPlainFlipFails) {
    Fp::set_modulus(101);
    auto good = superline_hopf<Fp>();
    auto bad = make_braided<Fp>(good.alg, good.coalg, flip_matrix<Fp>(2, 2));
    auto rep = validate_braided(bad);
    ASSERT_FALSE(rep.ok());
    ASSERT_EQ(rep.failures.size(), 1u);
    EXPECT_TRUE(mentions(rep, "comult compatible with mult"));
    EXPECT_TRUE(mentions(rep, "(y|y)"));
}

TEST(SolveAntipode, Cases) {
    Fp::set_modulus(101);
    auto s_z2 = solve_antipode(z2_hopf<Fp>());
    ASSERT_TRUE(s_z2.has_value());
    EXPECT_EQ(s_z2->mat, SparseMatrix<Fp>::identity(2));

    auto s_super = solve_antipode(superline_hopf<Fp>());
    ASSERT_TRUE(s_super.has_value());
    EXPECT_EQ(s_super->mat, table<Fp>(2, 2, {1, 0, 0, -1}));

    EXPECT_FALSE(solve_antipode(monoid_bialgebra<Fp>()).has_value());
    EXPECT_FALSE(solve_antipode(monoid_bialgebra<Rat>()).has_value());
}

TEST(ValidateTransposition, FlipPassesScaledEntryFails) {
    Fp::set_modulus(101);
    auto h = z2_hopf<Fp>();
    auto a = kx2_algebra<Fp>();
    auto flip = make_transposition(h, a, flip_matrix<Fp>(2, 2));
    EXPECT_TRUE(validate_transposition(flip, h, a).ok());

    auto scaled = flip_matrix<Fp>(2, 2);
    SparseMatrix<Fp> bad(4, 4);
    for (const auto& e : scaled.entries())
        bad.add(e.row, e.col, (e.col == 3) ? e.val * Fp::from_int(2) : e.val);
    auto t_bad = make_transposition(h, a, bad);
    auto rep = validate_transposition(t_bad, h, a);
    ASSERT_FALSE(rep.ok());
    EXPECT_TRUE(mentions(rep, "s compatible with comult"));
    EXPECT_TRUE(mentions(rep, "(g|x)"));
}

TEST(ValidateWeakAction, TrivialAndSignActions) {
    Fp::set_modulus(101);
    auto h = z2_hopf<Fp>();
    auto a = kx2_algebra<Fp>();
    auto flip = make_transposition(h, a, flip_matrix<Fp>(2, 2));

    auto trivial = z2_sign_action(h, a, 1);
    auto rep_trivial = validate_weak_action(trivial, flip, h, a);
    EXPECT_TRUE(rep_trivial.ok());

    auto sign = z2_sign_action(h, a, -1);
    auto rep_sign = validate_weak_action(sign, flip, h, a);
    EXPECT_TRUE(rep_sign.ok());
    ASSERT_FALSE(rep_sign.notes.empty());
    EXPECT_NE(rep_sign.notes[0].find("holds"), std::string::npos);

    // A non-counital "action" breaks axiom (3).
    auto broken = make_weak_action(h, a,
                                   table<Fp>(2, 4, {0, 0, 1, 0, //
                                                    0, 1, 0, -1}));
    auto rep_broken = validate_weak_action(broken, flip, h, a);
    ASSERT_FALSE(rep_broken.ok());
    EXPECT_TRUE(mentions(rep_broken, "weak action (3)"));
}

TEST(ValidateCocycle, TrivialDataPasses) {
    Fp::set_modulus(101);
    auto h = z2_hopf<Fp>();
    auto a = kx2_algebra<Fp>();
    auto flip = make_transposition(h, a, flip_matrix<Fp>(2, 2));
    auto trivial_rho = z2_sign_action(h, a, 1);
    auto trivial_f = z2_cocycle(h, a, false);
    EXPECT_TRUE(validate_cocycle(trivial_f, trivial_rho, flip, h, a).ok());

    auto sign_rho = z2_sign_action(h, a, -1);
    EXPECT_TRUE(validate_cocycle(trivial_f, sign_rho, flip, h, a).ok());
}

TEST(ValidateCocycle, NontrivialCocycleOracle) {
    Fp::set_modulus(101);
    auto h = z2_hopf<Fp>();
    auto a = kx2_algebra<Fp>();
    auto flip = make_transposition(h, a, flip_matrix<Fp>(2, 2));
    auto f_x = z2_cocycle(h, a, true);

    // With the trivial action, f(g⊗g) = x satisfies every axiom: the crossed
    // product it defines is k[t]/(t^4) with t^2 = x.
    auto trivial_rho = z2_sign_action(h, a, 1);
    EXPECT_TRUE(validate_cocycle(f_x, trivial_rho, flip, h, a).ok());

    // With the sign action the cocycle condition fails at (g,g,g): the left
    // side is -x, the right side is x.
    auto sign_rho = z2_sign_action(h, a, -1);
    auto rep = validate_cocycle(f_x, sign_rho, flip, h, a);
    ASSERT_FALSE(rep.ok());
    ASSERT_EQ(rep.failures.size(), 1u);
    EXPECT_TRUE(mentions(rep, "cocycle condition"));
    EXPECT_TRUE(mentions(rep, "(g|g|g)"));
}

TEST(Iterated, BaseCases) {
    Fp::set_modulus(101);
    auto h = z2_hopf<Fp>();
    auto a = kx2_algebra<Fp>();
    auto flip = make_transposition(h, a, flip_matrix<Fp>(2, 2));

    EXPECT_EQ(build_s_sr(flip, h, a, 1, 1).mat, flip.map.mat);
    EXPECT_EQ(build_c_sr(h, 1, 1).mat, h.braid.mat);
    EXPECT_EQ(build_g(h, 2).mat, h.braid.mat);
    EXPECT_EQ(build_s_sr(flip, h, a, 0, 2).mat, SparseMatrix<Fp>::identity(4));
    EXPECT_EQ(build_s_sr(flip, h, a, 2, 0).mat, SparseMatrix<Fp>::identity(4));
}

TEST(Iterated, SsrIsBlockFlipForPlainFlip) {
    Fp::set_modulus(101);
    auto h = z2_hopf<Fp>();
    auto a = kx2_algebra<Fp>();
    auto flip = make_transposition(h, a, flip_matrix<Fp>(2, 2));
    // When s is the flip of factors, s_{sr} is the block flip
    // H^{⊗s}⊗A^{⊗r} -> A^{⊗r}⊗H^{⊗s}.
    for (std::size_t s = 1; s <= 3; ++s)
        for (std::size_t r = 1; r <= 3; ++r)
            EXPECT_EQ(build_s_sr(flip, h, a, s, r).mat, flip_matrix<Fp>(ipow(2, s), ipow(2, r)))
                << "s=" << s << " r=" << r;
}

TEST(Iterated, GsOnSuperline) {
    Fp::set_modulus(101);
    auto h = superline_hopf<Fp>();
    auto g3 = build_g(h, 3);
    // g_3 reverses the factors; the sign is -1 for each crossed pair with
    // both entries equal to y.
    SparseMatrix<Fp> expect(8, 8);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) {
                long crossings = static_cast<long>(i * j + i * k + j * k);
                expect.add(k * 4 + j * 2 + i, i * 4 + j * 2 + k, sign_pow<Fp>(crossings));
            }
    EXPECT_EQ(g3.mat, expect);

    auto z2 = z2_hopf<Fp>();
    auto g3_z2 = build_g(z2, 3);
    SparseMatrix<Fp> rev(8, 8);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                rev.add(k * 4 + j * 2 + i, i * 4 + j * 2 + k, Fp::one());
    EXPECT_EQ(g3_z2.mat, rev);
}

TEST(Iterated, BraidedCoalgebraPowers) {
    Fp::set_modulus(101);
    for (std::size_t s = 0; s <= 3; ++s) {
        EXPECT_TRUE(validate_coalgebra(coalgebra_power_c(z2_hopf<Fp>(), s)).ok()) << "s=" << s;
        EXPECT_TRUE(validate_coalgebra(coalgebra_power_c(superline_hopf<Fp>(), s)).ok()) << "s=" << s;
    }

    // Comultiplication value on the super-line: Δ(y⊗1) = (y⊗1)⊗(1⊗1) + (1⊗1)⊗(y⊗1).
    auto c2 = coalgebra_power_c(superline_hopf<Fp>(), 2);
    Vec<Fp> y1 = unit_vec<Fp>(4, 2); // y⊗1
    Vec<Fp> img = c2.comult(y1);
    Vec<Fp> expect(16, Fp::zero());
    expect[2 * 4 + 0] = Fp::one();
    expect[0 * 4 + 2] = Fp::one();
    EXPECT_EQ(img, expect);
}

TEST(Iterated, WeakActionPowers) {
    Fp::set_modulus(101);
    auto h = z2_hopf<Fp>();
    auto a = kx2_algebra<Fp>();
    auto flip = make_transposition(h, a, flip_matrix<Fp>(2, 2));
    auto sign = z2_sign_action(h, a, -1);

    auto rho2 = build_rho_r(sign, flip, h, a, 2);
    // g·(x⊗x) = (-x)⊗(-x) = x⊗x, and g·(x⊗1) = (-x)⊗1.
    Vec<Fp> gxx(8, Fp::zero());
    gxx[1 * 4 + 1 * 2 + 1] = Fp::one();
    Vec<Fp> xx(4, Fp::zero());
    xx[3] = Fp::one();
    EXPECT_EQ(rho2(gxx), xx);

    Vec<Fp> gx1(8, Fp::zero());
    gx1[1 * 4 + 1 * 2 + 0] = Fp::one();
    Vec<Fp> out = rho2(gx1);
    Vec<Fp> expect(4, Fp::zero());
    expect[2] = -Fp::one(); // -(x⊗1)
    EXPECT_EQ(out, expect);

    // rho_{21}(g⊗g⊗x) = g·(g·x) = x.
    auto rho21 = build_rho_sr(sign, flip, h, a, 2, 1);
    Vec<Fp> ggx(8, Fp::zero());
    ggx[1 * 4 + 1 * 2 + 1] = Fp::one();
    Vec<Fp> x(2, Fp::zero());
    x[1] = Fp::one();
    EXPECT_EQ(rho21(ggx), x);

    EXPECT_EQ(build_rho_sr(sign, flip, h, a, 1, 2).mat, rho2.mat);
}

TEST(Convolution, UnitsAndInverses) {
    Fp::set_modulus(101);
    auto h = z2_hopf<Fp>();

    auto unit = convolution_unit(h.coalg, h.alg);
    EXPECT_EQ(convolve(h.coalg, h.alg, unit, unit).mat, unit.mat);
    auto unit_inv = convolution_inverse(h.coalg, h.alg, unit);
    ASSERT_TRUE(unit_inv.has_value());
    EXPECT_EQ(unit_inv->mat, unit.mat);

    auto id_inv = convolution_inverse(h.coalg, h.alg, identity_map(h.space()));
    ASSERT_TRUE(id_inv.has_value());
    EXPECT_EQ(id_inv->mat, SparseMatrix<Fp>::identity(2)); // S = id on k[Z/2]

    // mu∘Δ on k[Z/2] sends g to g^2 = 1.
    auto sq = convolve(h.coalg, h.alg, identity_map(h.space()), identity_map(h.space()));
    EXPECT_EQ(sq.mat, table<Fp>(2, 2, {1, 1, 0, 0}));

    auto m = monoid_bialgebra<Fp>();
    EXPECT_FALSE(convolution_inverse(m.coalg, m.alg, identity_map(m.space())).has_value());
}

TEST(Convolution, InverseMatchesAntipodeOnSuperline) {
    Fp::set_modulus(101);
    auto h = superline_hopf<Fp>();
    auto inv = convolution_inverse(h.coalg, h.alg, identity_map(h.space()));
    ASSERT_TRUE(inv.has_value());
    ASSERT_TRUE(h.antipode.has_value());
    EXPECT_EQ(inv->mat, h.antipode->mat);
}
