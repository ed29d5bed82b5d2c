#include <gtest/gtest.h>

#include "dp4/fixtures.hpp"
#include "dp4/reduction.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace dp4;

using oracle::brute_rank;
using oracle::random_ff_form;

TEST(Reduction, MultiplicityOfReducibleQuadricModel)
{
    // first form x0 x1 + p (x2^2 + x3^2): weighting x0 makes the whole row divisible by p
    for (int p : {3, 5, 7}) {
        QuadraticForm5 a = fixtures::form({{0, 1, 1}, {2, 2, p}, {3, 3, p}});
        QuadraticForm5 b = fixtures::form({{2, 3, 1}, {4, 4, 1}, {0, 4, 1}, {1, 1, 2}});
        auto m = integral_model(a, b, p);
        EXPECT_EQ(mult_w(m, {0, 0, 0, 0, 0}), 0);
        EXPECT_GE(mult_w(m, {1, 0, 0, 0, 0}), 1);
    }
}

TEST(Reduction, ZeroWeightIsMinorValuation)
{
    std::mt19937 g(5);
    for (int it = 0; it < 30; ++it) {
        QuadraticForm5 a = testkit::random_form(g, 30), b = testkit::random_form(g, 30);
        if (a.is_zero() || b.is_zero() || proportional(a, b)) continue;
        auto m = integral_model(a, b, 3);
        int best = 1000;
        for (int k = 0; k < 15; ++k)
            for (int l = 0; l < 15; ++l) {
                Rat d = m.F0.c[k] * m.F1.c[l] - m.F0.c[l] * m.F1.c[k];
                if (d != 0) best = std::min(best, vp(d, Int(3)));
            }
        EXPECT_EQ(mult_w(m, {0, 0, 0, 0, 0}), best);
    }
}

TEST(Reduction, ConeOverFourPlanesShape)
{
    // q + p^m x4 l and q~ + p^n x4 l~ with m = n = 1
    const int p = 5;
    std::mt19937 g(3);
    int equal = 0;
    for (int it = 0; it < 20; ++it) {
        std::uniform_int_distribution<int> d(-9, 9);
        QuadraticForm5 a, b;
        for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j) {
                a.coeff(i, j) = d(g);
                b.coeff(i, j) = d(g);
            }
        int vl4 = it % 2, vt4 = (it / 2) % 2;
        for (int i = 0; i < 4; ++i) {
            a.coeff(i, 4) = p * d(g);
            b.coeff(i, 4) = p * d(g);
        }
        a.coeff(4, 4) = Rat(p) * (vl4 ? p : 1) * (1 + 2 * (it % 3));
        b.coeff(4, 4) = Rat(p) * (vt4 ? p : 1) * (2 + (it % 2));
        if (a.is_zero() || b.is_zero() || proportional(a, b)) continue;
        IntegralModel m{p, a, b};  // not rescaled: the shape is the point
        int bound = std::min({4, 2 + 1 + vl4, 2 + 1 + vt4});
        int got = mult_w(m, {1, 1, 1, 1, 0});
        EXPECT_GE(got, bound);
        if (got == bound) ++equal;
    }
    EXPECT_GT(equal, 10);
}

TEST(Reduction, MultiplicityIsPermutationInvariant)
{
    std::mt19937 g(17);
    for (int it = 0; it < 40; ++it) {
        QuadraticForm5 a = testkit::random_form(g, 50), b = testkit::random_form(g, 50);
        if (a.is_zero() || b.is_zero() || proportional(a, b)) continue;
        auto m = integral_model(a, b, 2 + it % 2);
        std::array<int, 5> perm = {0, 1, 2, 3, 4};
        std::shuffle(perm.begin(), perm.end(), g);
        WeightVector w;
        for (auto& x : w) x = g() % 3;
        WeightVector w2;
        for (int i = 0; i < 5; ++i) w2[i] = w[perm[i]];
        EXPECT_EQ(mult_w(permute(m, perm), w2), mult_w(m, w));
    }
}

TEST(Reduction, RankSmallCases)
{
    for (auto [p, r] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
        FiniteField F(p, r);
        FFQuadForm h = FFQuadForm::zero(2);
        h.c[0][1] = 1;
        EXPECT_EQ(rank_ff(F, h), 2);
        FFQuadForm s = FFQuadForm::zero(2);
        s.c[0][0] = s.c[1][1] = 1;
        EXPECT_EQ(rank_ff(F, s), p == 2 ? 1 : 2);
        FFQuadForm one = FFQuadForm::zero(3);
        one.c[1][1] = 1;
        EXPECT_EQ(rank_ff(F, one), 1);
    }
}

TEST(Reduction, RankMatchesFewestVariables)
{
    std::mt19937 g(8);
    for (auto [p, r, n] : std::vector<std::tuple<int, int, int>>{{2, 1, 3}, {2, 1, 4}, {3, 1, 3}, {2, 2, 2}, {5, 1, 2}}) {
        FiniteField F(p, r);
        for (int it = 0; it < 12; ++it) {
            FFQuadForm q = random_ff_form(g, F, n);
            EXPECT_EQ(rank_ff(F, q), brute_rank(F, q)) << "p=" << p << " r=" << r;
        }
    }
}

TEST(Reduction, RankAdditivity)
{
    std::mt19937 g(2024);
    int odd_pairs_char2 = 0;
    for (int it = 0; it < 200; ++it) {
        auto [p, r] = std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}[it % 4];
        FiniteField F(p, r);
        FFQuadForm a = random_ff_form(g, F, 1 + g() % 4), b = random_ff_form(g, F, 1 + g() % 4);
        int ra = rank_ff(F, a), rb = rank_ff(F, b), rs = rank_ff(F, orthogonal_sum(a, b));
        bool both_odd = ra % 2 == 1 && rb % 2 == 1;
        if (p == 2 && both_odd) {
            ++odd_pairs_char2;
            EXPECT_EQ(rs, ra + rb - 1);
        } else {
            EXPECT_EQ(rs, ra + rb);
        }
    }
    EXPECT_GT(odd_pairs_char2, 5);
}

TEST(Reduction, BsdModelAtElevenIsSplit)
{
    auto in = fixtures::bsd();
    auto c = split_fiber_certificate(integral_model(in.Q0, in.Q1, 11));
    EXPECT_EQ(c.verdict, SplitVerdict::split_certified) << c.reason;
    EXPECT_TRUE(c.det_squarefree);
}

TEST(Reduction, RankTwoMemberGivesNoConclusion)
{
    QuadraticForm5 a = fixtures::form({{0, 1, 1}, {2, 2, 7}, {3, 4, 7}});
    QuadraticForm5 b = fixtures::form({{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}, {4, 4, 3}, {2, 4, 1}});
    auto c = split_fiber_certificate(integral_model(a, b, 7));
    EXPECT_EQ(c.verdict, SplitVerdict::nonsplit_possible);
    EXPECT_TRUE(c.low_rank_member);
}

TEST(Reduction, ProportionalReductionIsDegenerate)
{
    QuadraticForm5 a = QuadraticForm5::diagonal({1, 2, 3, 4, 6});
    QuadraticForm5 b = a + Rat(5) * fixtures::form({{0, 1, 1}, {2, 3, 1}});
    auto c = split_fiber_certificate(integral_model(a, b, 5));
    EXPECT_EQ(c.verdict, SplitVerdict::degenerate);
    EXPECT_FALSE(c.forms_independent);
}

TEST(Reduction, SplitCertifiedModelsHaveLocalPoints)
{
    std::mt19937 g(77);
    int certified = 0;
    for (int it = 0; it < 40; ++it) {
        Pencil pc = testkit::random_smooth_pencil(g);
        int p = std::vector<int>{3, 5, 7, 11}[it % 4];
        auto m = integral_model(pc, p);
        auto c = split_fiber_certificate(m);
        if (c.verdict != SplitVerdict::split_certified) continue;
        ++certified;
        auto pt = find_local_point(m, 1);
        ASSERT_TRUE(pt.has_value()) << "p=" << p;
        EXPECT_TRUE(verify_local_point(m, *pt));
    }
    EXPECT_GT(certified, 10);
}

TEST(Reduction, NoLocalPointWhereAMemberIsAnisotropic)
{
    // the member at 1 has an anisotropic rank-4 part at 7
    auto in = fixtures::weak_approx(3, 7, 2);
    auto m = integral_model(in.Q0, in.Q1, 7);
    EXPECT_FALSE(find_local_point(m, 3).has_value());
    // at 3 the second form forces x1, x4, x2, x3 into 3Z_3 and then has valuation 1
    EXPECT_FALSE(find_local_point(integral_model(in.Q0, in.Q1, 3), 4).has_value());
    auto m5 = integral_model(in.Q0, in.Q1, 5);
    auto pt = find_local_point(m5, 3);
    ASSERT_TRUE(pt.has_value());
    EXPECT_TRUE(verify_local_point(m5, *pt));
}
