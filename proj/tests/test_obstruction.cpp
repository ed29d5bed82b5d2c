#include <gtest/gtest.h>

#include "dp4/fixtures.hpp"
#include "dp4/obstruction.hpp"
#include "support.hpp"

using namespace dp4;

namespace {

struct Analysis {
    Pencil p;
    SingularLocus L;
    BrauerGroupOfG B;
};

Analysis analyse(const Pencil& p)
{
    auto L = singular_locus(p);
    auto B = brauer_group(p, L);
    return {p, L, B};
}

const LocalProfile& profile_at(const AdelicReport& R, const Place& v)
{
    for (auto& pr : R.profiles)
        if (pr.place == v) return pr;
    throw std::runtime_error("no profile at " + v.to_string());
}

// rank 5: Clif_0(q) is split iff q has the Hasse-Witt class of <det, 1, -1, 1, -1>
bool solvable_oracle(const Pencil& p, const Rat& t, const Place& v)
{
    auto d = diagonalize(p.gram_at(t), Rat(1)).diag;
    auto witt = [&](const std::vector<Rat>& a) {
        Half c;
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = i + 1; j < a.size(); ++j) c += hilbert(a[i], a[j], v);
        return c;
    };
    Rat det = 1;
    for (auto& x : d) det *= x;
    return witt(d) == witt({det, 1, -1, 1, -1});
}

}  // namespace

TEST(Obstruction, DiagonalEntriesPreserveDeterminantClass)
{
    std::mt19937 g(3);
    for (int it = 0; it < 50; ++it) {
        Pencil p = testkit::random_smooth_pencil(g);
        Rat t = Rat((int)(g() % 41) - 20, 1 + g() % 5);
        t.canonicalize();
        auto M = p.gram_at(t);
        Rat det = determinant(M, Rat(1));
        auto d = diagonal_entries(M);
        Rat prod = 1;
        for (auto& x : d) prod *= x;
        if (det == 0) {
            EXPECT_LT(d.size(), 5u);
        } else {
            ASSERT_EQ(d.size(), 5u);
            EXPECT_TRUE(is_square_rat(prod / det));
        }
    }
}

TEST(Obstruction, FiberSolvabilityMatchesHasseOracle)
{
    std::mt19937 g(11);
    int checked = 0;
    for (int it = 0; it < 30; ++it) {
        Pencil p = testkit::random_smooth_pencil(g);
        auto L = singular_locus(p);
        for (int k = 0; k < 6; ++k) {
            Rat t = Rat((int)(g() % 61) - 30, 1 + g() % 4);
            t.canonicalize();
            if (L.f.eval(t) == 0) continue;
            for (const Place& v : {Place::infinite(), Place::prime(2), Place::prime(3), Place::prime(5)}) {
                EXPECT_EQ(fiber_solvable(p, L, t, v), solvable_oracle(p, t, v));
                ++checked;
            }
        }
    }
    EXPECT_GT(checked, 300);
}

TEST(Obstruction, RealSeparatorsInterleaveRoots)
{
    Poly f = Poly::linear_root(-1) * Poly::linear_root(0) * Poly::linear_root(Rat(1, 3)) * Poly({-2, 0, 1});
    auto s = real_separators(f);
    ASSERT_EQ(s.size(), 6u);
    for (size_t i = 0; i + 1 < s.size(); ++i) {
        EXPECT_LT(s[i], s[i + 1]);
        EXPECT_NE(sgn(f.eval(s[i])), sgn(f.eval(s[i + 1])));
    }
    EXPECT_EQ(real_separators(Poly({1, 0, 1})).size(), 1u);
}

TEST(Obstruction, PadicRootsAreRoots)
{
    // x^2 - 2 splits over Q_7, x^2 - 1/11 has no root in Q_11, x^2 - 1/49 has roots of valuation -1
    auto r7 = padic_roots(Poly({-2, 0, 1}), 7, 10);
    EXPECT_EQ(r7.size(), 2u);
    for (auto& r : r7) EXPECT_GE(vp(r * r - 2, Int(7)), 10);
    EXPECT_TRUE(padic_roots(Poly({Rat(-1, 11), 0, 1}), 11, 10).empty());
    auto r = padic_roots(Poly({Rat(-1, 49), 0, 1}), 7, 10);
    ASSERT_EQ(r.size(), 2u);
    for (auto& x : r) EXPECT_EQ(vp(x, Int(7)), -1);
    auto q = padic_roots(Poly({-17, 0, 1}), 2, 12);
    EXPECT_EQ(q.size(), 2u);
}

TEST(Obstruction, WeakApproximationReport)
{
    auto A = analyse(fixtures::make_pencil(fixtures::weak_approx(3, 7, 2)));
    auto R = adelic_report(A.p, A.L, A.B, 5, 4);
    EXPECT_TRUE(R.zero_reachable);
    EXPECT_TRUE(R.wa_obstructed);
    for (auto& c : R.controls) EXPECT_TRUE(c.singleton() && c.contains(0));
    for (auto& w : R.witnesses) {
        EXPECT_TRUE(w.complete);
        EXPECT_TRUE(w.ok()) << w.sum << " vs " << w.expected_sum;
    }
}

TEST(Obstruction, NonconstantEvaluationProfiles)
{
    auto A = analyse(fixtures::make_pencil(fixtures::nonconstant()));
    ASSERT_GE(A.B.n, 1);
    auto R = adelic_report(A.p, A.L, A.B, 6, 4);
    auto& p5 = profile_at(R, Place::prime(5));
    EXPECT_TRUE(p5.singleton());
    auto& p2 = profile_at(R, Place::prime(2));
    EXPECT_TRUE(p2.contains(0));
    EXPECT_TRUE(p2.contains(1));
}

TEST(Obstruction, SuggestedFieldForWeakApproximation)
{
    auto A = analyse(fixtures::make_pencil(fixtures::weak_approx(3, 7, 2)));
    auto R = adelic_report(A.p, A.L, A.B, 5, 4);
    auto s = suggest_quadratic_field(A.p, A.L, A.B, R);
    ASSERT_TRUE(s.found);
    for (auto& c : s.conditions) EXPECT_TRUE(c.satisfied);
    EXPECT_FALSE(is_local_square(Rat(s.d), Place::prime(7)));
    EXPECT_TRUE(is_local_square(Rat(s.d) * 2, Place::prime(2)));
}

TEST(Obstruction, ParityWitnessOnRandomOddInstances)
{
    std::mt19937 g(29);
    std::vector<int> pool = {-7, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 11, 13};
    int odd = 0, even = 0;
    for (int it = 0; it < 400 && odd < 20; ++it) {
        int a = pool[g() % pool.size()], b = pool[g() % pool.size()], e = pool[g() % pool.size()];
        if (is_square_rat(Rat(e)) || 4 - a * b == 0 || 1 - a * b == 0) continue;
        Pencil p = fixtures::make_pencil(fixtures::weak_approx(a, b, e));
        if (!check_smooth(p).smooth) continue;
        auto A = analyse(p);
        for (auto& T : A.B.candidates) {
            if (T.mask == 0) continue;
            auto w = parity_witness(A.p, A.L, T, 4);
            ASSERT_TRUE(w.complete) << a << " " << b << " " << e;
            EXPECT_EQ(w.sum, w.expected_sum) << a << " " << b << " " << e;
            (w.expected_sum.nonzero() ? odd : even)++;
        }
    }
    EXPECT_GE(odd, 20);
    EXPECT_GT(even, 0);
}

TEST(Obstruction, NearRootCriterionMatchesFiberSolvability)
{
    // two routes to solvability of G_t for t close to a rational point s of S
    std::mt19937 g(5);
    int checked = 0;
    for (int it = 0; it < 200 && checked < 400; ++it) {
        Pencil p = it % 2 ? testkit::random_diagonal_pencil(g, 5) : testkit::random_block_pencil(g);
        auto L = singular_locus(p);
        for (int s = 0; s < (int)L.points.size(); ++s) {
            const auto& sp = L.points[s];
            if (!sp.rational()) continue;
            std::vector<Rat> diag;
            for (auto& x : sp.complement_diagonal(p)) diag.push_back(x.rational_value());
            Rat eps = sp.eps.rational_value();
            for (int q : {2, 3, 5, 7}) {
                Place v = Place::prime(q);
                if (!isotropy(diag, v) || is_local_square(eps, v)) continue;
                Half target = near_root_target(p, L, s, v);
                for (int u : {1, 2, 3, 5, -1, -3}) {
                    if (u % q == 0) continue;
                    Rat t = sp.rational_root() + rpow(Rat(q), 14) * u;
                    bool route1 = fiber_solvable(p, L, t, v);
                    bool route2 = hilbert(eps, t - sp.rational_root(), v) == target;
                    EXPECT_EQ(route1, route2);
                    ++checked;
                }
            }
        }
    }
    EXPECT_GT(checked, 100);
}

TEST(Obstruction, RationalPointWitnessSumsToRSet)
{
    std::mt19937 g(31);
    int seen = 0;
    for (int it = 0; it < 80 && seen < 15; ++it) {
        Pencil p = testkit::random_diagonal_pencil(g, 6);
        auto A = analyse(p);
        for (int s = 0; s < (int)A.L.points.size(); ++s) {
            if (!A.L.points[s].rational() || is_square_rat(A.L.points[s].eps.rational_value())) continue;
            auto w = rational_point_witness(A.p, A.L, A.B, s, 6);
            if (w.sums.empty()) continue;
            ASSERT_TRUE(w.complete);
            for (auto& [c, sum] : w.sums) EXPECT_EQ(sum, w.expected);
            ++seen;
        }
    }
    EXPECT_GT(seen, 5);
}

TEST(Obstruction, EvaluationIsLocallyConstant)
{
    // moving t by p^k with k large does not change beta_T, nor solvability
    std::mt19937 g(8);
    int checked = 0;
    for (int it = 0; it < 200 && checked < 60; ++it) {
        Pencil p = testkit::random_block_pencil(g);
        auto A = analyse(p);
        if (A.B.generators.empty()) continue;
        for (int q : {2, 3, 5}) {
            Place v = Place::prime(q);
            for (int k = 0; k < 4; ++k) {
                Rat t = Rat((int)(g() % 21) - 10, 1 + g() % 3);
                t.canonicalize();
                if (A.L.f.eval(t) == 0) continue;
                Rat t2 = t + rpow(Rat(q), 20) * (1 + g() % 5);
                EXPECT_EQ(fiber_solvable(A.p, A.L, t, v), fiber_solvable(A.p, A.L, t2, v));
                for (auto& T : A.B.generators) EXPECT_EQ(eval_at_t(T, t, v), eval_at_t(T, t2, v));
                ++checked;
            }
        }
    }
    EXPECT_GE(checked, 40);
}

TEST(Obstruction, RealSignatureOracle)
{
    std::mt19937 g(4);
    int checked = 0;
    for (int it = 0; it < 40; ++it) {
        Pencil p = testkit::random_smooth_pencil(g);
        auto L = singular_locus(p);
        for (auto& t : real_separators(L.f)) {
            auto d = diagonal_entries(p.gram_at(t));
            int pos = 0;
            for (auto& x : d) pos += x > 0;
            int sig = pos - (5 - pos);
            // Clif_0 of signature (r, s) is a matrix algebra iff r - s = +-1 mod 8
            bool split = ((sig % 8) + 8) % 8 == 1 || ((sig % 8) + 8) % 8 == 7;
            EXPECT_EQ(fiber_solvable(p, L, t, Place::infinite()), split);
            ++checked;
        }
    }
    EXPECT_GT(checked, 40);
}

TEST(Obstruction, ControlsAreZeroAndThreadsAgree)
{
    auto A = analyse(fixtures::make_pencil(fixtures::nonconstant()));
    auto R1 = adelic_report(A.p, A.L, A.B, 4, 1);
    auto R4 = adelic_report(A.p, A.L, A.B, 4, 4);
    ASSERT_EQ(R1.profiles.size(), R4.profiles.size());
    for (size_t i = 0; i < R1.profiles.size(); ++i) EXPECT_EQ(R1.profiles[i].achievable, R4.profiles[i].achievable);
    EXPECT_EQ(R1.sums, R4.sums);
    for (auto& c : R1.controls) EXPECT_TRUE(c.singleton() && c.contains(0));
}

TEST(Obstruction, ProfileSaturates)
{
    auto A = analyse(fixtures::make_pencil(fixtures::weak_approx(3, 7, 2)));
    for (int q : {2, 3, 5, 7}) {
        auto pr = local_profile(A.p, A.L, A.B.generators, Place::prime(q), 6);
        EXPECT_TRUE(pr.saturated);
        EXPECT_LE(pr.saturation_depth, 4);
        auto shallow = local_profile(A.p, A.L, A.B.generators, Place::prime(q), pr.saturation_depth + 1);
        for (auto& [vec, t] : pr.achievable) EXPECT_TRUE(shallow.contains(vec));
    }
}

TEST(Obstruction, ConstancyAtQuadraticRPrimePlaces)
{
    auto A = analyse(fixtures::make_pencil(fixtures::nonconstant()));
    auto C = rprime_constancy(A.p, A.L, A.B, 6);
    bool saw5 = false;
    for (auto& c : C)
        if (c.place == Place::prime(5)) {
            saw5 = true;
            EXPECT_TRUE(c.field_at_v);
            EXPECT_TRUE(c.constant);
        }
    EXPECT_TRUE(saw5);
}

TEST(Obstruction, LocalSolubilityOfTheWeakApproximationSurface)
{
    auto A = analyse(fixtures::make_pencil(fixtures::weak_approx(3, 7, 2)));
    EXPECT_EQ(local_solubility(A.p, A.L, Place::prime(3)), LocalSolubility::insoluble);
    EXPECT_EQ(local_solubility(A.p, A.L, Place::prime(7)), LocalSolubility::insoluble);
    EXPECT_EQ(local_solubility(A.p, A.L, Place::prime(5)), LocalSolubility::soluble);
    EXPECT_EQ(local_solubility(A.p, A.L, Place::infinite()), LocalSolubility::soluble);
}

TEST(Obstruction, EvaluationRejectsPointsOfT)
{
    auto A = analyse(fixtures::make_pencil(fixtures::weak_approx(3, 7, 2)));
    const auto& T = A.B.generators.at(0);
    Rat s = A.L.points[T.points[0]].rational_root();
    EXPECT_THROW(eval_at_t(T, s, Place::prime(5)), DomainError);
    EXPECT_EQ(eval_at_t(T, std::nullopt, Place::prime(5)), Half());
}
