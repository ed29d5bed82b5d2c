#include <gtest/gtest.h>

#include "dp4/brauer.hpp"
#include "dp4/fixtures.hpp"
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

// closed form for the family Q0 = x0x1 - x2^2 + e x3^2, Q1 = a x0^2 + b x1^2 - ab x2^2 - e x4^2:
// R_T = {v : e in Q_v^2 and (a, b)_v != 0}
std::vector<Place> family_oracle(const Rat& a, const Rat& b, const Rat& e)
{
    std::set<Int> primes = {Int(2)};
    for (const Rat& x : {a, b, e})
        for (auto& q : prime_divisors(x)) primes.insert(q);
    std::vector<Place> cand = {Place::infinite()};
    for (auto& q : primes) cand.push_back(Place::prime(q));
    std::vector<Place> out;
    for (auto& v : cand)
        if (is_local_square(e, v) && hilbert(a, b, v).nonzero()) out.push_back(v);
    return out;
}

const BrauerGenerator* find_pair(const BrauerGroupOfG& B, const SingularLocus& L, const Rat& s, const Rat& t)
{
    for (auto& g : B.candidates)
        if (g.reducible()) {
            Rat a = L.points[g.points[0]].rational_root(), b = L.points[g.points[1]].rational_root();
            if ((a == s && b == t) || (a == t && b == s)) return &g;
        }
    return nullptr;
}

}  // namespace

TEST(Brauer, WeakApproximationExample)
{
    auto A = analyse(fixtures::make_pencil(fixtures::weak_approx(3, 7, 2)));
    ASSERT_GE(A.B.n, 1);
    const BrauerGenerator* T = find_pair(A.B, A.L, 0, 1);
    ASSERT_NE(T, nullptr);
    EXPECT_EQ(T->label(A.L), "{0, 1}");
    EXPECT_EQ(T->eps_rational, 2);
    EXPECT_NE(T->mask, 0u);
    bool is_generator = false;
    for (auto& g : A.B.generators)
        if (g.points == T->points) is_generator = true;
    EXPECT_TRUE(is_generator);

    // C_T ramified exactly at 2 and 7, like (3, 7)
    std::vector<Place> ram;
    for (auto& v : candidate_places(*T))
        if (clifford_invariant(*T, v).nonzero()) ram.push_back(v);
    EXPECT_EQ(ram, (std::vector<Place>{Place::prime(2), Place::prime(7)}));

    auto R = r_set(*T);
    EXPECT_EQ(R.places, std::vector<Place>{Place::prime(7)});
    EXPECT_TRUE(R.odd());
    auto Rp = r_prime_set(*T);
    EXPECT_TRUE(Rp.odd());

    auto V = parity_criterion(A.B);
    EXPECT_TRUE(V.condition2);
    EXPECT_TRUE(V.wa_obstructed);
    EXPECT_FALSE(V.open_case);
}

TEST(Brauer, WeakApproximationFamilyMatchesClosedForm)
{
    std::mt19937 g(41);
    std::vector<int> pool = {-7, -5, -3, -2, -1, 2, 3, 5, 6, 7, 10, 11, 13, 15};
    int checked = 0;
    for (int it = 0; it < 60 && checked < 25; ++it) {
        int a = pool[g() % pool.size()], b = pool[g() % pool.size()], e = pool[g() % pool.size()];
        if (is_square_rat(Rat(e)) || 4 - a * b == 0 || 1 - a * b == 0) continue;
        Pencil p = fixtures::make_pencil(fixtures::weak_approx(a, b, e));
        if (!check_smooth(p).smooth) continue;
        auto A = analyse(p);
        const BrauerGenerator* T = find_pair(A.B, A.L, 0, 1);
        ASSERT_NE(T, nullptr);
        EXPECT_EQ(r_set(*T).places, family_oracle(a, b, e)) << a << " " << b << " " << e;
        ++checked;
    }
    EXPECT_GE(checked, 20);
}

TEST(Brauer, BsdSurface)
{
    auto A = analyse(fixtures::make_pencil(fixtures::bsd()));
    EXPECT_EQ(A.B.n, 1);
    ASSERT_EQ(A.B.generators.size(), 1u);
    const auto& T = A.B.generators[0];
    EXPECT_TRUE(T.reducible());
    EXPECT_EQ(T.label(A.L), "{0, 1}");
    EXPECT_EQ(T.eps_rational, 5);
    // kernel {empty, {0,1}, {-1, quadratic}, S}
    EXPECT_EQ(A.B.kernel.size(), 4u);
    auto V = parity_criterion(A.B);
    EXPECT_TRUE(V.condition2);
    EXPECT_TRUE(br_constant_kernel(A.p, A.L).empty());
}

TEST(Brauer, IrreducibleQuinticHasTrivialGroup)
{
    std::mt19937 g(13);
    int seen = 0;
    for (int it = 0; it < 40 && seen < 5; ++it) {
        Pencil p = testkit::random_smooth_pencil(g);
        auto L = singular_locus(p);
        if (L.points.size() != 1) continue;
        auto B = brauer_group(p, L);
        EXPECT_EQ(B.n, 0);
        EXPECT_TRUE(parity_criterion(B).trivial);
        ++seen;
    }
    EXPECT_GE(seen, 3);
}

TEST(Brauer, HyperbolicComponentsGiveEmptyRT)
{
    // (a, b) = (1, b) is split, so C_T = 0 and R_T is empty
    auto A = analyse(fixtures::make_pencil(fixtures::weak_approx(1, 3, 2)));
    const BrauerGenerator* T = find_pair(A.B, A.L, 0, 1);
    ASSERT_NE(T, nullptr);
    for (auto& v : candidate_places(*T)) EXPECT_FALSE(clifford_invariant(*T, v).nonzero());
    EXPECT_TRUE(r_set(*T).places.empty());
}

TEST(Brauer, ScalingThePencilLeavesCTUnchanged)
{
    std::mt19937 g(7);
    for (int it = 0; it < 12; ++it) {
        Pencil p = it % 2 ? testkit::random_diagonal_pencil(g) : testkit::random_block_pencil(g);
        Rat c = std::vector<int>{3, -5, 6, 7}[it % 4];
        Pencil q{c * p.Q0, c * p.Qinf};
        auto A = analyse(p), C = analyse(q);
        ASSERT_EQ(A.B.candidates.size(), C.B.candidates.size());
        for (size_t i = 0; i < A.B.candidates.size(); ++i) {
            auto &g1 = A.B.candidates[i], &g2 = C.B.candidates[i];
            std::set<Place> places;
            for (auto& v : candidate_places(g1)) places.insert(v);
            for (auto& v : candidate_places(g2)) places.insert(v);
            for (auto& v : places) EXPECT_EQ(clifford_invariant(g1, v), clifford_invariant(g2, v)) << v.to_string();
        }
    }
}

TEST(Brauer, RandomSweepStructureAndDualPaths)
{
    std::mt19937 g(1234);
    int n2 = 0, irreducible = 0, odd = 0, total = 0;
    for (int it = 0; it < 500; ++it) {
        Pencil p;
        switch (it % 3) {
        case 0: p = testkit::random_diagonal_pencil(g, 3); break;
        case 1: p = testkit::random_block_pencil(g); break;
        default: p = testkit::random_smooth_pencil(g); break;
        }
        auto A = analyse(p);  // throws on n > 2 or generators not spanning
        ++total;
        EXPECT_LE(A.B.n, 2);
        if (A.B.n == 2) {
            ++n2;
            for (auto& gen : A.B.generators) EXPECT_TRUE(gen.reducible());
        }
        // every candidate: definition vs component count (inside r_set), R'_T parity, base change parity
        for (auto& T : A.B.candidates) {
            auto R = r_set(T);
            if (R.odd()) ++odd;
            if (T.mask != 0) EXPECT_EQ(r_prime_set(T).odd(), R.odd());
            if (!T.reducible()) {
                ++irreducible;
                EXPECT_EQ(base_change_count(T) % 2, (int)R.places.size() % 2);
            }
        }
        parity_criterion(A.B);
    }
    EXPECT_EQ(total, 500);
    EXPECT_GT(irreducible, 0);
    EXPECT_GT(odd, 0);
}

TEST(Brauer, RankTwoExample)
{
    Pencil p{QuadraticForm5::diagonal({3, -1, 2, 2, -2}), QuadraticForm5::diagonal({-1, 1, 1, -1, -2})};
    auto A = analyse(p);
    EXPECT_EQ(A.B.n, 2);
    EXPECT_EQ(A.B.kernel.size(), 8u);
    ASSERT_EQ(A.B.generators.size(), 2u);
    for (auto& g : A.B.generators) EXPECT_TRUE(g.reducible());
    auto V = parity_criterion(A.B);
    EXPECT_TRUE(V.condition2);
    EXPECT_EQ(V.classes.size(), 3u);
}

TEST(Brauer, RationalEpsRepresentsEpsT)
{
    std::mt19937 g(99);
    int seen = 0;
    for (int it = 0; it < 300 && seen < 10; ++it) {
        Pencil p = testkit::random_block_pencil(g);
        auto A = analyse(p);
        for (auto& T : A.B.candidates) {
            if (T.reducible()) continue;
            const SingularPoint& s = A.L.points[T.points[0]];
            EXPECT_TRUE(is_square(s.eps * T.eps_rational));
            ++seen;
        }
    }
    EXPECT_GT(seen, 0);
}
