#pragma once

#include <random>

#include "dp4/pencil.hpp"

namespace dp4::testkit {

inline QuadraticForm5 random_form(std::mt19937& g, int range, double density = 0.6)
{
    std::uniform_int_distribution<int> d(-range, range);
    std::bernoulli_distribution keep(density);
    QuadraticForm5 q;
    for (auto& c : q.c)
        if (keep(g)) c = d(g);
    return q;
}

// random pencil passing the smoothness check, normalized
inline Pencil random_smooth_pencil(std::mt19937& g, int range = 3, double density = 0.6)
{
    for (;;) {
        QuadraticForm5 a = random_form(g, range, density), b = random_form(g, range, density);
        if (a.is_zero() || b.is_zero() || proportional(a, b)) continue;
        if (det_pencil(a.gram(), (b - a).gram()).is_zero()) continue;
        Pencil p = normalize(a, b);
        if (check_smooth(p).smooth) return p;
    }
}

// random pencil of the diagonal shape sum a_i x_i^2, sum b_i x_i^2 with distinct ratios
inline Pencil random_diagonal_pencil(std::mt19937& g, int range = 9)
{
    std::uniform_int_distribution<int> d(-range, range);
    for (;;) {
        std::vector<Rat> a(5), b(5);
        for (int i = 0; i < 5; ++i) {
            a[i] = d(g);
            b[i] = d(g);
        }
        bool ok = true;
        for (int i = 0; i < 5 && ok; ++i) {
            if (b[i] == 0 || a[i] == 0) ok = false;
            for (int j = 0; j < i && ok; ++j)
                if (a[i] * b[j] == a[j] * b[i]) ok = false;
        }
        if (!ok) continue;
        return Pencil{QuadraticForm5::diagonal(a), QuadraticForm5::diagonal(b)};
    }
}

// 2x2 block plus diagonal: f has a quadratic factor from the block, usually irreducible
inline Pencil random_block_pencil(std::mt19937& g, int range = 6)
{
    std::uniform_int_distribution<int> d(-range, range);
    for (;;) {
        QuadraticForm5 q0, qi;
        for (int i = 0; i < 2; ++i)
            for (int j = i; j < 2; ++j) {
                q0.coeff(i, j) = d(g);
                qi.coeff(i, j) = d(g);
            }
        for (int i = 2; i < 5; ++i) {
            q0.coeff(i, i) = d(g);
            qi.coeff(i, i) = d(g);
        }
        Pencil p{q0, qi};
        if (!p.normalized() || p.det_poly().is_zero()) continue;
        if (check_smooth(p).smooth) return p;
    }
}

}  // namespace dp4::testkit
