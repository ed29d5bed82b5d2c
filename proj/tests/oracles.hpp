#pragma once

// brute-force oracles shared by the unit tests and the acceptance run

#include <random>
#include <vector>

#include "dp4/reduction.hpp"

namespace dp4::oracle {

// isotropy over Q_p of a diagonal integer form by Hensel tree search
struct ZpSearch {
    std::vector<Int> a;
    Int p;
    int max_depth;
    bool found = false;
    bool inconclusive = false;  // some branch reached max_depth uncertified

    Int value(const std::vector<Int>& x) const
    {
        Int s = 0;
        for (size_t i = 0; i < a.size(); ++i) s += a[i] * x[i] * x[i];
        return s;
    }
    int v(const Int& n) const { return n == 0 ? 1 << 20 : vp(n, p); }

    bool certified(const std::vector<Int>& x) const
    {
        int vq = v(value(x));
        for (size_t i = 0; i < a.size(); ++i) {
            Int dq = 2 * a[i] * x[i];
            if (dq != 0 && vq >= 2 * v(dq) + 1) return true;
        }
        return false;
    }

    long cube() const
    {
        long total = 1;
        for (size_t i = 0; i < a.size(); ++i) total *= p.get_si();
        return total;
    }

    void dfs(std::vector<Int>& x, int k, const Int& pk)
    {
        if (found) return;
        if (certified(x)) {
            found = true;
            return;
        }
        if (k >= max_depth) {
            inconclusive = true;
            return;
        }
        size_t n = x.size();
        Int pk1 = pk * p;
        std::vector<Int> y(n);
        long total = cube();
        for (long m = 0; m < total && !found; ++m) {
            long t = m;
            for (size_t i = 0; i < n; ++i) {
                y[i] = x[i] + pk * Int(t % p.get_si());
                t /= p.get_si();
            }
            if (mod(value(y), pk1) == 0) dfs(y, k + 1, pk1);
        }
    }

    bool run()
    {
        size_t n = a.size();
        long total = cube();
        std::vector<Int> x(n);
        for (long m = 1; m < total && !found; ++m) {
            long t = m;
            for (size_t i = 0; i < n; ++i) {
                x[i] = t % p.get_si();
                t /= p.get_si();
            }
            if (mod(value(x), p) == 0) dfs(x, 1, p);
        }
        return found;
    }
};

inline FFQuadForm random_ff_form(std::mt19937& g, const FiniteField& F, int n)
{
    FFQuadForm q = FFQuadForm::zero(n);
    std::uniform_int_distribution<int> d(0, F.order() - 1);
    std::bernoulli_distribution keep(0.5);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            if (keep(g)) q.c[i][j] = d(g);
    return q;
}

// q(Ax) coefficients, from values and the polar form
inline FFQuadForm compose(const FiniteField& F, const FFQuadForm& q, const std::vector<std::vector<int>>& A)
{
    int n = q.n;
    std::vector<std::vector<int>> cols(n, std::vector<int>(n));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) cols[i][k] = A[k][i];
    FFQuadForm r = FFQuadForm::zero(n);
    for (int i = 0; i < n; ++i) {
        r.c[i][i] = q.eval(F, cols[i]);
        for (int j = i + 1; j < n; ++j) {
            std::vector<int> s(n);
            for (int k = 0; k < n; ++k) s[k] = F.add(cols[i][k], cols[j][k]);
            r.c[i][j] = F.sub(F.sub(q.eval(F, s), q.eval(F, cols[i])), q.eval(F, cols[j]));
        }
    }
    return r;
}

// fewest variables q can be written in, over all invertible changes of coordinates
inline int brute_rank(const FiniteField& F, const FFQuadForm& q)
{
    int n = q.n, Q = F.order(), best = n;
    long total = 1;
    for (int i = 0; i < n * n; ++i) total *= Q;
    for (long code = 0; code < total; ++code) {
        std::vector<std::vector<int>> A(n, std::vector<int>(n));
        long c = code;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                A[i][j] = (int)(c % Q);
                c /= Q;
            }
        if (detail::ff_rank_kernel(F, A, nullptr) < n) continue;
        FFQuadForm r = compose(F, q, A);
        int used = 0;
        for (int i = 0; i < n; ++i) {
            bool u = false;
            for (int j = 0; j < n; ++j)
                if (r.c[std::min(i, j)][std::max(i, j)]) u = true;
            used += u;
        }
        best = std::min(best, used);
    }
    return best;
}

}  // namespace dp4::oracle
