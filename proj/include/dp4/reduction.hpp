#pragma once

#include <climits>
#include <optional>

#include "dp4/pencil.hpp"

namespace dp4 {

using detail::i64;

// ---------------------------------------------------------------------------
// integral models and Tian multiplicities
// ---------------------------------------------------------------------------

// primitive integral multiple of q: coprime integer coefficients
inline QuadraticForm5 primitive_integral(const QuadraticForm5& q)
{
    Int L = 1, G = 0;
    for (auto& c : q.c) L = lcm(L, c.get_den());
    for (auto& c : q.c) G = gcd(G, Int(c.get_num() * (L / c.get_den())));
    if (G == 0) throw DomainError("zero quadratic form");
    return make_rat(L, G) * q;
}

struct IntegralModel {
    Int p;
    QuadraticForm5 F0, F1;  // integer coefficients, each primitive
};

inline IntegralModel integral_model(const QuadraticForm5& a, const QuadraticForm5& b, const Int& p)
{
    if (!is_prime(p)) throw DomainError("not a prime: " + p.get_str());
    return {p, primitive_integral(a), primitive_integral(b)};
}

inline IntegralModel integral_model(const Pencil& pc, const Int& p) { return integral_model(pc.Q0, pc.Qinf, p); }

using WeightVector = std::array<int, 5>;

// min v_p of the 2x2 minors of the coefficient matrix after x_i -> p^{w_i} x_i
inline int mult_w(const IntegralModel& m, const WeightVector& w)
{
    for (int x : w)
        if (x < 0 || x > 64) throw DomainError("weights must lie in [0, 64]");
    std::array<Rat, 15> a, b;
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j) {
            int k = QuadraticForm5::index(i, j);
            Rat s = Rat(ipow(m.p, w[i] + w[j]));
            a[k] = m.F0.c[k] * s;
            b[k] = m.F1.c[k] * s;
        }
    int best = INT_MAX;
    for (int k = 0; k < 15; ++k)
        for (int l = k + 1; l < 15; ++l) {
            Rat minor = a[k] * b[l] - a[l] * b[k];
            if (minor != 0) best = std::min(best, vp(minor, m.p));
        }
    if (best == INT_MAX) throw DomainError("the two forms are proportional");
    return best;
}

inline IntegralModel permute(const IntegralModel& m, const std::array<int, 5>& perm)
{
    // x_i -> x_{perm[i]}
    Matrix<Rat> U(5, std::vector<Rat>(5, Rat(0)));
    for (int i = 0; i < 5; ++i) U[perm[i]][i] = 1;
    return {m.p, m.F0.substitute(U), m.F1.substitute(U)};
}

// ---------------------------------------------------------------------------
// finite fields F_{p^r}, elements encoded as base-p digit vectors
// ---------------------------------------------------------------------------

class FiniteField {
public:
    FiniteField(i64 p, int r = 1) : p_(p), r_(r)
    {
        if (!is_prime(Int((long)p)) || r < 1) throw DomainError("bad finite field parameters");
        q_ = 1;
        for (int i = 0; i < r; ++i) q_ *= p;
        if (q_ > 1 << 12) throw DomainError("finite field too large for table arithmetic");
        modulus_ = find_modulus();
        add_.assign(q_ * q_, 0);
        mul_.assign(q_ * q_, 0);
        for (int a = 0; a < q_; ++a)
            for (int b = 0; b < q_; ++b) {
                add_[a * q_ + b] = encode(detail::fp_add(decode(a), decode(b), p_));
                mul_[a * q_ + b] = encode(reduce(detail::fp_mul(decode(a), decode(b), p_)));
            }
        inv_.assign(q_, 0);
        for (int a = 1; a < q_; ++a)
            for (int b = 1; b < q_; ++b)
                if (mul(a, b) == 1) inv_[a] = b;
    }
    i64 characteristic() const { return p_; }
    int order() const { return (int)q_; }
    int add(int a, int b) const { return add_[a * q_ + b]; }
    int mul(int a, int b) const { return mul_[a * q_ + b]; }
    int neg(int a) const
    {
        for (int b = 0; b < q_; ++b)
            if (add(a, b) == 0) return b;
        return 0;
    }
    int sub(int a, int b) const { return add(a, neg(b)); }
    int inv(int a) const
    {
        if (a == 0) throw DomainError("inverse of zero in a finite field");
        return inv_[a];
    }
    int from_int(i64 x) const { return (int)detail::pmod(x, p_); }

private:
    i64 p_;
    int r_;
    int q_;
    detail::FpPoly modulus_;
    std::vector<int> add_, mul_, inv_;

    detail::FpPoly decode(int a) const
    {
        detail::FpPoly f;
        for (int i = 0; i < r_; ++i) {
            f.push_back(a % p_);
            a /= (int)p_;
        }
        detail::fp_trim(f);
        return f;
    }
    int encode(const detail::FpPoly& f) const
    {
        int a = 0;
        for (int i = (int)f.size() - 1; i >= 0; --i) a = a * (int)p_ + (int)f[i];
        return a;
    }
    detail::FpPoly reduce(const detail::FpPoly& f) const
    {
        if (r_ == 1) return f;
        return detail::fp_divmod(f, modulus_, p_).second;
    }
    detail::FpPoly find_modulus() const
    {
        if (r_ == 1) return {0, 1};
        auto monic = [&](int deg, long code) {
            detail::FpPoly f(deg + 1, 0);
            for (int i = 0; i < deg; ++i) {
                f[i] = code % p_;
                code /= p_;
            }
            f[deg] = 1;
            return f;
        };
        for (long code = 0;; ++code) {
            detail::FpPoly f = monic(r_, code);
            bool irreducible = true;
            for (int d = 1; 2 * d <= r_ && irreducible; ++d) {
                long count = 1;
                for (int i = 0; i < d; ++i) count *= p_;
                for (long c = 0; c < count && irreducible; ++c)
                    if (detail::fp_divmod(f, monic(d, c), p_).second.empty()) irreducible = false;
            }
            if (irreducible) return f;
        }
    }
};

// q = sum_{i<=j} c[i][j] x_i x_j over a finite field
struct FFQuadForm {
    int n = 0;
    std::vector<std::vector<int>> c;

    static FFQuadForm zero(int n) { return {n, std::vector<std::vector<int>>(n, std::vector<int>(n, 0))}; }
    int eval(const FiniteField& F, const std::vector<int>& x) const
    {
        int s = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                if (c[i][j]) s = F.add(s, F.mul(c[i][j], F.mul(x[i], x[j])));
        return s;
    }
};

inline FFQuadForm orthogonal_sum(const FFQuadForm& a, const FFQuadForm& b)
{
    FFQuadForm s = FFQuadForm::zero(a.n + b.n);
    for (int i = 0; i < a.n; ++i)
        for (int j = i; j < a.n; ++j) s.c[i][j] = a.c[i][j];
    for (int i = 0; i < b.n; ++i)
        for (int j = i; j < b.n; ++j) s.c[a.n + i][a.n + j] = b.c[i][j];
    return s;
}

namespace detail {

// row echelon over F; returns rank and leaves a basis of the kernel in ker
inline int ff_rank_kernel(const FiniteField& F, std::vector<std::vector<int>> A, std::vector<std::vector<int>>* ker)
{
    int rows = (int)A.size(), cols = rows ? (int)A[0].size() : 0, r = 0;
    std::vector<int> pivcol;
    for (int col = 0; col < cols && r < rows; ++col) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (A[i][col]) {
                piv = i;
                break;
            }
        if (piv < 0) continue;
        std::swap(A[r], A[piv]);
        int iv = F.inv(A[r][col]);
        for (auto& x : A[r]) x = F.mul(x, iv);
        for (int i = 0; i < rows; ++i)
            if (i != r && A[i][col]) {
                int f = A[i][col];
                for (int k = 0; k < cols; ++k) A[i][k] = F.sub(A[i][k], F.mul(f, A[r][k]));
            }
        pivcol.push_back(col);
        ++r;
    }
    if (ker) {
        ker->clear();
        std::vector<bool> is_piv(cols, false);
        for (int c : pivcol) is_piv[c] = true;
        for (int free = 0; free < cols; ++free) {
            if (is_piv[free]) continue;
            std::vector<int> v(cols, 0);
            v[free] = 1;
            for (int i = 0; i < r; ++i) v[pivcol[i]] = F.neg(A[i][free]);
            ker->push_back(v);
        }
    }
    return r;
}

}  // namespace detail

// polar form B(x, y) = q(x + y) - q(x) - q(y)
inline std::vector<std::vector<int>> polar_matrix(const FiniteField& F, const FFQuadForm& q)
{
    std::vector<std::vector<int>> B(q.n, std::vector<int>(q.n, 0));
    for (int i = 0; i < q.n; ++i) {
        B[i][i] = F.add(q.c[i][i], q.c[i][i]);
        for (int j = i + 1; j < q.n; ++j) B[i][j] = B[j][i] = q.c[i][j];
    }
    return B;
}

// rank in the sense of the largest geometrically regular subspace:
// rank(B_q), plus one in characteristic 2 when q does not vanish on the radical of B_q
inline int rank_ff(const FiniteField& F, const FFQuadForm& q)
{
    std::vector<std::vector<int>> ker;
    int r = detail::ff_rank_kernel(F, polar_matrix(F, q), &ker);
    if (F.characteristic() == 2) {
        // q is additive on rad B, so testing a basis suffices
        for (auto& v : ker)
            if (q.eval(F, v) != 0) return r + 1;
    }
    return r;
}

// reduction of a p-integral rational form to F_p
inline FFQuadForm reduce_mod(const FiniteField& F, const QuadraticForm5& q)
{
    FFQuadForm r = FFQuadForm::zero(5);
    Int p = Int((long)F.characteristic());
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j) {
            const Rat& x = q.coeff(i, j);
            if (x != 0 && vp(x, p) < 0) throw DomainError("form is not p-integral");
            r.c[i][j] = F.from_int(rat_mod(x, p).get_si());
        }
    return r;
}

// ---------------------------------------------------------------------------
// split special fibers
// ---------------------------------------------------------------------------

enum class SplitVerdict { split_certified, nonsplit_possible, degenerate };

inline const char* to_string(SplitVerdict v)
{
    switch (v) {
    case SplitVerdict::split_certified: return "split-certified";
    case SplitVerdict::nonsplit_possible: return "nonsplit-possible";
    default: return "degenerate";
    }
}

struct SplitCertificate {
    SplitVerdict verdict = SplitVerdict::degenerate;
    bool forms_independent = false;  // the reduced forms span a pencil
    bool det_nonzero = false;        // det(a M0 + b M1) mod p is not identically zero
    bool det_squarefree = false;     // as a binary form
    bool low_rank_member = false;    // some member of rank <= 2 over the algebraic closure
    std::string reason;
};

namespace detail {

using FpMat = std::vector<std::vector<FpPoly>>;

inline FpPoly fp_det3(const FpMat& m, i64 p)
{
    auto term = [&](int a, int b, int c) { return fp_mul(fp_mul(m[0][a], m[1][b], p), m[2][c], p); };
    FpPoly pos = fp_add(fp_add(term(0, 1, 2), term(1, 2, 0), p), term(2, 0, 1), p);
    FpPoly neg = fp_add(fp_add(term(2, 1, 0), term(0, 2, 1), p), term(1, 0, 2), p);
    return fp_sub(pos, neg, p);
}

// det of a 5x5 matrix with entries in F_p[T], by elimination-free cofactor recursion
inline FpPoly fp_det(const FpMat& m, i64 p)
{
    int n = (int)m.size();
    if (n == 1) return m[0][0];
    FpPoly s;
    for (int j = 0; j < n; ++j) {
        if (m[0][j].empty()) continue;
        FpMat sub;
        for (int i = 1; i < n; ++i) {
            std::vector<FpPoly> row;
            for (int k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            sub.push_back(row);
        }
        FpPoly t = fp_mul(m[0][j], fp_det(sub, p), p);
        s = (j % 2) ? fp_sub(s, t, p) : fp_add(s, t, p);
    }
    return s;
}

}  // namespace detail

// Gram matrices are 2M with M the half-integral Gram, so p = 2 is excluded here
inline SplitCertificate split_fiber_certificate(const IntegralModel& m)
{
    using namespace detail;
    SplitCertificate c;
    if (m.p == 2) {
        c.verdict = SplitVerdict::nonsplit_possible;
        c.reason = "residue characteristic 2 is not examined";
        return c;
    }
    if (!m.p.fits_slong_p() || m.p > Int(1) << 30) throw DomainError("prime too large for the certificate");
    i64 p = m.p.get_si();
    FiniteField F(p);
    FFQuadForm a = reduce_mod(F, m.F0), b = reduce_mod(F, m.F1);
    {
        std::vector<std::vector<int>> A(2);
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                A[0].push_back(a.c[i][j]);
                A[1].push_back(b.c[i][j]);
            }
        c.forms_independent = detail::ff_rank_kernel(F, A, nullptr) == 2;
    }
    if (!c.forms_independent) {
        c.reason = "reduced forms are proportional";
        return c;
    }
    // entries of B_a + T B_b
    FpMat M(5, std::vector<FpPoly>(5));
    auto Ba = polar_matrix(F, a), Bb = polar_matrix(F, b);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            FpPoly e = {Ba[i][j], Bb[i][j]};
            fp_trim(e);
            M[i][j] = e;
        }
    FpPoly D = fp_det(M, p);
    c.det_nonzero = !D.empty();
    if (!c.det_nonzero) {
        c.reason = "every member of the reduced pencil is singular";
        return c;
    }
    // squarefree as a binary form of degree 5: a drop of degree >= 2 means a multiple root at infinity
    int drop = 5 - fp_deg(D);
    c.det_squarefree = drop <= 1 && fp_deg(fp_gcd(D, fp_derivative(D, p), p)) == 0;

    // rank <= 2 members: common roots of all 3x3 minors
    FpPoly g;
    std::vector<std::array<int, 3>> triples;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            for (int k = j + 1; k < 5; ++k) triples.push_back({i, j, k});
    for (auto& R : triples)
        for (auto& C : triples) {
            FpMat sub(3, std::vector<FpPoly>(3));
            for (int x = 0; x < 3; ++x)
                for (int y = 0; y < 3; ++y) sub[x][y] = M[R[x]][C[y]];
            g = fp_gcd(g, fp_det3(sub, p), p);
        }
    bool finite_low = g.empty() || fp_deg(g) >= 1;
    bool inf_low = detail::ff_rank_kernel(F, Bb, nullptr) <= 2;
    c.low_rank_member = finite_low || inf_low;
    if (c.det_squarefree && c.low_rank_member)
        throw InconsistencyError("squarefree discriminant but a member of rank <= 2");
    if (c.low_rank_member) {
        c.verdict = SplitVerdict::nonsplit_possible;
        c.reason = "a member of the reduced pencil has rank at most 2";
    } else if (!c.det_squarefree) {
        c.verdict = SplitVerdict::nonsplit_possible;
        c.reason = "reduced discriminant is not squarefree";
    } else {
        c.verdict = SplitVerdict::split_certified;
        c.reason = "reduced pencil is smooth";
    }
    return c;
}

// ---------------------------------------------------------------------------
// Hensel search for Q_p-points on X
// ---------------------------------------------------------------------------

struct LocalPoint {
    std::array<Int, 5> x;  // primitive, Q0(x) and Qinf(x) divisible by p^precision
    int precision = 0;
};

namespace detail {

inline Int eval_int(const QuadraticForm5& q, const std::array<Int, 5>& x)
{
    Rat s = 0;
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j) {
            const Rat& c = q.coeff(i, j);
            if (c != 0) s += c * Rat(x[i] * x[j]);
        }
    return s.get_num();
}

inline Int partial_int(const QuadraticForm5& q, const std::array<Int, 5>& x, int k)
{
    Rat s = 0;
    for (int j = 0; j < 5; ++j) {
        const Rat& c = q.coeff(std::min(k, j), std::max(k, j));
        if (c != 0) s += (j == k ? 2 : 1) * c * Rat(x[j]);
    }
    return s.get_num();
}

inline int vp_or(const Int& x, const Int& p, int cap) { return x == 0 ? cap : std::min(cap, vp(x, p)); }

// the 2x2 Jacobian minor of smallest valuation, as (valuation, columns)
inline std::tuple<int, int, int> best_minor(const QuadraticForm5& a, const QuadraticForm5& b,
                                            const std::array<Int, 5>& x, const Int& p, int cap)
{
    std::array<Int, 5> ga, gb;
    for (int k = 0; k < 5; ++k) {
        ga[k] = partial_int(a, x, k);
        gb[k] = partial_int(b, x, k);
    }
    std::tuple<int, int, int> best = {cap, 0, 1};
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            int v = vp_or(ga[i] * gb[j] - ga[j] * gb[i], p, cap);
            if (v < std::get<0>(best)) best = {v, i, j};
        }
    return best;
}

// Newton in the two coordinates (i, j); needs v(F(x)) > 2 v(J)
inline std::array<Int, 5> newton_lift(const QuadraticForm5& a, const QuadraticForm5& b, std::array<Int, 5> x,
                                      const Int& p, int target)
{
    Int M = ipow(p, target + 4);
    for (int it = 0; it < 200; ++it) {
        Int fa = eval_int(a, x), fb = eval_int(b, x);
        if (vp_or(fa, p, target) >= target && vp_or(fb, p, target) >= target) return x;
        auto [m, i, j] = best_minor(a, b, x, p, 4 * target);
        Int A = partial_int(a, x, i), B = partial_int(a, x, j), C = partial_int(b, x, i), D = partial_int(b, x, j);
        Int det = A * D - B * C;
        // solve J (di, dj) = -(fa, fb) over Q, then round p-adically
        Rat di = Rat(-(D * fa - B * fb)) / Rat(det), dj = Rat(-(-C * fa + A * fb)) / Rat(det);
        auto to_int = [&](const Rat& r) {
            Int num = r.get_num(), den = r.get_den();
            Int pd = 1;
            while (mod(den, p) == 0) {
                den /= p;
                pd *= p;
            }
            if (pd != 1) throw InconsistencyError("Newton step left Z_p");
            return mod(num * invmod(mod(den, M), M), M);
        };
        x[i] = mod(x[i] + to_int(di), M);
        x[j] = mod(x[j] + to_int(dj), M);
    }
    throw InconsistencyError("Newton lifting did not converge");
}

}  // namespace detail

// search for x in Z_p^5 primitive with both forms vanishing, via a lifting tree
// explored up to max_level, certified by the Hensel criterion v(F) > 2 v(J)
inline std::optional<LocalPoint> find_local_point(const IntegralModel& m, int max_level = 4, long node_budget = 400000,
                                                  int precision = 12)
{
    using namespace detail;
    const Int& p = m.p;
    if (!p.fits_slong_p()) return std::nullopt;
    long P = p.get_si();
    if (P > 60) return std::nullopt;  // the residue enumeration is p^4 per chart
    long nodes = 0;
    std::vector<std::array<Int, 5>> level;
    // level 1: points of P^4(F_p), first nonzero coordinate 1
    for (int lead = 0; lead < 5; ++lead) {
        int free = 4 - lead;
        long count = 1;
        for (int i = 0; i < free; ++i) count *= P;
        for (long code = 0; code < count; ++code) {
            std::array<Int, 5> x;
            for (int i = 0; i < lead; ++i) x[i] = 0;
            x[lead] = 1;
            long c = code;
            for (int i = lead + 1; i < 5; ++i) {
                x[i] = c % P;
                c /= P;
            }
            if (mod(eval_int(m.F0, x), p) == 0 && mod(eval_int(m.F1, x), p) == 0) level.push_back(x);
        }
    }
    Int pk = p;
    for (int k = 1; k <= max_level && !level.empty(); ++k) {
        std::vector<std::array<Int, 5>> next;
        for (auto& x : level) {
            int cap = 4 * (max_level + 2);
            int va = vp_or(eval_int(m.F0, x), p, cap), vb = vp_or(eval_int(m.F1, x), p, cap);
            int mv = std::get<0>(best_minor(m.F0, m.F1, x, p, cap));
            if (std::min(va, vb) > 2 * mv) {
                auto y = newton_lift(m.F0, m.F1, x, p, precision);
                return LocalPoint{y, precision};
            }
            if (k == max_level) continue;
            // children x + p^k y, keeping the unit coordinate
            int lead = 0;
            while (mod(x[lead], p) == 0) ++lead;
            long total = 1;
            for (int i = 0; i < 4; ++i) total *= P;
            for (long code = 0; code < total; ++code) {
                if (++nodes > node_budget) return std::nullopt;
                std::array<Int, 5> z = x;
                long c = code;
                for (int i = 0; i < 5; ++i) {
                    if (i == lead) continue;
                    z[i] += pk * (c % P);
                    c /= P;
                }
                Int pk1 = pk * p;
                if (mod(eval_int(m.F0, z), pk1) == 0 && mod(eval_int(m.F1, z), pk1) == 0) next.push_back(z);
            }
        }
        level.swap(next);
        pk *= p;
    }
    return std::nullopt;
}

inline bool verify_local_point(const IntegralModel& m, const LocalPoint& pt)
{
    bool unit = false;
    for (auto& x : pt.x)
        if (mod(x, m.p) != 0) unit = true;
    Int pk = ipow(m.p, pt.precision);
    return unit && mod(detail::eval_int(m.F0, pt.x), pk) == 0 && mod(detail::eval_int(m.F1, pt.x), pk) == 0;
}

}  // namespace dp4
