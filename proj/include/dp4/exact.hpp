#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dp4 {

using Int = mpz_class;
using Rat = mpq_class;

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InconsistencyError : std::logic_error {
    using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// integers and rationals
// ---------------------------------------------------------------------------

inline Rat make_rat(const Int& n, const Int& d = 1)
{
    if (d == 0) throw DomainError("zero denominator");
    Rat r(n, d);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Int& n) { return n.get_str(); }
inline std::string to_string(const Rat& r) { return r.get_str(); }

inline Rat parse_rat(const std::string& s0)
{
    std::string s;
    for (char c : s0)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty rational");
    auto valid_int = [](const std::string& t) {
        size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    auto to_int = [](std::string t) {
        if (!t.empty() && t[0] == '+') t = t.substr(1);
        return Int(t);
    };
    auto slash = s.find('/');
    if (slash == std::string::npos) {
        if (!valid_int(s)) throw ParseError("not a rational: '" + s0 + "'");
        return Rat(to_int(s));
    }
    std::string a = s.substr(0, slash), b = s.substr(slash + 1);
    if (!valid_int(a) || !valid_int(b) || b[0] == '-' || b[0] == '+')
        throw ParseError("not a rational: '" + s0 + "'");
    Int den = to_int(b);
    if (den == 0) throw ParseError("zero denominator in '" + s0 + "'");
    return make_rat(to_int(a), den);
}

inline Int abs_int(const Int& a) { return a < 0 ? Int(-a) : a; }

// nonnegative residue
inline Int mod(const Int& a, const Int& m)
{
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Int ipow(const Int& b, unsigned long e)
{
    Int r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

inline Rat rpow(const Rat& b, long e)
{
    if (e < 0) {
        if (b == 0) throw DomainError("zero to negative power");
        return rpow(Rat(1) / b, -e);
    }
    Int n = ipow(b.get_num(), static_cast<unsigned long>(e));
    Int d = ipow(b.get_den(), static_cast<unsigned long>(e));
    return make_rat(n, d);
}

inline Int gcd(const Int& a, const Int& b)
{
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int lcm(const Int& a, const Int& b)
{
    Int g;
    mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline Int invmod(const Int& a, const Int& m)
{
    Int r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        throw DomainError("not invertible modulo " + m.get_str());
    return r;
}

inline bool is_prime(const Int& n)
{
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

inline Int next_prime(const Int& n)
{
    Int r;
    mpz_nextprime(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline bool is_square_int(const Int& n)
{
    return n >= 0 && mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

inline bool is_square_rat(const Rat& r)
{
    return r >= 0 && is_square_int(r.get_num()) && is_square_int(r.get_den());
}

// p-adic valuation; n != 0
inline int vp(const Int& n, const Int& p)
{
    if (n == 0) throw DomainError("valuation of zero");
    return static_cast<int>(mpz_remove(Int().get_mpz_t(), n.get_mpz_t(), p.get_mpz_t()));
}

inline int vp(const Rat& r, const Int& p)
{
    if (r == 0) throw DomainError("valuation of zero");
    return vp(r.get_num(), p) - vp(r.get_den(), p);
}

// r / p^{v_p(r)}
inline Rat unit_part(const Rat& r, const Int& p)
{
    Int n = r.get_num(), d = r.get_den();
    mpz_remove(n.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
    mpz_remove(d.get_mpz_t(), d.get_mpz_t(), p.get_mpz_t());
    return make_rat(n, d);
}

// reduce a p-integral rational modulo m = p^k
inline Int rat_mod(const Rat& r, const Int& m)
{
    return mod(r.get_num() * invmod(r.get_den(), m), m);
}

inline int legendre(const Int& a, const Int& p)
{
    return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

namespace detail {

inline Int pollard_brent(const Int& n, unsigned long seed)
{
    if (mpz_even_p(n.get_mpz_t())) return 2;
    Int y = seed % 1000 + 2, c = seed % 97 + 1, m = 64, g = 1, r = 1, q = 1, x, ys;
    auto f = [&](const Int& v) { return mod(v * v + c, n); };
    while (g == 1) {
        x = y;
        for (Int i = 0; i < r; ++i) y = f(y);
        Int k = 0;
        while (k < r && g == 1) {
            ys = y;
            for (Int i = 0; i < m && i < r - k; ++i) {
                y = f(y);
                q = mod(q * abs_int(Int(x - y)), n);
            }
            g = gcd(q, n);
            k += m;
        }
        r *= 2;
    }
    if (g == n) {
        do {
            ys = f(ys);
            g = gcd(abs_int(Int(x - ys)), n);
        } while (g == 1);
    }
    return g;
}

inline void factor_rec(const Int& n, std::map<Int, int>& out, unsigned long seed = 1)
{
    if (n == 1) return;
    if (is_prime(n)) {
        out[n]++;
        return;
    }
    if (is_square_int(n)) {
        Int s;
        mpz_sqrt(s.get_mpz_t(), n.get_mpz_t());
        std::map<Int, int> sub;
        factor_rec(s, sub, seed);
        for (auto& [p, e] : sub) out[p] += 2 * e;
        return;
    }
    Int d = n;
    unsigned long s = seed;
    while (d == n || d == 1) d = pollard_brent(n, s++);
    factor_rec(d, out, s);
    factor_rec(n / d, out, s);
}

}  // namespace detail

// prime factorization of |n|, ascending primes
inline std::vector<std::pair<Int, int>> factor_integer(const Int& n0)
{
    if (n0 == 0) throw DomainError("factor of zero");
    Int n = abs_int(n0);
    std::map<Int, int> out;
    for (unsigned long p = 2; p < 2000 && n > 1; p += (p == 2 ? 1 : 2)) {
        if (Int(p) * p > n) break;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out[Int(p)]++;
            n /= p;
        }
    }
    detail::factor_rec(n, out);
    return {out.begin(), out.end()};
}

inline std::vector<Int> prime_divisors(const Rat& r)
{
    std::vector<Int> ps;
    if (r == 0) return ps;
    for (auto& [p, e] : factor_integer(r.get_num())) ps.push_back(p);
    for (auto& [p, e] : factor_integer(r.get_den())) ps.push_back(p);
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    return ps;
}

// signed squarefree integer d with r = d * (rational)^2
inline Int squarefree_kernel(const Rat& r)
{
    if (r == 0) throw DomainError("square class of zero");
    Int n = r.get_num() * r.get_den();
    Int d = n < 0 ? -1 : 1;
    for (auto& [p, e] : factor_integer(n))
        if (e % 2) d *= p;
    return d;
}

// ---------------------------------------------------------------------------
// univariate polynomials over Q
// ---------------------------------------------------------------------------

class Poly {
public:
    Poly() = default;
    explicit Poly(std::vector<Rat> c) : c_(std::move(c)) { trim(); }
    Poly(std::initializer_list<Rat> c) : c_(c) { trim(); }

    static Poly constant(const Rat& a) { return Poly(std::vector<Rat>{a}); }
    static Poly monomial(const Rat& a, int deg)
    {
        std::vector<Rat> c(deg + 1);
        c[deg] = a;
        return Poly(std::move(c));
    }
    static Poly x() { return monomial(1, 1); }
    // T - a
    static Poly linear_root(const Rat& a) { return Poly({-a, Rat(1)}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rat>& coeffs() const { return c_; }
    Rat operator[](int i) const { return (i >= 0 && i < (int)c_.size()) ? c_[i] : Rat(0); }
    Rat lead() const { return c_.empty() ? Rat(0) : c_.back(); }

    Rat eval(const Rat& x) const
    {
        Rat r = 0;
        for (int i = degree(); i >= 0; --i) r = r * x + c_[i];
        return r;
    }

    // Horner evaluation in any ring that accepts Rat scalars
    template <class T>
    T eval_in(const T& x, const T& zero) const
    {
        T r = zero;
        for (int i = degree(); i >= 0; --i) r = r * x + c_[i];
        return r;
    }

    Poly monic() const
    {
        if (is_zero()) return *this;
        Poly r = *this;
        Rat l = lead();
        for (auto& a : r.c_) a /= l;
        return r;
    }

    Poly derivative() const
    {
        std::vector<Rat> d;
        for (int i = 1; i <= degree(); ++i) d.push_back(c_[i] * i);
        return Poly(std::move(d));
    }

    friend Poly operator+(const Poly& a, const Poly& b)
    {
        std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()));
        for (size_t i = 0; i < c.size(); ++i) c[i] = a[(int)i] + b[(int)i];
        return Poly(std::move(c));
    }
    friend Poly operator-(const Poly& a) { return a * Rat(-1); }
    friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }
    friend Poly operator*(const Poly& a, const Poly& b)
    {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Rat> c(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); ++i)
            for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return Poly(std::move(c));
    }
    friend Poly operator*(const Poly& a, const Rat& s)
    {
        std::vector<Rat> c = a.c_;
        for (auto& x : c) x *= s;
        return Poly(std::move(c));
    }
    friend Poly operator*(const Rat& s, const Poly& a) { return a * s; }
    friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    friend std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b)
    {
        if (b.is_zero()) throw DomainError("polynomial division by zero");
        std::vector<Rat> r = a.c_;
        int db = b.degree();
        if (a.degree() < db) return {Poly(), a};
        std::vector<Rat> q(a.degree() - db + 1);
        Rat lb = b.lead();
        for (int i = a.degree(); i >= db; --i) {
            Rat f = r[i] / lb;
            q[i - db] = f;
            if (f == 0) continue;
            for (int j = 0; j <= db; ++j) r[i - db + j] -= f * b.c_[j];
        }
        r.resize(db);
        return {Poly(std::move(q)), Poly(std::move(r))};
    }
    friend Poly operator%(const Poly& a, const Poly& b) { return divmod(a, b).second; }
    friend Poly operator/(const Poly& a, const Poly& b) { return divmod(a, b).first; }

    // lexicographic on coefficients, lowest degree first; shorter first
    friend bool operator<(const Poly& a, const Poly& b)
    {
        if (a.degree() != b.degree()) return a.degree() < b.degree();
        for (int i = 0; i <= a.degree(); ++i)
            if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
        return false;
    }

    std::string to_string(const std::string& var = "T") const
    {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const Rat& a = c_[i];
            if (a == 0) continue;
            Rat mag = abs(a);
            if (first)
                os << (a < 0 ? "-" : "");
            else
                os << (a < 0 ? " - " : " + ");
            first = false;
            if (i == 0 || mag != 1) {
                os << mag.get_str();
                if (i > 0) os << "*";
            }
            if (i >= 1) os << var;
            if (i >= 2) os << "^" << i;
        }
        return os.str();
    }

    std::vector<std::string> coeff_strings() const
    {
        std::vector<std::string> out;
        for (auto& a : c_) out.push_back(a.get_str());
        return out;
    }

private:
    void trim()
    {
        for (auto& a : c_) a.canonicalize();
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<Rat> c_;
};

inline std::ostream& operator<<(std::ostream& os, const Poly& p) { return os << p.to_string(); }

// monic gcd (zero if both zero)
inline Poly gcd(Poly a, Poly b)
{
    while (!b.is_zero()) {
        Poly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

// extended gcd: s*a + t*b = g (monic)
inline Poly xgcd(const Poly& a0, const Poly& b0, Poly& s, Poly& t)
{
    Poly r0 = a0, r1 = b0, s0 = Poly::constant(1), s1, t0, t1 = Poly::constant(1);
    while (!r1.is_zero()) {
        auto [q, r] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        Poly s2 = s0 - q * s1, t2 = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    Rat l = r0.lead();
    if (l == 0) {
        s = Poly();
        t = Poly();
        return r0;
    }
    s = s0 * (Rat(1) / l);
    t = t0 * (Rat(1) / l);
    return r0.monic();
}

inline Poly squarefree_part(const Poly& p)
{
    if (p.is_zero()) throw DomainError("squarefree_part of zero polynomial");
    if (p.degree() == 0) return Poly::constant(1);
    return (p / gcd(p, p.derivative())).monic();
}

// Yun: monic p = prod a_i^i, returned as {a_1, a_2, ...}
inline std::vector<Poly> squarefree_decomposition(const Poly& p0)
{
    if (p0.is_zero()) throw DomainError("squarefree decomposition of zero");
    Poly p = p0.monic();
    std::vector<Poly> out;
    if (p.degree() == 0) return out;
    Poly dp = p.derivative();
    Poly a = gcd(p, dp);
    Poly b = p / a;
    Poly c = dp / a;
    Poly d = c - b.derivative();
    while (b.degree() > 0) {
        Poly ai = gcd(b, d);
        out.push_back(ai);
        b = b / ai;
        c = d / ai;
        d = c - b.derivative();
    }
    while (!out.empty() && out.back().degree() == 0) out.pop_back();
    for (auto& x : out) x = x.monic();
    return out;
}

inline Rat resultant(const Poly& a, const Poly& b)
{
    if (a.is_zero() || b.is_zero()) throw DomainError("resultant with zero polynomial");
    int m = a.degree(), n = b.degree();
    if (n == 0) return rpow(b[0], m);
    if (m == 0) return rpow(a[0], n);
    Poly r = a % b;
    if (r.is_zero()) return 0;
    Rat sign = ((m * n) % 2) ? Rat(-1) : Rat(1);
    return sign * rpow(b.lead(), m - r.degree()) * resultant(b, r);
}

inline Rat discriminant(const Poly& f)
{
    int n = f.degree();
    if (n < 1) throw DomainError("discriminant of constant");
    Rat r = resultant(f, f.derivative()) / f.lead();
    return ((n * (n - 1) / 2) % 2) ? Rat(-r) : r;
}

// Lagrange interpolation through (xs[i], ys[i]), distinct xs
inline Poly interpolate(const std::vector<Rat>& xs, const std::vector<Rat>& ys)
{
    Poly r;
    for (size_t i = 0; i < xs.size(); ++i) {
        Poly b = Poly::constant(1);
        Rat den = 1;
        for (size_t j = 0; j < xs.size(); ++j) {
            if (j == i) continue;
            b = b * Poly::linear_root(xs[j]);
            den *= xs[i] - xs[j];
        }
        r = r + b * (ys[i] / den);
    }
    return r;
}

struct Factorization {
    Rat unit;
    std::vector<std::pair<Poly, int>> factors;

    Poly expand() const
    {
        Poly r = Poly::constant(unit);
        for (auto& [g, e] : factors)
            for (int i = 0; i < e; ++i) r = r * g;
        return r;
    }
};

// ---------------------------------------------------------------------------
// factorization machinery: F_p[x], Hensel lifting, recombination
// ---------------------------------------------------------------------------

namespace detail {

using i64 = long long;
using FpPoly = std::vector<i64>;  // lowest first, trimmed

inline i64 pmod(i64 a, i64 p)
{
    a %= p;
    return a < 0 ? a + p : a;
}
inline i64 mulmod(i64 a, i64 b, i64 p) { return (i64)((__int128)a * b % p); }
inline i64 powmod(i64 a, i64 e, i64 p)
{
    i64 r = 1;
    a = pmod(a, p);
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}
inline i64 inv_p(i64 a, i64 p) { return powmod(a, p - 2, p); }

inline void fp_trim(FpPoly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline int fp_deg(const FpPoly& a) { return (int)a.size() - 1; }

inline FpPoly fp_add(const FpPoly& a, const FpPoly& b, i64 p)
{
    FpPoly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        i64 x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
        c[i] = (x + y) % p;
    }
    fp_trim(c);
    return c;
}
inline FpPoly fp_sub(const FpPoly& a, const FpPoly& b, i64 p)
{
    FpPoly c(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < c.size(); ++i) {
        i64 x = i < a.size() ? a[i] : 0, y = i < b.size() ? b[i] : 0;
        c[i] = pmod(x - y, p);
    }
    fp_trim(c);
    return c;
}
inline FpPoly fp_mul(const FpPoly& a, const FpPoly& b, i64 p)
{
    if (a.empty() || b.empty()) return {};
    FpPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
    fp_trim(c);
    return c;
}
inline std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b, i64 p)
{
    if (b.empty()) throw DomainError("F_p division by zero");
    FpPoly r = a;
    int db = fp_deg(b);
    if (fp_deg(a) < db) return {{}, a};
    FpPoly q(fp_deg(a) - db + 1, 0);
    i64 il = inv_p(b.back(), p);
    for (int i = fp_deg(a); i >= db; --i) {
        i64 f = mulmod(r[i], il, p);
        q[i - db] = f;
        if (!f) continue;
        for (int j = 0; j <= db; ++j) r[i - db + j] = pmod(r[i - db + j] - mulmod(f, b[j], p), p);
    }
    r.resize(db);
    fp_trim(r);
    fp_trim(q);
    return {q, r};
}
inline FpPoly fp_monic(FpPoly a, i64 p)
{
    if (a.empty()) return a;
    i64 il = inv_p(a.back(), p);
    for (auto& x : a) x = mulmod(x, il, p);
    return a;
}
inline FpPoly fp_gcd(FpPoly a, FpPoly b, i64 p)
{
    while (!b.empty()) {
        FpPoly r = fp_divmod(a, b, p).second;
        a = std::move(b);
        b = std::move(r);
    }
    return fp_monic(a, p);
}
inline FpPoly fp_xgcd(const FpPoly& a0, const FpPoly& b0, FpPoly& s, FpPoly& t, i64 p)
{
    FpPoly r0 = a0, r1 = b0, s0{1}, s1, t0, t1{1};
    while (!r1.empty()) {
        auto [q, r] = fp_divmod(r0, r1, p);
        r0 = r1;
        r1 = r;
        FpPoly s2 = fp_sub(s0, fp_mul(q, s1, p), p), t2 = fp_sub(t0, fp_mul(q, t1, p), p);
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    i64 il = inv_p(r0.back(), p);
    for (auto& x : s0) x = mulmod(x, il, p);
    for (auto& x : t0) x = mulmod(x, il, p);
    s = s0;
    t = t0;
    return fp_monic(r0, p);
}
inline FpPoly fp_derivative(const FpPoly& a, i64 p)
{
    FpPoly d;
    for (size_t i = 1; i < a.size(); ++i) d.push_back(mulmod(a[i], (i64)i % p, p));
    fp_trim(d);
    return d;
}
inline FpPoly fp_powmod(FpPoly b, const Int& e, const FpPoly& m, i64 p)
{
    FpPoly r{1};
    b = fp_divmod(b, m, p).second;
    size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
    for (size_t i = bits; i-- > 0;) {
        r = fp_divmod(fp_mul(r, r, p), m, p).second;
        if (mpz_tstbit(e.get_mpz_t(), i)) r = fp_divmod(fp_mul(r, b, p), m, p).second;
    }
    return r;
}

inline void fp_edf(const FpPoly& g, int d, i64 p, std::mt19937_64& rng, std::vector<FpPoly>& out)
{
    if (fp_deg(g) == d) {
        out.push_back(g);
        return;
    }
    Int e = (ipow(Int((unsigned long)p), d) - 1) / 2;
    std::uniform_int_distribution<i64> dist(0, p - 1);
    for (;;) {
        FpPoly a(fp_deg(g));
        for (auto& x : a) x = dist(rng);
        fp_trim(a);
        if (fp_deg(a) < 1) continue;
        FpPoly b = fp_sub(fp_powmod(a, e, g, p), FpPoly{1}, p);
        FpPoly c = fp_gcd(b, g, p);
        if (fp_deg(c) > 0 && fp_deg(c) < fp_deg(g)) {
            fp_edf(c, d, p, rng, out);
            fp_edf(fp_divmod(g, c, p).first, d, p, rng, out);
            return;
        }
    }
}

// monic squarefree f over F_p, p odd
inline std::vector<FpPoly> fp_factor(FpPoly f, i64 p)
{
    std::mt19937_64 rng(0x5eedULL + (unsigned long long)p);
    std::vector<FpPoly> out;
    FpPoly h{0, 1};
    FpPoly x{0, 1};
    for (int i = 1; fp_deg(f) >= 2 * i; ++i) {
        h = fp_powmod(h, Int((unsigned long)p), f, p);
        FpPoly g = fp_gcd(fp_sub(h, x, p), f, p);
        if (fp_deg(g) > 0) {
            fp_edf(g, i, p, rng, out);
            f = fp_divmod(f, g, p).first;
            h = fp_divmod(h, f, p).second;
        }
    }
    if (fp_deg(f) > 0) out.push_back(fp_monic(f, p));
    return out;
}

using ZPoly = std::vector<Int>;

inline void z_trim(ZPoly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}
inline ZPoly z_mul(const ZPoly& a, const ZPoly& b)
{
    if (a.empty() || b.empty()) return {};
    ZPoly c(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    z_trim(c);
    return c;
}
inline ZPoly z_mod(ZPoly a, const Int& m)
{
    for (auto& x : a) x = mod(x, m);
    z_trim(a);
    return a;
}
inline ZPoly z_symmetric(ZPoly a, const Int& m)
{
    Int half = m / 2;
    for (auto& x : a) {
        x = mod(x, m);
        if (x > half) x -= m;
    }
    z_trim(a);
    return a;
}
inline FpPoly z_to_fp(const ZPoly& a, i64 p)
{
    FpPoly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod(a[i], Int((unsigned long)p)).get_si();
    fp_trim(r);
    return r;
}
inline ZPoly fp_to_z(const FpPoly& a)
{
    ZPoly r;
    for (auto x : a) r.push_back(Int((long)x));
    return r;
}
inline Int z_content(const ZPoly& a)
{
    Int g = 0;
    for (auto& x : a) g = gcd(g, x);
    return g;
}
inline ZPoly z_primitive(ZPoly a)
{
    Int g = z_content(a);
    if (g == 0) return a;
    if (a.back() < 0) g = -g;
    for (auto& x : a) x /= g;
    return a;
}
inline Poly z_to_poly(const ZPoly& a)
{
    std::vector<Rat> c;
    for (auto& x : a) c.emplace_back(x);
    return Poly(std::move(c));
}
// primitive integer multiple with positive lead
inline ZPoly poly_to_z(const Poly& p)
{
    Int den = 1;
    for (auto& c : p.coeffs()) den = lcm(den, c.get_den());
    ZPoly z;
    for (auto& c : p.coeffs()) z.push_back(c.get_num() * (den / c.get_den()));
    return z_primitive(z);
}

// exact quotient a / b over Z if it exists
inline bool z_divides(const ZPoly& b, const ZPoly& a, ZPoly& q)
{
    auto [qq, r] = divmod(z_to_poly(a), z_to_poly(b));
    if (!r.is_zero()) return false;
    q.clear();
    for (auto& c : qq.coeffs()) {
        if (c.get_den() != 1) return false;
        q.push_back(c.get_num());
    }
    return true;
}

// g = a*b mod p with a monic, lc(b) = lc(g) mod p; lift to p^k
inline std::pair<ZPoly, ZPoly> hensel2(const ZPoly& g, const FpPoly& a, const FpPoly& b, i64 p, int k)
{
    FpPoly s, t;
    fp_xgcd(a, b, s, t, p);
    ZPoly A = fp_to_z(a), B = fp_to_z(b);
    B.back() = g.back();
    Int m = (unsigned long)p;
    Int P = (unsigned long)p;
    for (int i = 1; i < k; ++i) {
        ZPoly AB = z_mul(A, B);
        ZPoly e(std::max(g.size(), AB.size()), Int(0));
        for (size_t j = 0; j < e.size(); ++j) {
            Int x = (j < g.size() ? g[j] : Int(0)) - (j < AB.size() ? AB[j] : Int(0));
            e[j] = x / m;
        }
        z_trim(e);
        FpPoly ef = z_to_fp(e, p);
        auto [q, da] = fp_divmod(fp_mul(t, ef, p), a, p);
        FpPoly db = fp_add(fp_mul(s, ef, p), fp_mul(q, b, p), p);
        for (size_t j = 0; j < da.size(); ++j) A[j] += m * Int((long)da[j]);
        if (B.size() < db.size()) B.resize(db.size(), Int(0));
        for (size_t j = 0; j < db.size(); ++j) B[j] += m * Int((long)db[j]);
        m *= P;
    }
    return {z_mod(A, m), z_mod(B, m)};
}

// lift monic factors fs of g mod p (lc(g) arbitrary) to p^k; returns monic lifts
inline std::vector<ZPoly> hensel_multi(const ZPoly& g, const std::vector<FpPoly>& fs, i64 p, int k)
{
    Int pk = ipow(Int((unsigned long)p), k);
    if (fs.size() == 1) {
        Int il = invmod(g.back(), pk);
        ZPoly r = g;
        for (auto& x : r) x = mod(x * il, pk);
        return {r};
    }
    size_t h = fs.size() / 2;
    FpPoly a{1}, b{1};
    for (size_t i = 0; i < h; ++i) a = fp_mul(a, fs[i], p);
    for (size_t i = h; i < fs.size(); ++i) b = fp_mul(b, fs[i], p);
    i64 lc = mod(g.back(), Int((unsigned long)p)).get_si();
    for (auto& x : b) x = mulmod(x, lc, p);
    auto [A, B] = hensel2(g, a, b, p, k);
    std::vector<FpPoly> left(fs.begin(), fs.begin() + h), right(fs.begin() + h, fs.end());
    auto L = hensel_multi(A, left, p, k);
    auto R = hensel_multi(B, right, p, k);
    for (auto& r : R) L.push_back(r);
    // the recursive lifts are relative to A, B mod p^k; reduce
    for (auto& x : L) x = z_mod(x, pk);
    return L;
}

// irreducible factors of a primitive squarefree integer polynomial with positive lead
inline std::vector<ZPoly> zassenhaus(ZPoly g)
{
    int n = (int)g.size() - 1;
    if (n <= 1) return {g};
    // pick a good prime: few modular factors among the first candidates
    i64 best_p = 0;
    std::vector<FpPoly> best_f;
    int found = 0;
    for (i64 p = 3; found < 6 && p < 10000; p = next_prime(Int((long)p)).get_si()) {
        if (mod(g.back(), Int((long)p)) == 0) continue;
        FpPoly gp = z_to_fp(g, p);
        if (fp_deg(gp) != n) continue;
        if (fp_deg(fp_gcd(gp, fp_derivative(gp, p), p)) != 0) continue;
        auto fs = fp_factor(fp_monic(gp, p), p);
        ++found;
        if (best_p == 0 || fs.size() < best_f.size()) {
            best_p = p;
            best_f = fs;
        }
        if (fs.size() == 1) break;
    }
    if (best_p == 0) throw InconsistencyError("no good prime for factorization");
    if (best_f.size() == 1) return {g};
    i64 p = best_p;
    Int maxc = 0;
    for (auto& c : g) maxc = std::max(maxc, abs_int(c));
    Int bound = 2 * abs_int(g.back()) * ipow(Int(2), n) * maxc * (n + 1);
    int k = 1;
    Int pk = (unsigned long)p;
    while (pk <= bound) {
        pk *= Int((long)p);
        ++k;
    }
    std::sort(best_f.begin(), best_f.end());
    auto lifted = hensel_multi(g, best_f, p, k);

    std::vector<ZPoly> result;
    std::vector<ZPoly> rem = lifted;
    for (size_t s = 1; 2 * s <= rem.size();) {
        bool hit = false;
        std::vector<int> idx(s);
        for (size_t i = 0; i < s; ++i) idx[i] = (int)i;
        for (;;) {
            Int L = g.back();
            ZPoly cand{L};
            for (int i : idx) cand = z_mod(z_mul(cand, rem[i]), pk);
            cand = z_primitive(z_symmetric(cand, pk));
            ZPoly q;
            if (!cand.empty() && z_divides(cand, g, q)) {
                result.push_back(cand);
                g = z_primitive(q);
                std::vector<ZPoly> nr;
                for (size_t i = 0; i < rem.size(); ++i)
                    if (std::find(idx.begin(), idx.end(), (int)i) == idx.end()) nr.push_back(rem[i]);
                rem = nr;
                hit = true;
                break;
            }
            // next combination
            int i = (int)s - 1;
            while (i >= 0 && idx[i] == (int)(rem.size() - s + i)) --i;
            if (i < 0) break;
            ++idx[i];
            for (size_t j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!hit) ++s;
    }
    if (g.size() > 1) result.push_back(g);
    return result;
}

}  // namespace detail

inline Factorization factor(const Poly& p)
{
    if (p.is_zero()) throw DomainError("factor of zero polynomial");
    Factorization F;
    F.unit = p.lead();
    auto sq = squarefree_decomposition(p);
    for (size_t i = 0; i < sq.size(); ++i) {
        if (sq[i].degree() < 1) continue;
        for (auto& z : detail::zassenhaus(detail::poly_to_z(sq[i])))
            F.factors.emplace_back(detail::z_to_poly(z).monic(), (int)i + 1);
    }
    std::sort(F.factors.begin(), F.factors.end(), [](auto& a, auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    return F;
}

// rational roots of p (distinct, ascending)
inline std::vector<Rat> rational_roots(const Poly& p)
{
    std::vector<Rat> r;
    for (auto& [g, e] : factor(p).factors)
        if (g.degree() == 1) r.push_back(-g[0]);
    std::sort(r.begin(), r.end());
    return r;
}

// ---------------------------------------------------------------------------
// dense matrices over a field
// ---------------------------------------------------------------------------

inline bool is_zero(const Rat& r) { return r == 0; }

template <class F>
using Matrix = std::vector<std::vector<F>>;

template <class F>
Matrix<F> make_matrix(size_t r, size_t c, const F& zero)
{
    return Matrix<F>(r, std::vector<F>(c, zero));
}

// determinant by Gaussian elimination; F needs is_zero(), inverse via 1/x
template <class F>
F determinant(Matrix<F> a, const F& one)
{
    size_t n = a.size();
    F det = one;
    for (size_t c = 0; c < n; ++c) {
        size_t piv = n;
        for (size_t r = c; r < n; ++r)
            if (!is_zero(a[r][c])) {
                piv = r;
                break;
            }
        if (piv == n) return one - one;
        if (piv != c) {
            std::swap(a[piv], a[c]);
            det = -det;
        }
        det = det * a[c][c];
        F inv = one / a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            if (is_zero(a[r][c])) continue;
            F f = a[r][c] * inv;
            for (size_t k = c; k < n; ++k) a[r][k] = a[r][k] - f * a[c][k];
        }
    }
    return det;
}

// reduced row echelon form in place; returns pivot columns
template <class F>
std::vector<size_t> rref(Matrix<F>& a, const F& one)
{
    std::vector<size_t> piv;
    size_t rows = a.size(), cols = rows ? a[0].size() : 0, r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = rows;
        for (size_t i = r; i < rows; ++i)
            if (!is_zero(a[i][c])) {
                p = i;
                break;
            }
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        F inv = one / a[r][c];
        for (size_t k = c; k < cols; ++k) a[r][k] = a[r][k] * inv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || is_zero(a[i][c])) continue;
            F f = a[i][c];
            for (size_t k = c; k < cols; ++k) a[i][k] = a[i][k] - f * a[r][k];
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

template <class F>
size_t rank(Matrix<F> a, const F& one)
{
    return rref(a, one).size();
}

// basis of the right kernel
template <class F>
std::vector<std::vector<F>> kernel(Matrix<F> a, const F& one)
{
    size_t cols = a.empty() ? 0 : a[0].size();
    auto piv = rref(a, one);
    F zero = one - one;
    std::vector<std::vector<F>> basis;
    for (size_t free = 0; free < cols; ++free) {
        if (std::find(piv.begin(), piv.end(), free) != piv.end()) continue;
        std::vector<F> v(cols, zero);
        v[free] = one;
        for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = -a[i][free];
        basis.push_back(v);
    }
    return basis;
}


}  // namespace dp4
