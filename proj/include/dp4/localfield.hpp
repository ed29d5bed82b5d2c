#pragma once

#include <array>
#include <map>
#include <mutex>

#include "dp4/numberfield.hpp"

namespace dp4 {

// ---------------------------------------------------------------------------
// places of Q and the group 1/2 Z / Z
// ---------------------------------------------------------------------------

struct Place {
    bool real = true;
    Int p = 0;

    static Place infinite() { return {}; }
    static Place prime(const Int& q)
    {
        if (!is_prime(q)) throw DomainError("not a prime: " + q.get_str());
        return {false, q};
    }
    std::string to_string() const { return real ? "inf" : p.get_str(); }
    friend bool operator==(const Place& a, const Place& b) { return a.real == b.real && (a.real || a.p == b.p); }
    friend bool operator<(const Place& a, const Place& b)
    {
        if (a.real != b.real) return a.real;
        return !a.real && a.p < b.p;
    }
};

inline Place parse_place(const std::string& s)
{
    if (s == "inf" || s == "real" || s == "oo") return Place::infinite();
    Int p;
    try {
        p = Int(s);
    } catch (...) {
        throw ParseError("bad place: '" + s + "'");
    }
    if (!is_prime(p)) throw ParseError("place is not a prime: '" + s + "'");
    return Place::prime(p);
}

struct Half {
    int v = 0;  // 0 or 1, meaning 0 or 1/2
    Half() = default;
    explicit Half(int x) : v(((x % 2) + 2) % 2) {}
    friend Half operator+(Half a, Half b) { return Half(a.v + b.v); }
    Half& operator+=(Half b) { return *this = *this + b; }
    friend bool operator==(Half a, Half b) { return a.v == b.v; }
    friend bool operator<(Half a, Half b) { return a.v < b.v; }
    bool nonzero() const { return v != 0; }
    std::string to_string() const { return v ? "1/2" : "0"; }
    friend std::ostream& operator<<(std::ostream& os, Half h) { return os << h.to_string(); }
};

// ---------------------------------------------------------------------------
// Q_v
// ---------------------------------------------------------------------------

inline bool is_local_square(const Rat& r, const Place& v)
{
    if (r == 0) throw DomainError("local square test of zero");
    if (v.real) return r > 0;
    if (vp(r, v.p) % 2) return false;
    Rat u = unit_part(r, v.p);
    if (v.p == 2) return rat_mod(u, 8) == 1;
    return legendre(rat_mod(u, v.p), v.p) == 1;
}

inline Half hilbert(const Rat& a, const Rat& b, const Place& v)
{
    if (a == 0 || b == 0) throw DomainError("Hilbert symbol of zero");
    if (v.real) return Half(a < 0 && b < 0);
    const Int& p = v.p;
    int al = vp(a, p), be = vp(b, p);
    Rat u = unit_part(a, p), w = unit_part(b, p);
    if (p == 2) {
        Int um = rat_mod(u, 8), wm = rat_mod(w, 8);
        auto eps = [](const Int& x) { return mod((x - 1) / 2, 2).get_si(); };
        auto omg = [](const Int& x) { return mod((x * x - 1) / 8, 2).get_si(); };
        return Half(eps(um) * eps(wm) + al * omg(wm) + be * omg(um));
    }
    int s = 0;
    if (al % 2 && be % 2 && mod(p, 4) == 3) s ^= 1;
    if (be % 2 && legendre(rat_mod(u, p), p) == -1) s ^= 1;
    if (al % 2 && legendre(rat_mod(w, p), p) == -1) s ^= 1;
    return Half(s);
}

// ---------------------------------------------------------------------------
// quadratic fields Q(sqrt d), elements a + b sqrt d
// ---------------------------------------------------------------------------

struct QElem {
    Rat a = 0, b = 0;
    QElem() = default;
    QElem(const Rat& x) : a(x) {}
    QElem(const Rat& x, const Rat& y) : a(x), b(y) {}
    bool is_zero() const { return a == 0 && b == 0; }
    bool is_rational() const { return b == 0; }
    std::string to_string() const
    {
        if (b == 0) return a.get_str();
        return a.get_str() + (b < 0 ? " - " : " + ") + Rat(abs(b)).get_str() + "*sqrt(d)";
    }
    friend bool operator==(const QElem& x, const QElem& y) { return x.a == y.a && x.b == y.b; }
};

struct QuadField {
    Int d = 1;  // squarefree; 1 means Q itself

    QElem add(const QElem& x, const QElem& y) const { return {x.a + y.a, x.b + y.b}; }
    QElem sub(const QElem& x, const QElem& y) const { return {x.a - y.a, x.b - y.b}; }
    QElem neg(const QElem& x) const { return {-x.a, -x.b}; }
    QElem mul(const QElem& x, const QElem& y) const
    {
        return {x.a * y.a + Rat(d) * x.b * y.b, x.a * y.b + x.b * y.a};
    }
    Rat norm(const QElem& x) const { return x.a * x.a - Rat(d) * x.b * x.b; }
    QElem conj(const QElem& x) const { return {x.a, -x.b}; }
    QElem inv(const QElem& x) const
    {
        Rat n = norm(x);
        if (n == 0) throw DomainError("inverse of zero in quadratic field");
        return {x.a / n, -x.b / n};
    }
    QElem div(const QElem& x, const QElem& y) const { return mul(x, inv(y)); }
    QElem pow(QElem x, long e) const
    {
        if (e < 0) {
            x = inv(x);
            e = -e;
        }
        QElem r(1);
        while (e) {
            if (e & 1) r = mul(r, x);
            x = mul(x, x);
            e >>= 1;
        }
        return r;
    }
};

// k(T) = Q[T]/(g) for a monic irreducible quadratic g: theta in the sqrt basis
struct QuadEmbedding {
    QuadField K;
    Rat r;  // theta = (-c1 + r sqrt d) / 2

    explicit QuadEmbedding(const Poly& g0)
    {
        Poly g = g0.monic();
        if (g.degree() != 2) throw DomainError("quadratic embedding needs a degree-2 modulus");
        Rat D = g[1] * g[1] - 4 * g[0];
        K.d = squarefree_kernel(D);
        if (K.d == 1) throw DomainError("modulus is reducible");
        Rat q = D / Rat(K.d);
        Int n, m;
        mpz_sqrt(n.get_mpz_t(), q.get_num().get_mpz_t());
        mpz_sqrt(m.get_mpz_t(), q.get_den().get_mpz_t());
        r = make_rat(n, m);
        c1 = g[1];
    }
    QElem theta() const { return {-c1 / 2, r / 2}; }
    QElem from_poly(const Poly& p) const
    {
        QElem th = theta(), acc(0);
        for (int i = p.degree(); i >= 0; --i) acc = K.add(K.mul(acc, th), QElem(p[i]));
        return acc;
    }
    QElem from(const NFElem& e) const { return from_poly(e.poly()); }

private:
    Rat c1;
};

enum class Splitting { split, inert, ramified };

inline const char* to_string(Splitting s)
{
    switch (s) {
    case Splitting::split: return "split";
    case Splitting::inert: return "inert";
    default: return "ramified";
    }
}

// a completion of Q(sqrt d) at a place w above base; d == 1 is Q_v itself
struct LocalField {
    Place base;
    Int d = 1;
    Splitting splitting = Splitting::split;
    int sigma = 1;        // choice of embedding at split / real places
    bool complex = false;  // d < 0 at the real place

    static LocalField rational(const Place& v) { return {v}; }
    bool is_base() const { return d == 1; }
    bool via_embedding() const { return d == 1 || splitting == Splitting::split; }
    int local_degree() const { return (via_embedding() && !complex) ? 1 : 2; }
    std::string to_string() const
    {
        std::string s = base.to_string();
        if (d == 1) return s;
        if (complex) return s + "/C";
        if (splitting == Splitting::split) return s + (sigma > 0 ? "/+" : "/-");
        return s + "/" + dp4::to_string(splitting);
    }
};
using LocalQuadExt = LocalField;

inline Splitting splitting_at(const Int& d, const Int& p)
{
    if (p == 2) {
        Int m = mod(d, 8);
        if (m == 1) return Splitting::split;
        if (m == 5) return Splitting::inert;
        return Splitting::ramified;
    }
    if (mod(d, p) == 0) return Splitting::ramified;
    return legendre(mod(d, p), p) == 1 ? Splitting::split : Splitting::inert;
}

inline std::vector<LocalField> places_above(const Int& d, const Place& v)
{
    if (d == 1) return {LocalField::rational(v)};
    if (v.real) {
        if (d < 0) return {LocalField{v, d, Splitting::inert, 1, true}};
        return {LocalField{v, d, Splitting::split, 1}, LocalField{v, d, Splitting::split, -1}};
    }
    Splitting s = splitting_at(d, v.p);
    if (s == Splitting::split) return {LocalField{v, d, s, 1}, LocalField{v, d, s, -1}};
    return {LocalField{v, d, s, 1}};
}

namespace detail {

// sqrt of d in Z_p modulo p^N; canonical branch: smallest residue mod p (odd), = 1 mod 4 (p = 2)
inline Int padic_sqrt(const Int& d, const Int& p, int N)
{
    Int pN = ipow(p, N);
    if (p == 2) {
        if (mod(d, 8) != 1) throw DomainError("not a 2-adic unit square");
        // r^2 = d mod 2^{k+1}  ->  mod 2^{k+2}
        Int r = 1;
        for (int k = 2; k < N; ++k)
            if (mod(r * r - d, ipow(Int(2), k + 2)) != 0) r += ipow(Int(2), k);
        r = mod(r, pN);
        if (mod(r, 4) != 1) r = mod(-r, pN);
        return r;
    }
    Int dm = mod(d, p), r0 = -1;
    for (Int x = 1; x < p; ++x)
        if (mod(x * x - dm, p) == 0) {
            r0 = x;
            break;
        }
    if (r0 < 0) throw DomainError("not a p-adic square");
    Int r = r0, m = p;
    while (m < pN) {
        m = std::min(Int(m * m), pN);
        r = mod(r - (r * r - d) * invmod(mod(2 * r, m), m), m);
    }
    return r;
}

}  // namespace detail

// a rational in the same Q_p square class as the image of x at a split place (or Q_v itself)
inline Rat split_image(const QElem& x, const LocalField& w)
{
    if (x.is_zero()) throw DomainError("image of zero");
    if (x.b == 0 || w.d == 1) return x.a;
    const Int& p = w.base.p;
    int vb = vp(x.b, p);
    for (int N = 24;; N *= 2) {
        Int delta = detail::padic_sqrt(w.d, p, N);
        Rat xn = x.a + Rat(w.sigma) * x.b * Rat(delta);
        if (xn != 0 && vp(xn, p) + 3 < vb + N - 1) return xn;
        if (N > 1 << 16) throw InconsistencyError("split image precision runaway");
    }
}

// sign of a + b sqrt d (d > 0 not a square)
inline int real_sign(const QElem& x, const Int& d, int sigma)
{
    Rat a = x.a, b = x.b * sigma;
    if (b == 0) return sgn(a);
    if (a == 0) return sgn(b);
    if (sgn(a) == sgn(b)) return sgn(a);
    // opposite signs: compare a^2 with b^2 d
    Rat diff = a * a - b * b * Rat(d);
    return diff > 0 ? sgn(a) : sgn(b);
}

namespace detail {

// data for a non-split place above 2
struct Dyadic {
    Int d;
    bool inert = false;
    int e = 1, f = 1;
    QElem pi;
    QuadField K;
    std::vector<QElem> unit_squares;  // squares of units mod 8, integral lifts
    std::vector<QElem> basis;         // F_2-basis of K^x / K^x2
    std::array<std::array<int, 4>, 4> pair{};

    int val(const QElem& x) const { return vp(K.norm(x), Int(2)) / f; }

    bool is_square(const QElem& x) const
    {
        if (x.is_zero()) throw DomainError("square test of zero");
        int v = val(x);
        if (v % 2) return false;
        QElem u = K.div(x, K.pow(pi, v));
        for (auto& s : unit_squares) {
            QElem z = K.sub(u, s);
            if (z.is_zero() || val(z) >= 2 * e + 1) return true;
        }
        return false;
    }

    std::array<int, 4> coords(const QElem& x) const
    {
        for (int m = 0; m < 16; ++m) {
            QElem c(1);
            for (int i = 0; i < 4; ++i)
                if (m >> i & 1) c = K.mul(c, basis[i]);
            if (is_square(K.div(x, c))) return {m & 1, m >> 1 & 1, m >> 2 & 1, m >> 3 & 1};
        }
        throw InconsistencyError("dyadic square class basis does not span");
    }

    int hilbert(const QElem& x, const QElem& y) const
    {
        auto cx = coords(x), cy = coords(y);
        int s = 0;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) s ^= cx[i] & cy[j] & pair[i][j];
        return s;
    }

    explicit Dyadic(const Int& dd) : d(dd)
    {
        K.d = d;
        Int m8 = mod(d, 8);
        if (m8 == 1) throw DomainError("2 splits");
        inert = (m8 == 5);
        e = inert ? 1 : 2;
        f = inert ? 2 : 1;
        QElem gamma = (mod(d, 4) == 1) ? QElem(Rat(1, 2), Rat(1, 2)) : QElem(0, 1);
        if (inert)
            pi = QElem(2);
        else if (mod(d, 4) == 3)
            pi = QElem(1, 1);
        else
            pi = QElem(0, 1);
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                QElem y = K.add(QElem(i), K.mul(QElem(j), gamma));
                if (y.is_zero() || val(y) != 0) continue;
                QElem s = K.mul(y, y);
                bool dup = false;
                for (auto& t : unit_squares) {
                    QElem z = K.sub(s, t);
                    if (z.is_zero() || val(z) >= 3 * e) dup = true;
                }
                if (!dup) unit_squares.push_back(s);
            }
        auto independent = [&](const QElem& c) {
            int n = (int)basis.size();
            for (int m = 0; m < (1 << n); ++m) {
                QElem prod = c;
                for (int i = 0; i < n; ++i)
                    if (m >> i & 1) prod = K.mul(prod, basis[i]);
                if (is_square(prod)) return false;
            }
            return true;
        };
        for (int q : {-1, 2, 5, -2, 10, -5, -10})
            if (basis.size() < 2 && independent(QElem(q))) basis.push_back(QElem(q));
        std::vector<QElem> cands = {gamma, K.add(gamma, QElem(1)), pi, K.add(QElem(1), K.mul(QElem(2), gamma)),
                                    K.add(gamma, QElem(2)), K.add(gamma, QElem(3))};
        for (auto& c : cands)
            if (basis.size() < 3 && independent(c)) basis.push_back(c);
        QElem r1 = basis[2];
        Rat qsel = 0;
        for (Rat q : {Rat(1), Rat(-1), Rat(2), Rat(-2), Rat(4), Rat(-4), Rat(1, 2), Rat(-1, 2), Rat(8), Rat(3),
                      Rat(5), Rat(1, 4), Rat(16), Rat(-8)}) {
            QElem r2 = K.sub(QElem(1), K.mul(QElem(q), r1));
            if (r2.is_zero()) continue;
            if (independent(r2)) {
                basis.push_back(r2);
                qsel = q;
                break;
            }
        }
        if (basis.size() != 4) throw InconsistencyError("failed to build dyadic square class basis");
        Place two = Place::prime(2);
        auto proj = [&](const Rat& a, const QElem& y) { return dp4::hilbert(a, K.norm(y), two).v; };
        // rational pairs vanish: (a, b)_K = (a, b^2)_Q2
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) pair[i][j] = 0;
        for (int i = 0; i < 2; ++i)
            for (int j = 2; j < 4; ++j) pair[i][j] = pair[j][i] = proj(basis[i].a, basis[j]);
        pair[2][2] = proj(Rat(-1), basis[2]);
        pair[3][3] = proj(Rat(-1), basis[3]);
        // Steinberg: (q r1, 1 - q r1) = 0, so (r1, r2) = (q, r2)
        pair[2][3] = pair[3][2] = proj(qsel, basis[3]);
    }
};

inline const Dyadic& dyadic(const Int& d)
{
    static std::mutex mu;
    static std::map<Int, std::unique_ptr<Dyadic>> cache;
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(d);
    if (it == cache.end()) it = cache.emplace(d, std::make_unique<Dyadic>(d)).first;
    return *it->second;
}

}  // namespace detail

inline int local_valuation(const QElem& x, const LocalField& w)
{
    if (w.base.real) throw DomainError("valuation at an archimedean place");
    if (w.via_embedding()) return vp(split_image(x, w), w.base.p);
    QuadField K{w.d};
    int f = (w.splitting == Splitting::inert) ? 2 : 1;
    return vp(K.norm(x), w.base.p) / f;
}

inline bool is_local_square(const QElem& x, const LocalField& w)
{
    if (x.is_zero()) throw DomainError("local square test of zero");
    if (w.complex) return true;
    if (w.base.real) {
        if (w.d == 1) return x.a > 0;
        return real_sign(x, w.d, w.sigma) > 0;
    }
    if (w.via_embedding()) return is_local_square(split_image(x, w), w.base);
    const Int& p = w.base.p;
    QuadField K{w.d};
    if (p == 2) return detail::dyadic(w.d).is_square(x);
    Rat n = K.norm(x);
    if (w.splitting == Splitting::inert) {
        int v = vp(n, p) / 2;
        if (v % 2) return false;
        return legendre(rat_mod(n / rpow(Rat(p), 2 * v), p), p) == 1;
    }
    int v = vp(n, p);
    if (v % 2) return false;
    QElem x0 = K.div(x, QElem(rpow(Rat(w.d), v / 2)));
    return legendre(rat_mod(x0.a, p), p) == 1;
}

inline Half hilbert_ext(const QElem& x, const QElem& y, const LocalField& w)
{
    if (x.is_zero() || y.is_zero()) throw DomainError("Hilbert symbol of zero");
    if (w.complex) return Half(0);
    if (w.base.real) {
        if (w.d == 1) return hilbert(x.a, y.a, w.base);
        return Half(real_sign(x, w.d, w.sigma) < 0 && real_sign(y, w.d, w.sigma) < 0);
    }
    if (w.via_embedding()) return hilbert(split_image(x, w), split_image(y, w), w.base);
    const Int& p = w.base.p;
    if (p == 2) return Half(detail::dyadic(w.d).hilbert(x, y));
    QuadField K{w.d};
    Rat nx = K.norm(x), ny = K.norm(y);
    if (w.splitting == Splitting::inert) {
        int al = vp(nx, p) / 2, be = vp(ny, p) / 2;
        int s = 0;
        if (be % 2 && legendre(rat_mod(nx / rpow(Rat(p), 2 * al), p), p) == -1) s ^= 1;
        if (al % 2 && legendre(rat_mod(ny / rpow(Rat(p), 2 * be), p), p) == -1) s ^= 1;
        return Half(s);
    }
    int al = vp(nx, p), be = vp(ny, p);
    QElem pi(0, 1);
    QElem x0 = K.div(x, K.pow(pi, al)), y0 = K.div(y, K.pow(pi, be));
    int s = 0;
    if (al % 2 && be % 2 && mod(p, 4) == 3) s ^= 1;
    if (be % 2 && legendre(rat_mod(x0.a, p), p) == -1) s ^= 1;
    if (al % 2 && legendre(rat_mod(y0.a, p), p) == -1) s ^= 1;
    return Half(s);
}

// ---------------------------------------------------------------------------
// quadratic forms over local fields
// ---------------------------------------------------------------------------

inline Half hasse_invariant(const std::vector<QElem>& a, const LocalField& w)
{
    Half s;
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = i + 1; j < a.size(); ++j) s += hilbert_ext(a[i], a[j], w);
    return s;
}

inline QElem product(const std::vector<QElem>& a, const QuadField& K)
{
    QElem r(1);
    for (auto& x : a) r = K.mul(r, x);
    return r;
}

inline bool isotropy(const std::vector<QElem>& a, const LocalField& w)
{
    for (auto& x : a)
        if (x.is_zero()) throw DomainError("isotropy: zero diagonal entry");
    size_t n = a.size();
    if (n <= 1) return false;
    if (w.complex) return true;
    if (w.base.real) {
        bool pos = false, neg = false;
        for (auto& x : a) (is_local_square(x, w) ? pos : neg) = true;
        return pos && neg;
    }
    QuadField K{w.d};
    QElem det = product(a, K);
    if (n == 2) return is_local_square(K.neg(det), w);
    Half eps = hasse_invariant(a, w);
    if (n == 3) return hilbert_ext(QElem(-1), K.neg(det), w) == eps;
    if (n == 4) return !is_local_square(det, w) || eps == hilbert_ext(QElem(-1), QElem(-1), w);
    return true;
}

inline bool isotropy(const std::vector<Rat>& a, const Place& v)
{
    std::vector<QElem> q(a.begin(), a.end());
    return isotropy(q, LocalField::rational(v));
}

// formal sums of quaternion symbols over Q(sqrt d)
struct SymbolList {
    Int d = 1;
    std::vector<std::pair<QElem, QElem>> symbols;

    Half invariant(const LocalField& w) const
    {
        if (w.d != d) throw DomainError("symbol list evaluated over the wrong field");
        Half s;
        for (auto& [x, y] : symbols) s += hilbert_ext(x, y, w);
        return s;
    }
    Half invariant(const Place& v) const { return invariant(LocalField::rational(v)); }
    void append(const SymbolList& o)
    {
        for (auto& s : o.symbols) symbols.push_back(s);
    }
};

// Clif(<a1..a4>) = sum_{i<j} (ai, aj) + (-1, -det)
inline SymbolList clifford_rank4(const std::vector<QElem>& a, const Int& d = 1)
{
    if (a.size() != 4) throw DomainError("clifford_rank4 needs four entries");
    QuadField K{d};
    SymbolList s{d, {}};
    for (auto& x : a)
        if (x.is_zero()) throw DomainError("clifford_rank4: zero entry");
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = i + 1; j < 4; ++j) s.symbols.push_back({a[i], a[j]});
    s.symbols.push_back({QElem(-1), K.neg(product(a, K))});
    return s;
}

inline SymbolList clifford_rank4(const std::vector<Rat>& a)
{
    return clifford_rank4(std::vector<QElem>(a.begin(), a.end()));
}

// Clif_0 of a nondegenerate diagonal rank-5 form: Clif(-a1 <a2..a5>)
inline SymbolList clifford_even_rank5_diag(const std::vector<QElem>& a, const Int& d = 1)
{
    if (a.size() != 5) throw DomainError("clifford_even_rank5 needs five entries");
    QuadField K{d};
    std::vector<QElem> b;
    for (size_t i = 1; i < 5; ++i) b.push_back(K.mul(K.neg(a[0]), a[i]));
    return clifford_rank4(b, d);
}

}  // namespace dp4
