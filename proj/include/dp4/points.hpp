#pragma once

#include <array>
#include <atomic>
#include <thread>

#include "dp4/obstruction.hpp"

namespace dp4 {

// a point of X over Q(sqrt d); d = 1 for rational points
struct QuadraticPoint {
    Int d = 1;
    std::array<QElem, 5> x;

    QuadField field() const { return QuadField{d}; }
    bool rational() const
    {
        for (auto& c : x)
            if (!c.is_rational()) return false;
        return true;
    }
    QuadraticPoint conjugate() const
    {
        QuadraticPoint c = *this;
        for (auto& e : c.x) e.b = -e.b;
        return c;
    }
    std::string to_string() const
    {
        std::string s = "(";
        for (int i = 0; i < 5; ++i) {
            if (i) s += " : ";
            s += x[i].b == 0 ? x[i].a.get_str() : x[i].to_string();
        }
        return s + ")";
    }
};

// one coordinate: "a", "r", "b*r", "a+b*r", "a-br" with r = sqrt(d), a and b rational
inline QElem parse_quad_coord(std::string s)
{
    s.erase(std::remove_if(s.begin(), s.end(), ::isspace), s.end());
    if (s.empty()) throw ParseError("empty coordinate");
    if (s.back() != 'r') return QElem(parse_rat(s));
    std::string body = s.substr(0, s.size() - 1);
    if (!body.empty() && body.back() == '*') body.pop_back();
    size_t cut = std::string::npos;
    for (size_t i = body.size(); i-- > 1;)
        if ((body[i] == '+' || body[i] == '-') && body[i - 1] != '/' && body[i - 1] != 'e') {
            cut = i;
            break;
        }
    Rat a = 0;
    std::string bs = body;
    if (cut != std::string::npos) {
        a = parse_rat(body.substr(0, cut));
        bs = body.substr(cut);
    }
    Rat b;
    if (bs.empty() || bs == "+") b = 1;
    else if (bs == "-") b = -1;
    else b = parse_rat(bs[0] == '+' ? bs.substr(1) : bs);
    return {a, b};
}

inline QuadraticPoint parse_quadratic_point(const Int& d, const std::vector<std::string>& coords)
{
    if (coords.size() != 5) throw ParseError("a point needs 5 coordinates");
    if (d == 0) throw ParseError("d must be nonzero");
    QuadraticPoint pt;
    pt.d = squarefree_kernel(Rat(d));
    Rat scale = Rat(d) / Rat(pt.d);  // sqrt(d) = sqrt(scale) sqrt(d0)
    Int n, m;
    mpz_sqrt(n.get_mpz_t(), scale.get_num().get_mpz_t());
    mpz_sqrt(m.get_mpz_t(), scale.get_den().get_mpz_t());
    Rat root = make_rat(n, m);
    bool any = false;
    for (int i = 0; i < 5; ++i) {
        QElem c = parse_quad_coord(coords[i]);
        if (pt.d == 1) c = QElem(c.a + c.b * root);
        else c.b *= root;
        pt.x[i] = c;
        if (!c.is_zero()) any = true;
    }
    if (!any) throw ParseError("all coordinates are zero");
    return pt;
}

inline QElem eval_form(const QuadraticForm5& q, const QuadraticPoint& pt)
{
    QuadField K = pt.field();
    QElem s;
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j) {
            const Rat& c = q.coeff(i, j);
            if (c != 0) s = K.add(s, K.mul(QElem(c), K.mul(pt.x[i], pt.x[j])));
        }
    return s;
}

// B(x, y) = (q(x + y) - q(x) - q(y)) / 2
inline QElem polar(const QuadraticForm5& q, const QuadraticPoint& x, const QuadraticPoint& y)
{
    QuadField K = x.field();
    QElem s;
    for (int i = 0; i < 5; ++i)
        for (int j = i; j < 5; ++j) {
            const Rat& c = q.coeff(i, j);
            if (c == 0) continue;
            QElem m = i == j ? K.mul(x.x[i], y.x[i])
                             : K.mul(QElem(Rat(1, 2)), K.add(K.mul(x.x[i], y.x[j]), K.mul(x.x[j], y.x[i])));
            s = K.add(s, K.mul(QElem(c), m));
        }
    return s;
}

inline bool verify_point(const Pencil& p, const QuadraticPoint& pt)
{
    bool any = false;
    for (auto& c : pt.x)
        if (!c.is_zero()) any = true;
    if (!any) return false;
    // the conjugate vanishes too, since the forms are rational
    return eval_form(p.Q0, pt).is_zero() && eval_form(p.Qinf, pt).is_zero();
}

struct LineInXError : DomainError {
    LineInXError() : DomainError("the line through the pair lies in X") {}
};

// t = -B0(x, x') / Binf(x, x') in normalized coordinates; nullopt is infinity
inline ProjPoint pair_to_base_point(const Pencil& p, const QuadraticPoint& x, const QuadraticPoint& y)
{
    if (x.d != y.d) throw DomainError("pair over different fields");
    QElem b0 = polar(p.Q0, x, y), bi = polar(p.Qinf, x, y);
    if (b0.is_zero() && bi.is_zero()) throw LineInXError();
    if (bi.is_zero()) return std::nullopt;
    QElem t = x.field().div(x.field().neg(b0), bi);
    if (!t.is_rational()) throw InconsistencyError("base point of a conjugate pair is not rational");
    return t.a;
}

// the closed point of G over Q attached to a quadratic point and its conjugate
inline ProjPoint base_point(const Pencil& p, const QuadraticPoint& x)
{
    if (x.rational()) throw DomainError("a rational point has no conjugate pair");
    return pair_to_base_point(p, x, x.conjugate());
}

// inv_v beta_T at the pair, straight from the coordinates: sum over components of
// (eps_T, -B_{Q_theta}(x, x') / Binf(x, x')) with B_{Q_theta} = B0 + theta Binf
inline Half eval_at_pair(const Pencil& p, const BrauerGenerator& g, const QuadraticPoint& x, const Place& v)
{
    QuadraticPoint y = x.conjugate();
    QElem b0 = polar(p.Q0, x, y), bi = polar(p.Qinf, x, y);
    if (b0.is_zero() && bi.is_zero()) throw LineInXError();
    if (bi.is_zero()) return Half();
    // both bilinear values are rational for a conjugate pair
    if (!b0.is_rational() || !bi.is_rational()) throw InconsistencyError("conjugate pair with irrational B values");
    Half s;
    for (auto& c : g.components) {
        QElem bt{b0.a + c.theta.a * bi.a, c.theta.b * bi.a};
        QElem r{-bt.a / bi.a, -bt.b / bi.a};
        for (auto& w : places_over(g, v)) s += hilbert_ext(c.eps, r, w);
    }
    return s;
}

// ---------------------------------------------------------------------------
// box search
// ---------------------------------------------------------------------------

namespace detail {

// projective representative: first nonzero coordinate 1, then the smaller of x and its conjugate
inline QuadraticPoint canonical(const QuadraticPoint& pt)
{
    auto norm1 = [](QuadraticPoint q) {
        QuadField K = q.field();
        for (auto& c : q.x)
            if (!c.is_zero()) {
                QElem inv = K.inv(c);
                for (auto& e : q.x) e = K.mul(e, inv);
                break;
            }
        return q;
    };
    QuadraticPoint a = norm1(pt), b = norm1(pt.conjugate());
    auto key = [](const QuadraticPoint& q) {
        std::vector<Rat> k;
        for (auto& c : q.x) {
            k.push_back(c.a);
            k.push_back(c.b);
        }
        return k;
    };
    return key(b) < key(a) ? b : a;
}

inline bool point_less(const QuadraticPoint& a, const QuadraticPoint& b)
{
    for (int i = 0; i < 5; ++i) {
        if (a.x[i].a != b.x[i].a) return a.x[i].a < b.x[i].a;
        if (a.x[i].b != b.x[i].b) return a.x[i].b < b.x[i].b;
    }
    return false;
}

inline bool point_equal(const QuadraticPoint& a, const QuadraticPoint& b)
{
    return !point_less(a, b) && !point_less(b, a);
}

}  // namespace detail

// every point with coordinates a + b sqrt(d), |a|, |b| <= bound (b = 0 when d is a square)
inline std::vector<QuadraticPoint> search_points(const Pencil& p, const Rat& d_in, int bound, int threads = 1)
{
    if (bound < 1) throw DomainError("height bound must be at least 1");
    if (d_in == 0) throw DomainError("d must be nonzero");
    Int d = squarefree_kernel(d_in);
    bool split = d == 1;
    using detail::i64;
    // integral forms
    std::array<std::array<i64, 5>, 5> F[2];
    for (int f = 0; f < 2; ++f) {
        const QuadraticForm5& q = f ? p.Qinf : p.Q0;
        Int den = 1;
        for (auto& c : q.c) den = lcm(den, c.get_den());
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) F[f][i][j] = 0;
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                Rat c = q.coeff(i, j) * Rat(den);
                if (!c.get_num().fits_slong_p()) throw DomainError("form coefficients too large for the box search");
                F[f][i][j] = c.get_num().get_si();
            }
    }
    if (!d.fits_slong_p()) throw DomainError("d too large for the box search");
    const i64 D = d.get_si();
    std::vector<std::pair<i64, i64>> vals;  // (a, b)
    for (int a = -bound; a <= bound; ++a)
        for (int b = split ? 0 : -bound; b <= (split ? 0 : bound); ++b) vals.push_back({a, b});
    const int V = (int)vals.size();
    auto mul = [&](std::pair<__int128, __int128> x, std::pair<__int128, __int128> y) {
        return std::pair<__int128, __int128>{x.first * y.first + (__int128)D * x.second * y.second,
                                             x.first * y.second + x.second * y.first};
    };

    std::vector<std::vector<QuadraticPoint>> found(V);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i0; (i0 = next++) < V;) {
            std::array<int, 5> idx{i0, 0, 0, 0, 0};
            for (;;) {
                std::array<std::pair<__int128, __int128>, 5> x;
                bool zero = true;
                for (int k = 0; k < 5; ++k) {
                    x[k] = {vals[idx[k]].first, vals[idx[k]].second};
                    if (x[k].first || x[k].second) zero = false;
                }
                if (!zero) {
                    bool ok = true;
                    for (int f = 0; f < 2 && ok; ++f) {
                        std::pair<__int128, __int128> s{0, 0};
                        for (int i = 0; i < 5; ++i)
                            for (int j = i; j < 5; ++j)
                                if (F[f][i][j]) {
                                    auto m = mul(x[i], x[j]);
                                    s.first += F[f][i][j] * m.first;
                                    s.second += F[f][i][j] * m.second;
                                }
                        ok = s.first == 0 && s.second == 0;
                    }
                    if (ok) {
                        QuadraticPoint pt;
                        pt.d = d;
                        for (int k = 0; k < 5; ++k)
                            pt.x[k] = QElem(Rat((long)vals[idx[k]].first), Rat((long)vals[idx[k]].second));
                        found[i0].push_back(detail::canonical(pt));
                    }
                }
                int k = 4;
                while (k >= 1 && ++idx[k] == V) idx[k--] = 0;
                if (k < 1) break;
            }
        }
    };
    int nt = std::max(1, threads);
    std::vector<std::thread> pool;
    for (int i = 1; i < nt; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    std::vector<QuadraticPoint> out;
    for (auto& f : found) out.insert(out.end(), f.begin(), f.end());
    std::sort(out.begin(), out.end(), detail::point_less);
    out.erase(std::unique(out.begin(), out.end(), detail::point_equal), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// consistency checks on a quadratic point
// ---------------------------------------------------------------------------

struct PairCheck {
    ProjPoint t;
    bool fiber_solvable_everywhere = true;  // at the places checked
    bool eval_routes_agree = true;          // eval_at_t against eval_at_pair
    bool reciprocity = true;                // sum over places of inv_v beta_T(t) is 0
    bool sqrt_eps_rule = true;              // beta_T = inv_v C_T where the rule applies
    bool sqrt_eps_applies = false;
    std::vector<Place> places;
};

// eps_T is a square in k(T) tensor Q(sqrt d)
inline bool eps_square_after(const BrauerGenerator& g, const Int& d)
{
    Rat e = g.eps_rational;
    if (is_square_rat(e) || is_square_rat(e * Rat(d))) return true;
    return !g.reducible() && (is_square_rat(e * Rat(g.d)) || is_square_rat(e * Rat(g.d) * Rat(d)));
}

inline PairCheck check_pair(const Pencil& p, const SingularLocus& L, const BrauerGenerator& g, const QuadraticPoint& x)
{
    PairCheck c;
    c.t = base_point(p, x);
    std::set<Place> places = {Place::infinite(), Place::prime(2)};
    for (auto& v : candidate_places(g)) places.insert(v);
    if (c.t) {
        for (auto& q : prime_divisors(*c.t)) places.insert(Place::prime(q));
        for (auto& comp : g.components) {
            Rat n = QuadField{g.d}.norm(QElem{*c.t - comp.theta.a, -comp.theta.b});
            if (n != 0)
                for (auto& q : prime_divisors(n)) places.insert(Place::prime(q));
        }
    }
    for (auto& q : prime_divisors(Rat(x.d))) places.insert(Place::prime(q));
    c.places.assign(places.begin(), places.end());
    // the rule needs eps_T nonsquare over k(T) and square after adjoining sqrt d
    c.sqrt_eps_applies = !x.rational() && !is_square_rat(g.eps_rational) &&
                         !(!g.reducible() && is_square_rat(g.eps_rational * Rat(g.d))) && eps_square_after(g, x.d);
    Half total;
    for (auto& v : c.places) {
        if (!fiber_solvable(p, L, c.t, v)) c.fiber_solvable_everywhere = false;
        if (in_support(g, c.t)) continue;
        Half e1 = eval_at_t(g, c.t, v), e2 = eval_at_pair(p, g, x, v);
        if (e1 != e2) c.eval_routes_agree = false;
        total += e1;
        if (c.sqrt_eps_applies && !eps_square_at(g, v) && e1 != clifford_invariant(g, v)) c.sqrt_eps_rule = false;
    }
    if (!in_support(g, c.t) && total.nonzero()) c.reciprocity = false;
    return c;
}

}  // namespace dp4
