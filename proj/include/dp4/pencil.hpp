#pragma once

#include <array>
#include <sstream>

#include "dp4/numberfield.hpp"

namespace dp4 {

// quadratic form in x0..x4, coefficients in the order x0^2, x0x1, .., x0x4, x1^2, .., x4^2
struct QuadraticForm5 {
    std::array<Rat, 15> c{};

    static int index(int i, int j)
    {
        if (i > j) std::swap(i, j);
        static const int start[5] = {0, 5, 9, 12, 14};
        return start[i] + (j - i);
    }

    static QuadraticForm5 from_coeffs(const std::vector<Rat>& v)
    {
        if (v.size() != 15) throw ParseError("quadratic form needs 15 coefficients");
        QuadraticForm5 q;
        for (int i = 0; i < 15; ++i) q.c[i] = v[i];
        return q;
    }

    static QuadraticForm5 from_gram(const Matrix<Rat>& m)
    {
        if (m.size() != 5) throw ParseError("Gram matrix must be 5x5");
        for (auto& row : m)
            if (row.size() != 5) throw ParseError("Gram matrix must be 5x5");
        QuadraticForm5 q;
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                if (m[i][j] != m[j][i]) throw ParseError("Gram matrix is not symmetric");
                q.c[index(i, j)] = i == j ? m[i][i] : Rat(2 * m[i][j]);
            }
        return q;
    }

    // convenience: diagonal form
    static QuadraticForm5 diagonal(const std::vector<Rat>& a)
    {
        QuadraticForm5 q;
        for (int i = 0; i < 5; ++i) q.c[index(i, i)] = a.at(i);
        return q;
    }

    Rat& coeff(int i, int j) { return c[index(i, j)]; }
    const Rat& coeff(int i, int j) const { return c[index(i, j)]; }

    Matrix<Rat> gram() const
    {
        Matrix<Rat> m = make_matrix<Rat>(5, 5, Rat(0));
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                if (i == j)
                    m[i][i] = coeff(i, i);
                else
                    m[i][j] = m[j][i] = coeff(i, j) / 2;
            }
        return m;
    }

    bool is_zero() const
    {
        for (auto& x : c)
            if (x != 0) return false;
        return true;
    }

    template <class F>
    F eval(const std::vector<F>& x, const F& zero) const
    {
        F s = zero;
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j)
                if (coeff(i, j) != 0) s = s + x[i] * x[j] * coeff(i, j);
        return s;
    }
    Rat eval(const std::vector<Rat>& x) const { return eval<Rat>(x, Rat(0)); }

    // x^T M y
    template <class F>
    F bilinear(const std::vector<F>& x, const std::vector<F>& y, const F& zero) const
    {
        F s = zero;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) {
                Rat m = i == j ? coeff(i, i) : Rat(coeff(i, j) / 2);
                if (m != 0) s = s + x[i] * y[j] * m;
            }
        return s;
    }

    // q(U x)
    QuadraticForm5 substitute(const Matrix<Rat>& U) const
    {
        Matrix<Rat> M = gram(), R = make_matrix<Rat>(5, 5, Rat(0));
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j)
                for (int a = 0; a < 5; ++a)
                    for (int b = 0; b < 5; ++b) R[i][j] += U[a][i] * M[a][b] * U[b][j];
        return from_gram(R);
    }

    friend QuadraticForm5 operator+(const QuadraticForm5& a, const QuadraticForm5& b)
    {
        QuadraticForm5 r;
        for (int i = 0; i < 15; ++i) r.c[i] = a.c[i] + b.c[i];
        return r;
    }
    friend QuadraticForm5 operator-(const QuadraticForm5& a, const QuadraticForm5& b)
    {
        QuadraticForm5 r;
        for (int i = 0; i < 15; ++i) r.c[i] = a.c[i] - b.c[i];
        return r;
    }
    friend QuadraticForm5 operator*(const Rat& s, const QuadraticForm5& a)
    {
        QuadraticForm5 r;
        for (int i = 0; i < 15; ++i) r.c[i] = s * a.c[i];
        return r;
    }
    friend bool operator==(const QuadraticForm5& a, const QuadraticForm5& b) { return a.c == b.c; }

    std::vector<std::string> coeff_strings() const
    {
        std::vector<std::string> s;
        for (auto& x : c) s.push_back(x.get_str());
        return s;
    }

    std::string to_string() const
    {
        std::ostringstream os;
        bool first = true;
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                Rat a = coeff(i, j);
                if (a == 0) continue;
                os << (a < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
                Rat m = abs(a);
                if (m != 1) os << m.get_str() << "*";
                if (i == j)
                    os << "x" << i << "^2";
                else
                    os << "x" << i << "*x" << j;
                first = false;
            }
        return first ? "0" : os.str();
    }
};

// det(M0 + T Minf), not normalized
inline Poly det_pencil(const Matrix<Rat>& M0, const Matrix<Rat>& Mi)
{
    std::vector<Rat> xs, ys;
    for (int k = 0; k <= 5; ++k) {
        Rat t = k;
        Matrix<Rat> m = M0;
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 5; ++j) m[i][j] += t * Mi[i][j];
        xs.push_back(t);
        ys.push_back(determinant(m, Rat(1)));
    }
    return interpolate(xs, ys);
}

// members Q0 + t Qinf; mobius A maps a member back to the input: the member at t is
// (A00 + t A01) Q0_in + (A10 + t A11) Qinf_in, with Qinf_in = Q1_in - Q0_in
struct Pencil {
    QuadraticForm5 Q0, Qinf;
    Matrix<Rat> mobius = {{1, 0}, {0, 1}};

    QuadraticForm5 member(const Rat& t) const { return Q0 + t * Qinf; }
    Matrix<Rat> gram_at(const Rat& t) const { return member(t).gram(); }
    Poly det_poly() const { return det_pencil(Q0.gram(), Qinf.gram()); }

    // input-coordinate parameter of the member at t; nullopt means the input's infinity
    std::optional<Rat> input_parameter(const Rat& t) const
    {
        Rat den = mobius[0][0] + t * mobius[0][1];
        if (den == 0) return std::nullopt;
        return Rat((mobius[1][0] + t * mobius[1][1]) / den);
    }
    bool normalized() const { return determinant(Qinf.gram(), Rat(1)) != 0; }
};

inline bool proportional(const QuadraticForm5& a, const QuadraticForm5& b)
{
    Matrix<Rat> m = {std::vector<Rat>(a.c.begin(), a.c.end()), std::vector<Rat>(b.c.begin(), b.c.end())};
    return rank(m, Rat(1)) < 2;
}

inline Pencil raw_pencil(const QuadraticForm5& Q0, const QuadraticForm5& Q1)
{
    return {Q0, Q1 - Q0, {{1, 0}, {0, 1}}};
}

// move infinity off the singular locus: Q0' = Qinf, Qinf' = Q0 + a Qinf for the first
// a in 0, 1, -1, 2, -2, .. giving a nonsingular Qinf'
inline Pencil normalize(const QuadraticForm5& Q0, const QuadraticForm5& Q1)
{
    if (proportional(Q0, Q1)) throw DomainError("degenerate pencil: the two forms are proportional");
    Pencil p = raw_pencil(Q0, Q1);
    if (p.normalized()) return p;
    Poly f = p.det_poly();
    if (f.is_zero()) throw DomainError("degenerate pencil: every member is singular");
    for (long a = 0;; a = (a <= 0 ? 1 - a : -a)) {
        if (f.eval(Rat(a)) == 0) continue;
        Pencil n{p.Qinf, p.Q0 + Rat(a) * p.Qinf, {{0, 1}, {1, Rat(a)}}};
        if (!n.normalized()) throw InconsistencyError("normalization produced a singular Qinf");
        return n;
    }
}

// orthogonal basis for a symmetric matrix over a field; zero vectors of the radical omitted
template <class F>
struct Diagonalization {
    std::vector<F> diag;
    std::vector<std::vector<F>> basis;  // basis[i] has q(basis[i]) = diag[i]
};

template <class F>
Diagonalization<F> diagonalize(const Matrix<F>& M, const F& one)
{
    size_t n = M.size();
    F zero = one - one;
    auto B = [&](const std::vector<F>& x, const std::vector<F>& y) {
        F s = zero;
        for (size_t i = 0; i < n; ++i) {
            if (is_zero(x[i])) continue;
            for (size_t j = 0; j < n; ++j)
                if (!is_zero(y[j]) && !is_zero(M[i][j])) s = s + x[i] * M[i][j] * y[j];
        }
        return s;
    };
    // working basis of the orthogonal complement of the vectors chosen so far
    std::vector<std::vector<F>> W;
    for (size_t i = 0; i < n; ++i) {
        std::vector<F> e(n, zero);
        e[i] = one;
        W.push_back(e);
    }
    Diagonalization<F> out;
    while (!W.empty()) {
        std::vector<F> v;
        bool found = false;
        for (auto& w : W)
            if (!is_zero(B(w, w))) {
                v = w;
                found = true;
                break;
            }
        if (!found) {
            for (size_t i = 0; i < W.size() && !found; ++i)
                for (size_t j = i + 1; j < W.size() && !found; ++j)
                    if (!is_zero(B(W[i], W[j]))) {
                        v = W[i];
                        for (size_t k = 0; k < n; ++k) v[k] = v[k] + W[j][k];
                        found = true;
                    }
        }
        if (!found) break;  // the rest is radical
        F qv = B(v, v);
        out.diag.push_back(qv);
        out.basis.push_back(v);
        // project W onto v-perp, keep an independent subset
        std::vector<std::vector<F>> next;
        for (auto& w : W) {
            F c = B(w, v) / qv;
            std::vector<F> u = w;
            for (size_t k = 0; k < n; ++k) u[k] = u[k] - c * v[k];
            next.push_back(u);
            if (rank(next, one) < next.size()) next.pop_back();
        }
        W = next;
    }
    return out;
}

struct SingularPoint {
    Poly factor;                  // monic irreducible factor of f
    FieldPtr field;               // k(s) = Q[T]/(factor)
    NFElem theta;                 // s in k(s)
    std::vector<NFElem> vertex;   // spans the radical of Q_s, pivot entry 1
    int pivot = 0;                // vertex[pivot] == 1
    NFElem eps;                   // det of the Gram of Q_s on the coordinate complement
    NFElem qinf_at_vertex;        // Qinf(v_s)

    int degree() const { return factor.degree(); }
    bool rational() const { return degree() == 1; }
    Rat rational_root() const { return -factor[0]; }
    // Gram of Q_s restricted to span{e_k : k != pivot}
    Matrix<NFElem> complement_gram(const Pencil& p) const;
    // Q_s on the complement, diagonalized over k(s)
    std::vector<NFElem> complement_diagonal(const Pencil& p) const
    {
        return diagonalize(complement_gram(p), NFElem(field, Rat(1))).diag;
    }
};

inline Matrix<NFElem> gram_over(const Pencil& p, const NFElem& t)
{
    Matrix<Rat> M0 = p.Q0.gram(), Mi = p.Qinf.gram();
    Matrix<NFElem> m(5);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) m[i].push_back(t * Mi[i][j] + M0[i][j]);
    return m;
}

inline Matrix<NFElem> SingularPoint::complement_gram(const Pencil& p) const
{
    Matrix<NFElem> m = gram_over(p, theta), r;
    for (int i = 0; i < 5; ++i) {
        if (i == pivot) continue;
        std::vector<NFElem> row;
        for (int j = 0; j < 5; ++j)
            if (j != pivot) row.push_back(m[i][j]);
        r.push_back(row);
    }
    return r;
}

struct SmoothReport {
    bool smooth = true;
    bool f_nonzero = true;
    bool f_squarefree = true;
    std::vector<std::pair<Poly, size_t>> ranks;         // rank of M(theta) per factor
    std::vector<std::pair<Poly, bool>> vertex_off_pencil;  // Qinf(v_s) != 0
    std::vector<std::string> failures;
};

namespace detail {

inline SingularPoint singular_point(const Pencil& p, const Poly& g, size_t* rank_out)
{
    SingularPoint s;
    s.factor = g;
    s.field = NumberField::make(g);
    s.theta = NFElem::theta(s.field);
    NFElem one(s.field, Rat(1));
    Matrix<NFElem> M = gram_over(p, s.theta);
    *rank_out = rank(M, one);
    if (*rank_out != 4) return s;
    auto K = kernel(M, one);
    std::vector<NFElem> v = K.at(0);
    int j = 0;
    while (v[j].is_zero()) ++j;
    NFElem iv = v[j].inverse();
    for (auto& x : v) x = x * iv;
    s.vertex = v;
    s.pivot = j;
    s.eps = determinant(s.complement_gram(p), one);
    s.qinf_at_vertex = p.Qinf.eval(v, NFElem(s.field, Rat(0)));
    return s;
}

}  // namespace detail

inline SmoothReport check_smooth(const Pencil& p0)
{
    SmoothReport r;
    if (proportional(p0.Q0, p0.Q0 + p0.Qinf)) {
        r.smooth = false;
        r.f_nonzero = false;
        r.failures.push_back("the two forms are proportional");
        return r;
    }
    Pencil p = p0;
    if (!p.normalized()) {
        Poly f = p.det_poly();
        if (f.is_zero()) {
            r.smooth = r.f_nonzero = r.f_squarefree = false;
            r.failures.push_back("det(M0 + T Minf) vanishes identically: every member is singular");
            return r;
        }
        p = normalize(p0.Q0, p0.Q0 + p0.Qinf);
    }
    Poly f = p.det_poly().monic();
    auto F = factor(f);
    for (auto& [g, e] : F.factors) {
        if (e > 1) {
            r.f_squarefree = false;
            r.failures.push_back("singular locus not reduced: (" + g.to_string() + ")^" + std::to_string(e) +
                                 " divides f");
        }
        size_t rk;
        auto s = detail::singular_point(p, g, &rk);
        r.ranks.push_back({g, rk});
        if (rk != 4) {
            r.failures.push_back("member at root of " + g.to_string() + " has rank " + std::to_string(rk));
            continue;
        }
        bool ok = !s.qinf_at_vertex.is_zero();
        r.vertex_off_pencil.push_back({g, ok});
        if (!ok) r.failures.push_back("vertex of member at root of " + g.to_string() + " lies on every quadric");
    }
    r.smooth = r.failures.empty();
    return r;
}

struct NotSmoothError : DomainError {
    SmoothReport report;
    explicit NotSmoothError(SmoothReport r)
        : DomainError("pencil fails the smoothness conditions: " + (r.failures.empty() ? "" : r.failures[0])),
          report(std::move(r))
    {
    }
};

struct SingularLocus {
    Poly f;                            // monic, degree 5
    std::vector<SingularPoint> points;  // one per irreducible factor, in factor order

    // N_{k(S)/Q}(eps_S)
    Rat norm_eps() const
    {
        Rat n = 1;
        for (auto& s : points) n *= norm(s.eps);
        return n;
    }
    std::vector<Rat> rational_points() const
    {
        std::vector<Rat> r;
        for (auto& s : points)
            if (s.rational()) r.push_back(s.rational_root());
        return r;
    }
};

inline SingularLocus singular_locus(const Pencil& p)
{
    if (!p.normalized()) throw DomainError("singular_locus needs a normalized pencil (infinity is singular)");
    auto rep = check_smooth(p);
    if (!rep.smooth) throw NotSmoothError(rep);
    SingularLocus L;
    L.f = p.det_poly().monic();
    for (auto& [g, e] : factor(L.f).factors) {
        size_t rk;
        L.points.push_back(detail::singular_point(p, g, &rk));
    }
    return L;
}

}  // namespace dp4
