#pragma once

#include <memory>
#include <optional>

#include "dp4/exact.hpp"

namespace dp4 {

class NumberField {
public:
    // modulus must be irreducible; checked
    explicit NumberField(const Poly& modulus) : m_(modulus.monic())
    {
        if (m_.degree() < 1) throw DomainError("number field modulus must have degree >= 1");
        auto F = factor(m_);
        if (F.factors.size() != 1 || F.factors[0].second != 1)
            throw DomainError("number field modulus is reducible: " + m_.to_string());
    }
    static std::shared_ptr<const NumberField> make(const Poly& modulus)
    {
        return std::make_shared<const NumberField>(modulus);
    }

    const Poly& modulus() const { return m_; }
    int degree() const { return m_.degree(); }

private:
    Poly m_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

class NFElem {
public:
    NFElem() = default;
    NFElem(FieldPtr k, const Poly& p) : k_(std::move(k)), p_(p % k_->modulus()) {}
    NFElem(FieldPtr k, const Rat& a) : k_(std::move(k)), p_(Poly::constant(a)) {}

    static NFElem theta(const FieldPtr& k) { return NFElem(k, Poly::x()); }

    const FieldPtr& field() const { return k_; }
    const Poly& poly() const { return p_; }
    bool is_zero() const { return p_.is_zero(); }
    bool is_rational() const { return p_.degree() <= 0; }
    Rat rational_value() const
    {
        if (!is_rational()) throw DomainError("element is not rational");
        return p_[0];
    }
    std::vector<Rat> coords() const
    {
        std::vector<Rat> c(k_->degree());
        for (int i = 0; i < k_->degree(); ++i) c[i] = p_[i];
        return c;
    }

    friend NFElem operator+(const NFElem& a, const NFElem& b) { return {a.common(b), a.p_ + b.p_}; }
    friend NFElem operator-(const NFElem& a, const NFElem& b) { return {a.common(b), a.p_ - b.p_}; }
    friend NFElem operator-(const NFElem& a) { return {a.k_, -a.p_}; }
    friend NFElem operator*(const NFElem& a, const NFElem& b) { return {a.common(b), a.p_ * b.p_}; }
    friend NFElem operator*(const NFElem& a, const Rat& s) { return {a.k_, a.p_ * s}; }
    friend NFElem operator+(const NFElem& a, const Rat& s) { return {a.k_, a.p_ + Poly::constant(s)}; }
    friend NFElem operator-(const NFElem& a, const Rat& s) { return {a.k_, a.p_ - Poly::constant(s)}; }
    friend NFElem operator*(const Rat& s, const NFElem& a) { return a * s; }
    friend bool operator==(const NFElem& a, const NFElem& b)
    {
        a.common(b);
        return a.p_ == b.p_;
    }
    friend bool operator!=(const NFElem& a, const NFElem& b) { return !(a == b); }

    NFElem inverse() const
    {
        if (is_zero()) throw DomainError("inverse of zero in number field");
        Poly s, t;
        xgcd(p_, k_->modulus(), s, t);
        return {k_, s};
    }
    friend NFElem operator/(const NFElem& a, const NFElem& b) { return a * b.inverse(); }

    std::string to_string(const std::string& var = "theta") const { return p_.to_string(var); }

private:
    const FieldPtr& common(const NFElem& b) const
    {
        if (k_ != b.k_ && (!k_ || !b.k_ || k_->modulus() != b.k_->modulus()))
            throw DomainError("number field elements from different fields");
        return k_;
    }
    FieldPtr k_;
    Poly p_;
};

inline bool is_zero(const NFElem& e) { return e.is_zero(); }

// Norm_{k(s)/Q}
inline Rat norm(const NFElem& e)
{
    if (e.is_zero()) throw DomainError("norm of zero");
    return resultant(e.field()->modulus(), e.poly());
}

// characteristic polynomial of multiplication by e, monic of degree [k:Q]
inline Poly charpoly(const NFElem& e)
{
    int d = e.field()->degree();
    std::vector<Rat> xs, ys;
    for (int i = 0; i <= d; ++i) {
        Rat x = i;
        xs.push_back(x);
        Poly h = Poly::constant(x) - e.poly();
        ys.push_back(h.is_zero() ? Rat(0) : resultant(e.field()->modulus(), h));
    }
    return interpolate(xs, ys);
}

inline Rat trace(const NFElem& e) { return -charpoly(e)[e.field()->degree() - 1]; }

struct SquareClassQ {
    Int rep;
    friend bool operator==(const SquareClassQ&, const SquareClassQ&) = default;
};

inline SquareClassQ square_class_of_rat(const Rat& r) { return {squarefree_kernel(r)}; }

namespace detail {

// Norm_{K(z)/Q(z)} of (z - k*theta)^2 - e, a polynomial in z of degree 2d
inline Poly trager_norm(const NFElem& e, int k)
{
    const Poly& m = e.field()->modulus();
    int d = m.degree();
    std::vector<Rat> xs, ys;
    for (int i = 0; i <= 2 * d; ++i) {
        Rat z = i;
        Poly lin = Poly::constant(z) - Poly::monomial(Rat(k), 1);
        Poly h = (lin * lin - e.poly()) % m;
        xs.push_back(z);
        ys.push_back(h.is_zero() ? Rat(0) : resultant(m, h));
    }
    return interpolate(xs, ys);
}

// polynomials over K, lowest first
using KPoly = std::vector<NFElem>;

inline void kp_trim(KPoly& a)
{
    while (!a.empty() && a.back().is_zero()) a.pop_back();
}

inline KPoly kp_mod(KPoly a, const KPoly& b)
{
    kp_trim(a);
    int db = (int)b.size() - 1;
    NFElem il = b.back().inverse();
    while ((int)a.size() - 1 >= db && !a.empty()) {
        int da = (int)a.size() - 1;
        NFElem f = a.back() * il;
        for (int j = 0; j <= db; ++j) a[da - db + j] = a[da - db + j] - f * b[j];
        kp_trim(a);
    }
    return a;
}

inline KPoly kp_gcd(KPoly a, KPoly b)
{
    kp_trim(a);
    kp_trim(b);
    while (!b.empty()) {
        KPoly r = kp_mod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        NFElem il = a.back().inverse();
        for (auto& c : a) c = c * il;
    }
    return a;
}

}  // namespace detail

// y with y^2 = e if it exists
inline std::optional<NFElem> sqrt(const NFElem& e)
{
    if (e.is_zero()) throw DomainError("square root test of zero");
    const FieldPtr& K = e.field();
    if (K->degree() == 1) {
        Rat r = e.rational_value();
        if (!is_square_rat(r)) return std::nullopt;
        Int n, d;
        mpz_sqrt(n.get_mpz_t(), r.get_num().get_mpz_t());
        mpz_sqrt(d.get_mpz_t(), r.get_den().get_mpz_t());
        return NFElem(K, make_rat(n, d));
    }
    for (int k = 0;; k = (k <= 0 ? 1 - k : -k)) {
        Poly N = detail::trager_norm(e, k);
        if (gcd(N, N.derivative()).degree() > 0) continue;
        auto F = factor(N);
        if (F.factors.size() == 1) return std::nullopt;
        // g(z) = (z - k theta)^2 - e over K; a factor of N of degree d gives a linear factor
        NFElem th = NFElem::theta(K);
        NFElem kt = th * Rat(k);
        detail::KPoly g = {kt * kt - e, kt * Rat(-2), NFElem(K, Rat(1))};
        for (auto& [Ni, mult] : F.factors) {
            detail::KPoly nk;
            for (auto& c : Ni.coeffs()) nk.emplace_back(K, c);
            auto h = detail::kp_gcd(g, nk);
            if (h.size() == 2) {
                NFElem y = -h[0] - kt;
                if (y * y != e) throw InconsistencyError("square root certificate failed");
                return y;
            }
        }
        throw InconsistencyError("Trager norm reducible but no linear factor found");
    }
}

inline bool is_square(const NFElem& e) { return sqrt(e).has_value(); }

}  // namespace dp4
