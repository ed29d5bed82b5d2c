#pragma once

#include <set>

#include "dp4/localfield.hpp"
#include "dp4/pencil.hpp"

namespace dp4 {

// one closed point t of a degree-2 subscheme T, with the rank-4 part of Q_t over k(t)
struct TComponent {
    int point = 0;                // index into SingularLocus::points
    QElem theta;                  // t itself, in k(T)
    std::vector<QElem> diag;      // Q_t on a complement of the vertex, diagonalized
    QElem eps;                    // eps_t
    QElem qinf_at_vertex;         // Qinf(v_t)
    SymbolList clif;              // Clif(Q_t) over k(t)
};

// a degree-2 subscheme T of S: two rational points or one quadratic point
struct BrauerGenerator {
    std::vector<int> points;  // indices into SingularLocus::points
    Int d = 1;                // k(T) = Q(sqrt d); 1 when T is reducible
    std::vector<TComponent> components;
    Rat eps_rational;         // eps in Q representing eps_T
    Rat norm_qinf;            // N(Qinf(v_T))
    unsigned mask = 0;        // bit i set when point i lies in T and eps_i is not a square

    bool reducible() const { return points.size() == 2; }
    Int delta() const { return d; }
    std::string label(const SingularLocus& L) const
    {
        if (reducible()) {
            Rat a = L.points[points[0]].rational_root(), b = L.points[points[1]].rational_root();
            if (b < a) std::swap(a, b);
            return "{" + a.get_str() + ", " + b.get_str() + "}";
        }
        return "roots of " + L.points[points[0]].factor.to_string();
    }
};

namespace detail {

// integral representative of the same square class
inline QElem clear_denominators(const QElem& x)
{
    Int L = lcm(x.a.get_den(), x.b.get_den());
    Rat s = Rat(L) * Rat(L);
    return {x.a * s, x.b * s};
}

inline Rat rat_class(const Rat& x) { return Rat(squarefree_kernel(x)); }

inline TComponent make_component(const Pencil& p, const SingularLocus& L, int idx)
{
    const SingularPoint& s = L.points[idx];
    TComponent c;
    c.point = idx;
    auto diag = s.complement_diagonal(p);
    if (diag.size() != 4) throw InconsistencyError("rank-4 part of a singular member is degenerate");
    if (s.degree() == 1) {
        for (auto& x : diag) c.diag.push_back(QElem(rat_class(x.rational_value())));
        c.theta = QElem(s.rational_root());
        c.eps = QElem(rat_class(s.eps.rational_value()));
        c.qinf_at_vertex = QElem(s.qinf_at_vertex.rational_value());
        c.clif = clifford_rank4(c.diag, 1);
    } else if (s.degree() == 2) {
        QuadEmbedding E(s.factor);
        for (auto& x : diag) c.diag.push_back(clear_denominators(E.from(x)));
        c.theta = E.from(s.theta);
        c.eps = clear_denominators(E.from(s.eps));
        c.qinf_at_vertex = E.from(s.qinf_at_vertex);
        c.clif = clifford_rank4(c.diag, E.K.d);
    } else {
        throw DomainError("components of degree-2 subschemes have degree at most 2");
    }
    return c;
}

// eps in Q with eps * x a square in k(T), for x of square norm n^2 (Hilbert 90)
inline Rat rational_eps(const SingularPoint& s)
{
    if (s.degree() == 1) return rat_class(s.eps.rational_value());
    Rat N = norm(s.eps);
    if (!is_square_rat(N)) throw InconsistencyError("norm of eps_T is not a square");
    Int a, b;
    mpz_sqrt(a.get_mpz_t(), N.get_num().get_mpz_t());
    mpz_sqrt(b.get_mpz_t(), N.get_den().get_mpz_t());
    Rat n = make_rat(a, b);
    NFElem y = s.eps * Rat(1 / n);
    Rat e;
    if (y == NFElem(s.field, Rat(-1)))
        e = -n;
    else
        e = n * norm(y + Rat(1));
    e = rat_class(e);
    if (!is_square(s.eps * e)) throw InconsistencyError("rational representative of eps_T failed its check");
    return e;
}

}  // namespace detail

inline BrauerGenerator make_generator(const Pencil& p, const SingularLocus& L, const std::vector<int>& pts)
{
    BrauerGenerator g;
    g.points = pts;
    for (int i : pts) {
        g.components.push_back(detail::make_component(p, L, i));
        if (!is_square(L.points[i].eps)) g.mask |= 1u << i;
    }
    if (pts.size() == 1) {
        const SingularPoint& s = L.points[pts[0]];
        if (s.degree() != 2) throw DomainError("a single point of T must be quadratic");
        g.d = QuadEmbedding(s.factor).K.d;
        g.eps_rational = detail::rational_eps(s);
        g.norm_qinf = norm(s.qinf_at_vertex);
    } else if (pts.size() == 2) {
        const SingularPoint &s1 = L.points[pts[0]], &s2 = L.points[pts[1]];
        if (!s1.rational() || !s2.rational()) throw DomainError("a pair in T must consist of rational points");
        Rat e1 = s1.eps.rational_value(), e2 = s2.eps.rational_value();
        if (!is_square_rat(e1 * e2)) throw DomainError("T does not have square norm of eps");
        g.eps_rational = detail::rat_class(e1);
        g.norm_qinf = s1.qinf_at_vertex.rational_value() * s2.qinf_at_vertex.rational_value();
    } else {
        throw DomainError("T must have degree 2");
    }
    return g;
}

// ---------------------------------------------------------------------------
// local data of C_T
// ---------------------------------------------------------------------------

inline std::vector<LocalField> places_over(const BrauerGenerator& g, const Place& v)
{
    return places_above(g.d, v);
}

// eps_T a square in every completion of k(T) over v
inline bool eps_square_at(const BrauerGenerator& g, const Place& v)
{
    for (auto& c : g.components)
        for (auto& w : places_over(g, v))
            if (!is_local_square(c.eps, w)) return false;
    return true;
}

// inv_v(C_T) = sum over components and w | v of inv_w Clif(Q_t)
inline Half clifford_invariant(const BrauerGenerator& g, const Place& v)
{
    Half s;
    for (auto& c : g.components)
        for (auto& w : places_over(g, v)) s += c.clif.invariant(w);
    return s;
}

// number of components Q_{t_v} over v whose rank-4 part is anisotropic
inline int anisotropic_components(const BrauerGenerator& g, const Place& v)
{
    int n = 0;
    for (auto& c : g.components)
        for (auto& w : places_over(g, v))
            if (!isotropy(c.diag, w)) ++n;
    return n;
}

inline Half clifford_prime_invariant(const BrauerGenerator& g, const Place& v)
{
    return clifford_invariant(g, v) + hilbert(g.eps_rational, -Rat(g.d) * g.norm_qinf, v);
}

namespace detail {

inline void add_primes(std::set<Int>& out, const Rat& x)
{
    if (x == 0) return;
    for (auto& p : prime_divisors(x)) out.insert(p);
}

inline void add_support(std::set<Int>& out, const QElem& x, const Int& d)
{
    add_primes(out, QuadField{d}.norm(x));
    add_primes(out, Rat(x.a.get_den()));
    add_primes(out, Rat(x.b.get_den()));
}

}  // namespace detail

// places where some symbol in the data of T can be ramified
inline std::vector<Place> candidate_places(const BrauerGenerator& g)
{
    std::set<Int> primes = {Int(2)};
    detail::add_primes(primes, Rat(g.d));
    detail::add_primes(primes, g.eps_rational);
    detail::add_primes(primes, g.norm_qinf);
    for (auto& c : g.components) {
        for (auto& x : c.diag) detail::add_support(primes, x, g.d);
        detail::add_support(primes, c.eps, g.d);
        detail::add_support(primes, c.qinf_at_vertex, g.d);
    }
    std::vector<Place> out = {Place::infinite()};
    for (auto& p : primes) out.push_back(Place::prime(p));
    return out;
}

// two primes outside the candidate set, where everything must be trivial
inline std::vector<Place> control_places(const std::vector<Place>& cand, int count = 2)
{
    std::set<Int> used;
    for (auto& v : cand)
        if (!v.real) used.insert(v.p);
    std::vector<Place> out;
    Int p = 2;
    while ((int)out.size() < count) {
        p = next_prime(p);
        if (!used.count(p)) out.push_back(Place::prime(p));
    }
    return out;
}

struct RTSet {
    std::vector<Place> places;
    std::vector<Place> checked;  // candidate places examined
    bool odd() const { return places.size() % 2 == 1; }
    std::string parity() const { return odd() ? "odd" : "even"; }
};

// R_T by the definition, cross-checked place by place against the anisotropic-component count
inline RTSet r_set(const BrauerGenerator& g)
{
    RTSet r;
    auto cand = candidate_places(g);
    auto ctrl = control_places(cand);
    Half total;
    std::vector<Place> all = cand;
    all.insert(all.end(), ctrl.begin(), ctrl.end());
    for (auto& v : all) {
        Half inv = clifford_invariant(g, v);
        total += inv;
        bool in_def = eps_square_at(g, v) && inv.nonzero();
        bool in_dual = anisotropic_components(g, v) % 2 == 1;
        if (in_def != in_dual)
            throw InconsistencyError("R_T mismatch at " + v.to_string() + ": definition says " +
                                     (in_def ? "member" : "non-member") + ", component count disagrees");
        bool control = std::find(ctrl.begin(), ctrl.end(), v) != ctrl.end();
        if (control && (inv.nonzero() || in_def))
            throw InconsistencyError("C_T ramified at control prime " + v.to_string());
        if (in_def) r.places.push_back(v);
    }
    if (total.nonzero()) throw InconsistencyError("local invariants of C_T do not sum to zero");
    r.checked = cand;
    return r;
}

// R'_T; its parity always agrees with R_T
inline RTSet r_prime_set(const BrauerGenerator& g)
{
    if (g.mask == 0) throw DomainError("R'_T needs eps_T to be a nonsquare in k(T)");
    RTSet r;
    auto cand = candidate_places(g);
    Half total;
    for (auto& v : cand) {
        Half inv = clifford_prime_invariant(g, v);
        total += inv;
        if (!eps_square_at(g, v) && inv.nonzero()) r.places.push_back(v);
    }
    for (auto& v : control_places(cand))
        if (clifford_prime_invariant(g, v).nonzero())
            throw InconsistencyError("C'_T ramified at control prime " + v.to_string());
    if (total.nonzero()) throw InconsistencyError("local invariants of C'_T do not sum to zero");
    if (r.odd() != r_set(g).odd()) throw InconsistencyError("parities of R_T and R'_T differ");
    r.checked = cand;
    return r;
}

// |R_t| for t a k(T)-point of an irreducible T, counted over places of k(T)
inline int base_change_count(const BrauerGenerator& g)
{
    if (g.reducible()) throw DomainError("base change count needs an irreducible T");
    const TComponent& c = g.components[0];
    int n = 0;
    for (auto& v : candidate_places(g))
        for (auto& w : places_over(g, v))
            if (is_local_square(c.eps, w) && c.clif.invariant(w).nonzero()) ++n;
    return n;
}

// ---------------------------------------------------------------------------
// Br(G)/Br_0(G)
// ---------------------------------------------------------------------------

struct BrauerGroupOfG {
    int n = 0;
    unsigned nonsquare_mask = 0;             // points s with eps_s not a square
    std::vector<unsigned> kernel;            // subsets of nonsquare points with square norm
    std::vector<BrauerGenerator> generators;
    std::vector<BrauerGenerator> candidates;  // every degree-2 T with square norm of eps_T
};

inline unsigned class_of(unsigned mask, unsigned full)
{
    // canonical representative modulo the full set
    return std::min(mask, mask ^ full);
}

inline BrauerGroupOfG brauer_group(const Pencil& p, const SingularLocus& L)
{
    BrauerGroupOfG B;
    int m = (int)L.points.size();
    std::vector<Rat> nrm(m);
    for (int i = 0; i < m; ++i) {
        if (!is_square(L.points[i].eps)) B.nonsquare_mask |= 1u << i;
        nrm[i] = norm(L.points[i].eps);
    }
    unsigned full = B.nonsquare_mask;
    for (unsigned sub = full;; sub = (sub - 1) & full) {
        Rat prod = 1;
        for (int i = 0; i < m; ++i)
            if (sub >> i & 1) prod *= nrm[i];
        if (is_square_rat(prod)) B.kernel.push_back(sub);
        if (sub == 0) break;
    }
    std::sort(B.kernel.begin(), B.kernel.end());
    if (std::find(B.kernel.begin(), B.kernel.end(), full) == B.kernel.end())
        throw InconsistencyError("norm of eps_S is not a square");
    int dimk = 0;
    while ((1u << dimk) < B.kernel.size()) ++dimk;
    if ((1u << dimk) != B.kernel.size()) throw InconsistencyError("kernel of N is not a group");
    B.n = full == 0 ? 0 : dimk - 1;
    if (B.n > 2) throw InconsistencyError("Br(G)/Br_0(G) larger than (Z/2)^2");

    // candidate T: pairs of rational points first, then quadratic points
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (L.points[i].rational() && L.points[j].rational() &&
                is_square_rat(L.points[i].eps.rational_value() * L.points[j].eps.rational_value()))
                B.candidates.push_back(make_generator(p, L, {i, j}));
    for (int i = 0; i < m; ++i)
        if (L.points[i].degree() == 2 && is_square_rat(nrm[i])) B.candidates.push_back(make_generator(p, L, {i}));

    std::set<unsigned> span = {0u};
    for (auto& g : B.candidates) {
        unsigned c = class_of(g.mask, full);
        if (span.count(c)) continue;
        std::set<unsigned> next = span;
        for (unsigned s : span) next.insert(class_of(s ^ c, full));
        span = next;
        B.generators.push_back(g);
    }
    if ((int)B.generators.size() != B.n)
        throw InconsistencyError("degree-2 subschemes do not generate Br(G)/Br_0(G)");
    if (B.n == 2)
        for (auto& g : B.candidates)
            if (!g.reducible() && class_of(g.mask, full) != 0)
                throw InconsistencyError("n = 2 but an irreducible T gives a nontrivial class");
    return B;
}

// ---------------------------------------------------------------------------
// decision logic for the Brauer set
// ---------------------------------------------------------------------------

struct ClassInfo {
    unsigned cls = 0;
    bool has_even = false;        // some representing T with #R_T even
    bool has_reducible = false;   // some representing T reducible
    std::vector<std::pair<int, bool>> reps;  // candidate index, #R_T odd
};

struct ParityVerdict {
    bool trivial = false;      // n = 0
    bool condition1 = false;   // every class has a representative with #R_T even
    bool condition2 = false;   // every class has a reducible representative
    bool wa_obstructed = false;  // some T with #R_T odd
    bool open_case = false;      // neither condition holds
    std::vector<ClassInfo> classes;
    std::vector<RTSet> r_sets;  // per candidate, aligned with BrauerGroupOfG::candidates
    std::string summary() const
    {
        if (trivial) return "trivial";
        if (condition1 && condition2) return "condition-1-and-2";
        if (condition1) return "condition-1";
        if (condition2) return "condition-2";
        return "open-case";
    }
};

inline ParityVerdict parity_criterion(const BrauerGroupOfG& B)
{
    ParityVerdict V;
    for (auto& g : B.candidates) V.r_sets.push_back(r_set(g));
    for (auto& r : V.r_sets)
        if (r.odd()) V.wa_obstructed = true;
    if (B.n == 0) {
        V.trivial = V.condition1 = V.condition2 = true;
        return V;
    }
    std::map<unsigned, ClassInfo> byclass;
    for (size_t i = 0; i < B.candidates.size(); ++i) {
        unsigned c = class_of(B.candidates[i].mask, B.nonsquare_mask);
        if (c == 0) continue;
        auto& ci = byclass[c];
        ci.cls = c;
        ci.reps.push_back({(int)i, V.r_sets[i].odd()});
        if (!V.r_sets[i].odd()) ci.has_even = true;
        if (B.candidates[i].reducible()) ci.has_reducible = true;
    }
    if ((int)byclass.size() != (1 << B.n) - 1)
        throw InconsistencyError("some nontrivial class has no degree-2 representative");
    V.condition1 = V.condition2 = true;
    for (auto& [c, ci] : byclass) {
        V.classes.push_back(ci);
        if (!ci.has_even) V.condition1 = false;
        if (!ci.has_reducible) V.condition2 = false;
    }
    V.open_case = !V.condition1 && !V.condition2;
    return V;
}

// C_s for s with eps_s a square: generators of ker(Br k -> Br X)
struct ConstantKernelEntry {
    int point = 0;
    bool supported = true;  // components of degree > 2 are not evaluated
    std::vector<std::pair<Place, Half>> invariants;
};

inline std::vector<ConstantKernelEntry> br_constant_kernel(const Pencil& p, const SingularLocus& L)
{
    std::vector<ConstantKernelEntry> out;
    for (int i = 0; i < (int)L.points.size(); ++i) {
        const SingularPoint& s = L.points[i];
        if (!is_square(s.eps)) continue;
        ConstantKernelEntry e;
        e.point = i;
        if (s.degree() > 2) {
            e.supported = false;
            out.push_back(e);
            continue;
        }
        BrauerGenerator g;
        g.points = {i};
        g.components.push_back(detail::make_component(p, L, i));
        if (s.degree() == 2) g.d = QuadEmbedding(s.factor).K.d;
        g.eps_rational = 1;
        g.norm_qinf = 1;
        Half total;
        for (auto& v : candidate_places(g)) {
            Half h = clifford_invariant(g, v);
            total += h;
            if (h.nonzero()) e.invariants.push_back({v, h});
        }
        if (total.nonzero()) throw InconsistencyError("invariants of C_s do not sum to zero");
        out.push_back(e);
    }
    return out;
}

}  // namespace dp4
