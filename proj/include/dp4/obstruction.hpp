#pragma once

#include <atomic>
#include <set>
#include <thread>

#include "dp4/brauer.hpp"
#include "dp4/reduction.hpp"

namespace dp4 {

// a point of P^1(Q); nullopt is infinity
using ProjPoint = std::optional<Rat>;

inline std::string to_string(const ProjPoint& t) { return t ? t->get_str() : "inf"; }

// ---------------------------------------------------------------------------
// evaluation of beta_T and fiber solvability
// ---------------------------------------------------------------------------

// inv_v Cor_{k(T)/Q}(eps_T, t - theta); zero at infinity
inline Half eval_at_t(const BrauerGenerator& g, const ProjPoint& t, const Place& v)
{
    if (!t) return Half();
    Half s;
    for (auto& c : g.components) {
        QElem x{*t - c.theta.a, -c.theta.b};
        if (x.is_zero()) throw DomainError("beta_T has a residue at " + t->get_str() + ", a point of T");
        for (auto& w : places_over(g, v)) s += hilbert_ext(c.eps, x, w);
    }
    return s;
}

inline bool in_support(const BrauerGenerator& g, const ProjPoint& t)
{
    if (!t) return false;
    for (auto& c : g.components)
        if (c.theta.b == 0 && c.theta.a == *t) return true;
    return false;
}

// diagonal entries of a symmetric rational matrix up to congruence; zeros of the radical dropped
inline std::vector<Rat> diagonal_entries(Matrix<Rat> A)
{
    size_t n = A.size();
    std::vector<Rat> d;
    std::vector<bool> used(n, false);
    for (size_t step = 0; step < n; ++step) {
        int piv = -1;
        for (size_t i = 0; i < n && piv < 0; ++i)
            if (!used[i] && A[i][i] != 0) piv = (int)i;
        if (piv < 0) {
            for (size_t i = 0; i < n && piv < 0; ++i)
                for (size_t j = 0; j < n && piv < 0; ++j)
                    if (i != j && !used[i] && !used[j] && A[i][j] != 0) {
                        // e_i -> e_i + e_j
                        for (size_t k = 0; k < n; ++k) A[i][k] += A[j][k];
                        for (size_t k = 0; k < n; ++k) A[k][i] += A[k][j];
                        piv = (int)i;
                    }
            if (piv < 0) break;
        }
        Rat a = A[piv][piv];
        d.push_back(a);
        used[piv] = true;
        for (size_t k = 0; k < n; ++k) {
            if (used[k] || A[k][piv] == 0) continue;
            Rat f = A[k][piv] / a;
            for (size_t l = 0; l < n; ++l)
                if (!used[l]) A[k][l] -= f * A[piv][l];
        }
        for (size_t k = 0; k < n; ++k) A[k][piv] = A[piv][k] = 0;
    }
    return d;
}

inline int singular_index(const SingularLocus& L, const Rat& t)
{
    for (int i = 0; i < (int)L.points.size(); ++i)
        if (L.points[i].rational() && L.points[i].rational_root() == t) return i;
    return -1;
}

// G_t(Q_v) nonempty: Clif_0(Q_t) split for rank 5, isotropic rank-4 part on S
inline bool fiber_solvable(const Pencil& p, const SingularLocus& L, const ProjPoint& t, const Place& v)
{
    if (t) {
        int s = singular_index(L, *t);
        if (s >= 0) {
            std::vector<Rat> diag;
            for (auto& x : L.points[s].complement_diagonal(p)) diag.push_back(x.rational_value());
            return isotropy(diag, v);
        }
    }
    std::vector<Rat> d = diagonal_entries(t ? p.gram_at(*t) : p.Qinf.gram());
    if (d.size() != 5) throw InconsistencyError("member off the singular locus has rank below 5");
    std::vector<QElem> q(d.begin(), d.end());
    return !clifford_even_rank5_diag(q).invariant(v).nonzero();
}

// right side of the near-s criterion: Clif(Q_s) + (eps_s, -Qinf(v_s)) at v, for rational s
inline Half near_root_target(const Pencil& p, const SingularLocus& L, int s, const Place& v)
{
    const SingularPoint& sp = L.points[s];
    if (!sp.rational()) throw DomainError("near-root criterion needs a rational point of S");
    std::vector<Rat> diag;
    for (auto& x : sp.complement_diagonal(p)) diag.push_back(x.rational_value());
    return clifford_rank4(diag).invariant(v) + hilbert(sp.eps.rational_value(), -sp.qinf_at_vertex.rational_value(), v);
}

// ---------------------------------------------------------------------------
// roots of f in Q_v, for placing samples
// ---------------------------------------------------------------------------

// real roots: one rational strictly below, between and above the roots of a squarefree f
inline std::vector<Rat> real_separators(const Poly& f0)
{
    Poly f = squarefree_part(f0);
    if (f.degree() < 1) return {Rat(0)};
    std::vector<Poly> st = {f, f.derivative()};
    while (st.back().degree() > 0) {
        Poly r = divmod(st[st.size() - 2], st.back()).second;
        if (r.is_zero()) break;
        st.push_back(-r);
    }
    auto changes = [&](const Rat& x) {
        int n = 0, last = 0;
        for (auto& q : st) {
            int s = sgn(q.eval(x));
            if (s == 0) continue;
            if (last != 0 && s != last) ++n;
            last = s;
        }
        return n;
    };
    Rat B = 1;
    for (int i = 0; i < f.degree(); ++i) B = std::max(B, Rat(abs(f[i] / f.lead())));
    B += 1;
    std::vector<std::pair<Rat, Rat>> iv;
    std::vector<std::pair<Rat, Rat>> todo = {{-B, B}};
    while (!todo.empty()) {
        auto [a, b] = todo.back();
        todo.pop_back();
        int c = changes(a) - changes(b);
        if (c == 0) continue;
        if (c == 1) {
            iv.push_back({a, b});
            continue;
        }
        Rat m = (a + b) / 2;
        for (int k = 1; f.eval(m) == 0; ++k) m = a + (b - a) * Rat(k, 7 * k + 1);
        m.canonicalize();
        todo.push_back({a, m});
        todo.push_back({m, b});
    }
    std::sort(iv.begin(), iv.end());
    if (iv.empty()) return {Rat(0)};
    std::vector<Rat> out = {iv[0].first};
    for (auto& [a, b] : iv) out.push_back(b);
    return out;
}

namespace detail {

inline Int zeval(const ZPoly& g, const Int& x)
{
    Int r = 0;
    for (int i = (int)g.size() - 1; i >= 0; --i) r = r * x + g[i];
    return r;
}

inline ZPoly zderiv(const ZPoly& g)
{
    ZPoly d;
    for (size_t i = 1; i < g.size(); ++i) d.push_back(g[i] * Int((unsigned long)i));
    return d;
}

// roots of g in Z_p (only_nonunit: in pZ_p), as integers mod p^N
inline std::vector<Int> zp_roots(const ZPoly& g, const Int& p, int N, bool only_nonunit)
{
    ZPoly dg = zderiv(g);
    long P = p.get_si();
    std::vector<Int> out;
    Int pN = ipow(p, N);
    std::vector<std::pair<Int, int>> level;  // residue mod p^k, k
    for (long a = 0; a < (only_nonunit ? 1 : P); ++a) level.push_back({Int(a), 1});
    int cap = N + 40;
    while (!level.empty()) {
        auto [r, k] = level.back();
        level.pop_back();
        Int gv = zeval(g, r);
        if (mod(gv, ipow(p, k)) != 0) continue;
        Int dv = zeval(dg, r);
        int vd = dv == 0 ? cap : vp(dv, p);
        int vg = gv == 0 ? 2 * cap : vp(gv, p);
        if (vd < cap && vg > 2 * vd && k > vd) {
            // Newton converges to the unique root in this disc
            Int M = ipow(p, N + vd + 2), x = r;
            for (int it = 0; it < 100; ++it) {
                Int gx = zeval(g, x);
                if (gx == 0 || vp(gx, p) >= N + 2 * vd + 2) break;
                Int d = zeval(dg, x);
                Int dd = d / ipow(p, vd);
                Int step = (gx / ipow(p, vd)) * invmod(mod(dd, M), M);
                x = mod(x - step, M);
            }
            Int xr = mod(x, pN);
            if (std::find(out.begin(), out.end(), xr) == out.end()) out.push_back(xr);
            continue;
        }
        if (vg >= 2 * cap) {  // exact integer root
            Int xr = mod(r, pN);
            if (std::find(out.begin(), out.end(), xr) == out.end()) out.push_back(xr);
            continue;
        }
        if (k >= cap) continue;
        Int pk = ipow(p, k);
        for (long a = 0; a < P; ++a) level.push_back({r + pk * a, k + 1});
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

// rational approximations of the roots of g in Q_p, good to p^N relative to the root
inline std::vector<Rat> padic_roots(const Poly& g0, const Int& p, int N)
{
    if (p > 100000) throw DomainError("residue enumeration for p-adic roots needs p <= 100000");
    using namespace detail;
    ZPoly g = poly_to_z(squarefree_part(g0));
    std::vector<Rat> out;
    for (auto& r : zp_roots(g, p, N, false)) out.push_back(Rat(r));
    // roots of negative valuation: 1/y with y a root of the reversal in pZ_p
    ZPoly rev(g.rbegin(), g.rend());
    z_trim(rev);
    for (auto& y : zp_roots(rev, p, N + 8, true))
        if (y != 0) out.push_back(Rat(1) / Rat(y));
    return out;
}

// ---------------------------------------------------------------------------
// local profiles: the image of (inv_v beta_T1, .., inv_v beta_Tn) on G(Q_v)
// ---------------------------------------------------------------------------

struct LocalProfile {
    Place place;
    std::map<unsigned, ProjPoint> achievable;  // bit i = inv_v beta_{T_i}; witness t with solvable fiber
    int depth = 0;
    int saturation_depth = 0;  // smallest depth already giving the final set
    bool saturated = true;     // final set stable over the last two depths
    int samples = 0;
    int solvable = 0;

    bool contains(unsigned vec) const { return achievable.count(vec) > 0; }
    bool singleton() const { return achievable.size() == 1; }
};

struct Sample {
    ProjPoint t;
    int tag = 0;  // |j| of the stratum, 0 for centers and infinity
};

inline std::vector<Sample> sample_points(const SingularLocus& L, const Place& v, int depth)
{
    std::map<ProjPoint, int> pts;
    auto add = [&](const ProjPoint& t, int tag) {
        auto it = pts.find(t);
        if (it == pts.end() || it->second > tag) pts[t] = tag;
    };
    add(std::nullopt, 0);
    if (v.real) {
        for (auto& r : real_separators(L.f)) add(r, 0);
        for (auto& r : L.rational_points()) add(r, 0);
    } else {
        const Int& p = v.p;
        int N = depth + 10;
        std::vector<Rat> centers = {Rat(0)};
        for (long a = 1; a < std::min<long>(p.get_si(), 5); ++a) centers.push_back(Rat(a));
        for (auto& s : L.points) {
            if (s.rational()) {
                centers.push_back(s.rational_root());
                continue;
            }
            if (s.degree() == 2) centers.push_back(-s.factor[1] / 2);
            if (p <= 100000)
                for (auto& r : padic_roots(s.factor, p, N)) centers.push_back(r);
        }
        std::vector<Rat> units;
        if (p == 2) {
            for (int u = 1; u < 16; u += 2) units.push_back(u);
        } else if (p <= 23) {
            for (long u = 1; u < p.get_si(); ++u) units.push_back(u);
        } else {
            for (long u = 1; u <= 6; ++u) units.push_back(u);
            for (long u = 2;; ++u)
                if (legendre(Int(u), p) == -1) {
                    units.push_back(u);
                    break;
                }
        }
        for (auto& c : centers) {
            add(c, 0);
            for (int j = -depth; j <= depth; ++j) {
                Rat pj = rpow(Rat(p), j);
                for (auto& u : units) add(Rat(c + pj * u), std::abs(j));
            }
        }
    }
    std::vector<Sample> out;
    for (auto& [t, tag] : pts) out.push_back({t, tag});
    return out;
}

inline LocalProfile local_profile(const Pencil& p, const SingularLocus& L, const std::vector<BrauerGenerator>& gens,
                                  const Place& v, int depth = 6)
{
    if (depth < 1) throw DomainError("profile depth must be at least 1");
    LocalProfile prof;
    prof.place = v;
    prof.depth = depth;
    std::vector<std::map<unsigned, ProjPoint>> by_tag(depth + 1);
    for (auto& s : sample_points(L, v, depth)) {
        bool skip = false;
        for (auto& g : gens)
            if (in_support(g, s.t)) skip = true;
        if (skip) continue;
        ++prof.samples;
        if (!fiber_solvable(p, L, s.t, v)) continue;
        ++prof.solvable;
        unsigned vec = 0;
        for (size_t i = 0; i < gens.size(); ++i)
            if (eval_at_t(gens[i], s.t, v).nonzero()) vec |= 1u << i;
        by_tag[s.tag].emplace(vec, s.t);
    }
    std::vector<std::set<unsigned>> upto(depth + 1);
    for (int d = 0; d <= depth; ++d) {
        if (d > 0) upto[d] = upto[d - 1];
        for (auto& [vec, t] : by_tag[d]) {
            upto[d].insert(vec);
            if (!prof.achievable.count(vec)) prof.achievable[vec] = t;
        }
    }
    if (prof.achievable.empty()) throw InconsistencyError("no solvable fiber found at " + v.to_string());
    prof.saturation_depth = depth;
    while (prof.saturation_depth > 0 && upto[prof.saturation_depth - 1] == upto[depth]) --prof.saturation_depth;
    prof.saturated = v.real || prof.saturation_depth + 2 <= depth;
    return prof;
}

inline std::vector<LocalProfile> local_profiles(const Pencil& p, const SingularLocus& L,
                                                const std::vector<BrauerGenerator>& gens,
                                                const std::vector<Place>& places, int depth, int threads)
{
    std::vector<LocalProfile> out(places.size());
    std::vector<std::exception_ptr> errors(places.size());
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next++) < places.size();) {
            try {
                out[i] = local_profile(p, L, gens, places[i], depth);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    int nt = std::max(1, std::min<int>(threads, (int)places.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < nt; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

// ---------------------------------------------------------------------------
// adelic witnesses for the parity statement
// ---------------------------------------------------------------------------

struct WitnessEntry {
    Place place;
    ProjPoint t;
    bool eps_square = false;
    Half value;     // inv_v beta_T at the chosen point
    Half expected;  // inv_v C_T where eps is not locally square, else 0
    bool found = false;
};

struct ParityWitness {
    std::vector<WitnessEntry> entries;
    Half sum;
    Half expected_sum;  // #R_T / 2
    bool complete = false;
    bool ok() const { return complete && sum == expected_sum; }
};

namespace detail {

inline std::optional<ProjPoint> find_value(const Pencil& p, const SingularLocus& L, const BrauerGenerator& g,
                                           const Place& v, Half want, int depth)
{
    for (auto& s : sample_points(L, v, depth)) {
        if (in_support(g, s.t)) continue;
        if (eval_at_t(g, s.t, v) != want) continue;
        if (fiber_solvable(p, L, s.t, v)) return s.t;
    }
    return std::nullopt;
}

}  // namespace detail

// at places where eps is not locally square a point with beta_T = inv_v C_T, elsewhere any point;
// places outside the candidate set and the controls carry value 0
inline ParityWitness parity_witness(const Pencil& p, const SingularLocus& L, const BrauerGenerator& g, int depth = 6)
{
    ParityWitness w;
    auto cand = candidate_places(g);
    auto ctrl = control_places(cand);
    std::vector<Place> all = cand;
    all.insert(all.end(), ctrl.begin(), ctrl.end());
    w.complete = true;
    for (auto& v : all) {
        WitnessEntry e;
        e.place = v;
        e.eps_square = eps_square_at(g, v);
        e.expected = e.eps_square ? Half() : clifford_invariant(g, v);
        auto t = detail::find_value(p, L, g, v, e.expected, depth);
        if (t) {
            e.found = true;
            e.t = *t;
            e.value = eval_at_t(g, *t, v);
            w.sum += e.value;
        } else {
            w.complete = false;
        }
        w.entries.push_back(e);
    }
    w.expected_sum = Half((int)r_set(g).places.size());
    return w;
}

// the selection for a rational point t of S: near t where eps_t is not locally square,
// arbitrary elsewhere; for every T containing t the sum is #R_t / 2
struct RationalPointWitness {
    int point = 0;
    std::vector<WitnessEntry> entries;
    std::vector<std::pair<int, Half>> sums;  // candidate index, sum
    Half expected;                           // #R_t / 2
    bool complete = false;
};

inline RationalPointWitness rational_point_witness(const Pencil& p, const SingularLocus& L,
                                                   const BrauerGroupOfG& B, int s, int depth = 6)
{
    RationalPointWitness w;
    w.point = s;
    const SingularPoint& sp = L.points[s];
    if (!sp.rational()) throw DomainError("rational point witness needs a rational point of S");
    Rat root = sp.rational_root(), eps = sp.eps.rational_value();
    std::vector<Rat> diag;
    for (auto& x : sp.complement_diagonal(p)) diag.push_back(x.rational_value());
    SymbolList clif = clifford_rank4(diag);
    std::vector<int> with_s;
    std::set<Place> places = {Place::infinite(), Place::prime(2)};
    for (size_t i = 0; i < B.candidates.size(); ++i) {
        const auto& g = B.candidates[i];
        if (!g.reducible() || std::find(g.points.begin(), g.points.end(), s) == g.points.end()) continue;
        with_s.push_back((int)i);
        for (auto& v : candidate_places(g)) places.insert(v);
    }
    for (auto& q : prime_divisors(eps)) places.insert(Place::prime(q));
    for (auto& x : diag)
        for (auto& q : prime_divisors(x)) places.insert(Place::prime(q));
    for (auto& q : prime_divisors(sp.qinf_at_vertex.rational_value())) places.insert(Place::prime(q));
    std::vector<Place> all(places.begin(), places.end());
    for (auto& c : control_places(all)) all.push_back(c);

    int Rt = 0;
    w.complete = true;
    std::vector<Half> sums(with_s.size());
    for (auto& v : all) {
        Half cl = clif.invariant(v);
        bool sq = is_local_square(eps, v);
        if (sq && cl.nonzero()) ++Rt;
        WitnessEntry e;
        e.place = v;
        e.eps_square = sq;
        std::optional<ProjPoint> pick;
        if (sq) {
            for (auto& smp : sample_points(L, v, depth)) {
                bool bad = false;
                for (int i : with_s)
                    if (in_support(B.candidates[i], smp.t)) bad = true;
                if (!bad && fiber_solvable(p, L, smp.t, v)) {
                    pick = smp.t;
                    break;
                }
            }
        } else {
            Half target = near_root_target(p, L, s, v);
            // t close to s in the right class; other roots of S far away
            std::vector<Rat> near;
            if (v.real) {
                for (int j = depth; j < depth + 12; ++j) {
                    near.push_back(root + rpow(Rat(2), -j));
                    near.push_back(root - rpow(Rat(2), -j));
                }
            } else {
                std::vector<Rat> units = {1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7};
                for (int j = depth; j < depth + 8; ++j)
                    for (auto& u : units)
                        if (vp(u, v.p) == 0) near.push_back(root + rpow(Rat(v.p), j) * u);
            }
            for (auto& t : near) {
                if (hilbert(eps, t - root, v) != target) continue;
                if (!fiber_solvable(p, L, t, v)) continue;
                pick = ProjPoint(t);
                break;
            }
        }
        if (pick) {
            e.found = true;
            e.t = *pick;
            for (size_t k = 0; k < with_s.size(); ++k) sums[k] += eval_at_t(B.candidates[with_s[k]], *pick, v);
        } else {
            w.complete = false;
        }
        w.entries.push_back(e);
    }
    w.expected = Half(Rt);
    for (size_t k = 0; k < with_s.size(); ++k) w.sums.push_back({with_s[k], sums[k]});
    return w;
}

// ---------------------------------------------------------------------------
// the adelic report
// ---------------------------------------------------------------------------

inline std::vector<Place> structural_bad_places(const Pencil& p, const SingularLocus& L, const BrauerGroupOfG& B)
{
    std::set<Int> primes = {Int(2)};
    auto add = [&](const Rat& x) {
        if (x != 0)
            for (auto& q : prime_divisors(x)) primes.insert(q);
    };
    add(discriminant(L.f));
    for (auto& c : L.f.coeffs()) add(Rat(c.get_den()));
    for (auto& c : p.Q0.c) add(Rat(c.get_den()));
    for (auto& c : p.Qinf.c) add(Rat(c.get_den()));
    add(determinant(p.Qinf.gram(), Rat(1)));
    for (auto& s : L.points) {
        add(norm(s.eps));
        add(norm(s.qinf_at_vertex));
    }
    for (auto& g : B.candidates)
        for (auto& v : candidate_places(g))
            if (!v.real) primes.insert(v.p);
    std::vector<Place> out = {Place::infinite()};
    for (auto& q : primes) out.push_back(Place::prime(q));
    return out;
}

struct AdelicReport {
    int n = 0;
    std::vector<LocalProfile> profiles;  // structural bad places
    std::vector<LocalProfile> controls;  // two good primes, each {0}
    std::set<unsigned> sums;             // Minkowski sum of the profiles
    bool zero_reachable = false;
    bool wa_obstructed = false;
    std::vector<std::pair<Place, ProjPoint>> zero_selection;  // one point per bad place, summing to 0
    std::vector<std::string> rt_parities;                     // per generator
    std::vector<ParityWitness> witnesses;                     // per generator
    bool zero_cycle_deg1 = true;
    std::string zero_cycle_note;
    ParityVerdict verdict;
};

inline AdelicReport adelic_report(const Pencil& p, const SingularLocus& L, const BrauerGroupOfG& B, int depth = 6,
                                  int threads = 1)
{
    AdelicReport R;
    R.n = B.n;
    R.verdict = parity_criterion(B);
    const auto& gens = B.generators;
    auto bad = structural_bad_places(p, L, B);
    auto ctrl = control_places(bad);
    std::vector<Place> all = bad;
    all.insert(all.end(), ctrl.begin(), ctrl.end());
    auto profs = local_profiles(p, L, gens, all, depth, threads);
    for (size_t i = 0; i < profs.size(); ++i) (i < bad.size() ? R.profiles : R.controls).push_back(profs[i]);
    for (auto& c : R.controls)
        if (c.achievable.size() != 1 || !c.contains(0))
            throw InconsistencyError("nonzero evaluation at the good control prime " + c.place.to_string());

    for (size_t i = 0; i < gens.size(); ++i) {
        R.rt_parities.push_back(r_set(gens[i]).parity());
        R.witnesses.push_back(parity_witness(p, L, gens[i], depth));
    }
    // the witnesses are verified points, so they join the profiles
    for (size_t i = 0; i < gens.size(); ++i)
        for (auto& e : R.witnesses[i].entries) {
            if (!e.found) continue;
            for (auto& prof : R.profiles) {
                if (!(prof.place == e.place)) continue;
                bool skip = false;
                for (auto& g : gens)
                    if (in_support(g, e.t)) skip = true;
                if (skip) continue;
                unsigned vec = 0;
                for (size_t k = 0; k < gens.size(); ++k)
                    if (eval_at_t(gens[k], e.t, e.place).nonzero()) vec |= 1u << k;
                prof.achievable.emplace(vec, e.t);
            }
        }

    // Minkowski sum over F_2^n, remembering one selection per reachable vector
    std::map<unsigned, std::vector<ProjPoint>> reach = {{0u, {}}};
    for (auto& prof : R.profiles) {
        std::map<unsigned, std::vector<ProjPoint>> next;
        for (auto& [acc, sel] : reach)
            for (auto& [vec, t] : prof.achievable) {
                unsigned s = acc ^ vec;
                if (next.count(s)) continue;
                auto ns = sel;
                ns.push_back(t);
                next[s] = ns;
            }
        reach.swap(next);
    }
    for (auto& [s, sel] : reach) R.sums.insert(s);
    R.zero_reachable = reach.count(0) > 0;
    if (R.zero_reachable)
        for (size_t i = 0; i < R.profiles.size(); ++i) R.zero_selection.push_back({R.profiles[i].place, reach[0][i]});
    R.wa_obstructed = R.sums != std::set<unsigned>{0u};

    if ((R.verdict.condition1 || R.verdict.condition2) && !R.zero_reachable)
        throw InconsistencyError("a sufficient condition holds but no adelic point is orthogonal to Br");
    bool odd = false;
    for (auto& r : R.verdict.r_sets)
        if (r.odd()) odd = true;
    if (odd && !R.wa_obstructed) throw InconsistencyError("#R_T is odd but every adelic point is orthogonal");
    R.zero_cycle_note = R.zero_reachable
                            ? "an adelic point orthogonal to Br(G) exists"
                            : "degree-2 cycle over k(T) with sum 1/2 minus an adelic point gives degree 1";
    return R;
}

// ---------------------------------------------------------------------------
// a quadratic field K with X_K(A_K)^Br empty, for T with #R_T odd
// ---------------------------------------------------------------------------

enum class LocalSolubility { soluble, insoluble, unknown };

inline const char* to_string(LocalSolubility s)
{
    switch (s) {
    case LocalSolubility::soluble: return "soluble";
    case LocalSolubility::insoluble: return "insoluble";
    default: return "unknown";
    }
}

// X(Q_v): real by definiteness of a member; p-adic by an anisotropic member with a rational
// vertex, smooth reduction, or a Hensel-certified point
inline LocalSolubility local_solubility(const Pencil& p, const SingularLocus& L, const Place& v)
{
    if (v.real) {
        std::vector<ProjPoint> ts = {std::nullopt};
        for (auto& r : real_separators(L.f)) ts.push_back(r);
        for (auto& t : ts) {
            auto d = diagonal_entries(t ? p.gram_at(*t) : p.Qinf.gram());
            bool pos = true, neg = true;
            for (auto& x : d) (x > 0 ? neg : pos) = false;
            if (pos || neg) return LocalSolubility::insoluble;
        }
        return LocalSolubility::soluble;
    }
    for (auto& s : L.points) {
        if (s.degree() > 2) continue;
        if (s.rational()) {
            std::vector<Rat> diag;
            for (auto& x : s.complement_diagonal(p)) diag.push_back(x.rational_value());
            if (!isotropy(diag, v)) return LocalSolubility::insoluble;
            continue;
        }
        QuadEmbedding E(s.factor);
        std::vector<QElem> diag;
        for (auto& x : s.complement_diagonal(p)) diag.push_back(detail::clear_denominators(E.from(x)));
        for (auto& w : places_above(E.K.d, v))
            if (w.local_degree() == 1 && !isotropy(diag, w)) return LocalSolubility::insoluble;
    }
    auto m = integral_model(p, v.p);
    // smooth reduction: Chevalley-Warning gives an F_p-point, Hensel lifts it
    auto cert = split_fiber_certificate(m);
    if (cert.verdict == SplitVerdict::split_certified && cert.det_squarefree) return LocalSolubility::soluble;
    if (find_local_point(m, 4)) return LocalSolubility::soluble;
    return LocalSolubility::unknown;
}

struct LocalCondition {
    Place place;
    std::string why;          // nonconstant evaluation, insoluble, unknown solubility
    std::string requirement;  // "eps" or "nonsquare"
    bool satisfied = false;
};

struct QuadraticFieldSuggestion {
    bool found = false;
    std::string reason;
    int candidate = -1;  // index into BrauerGroupOfG::candidates
    Int d = 0;
    std::vector<LocalCondition> conditions;
};

inline bool meets(const Int& d, const LocalCondition& c, const Rat& eps, const BrauerGenerator& g)
{
    const Place& v = c.place;
    if (c.requirement == "eps") return is_local_square(Rat(d) * eps, v);
    if (is_local_square(Rat(d), v)) return false;
    // K_v must differ from k(T_v) when that is a field
    if (!g.reducible() && places_above(g.d, v).size() == 1 && !v.real && is_local_square(Rat(d * g.d), v))
        return false;
    return true;
}

inline QuadraticFieldSuggestion suggest_quadratic_field(const Pencil& p, const SingularLocus& L,
                                                        const BrauerGroupOfG& B, const AdelicReport& R,
                                                        long bound = 10000000)
{
    QuadraticFieldSuggestion out;
    for (size_t i = 0; i < B.candidates.size(); ++i)
        if (R.verdict.r_sets[i].odd()) {
            out.candidate = (int)i;
            break;
        }
    if (out.candidate < 0) {
        out.reason = "no degree-2 subscheme with #R_T odd";
        return out;
    }
    const BrauerGenerator& g = B.candidates[out.candidate];
    Rat eps = g.eps_rational;
    std::set<Place> places;
    for (auto& prof : R.profiles) places.insert(prof.place);
    for (auto& v : candidate_places(g)) places.insert(v);
    for (auto& v : places) {
        // inv_v beta_T takes the value 1/2 somewhere on G(Q_v)
        bool nonzero = false;
        for (auto& prof : R.profiles) {
            if (!(prof.place == v)) continue;
            for (auto& [vec, t] : prof.achievable)
                if (!in_support(g, t) && eval_at_t(g, t, v).nonzero()) nonzero = true;
        }
        if (!eps_square_at(g, v) && clifford_invariant(g, v).nonzero()) nonzero = true;
        LocalSolubility sol = local_solubility(p, L, v);
        if (!nonzero && sol == LocalSolubility::soluble) continue;
        LocalCondition c;
        c.place = v;
        c.why = nonzero ? "nonconstant evaluation" : std::string("X(Q_v) ") + to_string(sol);
        c.requirement = is_local_square(eps, v) ? "nonsquare" : "eps";
        out.conditions.push_back(c);
    }
    auto ok = [&](const Int& d) {
        if (d == 1 || squarefree_kernel(Rat(d)) != d) return false;
        for (auto& c : out.conditions)
            if (!meets(d, c, eps, g)) return false;
        return true;
    };
    for (long m = 1; m <= bound; ++m)
        for (long sgnd : {1L, -1L}) {
            Int d = Int(m * sgnd);
            if (!ok(d)) continue;
            out.found = true;
            out.d = d;
            for (auto& c : out.conditions) c.satisfied = meets(d, c, eps, g);
            out.reason = "smallest |d| meeting the local conditions";
            return out;
        }
    throw InconsistencyError("no quadratic field found below the search bound");
}

// for v in R'_T with T_v a field and v odd: whether inv_v beta_T looked constant on the samples
struct RPrimeConstancy {
    int candidate = 0;
    Place place;
    bool field_at_v = false;
    bool constant = false;
    std::vector<Half> values;
};

inline std::vector<RPrimeConstancy> rprime_constancy(const Pencil& p, const SingularLocus& L,
                                                     const BrauerGroupOfG& B, int depth = 6)
{
    std::vector<RPrimeConstancy> out;
    for (size_t i = 0; i < B.candidates.size(); ++i) {
        const auto& g = B.candidates[i];
        if (g.mask == 0) continue;
        for (auto& v : r_prime_set(g).places) {
            RPrimeConstancy c;
            c.candidate = (int)i;
            c.place = v;
            c.field_at_v = !g.reducible() && places_above(g.d, v).size() == 1 && !v.real;
            std::set<Half> vals;
            for (auto& s : sample_points(L, v, depth)) {
                if (in_support(g, s.t) || !fiber_solvable(p, L, s.t, v)) continue;
                vals.insert(eval_at_t(g, s.t, v));
            }
            c.values.assign(vals.begin(), vals.end());
            c.constant = vals.size() == 1;
            out.push_back(c);
        }
    }
    return out;
}

}  // namespace dp4
