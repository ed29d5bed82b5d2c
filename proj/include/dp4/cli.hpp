#pragma once

#include <json.hpp>

#include "dp4/fixtures.hpp"
#include "dp4/points.hpp"

namespace dp4::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* schema_version = "dp4-report/1";

// ---------------------------------------------------------------------------
// pencil files
// ---------------------------------------------------------------------------

inline Rat json_rat(const nlohmann::json& v, const std::string& where)
{
    if (v.is_string()) {
        try {
            return parse_rat(v.get<std::string>());
        } catch (const ParseError& e) {
            throw ParseError(where + ": " + e.what());
        }
    }
    if (v.is_number_integer()) return Rat(v.get<long>());
    throw ParseError(where + ": expected a rational string");
}

inline QuadraticForm5 parse_form(const nlohmann::json& v, const std::string& name)
{
    if (!v.is_array()) throw ParseError(name + ": expected an array");
    QuadraticForm5 q;
    if (v.size() == 15) {
        // x0^2, x0x1, .., x0x4, x1^2, .., x4^2
        for (size_t k = 0; k < 15; ++k) q.c[k] = json_rat(v[k], name + "[" + std::to_string(k) + "]");
        return q;
    }
    if (v.size() == 5) {
        Rat M[5][5];
        for (int i = 0; i < 5; ++i) {
            if (!v[i].is_array() || v[i].size() != 5) throw ParseError(name + "[" + std::to_string(i) + "]: expected 5 entries");
            for (int j = 0; j < 5; ++j)
                M[i][j] = json_rat(v[i][j], name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
        }
        for (int i = 0; i < 5; ++i)
            for (int j = i; j < 5; ++j) {
                if (M[i][j] != M[j][i])
                    throw ParseError(name + ": Gram matrix not symmetric at (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
                q.coeff(i, j) = i == j ? M[i][i] : 2 * M[i][j];
            }
        return q;
    }
    throw ParseError(name + ": expected 15 coefficients or a 5x5 Gram matrix");
}

inline fixtures::PencilInput parse_pencil_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("pencil file must be a JSON object");
    for (const char* k : {"Q0", "Q1"})
        if (!j.contains(k)) throw ParseError(std::string("missing key ") + k);
    fixtures::PencilInput in;
    in.label = j.value("label", std::string("pencil"));
    in.Q0 = parse_form(j["Q0"], "Q0");
    in.Q1 = parse_form(j["Q1"], "Q1");
    return in;
}

inline Json form_json(const QuadraticForm5& q)
{
    Json a = Json::array();
    for (auto& c : q.c) a.push_back(c.get_str());
    return a;
}

inline Json pencil_file_json(const fixtures::PencilInput& in)
{
    return Json{{"label", in.label}, {"Q0", form_json(in.Q0)}, {"Q1", form_json(in.Q1)}};
}

// ---------------------------------------------------------------------------
// report sections
// ---------------------------------------------------------------------------

inline Json places_json(const std::vector<Place>& v)
{
    Json a = Json::array();
    for (auto& p : v) a.push_back(p.to_string());
    return a;
}

inline Json vector_json(unsigned vec, int n)
{
    Json a = Json::array();
    for (int i = 0; i < n; ++i) a.push_back(Half((int)((vec >> i) & 1u)).to_string());
    return a;
}

inline Json normalization_json(const Pencil& p)
{
    Json m = Json::array();
    for (auto& row : p.mobius) {
        Json r = Json::array();
        for (auto& x : row) r.push_back(x.get_str());
        m.push_back(r);
    }
    return Json{{"mobius", m}, {"Q0", form_json(p.Q0)}, {"Qinf", form_json(p.Qinf)}};
}

inline Json smoothness_json(const SmoothReport& r)
{
    Json ranks = Json::array(), off = Json::array(), fails = Json::array();
    for (auto& [g, k] : r.ranks) ranks.push_back(Json{{"factor", g.to_string()}, {"rank", k}});
    for (auto& [g, b] : r.vertex_off_pencil) off.push_back(Json{{"factor", g.to_string()}, {"qinf_nonzero", b}});
    for (auto& f : r.failures) fails.push_back(f);
    return Json{{"smooth", r.smooth},     {"det_nonzero", r.f_nonzero}, {"det_squarefree", r.f_squarefree},
                {"ranks", ranks},         {"vertex_off_base", off},     {"failures", fails}};
}

inline Json singular_json(const Pencil& p, const SingularLocus& L)
{
    Json pts = Json::array();
    for (auto& s : L.points) {
        Json v = Json::array();
        for (auto& x : s.vertex) v.push_back(x.to_string());
        Json e{{"factor", s.factor.to_string()}, {"degree", s.degree()}};
        if (s.rational()) e["root"] = s.rational_root().get_str();
        e["eps"] = s.eps.to_string();
        // a rational representative exists only when the norm of eps is a square
        if (s.rational() || is_square_rat(norm(s.eps))) e["eps_class"] = detail::rational_eps(s).get_str();
        else e["eps_class"] = nullptr;
        e["eps_norm"] = norm(s.eps).get_str();
        e["qinf_at_vertex"] = s.qinf_at_vertex.to_string();
        e["vertex"] = v;
        pts.push_back(e);
    }
    (void)p;
    return Json{{"f", L.f.to_string()}, {"points", pts}, {"norm_eps", L.norm_eps().get_str()}};
}

inline Json generator_json(const BrauerGenerator& g, const SingularLocus& L)
{
    return Json{{"T", g.label(L)},
                {"reducible", g.reducible()},
                {"field_d", g.d.get_str()},
                {"eps", g.eps_rational.get_str()},
                {"mask", g.mask}};
}

inline Json brauer_json(const BrauerGroupOfG& B, const SingularLocus& L)
{
    Json gens = Json::array(), kernel = Json::array();
    for (auto& g : B.generators) gens.push_back(generator_json(g, L));
    for (auto k : B.kernel) kernel.push_back(k);
    auto V = parity_criterion(B);
    return Json{{"n", B.n}, {"kernel", kernel}, {"generators", gens}, {"verdict", V.summary()},
                {"condition1", V.condition1}, {"condition2", V.condition2}, {"wa_obstructed", V.wa_obstructed}};
}

inline Json rt_json(const BrauerGroupOfG& B, const SingularLocus& L)
{
    Json a = Json::array();
    for (auto& g : B.candidates) {
        bool gen = false;
        for (auto& h : B.generators)
            if (h.points == g.points) gen = true;
        Json e = generator_json(g, L);
        e["generator"] = gen;
        auto R = r_set(g);
        e["R_T"] = places_json(R.places);
        if (g.mask != 0) e["R_prime_T"] = places_json(r_prime_set(g).places);
        e["parity"] = R.parity();
        a.push_back(e);
    }
    return a;
}

inline Json profile_json(const LocalProfile& p, int n)
{
    Json vals = Json::array();
    for (auto& [vec, t] : p.achievable) vals.push_back(Json{{"value", vector_json(vec, n)}, {"witness_t", to_string(t)}});
    return Json{{"place", p.place.to_string()},   {"values", vals},
                {"singleton", p.singleton()},     {"depth", p.depth},
                {"saturation_depth", p.saturation_depth}, {"saturated", p.saturated},
                {"samples", p.samples},           {"solvable_samples", p.solvable}};
}

inline Json obstruction_json(const Pencil& p, const SingularLocus& L, const BrauerGroupOfG& B, const AdelicReport& R)
{
    Json profs = Json::array(), ctrl = Json::array(), sums = Json::array(), sel = Json::array(),
         wit = Json::array();
    for (auto& x : R.profiles) profs.push_back(profile_json(x, R.n));
    for (auto& x : R.controls) ctrl.push_back(profile_json(x, R.n));
    for (auto s : R.sums) sums.push_back(vector_json(s, R.n));
    for (auto& [v, t] : R.zero_selection) sel.push_back(Json{{"place", v.to_string()}, {"t", to_string(t)}});
    for (size_t i = 0; i < R.witnesses.size(); ++i) {
        const auto& w = R.witnesses[i];
        Json ent = Json::array();
        for (auto& e : w.entries)
            ent.push_back(Json{{"place", e.place.to_string()},
                               {"t", e.found ? to_string(e.t) : "none"},
                               {"eps_square", e.eps_square},
                               {"value", e.value.to_string()},
                               {"expected", e.expected.to_string()}});
        wit.push_back(Json{{"T", B.generators[i].label(L)},
                           {"entries", ent},
                           {"sum", w.sum.to_string()},
                           {"R_T_half", w.expected_sum.to_string()},
                           {"ok", w.ok()}});
    }
    Json out{{"n", R.n},
             {"profiles", profs},
             {"controls", ctrl},
             {"sums", sums},
             {"zero_reachable", R.zero_reachable},
             {"wa_obstructed", R.wa_obstructed},
             {"zero_selection", sel},
             {"rt_parities", R.rt_parities},
             {"witnesses", wit},
             {"zero_cycle", R.zero_cycle_note}};
    auto s = suggest_quadratic_field(p, L, B, R);
    Json conds = Json::array();
    for (auto& c : s.conditions)
        conds.push_back(Json{{"place", c.place.to_string()}, {"why", c.why}, {"requirement", c.requirement}});
    out["suggested_d"] = s.found ? Json(s.d.get_str()) : Json(nullptr);
    out["suggestion"] = Json{{"reason", s.reason}, {"conditions", conds}};
    return out;
}

inline Json point_json(const Pencil& p, const SingularLocus* L, const BrauerGroupOfG* B, const QuadraticPoint& x)
{
    Json e{{"d", x.d.get_str()}, {"coords", x.to_string()}, {"verified", verify_point(p, x)}};
    if (x.rational()) return e;
    try {
        e["t"] = to_string(base_point(p, x));
    } catch (const LineInXError&) {
        e["t"] = "line in X";
        return e;
    }
    if (L && B) {
        Json checks = Json::array();
        for (auto& g : B->candidates) {
            auto c = check_pair(p, *L, g, x);
            if (in_support(g, c.t)) continue;
            if (!c.eval_routes_agree || !c.reciprocity || !c.fiber_solvable_everywhere ||
                (c.sqrt_eps_applies && !c.sqrt_eps_rule))
                throw InconsistencyError("evaluation checks failed at " + x.to_string());
            checks.push_back(Json{{"T", g.label(*L)}, {"routes_agree", true}, {"reciprocity", true},
                                  {"sqrt_eps_rule", c.sqrt_eps_applies ? Json(true) : Json(nullptr)}});
        }
        e["checks"] = checks;
    }
    return e;
}

inline Json reduction_json(const Pencil& p, const Int& q, const std::optional<WeightVector>& w)
{
    auto m = integral_model(p, q);
    Json out{{"p", q.get_str()}, {"F0", form_json(m.F0)}, {"F1", form_json(m.F1)}};
    if (w) {
        Json wj = Json::array();
        for (int x : *w) wj.push_back(x);
        out["weights"] = wj;
        out["multiplicity"] = mult_w(m, *w);
    }
    out["multiplicity_zero_weight"] = mult_w(m, {0, 0, 0, 0, 0});
    auto c = split_fiber_certificate(m);
    out["certificate"] = Json{{"verdict", to_string(c.verdict)},
                              {"forms_independent", c.forms_independent},
                              {"det_nonzero", c.det_nonzero},
                              {"det_squarefree", c.det_squarefree},
                              {"low_rank_member", c.low_rank_member},
                              {"reason", c.reason}};
    auto pt = find_local_point(m);
    if (pt) {
        Json x = Json::array();
        for (auto& c2 : pt->x) x.push_back(c2.get_str());
        out["local_point"] = Json{{"x", x}, {"precision", pt->precision}, {"verified", verify_local_point(m, *pt)}};
    } else {
        out["local_point"] = nullptr;
    }
    return out;
}

// ---------------------------------------------------------------------------
// full reports
// ---------------------------------------------------------------------------

struct Config {
    int depth = 6;
    int threads = 1;
};

struct Analysis {
    fixtures::PencilInput input;
    Pencil pencil;
    SmoothReport smooth;
    std::optional<SingularLocus> L;
    std::optional<BrauerGroupOfG> B;
};

inline Json header(const fixtures::PencilInput& in)
{
    return Json{{"schema", schema_version}, {"label", in.label}};
}

// stages: 0 check, 1 singular, 2 brauer, 3 rt, 4 obstruction
inline Json analyse(const fixtures::PencilInput& in, int stage, const Config& cfg, Analysis* keep = nullptr)
{
    Json out = header(in);
    Analysis A;
    A.input = in;
    try {
        A.pencil = normalize(in.Q0, in.Q1);
    } catch (const DomainError& e) {
        // proportional forms or an identically singular pencil
        SmoothReport r;
        r.smooth = false;
        r.f_nonzero = false;
        r.failures.push_back(e.what());
        throw NotSmoothError(r);
    }
    out["normalization"] = normalization_json(A.pencil);
    A.smooth = check_smooth(A.pencil);
    out["smoothness"] = smoothness_json(A.smooth);
    if (!A.smooth.smooth) {
        if (keep) *keep = A;
        throw NotSmoothError(A.smooth);
    }
    if (stage >= 1) {
        A.L = singular_locus(A.pencil);
        out["singular_locus"] = singular_json(A.pencil, *A.L);
    }
    if (stage >= 2) {
        A.B = brauer_group(A.pencil, *A.L);
        out["brauer"] = brauer_json(*A.B, *A.L);
    }
    if (stage >= 3) out["rt"] = rt_json(*A.B, *A.L);
    if (stage >= 4) {
        auto R = adelic_report(A.pencil, *A.L, *A.B, cfg.depth, cfg.threads);
        out["obstruction"] = obstruction_json(A.pencil, *A.L, *A.B, R);
    }
    if (keep) *keep = A;
    return out;
}

// ---------------------------------------------------------------------------
// bundled examples
// ---------------------------------------------------------------------------

struct Example {
    std::string name;
    fixtures::PencilInput input;
    std::vector<std::pair<int, std::vector<std::string>>> points;  // d, coordinates with r = sqrt(d)
};

inline std::vector<Example> examples()
{
    return {
        {"weak_approx", fixtures::weak_approx(3, 7, 2), {}},
        {"nonconstant", fixtures::nonconstant(), {}},
        {"bsd",
         fixtures::bsd(),
         {{-1, {"1", "1", "1", "0", "r"}},
          {2, {"1", "-2", "2r", "r", "1"}},
          {-2, {"4", "9", "6", "0", "5r"}},
          {5, {"0", "0", "r", "1", "1"}},
          {-5, {"5", "0", "0", "0", "r"}},
          {10, {"2r", "-r", "0", "2", "0"}},
          {-10, {"0", "r", "0", "0", "2"}}}},
    };
}

inline Json run_example(const Example& ex, const Config& cfg)
{
    Analysis A;
    Json out = analyse(ex.input, 4, cfg, &A);
    out["example"] = ex.name;
    Json pts = Json::array();
    for (auto& [d, c] : ex.points) pts.push_back(point_json(A.pencil, &*A.L, &*A.B, parse_quadratic_point(d, c)));
    out["points"] = pts;
    return out;
}

}  // namespace dp4::cli
