#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "dp4/cli.hpp"

using namespace dp4;
using cli::Json;

namespace {

enum Exit { ok = 0, other = 1, parse = 2, not_smooth = 3, inconsistent = 4 };

fixtures::PencilInput read_pencil(const std::string& path)
{
    std::stringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
    } else {
        std::ifstream f(path);
        if (!f) throw ParseError("cannot open " + path);
        ss << f.rdbuf();
    }
    return cli::parse_pencil_json(ss.str());
}

int default_threads()
{
    if (const char* e = std::getenv("DP4_THREADS")) {
        try {
            return std::max(1, std::stoi(e));
        } catch (...) {
        }
    }
    return 1;
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Brauer-Manin diagnostics for del Pezzo surfaces of degree 4 given as pencils of quadrics"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string out_path;
    cli::Config cfg;
    cfg.threads = default_threads();
    app.add_option("--out", out_path, "write the report to FILE instead of stdout");

    std::string file;
    auto add_file = [&](CLI::App* s) { s->add_option("file", file, "pencil JSON file, - for stdin")->required(); };

    auto* check = app.add_subcommand("check", "smoothness of the pencil");
    auto* singular = app.add_subcommand("singular", "singular locus with eps data and vertices");
    auto* brauer = app.add_subcommand("brauer", "Br(G)/Br_0 generators and the parity verdict");
    auto* rt = app.add_subcommand("rt", "R_T and R'_T for every degree-2 subscheme T");
    auto* obstruction = app.add_subcommand("obstruction", "local profiles and the adelic report");
    for (auto* s : {check, singular, brauer, rt, obstruction}) add_file(s);
    obstruction->add_option("--depth", cfg.depth, "sampling depth")->check(CLI::Range(1, 40));
    obstruction->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));

    auto* evaluate = app.add_subcommand("evaluate", "inv_v beta_T at one point of P^1 (normalized coordinate)");
    add_file(evaluate);
    std::string place_s, t_s;
    evaluate->add_option("--place", place_s, "place: inf or a prime")->required();
    evaluate->add_option("--t", t_s, "rational or inf")->required();

    auto* points = app.add_subcommand("points", "box search for points over Q(sqrt d)");
    add_file(points);
    std::string d_s = "1";
    int bound = 2;
    points->add_option("--d", d_s, "d, 1 for rational points");
    points->add_option("--bound", bound, "coordinate bound")->check(CLI::Range(1, 6));
    points->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));

    auto* verify = app.add_subcommand("verify-point", "exact check of a point over Q(sqrt d)");
    add_file(verify);
    std::string coords_s;
    verify->add_option("--d", d_s, "d, 1 for rational points");
    verify->add_option("--coords", coords_s, "five coordinates, comma separated; r is sqrt(d)")->required();

    auto* reduce = app.add_subcommand("reduce", "integral model at p: multiplicity, split certificate, local point");
    add_file(reduce);
    std::string p_s, w_s;
    reduce->add_option("--p", p_s, "prime")->required();
    reduce->add_option("--weights", w_s, "w0,w1,w2,w3,w4");

    auto* ex = app.add_subcommand("examples", "bundled examples");
    auto* ex_list = ex->add_subcommand("list", "list example names");
    auto* ex_run = ex->add_subcommand("run", "full report for one example or all");
    std::string ex_name;
    bool ex_all = false;
    ex_run->add_option("name", ex_name, "example name");
    ex_run->add_flag("--all", ex_all, "run every example");
    ex_run->add_option("--depth", cfg.depth, "sampling depth")->check(CLI::Range(1, 40));
    ex_run->add_option("--threads", cfg.threads, "worker threads")->check(CLI::Range(1, 256));
    ex->require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : parse;
    }

    Json report;
    int status = ok;
    try {
        if (ex->parsed()) {
            if (ex_list->parsed()) {
                report = Json::array();
                for (auto& e : cli::examples()) report.push_back(Json{{"name", e.name}, {"label", e.input.label}});
            } else {
                if (ex_all == !ex_name.empty()) throw ParseError("examples run needs a NAME or --all");
                report = Json::array();
                bool found = false;
                for (auto& e : cli::examples())
                    if (ex_all || e.name == ex_name) {
                        report.push_back(cli::run_example(e, cfg));
                        found = true;
                    }
                if (!found) throw ParseError("unknown example " + ex_name);
                if (!ex_all) report = report[0];
            }
        } else {
            auto in = read_pencil(file);
            if (check->parsed()) report = cli::analyse(in, 0, cfg);
            if (singular->parsed()) report = cli::analyse(in, 1, cfg);
            if (brauer->parsed()) report = cli::analyse(in, 2, cfg);
            if (rt->parsed()) report = cli::analyse(in, 3, cfg);
            if (obstruction->parsed()) report = cli::analyse(in, 4, cfg);
            if (evaluate->parsed()) {
                cli::Analysis A;
                report = cli::analyse(in, 2, cfg, &A);
                Place v = parse_place(place_s);
                ProjPoint t;
                if (t_s != "inf") t = parse_rat(t_s);
                Json vals = Json::array();
                for (auto& g : A.B->generators) {
                    Json e{{"T", g.label(*A.L)}};
                    e["value"] = in_support(g, t) ? Json("undefined: t lies in T") : Json(eval_at_t(g, t, v).to_string());
                    vals.push_back(e);
                }
                report["evaluation"] = Json{{"place", v.to_string()},
                                            {"t", to_string(t)},
                                            {"input_t", t ? to_string(A.pencil.input_parameter(*t)) : "inf"},
                                            {"fiber_solvable", fiber_solvable(A.pencil, *A.L, t, v)},
                                            {"values", vals}};
            }
            if (points->parsed()) {
                cli::Analysis A;
                report = cli::analyse(in, 2, cfg, &A);
                Rat d = parse_rat(d_s);
                Json pts = Json::array();
                for (auto& x : search_points(A.pencil, d, bound, cfg.threads))
                    pts.push_back(cli::point_json(A.pencil, &*A.L, &*A.B, x));
                report["points"] = Json{{"d", squarefree_kernel(d).get_str()}, {"bound", bound}, {"found", pts}};
            }
            if (verify->parsed()) {
                cli::Analysis A;
                report = cli::analyse(in, 2, cfg, &A);
                Rat d = parse_rat(d_s);
                if (d.get_den() != 1) throw ParseError("d must be an integer");
                auto x = parse_quadratic_point(d.get_num(), split_list(coords_s));
                report["point"] = cli::point_json(A.pencil, &*A.L, &*A.B, x);
                if (!verify_point(A.pencil, x)) status = other;
            }
            if (reduce->parsed()) {
                Rat p = parse_rat(p_s);
                if (p.get_den() != 1 || !is_prime(p.get_num())) throw ParseError("--p must be a prime");
                std::optional<WeightVector> w;
                if (!w_s.empty()) {
                    auto parts = split_list(w_s);
                    if (parts.size() != 5) throw ParseError("--weights needs five integers");
                    WeightVector wv;
                    for (int i = 0; i < 5; ++i) {
                        try {
                            wv[i] = std::stoi(parts[i]);
                        } catch (...) {
                            throw ParseError("bad weight " + parts[i]);
                        }
                    }
                    w = wv;
                }
                cli::Analysis A;
                report = cli::analyse(in, 0, cfg, &A);
                report["reduction"] = cli::reduction_json(A.pencil, p.get_num(), w);
            }
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return parse;
    } catch (const NotSmoothError& e) {
        std::cerr << "not smooth: " << e.what() << "\n";
        Json r = cli::header(read_pencil(file));
        r["smoothness"] = cli::smoothness_json(e.report);
        std::cout << r.dump(2) << "\n";
        return not_smooth;
    } catch (const InconsistencyError& e) {
        std::cerr << "internal inconsistency: " << e.what() << "\n";
        return inconsistent;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return parse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return other;
    }

    std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out_path);
        if (!f) {
            std::cerr << "cannot write " << out_path << "\n";
            return other;
        }
        f << text;
    }
    return status;
}
