// Walk through the library on one pencil: singular locus, Br(G)/Br_0, R_T, adelic report.
//   ./build/library_usage            uses the weak approximation example with (a,b,eps) = (3,7,2)
//   ./build/library_usage a b eps    any other member of that family

#include <iostream>

#include "dp4/fixtures.hpp"
#include "dp4/obstruction.hpp"

using namespace dp4;

int main(int argc, char** argv)
{
    Rat a = 3, b = 7, e = 2;
    if (argc == 4) {
        a = parse_rat(argv[1]);
        b = parse_rat(argv[2]);
        e = parse_rat(argv[3]);
    }
    Pencil p = fixtures::make_pencil(fixtures::weak_approx(a, b, e));
    auto smooth = check_smooth(p);
    if (!smooth.smooth) {
        std::cerr << "pencil is not smooth\n";
        return 1;
    }

    auto L = singular_locus(p);
    std::cout << "f = " << L.f.to_string() << "\n";
    for (auto& s : L.points) {
        std::cout << "  point of degree " << s.degree() << ": " << s.factor.to_string();
        if (s.rational()) std::cout << ", eps class " << squarefree_kernel(s.eps.rational_value());
        std::cout << "\n";
    }

    auto B = brauer_group(p, L);
    std::cout << "Br(G)/Br_0 has rank " << B.n << "\n";
    for (auto& T : B.candidates) {
        auto R = r_set(T);
        std::cout << "  T = " << T.label(L) << ": R_T = {";
        for (size_t i = 0; i < R.places.size(); ++i) std::cout << (i ? ", " : "") << R.places[i].to_string();
        std::cout << "}, " << R.parity() << "\n";
    }

    auto rep = adelic_report(p, L, B, 6, 2);
    for (auto& pr : rep.profiles) {
        std::cout << "  profile at " << pr.place.to_string() << ":";
        for (auto& [mask, t] : pr.achievable) std::cout << " " << mask << " (t = " << to_string(t) << ")";
        std::cout << "\n";
    }
    std::cout << "zero reachable: " << (rep.zero_reachable ? "yes" : "no")
              << ", weak approximation obstructed: " << (rep.wa_obstructed ? "yes" : "no") << "\n";
    std::cout << rep.verdict.summary() << "\n";
}
