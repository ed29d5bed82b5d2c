#pragma once

#include <tuple>

#include "dp4/pencil.hpp"

namespace dp4::fixtures {

struct PencilInput {
    std::string label;
    QuadraticForm5 Q0, Q1;  // members at T = 0 and T = 1
};

inline QuadraticForm5 form(std::initializer_list<std::tuple<int, int, long>> terms)
{
    QuadraticForm5 q;
    for (auto& [i, j, c] : terms) q.coeff(i, j) += Rat(c);
    return q;
}

// Q0 = x0x1 - x2^2 + eps x3^2, Q1 = a x0^2 + b x1^2 - ab x2^2 - eps x4^2
inline PencilInput weak_approx(const Rat& a, const Rat& b, const Rat& eps)
{
    PencilInput p;
    p.label = "weak_approx(" + a.get_str() + "," + b.get_str() + "," + eps.get_str() + ")";
    p.Q0.coeff(0, 1) = 1;
    p.Q0.coeff(2, 2) = -1;
    p.Q0.coeff(3, 3) = eps;
    p.Q1.coeff(0, 0) = a;
    p.Q1.coeff(1, 1) = b;
    p.Q1.coeff(2, 2) = -a * b;
    p.Q1.coeff(4, 4) = -eps;
    return p;
}

// Q0 = -55x1^2 + 2x1x2 + x3^2 + 5x4^2, Qinf = 33x0^2 - 5x1^2 - x2^2 + 10x3x4
inline PencilInput nonconstant()
{
    QuadraticForm5 q0 = form({{1, 1, -55}, {1, 2, 2}, {3, 3, 1}, {4, 4, 5}});
    QuadraticForm5 qi = form({{0, 0, 33}, {1, 1, -5}, {2, 2, -1}, {3, 4, 10}});
    return {"nonconstant", q0, q0 + qi};
}

// Q0 = (x0 + x1)(x0 + 2x1) - x2^2 + 5x4^2, Q1 = 2(x0x1 - x2^2 + 5x3^2)
inline PencilInput bsd()
{
    QuadraticForm5 q0 = form({{0, 0, 1}, {0, 1, 3}, {1, 1, 2}, {2, 2, -1}, {4, 4, 5}});
    QuadraticForm5 q1 = form({{0, 1, 2}, {2, 2, -2}, {3, 3, 10}});
    return {"bsd", q0, q1};
}

inline std::vector<PencilInput> all()
{
    return {weak_approx(3, 7, 2), nonconstant(), bsd()};
}

inline Pencil make_pencil(const PencilInput& in) { return normalize(in.Q0, in.Q1); }

}  // namespace dp4::fixtures
