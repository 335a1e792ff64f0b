#ifndef VECOFFLOAD_SIMPLEX_HPP
#define VECOFFLOAD_SIMPLEX_HPP

// Dense two-phase primal simplex for the small LPs of the relaxation solver:
// min c.x subject to A x = b, x >= 0. Bland's rule; exact enough at the
// problem sizes here (tens of variables, a handful of rows).

#include <cmath>
#include <cstddef>
#include <vector>

#include "vecoffload/errors.hpp"

namespace vecoffload {

struct LpProblem {
    std::size_t n = 0;                   // variables
    std::vector<std::vector<double>> a;  // m rows of n coefficients
    std::vector<double> b;               // m right-hand sides
    std::vector<double> c;               // n objective coefficients
    double c0 = 0.0;                     // objective constant
};

struct LpSolution {
    std::vector<double> x;
    double value = 0.0;
};

namespace lpdetail {

constexpr double kEps = 1e-9;

struct Tableau {
    std::size_t rows, cols;           // constraint rows, total columns incl. rhs
    std::vector<double> t;            // (rows+1) x cols, last row = objective
    std::vector<std::size_t> basis;   // basic variable per row

    double& at(std::size_t r, std::size_t c) { return t[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return t[r * cols + c]; }

    void pivot(std::size_t pr, std::size_t pc) {
        const double p = at(pr, pc);
        for (std::size_t c = 0; c < cols; ++c) at(pr, c) /= p;
        for (std::size_t r = 0; r <= rows; ++r) {
            if (r == pr) continue;
            const double f = at(r, pc);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < cols; ++c) at(r, c) -= f * at(pr, c);
        }
        basis[pr] = pc;
    }

    // Bland's rule over the first n_vars columns; returns false at optimality.
    bool step(std::size_t n_vars) {
        std::size_t pc = n_vars;
        for (std::size_t c = 0; c < n_vars; ++c) {
            if (at(rows, c) < -kEps) {
                pc = c;
                break;
            }
        }
        if (pc == n_vars) return false;
        std::size_t pr = rows;
        double best = 0.0;
        for (std::size_t r = 0; r < rows; ++r) {
            if (at(r, pc) <= kEps) continue;
            const double ratio = at(r, cols - 1) / at(r, pc);
            if (pr == rows || ratio < best - 1e-12 ||
                (std::abs(ratio - best) <= 1e-12 && basis[r] < basis[pr])) {
                pr = r;
                best = ratio;
            }
        }
        if (pr == rows) throw LpError("unbounded linear program");
        pivot(pr, pc);
        return true;
    }
};

}  // namespace lpdetail

inline LpSolution solve_lp(const LpProblem& p) {
    const std::size_t m = p.a.size();
    const std::size_t n = p.n;
    lpdetail::Tableau tb;
    tb.rows = m;
    tb.cols = n + m + 1;  // variables, artificials, rhs
    tb.t.assign((m + 1) * tb.cols, 0.0);
    tb.basis.resize(m);

    for (std::size_t r = 0; r < m; ++r) {
        const double sign = p.b[r] < 0.0 ? -1.0 : 1.0;
        for (std::size_t c = 0; c < n; ++c) tb.at(r, c) = sign * p.a[r][c];
        tb.at(r, n + r) = 1.0;
        tb.at(r, tb.cols - 1) = sign * p.b[r];
        tb.basis[r] = n + r;
    }
    // phase 1: minimize the artificial sum
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c <= tb.cols - 1; ++c)
            if (c < n || c == tb.cols - 1) tb.at(m, c) -= tb.at(r, c);
    while (tb.step(n)) {
    }
    if (tb.at(m, tb.cols - 1) < -lpdetail::kEps) throw LpError("infeasible linear program");
    // drive any artificial still in the basis out of it
    for (std::size_t r = 0; r < m; ++r) {
        if (tb.basis[r] < n) continue;
        std::size_t pc = n;
        for (std::size_t c = 0; c < n; ++c) {
            if (std::abs(tb.at(r, c)) > lpdetail::kEps) {
                pc = c;
                break;
            }
        }
        if (pc < n) tb.pivot(r, pc);
        // otherwise the row is redundant; leave the artificial at zero
    }

    // phase 2: install the real objective, reduced over the current basis
    for (std::size_t c = 0; c < tb.cols; ++c) tb.at(m, c) = 0.0;
    for (std::size_t c = 0; c < n; ++c) tb.at(m, c) = p.c[c];
    for (std::size_t r = 0; r < m; ++r) {
        if (tb.basis[r] >= n) continue;
        const double f = tb.at(m, tb.basis[r]);
        if (f == 0.0) continue;
        for (std::size_t c = 0; c < tb.cols; ++c) tb.at(m, c) -= f * tb.at(r, c);
    }
    while (tb.step(n)) {
    }

    LpSolution sol;
    sol.x.assign(n, 0.0);
    for (std::size_t r = 0; r < m; ++r)
        if (tb.basis[r] < n) sol.x[tb.basis[r]] = tb.at(r, tb.cols - 1);
    sol.value = p.c0;
    for (std::size_t c = 0; c < n; ++c) sol.value += p.c[c] * sol.x[c];
    return sol;
}

}  // namespace vecoffload

#endif  // VECOFFLOAD_SIMPLEX_HPP
