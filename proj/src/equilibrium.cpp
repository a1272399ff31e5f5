#include "rfm/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rfm/error.hpp"

namespace rfm {

std::optional<BackSubstitution> back_substitute(double R, std::span<const double> means) {
    if (means.size() < 2) throw ContractViolation("back_substitute: need at least two rates");
    if (!(R > 0.0)) throw ContractViolation("back_substitute: throughput must be positive");
    const std::size_t n = means.size() - 1;
    BackSubstitution out;
    out.e.resize(n);
    double next = 0.0; // e_{i+1}, starting from e_{n+1} = 0
    for (std::size_t i = n; i >= 1; --i) {
        const double ei = R / (means[i] * (1.0 - next));
        if (!(ei > 0.0 && ei < 1.0)) return std::nullopt;
        out.e[i - 1] = ei;
        next = ei;
    }
    out.defect = means[0] * (1.0 - out.e[0]) - R;
    return out;
}

double equilibrium_residual(std::span<const double> e, std::span<const double> means) {
    const std::size_t n = e.size();
    if (means.size() != n + 1) throw ContractViolation("equilibrium_residual: size mismatch");
    auto at = [&](std::size_t i) { return i == 0 ? 1.0 : i == n + 1 ? 0.0 : e[i - 1]; };
    double worst = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double in = means[i - 1] * at(i - 1) * (1.0 - at(i));
        const double out = means[i] * at(i) * (1.0 - at(i + 1));
        worst = std::max(worst, std::abs(in - out));
    }
    return worst;
}

namespace {

// One Newton step on F_i(e) = u_{i-1} e_{i-1} (1 - e_i) - u_i e_i (1 - e_{i+1}).
// Near a traffic jam the throughput parameterization loses ~10 digits; the
// full system does not. Returns e unchanged if the step leaves (0,1)^n.
std::vector<double> newton_sweep(const std::vector<double>& e, std::span<const double> u) {
    const std::size_t n = e.size();
    auto at = [&](std::size_t i) { return i == 0 ? 1.0 : i == n + 1 ? 0.0 : e[i - 1]; };
    // Dense augmented matrix [J | -F]; n is small.
    std::vector<double> a(n * (n + 1), 0.0);
    auto A = [&](std::size_t r, std::size_t c) -> double& { return a[r * (n + 1) + c]; };
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t r = i - 1;
        if (i >= 2) A(r, r - 1) = u[i - 1] * (1.0 - at(i));
        A(r, r) = -u[i - 1] * at(i - 1) - u[i] * (1.0 - at(i + 1));
        if (i <= n - 1) A(r, r + 1) = u[i] * at(i);
        A(r, n) = -(u[i - 1] * at(i - 1) * (1.0 - at(i)) - u[i] * at(i) * (1.0 - at(i + 1)));
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(A(r, c)) > std::abs(A(piv, c))) piv = r;
        if (A(piv, c) == 0.0) return e;
        if (piv != c)
            for (std::size_t k = 0; k <= n; ++k) std::swap(A(c, k), A(piv, k));
        for (std::size_t r = c + 1; r < n; ++r) {
            const double f = A(r, c) / A(c, c);
            if (f == 0.0) continue;
            for (std::size_t k = c; k <= n; ++k) A(r, k) -= f * A(c, k);
        }
    }
    std::vector<double> delta(n);
    for (std::size_t c = n; c-- > 0;) {
        double s = A(c, n);
        for (std::size_t k = c + 1; k < n; ++k) s -= A(c, k) * delta[k];
        delta[c] = s / A(c, c);
    }
    std::vector<double> next(n);
    for (std::size_t i = 0; i < n; ++i) {
        next[i] = e[i] + delta[i];
        if (!(next[i] > 0.0 && next[i] < 1.0)) return e;
    }
    return next;
}

} // namespace

Equilibrium solve_equilibrium(std::span<const double> means) {
    if (means.size() < 2) throw ContractViolation("solve_equilibrium: need at least two rates");
    for (std::size_t i = 0; i < means.size(); ++i) {
        if (!(means[i] > 0.0 && std::isfinite(means[i])))
            throw ContractViolation("solve_equilibrium: mean rate " + std::to_string(i) + " must be positive");
    }

    // Upper end of the feasible throughputs: e_n < 1 forces R < u_n. Expand
    // downwards until feasible, then bisect on feasibility.
    double infeasible = means.back();
    double feasible = infeasible;
    while (!back_substitute(feasible *= 0.5, means)) {
        infeasible = feasible;
        if (feasible < 1e-300) throw Error("solve_equilibrium: no feasible throughput found");
    }
    for (int it = 0; it < 200 && infeasible - feasible > 1e-15 * infeasible; ++it) {
        const double mid = 0.5 * (feasible + infeasible);
        (back_substitute(mid, means) ? feasible : infeasible) = mid;
    }
    const double r_hi = feasible;

    // The defect decreases in R: positive (-> u_0) as R -> 0+, and -R where e_1 reaches 1.
    double lo = 0.0;
    double hi = r_hi;
    auto defect = [&](double R) {
        auto b = back_substitute(R, means);
        return b ? b->defect : -R;
    };
    if (defect(hi) > 0.0) {
        // Only possible when R_hi is limited by roundoff; accept the boundary.
        lo = hi;
    } else {
        // Runs to full precision; the 1e-14 relative width is reached early
        // and the remaining halvings are cheap.
        for (int it = 0; it < 2200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            (defect(mid) > 0.0 ? lo : hi) = mid;
        }
    }

    const double best = lo > 0.0 && std::abs(defect(lo)) <= std::abs(defect(hi)) ? lo : hi;
    auto sol = back_substitute(best, means);
    if (!sol) throw Error("solve_equilibrium: bracket failure (no feasible root); this is a bug");
    Equilibrium eq;
    eq.e = std::move(sol->e);
    eq.residual = equilibrium_residual(eq.e, means);
    for (int sweep = 0; sweep < 3 && eq.residual > 0.0; ++sweep) {
        std::vector<double> next = newton_sweep(eq.e, means);
        const double r = equilibrium_residual(next, means);
        if (!(r < eq.residual)) break;
        eq.e = std::move(next);
        eq.residual = r;
    }
    eq.R_C = means.back() * eq.e.back();
    return eq;
}

} // namespace rfm
