#pragma once
// Steady state of the RFM under constant rates.

#include <optional>
#include <span>
#include <vector>

namespace rfm {

struct Equilibrium {
    std::vector<double> e;   ///< site densities, each in (0,1)
    double R_C = 0.0;        ///< steady production rate mean_n * e_n
    double residual = 0.0;   ///< max |inflow - outflow| over the sites
};

struct BackSubstitution {
    std::vector<double> e;
    /// u_0 (1 - e_1) - R: zero exactly at the equilibrium throughput.
    double defect = 0.0;
};

/// For a trial throughput R, sets every outflow to R from the exit backwards:
/// e_n = R / u_n, e_i = R / (u_i (1 - e_{i+1})). nullopt when some e_i leaves
/// (0,1).
std::optional<BackSubstitution> back_substitute(double R, std::span<const double> means);

/// Bisection on the throughput with back-substitution. Throws
/// ContractViolation for non-positive means.
Equilibrium solve_equilibrium(std::span<const double> means);

/// max_i |u_{i-1} e_{i-1} (1 - e_i) - u_i e_i (1 - e_{i+1})| with e_0 = 1, e_{n+1} = 0.
double equilibrium_residual(std::span<const double> e, std::span<const double> means);

} // namespace rfm
