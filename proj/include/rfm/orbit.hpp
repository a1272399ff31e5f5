#pragma once
// The attracting T-periodic solution and its period-averaged moments.

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rfm/equilibrium.hpp"
#include "rfm/integrator.hpp"

namespace rfm {

struct OrbitConfig {
    /// Samples per period; also the RK4 step count per period.
    int grid_M = kDefaultStepsPerPeriod;
    double tol = 1e-10;
    int max_periods = 2000;

    friend bool operator==(const OrbitConfig&, const OrbitConfig&) = default;
};

struct PeriodicOrbit {
    double period = 0.0;
    std::size_t dimension = 0;
    std::vector<double> grid;                 ///< t_m = m T / M, m = 0..M-1
    std::vector<std::vector<double>> gamma;   ///< gamma[i][m], component i at t_m
    std::vector<std::vector<double>> rates;   ///< rates[c][m], input channel c at t_m
    double closure_error = 0.0;               ///< |P(gamma(0)) - gamma(0)|_inf
    int periods_used = 0;
    double contraction_ratio = 0.0;           ///< last ratio of successive displacements
    /// (1/T) * integral of the production integrand over the final period,
    /// carried as an ODE accumulator.
    double mean_production = 0.0;
    double max_clamp = 0.0;

    std::size_t samples() const noexcept { return grid.size(); }
    std::vector<double> state_at(std::size_t m) const;
    std::vector<double> rates_at(std::size_t m) const;
};

/// Iterates the period map from `seed` (default: the constant-rate
/// equilibrium) until |P(x) - x|_inf < cfg.tol, then samples one period.
/// Throws OrbitNotConverged after cfg.max_periods iterations.
PeriodicOrbit find_periodic_orbit(const System& system, const OrbitConfig& cfg = {},
                                  std::optional<std::span<const double>> seed = std::nullopt);

using OrbitIntegrand = std::function<double(double t, std::span<const double> state, std::span<const double> rates)>;

/// Periodic rectangle rule over the orbit grid (endpoints identified).
double period_average(const PeriodicOrbit& orbit, const OrbitIntegrand& integrand);
double period_average(std::span<const double> samples);

/// Residuals of the moment identities; all vanish on an exact orbit, slacks
/// are nonnegative.
struct IdentityResiduals {
    double flow = 0.0;          ///< eta_{0,1} + eta_{n,n}
    double production = 0.0;    ///< R_P + eta_{0,1} - R_C
    std::vector<double> eta3;   ///< index i = 0..n
    std::vector<double> slack;  ///< index i-1 for site i = 1..n

    double max_abs_eta3() const;
    double min_slack() const;
    std::vector<std::pair<std::string, double>> named() const;
};

struct MomentReport {
    std::size_t n = 0;
    std::vector<double> e;
    std::vector<double> mean_x;
    std::vector<double> mean_z;
    std::map<std::pair<std::size_t, std::size_t>, double> eta2;
    std::map<std::array<std::size_t, 3>, double> eta3;
    double R_P = 0.0;
    double R_C = 0.0;
    double goe_gap = 0.0;
    std::vector<bool> constant_site;   ///< gamma_i flagged constant
    IdentityResiduals residuals;

    /// eta_{i,j}; zero whenever j is 0 or n+1.
    double eta(std::size_t i, std::size_t j) const;
    /// eta_{i,j,k}; zero whenever j or k is 0 or n+1.
    double eta(std::size_t i, std::size_t j, std::size_t k) const;
    bool degenerate() const;
};

inline constexpr double kConstantComponentTolerance = 1e-9;

/// Fills the moments used by the identities; with full_table every
/// eta_{i,j}, i = 0..n, j = 1..n, is computed.
MomentReport compute_moments(const PeriodicOrbit& orbit, const RateSchedule& schedule, const Equilibrium& eq,
                             bool full_table = false);

IdentityResiduals identity_residuals(const MomentReport& report, const Equilibrium& eq);

/// Number of sign changes of samples around the cycle (wrap-around included).
int cyclic_sign_changes(std::span<const double> samples);

} // namespace rfm
