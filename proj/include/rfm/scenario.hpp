#pragma once
// Scenario files (JSON) and report serialization.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rfm/analysis.hpp"
#include "rfm/integrator.hpp"
#include "rfm/orbit.hpp"

namespace rfm {

enum class SystemKind { rfm, tanh_demo };

struct Scenario {
    std::string id;
    SystemKind system = SystemKind::rfm;
    std::size_t n = 0;                   ///< sites; 1 for the demo
    double T = 1.0;
    std::vector<Signal> channels;        ///< n + 1 rate channels, or the single demo input
    StepConfig solver;
    double orbit_tol = 1e-10;
    int grid_M = kDefaultStepsPerPeriod;
    std::optional<Condition> condition;  ///< declared structure, validated on parse
    std::optional<std::vector<double>> x0;
    std::optional<std::pair<double, double>> t_span;

    RateSchedule schedule() const;  ///< rfm only
    System to_system() const;
    OrbitConfig orbit_config() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Reads and validates a scenario file. Throws std::runtime_error with
/// "file not found" for a missing path and ValidationError otherwise.
/// Non-fatal notes (e.g. phase wrap-around) are appended to `warnings`.
Scenario parse_scenario(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
Scenario scenario_from_json(const nlohmann::json& doc, std::vector<std::string>* warnings = nullptr);
nlohmann::json to_json(const Scenario& scenario);

/// Flat object: eta2.i.j, eta3.i.i.j, R_P, R_C, goe_gap, residuals.*, ...
nlohmann::json to_json(const MomentReport& report);
nlohmann::json to_json(const GoeVerdict& verdict);
nlohmann::json to_json(const Equilibrium& eq);

/// Same layout as the trajectory CSV: t,x1..xn.
void write_orbit_csv(std::ostream& out, const PeriodicOrbit& orbit);

/// scenario_id,n,T,R_P,R_C,gap,zn_sign_changes,matched_conditions,classification
void write_batch_csv(std::ostream& out, const std::vector<BatchRow>& rows);
nlohmann::json batch_json(const std::vector<BatchRow>& rows);

/// %.17g
std::string format_full(double v);

} // namespace rfm
