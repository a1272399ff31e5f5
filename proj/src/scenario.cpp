#include "rfm/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rfm/error.hpp"

namespace rfm {
namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) throw ValidationError(path + key, "missing required field");
    return *it;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ValidationError(path, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(path, "must be finite");
    return d;
}

long integer(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ValidationError(path, "expected an integer");
    return v.get<long>();
}

Signal parse_signal(const json& c, const std::string& path, std::vector<std::string>* warnings) {
    if (!c.is_object()) throw ValidationError(path, "expected an object {mean, harmonics}");
    Signal s;
    s.mean = number(require(c, "mean", path + "."), path + ".mean");
    if (const auto it = c.find("harmonics"); it != c.end()) {
        if (!it->is_array()) throw ValidationError(path + ".harmonics", "expected an array");
        for (std::size_t h = 0; h < it->size(); ++h) {
            const std::string hp = path + ".harmonics[" + std::to_string(h) + "]";
            const json& hj = (*it)[h];
            if (!hj.is_object()) throw ValidationError(hp, "expected an object {k, amplitude, phase}");
            Harmonic harm;
            harm.k = static_cast<int>(integer(require(hj, "k", hp + "."), hp + ".k"));
            if (harm.k < 1) throw ValidationError(hp + ".k", "harmonic index must be >= 1");
            harm.amplitude = number(require(hj, "amplitude", hp + "."), hp + ".amplitude");
            if (harm.amplitude < 0.0) throw ValidationError(hp + ".amplitude", "must be nonnegative");
            const double phase = hj.contains("phase") ? number(hj["phase"], hp + ".phase") : 0.0;
            harm.phase = normalize_phase(phase);
            if (harm.phase != phase && warnings)
                warnings->push_back(hp + ".phase: " + format_full(phase) + " normalized to " +
                                    format_full(harm.phase));
            s.harmonics.push_back(harm);
        }
    }
    return s;
}

StepConfig parse_solver(const json& j) {
    StepConfig cfg;
    if (!j.is_object()) throw ValidationError("solver", "expected an object");
    if (const auto it = j.find("method"); it != j.end()) {
        const std::string m = it->is_string() ? it->get<std::string>() : "";
        if (m == "fixed_rk4")
            cfg.method = Method::fixed_rk4;
        else if (m == "adaptive_embedded")
            cfg.method = Method::adaptive_embedded;
        else
            throw ValidationError("solver.method", "expected \"fixed_rk4\" or \"adaptive_embedded\"");
    }
    if (j.contains("steps_per_period"))
        cfg.steps_per_period = static_cast<int>(integer(j["steps_per_period"], "solver.steps_per_period"));
    if (j.contains("fixed_step")) cfg.fixed_step = number(j["fixed_step"], "solver.fixed_step");
    if (j.contains("rel_tol")) cfg.rel_tol = number(j["rel_tol"], "solver.rel_tol");
    if (j.contains("abs_tol")) cfg.abs_tol = number(j["abs_tol"], "solver.abs_tol");
    if (j.contains("max_step")) cfg.max_step = number(j["max_step"], "solver.max_step");
    try {
        cfg.validate();
    } catch (const ContractViolation& ex) {
        throw ValidationError("solver", ex.what());
    }
    return cfg;
}

json signal_json(const Signal& s) {
    json h = json::array();
    for (const auto& harm : s.harmonics) h.push_back({{"k", harm.k}, {"amplitude", harm.amplitude}, {"phase", harm.phase}});
    return {{"mean", s.mean}, {"harmonics", h}};
}

} // namespace

std::string format_full(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RateSchedule Scenario::schedule() const {
    if (system != SystemKind::rfm) throw ContractViolation("scenario '" + id + "' is not an RFM scenario");
    return RateSchedule(T, channels);
}

System Scenario::to_system() const {
    if (system == SystemKind::rfm) return RfmSystem{schedule()};
    return TanhDemoSystem{channels.at(0), T};
}

OrbitConfig Scenario::orbit_config() const {
    OrbitConfig cfg;
    cfg.grid_M = grid_M;
    cfg.tol = orbit_tol;
    return cfg;
}

Scenario scenario_from_json(const json& doc, std::vector<std::string>* warnings) {
    if (!doc.is_object()) throw ValidationError("$", "scenario must be a JSON object");
    Scenario s;
    const json& id = require(doc, "id", "");
    if (!id.is_string()) throw ValidationError("id", "expected a string");
    s.id = id.get<std::string>();

    const std::string system = doc.value("system", std::string("rfm"));
    if (system == "rfm")
        s.system = SystemKind::rfm;
    else if (system == "tanh_demo")
        s.system = SystemKind::tanh_demo;
    else
        throw ValidationError("system", "expected \"rfm\" or \"tanh_demo\"");

    s.T = number(require(doc, "T", ""), "T");
    if (!(s.T > 0.0)) throw ValidationError("T", "period must be positive");

    const json& channels = require(doc, "channels", "");
    if (!channels.is_array() || channels.empty()) throw ValidationError("channels", "expected a non-empty array");
    for (std::size_t i = 0; i < channels.size(); ++i)
        s.channels.push_back(parse_signal(channels[i], "channels[" + std::to_string(i) + "]", warnings));

    if (s.system == SystemKind::rfm) {
        const long n = integer(require(doc, "n", ""), "n");
        if (n < 1) throw ValidationError("n", "must be >= 1");
        s.n = static_cast<std::size_t>(n);
        if (s.channels.size() != s.n + 1)
            throw ValidationError("channels", "expected n+1 = " + std::to_string(s.n + 1) + " channels, got " +
                                                  std::to_string(s.channels.size()));
        for (std::size_t i = 0; i < s.channels.size(); ++i) {
            if (!(s.channels[i].mean > 0.0))
                throw ValidationError("channels[" + std::to_string(i) + "].mean",
                                      "rate mean must be positive (channel " + std::to_string(i) + ")");
        }
    } else {
        s.n = 1;
        if (s.channels.size() != 1) throw ValidationError("channels", "tanh_demo takes exactly one input channel");
    }

    if (doc.contains("solver")) s.solver = parse_solver(doc["solver"]);
    if (doc.contains("orbit_tol")) {
        s.orbit_tol = number(doc["orbit_tol"], "orbit_tol");
        if (!(s.orbit_tol > 0.0)) throw ValidationError("orbit_tol", "must be positive");
    }
    if (doc.contains("grid_M")) {
        const long m = integer(doc["grid_M"], "grid_M");
        if (m < 1) throw ValidationError("grid_M", "must be >= 1");
        s.grid_M = static_cast<int>(m);
    }
    if (doc.contains("x0")) {
        const json& x0 = doc["x0"];
        if (!x0.is_array()) throw ValidationError("x0", "expected an array");
        std::vector<double> v;
        for (std::size_t i = 0; i < x0.size(); ++i) v.push_back(number(x0[i], "x0[" + std::to_string(i) + "]"));
        if (v.size() != s.n) throw ValidationError("x0", "expected " + std::to_string(s.n) + " components");
        s.x0 = std::move(v);
    }
    if (doc.contains("t_span")) {
        const json& ts = doc["t_span"];
        if (!ts.is_array() || ts.size() != 2) throw ValidationError("t_span", "expected [t0, t1]");
        const double t0 = number(ts[0], "t_span[0]"), t1 = number(ts[1], "t_span[1]");
        if (!(t1 > t0)) throw ValidationError("t_span", "t1 must exceed t0");
        s.t_span = std::make_pair(t0, t1);
    }

    if (s.system == SystemKind::rfm) {
        const RateSchedule probe = RateSchedule::unchecked(s.T, s.channels);
        if (const auto v = validate_positive(probe))
            throw ValidationError("channels[" + std::to_string(v->channel) + "]",
                                  "rate not positive at t=" + format_full(v->t) + " (value " + format_full(v->value) +
                                      ")");
        if (doc.contains("condition")) {
            const json& cj = doc["condition"];
            const auto c = cj.is_string() ? parse_condition(cj.get<std::string>()) : std::nullopt;
            if (!c) throw ValidationError("condition", "expected one of I, II, III, IV, V, VI");
            if (requires_odd(*c) != (s.n % 2 == 1))
                throw ValidationError("condition", "condition " + std::string(to_string(*c)) + " requires " +
                                                       (requires_odd(*c) ? "odd" : "even") + " n");
            for (const auto& r : check_theorem_conditions(probe)) {
                if (r.condition == *c && !r.holds)
                    throw ValidationError("condition", "schedule does not have the structure of condition " +
                                                           std::string(to_string(*c)));
            }
            s.condition = c;
        }
    } else if (doc.contains("condition")) {
        throw ValidationError("condition", "only meaningful for rfm scenarios");
    }
    return s;
}

Scenario parse_scenario(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": file not found");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& ex) {
        throw ValidationError("$", std::string("invalid JSON: ") + ex.what());
    }
    return scenario_from_json(doc, warnings);
}

json to_json(const Scenario& s) {
    json doc;
    doc["id"] = s.id;
    doc["system"] = s.system == SystemKind::rfm ? "rfm" : "tanh_demo";
    if (s.system == SystemKind::rfm) doc["n"] = s.n;
    doc["T"] = s.T;
    doc["channels"] = json::array();
    for (const auto& c : s.channels) doc["channels"].push_back(signal_json(c));
    json solver;
    solver["method"] = s.solver.method == Method::fixed_rk4 ? "fixed_rk4" : "adaptive_embedded";
    solver["steps_per_period"] = s.solver.steps_per_period;
    if (s.solver.fixed_step) solver["fixed_step"] = *s.solver.fixed_step;
    solver["rel_tol"] = s.solver.rel_tol;
    solver["abs_tol"] = s.solver.abs_tol;
    if (s.solver.max_step) solver["max_step"] = *s.solver.max_step;
    doc["solver"] = solver;
    doc["orbit_tol"] = s.orbit_tol;
    doc["grid_M"] = s.grid_M;
    if (s.condition) doc["condition"] = std::string(to_string(*s.condition));
    if (s.x0) doc["x0"] = *s.x0;
    if (s.t_span) doc["t_span"] = {s.t_span->first, s.t_span->second};
    return doc;
}

json to_json(const MomentReport& r) {
    json j = json::object();
    for (const auto& [ij, v] : r.eta2) j["eta2." + std::to_string(ij.first) + "." + std::to_string(ij.second)] = v;
    for (const auto& [ijk, v] : r.eta3)
        j["eta3." + std::to_string(ijk[0]) + "." + std::to_string(ijk[1]) + "." + std::to_string(ijk[2])] = v;
    for (std::size_t i = 0; i < r.n; ++i) {
        j["e." + std::to_string(i + 1)] = r.e[i];
        j["mean_x." + std::to_string(i + 1)] = r.mean_x[i];
        j["mean_z." + std::to_string(i + 1)] = r.mean_z[i];
    }
    j["R_P"] = r.R_P;
    j["R_C"] = r.R_C;
    j["goe_gap"] = r.goe_gap;
    for (const auto& [name, v] : r.residuals.named()) j["residuals." + name] = v;
    return j;
}

json to_json(const GoeVerdict& v) {
    json matched = json::array();
    for (const auto& c : v.matched_conditions) {
        json cj{{"condition", std::string(to_string(c.condition))}};
        if (c.proportionality) {
            json pairs = json::array();
            for (std::size_t p = 0; p < c.proportionality->pairing.size(); ++p) {
                const auto& [a, b] = c.proportionality->pairing[p];
                pairs.push_back({{"i", a}, {"j", b}, {"alpha", c.proportionality->alphas[p]}});
            }
            cj["pairs"] = pairs;
            cj["residual"] = c.proportionality->residual;
        } else {
            cj["constant_channels"] = c.constant_channels;
        }
        matched.push_back(cj);
    }
    return {{"R_P", v.R_P},
            {"R_C", v.R_C},
            {"goe_gap", v.goe_gap},
            {"tolerance", v.tolerance},
            {"classification", std::string(to_string(v.classification))},
            {"degenerate", v.degenerate},
            {"matched_conditions", matched}};
}

json to_json(const Equilibrium& eq) {
    return {{"e", eq.e}, {"R_C", eq.R_C}, {"residual", eq.residual}};
}

void write_orbit_csv(std::ostream& out, const PeriodicOrbit& orbit) {
    out << "t";
    for (std::size_t i = 1; i <= orbit.dimension; ++i) out << ",x" << i;
    out << "\n";
    for (std::size_t m = 0; m < orbit.samples(); ++m) {
        out << format_full(orbit.grid[m]);
        for (std::size_t i = 0; i < orbit.dimension; ++i) out << "," << format_full(orbit.gamma[i][m]);
        out << "\n";
    }
}

namespace {

std::string matched_list(const BatchRow& row) {
    std::string s;
    if (!row.analysis) return s;
    for (const auto& c : row.analysis->verdict.matched_conditions) {
        if (!s.empty()) s += "|";
        s += to_string(c.condition);
    }
    return s;
}

} // namespace

void write_batch_csv(std::ostream& out, const std::vector<BatchRow>& rows) {
    out << "scenario_id,n,T,R_P,R_C,gap,zn_sign_changes,matched_conditions,classification\n";
    for (const auto& row : rows) {
        out << row.id << "," << row.n << "," << format_full(row.T) << ",";
        if (row.analysis) {
            const auto& v = row.analysis->verdict;
            out << format_full(v.R_P) << "," << format_full(v.R_C) << "," << format_full(v.goe_gap) << ","
                << row.zn_sign_changes << "," << matched_list(row) << "," << to_string(v.classification) << "\n";
        } else {
            out << ",,,,,error\n";
        }
    }
}

json batch_json(const std::vector<BatchRow>& rows) {
    json arr = json::array();
    for (const auto& row : rows) {
        json j{{"scenario_id", row.id}, {"n", row.n}, {"T", row.T}};
        if (row.analysis) {
            j["zn_sign_changes"] = row.zn_sign_changes;
            j["verdict"] = to_json(row.analysis->verdict);
            j["moments"] = to_json(row.analysis->moments);
        } else {
            j["error"] = row.error;
        }
        arr.push_back(j);
    }
    return arr;
}

} // namespace rfm
