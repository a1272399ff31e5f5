#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "rfm/builtin_scenarios.hpp"
#include "rfm/error.hpp"
#include "rfm/scenario.hpp"

using namespace rfm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json minimal() {
    return json::parse(R"({
      "id": "t", "system": "rfm", "n": 2, "T": 1.0,
      "channels": [
        {"mean": 1.0, "harmonics": [{"k": 1, "amplitude": 0.5, "phase": 0.0}]},
        {"mean": 2.0, "harmonics": []},
        {"mean": 1.5, "harmonics": []}
      ]
    })");
}

std::string field_of(const json& doc) {
    try {
        scenario_from_json(doc);
    } catch (const ValidationError& e) {
        return e.field();
    }
    return "";
}

} // namespace

TEST_CASE("bundled three-site file is the built-in scenario") {
    const Scenario s = parse_scenario(fs::path(RFM_SOURCE_DIR) / "scenarios" / "paper_n3.json");
    CHECK(s == builtin::three_site_scenario());
    CHECK(s.schedule() == builtin::three_site_schedule());
    const Scenario d = parse_scenario(fs::path(RFM_SOURCE_DIR) / "scenarios" / "tanh_demo.json");
    CHECK(d == builtin::tanh_demo_scenario());
}

TEST_CASE("round trip") {
    for (const Scenario& s : {builtin::three_site_scenario(), builtin::tanh_demo_scenario()}) {
        const Scenario back = scenario_from_json(json::parse(to_json(s).dump()));
        CHECK(back == s);
    }
    json doc = minimal();
    doc["condition"] = "II";
    doc["channels"][1]["harmonics"] = json::parse(R"([{"k": 1, "amplitude": 1.0, "phase": 0.0}])");
    doc["solver"] = json::parse(R"({"method": "adaptive_embedded", "rel_tol": 1e-9, "abs_tol": 1e-12, "max_step": 0.01})");
    const Scenario s = scenario_from_json(doc);
    CHECK(s.condition == Condition::II);
    CHECK(s.solver.method == Method::adaptive_embedded);
    CHECK(scenario_from_json(to_json(s)) == s);
}

TEST_CASE("defaults") {
    const Scenario s = scenario_from_json(minimal());
    CHECK(s.grid_M == 4096);
    CHECK(s.orbit_tol == 1e-10);
    CHECK(s.solver == StepConfig{});
    CHECK_FALSE(s.x0.has_value());
}

TEST_CASE("validation names the offending field") {
    json doc = minimal();
    doc["channels"][1]["mean"] = 0.0;
    CHECK(field_of(doc) == "channels[1].mean");

    doc = minimal();
    doc["channels"][0]["harmonics"][0]["amplitude"] = 1.5;
    CHECK(field_of(doc) == "channels[0]");

    doc = minimal();
    doc.erase("T");
    CHECK(field_of(doc) == "T");

    doc = minimal();
    doc["n"] = 3;
    CHECK(field_of(doc) == "channels");

    doc = minimal();
    doc["channels"][0]["harmonics"][0]["k"] = 0;
    CHECK(field_of(doc) == "channels[0].harmonics[0].k");

    doc = minimal();
    doc["condition"] = "I";
    CHECK(field_of(doc) == "condition");

    doc = minimal();
    doc["condition"] = "V";  // n even, but channel 0 oscillates
    CHECK(field_of(doc) == "condition");

    doc = minimal();
    doc["solver"] = json::parse(R"({"method": "euler"})");
    CHECK(field_of(doc) == "solver.method");

    doc = minimal();
    doc["system"] = "tasep";
    CHECK(field_of(doc) == "system");

    doc = minimal();
    doc["x0"] = json::array({0.5});
    CHECK(field_of(doc) == "x0");
}

TEST_CASE("phase wrap-around is normalized with a warning") {
    json doc = minimal();
    doc["channels"][0]["harmonics"][0]["phase"] = 7.0;
    std::vector<std::string> warnings;
    const Scenario s = scenario_from_json(doc, &warnings);
    CHECK(s.channels[0].harmonics[0].phase == doctest::Approx(7.0 - 2 * std::numbers::pi));
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("channels[0].harmonics[0].phase") != std::string::npos);
}

TEST_CASE("missing and malformed files") {
    try {
        parse_scenario("no/such/file.json");
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("file not found") != std::string::npos);
    }
    const fs::path p = fs::temp_directory_path() / "rfm_bad_scenario.json";
    std::ofstream(p) << "{ not json";
    CHECK_THROWS_AS(parse_scenario(p), ValidationError);
    fs::remove(p);
}

TEST_CASE("report serialization") {
    const auto rows = run_batch({{"x", builtin::three_site_schedule()}});
    REQUIRE(rows[0].ok());
    const json m = to_json(rows[0].analysis->moments);
    CHECK(m.contains("eta2.0.1"));
    CHECK(m.contains("eta3.1.1.2"));
    CHECK(m.contains("residuals.flow"));
    CHECK(m["R_C"].get<double>() == doctest::Approx(0.6171).epsilon(5e-4));
    const json v = to_json(rows[0].analysis->verdict);
    CHECK(v["classification"] == "unconstrained_no_goe_observed");

    std::ostringstream os;
    write_batch_csv(os, rows);
    std::istringstream in(os.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "scenario_id,n,T,R_P,R_C,gap,zn_sign_changes,matched_conditions,classification");
    CHECK(row.rfind("x,3,", 0) == 0);
    CHECK(row.find(",unconstrained_no_goe_observed") != std::string::npos);
    CHECK(batch_json(rows).size() == 1);

    CHECK(format_full(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_full(std::numbers::pi)) == std::numbers::pi);
}
