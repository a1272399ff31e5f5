#pragma once
// Reference-value comparisons for the bundled scenarios.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rfm {

struct Check {
    enum class Kind { near, below, above, at_least };

    std::string quantity;
    Kind kind = Kind::near;
    double reference = 0.0;  ///< expected value, or the bound
    double computed = 0.0;
    double tolerance = 0.0;  ///< near only

    bool passed() const;
};

struct Reproduction {
    std::string name;
    std::vector<Check> checks;
    /// Plot-ready CSV files written when an output directory was given.
    std::vector<std::filesystem::path> artifacts;

    bool passed() const;
};

/// Known names: "example1", "example2-3", "example5".
std::vector<std::string> reproduction_names();

/// Runs one reproduction; CSV data series go to `out_dir` when set.
/// Throws std::invalid_argument for an unknown name.
Reproduction reproduce(const std::string& name, const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// Fixed-width table: quantity, reference, computed (17 digits), rounded, tolerance, status.
std::string format_table(const Reproduction& r);

} // namespace rfm
