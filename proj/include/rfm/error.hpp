#pragma once

#include <stdexcept>
#include <string>

namespace rfm {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Dimension mismatch or an argument outside its documented domain.
class ContractViolation : public Error {
public:
    using Error::Error;
};

/// A rate schedule is not strictly positive (or is otherwise malformed).
class ScheduleInvalid : public Error {
public:
    using Error::Error;
};

class IntegrationFailure : public Error {
public:
    IntegrationFailure(const std::string& what, double last_good_time)
        : Error(what), last_good_time_(last_good_time) {}

    double last_good_time() const noexcept { return last_good_time_; }

private:
    double last_good_time_;
};

/// The period map did not reach its fixed point within the period budget.
class OrbitNotConverged : public Error {
public:
    OrbitNotConverged(const std::string& what, int periods, double distance, double ratio)
        : Error(what), periods_(periods), distance_(distance), ratio_(ratio) {}

    int periods() const noexcept { return periods_; }
    double last_distance() const noexcept { return distance_; }
    /// Ratio of the last two successive period-map displacements.
    double last_contraction_ratio() const noexcept { return ratio_; }

private:
    int periods_;
    double distance_;
    double ratio_;
};

/// Scenario-file validation failure; carries the offending field path.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

} // namespace rfm
