#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gaspower {

// Machine-readable error classes. The CLI prints the category name and maps it
// to a process exit code.
enum class ErrorCategory {
    domain,          // argument outside the mathematical domain
    numeric,         // quadrature / root bracketing breakdown
    no_solution,     // Lax curves do not intersect
    invalid_demand,  // extraction at or above the admissible maximum
    inadmissible,    // junction density at or below rho_min
    cfl,             // explicit time step too large
    step_failure,    // implicit Newton solve did not converge
    divergence,      // power-flow Newton did not converge
    config,          // inconsistent model configuration
    schema,          // scenario file violation
    io,
};

std::string_view to_string(ErrorCategory category) noexcept;
int exit_code(ErrorCategory category) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& message);

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

// Raised when an extraction exceeds the admissible junction maximum.
class InvalidDemandError : public Error {
public:
    InvalidDemandError(double demand, double max_extraction);

    double demand() const noexcept { return demand_; }
    double max_extraction() const noexcept { return max_extraction_; }

private:
    double demand_;
    double max_extraction_;
};

// Pressure-law evaluation produced a non-finite value.
class LawEvaluationError : public Error {
public:
    LawEvaluationError(const std::string& what, double rho);

    double rho() const noexcept { return rho_; }

private:
    double rho_;
};

class SchemaError : public Error {
public:
    SchemaError(const std::string& field, int line, const std::string& message);

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

}  // namespace gaspower
