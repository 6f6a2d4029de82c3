#include "gaspower/error.hpp"

#include <sstream>

namespace gaspower {

std::string_view to_string(ErrorCategory category) noexcept {
    switch (category) {
        case ErrorCategory::domain: return "domain";
        case ErrorCategory::numeric: return "numeric";
        case ErrorCategory::no_solution: return "no_solution";
        case ErrorCategory::invalid_demand: return "invalid_demand";
        case ErrorCategory::inadmissible: return "inadmissible";
        case ErrorCategory::cfl: return "cfl";
        case ErrorCategory::step_failure: return "step_failure";
        case ErrorCategory::divergence: return "divergence";
        case ErrorCategory::config: return "config";
        case ErrorCategory::schema: return "schema";
        case ErrorCategory::io: return "io";
    }
    return "unknown";
}

int exit_code(ErrorCategory category) noexcept {
    // 0 and 1 are reserved for valid / invalid verdicts of pressure-check.
    return 2 + static_cast<int>(category);
}

Error::Error(ErrorCategory category, const std::string& message)
    : std::runtime_error(message), category_(category) {}

namespace {

std::string demand_message(double demand, double max_extraction) {
    std::ostringstream os;
    os.precision(10);
    os << "extraction " << demand << " is not below the admissible maximum " << max_extraction;
    return os.str();
}

std::string evaluation_message(const std::string& what, double rho) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at rho = " << rho;
    return os.str();
}

std::string schema_message(const std::string& field, int line, const std::string& message) {
    std::ostringstream os;
    os << "field '" << field << "'";
    if (line >= 0) os << " (line " << line << ")";
    os << ": " << message;
    return os.str();
}

}  // namespace

InvalidDemandError::InvalidDemandError(double demand, double max_extraction)
    : Error(ErrorCategory::invalid_demand, demand_message(demand, max_extraction)),
      demand_(demand),
      max_extraction_(max_extraction) {}

LawEvaluationError::LawEvaluationError(const std::string& what, double rho)
    : Error(ErrorCategory::numeric, evaluation_message(what, rho)), rho_(rho) {}

SchemaError::SchemaError(const std::string& field, int line, const std::string& message)
    : Error(ErrorCategory::schema, schema_message(field, line, message)), field_(field), line_(line) {}

}  // namespace gaspower
