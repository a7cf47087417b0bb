#pragma once

#include <stdexcept>
#include <string>

namespace gcl {

enum class ErrorKind {
    NotHyperbolic,
    DegenerateSpec,
    DegenerateDecomposition,
    InvalidSpec,
    RadiusTooSmall,
    BudgetExceeded,
    VertexDegeneracy,
    OnSkeleton,
    EdgeAmbiguity,
    SameClass,
    WindowTooSmall,
    TransitivityViolation,
    InconsistentWords,
    TooLarge,
    GuardViolated,
    IncompleteCensus,
    InsufficientData,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace gcl
