#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace orlicz {

/// Base of every error raised by the library. Each subclass names one
/// failure class so callers (and the CLI) can map them to exit messages.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

#define ORLICZ_DEFINE_ERROR(Name, Kind)                                        \
    class Name : public Error {                                                \
    public:                                                                    \
        using Error::Error;                                                    \
        const char* kind() const noexcept override { return Kind; }            \
    };

ORLICZ_DEFINE_ERROR(ConfigurationError, "configuration")
ORLICZ_DEFINE_ERROR(UnsupportedOperation, "unsupported-operation")
ORLICZ_DEFINE_ERROR(DegenerateComparison, "degenerate-comparison")
ORLICZ_DEFINE_ERROR(WitnessInvalid, "witness-invalid")
ORLICZ_DEFINE_ERROR(GeometryError, "geometry")
ORLICZ_DEFINE_ERROR(InfeasibleProblem, "infeasible")
ORLICZ_DEFINE_ERROR(PreconditionError, "precondition")
ORLICZ_DEFINE_ERROR(MeshMismatch, "mesh-mismatch")
ORLICZ_DEFINE_ERROR(UndefinedRatio, "undefined-ratio")
ORLICZ_DEFINE_ERROR(NotConverged, "not-converged")

#undef ORLICZ_DEFINE_ERROR

/// Raised when a monotone search could not bracket its target.
/// Carries the last bracket tried.
class BracketExhausted : public Error {
public:
    BracketExhausted(const std::string& what, double lower, double upper)
        : Error(what), lower_(lower), upper_(upper) {}
    const char* kind() const noexcept override { return "bracket-exhausted"; }
    double lower() const noexcept { return lower_; }
    double upper() const noexcept { return upper_; }

private:
    double lower_;
    double upper_;
};

/// Expression text could not be parsed. `position` is a 0-based offset.
class ExpressionError : public Error {
public:
    ExpressionError(const std::string& what, std::size_t position)
        : Error(what), position_(position) {}
    const char* kind() const noexcept override { return "expression"; }
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/// A configuration document failed validation. All violations are kept.
class SchemaError : public Error {
public:
    explicit SchemaError(std::vector<std::string> violations);
    const char* kind() const noexcept override { return "schema"; }
    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace orlicz
