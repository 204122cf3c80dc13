#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace ncs {

enum class ErrorKind {
    PoleProximity,
    DeformationPole,
    RootAtEvaluationPoint,
    GammaPole,
    PoleParameter,
    Divergent,
    MagnitudeOverflow,
    NearTangentPole,
    MissingParameter,
    Inconclusive,
    SupportExceedsGrid,
    ExistenceViolated,
    UnresolvedDegeneracy,
    InvalidConfig,
    IoFailure,
};

const char* to_string(ErrorKind kind);

// Every failure in the library surfaces as this type. `index` carries the
// offending Fock index or series term when one exists.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what, std::optional<long> index = std::nullopt)
        : std::runtime_error(what), kind_(kind), index_(index) {}

    ErrorKind kind() const noexcept { return kind_; }
    std::optional<long> index() const noexcept { return index_; }

private:
    ErrorKind kind_;
    std::optional<long> index_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what, std::optional<long> index = std::nullopt);

}  // namespace ncs
