#include "ncs/errors.hpp"

namespace ncs {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PoleProximity: return "PoleProximity";
        case ErrorKind::DeformationPole: return "DeformationPole";
        case ErrorKind::RootAtEvaluationPoint: return "RootAtEvaluationPoint";
        case ErrorKind::GammaPole: return "GammaPole";
        case ErrorKind::PoleParameter: return "PoleParameter";
        case ErrorKind::Divergent: return "Divergent";
        case ErrorKind::MagnitudeOverflow: return "MagnitudeOverflow";
        case ErrorKind::NearTangentPole: return "NearTangentPole";
        case ErrorKind::MissingParameter: return "MissingParameter";
        case ErrorKind::Inconclusive: return "Inconclusive";
        case ErrorKind::SupportExceedsGrid: return "SupportExceedsGrid";
        case ErrorKind::ExistenceViolated: return "ExistenceViolated";
        case ErrorKind::UnresolvedDegeneracy: return "UnresolvedDegeneracy";
        case ErrorKind::InvalidConfig: return "InvalidConfig";
        case ErrorKind::IoFailure: return "IoFailure";
    }
    return "Unknown";
}

void raise(ErrorKind kind, const std::string& what, std::optional<long> index) {
    std::string msg = std::string(to_string(kind)) + ": " + what;
    if (index) msg += " (index " + std::to_string(*index) + ")";
    throw Error(kind, msg, index);
}

}  // namespace ncs
