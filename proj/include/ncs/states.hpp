#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ncs/deformation.hpp"
#include "ncs/specfun.hpp"

namespace ncs {

using cplx = std::complex<double>;

enum class NormStatus { Normalized, DivergentAtAlpha };

struct NcsState {
    DeformationSpec spec;
    cplx alpha{0.0, 0.0};
    std::size_t order = 1;
    std::size_t sector = 0;
    std::size_t n_max = 0;
    std::vector<cplx> amplitudes;
    double tail_mass_estimate = 0.0;
    NormStatus norm_status = NormStatus::Normalized;
    // Unnormalized log|c_n| on the support, NaN elsewhere. Kept for truncation diagnostics.
    std::vector<double> log_terms;
};

inline constexpr double kTruncationMargin = 40.0;
inline constexpr double kTrendThreshold = 1e-3;
inline constexpr double kTailFraction = 0.05;
inline constexpr double kTrendWindow = 0.2;

// Least-squares slope of y against index over the final `window` fraction of
// the finite entries.
double late_trend_slope(const std::vector<double>& y, double window = kTrendWindow);

EvalResult h_exponential(const DeformationSpec& spec, double v, std::size_t n_max);
cplx h_exponential_complex(const DeformationSpec& spec, cplx v, std::size_t n_max);

NcsState ncs_amplitudes(const DeformationSpec& spec, cplx alpha, std::size_t n_max);
NcsState ncs_circle(const DeformationSpec& spec, cplx alpha, std::size_t order, std::size_t sector, std::size_t n_max);

// Smallest n_max (up to n_cap) at which every support term in the last 20% of
// indices sits kTruncationMargin below the running maximum. Returns n_cap when
// no such point exists.
std::size_t policy_n_max(const DeformationSpec& spec, cplx alpha, std::size_t order = 1, std::size_t sector = 0,
                         std::size_t n_cap = 4096);

// First local minimum of the support log-terms after their first local maximum.
std::size_t first_dip_after_peak(const DeformationSpec& spec, cplx alpha, std::size_t order, std::size_t sector,
                                 std::size_t n_cap);

struct CircleComponent {
    cplx phase;
    NcsState component;
};

std::vector<CircleComponent> circle_decomposition(const NcsState& state);

// Superpose components with their phases and renormalize.
std::vector<cplx> recombine(const std::vector<CircleComponent>& parts);

enum class OperatorKind { Annihilation, Creation, DeformedCreation, Displacement, DeformationOp, Bichromatic };

struct BichromaticParams {
    std::size_t order = 1;  // N+1
    cplx alphaN1{0.0, 0.0};
};

struct OperatorOptions {
    std::optional<cplx> alpha;
    std::optional<BichromaticParams> bichromatic;
    // Power k in a^k h(n). 0 selects the natural order of the spec.
    std::size_t power = 0;
};

struct OperatorMatrix {
    std::size_t dim = 0;
    Eigen::MatrixXcd entries;
    OperatorKind kind = OperatorKind::Annihilation;
};

OperatorMatrix operator_matrix(OperatorKind kind, const DeformationSpec& spec, std::size_t n_max,
                               const OperatorOptions& opts = {});

Eigen::VectorXcd as_vector(const NcsState& state);

enum class Side { Right, Left };

std::vector<cplx> displaced_fock(const DeformationSpec& spec, cplx alpha, std::size_t m, Side side, std::size_t n_max);

enum class TrendClass { Summable, Divergent, Inconclusive };

struct ProbeResult {
    cplx direction;
    std::vector<TrendClass> classes;  // one per radius
    double boundary = 0.0;            // +inf when every radius is summable
};

std::vector<ProbeResult> convergence_probe(const DeformationSpec& spec, const std::vector<cplx>& directions,
                                           const std::vector<double>& radius_grid, std::size_t n_max);

struct RabiConfig {
    double omega0 = 1.0;
    double omegaN1 = 1.0;
    double eta = 0.0;
    std::size_t N = 0;
};

cplx alpha_from_rabi(const RabiConfig& config);

// Circle state of order N+1 annihilated by the bichromatic operator.
NcsState dark_state(const RabiConfig& config, std::size_t sector, std::size_t n_max);

cplx rho_functional(const Eigen::MatrixXcd& density, const DeformationSpec& spec, cplx z);

}  // namespace ncs
