#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "ncs/deformation.hpp"
#include "ncs/log_weight.hpp"

namespace ncs {

namespace detail {
struct LaguerreMeasureImpl;
struct MellinImpl;
}  // namespace detail

// m(x) = e^{-x} sum_n m_n L_n(x). The coefficients are also kept at high
// precision internally; `coeffs` is their rounding to double.
struct LaguerreMeasure {
    std::vector<double> coeffs;
    std::size_t n_max = 0;
    DeformationSpec spec;
    std::shared_ptr<const detail::LaguerreMeasureImpl> impl;

    double density(double x) const;
    // Sign and log-magnitude of m(x); safe where m(x) underflows a double.
    LogWeight density_log(double x) const;
};

LaguerreMeasure laguerre_measure(const DeformationSpec& spec, std::size_t n_max);

// Exact moment via the Laguerre/monomial identity, evaluated at high precision.
double measure_moment(const LaguerreMeasure& measure, std::size_t n);
LogWeight measure_moment_log(const LaguerreMeasure& measure, std::size_t n);

struct MellinTerm {
    LogWeight prefactor;
    double power = 0.0;
    std::vector<double> numer;
    std::vector<double> denom;
    int sign_of_argument = -1;
};

// Mellin antitransform of K gamma^{2(s-1)} Gamma(s) prod Gamma(s+a_i)^2 / prod Gamma(s+b_j)^2.
// Exponents whose differences are integers are split by multiples of
// `epsilon` and evaluated at a precision that absorbs the 1/epsilon growth.
// density(x) = exp(log_constant) / argument_scale * M(x / argument_scale), with M the
// sum over `terms` of prefactor * y^power * pFq(numer; denom; -y).
struct HypergeometricMeasure {
    std::vector<MellinTerm> terms;
    Rational source;
    double log_constant = 0.0;    // log of prod Gamma(1+b_j)^2 / prod Gamma(1+a_i)^2
    double argument_scale = 1.0;  // gamma^2
    double epsilon = 0.0;
    std::size_t split_exponents = 0;
    std::shared_ptr<const detail::MellinImpl> impl;

    double density(double x) const;
};

inline constexpr int kMellinSplitExponent = 40;  // epsilon = 10^-40

HypergeometricMeasure mellin_measure_rational(const Rational& rational);

// A measure as seen by the checks: density plus optional exact moments and a
// sign oracle for points where the density underflows.
struct MeasureEvaluator {
    std::function<double(double)> density;
    std::function<int(double)> sign;
    std::function<LogWeight(std::size_t)> log_moment;
};

MeasureEvaluator evaluator(const LaguerreMeasure& m);
MeasureEvaluator evaluator(const HypergeometricMeasure& m);
MeasureEvaluator evaluator(std::function<double(double)> density);

// x -> beta^-2 m(beta^-2 x)
MeasureEvaluator measure_scale(const MeasureEvaluator& m, double beta);

// Plain double-exponential quadrature of x^n m(x) over (0, inf).
double quadrature_moment(const std::function<double(double)>& density, std::size_t n, double rel_tol = 1e-10);

struct ResolutionReport {
    double max_diag_error = 0.0;
    std::optional<double> x_first_negative;
};

inline constexpr double kScanLow = 1e-4;
inline constexpr double kScanHigh = 1e3;
inline constexpr int kScanPerDecade = 400;

std::vector<double> negativity_scan_grid();

ResolutionReport resolution_check(const DeformationSpec& spec, const MeasureEvaluator& m, std::size_t n_max);

}  // namespace ncs
