#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ncs/log_weight.hpp"

namespace ncs {

struct Identity {};

// h_{order}(n; eta2), the trapped-ion Laguerre ratio. Defined for n >= order.
struct TrappedIon {
    std::size_t order = 1;
    double eta2 = 0.0;
};

struct QOscillator {
    double lambda = 0.0;
};

// h(n) = gamma * prod(n + a_i) / prod(n + b_j)
struct Rational {
    double gamma = 1.0;
    std::vector<double> a;
    std::vector<double> b;
};

enum class SeriesBase { H1, H2 };

struct TruncatedSeries {
    SeriesBase base = SeriesBase::H1;
    double eta2 = 0.0;
    int order = 1;
};

// Any deformation given pointwise, e.g. h(n) = 1/sqrt(n) or a reciprocal.
struct Custom {
    std::function<double(std::size_t)> h;
    std::string name = "custom";
};

using DeformationSpec = std::variant<Identity, TrappedIon, QOscillator, Rational, TruncatedSeries, Custom>;

void validate(const DeformationSpec& spec);
std::string describe(const DeformationSpec& spec);

// Smallest n at which h(n) is defined (order for TrappedIon, else 1).
std::size_t first_index(const DeformationSpec& spec);

double h_eval(const DeformationSpec& spec, std::size_t n);

// h(0..n_max). Entries below first_index(spec) are 1.
std::vector<double> h_table(const DeformationSpec& spec, std::size_t n_max);

DeformationSpec reciprocal(const DeformationSpec& spec);
DeformationSpec scaled(const DeformationSpec& spec, double beta);

struct CircleIndex {
    std::size_t order = 1;
    std::size_t sector = 0;
};

LogWeight h_factorial_log(const DeformationSpec& spec, std::size_t n, std::optional<CircleIndex> circle = std::nullopt);

// [h(n)]! for n = 0..n_max (unit stride) from a table of h values.
std::vector<LogWeight> factorial_table(const std::vector<double>& h);

// [h]! along n = sector, sector + order, ...; entry l belongs to n = l*order + sector.
std::vector<LogWeight> circle_factorial_table(const std::vector<double>& h, std::size_t order, std::size_t sector);

// gamma^n Gamma[(a)+n+1; (b)+n+1] / Gamma[(a)+1; (b)+1]
LogWeight rational_factorial_log(const Rational& r, std::size_t n);

double f_k(std::size_t n, std::size_t k, double eta2);

inline constexpr double kTangentGuard = 1e-3;

double h1_asymptotic(std::size_t n, double eta2);

double u_function(double x);

// log([h1(n)^2]! n! eta2^n) for n = 1..n_max (entry i is n = i + 1).
std::vector<double> factorial_log_profile(double eta2, std::size_t n_max);

// Truncated-Laguerre rational form. When n_check > 0, any root landing on an
// integer in [1, n_check] raises RootAtEvaluationPoint.
Rational rational_from_truncation(unsigned A, unsigned B, double eta2, std::size_t n_check = 0);

// 1 + (n-1) eta2 / 2 written as gamma (n + a).
Rational linear_approximant(double eta2);

}  // namespace ncs
