#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "ncs/errors.hpp"
#include "ncs/log_weight.hpp"

namespace ncs {

struct EvalResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::size_t terms_used = 0;
};

// Generalized Laguerre polynomial L_n^k(x) by upward recurrence in n.
double laguerre(std::size_t n, std::size_t k, double x);

// t_n = L_n(x)/L_{n-1}(x) for n = 1..n_max. Index 0 of `t` is unused.
struct LaguerreRatios {
    std::vector<double> t;
    std::vector<long double> t_ext;  // the same ratios carried in extended precision
    std::vector<double> log_abs_l;   // log|L_n(x)|, n = 0..n_max
    std::vector<std::size_t> poles;  // indices n with |L_{n-1}(x)| below the pole threshold
};

inline constexpr double kPoleThreshold = 1e-12;

LaguerreRatios laguerre_ratio_scan(double x, std::size_t n_max);

// Same sequence, but throws PoleProximity at the first flagged index.
std::vector<double> laguerre_ratio_seq(double x, std::size_t n_max);

EvalResult pfq(const std::vector<double>& numer, const std::vector<double>& denom, double x);

std::complex<double> polylog_unit_circle(int order, double phi);

// Clausen-type pieces of the unit-circle polylogarithms.
double clausen2(double theta);
double clausen3(double theta);

// Sign and log-magnitude of prod Gamma(a_i + s) / prod Gamma(b_j + s).
LogWeight log_gamma_ratio(const std::vector<double>& a, const std::vector<double>& b, double s);

// log|Gamma(x)| with its sign; throws GammaPole at non-positive integers.
LogWeight log_gamma_signed(double x);

}  // namespace ncs
