#include "ncs/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/zeta.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "ncs/detail/pfq_series.hpp"

namespace ncs {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_to_pi(double theta) {
    double r = std::remainder(theta, 2.0 * kPi);  // (-pi, pi]
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

double wrap_to_two_pi(double theta) {
    double r = std::fmod(theta, 2.0 * kPi);
    if (r < 0) r += 2.0 * kPi;
    return r;
}

// c_n = zeta(2n) / (n (2n+1) (2 pi)^{2n}); enough terms for |theta| <= pi.
const std::array<double, 40>& clausen_coeffs() {
    static const std::array<double, 40> c = [] {
        std::array<double, 40> out{};
        for (int n = 1; n <= 40; ++n) {
            double z = boost::math::zeta(2.0 * n);
            out[n - 1] = z / (n * (2.0 * n + 1.0) * std::pow(2.0 * kPi, 2.0 * n));
        }
        return out;
    }();
    return c;
}

}  // namespace

double laguerre(std::size_t n, std::size_t k, double x) {
    double kk = static_cast<double>(k);
    if (n == 0) return 1.0;
    double prev = 1.0, cur = kk + 1.0 - x;
    for (std::size_t j = 1; j < n; ++j) {
        double jj = static_cast<double>(j);
        double next = ((2.0 * jj + 1.0 + kk - x) * cur - (jj + kk) * prev) / (jj + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

LaguerreRatios laguerre_ratio_scan(double x, std::size_t n_max) {
    if (!(x >= 0.0)) raise(ErrorKind::InvalidConfig, "laguerre_ratio_scan: x must be nonnegative");
    LaguerreRatios r;
    r.t.assign(n_max + 1, 1.0);
    r.t_ext.assign(n_max + 1, 1.0L);
    r.log_abs_l.assign(n_max + 1, 0.0);
    const long double xl = x;
    long double log_l = 0.0L;
    double running = 1.0;
    for (std::size_t n = 1; n <= n_max; ++n) {
        double prev_abs = std::exp(r.log_abs_l[n - 1]);
        if (prev_abs < kPoleThreshold * std::max(1.0, running)) r.poles.push_back(n);
        running = std::max(running, prev_abs);
        const long double nn = static_cast<long double>(n);
        long double t = (n == 1) ? 1.0L - xl : ((2.0L * nn - 1.0L - xl) - (nn - 1.0L) / r.t_ext[n - 1]) / nn;
        r.t_ext[n] = t;
        r.t[n] = static_cast<double>(t);
        log_l += std::log(std::fabs(t));
        r.log_abs_l[n] = static_cast<double>(log_l);
    }
    return r;
}

std::vector<double> laguerre_ratio_seq(double x, std::size_t n_max) {
    LaguerreRatios r = laguerre_ratio_scan(x, n_max);
    if (!r.poles.empty())
        raise(ErrorKind::PoleProximity, "laguerre_ratio_seq: L_{n-1}(x) vanishes within tolerance",
              static_cast<long>(r.poles.front()));
    return r.t;
}

EvalResult pfq(const std::vector<double>& numer, const std::vector<double>& denom, double x) {
    auto s = detail::pfq_series<double>(numer, denom, x, 1e-16);
    // Alternating series lose log10(max_term/|sum|) digits; redo those at 60 digits.
    if (!(s.max_term <= 1e3 * std::fabs(s.value))) {
        using R = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<60>, boost::multiprecision::et_off>;
        std::vector<R> a(numer.begin(), numer.end()), b(denom.begin(), denom.end());
        auto m = detail::pfq_series<R>(a, b, R(x), R(1e-40));
        double v = static_cast<double>(m.value);
        return {v, static_cast<double>(m.abs_error) + std::fabs(v) * 1e-16, m.terms};
    }
    return {s.value, s.abs_error, s.terms};
}

double clausen2(double theta) {
    double th = wrap_to_pi(theta);
    if (th == 0.0) return 0.0;
    double a = std::fabs(th);
    double sum = a - a * std::log(a);
    double th2 = a * a, p = a;
    for (double c : clausen_coeffs()) {
        p *= th2;
        double term = c * p;
        sum += term;
        if (term < 1e-18 * std::fabs(sum)) break;
    }
    return th < 0 ? -sum : sum;
}

double clausen3(double theta) {
    double a = std::fabs(wrap_to_pi(theta));
    double z3 = boost::math::zeta(3.0);
    if (a == 0.0) return z3;
    double th2 = a * a;
    double sum = z3 - 0.75 * th2 + 0.5 * th2 * std::log(a);
    double p = th2;
    int n = 1;
    for (double c : clausen_coeffs()) {
        p *= th2;
        double term = c * p / (2.0 * n + 2.0);
        sum -= term;
        if (term < 1e-18 * std::fabs(sum)) break;
        ++n;
    }
    return sum;
}

std::complex<double> polylog_unit_circle(int order, double phi) {
    double th = wrap_to_two_pi(phi);
    if (order == 2) {
        double re = kPi * kPi / 6.0 - th * (2.0 * kPi - th) / 4.0;
        return {re, clausen2(phi)};
    }
    if (order == 3) {
        double im = kPi * kPi * th / 6.0 - kPi * th * th / 4.0 + th * th * th / 12.0;
        return {clausen3(phi), im};
    }
    raise(ErrorKind::InvalidConfig, "polylog_unit_circle: order must be 2 or 3");
}

LogWeight log_gamma_signed(double x) {
    if (x <= 0.0 && std::floor(x) == x)
        raise(ErrorKind::GammaPole, "gamma argument is a non-positive integer", static_cast<long>(x));
    int sgn = 1;
    double lg = ::lgamma_r(x, &sgn);
    return {sgn, lg};
}

LogWeight log_gamma_ratio(const std::vector<double>& a, const std::vector<double>& b, double s) {
    LogWeight out = LogWeight::one();
    for (double ai : a) out *= log_gamma_signed(ai + s);
    for (double bj : b) out /= log_gamma_signed(bj + s);
    return out;
}

}  // namespace ncs
