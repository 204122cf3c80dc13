#include <cmath>
#include <limits>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "ncs/errors.hpp"
#include "ncs/measure.hpp"

namespace ncs {

namespace mp = boost::multiprecision;
using Real100 = mp::number<mp::mpfr_float_backend<100>, mp::et_off>;

namespace detail {
struct LaguerreMeasureImpl {
    std::vector<Real100> m;
};
}  // namespace detail

namespace {

LogWeight to_log_weight(const Real100& v) {
    if (v == 0) return LogWeight::zero();
    return {v > 0 ? 1 : -1, static_cast<double>(mp::log(mp::abs(v)))};
}

// e^{-x} sum m_n L_n(x)
Real100 density_mp(const detail::LaguerreMeasureImpl& impl, double x) {
    Real100 X(x), prev(1), cur = Real100(1) - X, sum = impl.m[0];
    if (impl.m.size() > 1) sum += impl.m[1] * cur;
    for (std::size_t n = 1; n + 1 < impl.m.size(); ++n) {
        Real100 next = ((Real100(2 * n + 1) - X) * cur - Real100(n) * prev) / Real100(n + 1);
        prev = cur;
        cur = next;
        sum += impl.m[n + 1] * cur;
    }
    return sum * mp::exp(-X);
}

}  // namespace

LaguerreMeasure laguerre_measure(const DeformationSpec& spec, std::size_t n_max) {
    std::vector<LogWeight> f = factorial_table(h_table(spec, n_max));
    std::vector<Real100> f2(n_max + 1);
    for (std::size_t m = 0; m <= n_max; ++m) {
        LogWeight sq = f[m].squared();
        if (!sq.finite_as_double())
            raise(ErrorKind::MagnitudeOverflow, "([h(m)]!)^2 exceeds floating range", static_cast<long>(m));
        f2[m] = Real100(sq.value());
    }
    auto impl = std::make_shared<detail::LaguerreMeasureImpl>();
    impl->m.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) {
        Real100 binom(1), acc(0);
        for (std::size_t m = 0; m <= n; ++m) {
            if (m > 0) binom = binom * Real100(n - m + 1) / Real100(m);
            acc += (m % 2 == 0 ? binom : Real100(-binom)) * f2[m];
        }
        impl->m[n] = acc;
    }
    LaguerreMeasure out;
    out.n_max = n_max;
    out.spec = spec;
    out.coeffs.resize(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n) out.coeffs[n] = static_cast<double>(impl->m[n]);
    out.impl = impl;
    return out;
}

double LaguerreMeasure::density(double x) const { return static_cast<double>(density_mp(*impl, x)); }

LogWeight LaguerreMeasure::density_log(double x) const { return to_log_weight(density_mp(*impl, x)); }

LogWeight measure_moment_log(const LaguerreMeasure& measure, std::size_t n) {
    // int e^{-x} L_k(x) x^n dx = (-1)^k C(n,k) n!
    Real100 binom(1), acc(0);
    const auto& m = measure.impl->m;
    for (std::size_t k = 0; k <= n && k < m.size(); ++k) {
        if (k > 0) binom = binom * Real100(n - k + 1) / Real100(k);
        acc += (k % 2 == 0 ? binom : Real100(-binom)) * m[k];
    }
    LogWeight out = to_log_weight(acc);
    out.log_mag += std::lgamma(static_cast<double>(n) + 1.0);
    return out;
}

double measure_moment(const LaguerreMeasure& measure, std::size_t n) { return measure_moment_log(measure, n).value(); }

MeasureEvaluator evaluator(const LaguerreMeasure& m) {
    MeasureEvaluator e;
    e.density = [m](double x) { return m.density(x); };
    e.sign = [m](double x) { return m.density_log(x).sign; };
    e.log_moment = [m](std::size_t n) { return measure_moment_log(m, n); };
    return e;
}

MeasureEvaluator evaluator(std::function<double(double)> density) {
    MeasureEvaluator e;
    e.density = std::move(density);
    return e;
}

MeasureEvaluator measure_scale(const MeasureEvaluator& m, double beta) {
    if (!(beta > 0.0)) raise(ErrorKind::InvalidConfig, "measure_scale: beta must be positive");
    const double inv2 = 1.0 / (beta * beta);
    MeasureEvaluator out;
    auto dens = m.density;
    out.density = [dens, inv2](double x) { return inv2 * dens(inv2 * x); };
    if (m.sign) {
        auto sg = m.sign;
        out.sign = [sg, inv2](double x) { return sg(inv2 * x); };
    }
    if (m.log_moment) {
        auto lm = m.log_moment;
        const double lb2 = 2.0 * std::log(beta);
        out.log_moment = [lm, lb2](std::size_t n) {
            LogWeight w = lm(n);
            w.log_mag += lb2 * static_cast<double>(n);
            return w;
        };
    }
    return out;
}

double quadrature_moment(const std::function<double(double)>& density, std::size_t n, double rel_tol) {
    boost::math::quadrature::exp_sinh<double> integrator;
    const double nn = static_cast<double>(n);
    auto f = [&](double x) {
        double d = density(x);
        return (n == 0 || d == 0.0) ? d : std::pow(x, nn) * d;
    };
    return integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), rel_tol);
}

std::vector<double> negativity_scan_grid() {
    const double lo = std::log10(kScanLow), hi = std::log10(kScanHigh);
    const int count = static_cast<int>(std::lround((hi - lo) * kScanPerDecade)) + 1;
    std::vector<double> xs(count);
    for (int i = 0; i < count; ++i) xs[i] = std::pow(10.0, lo + (hi - lo) * i / (count - 1));
    return xs;
}

ResolutionReport resolution_check(const DeformationSpec& spec, const MeasureEvaluator& m, std::size_t n_max) {
    ResolutionReport rep;
    std::vector<LogWeight> f = factorial_table(h_table(spec, n_max));
    for (std::size_t n = 0; n <= n_max; ++n) {
        double target_log = std::lgamma(static_cast<double>(n) + 1.0) + 2.0 * f[n].log_mag;
        LogWeight got = m.log_moment ? m.log_moment(n) : LogWeight::from_value(quadrature_moment(m.density, n));
        double err = got.sign <= 0 ? 1.0 : std::fabs(std::expm1(got.log_mag - target_log));
        rep.max_diag_error = std::max(rep.max_diag_error, err);
    }
    for (double x : negativity_scan_grid()) {
        int s = m.sign ? m.sign(x) : (m.density(x) < 0.0 ? -1 : 1);
        if (s < 0) {
            rep.x_first_negative = x;
            break;
        }
    }
    return rep;
}

}  // namespace ncs
