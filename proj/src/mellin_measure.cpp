#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include "ncs/detail/pfq_series.hpp"
#include "ncs/errors.hpp"
#include "ncs/measure.hpp"
#include "ncs/specfun.hpp"

namespace ncs {

namespace mp = boost::multiprecision;

namespace {

template <unsigned D>
using RealD = mp::number<mp::mpfr_float_backend<D>, mp::et_off>;

template <unsigned D>
struct Tier {
    using R = RealD<D>;
    std::once_flag once;
    std::vector<R> e;      // split exponents
    std::vector<R> pref;   // K * prod Gamma(e_nu - e_mu) / prod Gamma(b_j - e_mu)
    std::vector<std::vector<R>> numer, denom;
};

template <class R>
R rgamma(const R& x) {
    if (detail::is_nonpositive_integer(x)) return R(0);
    return R(1) / boost::math::tgamma(x);
}

}  // namespace

namespace detail {

struct MellinImpl {
    std::vector<double> base;    // exponents 0, a_1, a_1, a_2, a_2, ...
    std::vector<int> shift;      // epsilon multiplier per exponent
    std::vector<double> b;       // b_j, each twice
    std::vector<double> a_roots;
    double gamma2 = 1.0;
    double log_k = 0.0;

    mutable Tier<150> t150;
    mutable Tier<300> t300;
    mutable Tier<600> t600;
    mutable Tier<1200> t1200;

    template <unsigned D>
    void build(Tier<D>& t) const {
        using R = RealD<D>;
        std::call_once(t.once, [&] {
            const R eps = mp::pow(R(10), -kMellinSplitExponent);
            const std::size_t M = base.size();
            t.e.resize(M);
            for (std::size_t i = 0; i < M; ++i) t.e[i] = R(base[i]) + R(shift[i]) * eps;
            R K(1);
            for (double bj : b) K *= boost::math::tgamma(R(1) + R(bj));
            for (double ai : a_roots) {
                R g = boost::math::tgamma(R(1) + R(ai));
                K /= g * g;
            }
            t.pref.resize(M);
            t.numer.assign(M, {});
            t.denom.assign(M, {});
            for (std::size_t mu = 0; mu < M; ++mu) {
                R p = K;
                for (std::size_t nu = 0; nu < M; ++nu) {
                    if (nu == mu) continue;
                    p *= boost::math::tgamma(t.e[nu] - t.e[mu]);
                    t.denom[mu].push_back(R(1) + t.e[mu] - t.e[nu]);
                }
                for (double bj : b) {
                    p *= rgamma(R(bj) - t.e[mu]);
                    t.numer[mu].push_back(R(1) + t.e[mu] - R(bj));
                }
                t.pref[mu] = p;
            }
        });
    }

    // K * M(y). Returns false when cancellation ate the working precision.
    template <unsigned D>
    bool eval(Tier<D>& t, double y, double& out, double& lost) const {
        using R = RealD<D>;
        build(t);
        const R Y(y);
        const R tol = mp::pow(R(10), -static_cast<int>(D) + 10);
        R total(0), scale(0);
        for (std::size_t mu = 0; mu < t.e.size(); ++mu) {
            if (t.pref[mu] == 0) continue;
            auto s = detail::pfq_series<R>(t.numer[mu], t.denom[mu], R(-Y), tol);
            R piece = t.pref[mu] * mp::pow(Y, t.e[mu]);
            total += piece * s.value;
            R mag = mp::abs(piece) * s.max_term;
            if (mag > scale) scale = mag;
        }
        if (scale == 0) {
            out = 0.0;
            lost = 0.0;
            return true;
        }
        lost = total == 0 ? std::numeric_limits<double>::infinity()
                          : static_cast<double>(mp::log10(scale / mp::abs(total)));
        out = static_cast<double>(total);
        if (lost + 25.0 <= static_cast<double>(D)) return true;
        // Anything below the last tier's resolution is far under the double range.
        if (D == 1200 && static_cast<double>(mp::log10(scale)) - static_cast<double>(D) + 25.0 < -320.0) {
            out = 0.0;
            return true;
        }
        return false;
    }

    // M is a Meijer G function G^{m,0}_{p,m}; it decays like y^theta exp(-nu y^{1/nu})
    // with nu = m - p. Beyond the point where that bound (with a generous power
    // allowance) is far below the double range the series is not summed.
    bool far_tail(double y) const {
        if (y < 1e3) return false;
        const double nu = static_cast<double>(base.size() - b.size());
        double power = 2.0;
        for (double e : base) power += std::fabs(e);
        for (double v : b) power += std::fabs(v);
        return nu * std::pow(y, 1.0 / nu) > 800.0 + std::fabs(log_k) + power * std::log(y);
    }

    double unscaled(double y) const {
        if (y < 0.0) return std::numeric_limits<double>::quiet_NaN();
        if (y == 0.0) y = std::numeric_limits<double>::min();
        if (far_tail(y)) return 0.0;
        double out = 0.0, lost = 0.0;
        if (eval(t150, y, out, lost)) return out;
        if (eval(t300, y, out, lost)) return out;
        if (eval(t600, y, out, lost)) return out;
        if (eval(t1200, y, out, lost)) return out;
        raise(ErrorKind::MagnitudeOverflow, "Mellin measure: precision budget exhausted");
    }
};

}  // namespace detail

HypergeometricMeasure mellin_measure_rational(const Rational& r) {
    const std::size_t A = r.a.size(), B = r.b.size();
    if (A < B) raise(ErrorKind::ExistenceViolated, "Mellin measure needs A >= B");
    if (r.gamma == 0.0 || !std::isfinite(r.gamma)) raise(ErrorKind::InvalidConfig, "Rational gamma must be nonzero");
    for (double a : r.a)
        if (!(a > -1.0)) raise(ErrorKind::ExistenceViolated, "a root a_i <= -1 puts a moment pole at positive s");

    auto impl = std::make_shared<detail::MellinImpl>();
    impl->base.push_back(0.0);
    for (double a : r.a) {
        impl->base.push_back(a);
        impl->base.push_back(a);
    }
    for (double b : r.b) {
        impl->b.push_back(b);
        impl->b.push_back(b);
    }
    impl->a_roots = r.a;
    impl->gamma2 = r.gamma * r.gamma;

    const std::size_t M = impl->base.size();
    for (std::size_t i = 0; i < M; ++i) {
        std::size_t same = 0;
        for (std::size_t j = 0; j < M; ++j)
            if (std::fabs(impl->base[i] - impl->base[j]) < 1e-12) ++same;
        if (same > 2) raise(ErrorKind::UnresolvedDegeneracy, "more than two Mellin exponents coincide");
    }

    // Exponents differing by an integer share a group; members get distinct shifts.
    std::vector<std::size_t> group(M);
    std::iota(group.begin(), group.end(), 0);
    for (std::size_t i = 0; i < M; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            double d = impl->base[i] - impl->base[j];
            if (std::fabs(d - std::round(d)) < 1e-12) {
                group[i] = group[j];
                break;
            }
        }
    impl->shift.assign(M, 0);
    std::size_t split = 0;
    for (std::size_t i = 0; i < M; ++i) {
        int k = 0;
        for (std::size_t j = 0; j < i; ++j)
            if (group[j] == group[i]) ++k;
        impl->shift[i] = k;
        if (k > 0) ++split;
    }

    HypergeometricMeasure out;
    out.source = r;
    out.argument_scale = impl->gamma2;
    out.epsilon = std::pow(10.0, -kMellinSplitExponent);
    out.split_exponents = split;
    {
        LogWeight k = LogWeight::one();
        for (double b : r.b) k *= log_gamma_signed(1.0 + b).squared();
        for (double a : r.a) k /= log_gamma_signed(1.0 + a).squared();
        out.log_constant = k.log_mag;
        impl->log_k = k.log_mag;
    }
    impl->build(impl->t150);
    for (std::size_t mu = 0; mu < M; ++mu) {
        MellinTerm t;
        const auto& pref = impl->t150.pref[mu];
        t.prefactor = pref == 0 ? LogWeight::zero()
                                : LogWeight{pref > 0 ? 1 : -1, static_cast<double>(mp::log(mp::abs(pref)))};
        t.prefactor.log_mag -= out.log_constant;  // terms describe M itself
        t.power = static_cast<double>(impl->t150.e[mu]);
        for (const auto& v : impl->t150.numer[mu]) t.numer.push_back(static_cast<double>(v));
        for (const auto& v : impl->t150.denom[mu]) t.denom.push_back(static_cast<double>(v));
        t.sign_of_argument = -1;
        out.terms.push_back(std::move(t));
    }
    out.impl = impl;
    return out;
}

double HypergeometricMeasure::density(double x) const {
    return impl->unscaled(x / argument_scale) / argument_scale;
}

MeasureEvaluator evaluator(const HypergeometricMeasure& m) {
    MeasureEvaluator e;
    e.density = [m](double x) { return m.density(x); };
    return e;
}

}  // namespace ncs
