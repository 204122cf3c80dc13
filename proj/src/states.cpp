#include "ncs/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "ncs/errors.hpp"

namespace ncs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Terms {
    std::vector<double> logmag;  // NaN off support
    std::vector<int> sign;       // sign of the deformation factorial
};

Terms build_terms(const std::vector<double>& h, double log_abs_alpha, std::size_t order, std::size_t sector,
                  std::size_t n_max) {
    Terms t{std::vector<double>(n_max + 1, kNaN), std::vector<int>(n_max + 1, 0)};
    LogWeight f = LogWeight::one();
    for (std::size_t n = sector; n <= n_max; n += order) {
        if (n > sector) f *= LogWeight::from_value(h[n]);
        double nn = static_cast<double>(n);
        double power = (n == 0) ? 0.0 : nn * log_abs_alpha;
        t.logmag[n] = power - 0.5 * std::lgamma(nn + 1.0) - f.log_mag;
        t.sign[n] = f.sign;
    }
    return t;
}

void check_circle(std::size_t order, std::size_t sector) {
    if (order == 0) raise(ErrorKind::InvalidConfig, "order must be positive");
    if (sector >= order) raise(ErrorKind::InvalidConfig, "sector must be smaller than order");
}

NcsState assemble(const DeformationSpec& spec, cplx alpha, std::size_t order, std::size_t sector, std::size_t n_max) {
    check_circle(order, sector);
    if (sector > n_max) raise(ErrorKind::InvalidConfig, "n_max is below the sector");
    if (alpha == cplx(0.0, 0.0) && sector != 0)
        raise(ErrorKind::InvalidConfig, "alpha = 0 leaves no amplitude in a nonzero sector");
    std::vector<double> h = h_table(spec, n_max);
    const double la = std::log(std::abs(alpha));
    Terms t = build_terms(h, la, order, sector, n_max);

    NcsState s;
    s.spec = spec;
    s.alpha = alpha;
    s.order = order;
    s.sector = sector;
    s.n_max = n_max;
    s.log_terms = t.logmag;
    s.amplitudes.assign(n_max + 1, cplx(0.0, 0.0));

    double top = -kInf;
    for (double v : t.logmag)
        if (!std::isnan(v)) top = std::max(top, v);
    const double arg = std::arg(alpha);
    double norm2 = 0.0;
    for (std::size_t n = sector; n <= n_max; n += order) {
        double mag = std::exp(t.logmag[n] - top);
        s.amplitudes[n] = std::polar(mag * t.sign[n], static_cast<double>(n) * arg);
        norm2 += mag * mag;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : s.amplitudes) c *= inv;

    std::size_t tail = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(kTailFraction * (n_max + 1))));
    double tail_mass = 0.0;
    for (std::size_t n = n_max + 1 - tail; n <= n_max; ++n) tail_mass += std::norm(s.amplitudes[n]);
    s.tail_mass_estimate = tail_mass;

    if (alpha != cplx(0.0, 0.0) && late_trend_slope(t.logmag) > kTrendThreshold)
        s.norm_status = NormStatus::DivergentAtAlpha;
    return s;
}

std::vector<double> support_terms(const DeformationSpec& spec, cplx alpha, std::size_t order, std::size_t sector,
                                  std::size_t n_cap) {
    check_circle(order, sector);
    std::vector<double> h = h_table(spec, n_cap);
    return build_terms(h, std::log(std::abs(alpha)), order, sector, n_cap).logmag;
}

}  // namespace

double late_trend_slope(const std::vector<double>& y, double window) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (std::isfinite(y[i])) idx.push_back(i);
    if (idx.size() < 2) return 0.0;
    std::size_t take = std::max<std::size_t>(2, static_cast<std::size_t>(std::ceil(window * idx.size())));
    take = std::min(take, idx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(take);
    const double x0 = static_cast<double>(idx[idx.size() - take]);
    for (std::size_t k = idx.size() - take; k < idx.size(); ++k) {
        double x = static_cast<double>(idx[k]) - x0, v = y[idx[k]];
        sx += x;
        sy += v;
        sxx += x * x;
        sxy += x * v;
    }
    double den = m * sxx - sx * sx;
    return den == 0.0 ? 0.0 : (m * sxy - sx * sy) / den;
}

EvalResult h_exponential(const DeformationSpec& spec, double v, std::size_t n_max) {
    if (v == 0.0) return {1.0, 0.0, 1};
    std::vector<LogWeight> f = factorial_table(h_table(spec, n_max));
    std::vector<double> lt(n_max + 1);
    const double lv = std::log(std::fabs(v));
    for (std::size_t n = 0; n <= n_max; ++n) {
        double nn = static_cast<double>(n);
        lt[n] = nn * lv - std::lgamma(nn + 1.0) - 2.0 * f[n].log_mag;
    }
    if (late_trend_slope(lt) > kTrendThreshold)
        raise(ErrorKind::Divergent, "h_exponential: terms still growing at n_max", static_cast<long>(n_max));
    double top = *std::max_element(lt.begin(), lt.end());
    if (top > 700.0) raise(ErrorKind::MagnitudeOverflow, "h_exponential: sum exceeds floating range");
    double sum = 0.0, abs_sum = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        double term = std::exp(lt[n]);
        if (v < 0 && n % 2 == 1) term = -term;
        sum += term;
        abs_sum += std::fabs(term);
    }
    double err = std::exp(lt[n_max]) + abs_sum * 1e-16 * std::sqrt(static_cast<double>(n_max + 1));
    return {sum, err, n_max + 1};
}

cplx h_exponential_complex(const DeformationSpec& spec, cplx v, std::size_t n_max) {
    if (v == cplx(0.0, 0.0)) return 1.0;
    std::vector<LogWeight> f = factorial_table(h_table(spec, n_max));
    const double lv = std::log(std::abs(v)), av = std::arg(v);
    cplx sum = 0.0;
    for (std::size_t n = 0; n <= n_max; ++n) {
        double nn = static_cast<double>(n);
        double lt = nn * lv - std::lgamma(nn + 1.0) - 2.0 * f[n].log_mag;
        sum += std::polar(std::exp(lt), nn * av);
    }
    return sum;
}

NcsState ncs_amplitudes(const DeformationSpec& spec, cplx alpha, std::size_t n_max) {
    return assemble(spec, alpha, 1, 0, n_max);
}

NcsState ncs_circle(const DeformationSpec& spec, cplx alpha, std::size_t order, std::size_t sector, std::size_t n_max) {
    return assemble(spec, alpha, order, sector, n_max);
}

std::size_t policy_n_max(const DeformationSpec& spec, cplx alpha, std::size_t order, std::size_t sector,
                         std::size_t n_cap) {
    if (alpha == cplx(0.0, 0.0)) return std::max<std::size_t>(sector, 1);
    std::vector<double> lt = support_terms(spec, alpha, order, sector, n_cap);
    std::vector<double> running(lt.size(), -kInf);
    double top = -kInf;
    for (std::size_t n = 0; n < lt.size(); ++n) {
        if (!std::isnan(lt[n])) top = std::max(top, lt[n]);
        running[n] = top;
    }
    for (std::size_t n = sector + order; n <= n_cap; n += order) {
        std::size_t lo = static_cast<std::size_t>(std::floor(0.8 * static_cast<double>(n)));
        bool ok = true;
        for (std::size_t i = lo; i <= n && ok; ++i)
            if (!std::isnan(lt[i]) && lt[i] > running[n] - kTruncationMargin) ok = false;
        if (ok) return n;
    }
    return n_cap;
}

std::size_t first_dip_after_peak(const DeformationSpec& spec, cplx alpha, std::size_t order, std::size_t sector,
                                 std::size_t n_cap) {
    std::vector<double> lt = support_terms(spec, alpha, order, sector, n_cap);
    std::vector<std::size_t> idx;
    for (std::size_t n = sector; n <= n_cap; n += order) idx.push_back(n);
    bool seen_peak = false;
    for (std::size_t k = 1; k + 1 < idx.size(); ++k) {
        double a = lt[idx[k - 1]], b = lt[idx[k]], c = lt[idx[k + 1]];
        if (!seen_peak && b > a && b >= c) seen_peak = true;
        else if (seen_peak && b < a && b <= c) return idx[k];
    }
    return n_cap;
}

std::vector<CircleComponent> circle_decomposition(const NcsState& state) {
    const std::size_t k = state.order, q = state.sector;
    if (k < 2) raise(ErrorKind::InvalidConfig, "circle_decomposition needs order >= 2");
    const DeformationSpec base = state.spec;
    Custom lifted{[base, k, q](std::size_t n) { return (n % k == q && n >= k) ? h_eval(base, n) : 1.0; },
                  "lifted(" + describe(base) + ")"};
    std::vector<CircleComponent> out;
    for (std::size_t j = 0; j < k; ++j) {
        double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(k);
        cplx eps = std::polar(1.0, ang);
        cplx phase = std::polar(1.0, -ang * static_cast<double>(q));
        out.push_back({phase, ncs_amplitudes(lifted, state.alpha * eps, state.n_max)});
    }
    return out;
}

std::vector<cplx> recombine(const std::vector<CircleComponent>& parts) {
    if (parts.empty()) return {};
    std::vector<cplx> sum(parts.front().component.amplitudes.size(), cplx(0.0, 0.0));
    for (const auto& p : parts)
        for (std::size_t n = 0; n < sum.size(); ++n) sum[n] += p.phase * p.component.amplitudes[n];
    double norm2 = 0.0;
    for (const auto& c : sum) norm2 += std::norm(c);
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : sum) c *= inv;
    return sum;
}

Eigen::VectorXcd as_vector(const NcsState& state) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(state.amplitudes.size()));
    for (std::size_t n = 0; n < state.amplitudes.size(); ++n) v(static_cast<Eigen::Index>(n)) = state.amplitudes[n];
    return v;
}

std::vector<ProbeResult> convergence_probe(const DeformationSpec& spec, const std::vector<cplx>& directions,
                                           const std::vector<double>& radius_grid, std::size_t n_max) {
    if (radius_grid.empty()) raise(ErrorKind::InvalidConfig, "convergence_probe: empty radius grid");
    std::vector<LogWeight> f = factorial_table(h_table(spec, n_max));
    std::vector<double> base(n_max + 1);
    for (std::size_t n = 0; n <= n_max; ++n)
        base[n] = -0.5 * std::lgamma(static_cast<double>(n) + 1.0) - f[n].log_mag;
    // The log-terms are n log r + base[n]; the least-squares slope is linear in the data.
    const double base_slope = late_trend_slope(base);

    std::vector<double> radii = radius_grid;
    std::sort(radii.begin(), radii.end());
    std::vector<TrendClass> classes;
    bool any_summable = false, any_divergent = false;
    for (double r : radii) {
        if (!(r > 0.0)) raise(ErrorKind::InvalidConfig, "convergence_probe: radii must be positive");
        double slope = std::log(r) + base_slope;
        TrendClass c = slope < -kTrendThreshold ? TrendClass::Summable
                       : slope > kTrendThreshold ? TrendClass::Divergent
                                                 : TrendClass::Inconclusive;
        any_summable |= c == TrendClass::Summable;
        any_divergent |= c == TrendClass::Divergent;
        classes.push_back(c);
    }
    if (!any_summable && !any_divergent)
        raise(ErrorKind::Inconclusive, "convergence_probe: every radius straddles the trend threshold");
    bool all_summable = std::all_of(classes.begin(), classes.end(), [](TrendClass c) { return c == TrendClass::Summable; });
    double boundary = all_summable ? kInf : std::exp(-base_slope);

    std::vector<ProbeResult> out;
    for (cplx d : directions) out.push_back({d, classes, boundary});
    return out;
}

cplx alpha_from_rabi(const RabiConfig& c) {
    if (!(c.omega0 > 0.0 && c.omegaN1 > 0.0 && c.eta > 0.0))
        raise(ErrorKind::InvalidConfig, "RabiConfig fields must be positive");
    const double k = static_cast<double>(c.N + 1);
    cplx denom = std::pow(cplx(0.0, -c.eta), static_cast<int>(c.N + 1));
    return (c.omega0 / c.omegaN1) * std::tgamma(k + 1.0) / denom;
}

NcsState dark_state(const RabiConfig& config, std::size_t sector, std::size_t n_max) {
    cplx a = alpha_from_rabi(config);
    const double k = static_cast<double>(config.N + 1);
    cplx root = std::polar(std::pow(std::abs(a), 1.0 / k), std::arg(a) / k);
    return ncs_circle(TrappedIon{config.N + 1, config.eta * config.eta}, root, config.N + 1, sector, n_max);
}

cplx rho_functional(const Eigen::MatrixXcd& density, const DeformationSpec& spec, cplx z) {
    if (density.rows() != density.cols() || density.rows() == 0)
        raise(ErrorKind::InvalidConfig, "rho_functional: density must be square");
    cplx tr = density.trace();
    if (std::abs(tr - 1.0) > 1e-10) raise(ErrorKind::InvalidConfig, "rho_functional: density trace differs from 1");
    const std::size_t n_max = static_cast<std::size_t>(density.rows()) - 1;
    std::vector<LogWeight> f = factorial_table(h_table(spec, n_max));

    // Coherent-state components <n|z> = e^{-|z|^2/2} z^n / sqrt(n!) and the
    // deformation factor [h(n)]! folded in on the ket side.
    const double lz = std::log(std::abs(z)), az = std::arg(z), half = 0.5 * std::norm(z);
    Eigen::VectorXcd ket(density.rows()), bra(density.rows());
    for (std::size_t n = 0; n <= n_max; ++n) {
        double nn = static_cast<double>(n);
        double base = (n == 0 ? 0.0 : nn * lz) - 0.5 * std::lgamma(nn + 1.0) - half;
        cplx zn = std::polar(std::exp(base), nn * az);
        bra(static_cast<Eigen::Index>(n)) = std::conj(zn) * (f[n].sign * std::exp(f[n].log_mag));
        ket(static_cast<Eigen::Index>(n)) = zn * (f[n].sign * std::exp(-f[n].log_mag));
    }
    return bra.cwiseProduct(density * ket).sum() / std::numbers::pi;
}

}  // namespace ncs
