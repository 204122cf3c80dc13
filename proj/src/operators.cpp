#include <cmath>

#include "ncs/errors.hpp"
#include "ncs/states.hpp"

namespace ncs {

namespace {

using Index = Eigen::Index;

double log_fact(std::size_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

std::size_t resolve_power(const DeformationSpec& spec, std::size_t power) {
    return power == 0 ? first_index(spec) : power;
}

Eigen::MatrixXcd annihilation(const std::vector<double>& h, std::size_t k, std::size_t n_max) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Index>(n_max + 1), static_cast<Index>(n_max + 1));
    for (std::size_t n = k; n <= n_max; ++n)
        m(static_cast<Index>(n - k), static_cast<Index>(n)) = std::exp(0.5 * (log_fact(n) - log_fact(n - k))) * h[n];
    return m;
}

// e^{-|a|^2/2} e^{a A_h^dagger} e^{-a* A} as a product of two triangular finite sums.
Eigen::MatrixXcd displacement(const std::vector<LogWeight>& f, cplx alpha, std::size_t n_max) {
    const Index dim = static_cast<Index>(n_max + 1);
    Eigen::MatrixXcd lower = Eigen::MatrixXcd::Zero(dim, dim), upper = Eigen::MatrixXcd::Zero(dim, dim);
    const double la = std::log(std::abs(alpha)), arg = std::arg(alpha);
    const cplx minus_conj = -std::conj(alpha);
    const double arg_mc = std::arg(minus_conj);
    for (std::size_t m = 0; m <= n_max; ++m) {
        for (std::size_t n = 0; n <= m; ++n) {
            const std::size_t d = m - n;
            double lp = (d == 0 ? 0.0 : d * la) - log_fact(d) + 0.5 * (log_fact(m) - log_fact(n));
            double fr = f[n].log_mag - f[m].log_mag;
            int sgn = f[n].sign * f[m].sign;
            // e^{a A_h^dagger}: <m| . |n>, m >= n
            lower(static_cast<Index>(m), static_cast<Index>(n)) = std::polar(sgn * std::exp(lp + fr), d * arg);
            // e^{-a* A}: <n| . |m>, n <= m
            upper(static_cast<Index>(n), static_cast<Index>(m)) = std::polar(sgn * std::exp(lp - fr), d * arg_mc);
        }
    }
    Eigen::MatrixXcd out = std::exp(-0.5 * std::norm(alpha)) * (lower * upper);
    if (!out.allFinite()) raise(ErrorKind::MagnitudeOverflow, "displacement matrix exceeds floating range");
    return out;
}

}  // namespace

OperatorMatrix operator_matrix(OperatorKind kind, const DeformationSpec& spec, std::size_t n_max,
                               const OperatorOptions& opts) {
    const Index dim = static_cast<Index>(n_max + 1);
    OperatorMatrix out;
    out.dim = n_max + 1;
    out.kind = kind;
    std::vector<double> h = h_table(spec, n_max);

    switch (kind) {
        case OperatorKind::Annihilation:
            out.entries = annihilation(h, resolve_power(spec, opts.power), n_max);
            break;
        case OperatorKind::Creation:
            out.entries = annihilation(h, resolve_power(spec, opts.power), n_max).adjoint();
            break;
        case OperatorKind::DeformedCreation: {
            const std::size_t k = resolve_power(spec, opts.power);
            out.entries = Eigen::MatrixXcd::Zero(dim, dim);
            for (std::size_t n = 0; n + k <= n_max; ++n)
                out.entries(static_cast<Index>(n + k), static_cast<Index>(n)) =
                    std::exp(0.5 * (log_fact(n + k) - log_fact(n))) / h[n + k];
            break;
        }
        case OperatorKind::Displacement: {
            if (!opts.alpha) raise(ErrorKind::MissingParameter, "Displacement needs alpha");
            if (resolve_power(spec, opts.power) != 1)
                raise(ErrorKind::InvalidConfig, "Displacement is defined for first-order deformations only");
            out.entries = displacement(factorial_table(h), *opts.alpha, n_max);
            break;
        }
        case OperatorKind::DeformationOp: {
            std::vector<LogWeight> f = factorial_table(h);
            out.entries = Eigen::MatrixXcd::Zero(dim, dim);
            for (std::size_t n = 0; n <= n_max; ++n) {
                if (!f[n].inverse().finite_as_double())
                    raise(ErrorKind::MagnitudeOverflow, "1/[h(n)]! exceeds floating range", static_cast<long>(n));
                out.entries(static_cast<Index>(n), static_cast<Index>(n)) = f[n].inverse().value();
            }
            break;
        }
        case OperatorKind::Bichromatic: {
            if (!opts.bichromatic) raise(ErrorKind::MissingParameter, "Bichromatic needs {order, alphaN1}");
            auto ti = std::get_if<TrappedIon>(&spec);
            if (!ti) raise(ErrorKind::InvalidConfig, "Bichromatic operator needs a TrappedIon spec for eta2");
            const std::size_t k = opts.bichromatic->order;
            const cplx aN1 = opts.bichromatic->alphaN1;
            out.entries = Eigen::MatrixXcd::Zero(dim, dim);
            // f_k(n) a^k - alphaN1 f_0(n)
            for (std::size_t n = 0; n <= n_max; ++n) {
                out.entries(static_cast<Index>(n), static_cast<Index>(n)) = -aN1 * f_k(n, 0, ti->eta2);
                if (n >= k)
                    out.entries(static_cast<Index>(n - k), static_cast<Index>(n)) +=
                        f_k(n - k, k, ti->eta2) * std::exp(0.5 * (log_fact(n) - log_fact(n - k)));
            }
            break;
        }
    }
    return out;
}

std::vector<cplx> displaced_fock(const DeformationSpec& spec, cplx alpha, std::size_t m, Side side, std::size_t n_max) {
    if (m > n_max) raise(ErrorKind::InvalidConfig, "displaced_fock: m exceeds n_max", static_cast<long>(m));
    OperatorOptions opts;
    opts.alpha = side == Side::Right ? alpha : -alpha;
    Eigen::MatrixXcd d = operator_matrix(OperatorKind::Displacement, spec, n_max, opts).entries;
    std::vector<cplx> out(n_max + 1);
    for (std::size_t k = 0; k <= n_max; ++k)
        out[k] = side == Side::Right ? d(static_cast<Index>(k), static_cast<Index>(m)) : d(static_cast<Index>(m), static_cast<Index>(k));
    return out;
}

}  // namespace ncs
