#include "ncs/phasespace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ncs/errors.hpp"
#include "ncs/parallel.hpp"

namespace ncs {

namespace {

constexpr double kPi = std::numbers::pi;

std::size_t effective_length(const std::vector<cplx>& a) {
    std::size_t n = a.size();
    while (n > 1 && std::abs(a[n - 1]) < 1e-17) --n;
    return n;
}

struct Prepared {
    std::vector<cplx> amp;
    std::vector<char> has_pair;  // has_pair[d]: some n with amp[n], amp[n+d] both nonzero
};

Prepared prepare(const std::vector<cplx>& amplitudes) {
    Prepared p;
    p.amp.assign(amplitudes.begin(), amplitudes.begin() + static_cast<long>(effective_length(amplitudes)));
    const std::size_t n = p.amp.size();
    std::vector<std::size_t> nz;
    for (std::size_t i = 0; i < n; ++i)
        if (p.amp[i] != cplx(0.0, 0.0)) nz.push_back(i);
    p.has_pair.assign(n, 0);
    for (std::size_t a = 0; a < nz.size(); ++a)
        for (std::size_t b = a; b < nz.size(); ++b) p.has_pair[nz[b] - nz[a]] = 1;
    return p;
}

double wigner_prepared(const Prepared& st, double q, double p) {
    const std::vector<cplx>& c = st.amp;
    const std::size_t len = c.size();
    const double x = 2.0 * (q * q + p * p);
    const double theta = std::atan2(p, q);
    const double lx = std::log(x);
    double total = 0.0;
    for (std::size_t d = 0; d < len; ++d) {
        if (!st.has_pair[d]) continue;
        const double dd = static_cast<double>(d);
        // Normalized Laguerre functions sqrt(n!/(n+d)!) x^{d/2} e^{-x/2} L_n^d(x).
        double f_prev = 0.0;
        double f = (d == 0) ? std::exp(-0.5 * x) : (x > 0.0 ? std::exp(0.5 * dd * lx - 0.5 * x - 0.5 * std::lgamma(dd + 1.0)) : 0.0);
        cplx s = 0.0;
        for (std::size_t n = 0; n + d < len; ++n) {
            const cplx pair = std::conj(c[n]) * c[n + d];
            if (pair != cplx(0.0, 0.0)) s += (n % 2 == 0 ? f : -f) * pair;
            const double nn = static_cast<double>(n);
            double f_next = ((2.0 * nn + dd + 1.0 - x) * f - std::sqrt(nn * (nn + dd)) * f_prev) /
                            std::sqrt((nn + 1.0) * (nn + 1.0 + dd));
            f_prev = f;
            f = f_next;
        }
        total += (d == 0) ? s.real() : 2.0 * (std::polar(1.0, -dd * theta) * s).real();
    }
    return total / kPi;
}

double husimi_prepared(const std::vector<cplx>& c, double q, double p) {
    const cplx wc = cplx(q, -p) / std::sqrt(2.0);
    double t = std::exp(-0.5 * std::norm(wc));
    cplx power = 1.0, sum = 0.0;
    for (std::size_t n = 0; n < c.size(); ++n) {
        if (n > 0) power *= wc / std::sqrt(static_cast<double>(n));
        sum += c[n] * power;
    }
    return std::norm(sum * t) / (2.0 * kPi);
}

template <class Eval>
Field fill(const GridSpec& grid, FieldKind kind, unsigned workers, Eval&& eval) {
    validate(grid);
    Field f;
    f.grid = grid;
    f.kind = kind;
    f.values.resize(static_cast<Eigen::Index>(grid.nq), static_cast<Eigen::Index>(grid.np));
    parallel_for(grid.nq, workers, [&](std::size_t i) {
        const double q = grid.q(i);
        for (std::size_t j = 0; j < grid.np; ++j)
            f.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = eval(q, grid.p(j));
    });
    return f;
}

void require_normalized(const NcsState& s) {
    if (s.norm_status != NormStatus::Normalized)
        raise(ErrorKind::Divergent, "phase-space evaluation needs a normalizable state");
}

}  // namespace

void validate(const GridSpec& g) {
    if (!(g.q_min < g.q_max && g.p_min < g.p_max)) raise(ErrorKind::InvalidConfig, "grid bounds must be increasing");
    if (g.nq < 2 || g.np < 2) raise(ErrorKind::InvalidConfig, "grid needs at least 2 points per axis");
}

double wigner_at(const std::vector<cplx>& amplitudes, double q, double p) {
    return wigner_prepared(prepare(amplitudes), q, p);
}

double husimi_at(const std::vector<cplx>& amplitudes, double q, double p) {
    return husimi_prepared(amplitudes, q, p);
}

Field wigner(const std::vector<cplx>& amplitudes, const GridSpec& grid, unsigned workers) {
    Prepared st = prepare(amplitudes);
    return fill(grid, FieldKind::Wigner, workers, [&](double q, double p) { return wigner_prepared(st, q, p); });
}

Field wigner(const NcsState& state, const GridSpec& grid, unsigned workers) {
    require_normalized(state);
    return wigner(state.amplitudes, grid, workers);
}

Field husimi(const std::vector<cplx>& amplitudes, const GridSpec& grid, unsigned workers) {
    std::vector<cplx> c(amplitudes.begin(), amplitudes.begin() + static_cast<long>(effective_length(amplitudes)));
    return fill(grid, FieldKind::Husimi, workers, [&](double q, double p) { return husimi_prepared(c, q, p); });
}

Field husimi(const NcsState& state, const GridSpec& grid, unsigned workers) {
    require_normalized(state);
    return husimi(state.amplitudes, grid, workers);
}

double integrate_unchecked(const Field& field) {
    const GridSpec& g = field.grid;
    const double dq = (g.q_max - g.q_min) / static_cast<double>(g.nq - 1);
    const double dp = (g.p_max - g.p_min) / static_cast<double>(g.np - 1);
    double sum = 0.0;
    for (std::size_t i = 0; i < g.nq; ++i) {
        double wi = (i == 0 || i == g.nq - 1) ? 0.5 : 1.0;
        for (std::size_t j = 0; j < g.np; ++j) {
            double wj = (j == 0 || j == g.np - 1) ? 0.5 : 1.0;
            sum += wi * wj * field.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return sum * dq * dp;
}

double integrate(const Field& field) {
    const Eigen::MatrixXd& v = field.values;
    const double peak = v.cwiseAbs().maxCoeff();
    double edge = std::max({v.row(0).cwiseAbs().maxCoeff(), v.row(v.rows() - 1).cwiseAbs().maxCoeff(),
                            v.col(0).cwiseAbs().maxCoeff(), v.col(v.cols() - 1).cwiseAbs().maxCoeff()});
    if (edge > kBoundaryTolerance * peak)
        raise(ErrorKind::SupportExceedsGrid, "field is not negligible on the grid boundary");
    return integrate_unchecked(field);
}

}  // namespace ncs
