#include "ncs/deformation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ncs/errors.hpp"
#include "ncs/specfun.hpp"

namespace ncs {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr double kPi = std::numbers::pi;

void check_h(double h, std::size_t n) {
    if (!std::isfinite(h)) raise(ErrorKind::DeformationPole, "deformation is not finite", static_cast<long>(n));
    if (h == 0.0) raise(ErrorKind::RootAtEvaluationPoint, "deformation vanishes", static_cast<long>(n));
}

// h_k(n) for n = k..n_max via s^{(m)}_j = L^m_j / L_j.
std::vector<double> trapped_ion_table(const TrappedIon& ti, std::size_t n_max) {
    const std::size_t k = ti.order;
    std::vector<double> h(n_max + 1, 1.0);
    if (n_max < k) return h;
    const std::size_t j_max = n_max - k;
    LaguerreRatios r = laguerre_ratio_scan(ti.eta2, j_max + 1);
    for (std::size_t p : r.poles)
        if (p <= j_max + 1)
            raise(ErrorKind::DeformationPole, "Laguerre denominator vanishes within tolerance", static_cast<long>(p - 1 + k));

    const long double kfact = std::tgamma(static_cast<long double>(k) + 1.0L);
    std::vector<long double> s(k + 1, 1.0L);
    for (std::size_t j = 0; j <= j_max; ++j) {
        if (j > 0)
            for (std::size_t m = 1; m <= k; ++m) s[m] = s[m] / r.t_ext[j] + s[m - 1];
        std::size_t n = j + k;
        long double poch = 1.0L;  // (j+1)_k
        for (std::size_t i = 1; i <= k; ++i) poch *= static_cast<long double>(j + i);
        h[n] = static_cast<double>(kfact * s[k] / poch);
        check_h(h[n], n);
    }
    return h;
}

double series_value(const TruncatedSeries& ts, double n) {
    const double e = ts.eta2;
    double c1, c2, c3;
    if (ts.base == SeriesBase::H1) {
        c1 = (n - 1.0) / 2.0;
        c2 = (2.0 * n * n - 3.0 * n + 1.0) / 6.0;
        c3 = (11.0 * n * n * n - 22.0 * n * n + 13.0 * n - 2.0) / 48.0;
    } else {
        c1 = 2.0 * (n - 2.0) / 3.0;
        c2 = (11.0 * n * n - 39.0 * n + 34.0) / 24.0;
        c3 = (19.0 * n * n * n - 96.0 * n * n + 159.0 * n - 86.0) / 60.0;
    }
    double v = 1.0 + c1 * e;
    if (ts.order >= 2) v += c2 * e * e;
    if (ts.order >= 3) v += c3 * e * e * e;
    return v;
}

double q_oscillator(double lambda, double n) {
    auto log_sinh = [](double y) { return y + std::log1p(-std::exp(-2.0 * y)) - std::log(2.0); };
    return std::exp(0.5 * (log_sinh(lambda * n) - std::log(n) - log_sinh(lambda)));
}

double rational_value(const Rational& r, std::size_t n) {
    double nn = static_cast<double>(n);
    double num = r.gamma, den = 1.0;
    for (double a : r.a) num *= (nn + a);
    for (double b : r.b) den *= (nn + b);
    if (den == 0.0) raise(ErrorKind::DeformationPole, "rational deformation has a pole", static_cast<long>(n));
    return num / den;
}

// Coefficients (lowest order first) of the polynomial in n for C(n-1, j).
std::vector<double> binom_shifted(std::size_t j) {
    std::vector<double> p{1.0};
    for (std::size_t i = 1; i <= j; ++i) {
        // multiply by (n - i)
        std::vector<double> q(p.size() + 1, 0.0);
        for (std::size_t d = 0; d < p.size(); ++d) {
            q[d + 1] += p[d];
            q[d] -= static_cast<double>(i) * p[d];
        }
        p = std::move(q);
    }
    double fact = std::tgamma(static_cast<double>(j) + 1.0);
    for (double& c : p) c /= fact;
    return p;
}

double poly_eval(const std::vector<double>& p, double x) {
    double v = 0.0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * x + p[i];
    return v;
}

std::vector<double> real_roots(const std::vector<double>& p) {
    const std::size_t deg = p.size() - 1;
    std::vector<double> roots;
    if (deg == 0) return roots;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (std::size_t i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (std::size_t i = 0; i < deg; ++i) comp(i, deg - 1) = -p[i] / p[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<double> dp(deg);
    for (std::size_t i = 1; i <= deg; ++i) dp[i - 1] = static_cast<double>(i) * p[i];
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        std::complex<double> z = es.eigenvalues()[i];
        if (std::fabs(z.imag()) > 1e-8 * std::max(1.0, std::abs(z)))
            raise(ErrorKind::InvalidConfig, "rational_from_truncation: complex root is not representable");
        double x = z.real();
        double d = poly_eval(dp, x);
        if (d != 0.0) x -= poly_eval(p, x) / d;
        roots.push_back(x);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

void validate(const DeformationSpec& spec) {
    std::visit(overloaded{
                   [](const Identity&) {},
                   [](const TrappedIon& t) {
                       if (t.order < 1) raise(ErrorKind::InvalidConfig, "TrappedIon order must be >= 1");
                       if (!(t.eta2 > 0.0)) raise(ErrorKind::InvalidConfig, "TrappedIon eta2 must be > 0");
                   },
                   [](const QOscillator& q) {
                       if (!(q.lambda > 0.0)) raise(ErrorKind::InvalidConfig, "QOscillator lambda must be > 0");
                   },
                   [](const Rational& r) {
                       if (r.gamma == 0.0 || !std::isfinite(r.gamma))
                           raise(ErrorKind::InvalidConfig, "Rational gamma must be finite and nonzero");
                   },
                   [](const TruncatedSeries& s) {
                       if (!(s.eta2 > 0.0)) raise(ErrorKind::InvalidConfig, "TruncatedSeries eta2 must be > 0");
                       if (s.order < 1 || s.order > 3) raise(ErrorKind::InvalidConfig, "TruncatedSeries order must be 1..3");
                   },
                   [](const Custom& c) {
                       if (!c.h) raise(ErrorKind::InvalidConfig, "Custom deformation needs a callable");
                   },
               },
               spec);
}

std::string describe(const DeformationSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const Identity&) { os << "Identity"; },
                   [&](const TrappedIon& t) { os << "TrappedIon{order=" << t.order << ",eta2=" << t.eta2 << "}"; },
                   [&](const QOscillator& q) { os << "QOscillator{lambda=" << q.lambda << "}"; },
                   [&](const Rational& r) {
                       os << "Rational{gamma=" << r.gamma << ",a=[";
                       for (std::size_t i = 0; i < r.a.size(); ++i) os << (i ? "," : "") << r.a[i];
                       os << "],b=[";
                       for (std::size_t i = 0; i < r.b.size(); ++i) os << (i ? "," : "") << r.b[i];
                       os << "]}";
                   },
                   [&](const TruncatedSeries& s) {
                       os << "TruncatedSeries{base=" << (s.base == SeriesBase::H1 ? "h1" : "h2") << ",eta2=" << s.eta2
                          << ",order=" << s.order << "}";
                   },
                   [&](const Custom& c) { os << "Custom{" << c.name << "}"; },
               },
               spec);
    return os.str();
}

std::size_t first_index(const DeformationSpec& spec) {
    if (auto t = std::get_if<TrappedIon>(&spec)) return t->order;
    return 1;
}

double h_eval(const DeformationSpec& spec, std::size_t n) {
    validate(spec);
    if (n < first_index(spec)) raise(ErrorKind::InvalidConfig, "h_eval: n below the first defined index", static_cast<long>(n));
    if (auto t = std::get_if<TrappedIon>(&spec)) return trapped_ion_table(*t, n)[n];
    const double nn = static_cast<double>(n);
    double v = std::visit(overloaded{
                              [](const Identity&) { return 1.0; },
                              [](const TrappedIon&) { return 1.0; },
                              [&](const QOscillator& q) { return q_oscillator(q.lambda, nn); },
                              [&](const Rational& r) { return rational_value(r, n); },
                              [&](const TruncatedSeries& s) { return series_value(s, nn); },
                              [&](const Custom& c) { return c.h(n); },
                          },
                          spec);
    check_h(v, n);
    return v;
}

std::vector<double> h_table(const DeformationSpec& spec, std::size_t n_max) {
    validate(spec);
    if (auto t = std::get_if<TrappedIon>(&spec)) return trapped_ion_table(*t, n_max);
    std::vector<double> h(n_max + 1, 1.0);
    if (std::holds_alternative<Identity>(spec)) return h;
    for (std::size_t n = 1; n <= n_max; ++n) h[n] = h_eval(spec, n);
    return h;
}

DeformationSpec reciprocal(const DeformationSpec& spec) {
    if (std::holds_alternative<Identity>(spec)) return Identity{};
    if (auto r = std::get_if<Rational>(&spec)) return Rational{1.0 / r->gamma, r->b, r->a};
    return Custom{[spec](std::size_t n) { return 1.0 / h_eval(spec, n); }, "1/" + describe(spec)};
}

DeformationSpec scaled(const DeformationSpec& spec, double beta) {
    if (auto r = std::get_if<Rational>(&spec)) return Rational{beta * r->gamma, r->a, r->b};
    if (std::holds_alternative<Identity>(spec)) return Rational{beta, {}, {}};
    std::ostringstream os;
    os.precision(17);
    os << beta << "*" << describe(spec);
    return Custom{[spec, beta](std::size_t n) { return beta * h_eval(spec, n); }, os.str()};
}

std::vector<LogWeight> factorial_table(const std::vector<double>& h) {
    std::vector<LogWeight> f(h.size(), LogWeight::one());
    for (std::size_t n = 1; n < h.size(); ++n) f[n] = f[n - 1] * LogWeight::from_value(h[n]);
    return f;
}

std::vector<LogWeight> circle_factorial_table(const std::vector<double>& h, std::size_t order, std::size_t sector) {
    std::vector<LogWeight> f;
    if (sector >= h.size()) return f;
    f.push_back(LogWeight::one());
    for (std::size_t n = sector + order; n < h.size(); n += order) f.push_back(f.back() * LogWeight::from_value(h[n]));
    return f;
}

LogWeight h_factorial_log(const DeformationSpec& spec, std::size_t n, std::optional<CircleIndex> circle) {
    if (n == 0) return LogWeight::one();
    std::vector<double> h = h_table(spec, n);
    if (!circle) return factorial_table(h)[n];
    if (circle->order == 0 || circle->sector >= circle->order)
        raise(ErrorKind::InvalidConfig, "circle sector must lie in [0, order)");
    if (n % circle->order != circle->sector)
        raise(ErrorKind::InvalidConfig, "index is not on the circle sector", static_cast<long>(n));
    return circle_factorial_table(h, circle->order, circle->sector).back();
}

LogWeight rational_factorial_log(const Rational& r, std::size_t n) {
    double s = static_cast<double>(n);
    LogWeight out = log_gamma_ratio(r.a, r.b, s + 1.0) / log_gamma_ratio(r.a, r.b, 1.0);
    out *= LogWeight{r.gamma > 0 || n % 2 == 0 ? 1 : -1, s * std::log(std::fabs(r.gamma))};
    return out;
}

double f_k(std::size_t n, std::size_t k, double eta2) {
    double kk = static_cast<double>(k), nn = static_cast<double>(n);
    // k! / (n+1)_k = Gamma(k+1) Gamma(n+1) / Gamma(n+k+1)
    double log_ratio = std::lgamma(kk + 1.0) + std::lgamma(nn + 1.0) - std::lgamma(nn + kk + 1.0);
    return std::exp(log_ratio) * laguerre(n, k, eta2);
}

double h1_asymptotic(std::size_t n, double eta2) {
    double r = std::sqrt(static_cast<double>(n) * eta2);
    double theta = 2.0 * r - kPi / 4.0;
    double off = std::remainder(theta - kPi / 2.0, kPi);
    if (std::fabs(off) < kTangentGuard)
        raise(ErrorKind::NearTangentPole, "h1_asymptotic: argument within guard of a tangent pole", static_cast<long>(n));
    return std::tan(theta) / r;
}

double u_function(double x) {
    const double phi = 4.0 * x;
    auto half_im = [phi](int s) {
        return 0.5 * (polylog_unit_circle(s, phi + kPi / 2.0) - polylog_unit_circle(s, phi - kPi / 2.0)).imag();
    };
    return (4.0 / kPi) * (4.0 * x * half_im(2) - half_im(3));
}

std::vector<double> factorial_log_profile(double eta2, std::size_t n_max) {
    std::vector<double> h = h_table(TrappedIon{1, eta2}, n_max);
    std::vector<double> out(n_max);
    double acc = 0.0, le = std::log(eta2);
    for (std::size_t n = 1; n <= n_max; ++n) {
        acc += 2.0 * std::log(std::fabs(h[n]));
        double nn = static_cast<double>(n);
        out[n - 1] = acc + std::lgamma(nn + 1.0) + nn * le;
    }
    return out;
}

Rational rational_from_truncation(unsigned A, unsigned B, double eta2, std::size_t n_check) {
    if (!(eta2 > 0.0)) raise(ErrorKind::InvalidConfig, "rational_from_truncation: eta2 must be > 0");
    if (A < B) raise(ErrorKind::InvalidConfig, "rational_from_truncation: requires A >= B");

    // (P_{A+1}(n-1) - P_{A+1}(n)) / eta2 = sum_{k=1}^{A+1} (-1)^{k+1} C(n-1, k-1) eta2^{k-1} / k!
    std::vector<double> num(A + 1, 0.0), den(B + 1, 0.0);
    for (unsigned k = 1; k <= A + 1; ++k) {
        double c = ((k % 2 == 1) ? 1.0 : -1.0) * std::pow(eta2, k - 1.0) / std::tgamma(k + 1.0);
        auto b = binom_shifted(k - 1);
        for (std::size_t d = 0; d < b.size(); ++d) num[d] += c * b[d];
    }
    // P_B(n-1) = sum_{k=0}^{B} (-1)^k C(n-1, k) eta2^k / k!
    for (unsigned k = 0; k <= B; ++k) {
        double c = ((k % 2 == 0) ? 1.0 : -1.0) * std::pow(eta2, static_cast<double>(k)) / std::tgamma(k + 1.0);
        auto b = binom_shifted(k);
        for (std::size_t d = 0; d < b.size(); ++d) den[d] += c * b[d];
    }

    Rational r;
    r.gamma = num.back() / den.back();
    for (double x : real_roots(num)) r.a.push_back(-x);
    for (double x : real_roots(den)) r.b.push_back(-x);

    if (n_check > 0) {
        auto hits = [&](const std::vector<double>& roots) {
            for (double v : roots) {
                double root = -v, ri = std::round(root);
                if (std::fabs(root - ri) < 1e-9 && ri >= 1.0 && ri <= static_cast<double>(n_check))
                    raise(ErrorKind::RootAtEvaluationPoint, "rational root lands on an evaluation index", static_cast<long>(ri));
            }
        };
        hits(r.a);
        hits(r.b);
    }
    return r;
}

Rational linear_approximant(double eta2) {
    if (!(eta2 > 0.0)) raise(ErrorKind::InvalidConfig, "linear_approximant: eta2 must be > 0");
    return Rational{eta2 / 2.0, {2.0 / eta2 - 1.0}, {}};
}

}  // namespace ncs
