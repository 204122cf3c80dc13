#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ncs/errors.hpp"
#include "ncs/phasespace.hpp"
#include "oracles.hpp"

using namespace ncs;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

GridSpec square(double lo, double hi, std::size_t n) {
    GridSpec g;
    g.q_min = g.p_min = lo;
    g.q_max = g.p_max = hi;
    g.nq = g.np = n;
    return g;
}

std::vector<cplx> fock(std::size_t n) {
    std::vector<cplx> c(n + 1, 0.0);
    c[n] = 1.0;
    return c;
}

}  // namespace

TEST_CASE("vacuum fields") {
    const GridSpec g = square(-6.0, 6.0, 241);
    Field w = wigner(std::vector<cplx>{1.0}, g), q = husimi(std::vector<cplx>{1.0}, g);
    for (std::size_t i = 0; i < g.nq; i += 17)
        for (std::size_t j = 0; j < g.np; j += 13) {
            double r2 = g.q(i) * g.q(i) + g.p(j) * g.p(j);
            CHECK(w.values(i, j) == Approx(std::exp(-r2) / kPi).epsilon(1e-12));
            CHECK(q.values(i, j) == Approx(std::exp(-0.5 * r2) / (2.0 * kPi)).epsilon(1e-12));
        }
    CHECK(std::abs(integrate(w) - 1.0) <= 1e-6);
    // Q falls only to e^{-18} of its peak at the edge of [-6,6], so the
    // boundary precondition rejects this grid; the trapezoid value is still good.
    CHECK_THROWS_AS(integrate(q), Error);
    CHECK(std::abs(integrate_unchecked(q) - 1.0) <= 1e-6);
    CHECK(husimi_at({1.0}, 0.0, 0.0) == Approx(1.0 / (2.0 * kPi)).epsilon(1e-14));
    CHECK(w.kind == FieldKind::Wigner);
    CHECK(q.kind == FieldKind::Husimi);
}

TEST_CASE("Fock states at the origin") {
    for (std::size_t n = 0; n <= 6; ++n)
        CHECK(wigner_at(fock(n), 0.0, 0.0) == Approx((n % 2 ? -1.0 : 1.0) / kPi).epsilon(1e-12));
}

TEST_CASE("even cat") {
    NcsState cat = ncs_circle(Identity{}, {3.5, 0.0}, 2, 0, 80);
    // Parity expectation is +1.
    CHECK(wigner_at(cat.amplitudes, 0.0, 0.0) == Approx(1.0 / kPi).epsilon(1e-10));

    // Beyond the radius the cat is cut at the first dip after the peak and renormalized.
    const DeformationSpec spec = TrappedIon{2, 0.25};
    std::size_t cut = first_dip_after_peak(spec, {3.5, 0.0}, 2, 0, 4096);
    NcsState raw = ncs_circle(spec, {3.5, 0.0}, 2, 0, cut);
    double n2 = 0.0;
    for (auto v : raw.amplitudes) n2 += std::norm(v);
    std::vector<cplx> amp = raw.amplitudes;
    for (auto& v : amp) v /= std::sqrt(n2);
    const GridSpec g = square(-14.0, 14.0, 281);
    CHECK(std::abs(integrate(wigner(amp, g)) - 1.0) <= 1e-4);
    CHECK(std::abs(integrate(husimi(amp, g)) - 1.0) <= 1e-4);
}

TEST_CASE("husimi matches the direct overlap") {
    const DeformationSpec spec = TrappedIon{1, 0.05};
    NcsState s = ncs_amplitudes(spec, {1.2, -0.7}, 120);
    const GridSpec g = square(-5.0, 5.0, 21);
    Field q = husimi(s, g);
    double worst = 0.0;
    for (std::size_t i = 0; i < g.nq; ++i)
        for (std::size_t j = 0; j < g.np; ++j)
            worst = std::max(worst, std::abs(q.values(i, j) - oracle::husimi_direct(s.amplitudes, g.q(i), g.p(j))));
    CHECK(worst <= 1e-10);
    CHECK(q.values.minCoeff() >= 0.0);
}

TEST_CASE("normalization over the corpus") {
    const GridSpec g = square(-14.0, 14.0, 281);
    const cplx alpha(3.5, 0.0);
    for (double eta : {0.0, 0.33})
        for (std::size_t k : {2u, 3u, 4u}) {
            DeformationSpec spec = eta == 0.0 ? DeformationSpec{Identity{}} : DeformationSpec{TrappedIon{k, eta * eta}};
            std::size_t n_max = std::max<std::size_t>(200, policy_n_max(spec, alpha, k, 0));
            NcsState s = ncs_circle(spec, alpha, k, 0, n_max);
            REQUIRE(s.norm_status == NormStatus::Normalized);
            CHECK(std::abs(integrate(wigner(s, g)) - 1.0) <= 1e-4);
            CHECK(std::abs(integrate(husimi(s, g)) - 1.0) <= 1e-4);
        }
}

TEST_CASE("point parity of even-order sector-0 states") {
    const GridSpec g = square(-6.0, 6.0, 61);
    for (std::size_t k : {2u, 4u}) {
        NcsState s = ncs_circle(TrappedIon{k, 0.1089}, {2.5, 0.0}, k, 0, 150);
        Field w = wigner(s, g);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.nq; ++i)
            for (std::size_t j = 0; j < g.np; ++j)
                worst = std::max(worst, std::abs(w.values(i, j) - w.values(g.nq - 1 - i, g.np - 1 - j)));
        CHECK(worst <= 1e-12);
    }
    // Odd orders have no point parity; real alpha still gives the p -> -p mirror.
    NcsState s3 = ncs_circle(TrappedIon{3, 0.1089}, {2.5, 0.0}, 3, 0, 150);
    Field w3 = wigner(s3, g);
    double mirror = 0.0;
    for (std::size_t i = 0; i < g.nq; ++i)
        for (std::size_t j = 0; j < g.np; ++j) mirror = std::max(mirror, std::abs(w3.values(i, j) - w3.values(i, g.np - 1 - j)));
    CHECK(mirror <= 1e-12);
}

TEST_CASE("wigner marginal is the position density") {
    NcsState s = ncs_amplitudes(TrappedIon{1, 0.05}, {1.0, 0.8}, 100);
    const std::size_t n = 1201;
    for (double q : {-2.0, -0.7, 0.0, 0.4, 1.9}) {
        // Trapezoid in p on [-12, 12].
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double p = -12.0 + 24.0 * j / (n - 1.0);
            double wt = (j == 0 || j == n - 1) ? 0.5 : 1.0;
            sum += wt * wigner_at(s.amplitudes, q, p);
        }
        sum *= 24.0 / (n - 1.0);
        std::vector<double> phi = oracle::hermite_functions(100, q);
        cplx psi = 0.0;
        for (std::size_t k = 0; k <= 100; ++k) psi += s.amplitudes[k] * phi[k];
        CHECK(std::abs(sum - std::norm(psi)) <= 1e-3);
    }
}

TEST_CASE("husimi is the gaussian smoothing of wigner") {
    NcsState cat = ncs_circle(Identity{}, {1.5, 0.5}, 2, 1, 60);
    const double step = 0.05;
    const GridSpec g = square(-9.0, 9.0, 361);
    Field w = wigner(cat, g);
    const int radius = 120;  // 6 length units
    double worst = 0.0;
    for (int a = -20; a <= 20; ++a)
        for (int b = -20; b <= 20; ++b) {
            const int ci = 180 + a, cj = 180 + b;
            double s = 0.0;
            for (int di = -radius; di <= radius; ++di)
                for (int dj = -radius; dj <= radius; ++dj) {
                    double r2 = (di * di + dj * dj) * step * step;
                    s += w.values(ci + di, cj + dj) * std::exp(-r2);
                }
            s *= step * step / kPi;
            worst = std::max(worst, std::abs(s - husimi_at(cat.amplitudes, g.q(ci), g.p(cj))));
        }
    CHECK(worst <= 1e-3);
}

TEST_CASE("grid checks") {
    NcsState far = ncs_amplitudes(Identity{}, {5.0, 0.0}, 120);
    try {
        integrate(wigner(far, square(-3.0, 3.0, 31)));
        FAIL("expected SupportExceedsGrid");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SupportExceedsGrid);
    }
    CHECK(std::isfinite(integrate_unchecked(wigner(far, square(-3.0, 3.0, 31)))));

    GridSpec bad = square(1.0, -1.0, 10);
    CHECK_THROWS_AS(validate(bad), Error);
    GridSpec tiny = square(-1.0, 1.0, 1);
    CHECK_THROWS_AS(validate(tiny), Error);
}

TEST_CASE("results do not depend on the worker count") {
    NcsState s = ncs_circle(TrappedIon{3, 0.1089}, {3.5, 0.0}, 3, 1, 200);
    GridSpec g = square(-7.0, 7.0, 67);
    g.np = 53;
    Field a = wigner(s, g, 1), b = wigner(s, g, 3), c = wigner(s, g, 8);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.values - c.values).cwiseAbs().maxCoeff() == 0.0);
    Field qa = husimi(s, g, 1), qb = husimi(s, g, 5);
    CHECK((qa.values - qb.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.values.rows() == 67);
    CHECK(a.values.cols() == 53);
}
