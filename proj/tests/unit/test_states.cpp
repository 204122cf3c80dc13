#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ncs/errors.hpp"
#include "ncs/states.hpp"
#include "oracles.hpp"

using namespace ncs;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

double norm2(const std::vector<cplx>& c) {
    double s = 0.0;
    for (auto v : c) s += std::norm(v);
    return s;
}

cplx inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
    cplx s = 0.0;
    for (std::size_t n = 0; n < std::min(a.size(), b.size()); ++n) s += std::conj(a[n]) * b[n];
    return s;
}

}  // namespace

TEST_CASE("h-exponential") {
    CHECK(h_exponential(Identity{}, 1.0, 60).value == Approx(std::exp(1.0)).epsilon(1e-14));
    CHECK(h_exponential(Identity{}, -3.0, 80).value == Approx(std::exp(-3.0)).epsilon(1e-10));
    CHECK(h_exponential(TrappedIon{1, 0.1}, 0.0, 50).value == 1.0);

    // Linear approximant: [h(n)]! = gamma^n (a+1)_n, so the sum is 0F2(; a+1, a+1; v / gamma^2).
    for (double eta2 : {0.1, 0.2}) {
        Rational lin = linear_approximant(eta2);
        const double a = lin.a[0], g = lin.gamma;
        for (double v : {0.5, 2.0, 7.0}) {
            double ref = pfq({}, {a + 1.0, a + 1.0}, v / (g * g)).value;
            CHECK(h_exponential(lin, v, 200).value == Approx(ref).epsilon(1e-9));
        }
    }
    // Outside the disk |v| < 1/eta2 the terms grow.
    CHECK_THROWS_AS(h_exponential(TrappedIon{1, 0.1}, 30.0, 20000), Error);
}

TEST_CASE("ncs amplitudes examples") {
    NcsState coh = ncs_amplitudes(Identity{}, {1.0, 0.0}, 60);
    std::vector<cplx> ref = oracle::coherent({1.0, 0.0}, 60);
    CHECK(coh.amplitudes[0].real() == Approx(std::exp(-0.5)).epsilon(1e-14));
    for (std::size_t n = 0; n <= 60; ++n) CHECK(std::abs(coh.amplitudes[n] - ref[n]) <= 1e-14);

    NcsState vac = ncs_amplitudes(TrappedIon{1, 0.1}, {0.0, 0.0}, 10);
    CHECK(std::abs(vac.amplitudes[0] - 1.0) <= 1e-15);
    for (std::size_t n = 1; n <= 10; ++n) CHECK(vac.amplitudes[n] == cplx(0.0, 0.0));

    NcsState s = ncs_amplitudes(TrappedIon{1, 0.1}, {1.0, 0.0}, 40);
    CHECK(std::abs(s.amplitudes[1] / s.amplitudes[0] - 1.0) <= 1e-14);
    CHECK(std::abs(s.amplitudes[2] / s.amplitudes[0] - 1.0 / (std::sqrt(2.0) * 19.0 / 18.0)) <= 1e-14);
}

TEST_CASE("ncs amplitudes match the recurrence oracle") {
    const double eta2 = 0.05;
    const cplx alpha(1.3, -0.8);
    std::vector<double> h = oracle::table([&](std::size_t n) { return oracle::h_trapped(n, 1, eta2); }, 1, 120);
    std::vector<cplx> ref = oracle::ncs_recurrence(h, alpha, 1, 0);
    NcsState s = ncs_amplitudes(TrappedIon{1, eta2}, alpha, 120);
    double worst = 0.0;
    for (std::size_t n = 0; n <= 120; ++n) worst = std::max(worst, std::abs(s.amplitudes[n] - ref[n]));
    CHECK(worst <= 1e-12);
}

TEST_CASE("state invariants") {
    for (DeformationSpec spec : {DeformationSpec{TrappedIon{1, 0.1}}, DeformationSpec{QOscillator{0.2}},
                                 DeformationSpec{TruncatedSeries{SeriesBase::H1, 0.05, 2}}}) {
        for (cplx alpha : {cplx(0.5, 0.0), cplx(1.2, 1.1), cplx(-2.0, 0.3)}) {
            std::size_t n_max = policy_n_max(spec, alpha);
            NcsState s = ncs_amplitudes(spec, alpha, n_max);
            REQUIRE(s.norm_status == NormStatus::Normalized);
            CHECK(std::abs(norm2(s.amplitudes) - 1.0) <= 1e-12);
            CHECK(s.tail_mass_estimate >= 0.0);
            CHECK(s.amplitudes.size() == n_max + 1);

            Eigen::MatrixXcd A = operator_matrix(OperatorKind::Annihilation, spec, n_max).entries;
            Eigen::VectorXcd v = as_vector(s);
            CHECK((A * v - alpha * v).norm() <= 10.0 * s.tail_mass_estimate + 1e-13);
        }
    }
}

TEST_CASE("linear limit") {
    NcsState s = ncs_amplitudes(TrappedIon{1, 1e-6}, {1.0, 0.0}, 60);
    std::vector<cplx> ref = oracle::coherent({1.0, 0.0}, 60);
    double dev = 0.0;
    for (std::size_t n = 0; n <= 30; ++n) dev = std::max(dev, std::abs(s.amplitudes[n] - ref[n]));
    CHECK(dev <= 1e-5);
}

TEST_CASE("divergent status beyond the radius") {
    // |alpha eta| = 1.58 > 1
    NcsState s = ncs_amplitudes(TrappedIon{1, 0.1}, {5.0, 0.0}, 3000);
    CHECK(s.norm_status == NormStatus::DivergentAtAlpha);
}

TEST_CASE("circle support") {
    const DeformationSpec spec = TrappedIon{2, 0.1089};
    for (std::size_t q = 0; q < 2; ++q) {
        NcsState s = ncs_circle(spec, {3.5, 0.0}, 2, q, 200);
        for (std::size_t n = 0; n <= 200; ++n)
            if (n % 2 != q) CHECK(s.amplitudes[n] == cplx(0.0, 0.0));
        CHECK(std::abs(norm2(s.amplitudes) - 1.0) <= 1e-12);
    }
    NcsState s3 = ncs_circle(TrappedIon{3, 0.1089}, {2.0, 1.0}, 3, 2, 150);
    for (std::size_t n = 0; n <= 150; ++n)
        if (n % 3 != 2) CHECK(s3.amplitudes[n] == cplx(0.0, 0.0));

    NcsState s = ncs_circle(spec, {3.5, 0.0}, 2, 0, 240);
    OperatorOptions opt;
    opt.power = 2;
    Eigen::MatrixXcd A2 = operator_matrix(OperatorKind::Annihilation, spec, 240, opt).entries;
    Eigen::VectorXcd v = as_vector(s);
    CHECK((A2 * v - 12.25 * v).norm() <= 1e-8);

    CHECK_THROWS_AS(ncs_circle(spec, {1.0, 0.0}, 2, 2, 50), Error);
}

TEST_CASE("circle decomposition of the even cat") {
    const cplx alpha(1.7, 0.4);
    NcsState cat = ncs_circle(Identity{}, alpha, 2, 0, 80);
    auto parts = circle_decomposition(cat);
    REQUIRE(parts.size() == 2);
    CHECK(std::abs(parts[0].phase - parts[1].phase) <= 1e-14);
    CHECK(std::abs(parts[0].component.alpha - alpha) <= 1e-14);
    CHECK(std::abs(parts[1].component.alpha + alpha) <= 1e-14);

    // Direct even cat: |alpha> + |-alpha>, normalized.
    std::vector<cplx> p = oracle::coherent(alpha, 80), m = oracle::coherent(-alpha, 80), ref(81);
    for (std::size_t n = 0; n <= 80; ++n) ref[n] = p[n] + m[n];
    double s = std::sqrt(norm2(ref));
    for (auto& x : ref) x /= s;
    CHECK(std::abs(std::abs(inner(ref, cat.amplitudes)) - 1.0) <= 1e-12);
}

TEST_CASE("circle recombination") {
    const DeformationSpec spec = TrappedIon{3, 0.1089};
    const cplx alpha(3.5, 0.0);
    for (std::size_t q = 0; q < 3; ++q) {
        NcsState st = ncs_circle(spec, alpha, 3, q, 200);
        std::vector<cplx> rec = recombine(circle_decomposition(st));
        for (std::size_t n = 0; n <= 200; ++n)
            if (n % 3 != q) CHECK(std::abs(rec[n]) <= 1e-12);
        CHECK(std::abs(inner(st.amplitudes, rec)) >= 1.0 - 1e-8);
    }
}

TEST_CASE("alpha from Rabi frequencies") {
    cplx a = alpha_from_rabi({1.0, 1.0, std::sqrt(0.1), 1});
    CHECK(a.real() == Approx(-20.0).epsilon(1e-13));
    CHECK(std::abs(a.imag()) <= 1e-12);
    cplx b = alpha_from_rabi({2.0, 2.0, 1.0, 1});
    CHECK(std::abs(b - cplx(-2.0, 0.0)) <= 1e-14);
    cplx c = alpha_from_rabi({1.0, 1.0, 0.5, 0});
    CHECK(std::abs(c - cplx(0.0, 2.0)) <= 1e-14);
    cplx d = alpha_from_rabi({0.5, 1.0, 0.5, 0});
    CHECK(std::abs(d - cplx(0.0, 1.0)) <= 1e-14);
}

TEST_CASE("dark state") {
    for (std::size_t N : {0u, 1u}) {
        RabiConfig cfg{0.5, 1.0, std::sqrt(0.1), N};
        NcsState s = dark_state(cfg, 0, 150);
        OperatorOptions opt;
        opt.bichromatic = BichromaticParams{N + 1, alpha_from_rabi(cfg)};
        Eigen::MatrixXcd Ab = operator_matrix(OperatorKind::Bichromatic, TrappedIon{N + 1, 0.1}, 150, opt).entries;
        CHECK((Ab * as_vector(s)).norm() <= 1e-8);
        CHECK(s.order == N + 1);
    }
}

TEST_CASE("rho functional") {
    const DeformationSpec spec = TrappedIon{1, 0.05};
    const std::size_t n_max = 60;
    Eigen::MatrixXcd vac = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
    vac(0, 0) = 1.0;
    for (cplx z : {cplx(0.0, 0.0), cplx(0.4, -1.1), cplx(1.5, 0.5)})
        CHECK(std::abs(rho_functional(vac, spec, z) - std::exp(-std::norm(z)) / kPi) <= 1e-14);

    // Diagonal densities do not see the deformation.
    Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(n_max + 1, n_max + 1);
    diag(0, 0) = 0.5;
    diag(3, 3) = 0.3;
    diag(7, 7) = 0.2;
    for (cplx z : {cplx(0.2, 0.3), cplx(-1.0, 1.4)})
        CHECK(std::abs(rho_functional(diag, spec, z) - rho_functional(diag, Identity{}, z)) <= 1e-14);

    // Pure NCS against the closed form with E_h summed directly.
    std::vector<double> h = oracle::table([](std::size_t n) { return oracle::h_trapped(n, 1, 0.05); }, 1, 150);
    auto E = [&](cplx v) {
        cplx s = 0.0, t = 1.0;
        for (std::size_t n = 0; n <= 150; ++n) {
            if (n > 0) t *= v / (static_cast<double>(n) * h[n] * h[n]);
            s += t;
        }
        return s;
    };
    const cplx w(1.1, -0.6);
    Eigen::VectorXcd v = as_vector(ncs_amplitudes(spec, w, 150));
    Eigen::MatrixXcd rho = v * v.adjoint();
    for (cplx z : {cplx(0.5, 0.5), cplx(-2.0, 0.0), cplx(0.9, -1.7)}) {
        cplx closed = E(std::conj(w) * z) / E(std::norm(w)) * std::exp(std::conj(z) * (w - z)) / kPi;
        CHECK(std::abs(rho_functional(rho, spec, z) - closed) <= 1e-8);
    }
}

TEST_CASE("convergence probe") {
    std::vector<cplx> dirs{std::polar(1.0, 0.0), std::polar(1.0, 1.0), std::polar(1.0, 2.5)};
    std::vector<double> radii{0.5, 2.0, 8.0};
    for (const auto& r : convergence_probe(Identity{}, dirs, radii, 20000)) {
        CHECK(std::isinf(r.boundary));
        for (auto c : r.classes) CHECK(c == TrendClass::Summable);
    }

    std::vector<double> fine;
    for (int i = 0; i <= 40; ++i) fine.push_back(0.5 + i * 0.025);
    Custom harmonious{[](std::size_t n) { return 1.0 / std::sqrt(static_cast<double>(n)); }, "harmonious"};
    for (const auto& r : convergence_probe(harmonious, dirs, fine, 20000)) CHECK(r.boundary == Approx(1.0).epsilon(0.05));

    std::vector<double> around;
    for (int i = 0; i <= 40; ++i) around.push_back(3.1623 * (0.5 + i * 0.025));
    for (const auto& r : convergence_probe(TrappedIon{1, 0.1}, dirs, around, 200000))
        CHECK(r.boundary == Approx(1.0 / std::sqrt(0.1)).epsilon(0.05));
}

TEST_CASE("late trend slope") {
    std::vector<double> y(100);
    for (std::size_t i = 0; i < 100; ++i) y[i] = 3.0 - 0.25 * i;
    CHECK(late_trend_slope(y) == Approx(-0.25).epsilon(1e-12));
    y[99] = std::nan("");
    CHECK(late_trend_slope(y) == Approx(-0.25).epsilon(1e-12));
}
