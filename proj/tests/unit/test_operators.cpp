#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ncs/errors.hpp"
#include "ncs/states.hpp"
#include "oracles.hpp"

using namespace ncs;
using doctest::Approx;

namespace {

Eigen::MatrixXcd D(const DeformationSpec& spec, cplx alpha, std::size_t n_max) {
    OperatorOptions opt;
    opt.alpha = alpha;
    return operator_matrix(OperatorKind::Displacement, spec, n_max, opt).entries;
}

double block_max(const Eigen::MatrixXcd& m, std::size_t b) {
    return m.block(0, 0, static_cast<Eigen::Index>(b + 1), static_cast<Eigen::Index>(b + 1)).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("ladder structure") {
    const DeformationSpec spec = TrappedIon{1, 0.1};
    const std::size_t n_max = 30;
    std::vector<double> h = oracle::table([](std::size_t n) { return oracle::h_trapped(n, 1, 0.1); }, 1, n_max);
    auto A = operator_matrix(OperatorKind::Annihilation, spec, n_max);
    auto Ad = operator_matrix(OperatorKind::Creation, spec, n_max);
    auto Ah = operator_matrix(OperatorKind::DeformedCreation, spec, n_max);
    auto dh = operator_matrix(OperatorKind::DeformationOp, spec, n_max);
    CHECK(A.dim == n_max + 1);
    CHECK(A.entries.rows() == static_cast<Eigen::Index>(n_max + 1));
    for (std::size_t m = 0; m <= n_max; ++m)
        for (std::size_t n = 0; n <= n_max; ++n) {
            cplx a = A.entries(m, n);
            if (m + 1 == n) CHECK(std::abs(a - std::sqrt(static_cast<double>(n)) * h[n]) <= 1e-12);
            else CHECK(a == cplx(0.0, 0.0));
            if (m != n) CHECK(dh.entries(m, n) == cplx(0.0, 0.0));
        }
    CHECK((Ad.entries - A.entries.adjoint()).norm() == 0.0);

    // A_h^dagger A = n on every Fock state.
    Eigen::MatrixXcd N = Ah.entries * A.entries;
    for (std::size_t n = 0; n <= n_max; ++n) CHECK(std::abs(N(n, n) - static_cast<double>(n)) <= 1e-12);
    CHECK((N - Eigen::MatrixXcd(N.diagonal().asDiagonal())).norm() <= 1e-12);

    double prod = 1.0;
    for (std::size_t n = 1; n <= 10; ++n) {
        prod *= h[n];
        CHECK(dh.entries(n, n).real() == Approx(1.0 / prod).epsilon(1e-12));
    }
}

TEST_CASE("missing parameters") {
    auto kind = [](OperatorKind k) {
        try {
            operator_matrix(k, TrappedIon{1, 0.1}, 10);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::InvalidConfig;
    };
    CHECK(kind(OperatorKind::Displacement) == ErrorKind::MissingParameter);
    CHECK(kind(OperatorKind::Bichromatic) == ErrorKind::MissingParameter);
}

TEST_CASE("identity displacement is the ordinary unitary one") {
    const std::size_t n_max = 80, block = 20;
    const cplx alpha(0.7, -0.4);
    Eigen::MatrixXcd d = D(Identity{}, alpha, n_max);
    Eigen::MatrixXcd e = d.adjoint() * d - Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1);
    CHECK(block_max(e, block) <= 1e-10);
    for (std::size_t m = 0; m <= block; ++m)
        for (std::size_t n = 0; n <= block; ++n) CHECK(std::abs(d(m, n) - oracle::displacement_element(m, n, alpha)) <= 1e-12);
}

TEST_CASE("deformed displacement elements") {
    // The factored form gives <m|D_h|n> = ([h(n)]!/[h(m)]!) <m|D|n>.
    const double eta2 = 0.02;
    const std::size_t n_max = 120, block = 20;
    std::vector<double> h = oracle::table([&](std::size_t n) { return oracle::h_trapped(n, 1, eta2); }, 1, n_max);
    std::vector<double> F(n_max + 1, 1.0);
    for (std::size_t n = 1; n <= n_max; ++n) F[n] = F[n - 1] * h[n];
    const cplx alpha(0.6, 0.3);
    Eigen::MatrixXcd dh = D(TrappedIon{1, eta2}, alpha, n_max);
    double worst = 0.0;
    for (std::size_t m = 0; m <= block; ++m)
        for (std::size_t n = 0; n <= block; ++n)
            worst = std::max(worst, std::abs(dh(m, n) - F[n] / F[m] * oracle::displacement_element(m, n, alpha)));
    CHECK(worst <= 1e-10);
    // Shared diagonal.
    for (std::size_t n = 0; n <= block; ++n) CHECK(std::abs(dh(n, n) - oracle::displacement_element(n, n, alpha)) <= 1e-12);
}

TEST_CASE("adjoint and composition laws") {
    const DeformationSpec spec = TrappedIon{1, 0.02};
    const std::size_t n_max = 120, block = 20;
    const cplx alpha(0.6, 0.3), beta(-0.4, 0.5);

    Eigen::MatrixXcd adj = D(spec, alpha, n_max).adjoint() - D(reciprocal(spec), -alpha, n_max);
    CHECK(block_max(adj, block) <= 1e-8);

    Eigen::MatrixXcd lhs = D(spec, beta, n_max) * D(spec, alpha, n_max);
    cplx phase = std::exp(0.5 * (beta * std::conj(alpha) - std::conj(beta) * alpha));
    CHECK(block_max(lhs - phase * D(spec, beta + alpha, n_max), block) <= 1e-8);

    // D_h is not unitary once h is nontrivial.
    Eigen::MatrixXcd d = D(spec, alpha, n_max);
    Eigen::MatrixXcd e = d.adjoint() * d - Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1);
    CHECK(block_max(e, block) > 1e-4);
}

TEST_CASE("displaced Fock states") {
    const DeformationSpec spec = TrappedIon{1, 0.1};
    const std::size_t n_max = 100;
    const cplx alpha(0.8, -0.2);

    // m = 0: e^{-|alpha|^2/2} alpha^n / (sqrt(n!) [h(n)]!)
    std::vector<cplx> phi0 = displaced_fock(spec, alpha, 0, Side::Right, n_max);
    std::vector<double> h = oracle::table([](std::size_t n) { return oracle::h_trapped(n, 1, 0.1); }, 1, n_max);
    cplx t = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n <= 40; ++n) {
        if (n > 0) t *= alpha / (std::sqrt(static_cast<double>(n)) * h[n]);
        CHECK(std::abs(phi0[n] - t) <= 1e-13);
    }

    Eigen::MatrixXcd A = operator_matrix(OperatorKind::Annihilation, spec, n_max).entries;
    Eigen::MatrixXcd Ah = operator_matrix(OperatorKind::DeformedCreation, spec, n_max).entries;
    Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n_max + 1, n_max + 1);
    Eigen::MatrixXcd op = (Ah - std::conj(alpha) * I) * (A - alpha * I);
    for (std::size_t m = 0; m <= 3; ++m) {
        std::vector<cplx> f = displaced_fock(spec, alpha, m, Side::Right, n_max);
        Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(f.data(), f.size());
        CHECK((op * v - static_cast<double>(m) * v).norm() <= 1e-7);
    }

    for (std::size_t m = 0; m <= 5; ++m) {
        std::vector<cplx> left = displaced_fock(spec, alpha, m, Side::Left, n_max);
        for (std::size_t n = 0; n <= 5; ++n) {
            std::vector<cplx> right = displaced_fock(spec, alpha, n, Side::Right, n_max);
            cplx s = 0.0;
            for (std::size_t k = 0; k <= n_max; ++k) s += left[k] * right[k];
            if (m == n) CHECK(std::abs(s - 1.0) <= 1e-8);
            else CHECK(std::abs(s) <= 1e-8);
        }
    }
    CHECK_THROWS_AS(displaced_fock(spec, alpha, 101, Side::Right, n_max), Error);
}

TEST_CASE("bichromatic operator entries") {
    const double eta2 = 0.1;
    OperatorOptions opt;
    opt.bichromatic = BichromaticParams{2, cplx(-20.0, 0.0)};
    Eigen::MatrixXcd Ab = operator_matrix(OperatorKind::Bichromatic, TrappedIon{2, eta2}, 10, opt).entries;
    for (std::size_t n = 0; n <= 10; ++n) {
        double f0 = static_cast<double>(oracle::laguerre_sum(n, 0, eta2));
        CHECK(std::abs(Ab(n, n) - cplx(20.0 * f0, 0.0)) <= 1e-12);
        if (n >= 2) {
            // f_2(n-2) sqrt(n(n-1)) with f_k(n) = n! L^k_n / (n+k)!
            double f2 = static_cast<double>(oracle::laguerre_sum(n - 2, 2, eta2)) * 2.0 / (n * (n - 1.0));
            CHECK(std::abs(Ab(n - 2, n) - f2 * std::sqrt(n * (n - 1.0))) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(operator_matrix(OperatorKind::Bichromatic, Identity{}, 10, opt), Error);
}
