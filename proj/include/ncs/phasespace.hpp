#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ncs/states.hpp"

namespace ncs {

struct GridSpec {
    double q_min = -8.0, q_max = 8.0;
    double p_min = -8.0, p_max = 8.0;
    std::size_t nq = 257, np = 257;

    double q(std::size_t i) const { return q_min + (q_max - q_min) * static_cast<double>(i) / static_cast<double>(nq - 1); }
    double p(std::size_t j) const { return p_min + (p_max - p_min) * static_cast<double>(j) / static_cast<double>(np - 1); }
};

void validate(const GridSpec& grid);

enum class FieldKind { Wigner, Husimi };

struct Field {
    GridSpec grid;
    Eigen::MatrixXd values;  // nq x np, values(i, j) at (q_i, p_j)
    FieldKind kind = FieldKind::Wigner;
};

// W(q,p) with plane integral 1; vacuum gives exp(-(q^2+p^2))/pi.
Field wigner(const NcsState& state, const GridSpec& grid, unsigned workers = 0);
Field wigner(const std::vector<cplx>& amplitudes, const GridSpec& grid, unsigned workers = 0);
double wigner_at(const std::vector<cplx>& amplitudes, double q, double p);

// Q(q,p) = |<w|psi>|^2 / (2 pi), w = (q + i p)/sqrt(2); plane integral 1.
Field husimi(const NcsState& state, const GridSpec& grid, unsigned workers = 0);
Field husimi(const std::vector<cplx>& amplitudes, const GridSpec& grid, unsigned workers = 0);
double husimi_at(const std::vector<cplx>& amplitudes, double q, double p);

inline constexpr double kBoundaryTolerance = 1e-10;

// Trapezoidal plane integral. Throws SupportExceedsGrid when the boundary
// carries more than kBoundaryTolerance of the peak magnitude.
double integrate(const Field& field);
double integrate_unchecked(const Field& field);

}  // namespace ncs
