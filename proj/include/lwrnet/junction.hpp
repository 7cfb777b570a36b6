#pragma once

// Nodal Riemann solvers for a merging 2-to-1 junction (roads 1, 2 in; road 3 out).
//
// The relaxation solver connects trace and coupling data through the linear
// characteristics of the Jin-Xin system,
//
//   incoming k = 1, 2:  rho_R = rho_0 - s_k,   v_R = v_0 + lambda s_k
//   outgoing:           rho_L = rho_0 + s_3,   v_L = v_0 + lambda s_3
//
// and fixes the three wave strengths from Kirchhoff for rho-flux and for v, plus
// influx-ratio preservation s_1 : s_2 = r_1 : r_2. Eliminating s_1, s_2 leaves a
// quadratic in s = s_3.
//
// The classical solver maps trace densities straight to coupling fluxes using
// demand/supply and flow maximization, splitting a congested supply by the
// influx ratios.

#include "lwrnet/errors.hpp"
#include "lwrnet/fundamentals.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string_view>

namespace lwrnet {

/// Diagrams of road 1, road 2 (incoming) and road 3 (outgoing).
using MergeDiagrams = std::array<FundamentalDiagram, 3>;

/// Below this total influx the influx ratios are undefined.
inline constexpr double influx_epsilon = 1e-14;

struct JunctionTrace {
    std::array<double, 3> rho{};
    /// Flux variable per road; equals flux(rho) in the relaxation limit.
    std::array<double, 3> v{};
};

struct WaveStrengths {
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double sigma3 = 0.0;
};

struct InfluxRatios {
    double r1 = 0.5;
    double r2 = 0.5;
    bool degenerate = false;
};

/// Coefficients of A s^2 + B s + C = 0, the Kirchhoff rho-flux condition
/// after eliminating the incoming wave strengths.
struct QuadraticSetup {
    double G0 = 0.0; // f1 + f2 - f3 at the trace densities
    double G1 = 0.0; // v1 + v2 - v3
    double h = 0.0;  // G1 / lambda
    double r1 = 0.5;
    double r2 = 0.5;
    bool degenerate_ratio = false;
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double discriminant = 0.0;

    double residual(double sigma) const noexcept { return (A * sigma + B) * sigma + C; }
};

enum class Branch {
    free_flow,
    congestion,
    clipped_1,
    clipped_2,
    quadratic,
    fallback_vertex,
    fallback_linear,
    degenerate,
    degenerate_ratio,
};

inline constexpr std::size_t branch_count = 9;

constexpr std::string_view to_string(Branch b) noexcept {
    switch (b) {
    case Branch::free_flow: return "free-flow";
    case Branch::congestion: return "congestion";
    case Branch::clipped_1: return "clipped-1";
    case Branch::clipped_2: return "clipped-2";
    case Branch::quadratic: return "quadratic";
    case Branch::fallback_vertex: return "fallback-vertex";
    case Branch::fallback_linear: return "fallback-linear";
    case Branch::degenerate: return "degenerate";
    case Branch::degenerate_ratio: return "degenerate-ratio";
    }
    return "unknown";
}

constexpr bool is_fallback(Branch b) noexcept {
    return b == Branch::fallback_vertex || b == Branch::fallback_linear || b == Branch::degenerate;
}

struct CouplingDiagnostics {
    Branch branch = Branch::quadratic;
    bool degenerate_ratio = false;
    /// Relaxation solver only.
    double discriminant = std::numeric_limits<double>::quiet_NaN();
    std::optional<WaveStrengths> sigma;
    /// f1(rho_R^1) + f2(rho_R^2) - f3(rho_L^3); zero for exact roots and for the
    /// classical solver.
    double kirchhoff_residual = 0.0;
};

struct CouplingResult {
    /// Coupling densities rho_R^1, rho_R^2, rho_L^3. The classical solver maps to
    /// fluxes only and leaves the trace densities here.
    std::array<double, 3> rho{};
    /// Coupling fluxes at the junction faces (v_R / v_L, or f_R / f_L).
    std::array<double, 3> flux{};
    CouplingDiagnostics diagnostics;
};

/// Share of each incoming road in the total influx. Negative flux variables
/// count as zero; a vanishing total yields (1/2, 1/2) with the degenerate flag.
inline InfluxRatios influx_ratios(double v1, double v2) noexcept {
    const double a = std::max(v1, 0.0);
    const double b = std::max(v2, 0.0);
    const double total = a + b;
    if (total > influx_epsilon) {
        return {a / total, b / total, false};
    }
    return {0.5, 0.5, true};
}

inline QuadraticSetup quadratic_setup(const JunctionTrace& trace, const MergeDiagrams& diagrams,
                                      double lambda) {
    if (!(lambda > 0.0)) {
        throw ConfigError("relaxation speed lambda must be positive");
    }
    const auto& [d1, d2, d3] = diagrams;
    const auto& rho = trace.rho;
    const auto& v = trace.v;

    QuadraticSetup q;
    q.G0 = flux(d1, rho[0]) + flux(d2, rho[1]) - flux(d3, rho[2]);
    q.G1 = v[0] + v[1] - v[2];
    q.h = q.G1 / lambda;

    const InfluxRatios ratios = influx_ratios(v[0], v[1]);
    q.r1 = ratios.r1;
    q.r2 = ratios.r2;
    q.degenerate_ratio = ratios.degenerate;

    // Greenshields increments: incoming d_k(s) = -s p_k - s^2 c_k,
    // outgoing d_3(s) = s p_3 - s^2 c_3, expanded at s_k = r_k (s - h).
    const double p1 = flux_derivative(d1, rho[0]);
    const double p2 = flux_derivative(d2, rho[1]);
    const double p3 = flux_derivative(d3, rho[2]);
    const double curvature = q.r1 * q.r1 * d1.slope() + q.r2 * q.r2 * d2.slope();
    const double mixed_speed = q.r1 * p1 + q.r2 * p2;

    q.A = d3.slope() - curvature;
    q.B = 2.0 * q.h * curvature - mixed_speed - p3;
    q.C = q.G0 + q.h * mixed_speed - q.h * q.h * curvature;
    q.discriminant = q.B * q.B - 4.0 * q.A * q.C;
    return q;
}

enum class LemmaCase { none, direct, converse };

struct LemmaReport {
    bool bound1 = false;          // lemc1
    bool bound2 = false;          // lemc2
    bool bound1_converse = false;
    bool bound2_converse = false;
    LemmaCase applies = LemmaCase::none;

    bool guarantees_real_root() const noexcept { return applies != LemmaCase::none; }
};

/// Sufficient conditions for a real root of the junction quadratic, evaluated
/// from their closed forms in the trace data. Diagnostic only.
inline LemmaReport lemma1_check(const QuadraticSetup& setup, const JunctionTrace& trace,
                                const MergeDiagrams& diagrams, double lambda) {
    const auto& [d1, d2, d3] = diagrams;
    const double r1 = setup.r1;
    const double r2 = setup.r2;
    const double g1_over_lambda = setup.G1 / lambda;

    const double lhs1 = r1 * r1 * g1_over_lambda * g1_over_lambda * d1.slope()
                      + r2 * r2 * g1_over_lambda * g1_over_lambda * d2.slope();
    const double rhs1 = setup.G0
                      + g1_over_lambda * (r1 * flux_derivative(d1, trace.rho[0])
                                          + r2 * flux_derivative(d2, trace.rho[1]));
    const double lhs2 = d3.slope();
    const double rhs2 = d1.slope() * r1 * r1 + d2.slope() * r2 * r2;

    LemmaReport report;
    report.bound1 = lhs1 <= rhs1;
    report.bound2 = lhs2 <= rhs2;
    report.bound1_converse = lhs1 >= rhs1;
    report.bound2_converse = lhs2 >= rhs2;
    if (report.bound1 && report.bound2) {
        report.applies = LemmaCase::direct;
    } else if (report.bound1_converse && report.bound2_converse) {
        report.applies = LemmaCase::converse;
    }
    return report;
}

namespace detail {

// Flux rounding scales with v_max * rho (the factor 1 - rho/rho_max cancels),
// so that, not |f|, sets the tolerance on G0.
inline bool is_balanced(const JunctionTrace& trace, const MergeDiagrams& diagrams,
                        const QuadraticSetup& setup) {
    constexpr double tol = 64.0 * std::numeric_limits<double>::epsilon();
    double flux_scale = 0.0;
    double v_scale = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        flux_scale += diagrams[k].v_max * std::abs(trace.rho[k]);
        v_scale += std::abs(trace.v[k]);
    }
    return std::abs(setup.G0) <= tol * flux_scale && std::abs(setup.G1) <= tol * v_scale;
}

inline double distance_from_trace(const QuadraticSetup& q, double sigma) noexcept {
    const double shifted = sigma - q.h;
    return (q.r1 * q.r1 + q.r2 * q.r2) * shifted * shifted + sigma * sigma;
}

} // namespace detail

/// Relaxation-based Riemann solver at the merge.
///
/// Real roots of the junction quadratic are ranked by the squared distance of
/// the coupling data from the trace, sum_k s_k^2 (ties go to the smaller |s|).
/// Without a real root the vertex -B/2A minimizes the Kirchhoff residual; the
/// v-Kirchhoff condition, the linear relations and the influx ratios stay
/// exact in every branch.
inline CouplingResult solve_relaxation_rs(const JunctionTrace& trace, const MergeDiagrams& diagrams,
                                          double lambda) {
    for (std::size_t k = 0; k < 3; ++k) {
        if (!std::isfinite(trace.rho[k]) || !std::isfinite(trace.v[k])) {
            throw InputError("junction trace contains a non-finite value");
        }
    }
    const QuadraticSetup q = quadratic_setup(trace, diagrams, lambda);

    double sigma = 0.0;
    Branch branch = Branch::quadratic;
    if (detail::is_balanced(trace, diagrams, q)) {
        sigma = 0.0;
    } else if (q.A != 0.0 && q.discriminant >= 0.0) {
        const double root = std::sqrt(q.discriminant);
        const double half = -0.5 * (q.B + std::copysign(root, q.B));
        double first = 0.0;
        double second = 0.0;
        if (half != 0.0) {
            first = half / q.A;
            second = q.C / half;
        }
        const double j1 = detail::distance_from_trace(q, first);
        const double j2 = detail::distance_from_trace(q, second);
        if (j1 < j2 || (j1 == j2 && std::abs(first) <= std::abs(second))) {
            sigma = first;
        } else {
            sigma = second;
        }
    } else if (q.A == 0.0 && q.B != 0.0) {
        sigma = -q.C / q.B;
        branch = Branch::fallback_linear;
    } else if (q.A != 0.0) {
        sigma = -q.B / (2.0 * q.A);
        branch = Branch::fallback_vertex;
    } else {
        sigma = q.h;
        branch = Branch::degenerate;
    }

    const WaveStrengths s{q.r1 * (sigma - q.h), q.r2 * (sigma - q.h), sigma};

    CouplingResult out;
    out.rho = {trace.rho[0] - s.sigma1, trace.rho[1] - s.sigma2, trace.rho[2] + s.sigma3};
    out.flux = {trace.v[0] + lambda * s.sigma1, trace.v[1] + lambda * s.sigma2,
                trace.v[2] + lambda * s.sigma3};
    out.diagnostics.branch = branch;
    out.diagnostics.degenerate_ratio = q.degenerate_ratio;
    out.diagnostics.discriminant = q.discriminant;
    out.diagnostics.sigma = s;
    out.diagnostics.kirchhoff_residual = q.residual(sigma);
    return out;
}

/// Demand/supply Riemann solver with flow maximization first and influx-ratio
/// splitting of a congested supply second.
inline CouplingResult solve_classical_rs(const std::array<double, 3>& rho, const MergeDiagrams& diagrams) {
    const double D1 = demand(diagrams[0], rho[0]);
    const double D2 = demand(diagrams[1], rho[1]);
    const double S3 = supply(diagrams[2], rho[2]);

    CouplingResult out;
    out.rho = rho;
    out.diagnostics.kirchhoff_residual = 0.0;

    if (D1 + D2 <= S3) {
        out.flux = {D1, D2, D1 + D2};
        out.diagnostics.branch = Branch::free_flow;
        return out;
    }

    InfluxRatios ratios = influx_ratios(flux(diagrams[0], rho[0]), flux(diagrams[1], rho[1]));
    Branch branch = Branch::congestion;
    if (ratios.degenerate) {
        // Nothing to preserve: split the supply in proportion to the demands.
        ratios.r1 = D1 / (D1 + D2);
        ratios.r2 = D2 / (D1 + D2);
        branch = Branch::degenerate_ratio;
    }

    double f1 = ratios.r1 * S3;
    double f2 = ratios.r2 * S3;
    if (f1 > D1) {
        f1 = D1;
        f2 = S3 - D1;
        branch = Branch::clipped_1;
    } else if (f2 > D2) {
        f2 = D2;
        f1 = S3 - D2;
        branch = Branch::clipped_2;
    }
    out.flux = {f1, f2, S3};
    out.diagnostics.branch = branch;
    out.diagnostics.degenerate_ratio = ratios.degenerate;
    return out;
}

} // namespace lwrnet
