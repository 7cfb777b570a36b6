#pragma once

// Greenshields fundamental diagram: V(rho) = v_max (1 - rho/rho_max).

#include "lwrnet/errors.hpp"

#include <cmath>
#include <sstream>

namespace lwrnet {

/// Absolute slack allowed on density bounds before a DomainError is raised.
inline constexpr double density_slack = 1e-12;

struct FundamentalDiagram {
    double v_max = 1.0;
    double rho_max = 1.0;

    FundamentalDiagram() = default;
    FundamentalDiagram(double vmax, double rhomax) : v_max(vmax), rho_max(rhomax) {
        if (!(vmax > 0.0) || !(rhomax > 0.0) || !std::isfinite(vmax) || !std::isfinite(rhomax)) {
            throw ConfigError("fundamental diagram needs v_max > 0 and rho_max > 0");
        }
    }

    /// Density of maximal flux (the demand/supply threshold).
    double critical_density() const noexcept { return 0.5 * rho_max; }
    /// Maximal flux, attained at the critical density.
    double capacity() const noexcept { return 0.25 * v_max * rho_max; }
    /// Curvature coefficient v_max/rho_max; flux(rho) = v_max rho - slope() rho^2.
    double slope() const noexcept { return v_max / rho_max; }

    bool operator==(const FundamentalDiagram&) const = default;
};

namespace detail {

inline void check_density(const FundamentalDiagram& d, double rho) {
    if (!(rho >= -density_slack && rho <= d.rho_max + density_slack)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "density " << rho << " outside [0, " << d.rho_max << "]";
        throw DomainError(msg.str());
    }
}

} // namespace detail

inline double velocity(const FundamentalDiagram& d, double rho) {
    detail::check_density(d, rho);
    return d.v_max * (1.0 - rho / d.rho_max);
}

inline double flux(const FundamentalDiagram& d, double rho) {
    return rho * velocity(d, rho);
}

/// Flux polynomial evaluated for any real rho, no range check. Used where the
/// algebra of the junction solver leaves the physical range.
inline double flux_unchecked(const FundamentalDiagram& d, double rho) noexcept {
    return rho * d.v_max * (1.0 - rho / d.rho_max);
}

inline double flux_derivative(const FundamentalDiagram& d, double rho) {
    detail::check_density(d, rho);
    return d.v_max * (1.0 - 2.0 * rho / d.rho_max);
}

/// Largest flux the road can send downstream.
inline double demand(const FundamentalDiagram& d, double rho) {
    const double f = flux(d, rho);
    return rho <= d.critical_density() ? f : d.capacity();
}

/// Largest flux the road can take in from upstream.
inline double supply(const FundamentalDiagram& d, double rho) {
    const double f = flux(d, rho);
    return rho <= d.critical_density() ? d.capacity() : f;
}

} // namespace lwrnet
