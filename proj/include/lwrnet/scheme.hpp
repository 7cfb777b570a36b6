#pragma once

// First-order finite-volume scheme on the three roads of the merge: Rusanov
// fluxes with a single dissipation speed lambda in the interior, Riemann-solver
// fluxes at the junction faces, zero inflow at the far end of the incoming
// roads and a Neumann ghost cell at the far end of the outgoing road.

#include "lwrnet/errors.hpp"
#include "lwrnet/fundamentals.hpp"
#include "lwrnet/junction.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace lwrnet {

enum class Orientation { incoming, outgoing };

enum class JunctionSolver { relaxation, classical };

constexpr std::string_view to_string(JunctionSolver s) noexcept {
    return s == JunctionSolver::relaxation ? "relaxation" : "classical";
}

struct RoadGrid {
    int road_id = 1;
    FundamentalDiagram diagram;
    double a = -1.0;
    double b = 0.0;
    Orientation orientation = Orientation::incoming;
    std::vector<double> cells;

    static RoadGrid uniform(int id, const FundamentalDiagram& d, Orientation o, std::size_t m,
                            double rho) {
        RoadGrid g;
        g.road_id = id;
        g.diagram = d;
        g.orientation = o;
        if (o == Orientation::incoming) {
            g.a = -1.0;
            g.b = 0.0;
        } else {
            g.a = 0.0;
            g.b = 1.0;
        }
        g.cells.assign(m, rho);
        return g;
    }

    std::size_t size() const noexcept { return cells.size(); }
    double dx() const noexcept { return (b - a) / static_cast<double>(cells.size()); }
    double cell_center(std::size_t j) const noexcept {
        return a + (static_cast<double>(j) + 0.5) * dx();
    }
    /// The cell adjacent to the junction.
    double trace() const noexcept {
        return orientation == Orientation::incoming ? cells.back() : cells.front();
    }
};

struct SchemeParams {
    double lambda = 1.0;
    double cfl = 0.9;

    /// Throws ConfigError unless 0 < cfl <= 1 and lambda dominates every
    /// characteristic speed (max |f'| = v_max for Greenshields).
    void validate(const MergeDiagrams& diagrams) const {
        if (!(cfl > 0.0 && cfl <= 1.0)) {
            throw ConfigError("CFL number must lie in (0, 1]");
        }
        if (!(lambda > 0.0) || !std::isfinite(lambda)) {
            throw ConfigError("lambda must be positive and finite");
        }
        for (const auto& d : diagrams) {
            if (lambda < d.v_max) {
                throw ConfigError("lambda = " + std::to_string(lambda)
                                  + " violates the subcharacteristic condition (v_max = "
                                  + std::to_string(d.v_max) + ")");
            }
        }
    }
};

inline double time_step(const SchemeParams& params, double dx) {
    return params.cfl * dx / params.lambda;
}

inline double interior_flux(const FundamentalDiagram& d, double rho_left, double rho_right,
                            double lambda) {
    return 0.5 * (flux(d, rho_right) + flux(d, rho_left)) - 0.5 * lambda * (rho_right - rho_left);
}

/// Conservative update of one road given its two boundary face fluxes.
inline RoadGrid update_road(const RoadGrid& grid, double left_face, double right_face,
                            double lambda, double dt) {
    const std::size_t m = grid.size();
    const double ratio = dt / grid.dx();
    const auto& rho = grid.cells;

    std::vector<double> faces(m + 1);
    faces.front() = left_face;
    faces.back() = right_face;
    for (std::size_t j = 1; j < m; ++j) {
        faces[j] = interior_flux(grid.diagram, rho[j - 1], rho[j], lambda);
    }

    RoadGrid next = grid;
    for (std::size_t j = 0; j < m; ++j) {
        next.cells[j] = rho[j] - ratio * (faces[j + 1] - faces[j]);
    }
    return next;
}

/// Flux through a homogeneous Neumann boundary (ghost cell copies its neighbour).
inline double neumann_flux(const RoadGrid& grid, bool right_end) {
    const double rho = right_end ? grid.cells.back() : grid.cells.front();
    return flux(grid.diagram, rho);
}

inline MergeDiagrams diagrams_of(const std::array<RoadGrid, 3>& grids) {
    return {grids[0].diagram, grids[1].diagram, grids[2].diagram};
}

/// Coupling fluxes from the selected solver at the current traces; the
/// relaxation solver is fed equilibrium flux variables v = f(rho).
inline CouplingResult solve_junction(JunctionSolver solver, const std::array<RoadGrid, 3>& grids,
                                     double lambda) {
    const MergeDiagrams diagrams = diagrams_of(grids);
    const std::array<double, 3> rho{grids[0].trace(), grids[1].trace(), grids[2].trace()};
    if (solver == JunctionSolver::classical) {
        return solve_classical_rs(rho, diagrams);
    }
    JunctionTrace trace;
    trace.rho = rho;
    for (std::size_t k = 0; k < 3; ++k) {
        trace.v[k] = flux(diagrams[k], rho[k]);
    }
    return solve_relaxation_rs(trace, diagrams, lambda);
}

struct StepOutcome {
    std::array<RoadGrid, 3> grids;
    CouplingResult coupling;
    /// Flux leaving road 3 through its far end.
    double outflow = 0.0;
};

/// One explicit step of the network. Roads 1 and 2 must be incoming, road 3
/// outgoing.
inline StepOutcome step_network(const std::array<RoadGrid, 3>& grids, const SchemeParams& params,
                                JunctionSolver solver, double dt) {
    if (grids[0].orientation != Orientation::incoming || grids[1].orientation != Orientation::incoming
        || grids[2].orientation != Orientation::outgoing) {
        throw ConfigError("merge network expects roads 1, 2 incoming and road 3 outgoing");
    }
    for (const auto& g : grids) {
        if (g.size() < 2) {
            throw ConfigError("every road needs at least two cells");
        }
        if (!(dt > 0.0) || dt * params.lambda > g.dx() * (1.0 + 1e-12)) {
            throw ConfigError("time step violates the CFL condition");
        }
    }

    StepOutcome out;
    out.coupling = solve_junction(solver, grids, params.lambda);
    const auto& fc = out.coupling.flux;

    out.grids[0] = update_road(grids[0], 0.0, fc[0], params.lambda, dt);
    out.grids[1] = update_road(grids[1], 0.0, fc[1], params.lambda, dt);
    out.outflow = neumann_flux(grids[2], true);
    out.grids[2] = update_road(grids[2], fc[2], out.outflow, params.lambda, dt);
    return out;
}

} // namespace lwrnet
