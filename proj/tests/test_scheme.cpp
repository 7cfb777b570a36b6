#include <catch2/catch_amalgamated.hpp>

#include "lwrnet/scheme.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>

using namespace lwrnet;
using Catch::Approx;

namespace {

const FundamentalDiagram unit_road{1.0, 1.0};
const FundamentalDiagram wide_road{1.0, 1.2};

std::array<RoadGrid, 3> uniform_network(std::size_t m, std::array<double, 3> rho) {
    return {RoadGrid::uniform(1, unit_road, Orientation::incoming, m, rho[0]),
            RoadGrid::uniform(2, unit_road, Orientation::incoming, m, rho[1]),
            RoadGrid::uniform(3, wide_road, Orientation::outgoing, m, rho[2])};
}

double mass(const std::array<RoadGrid, 3>& grids) {
    double total = 0.0;
    for (const auto& g : grids) {
        for (double rho : g.cells) {
            total += rho * g.dx();
        }
    }
    return total;
}

/// Single road with Neumann ends, smooth data, advanced to time T.
std::vector<double> smooth_run(std::size_t m, double T) {
    RoadGrid g = RoadGrid::uniform(1, unit_road, Orientation::outgoing, m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        g.cells[j] = 0.3 + 0.1 * std::sin(std::numbers::pi * g.cell_center(j));
    }
    const SchemeParams params{1.0, 0.9};
    double t = 0.0;
    while (t < T) {
        const double dt = std::min(time_step(params, g.dx()), T - t);
        g = update_road(g, neumann_flux(g, false), neumann_flux(g, true), params.lambda, dt);
        t += dt;
    }
    return g.cells;
}

double l1_to_coarse(const std::vector<double>& fine, const std::vector<double>& coarse) {
    const std::size_t ratio = fine.size() / coarse.size();
    double err = 0.0;
    for (std::size_t j = 0; j < coarse.size(); ++j) {
        double avg = 0.0;
        for (std::size_t i = 0; i < ratio; ++i) {
            avg += fine[j * ratio + i];
        }
        err += std::abs(avg / ratio - coarse[j]);
    }
    return err / coarse.size();
}

} // namespace

TEST_CASE("time step from the CFL rule", "[scheme]") {
    CHECK(time_step({1.0, 0.9}, 0.001) == Approx(0.0009).epsilon(1e-15));
    CHECK(time_step({2.0, 1.0}, 0.01) == Approx(0.005).epsilon(1e-15));
}

TEST_CASE("interior Rusanov flux", "[scheme]") {
    CHECK(interior_flux(unit_road, 0.15, 0.2, 1.0) == Approx(0.11875).margin(1e-15));
    CHECK(interior_flux(unit_road, 0.3, 0.3, 1.0) == flux(unit_road, 0.3));
    CHECK(interior_flux(wide_road, 0.6, 0.6, 1.0) == flux(wide_road, 0.6));
    CHECK_THROWS_AS(interior_flux(unit_road, 0.3, 1.5, 1.0), DomainError);
}

TEST_CASE("road grid geometry", "[scheme]") {
    const auto g = RoadGrid::uniform(1, unit_road, Orientation::incoming, 4, 0.1);
    CHECK(g.dx() == 0.25);
    CHECK(g.cell_center(0) == -0.875);
    CHECK(g.cell_center(1) == -0.625);
    CHECK(g.cell_center(2) == -0.375);
    CHECK(g.cell_center(3) == -0.125);
    CHECK(std::abs(g.dx() * g.size() - (g.b - g.a)) <= 1e-12);
}

TEST_CASE("scheme parameters validation", "[scheme][errors]") {
    const MergeDiagrams d{unit_road, unit_road, wide_road};
    CHECK_NOTHROW(SchemeParams{1.0, 0.9}.validate(d));
    CHECK_THROWS_AS((SchemeParams{0.9, 0.9}.validate(d)), ConfigError);
    CHECK_THROWS_AS((SchemeParams{1.0, 1.5}.validate(d)), ConfigError);
    CHECK_THROWS_AS((SchemeParams{1.0, 0.0}.validate(d)), ConfigError);
}

TEST_CASE("step on balanced uniform data only drains the upstream ends", "[scheme]") {
    constexpr double rho3 = 0.220526680779794;
    const auto grids = uniform_network(50, {0.1, 0.1, rho3});
    const SchemeParams params{1.0, 0.9};
    const double dt = time_step(params, grids[0].dx());

    for (auto solver : {JunctionSolver::relaxation, JunctionSolver::classical}) {
        const auto out = step_network(grids, params, solver, dt);
        for (std::size_t k = 0; k < 2; ++k) {
            CHECK(out.grids[k].cells[0] < 0.1);
            for (std::size_t j = 1; j < 50; ++j) {
                CHECK(out.grids[k].cells[j] == Approx(0.1).margin(1e-15));
            }
        }
        for (std::size_t j = 0; j < 50; ++j) {
            CHECK(out.grids[2].cells[j] == Approx(rho3).margin(1e-15));
        }
    }
}

TEST_CASE("first classical step of the free-flow experiment", "[scheme]") {
    const auto grids = uniform_network(1000, {0.15, 0.2, 0.3});
    const SchemeParams params{1.0, 0.9};
    const auto out = step_network(grids, params, JunctionSolver::classical, 0.0009);
    CHECK(out.coupling.flux[0] == Approx(0.1275).margin(1e-12));
    CHECK(out.coupling.flux[1] == Approx(0.16).margin(1e-12));
    CHECK(out.coupling.flux[2] == Approx(0.2875).margin(1e-12));
}

TEST_CASE("a step changes mass only through the outflow boundary", "[scheme]") {
    const SchemeParams params{1.0, 0.9};
    for (auto rho : {std::array<double, 3>{0.15, 0.2, 0.3}, std::array<double, 3>{0.6, 0.35, 0.35},
                     std::array<double, 3>{0.5, 0.8, 0.6}}) {
        for (auto solver : {JunctionSolver::relaxation, JunctionSolver::classical}) {
            auto grids = uniform_network(200, rho);
            const double dt = time_step(params, grids[0].dx());
            for (int n = 0; n < 20; ++n) {
                const double before = mass(grids);
                auto out = step_network(grids, params, solver, dt);
                CHECK(std::abs(mass(out.grids) - before + dt * out.outflow) <= 1e-14 * 200);
                grids = std::move(out.grids);
            }
        }
    }
}

TEST_CASE("step rejects a time step above the CFL limit", "[scheme][errors]") {
    const auto grids = uniform_network(10, {0.1, 0.1, 0.1});
    CHECK_THROWS_AS(step_network(grids, {1.0, 0.9}, JunctionSolver::classical, 0.2), ConfigError);
}

TEST_CASE("first-order self-convergence on smooth data", "[scheme][convergence]") {
    const double T = 0.5;
    const auto u100 = smooth_run(100, T);
    const auto u200 = smooth_run(200, T);
    const auto u400 = smooth_run(400, T);
    const double e1 = l1_to_coarse(u200, u100);
    const double e2 = l1_to_coarse(u400, u200);
    const double order = std::log2(e1 / e2);
    INFO("self-convergence order " << order);
    CHECK(order >= 0.6);
    CHECK(order <= 1.2);
}
