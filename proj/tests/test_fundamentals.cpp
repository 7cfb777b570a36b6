#include <catch2/catch_amalgamated.hpp>

#include "lwrnet/fundamentals.hpp"

#include <random>

using namespace lwrnet;
using Catch::Approx;

TEST_CASE("velocity follows the linear Greenshields law", "[fundamentals]") {
    CHECK(velocity({1.0, 1.0}, 0.0) == 1.0);
    CHECK(velocity({1.0, 1.2}, 1.2) == 0.0);
    CHECK(velocity({1.0, 1.0}, 0.35) == Approx(0.65).margin(1e-15));
}

TEST_CASE("flux values", "[fundamentals]") {
    CHECK(flux({1.0, 1.0}, 0.5) == 0.25);
    CHECK(flux({1.0, 1.2}, 0.6) == Approx(0.3).margin(1e-15));
    CHECK(flux({1.0, 1.2}, 0.8) == Approx(0.8 * (1.0 - 0.8 / 1.2)).margin(1e-15));
    CHECK(flux({1.0, 1.2}, 0.8) == Approx(0.266667).margin(1e-6));
}

TEST_CASE("flux derivative values", "[fundamentals]") {
    CHECK(flux_derivative({1.0, 1.0}, 0.5) == 0.0);
    CHECK(flux_derivative({1.0, 1.0}, 0.15) == Approx(0.7).margin(1e-15));
    CHECK(flux_derivative({1.0, 1.2}, 0.35) == Approx(1.0 - 0.7 / 1.2).margin(1e-15));
}

TEST_CASE("demand and supply branches", "[fundamentals]") {
    const FundamentalDiagram unit{1.0, 1.0};
    const FundamentalDiagram wide{1.0, 1.2};
    CHECK(demand(unit, 0.15) == Approx(0.1275).margin(1e-15));
    CHECK(demand(unit, 0.6) == 0.25);
    CHECK(demand(unit, 0.0) == 0.0);
    CHECK(supply(wide, 0.3) == Approx(0.3).margin(1e-15));
    CHECK(supply(wide, 0.6) == Approx(0.3).margin(1e-15));
    CHECK(supply(wide, 1.2) == 0.0);
}

TEST_CASE("derived quantities", "[fundamentals]") {
    const FundamentalDiagram d{2.0, 1.5};
    CHECK(d.critical_density() == 0.75);
    CHECK(d.capacity() == Approx(flux(d, d.critical_density())).epsilon(1e-15));
    CHECK(d.critical_density() > 0.0);
    CHECK(d.critical_density() < d.rho_max);
}

TEST_CASE("out-of-range densities are domain errors", "[fundamentals][errors]") {
    const FundamentalDiagram d{1.0, 1.0};
    CHECK_THROWS_AS(velocity(d, -1e-9), DomainError);
    CHECK_THROWS_AS(flux(d, 1.0 + 1e-9), DomainError);
    CHECK_THROWS_AS(demand(d, 2.0), DomainError);
    CHECK_THROWS_AS(supply(d, -0.5), DomainError);
    CHECK_THROWS_AS(flux_derivative(d, std::nan("")), DomainError);
    // round-off slack
    CHECK_NOTHROW(flux(d, -5e-13));
    CHECK_NOTHROW(flux(d, 1.0 + 5e-13));
}

TEST_CASE("invalid diagram parameters", "[fundamentals][errors]") {
    CHECK_THROWS_AS(FundamentalDiagram(0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(FundamentalDiagram(1.0, -1.0), ConfigError);
}

TEST_CASE("fundamental diagram properties on random diagrams", "[fundamentals][property]") {
    std::mt19937_64 rng(20241016);
    std::uniform_real_distribution<double> param(0.3, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int trial = 0; trial < 50; ++trial) {
        const FundamentalDiagram d{param(rng), param(rng)};
        const double cap = d.capacity();
        CHECK(flux(d, 0.0) == 0.0);
        CHECK(flux(d, d.rho_max) == 0.0);

        for (int i = 0; i < 100; ++i) {
            const double rho = d.rho_max * (0.001 + 0.998 * unit(rng));
            CHECK(flux(d, rho) == rho * velocity(d, rho));
            const double step = 1e-6;
            const double fd = (flux(d, rho + step) - flux(d, rho - step)) / (2.0 * step);
            CHECK(std::abs(fd - flux_derivative(d, rho)) <= 1e-8);

            const double dem = demand(d, rho);
            const double sup = supply(d, rho);
            CHECK(dem <= cap);
            CHECK(sup <= cap);
            CHECK(std::min(dem, sup) == flux(d, rho));
            if (rho != d.critical_density()) {
                CHECK(((dem == cap) != (sup == cap)));
            }
        }

        double prev_demand = -1.0;
        double prev_supply = 2.0 * cap;
        const double step = 1e-3 * d.rho_max;
        for (int i = 0; i <= 1000; ++i) {
            const double rho = std::min(i * step, d.rho_max);
            CHECK(demand(d, rho) >= prev_demand);
            CHECK(supply(d, rho) <= prev_supply);
            prev_demand = demand(d, rho);
            prev_supply = supply(d, rho);
        }
    }
}
