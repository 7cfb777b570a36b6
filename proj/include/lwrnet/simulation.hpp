#pragma once

// Scenario description, time loop, mass audit and dual-solver comparison.

#include "lwrnet/errors.hpp"
#include "lwrnet/fundamentals.hpp"
#include "lwrnet/junction.hpp"
#include "lwrnet/scheme.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace lwrnet {

struct Segment {
    double from = 0.0;
    double to = 0.0;
    double value = 0.0;

    bool operator==(const Segment&) const = default;
};

/// Constant initial density or piecewise-constant segments [from, to).
using InitialProfile = std::variant<double, std::vector<Segment>>;

struct RoadSpec {
    FundamentalDiagram diagram;
    InitialProfile initial = 0.0;
};

enum class SolverChoice { relaxation, classical, both };

constexpr std::string_view to_string(SolverChoice s) noexcept {
    switch (s) {
    case SolverChoice::relaxation: return "relaxation";
    case SolverChoice::classical: return "classical";
    case SolverChoice::both: return "both";
    }
    return "unknown";
}

enum class Experiment { free_flow = 1, congestion = 2, double_congestion = 3 };

namespace detail {

inline double profile_value(const InitialProfile& profile, double x, int road) {
    if (const double* value = std::get_if<double>(&profile)) {
        return *value;
    }
    for (const auto& seg : std::get<std::vector<Segment>>(profile)) {
        if (x >= seg.from && x < seg.to) {
            return seg.value;
        }
    }
    throw ConfigError("initial profile of road " + std::to_string(road)
                      + " does not cover x = " + std::to_string(x));
}

} // namespace detail

struct Scenario {
    std::array<RoadSpec, 3> roads;
    std::size_t cells = 1000;
    double cfl = 0.9;
    std::optional<double> lambda;
    double final_time = 1.0;
    SolverChoice solver = SolverChoice::relaxation;
    std::vector<double> snapshot_times;

    MergeDiagrams diagrams() const {
        return {roads[0].diagram, roads[1].diagram, roads[2].diagram};
    }

    /// Explicit lambda, or the smallest subcharacteristic one (max v_max).
    double effective_lambda() const {
        if (lambda) {
            return *lambda;
        }
        double speed = 0.0;
        for (const auto& r : roads) {
            speed = std::max(speed, r.diagram.v_max);
        }
        return speed;
    }

    SchemeParams params() const { return {effective_lambda(), cfl}; }

    std::array<RoadGrid, 3> initial_grids() const {
        std::array<RoadGrid, 3> grids;
        for (int k = 0; k < 3; ++k) {
            const auto orientation = k < 2 ? Orientation::incoming : Orientation::outgoing;
            grids[k] = RoadGrid::uniform(k + 1, roads[k].diagram, orientation, cells, 0.0);
            for (std::size_t j = 0; j < cells; ++j) {
                grids[k].cells[j] = detail::profile_value(roads[k].initial, grids[k].cell_center(j), k + 1);
            }
        }
        return grids;
    }

    /// Sorted, de-duplicated snapshot times in [0, T], always ending with T.
    std::vector<double> snapshot_schedule() const {
        std::vector<double> times;
        for (double t : snapshot_times) {
            if (t >= 0.0 && t < final_time) {
                times.push_back(t);
            }
        }
        times.push_back(final_time);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
        return times;
    }

    void validate() const {
        if (!(final_time > 0.0) || !std::isfinite(final_time)) {
            throw ConfigError("final_time must be positive");
        }
        if (cells < 2) {
            throw ConfigError("cells must be at least 2");
        }
        for (double t : snapshot_times) {
            if (!std::isfinite(t) || t < 0.0 || t > final_time) {
                throw ConfigError("snapshot time " + std::to_string(t) + " outside [0, final_time]");
            }
        }
        params().validate(diagrams());
        for (const auto& g : initial_grids()) {
            for (double rho : g.cells) {
                if (!(rho >= 0.0 && rho <= g.diagram.rho_max)) {
                    throw ConfigError("initial density " + std::to_string(rho) + " on road "
                                      + std::to_string(g.road_id) + " outside [0, rho_max]");
                }
            }
        }
    }
};

/// Riemann data of the three merge experiments: V1 = V2 = 1 - rho,
/// V3 = 1 - rho/1.2, M = 1000.
inline Scenario preset(Experiment e, SolverChoice solver = SolverChoice::both) {
    Scenario s;
    s.roads[0].diagram = FundamentalDiagram(1.0, 1.0);
    s.roads[1].diagram = FundamentalDiagram(1.0, 1.0);
    s.roads[2].diagram = FundamentalDiagram(1.0, 1.2);
    s.cells = 1000;
    s.cfl = 0.9;
    s.solver = solver;
    std::array<double, 3> rho{};
    switch (e) {
    case Experiment::free_flow:
        rho = {0.15, 0.2, 0.3};
        s.final_time = 0.75;
        break;
    case Experiment::congestion:
        rho = {0.6, 0.35, 0.35};
        s.final_time = 1.0;
        break;
    case Experiment::double_congestion:
        rho = {0.5, 0.8, 0.6};
        s.final_time = 1.0;
        break;
    }
    for (int k = 0; k < 3; ++k) {
        s.roads[k].initial = rho[k];
    }
    return s;
}

struct Snapshot {
    double time = 0.0;
    std::array<std::vector<double>, 3> density;
};

struct JunctionRecord {
    double t = 0.0;
    double dt = 0.0;
    std::array<double, 3> flux{};
    Branch branch = Branch::quadratic;
    double kirchhoff_residual = 0.0;
};

struct MassAudit {
    double initial = 0.0;
    double final = 0.0;
    double outflow = 0.0; // accumulated sum of dt * F_outflow
    double defect = 0.0;  // final - initial + outflow
};

struct SolverDiagnostics {
    std::array<std::size_t, branch_count> histogram{};
    std::size_t fallback_count = 0;
    double max_kirchhoff_residual = 0.0;

    std::size_t count(Branch b) const noexcept { return histogram[static_cast<std::size_t>(b)]; }
};

struct DensityRange {
    double min = std::numeric_limits<double>::infinity();
    double max = -std::numeric_limits<double>::infinity();
};

struct SimulationResult {
    JunctionSolver solver = JunctionSolver::relaxation;
    double lambda = 1.0;
    std::array<RoadGrid, 3> final_grids;
    std::vector<Snapshot> snapshots;
    std::vector<JunctionRecord> junction;
    MassAudit mass;
    SolverDiagnostics diagnostics;
    /// Per road, over every time level including the initial one.
    std::array<DensityRange, 3> range;
    std::size_t steps = 0;
    double wall_seconds = 0.0;
};

inline double total_mass(const std::array<RoadGrid, 3>& grids) {
    double mass = 0.0;
    for (const auto& g : grids) {
        double road = 0.0;
        for (double rho : g.cells) {
            road += rho;
        }
        mass += road * g.dx();
    }
    return mass;
}

namespace detail {

inline void widen(std::array<DensityRange, 3>& range, const std::array<RoadGrid, 3>& grids) {
    for (std::size_t k = 0; k < 3; ++k) {
        const auto [lo, hi] = std::minmax_element(grids[k].cells.begin(), grids[k].cells.end());
        range[k].min = std::min(range[k].min, *lo);
        range[k].max = std::max(range[k].max, *hi);
    }
}

inline Snapshot take_snapshot(double t, const std::array<RoadGrid, 3>& grids) {
    return {t, {grids[0].cells, grids[1].cells, grids[2].cells}};
}

} // namespace detail

inline SimulationResult run(const Scenario& scenario, JunctionSolver solver) {
    scenario.validate();
    const auto start = std::chrono::steady_clock::now();

    SimulationResult result;
    result.solver = solver;
    const SchemeParams params = scenario.params();
    result.lambda = params.lambda;

    std::array<RoadGrid, 3> grids = scenario.initial_grids();
    double dx = grids[0].dx();
    for (const auto& g : grids) {
        dx = std::min(dx, g.dx());
    }
    const double full_step = time_step(params, dx);

    result.mass.initial = total_mass(grids);
    detail::widen(result.range, grids);

    const std::vector<double> schedule = scenario.snapshot_schedule();
    std::size_t next = 0;
    double t = 0.0;
    while (next < schedule.size() && schedule[next] <= 0.0) {
        result.snapshots.push_back(detail::take_snapshot(t, grids));
        ++next;
    }

    while (next < schedule.size()) {
        const double target = schedule[next];
        double dt = full_step;
        bool lands = false;
        if (t + dt >= target - 1e-12 * full_step) {
            dt = target - t;
            lands = true;
        }

        StepOutcome step;
        try {
            step = step_network(grids, params, solver, dt);
        } catch (const std::exception& e) {
            throw NumericalError(e.what(), result.steps);
        }

        const auto& diag = step.coupling.diagnostics;
        result.junction.push_back({t, dt, step.coupling.flux, diag.branch, diag.kirchhoff_residual});
        ++result.diagnostics.histogram[static_cast<std::size_t>(diag.branch)];
        if (is_fallback(diag.branch)) {
            ++result.diagnostics.fallback_count;
        }
        result.diagnostics.max_kirchhoff_residual =
            std::max(result.diagnostics.max_kirchhoff_residual, std::abs(diag.kirchhoff_residual));
        result.mass.outflow += dt * step.outflow;

        grids = std::move(step.grids);
        detail::widen(result.range, grids);
        t = lands ? target : t + dt;
        ++result.steps;

        while (lands && next < schedule.size() && schedule[next] <= t) {
            result.snapshots.push_back(detail::take_snapshot(schedule[next], grids));
            ++next;
        }
    }

    result.mass.final = total_mass(grids);
    result.mass.defect = result.mass.final - result.mass.initial + result.mass.outflow;
    result.final_grids = std::move(grids);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

/// Runs the scenario's own solver; SolverChoice::both is rejected (use compare).
inline SimulationResult run(const Scenario& scenario) {
    switch (scenario.solver) {
    case SolverChoice::relaxation: return run(scenario, JunctionSolver::relaxation);
    case SolverChoice::classical: return run(scenario, JunctionSolver::classical);
    case SolverChoice::both: break;
    }
    throw ConfigError("run() needs a single solver; use compare() for both");
}

struct RoadDifference {
    double l1 = 0.0;      // sum |a - b| dx
    double l1_rel = 0.0;  // l1 / sum |a| dx, with a the classical profile
    double linf = 0.0;
    double linf_rel = 0.0;
    double max_junction_flux = 0.0; // max over steps of |f_relax - f_classical|
};

struct ComparisonReport {
    SimulationResult relaxation;
    SimulationResult classical;
    std::array<RoadDifference, 3> roads;
};

inline RoadDifference difference(const RoadGrid& reference, const RoadGrid& other) {
    RoadDifference d;
    double norm1 = 0.0;
    double norm_inf = 0.0;
    for (std::size_t j = 0; j < reference.size(); ++j) {
        const double diff = std::abs(reference.cells[j] - other.cells[j]);
        d.l1 += diff;
        d.linf = std::max(d.linf, diff);
        norm1 += std::abs(reference.cells[j]);
        norm_inf = std::max(norm_inf, std::abs(reference.cells[j]));
    }
    d.l1_rel = norm1 > 0.0 ? d.l1 / norm1 : d.l1;
    d.linf_rel = norm_inf > 0.0 ? d.linf / norm_inf : d.linf;
    d.l1 *= reference.dx();
    return d;
}

/// Both solvers on identical input, run concurrently.
inline ComparisonReport compare(const Scenario& scenario) {
    scenario.validate();
    auto relax = std::async(std::launch::async, [&] { return run(scenario, JunctionSolver::relaxation); });
    auto classic = std::async(std::launch::async, [&] { return run(scenario, JunctionSolver::classical); });

    ComparisonReport report;
    report.relaxation = relax.get();
    report.classical = classic.get();
    for (std::size_t k = 0; k < 3; ++k) {
        report.roads[k] = difference(report.classical.final_grids[k], report.relaxation.final_grids[k]);
        const auto& a = report.classical.junction;
        const auto& b = report.relaxation.junction;
        for (std::size_t n = 0; n < std::min(a.size(), b.size()); ++n) {
            report.roads[k].max_junction_flux =
                std::max(report.roads[k].max_junction_flux, std::abs(a[n].flux[k] - b[n].flux[k]));
        }
    }
    return report;
}

/// Random merge scenario: diagrams with v_max, rho_max in [0.5, 2], up to three
/// piecewise-constant segments per road, densities in [0, rho_max].
inline Scenario random_scenario(std::mt19937_64& rng, std::size_t cells = 200) {
    std::uniform_real_distribution<double> param(0.5, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pieces(1, 3);

    Scenario s;
    s.cells = cells;
    s.cfl = 0.5 + 0.5 * unit(rng);
    s.final_time = 0.2 + 0.8 * unit(rng);
    s.solver = unit(rng) < 0.5 ? SolverChoice::relaxation : SolverChoice::classical;
    for (int k = 0; k < 3; ++k) {
        const double v_max = param(rng);
        const double rho_max = param(rng);
        s.roads[k].diagram = FundamentalDiagram(v_max, rho_max);
        const double a = k < 2 ? -1.0 : 0.0;
        const int n = pieces(rng);
        std::vector<Segment> segments;
        for (int i = 0; i < n; ++i) {
            const double from = i == 0 ? a : a + static_cast<double>(i) / n;
            const double to = i == n - 1 ? a + 1.0 : a + static_cast<double>(i + 1) / n;
            segments.push_back({from, to, rho_max * unit(rng)});
        }
        s.roads[k].initial = std::move(segments);
    }
    if (unit(rng) < 0.5) {
        s.lambda = s.effective_lambda() * (1.0 + unit(rng));
    }
    return s;
}

} // namespace lwrnet
