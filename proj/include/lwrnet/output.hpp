#pragma once

// Plot data and run summaries. Numbers are written with std::to_chars, so the
// files do not depend on the process locale.

#include "lwrnet/errors.hpp"
#include "lwrnet/simulation.hpp"

#include "json.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

namespace lwrnet {

/// 17 significant digits, enough to round-trip any double.
inline std::string format_value(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

/// Shortest round-trip form, used in file names ("0.75", "1").
inline std::string format_time(double t) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), t);
    return {buf, res.ptr};
}

inline std::string profile_csv(const RoadGrid& geometry, const std::vector<double>& density) {
    std::string out = "x,rho\n";
    for (std::size_t j = 0; j < density.size(); ++j) {
        out += format_value(geometry.cell_center(j));
        out += ',';
        out += format_value(density[j]);
        out += '\n';
    }
    return out;
}

inline std::string junction_csv(const std::vector<JunctionRecord>& records) {
    std::string out = "t,f1,f2,f3\n";
    for (const auto& r : records) {
        out += format_value(r.t);
        for (double f : r.flux) {
            out += ',';
            out += format_value(f);
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::json summary_json(const SimulationResult& r) {
    nlohmann::json histogram = nlohmann::json::object();
    for (std::size_t b = 0; b < branch_count; ++b) {
        if (r.diagnostics.histogram[b] > 0) {
            histogram[std::string(to_string(static_cast<Branch>(b)))] = r.diagnostics.histogram[b];
        }
    }
    nlohmann::json ranges = nlohmann::json::array();
    for (std::size_t k = 0; k < 3; ++k) {
        ranges.push_back({{"road", k + 1}, {"min", r.range[k].min}, {"max", r.range[k].max}});
    }
    return {
        {"solver", std::string(to_string(r.solver))},
        {"lambda", r.lambda},
        {"steps", r.steps},
        {"mass",
         {{"initial", r.mass.initial},
          {"final", r.mass.final},
          {"outflow", r.mass.outflow},
          {"defect", r.mass.defect}}},
        {"density_range", ranges},
        {"branch_histogram", histogram},
        {"fallback_count", r.diagnostics.fallback_count},
        {"max_kirchhoff_residual", r.diagnostics.max_kirchhoff_residual},
        {"wall_seconds", r.wall_seconds},
    };
}

inline nlohmann::json differences_json(const ComparisonReport& report) {
    nlohmann::json diffs = nlohmann::json::array();
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& d = report.roads[k];
        diffs.push_back({{"road", k + 1},
                         {"l1", d.l1},
                         {"l1_relative", d.l1_rel},
                         {"linf", d.linf},
                         {"linf_relative", d.linf_rel},
                         {"max_junction_flux_difference", d.max_junction_flux}});
    }
    return diffs;
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    if (!out) {
        throw IoError("failed to write " + path.string());
    }
}

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    }
}

} // namespace detail

/// road<k>_t<time>.csv per snapshot, road<k>.csv for the final time,
/// junction_fluxes.csv and summary.json.
inline void write_outputs(const SimulationResult& result, const std::filesystem::path& dir) {
    detail::ensure_directory(dir);
    for (const auto& snap : result.snapshots) {
        for (std::size_t k = 0; k < 3; ++k) {
            const auto name = "road" + std::to_string(k + 1) + "_t" + format_time(snap.time) + ".csv";
            detail::write_file(dir / name, profile_csv(result.final_grids[k], snap.density[k]));
        }
    }
    for (std::size_t k = 0; k < 3; ++k) {
        const auto& g = result.final_grids[k];
        detail::write_file(dir / ("road" + std::to_string(k + 1) + ".csv"), profile_csv(g, g.cells));
    }
    detail::write_file(dir / "junction_fluxes.csv", junction_csv(result.junction));
    detail::write_file(dir / "summary.json", summary_json(result).dump(2) + "\n");
}

/// Per-solver subdirectories plus a top-level summary with difference norms.
inline void write_comparison(const ComparisonReport& report, const std::filesystem::path& dir) {
    write_outputs(report.relaxation, dir / "relaxation");
    write_outputs(report.classical, dir / "classical");
    const nlohmann::json summary = {
        {"relaxation", summary_json(report.relaxation)},
        {"classical", summary_json(report.classical)},
        {"differences", differences_json(report)},
    };
    detail::write_file(dir / "summary.json", summary.dump(2) + "\n");
}

} // namespace lwrnet
