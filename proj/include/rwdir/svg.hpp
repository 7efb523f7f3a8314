#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "rwdir/direction_estimator.hpp"
#include "rwdir/hull.hpp"
#include "rwdir/walk.hpp"

namespace rwdir {

enum class PlotKind { kTrace, kRose, kGrowth };

std::string_view to_string(PlotKind kind);

// Planar polyline through the points, one vertex per point.
std::string trace_svg(const std::vector<std::array<double, 2>>& points);

// One wedge per planar grid direction, filled by verdict.
std::string rose_svg(const std::vector<Vec>& grid, const std::vector<Verdict>& verdicts);
// Same with free-form labels (IN/OUT/UNDECIDED or PLUS/MINUS/OSC).
std::string rose_svg(const std::vector<Vec>& grid, const std::vector<std::string>& labels);

// r_n against log10 n.
std::string growth_svg(const std::vector<std::array<double, 2>>& series);

// Writes the document; throws Io when the path cannot be written.
void write_svg(const std::string& svg, const std::filesystem::path& path);

// The emit_plot family throws InvalidInput on empty data without touching the path.
void emit_plot(const TrajectoryRecord& record, const std::filesystem::path& path);
void emit_plot(const DirectionSetEstimate& estimate, const std::filesystem::path& path);
void emit_plot(const Consensus& consensus, const std::filesystem::path& path);
void emit_plot(const HullGrowthReport& report, const std::filesystem::path& path);

// Infers the plot from the CSV header: trajectory, direction estimate,
// consensus or projections (rose), hull (growth).
PlotKind emit_plot_from_csv(const std::filesystem::path& csv, const std::filesystem::path& path);

}  // namespace rwdir
