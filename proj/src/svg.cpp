#include "rwdir/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "rwdir/error.hpp"
#include "rwdir/ext_real.hpp"

namespace rwdir {

namespace {

constexpr double kSize = 480.0;
constexpr double kMargin = 40.0;

std::string num(double x) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(2);
  out << x;
  return out.str();
}

std::string header(const std::string& title) {
  return "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
         "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kSize) + "\" height=\"" + num(kSize) +
         "\" viewBox=\"0 0 " + num(kSize) + " " + num(kSize) + "\">\n<title>" + title +
         "</title>\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

struct Box {
  double x0, x1, y0, y1;

  static Box of(const std::vector<std::array<double, 2>>& pts) {
    Box b{pts[0][0], pts[0][0], pts[0][1], pts[0][1]};
    for (const auto& p : pts) {
      b.x0 = std::min(b.x0, p[0]);
      b.x1 = std::max(b.x1, p[0]);
      b.y0 = std::min(b.y0, p[1]);
      b.y1 = std::max(b.y1, p[1]);
    }
    if (b.x1 == b.x0) b.x1 = b.x0 + 1.0;
    if (b.y1 == b.y0) b.y1 = b.y0 + 1.0;
    return b;
  }

  double px(double x) const { return kMargin + (x - x0) / (x1 - x0) * (kSize - 2 * kMargin); }
  double py(double y) const { return kSize - kMargin - (y - y0) / (y1 - y0) * (kSize - 2 * kMargin); }
};

void require_points(const std::vector<std::array<double, 2>>& pts, const char* what) {
  if (pts.empty()) throw Error(ErrorCode::kInvalidInput, std::string(what) + ": empty series");
  for (const auto& p : pts) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1])) {
      throw Error(ErrorCode::kInvalidInput, std::string(what) + ": non-finite coordinate");
    }
  }
}

std::string polyline(const std::vector<std::array<double, 2>>& pts, const Box& box, const char* cls) {
  std::string out = std::string("<polyline class=\"") + cls + "\" fill=\"none\" stroke=\"steelblue\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) out += ' ';
    out += num(box.px(pts[i][0])) + ',' + num(box.py(pts[i][1]));
  }
  return out + "\"/>\n";
}

const char* fill_for(const std::string& label) {
  if (label == "IN") return "#2a9d8f";
  if (label == "OUT") return "#e9ecef";
  if (label == "PLUS") return "#457b9d";
  if (label == "MINUS") return "#e63946";
  if (label == "OSC") return "#8ab17d";
  return "#f4a261";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double parse_number(const std::string& s) {
  if (s.empty()) return std::nan("");
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  return end == s.c_str() ? std::nan("") : v;
}

std::size_t column(const std::vector<std::string>& head, const std::string& name) {
  const auto it = std::find(head.begin(), head.end(), name);
  return it == head.end() ? head.size() : static_cast<std::size_t>(it - head.begin());
}

std::vector<std::array<double, 2>> trajectory_points(const std::vector<TrajectoryRow>& rows) {
  std::vector<std::array<double, 2>> pts;
  for (const TrajectoryRow& r : rows) pts.push_back({r.position[0].to_double(), r.position[1].to_double()});
  return pts;
}

}  // namespace

std::string_view to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::kTrace: return "trace";
    case PlotKind::kRose: return "rose";
    case PlotKind::kGrowth: return "growth";
  }
  return "unknown";
}

std::string trace_svg(const std::vector<std::array<double, 2>>& points) {
  require_points(points, "trace");
  const Box box = Box::of(points);
  std::string out = header("trajectory trace");
  out += polyline(points, box, "trace");
  out += "<circle class=\"start\" cx=\"" + num(box.px(points.front()[0])) + "\" cy=\"" + num(box.py(points.front()[1])) +
         "\" r=\"3\" fill=\"black\"/>\n";
  return out + "</svg>\n";
}

std::string rose_svg(const std::vector<Vec>& grid, const std::vector<Verdict>& verdicts) {
  std::vector<std::string> labels;
  for (Verdict v : verdicts) labels.emplace_back(to_string(v));
  return rose_svg(grid, labels);
}

std::string rose_svg(const std::vector<Vec>& grid, const std::vector<std::string>& labels) {
  if (grid.empty()) throw Error(ErrorCode::kInvalidInput, "rose: empty grid");
  if (grid.size() != labels.size()) throw Error(ErrorCode::kInvalidInput, "rose: grid and verdicts differ in length");
  if (grid.front().size() != 2) {
    throw Error(ErrorCode::kUnsupportedDimension, "rose: planar grids only (d = " + std::to_string(grid.front().size()) + ")");
  }
  const double c = kSize / 2.0;
  const double radius = c - kMargin;
  const double half = std::numbers::pi / static_cast<double>(grid.size());
  std::string out = header("direction rose");
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double theta = std::atan2(grid[p][1], grid[p][0]);
    const double a = theta - half;
    const double b = theta + half;
    out += "<path class=\"wedge " + labels[p] + "\" fill=\"" + fill_for(labels[p]) +
           "\" stroke=\"white\" stroke-width=\"0.5\" d=\"M " + num(c) + ' ' + num(c) + " L " +
           num(c + radius * std::cos(a)) + ' ' + num(c - radius * std::sin(a)) + " A " + num(radius) + ' ' +
           num(radius) + " 0 0 0 " + num(c + radius * std::cos(b)) + ' ' + num(c - radius * std::sin(b)) + " Z\"/>\n";
  }
  return out + "</svg>\n";
}

std::string growth_svg(const std::vector<std::array<double, 2>>& series) {
  require_points(series, "growth");
  std::vector<std::array<double, 2>> pts;
  for (const auto& s : series) {
    if (s[0] > 0.0) pts.push_back({std::log10(s[0]), s[1]});
  }
  if (pts.empty()) throw Error(ErrorCode::kInvalidInput, "growth: no sample with n > 0");
  Box box = Box::of(pts);
  box.y0 = std::min(box.y0, 0.0);
  std::string out = header("hull inscribed radius growth");
  out += "<line class=\"axis\" x1=\"" + num(kMargin) + "\" y1=\"" + num(kSize - kMargin) + "\" x2=\"" +
         num(kSize - kMargin) + "\" y2=\"" + num(kSize - kMargin) + "\" stroke=\"black\"/>\n";
  out += "<line class=\"axis\" x1=\"" + num(kMargin) + "\" y1=\"" + num(kMargin) + "\" x2=\"" + num(kMargin) +
         "\" y2=\"" + num(kSize - kMargin) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + num(kSize / 2) + "\" y=\"" + num(kSize - 10) + "\" text-anchor=\"middle\" font-size=\"12\">log10 n</text>\n";
  out += "<text x=\"12\" y=\"" + num(kSize / 2) + "\" font-size=\"12\">r_n</text>\n";
  out += polyline(pts, box, "growth");
  return out + "</svg>\n";
}

void write_svg(const std::string& svg, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << svg;
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

void emit_plot(const TrajectoryRecord& record, const std::filesystem::path& path) {
  if (record.dimension != 2) {
    throw Error(ErrorCode::kUnsupportedDimension, "trace: planar walks only (d = " + std::to_string(record.dimension) + ")");
  }
  const auto& rows = record.dense.empty() ? record.checkpoints : record.dense;
  write_svg(trace_svg(trajectory_points(rows)), path);
}

void emit_plot(const DirectionSetEstimate& estimate, const std::filesystem::path& path) {
  std::vector<Verdict> verdicts;
  for (const PointEstimate& p : estimate.points) verdicts.push_back(p.verdict);
  write_svg(rose_svg(estimate.grid, verdicts), path);
}

void emit_plot(const Consensus& consensus, const std::filesystem::path& path) {
  write_svg(rose_svg(consensus.grid, consensus.verdicts), path);
}

void emit_plot(const HullGrowthReport& report, const std::filesystem::path& path) {
  std::vector<std::array<double, 2>> series;
  for (const HullSample& s : report.series) series.push_back({static_cast<double>(s.n), s.radius});
  write_svg(growth_svg(series), path);
}

PlotKind emit_plot_from_csv(const std::filesystem::path& csv, const std::filesystem::path& path) {
  std::ifstream in(csv);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::kInvalidInput, csv.string() + ": empty file");
  const std::vector<std::string> head = split_csv_line(line);
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(split_csv_line(line));
  }
  auto cell = [&](const std::vector<std::string>& row, std::size_t c) {
    return c < row.size() ? row[c] : std::string();
  };

  const std::size_t s1 = column(head, "S_1");
  const std::size_t s2 = column(head, "S_2");
  const std::size_t verdict = column(head, "verdict");
  const std::size_t radius = column(head, "r_n");
  if (s1 < head.size() && s2 < head.size()) {
    if (column(head, "S_3") < head.size()) throw Error(ErrorCode::kUnsupportedDimension, "trace: planar walks only");
    std::vector<std::array<double, 2>> pts;
    for (const auto& row : rows) pts.push_back({parse_number(cell(row, s1)), parse_number(cell(row, s2))});
    write_svg(trace_svg(pts), path);
    return PlotKind::kTrace;
  }
  if (verdict < head.size()) {
    std::vector<std::size_t> coords;
    for (std::size_t i = 1; column(head, "u_" + std::to_string(i)) < head.size(); ++i) {
      coords.push_back(column(head, "u_" + std::to_string(i)));
    }
    std::vector<Vec> grid;
    std::vector<std::string> labels;
    for (const auto& row : rows) {
      Vec u;
      for (std::size_t c : coords) u.push_back(parse_number(cell(row, c)));
      grid.push_back(u);
      labels.push_back(cell(row, verdict));
    }
    write_svg(rose_svg(grid, labels), path);
    return PlotKind::kRose;
  }
  if (radius < head.size()) {
    const std::size_t n = column(head, "n");
    std::vector<std::array<double, 2>> series;
    for (const auto& row : rows) series.push_back({parse_number(cell(row, n)), parse_number(cell(row, radius))});
    write_svg(growth_svg(series), path);
    return PlotKind::kGrowth;
  }
  throw Error(ErrorCode::kInvalidInput, csv.string() + ": header matches no known plot (" + head.front() + ",...)");
}

}  // namespace rwdir
