#include "emit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace cli {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> header)
    : path_(std::move(path)), header_(std::move(header)) {}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != header_.size())
    throw std::runtime_error("csv row width mismatch for " + path_);
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) line += ",";
    line += cells[i];
  }
  rows_.push_back(std::move(line));
}

int CsvWriter::flush() {
  std::ofstream out(path_, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path_);
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i > 0) out << ',';
    out << header_[i];
  }
  out << '\n';
  for (const std::string& r : rows_) out << r << '\n';
  return static_cast<int>(rows_.size());
}

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0, kMargin = 56.0;

struct Box {
  double xlo = 0.0, xhi = 1.0, ylo = 0.0, yhi = 1.0;

  void include(double x, double y) {
    xlo = std::min(xlo, x);
    xhi = std::max(xhi, x);
    ylo = std::min(ylo, y);
    yhi = std::max(yhi, y);
  }
  void pad() {
    const double dx = (xhi - xlo) * 0.05 + 1e-12;
    const double dy = (yhi - ylo) * 0.05 + 1e-12;
    xlo -= dx;
    xhi += dx;
    ylo -= dy;
    yhi += dy;
  }
  double px(double x) const { return kMargin + (x - xlo) / (xhi - xlo) * (kWidth - 2 * kMargin); }
  double py(double y) const {
    return kHeight - kMargin - (y - ylo) / (yhi - ylo) * (kHeight - 2 * kMargin);
  }
};

const char* class_color(int cls) {
  switch (cls) {
    case 0: return "#1f6fb2";
    case 1: return "#c23b22";
    case 2: return "#777777";
    default: return "#2e8540";
  }
}

std::string svg_header(const std::string& title) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
       "viewBox=\"0 0 720 480\">\n";
  s += "<rect width=\"720\" height=\"480\" fill=\"white\"/>\n";
  s += "<text x=\"360\" y=\"24\" text-anchor=\"middle\" font-family=\"monospace\" "
       "font-size=\"14\">" +
       title + "</text>\n";
  return s;
}

void append_axes(std::string& s) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", kMargin,
                kHeight - kMargin, kWidth - kMargin, kHeight - kMargin);
  s += buf;
  std::snprintf(buf, sizeof(buf),
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n", kMargin,
                kMargin, kMargin, kHeight - kMargin);
  s += buf;
}

void append_annotations(std::string& s, const std::vector<std::string>& annotations) {
  double y = 42.0;
  for (const std::string& a : annotations) {
    s += "<text x=\"" + format_g17(kMargin) + "\" y=\"" + format_g17(y) +
         "\" font-family=\"monospace\" font-size=\"12\">" + a + "</text>\n";
    y += 16.0;
  }
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

}  // namespace

void write_scatter_svg(const std::string& path, const std::string& title,
                       const std::vector<PlotPoint>& points, const std::vector<PlotLine>& lines,
                       const std::vector<std::string>& annotations) {
  std::string s = svg_header(title);
  if (points.empty() && lines.empty()) {
    append_axes(s);
    append_annotations(s, annotations);
    s += "</svg>\n";
    write_file(path, s);
    return;
  }

  Box box;
  box.xlo = box.ylo = std::numeric_limits<double>::infinity();
  box.xhi = box.yhi = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) box.include(p.x, p.y);
  for (const auto& l : lines)
    for (const auto& p : l.points) box.include(p.x, p.y);
  box.pad();

  append_axes(s);
  for (const auto& l : lines) {
    std::string d;
    for (std::size_t i = 0; i < l.points.size(); ++i) {
      d += (i == 0 ? "M" : "L");
      d += format_g17(box.px(l.points[i].x)) + " " + format_g17(box.py(l.points[i].y));
    }
    s += "<path d=\"" + d + "\" fill=\"none\" stroke=\"" + l.color + "\"";
    if (l.dashed) s += " stroke-dasharray=\"6 4\"";
    s += "/>\n";
  }
  for (const auto& p : points) {
    s += "<circle cx=\"" + format_g17(box.px(p.x)) + "\" cy=\"" + format_g17(box.py(p.y)) +
         "\" r=\"2.5\" fill=\"" + class_color(p.cls) + "\"/>\n";
  }
  append_annotations(s, annotations);
  s += "</svg>\n";
  write_file(path, s);
}

void write_staircase_svg(const std::string& path, const std::string& title,
                         const std::vector<PlotPoint>& steps,
                         const std::vector<std::string>& annotations) {
  std::string s = svg_header(title);
  if (steps.empty()) {
    append_axes(s);
    append_annotations(s, annotations);
    s += "</svg>\n";
    write_file(path, s);
    return;
  }
  Box box;
  box.xlo = box.ylo = std::numeric_limits<double>::infinity();
  box.xhi = box.yhi = -std::numeric_limits<double>::infinity();
  for (const auto& p : steps) box.include(p.x, p.y);
  box.include(steps.front().x, 0.0);
  box.pad();
  append_axes(s);

  std::string d;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const double px = box.px(steps[i].x);
    const double py = box.py(steps[i].y);
    if (i == 0) {
      d += "M" + format_g17(px) + " " + format_g17(py);
    } else {
      d += "L" + format_g17(px) + " " + format_g17(box.py(steps[i - 1].y));
      d += "L" + format_g17(px) + " " + format_g17(py);
    }
  }
  s += "<path d=\"" + d + "\" fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\"/>\n";
  for (const auto& p : steps) {
    s += "<circle cx=\"" + format_g17(box.px(p.x)) + "\" cy=\"" + format_g17(box.py(p.y)) +
         "\" r=\"3\" fill=\"#1f6fb2\"/>\n";
    s += "<text x=\"" + format_g17(box.px(p.x) + 6) + "\" y=\"" + format_g17(box.py(p.y) - 6) +
         "\" font-family=\"monospace\" font-size=\"11\">" + p.label + "</text>\n";
  }
  append_annotations(s, annotations);
  s += "</svg>\n";
  write_file(path, s);
}

void write_manifest(const std::string& path, const std::string& study,
                    const std::vector<std::pair<std::string, std::string>>& resolved_config,
                    const std::vector<ManifestEntry>& outputs,
                    const std::vector<ManifestCheck>& checks, double wall_clock_seconds) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["toolkit_version"] = "0.1.0";
  j["study"] = study;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : resolved_config) cfg[k] = v;
  j["config"] = cfg;
  nlohmann::ordered_json outs = nlohmann::ordered_json::array();
  for (const auto& o : outputs) outs.push_back({{"file", o.file}, {"rows", o.rows}});
  j["outputs"] = outs;
  nlohmann::ordered_json chks = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& c : checks) {
    chks.push_back({{"name", c.name}, {"pass", c.pass}});
    all = all && c.pass;
  }
  j["checks"] = chks;
  j["pass"] = all;
  j["wall_clock_seconds"] = wall_clock_seconds;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace cli
