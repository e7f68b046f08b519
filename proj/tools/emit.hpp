#pragma once

#include <string>
#include <vector>

namespace cli {

std::string format_g17(double v);

// CSV with a fixed header; rows are preformatted cells. Returns the row count.
class CsvWriter {
 public:
  CsvWriter(std::string path, std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);
  // writes the file; returns the number of data rows
  int flush();
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
  int cls = 0;  // color class
  std::string label;
};

struct PlotLine {
  std::vector<PlotPoint> points;
  std::string color = "#444444";
  bool dashed = false;
};

// Self-contained SVG scatter with optional overlay curves. All numeric text in
// the plot is passed in preformatted (it must come from emitted CSV data).
void write_scatter_svg(const std::string& path, const std::string& title,
                       const std::vector<PlotPoint>& points, const std::vector<PlotLine>& lines,
                       const std::vector<std::string>& annotations);

void write_staircase_svg(const std::string& path, const std::string& title,
                         const std::vector<PlotPoint>& steps,
                         const std::vector<std::string>& annotations);

struct ManifestEntry {
  std::string file;
  int rows = 0;
};

struct ManifestCheck {
  std::string name;
  bool pass = false;
};

void write_manifest(const std::string& path, const std::string& study,
                    const std::vector<std::pair<std::string, std::string>>& resolved_config,
                    const std::vector<ManifestEntry>& outputs,
                    const std::vector<ManifestCheck>& checks, double wall_clock_seconds);

}  // namespace cli
