// Deterministic CSV output and minimal SVG line plots.

#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

namespace rotphc {

/// Scientific notation with 17 significant digits ("%.16e").
std::string format_double(double v);

/// Comma-separated file with `#`-prefixed metadata lines, then one header
/// row, then data rows. Throws std::runtime_error if the file cannot be
/// opened or a row has the wrong width.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  /// Mixed row: text cells are written verbatim (must not contain commas).
  void row(const std::vector<std::string>& cells);

 private:
  std::ofstream out_;
  std::size_t width_ = 0;
};

struct PlotSeries {
  std::vector<double> x, y;
  std::string colour = "black";
  bool dashed = false;
};

/// Static line plot. NaN samples break the polyline.
void write_svg_plot(const std::filesystem::path& path, const std::string& title, const std::string& xlabel,
                    const std::string& ylabel, const std::vector<PlotSeries>& series, bool log_x = false);

}  // namespace rotphc
