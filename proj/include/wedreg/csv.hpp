#pragma once

// Locale-independent CSV emission. Numbers use the shortest general form
// with `precision` significant digits (std::to_chars), so output does not
// depend on the C locale or iostream state.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "wedreg/temporal.hpp"

namespace wedreg {

std::string format_number(double value, int precision);

class CsvBuilder {
 public:
  explicit CsvBuilder(int precision) : precision_(precision) {}

  CsvBuilder& header(const std::vector<std::string>& names);
  CsvBuilder& cell(double value);
  CsvBuilder& cell(int value);
  CsvBuilder& cell(std::string_view text);
  CsvBuilder& end_row();

  const std::string& str() const { return text_; }
  int precision() const { return precision_; }

 private:
  void separator();

  int precision_;
  bool row_open_ = false;
  std::string text_;
};

// Header "t,u" for the scalar domain and "t,<x_0>,...,<x_{m-1}>" otherwise;
// one row per time level.
std::string trajectory_csv(const Trajectory& traj, int precision);

// Same layout for a sampled path (times k * spacing).
std::string sampled_csv(const SpatialDomain& domain, double spacing,
                        const Eigen::MatrixXd& samples, int precision);

// Writes the whole file or throws std::runtime_error.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace wedreg
