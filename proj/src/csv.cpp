#include "wedreg/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace wedreg {

std::string format_number(double value, int precision) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value,
                                 std::chars_format::general, precision);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

void CsvBuilder::separator() {
  if (row_open_) text_ += ',';
  row_open_ = true;
}

CsvBuilder& CsvBuilder::header(const std::vector<std::string>& names) {
  for (const auto& name : names) cell(std::string_view(name));
  return end_row();
}

CsvBuilder& CsvBuilder::cell(double value) {
  separator();
  text_ += format_number(value, precision_);
  return *this;
}

CsvBuilder& CsvBuilder::cell(int value) {
  separator();
  text_ += std::to_string(value);
  return *this;
}

CsvBuilder& CsvBuilder::cell(std::string_view text) {
  separator();
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    text_ += text;
    return *this;
  }
  text_ += '"';
  for (char c : text) {
    if (c == '"') text_ += '"';
    text_ += c;
  }
  text_ += '"';
  return *this;
}

CsvBuilder& CsvBuilder::end_row() {
  text_ += '\n';
  row_open_ = false;
  return *this;
}

namespace {

std::vector<std::string> state_header(const SpatialDomain& domain,
                                      int precision) {
  std::vector<std::string> names{"t"};
  if (domain.is_scalar()) {
    names.emplace_back("u");
  } else {
    for (int j = 0; j < domain.dofs(); ++j) {
      names.push_back(format_number(domain.node(j), precision));
    }
  }
  return names;
}

}  // namespace

std::string trajectory_csv(const Trajectory& traj, int precision) {
  CsvBuilder csv(precision);
  csv.header(state_header(traj.domain, precision));
  for (int i = 0; i <= traj.steps(); ++i) {
    csv.cell(traj.grid.time(i));
    for (Eigen::Index j = 0; j < traj.states.rows(); ++j) {
      csv.cell(traj.states(j, i));
    }
    csv.end_row();
  }
  return csv.str();
}

std::string sampled_csv(const SpatialDomain& domain, double spacing,
                        const Eigen::MatrixXd& samples, int precision) {
  CsvBuilder csv(precision);
  csv.header(state_header(domain, precision));
  for (Eigen::Index k = 0; k < samples.cols(); ++k) {
    csv.cell(static_cast<double>(k) * spacing);
    for (Eigen::Index j = 0; j < samples.rows(); ++j) csv.cell(samples(j, k));
    csv.end_row();
  }
  return csv.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace wedreg
