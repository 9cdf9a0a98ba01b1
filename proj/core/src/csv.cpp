#include "specgraph/csv.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "specgraph/errors.hpp"

namespace specgraph {

namespace {

std::string trim(const std::string& s) {
  std::size_t lo = 0;
  std::size_t hi = s.size();
  while (lo < hi && std::isspace(static_cast<unsigned char>(s[lo]))) ++lo;
  while (hi > lo && std::isspace(static_cast<unsigned char>(s[hi - 1]))) --hi;
  return s.substr(lo, hi - lo);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream stream(line);
  while (std::getline(stream, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

bool is_missing(const std::string& cell) {
  if (cell.empty()) return true;
  std::string lower(cell.size(), '\0');
  std::transform(cell.begin(), cell.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return lower == "na" || lower == "nan" || lower == "null";
}

double parse_cell(const std::string& cell, const std::string& where) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw InputError("cli", "non-numeric cell \"" + cell + "\" at " + where);
  }
  return value;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

}  // namespace

TimeSeriesPanel ingest_csv(const std::vector<std::filesystem::path>& paths,
                           std::vector<std::string>* column_names) {
  if (paths.empty()) throw InputError("cli", "no input CSV files given");

  TimeSeriesPanel panel;
  std::vector<std::string> header;
  for (const auto& path : paths) {
    std::ifstream in(path);
    if (!in) throw InputError("cli", "cannot open " + path.string());

    std::string line;
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (trim(line).empty()) continue;
      rows.push_back(split_row(line));
    }
    if (rows.size() < 2) {
      throw InputError("cli", path.string() + ": need a header row and at "
                                              "least one data row");
    }

    const std::vector<std::string>& file_header = rows.front();
    if (header.empty()) {
      header = file_header;
    } else if (header != file_header) {
      throw InputError("cli", path.string() +
                                  ": header does not match the first file");
    }
    const int p = static_cast<int>(header.size());
    const int T = static_cast<int>(rows.size()) - 1;

    Eigen::MatrixXd series(T, p);
    for (int t = 0; t < T; ++t) {
      const auto& cells = rows[static_cast<std::size_t>(t) + 1];
      if (static_cast<int>(cells.size()) != p) {
        throw InputError("cli", path.string() + ": row " +
                                    std::to_string(t + 2) + " has " +
                                    std::to_string(cells.size()) +
                                    " cells, expected " + std::to_string(p));
      }
      for (int c = 0; c < p; ++c) {
        const std::string where = path.string() + ": row " +
                                  std::to_string(t + 2) + ", column " +
                                  header[static_cast<std::size_t>(c)];
        if (is_missing(cells[static_cast<std::size_t>(c)])) {
          if (t == 0) {
            throw InputError("cli", "leading missing value at " + where);
          }
          series(t, c) = series(t - 1, c);  // backfill
        } else {
          series(t, c) = parse_cell(cells[static_cast<std::size_t>(c)], where);
        }
      }
    }
    if (!panel.replicates.empty() && series.rows() != panel.series_length()) {
      throw InputError("cli", path.string() + ": has " +
                                  std::to_string(series.rows()) +
                                  " rows but earlier replicates have " +
                                  std::to_string(panel.series_length()));
    }
    panel.replicates.push_back(std::move(series));
  }
  panel.mean_centered = false;
  panel.validate();
  if (column_names != nullptr) *column_names = header;
  return panel;
}

void write_panel_csv(const std::filesystem::path& path,
                     const Eigen::MatrixXd& series,
                     const std::vector<std::string>& column_names) {
  if (static_cast<int>(column_names.size()) != series.cols()) {
    throw InputError("cli", "column name count does not match series width");
  }
  std::ofstream out(path);
  if (!out) throw InputError("cli", "cannot write " + path.string());
  for (std::size_t c = 0; c < column_names.size(); ++c) {
    if (c > 0) out << ',';
    out << column_names[c];
  }
  out << '\n';
  for (Eigen::Index t = 0; t < series.rows(); ++t) {
    for (Eigen::Index c = 0; c < series.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(series(t, c));
    }
    out << '\n';
  }
  if (!out) throw InputError("cli", "failed while writing " + path.string());
}

void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& matrix) {
  std::ofstream out(path);
  if (!out) throw InputError("cli", "cannot write " + path.string());
  for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
    for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
      if (c > 0) out << ',';
      out << format_double(matrix(r, c));
    }
    out << '\n';
  }
  if (!out) throw InputError("cli", "failed while writing " + path.string());
}

TimeSeriesPanel log_return_transform(const TimeSeriesPanel& panel) {
  panel.validate();
  if (panel.series_length() < 2) {
    throw InputError("cli", "log returns need at least two timepoints");
  }
  TimeSeriesPanel out;
  out.replicates.reserve(panel.replicates.size());
  for (std::size_t n = 0; n < panel.replicates.size(); ++n) {
    const Eigen::MatrixXd& prices = panel.replicates[n];
    Eigen::MatrixXd returns(prices.rows() - 1, prices.cols());
    for (Eigen::Index t = 0; t < prices.rows(); ++t) {
      for (Eigen::Index c = 0; c < prices.cols(); ++c) {
        if (!(prices(t, c) > 0.0)) {
          throw InputError(
              "cli", "nonpositive price in replicate " + std::to_string(n) +
                         " at row " + std::to_string(t) + ", column " +
                         std::to_string(c) + "; log returns are undefined");
        }
        if (t > 0) {
          returns(t - 1, c) = 100.0 * std::log(prices(t, c) / prices(t - 1, c));
        }
      }
    }
    out.replicates.push_back(std::move(returns));
  }
  out.mean_centered = false;
  return out;
}

}  // namespace specgraph
