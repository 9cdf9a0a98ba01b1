#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "specgraph/spectral.hpp"

namespace specgraph {

/// One CSV per replicate: a shared header row of column names, then one row
/// per timepoint. Missing cells (empty, "NA", "NaN", "null") are backfilled
/// from the previous timepoint; a missing value in the first row is an
/// input error.
TimeSeriesPanel ingest_csv(const std::vector<std::filesystem::path>& paths,
                           std::vector<std::string>* column_names = nullptr);

void write_panel_csv(const std::filesystem::path& path,
                     const Eigen::MatrixXd& series,
                     const std::vector<std::string>& column_names);

/// Plain matrix: comma-separated rows, no header.
void write_matrix_csv(const std::filesystem::path& path,
                      const Eigen::MatrixXd& matrix);

/// r_t = 100 * log(p_t / p_{t-1}) per dimension; output replicates are one
/// row shorter. Requires strictly positive inputs.
TimeSeriesPanel log_return_transform(const TimeSeriesPanel& panel);

}  // namespace specgraph
