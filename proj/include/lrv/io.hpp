#pragma once

#include <istream>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lrv::io {

/// One value per line or whitespace/comma separated; a leading non-numeric header such as
/// `value` and `#` comment lines are skipped.
std::vector<double> read_series(std::istream& in);
std::vector<double> read_series_file(const std::string& path);

/// S rows of S comma-separated numbers.
Eigen::MatrixXd read_matrix_csv(std::istream& in);
Eigen::MatrixXd read_matrix_csv_file(const std::string& path);

}  // namespace lrv::io
