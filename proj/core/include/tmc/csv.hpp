#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Core>

namespace tmc::csv {

/// Headerless CSV of decimal floats, one row per line, comma separated.
/// Every row must have the same number of columns. Errors carry
/// "path:line" context.
Eigen::MatrixXd read_matrix(const std::filesystem::path& path);

/// One integer per line.
Eigen::VectorXi read_int_column(const std::filesystem::path& path);

/// Written with shortest round-trip formatting, so save/load is bit-exact.
void write_matrix(const std::filesystem::path& path, const Eigen::Ref<const Eigen::MatrixXd>& m);

void write_int_column(const std::filesystem::path& path,
                      const Eigen::Ref<const Eigen::VectorXi>& v);

/// Shortest round-trip decimal form of a double ("nan" for quiet NaN).
std::string format_double(double value);

}  // namespace tmc::csv
