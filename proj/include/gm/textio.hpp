#pragma once

#include <string>
#include <Eigen/Dense>

namespace gm {

// Shortest decimal form that round-trips the exact double (std::to_chars).
std::string format_double(double value);

// Fixed 17-significant-digit form used by matrix export.
std::string format_double17(double value);

std::string read_file(const std::string& path);

// Writes to a sibling temp file, then renames over the target, so readers
// never observe a partial file.
void atomic_write_file(const std::string& path, const std::string& content);

// Row-major, space-separated plain text, 17 significant digits per entry.
void save_matrix_text(const Eigen::MatrixXd& m, const std::string& path);
Eigen::MatrixXd load_matrix_text(const std::string& path);

}  // namespace gm
