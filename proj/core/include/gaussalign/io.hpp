#pragma once

#include <Eigen/Dense>
#include <string>

#include "gaussalign/gaussian.hpp"

namespace gaussalign {

/// Read a Gaussian from JSON {"mean": [...], "cov": [[...], ...]} (row
/// major). Symmetry is verified within 1e-9 of the largest entry, then the
/// covariance is symmetrized. Errors carry the file path.
Gaussian read_gaussian_json(const std::string& path);

/// Serialize a Gaussian to the JSON schema above; doubles round-trip exactly.
std::string gaussian_to_json(const Gaussian& g);
void write_gaussian_json(const std::string& path, const Gaussian& g);

/// Read a rectangular numeric CSV (comma separated, one row per line).
/// Errors carry file and line. `skip_header` drops the first line.
Eigen::MatrixXd read_csv_matrix(const std::string& path, bool skip_header = false);

/// Headerless comma-separated output with exact double round trip.
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m);

/// FNV-1a 64-bit digest of a file's bytes, as "fnv1a:<hex>".
std::string file_digest(const std::string& path);

}  // namespace gaussalign
