#include "gaussalign/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "gaussalign/errors.hpp"
#include "gaussalign/spectral.hpp"

namespace gaussalign {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

Gaussian read_gaussian_json(const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& err) {
    throw InvalidInputError(path + ": " + err.what());
  }
  if (!doc.is_object() || !doc.contains("mean") || !doc.contains("cov")) {
    throw InvalidInputError(path + ": expected an object with \"mean\" and \"cov\"");
  }

  const json& jmean = doc["mean"];
  const json& jcov = doc["cov"];
  if (!jmean.is_array() || !jcov.is_array()) {
    throw InvalidInputError(path + ": \"mean\" and \"cov\" must be arrays");
  }
  const int d = static_cast<int>(jmean.size());
  if (d == 0 || static_cast<int>(jcov.size()) != d) {
    throw InvalidInputError(path + ": covariance row count does not match mean length");
  }

  Eigen::VectorXd mean(d);
  for (int i = 0; i < d; ++i) {
    if (!jmean[i].is_number()) throw InvalidInputError(path + ": non-numeric mean entry");
    mean(i) = jmean[i].get<double>();
  }
  Eigen::MatrixXd cov(d, d);
  for (int i = 0; i < d; ++i) {
    if (!jcov[i].is_array() || static_cast<int>(jcov[i].size()) != d) {
      std::ostringstream msg;
      msg << path << ": covariance row " << i << " is not an array of length " << d;
      throw InvalidInputError(msg.str());
    }
    for (int j = 0; j < d; ++j) {
      if (!jcov[i][j].is_number()) {
        throw InvalidInputError(path + ": non-numeric covariance entry");
      }
      cov(i, j) = jcov[i][j].get<double>();
    }
  }

  const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
  const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-9 * scale) {
    std::ostringstream msg;
    msg << path << ": covariance asymmetry " << asym << " exceeds tolerance";
    throw InvalidInputError(msg.str());
  }
  return make_gaussian(std::move(mean), symmetrize(cov));
}

std::string gaussian_to_json(const Gaussian& g) {
  json doc;
  doc["mean"] = json::array();
  for (int i = 0; i < g.dim(); ++i) doc["mean"].push_back(g.mean(i));
  doc["cov"] = json::array();
  for (int i = 0; i < g.dim(); ++i) {
    json row = json::array();
    for (int j = 0; j < g.dim(); ++j) row.push_back(g.cov(i, j));
    doc["cov"].push_back(row);
  }
  return doc.dump();
}

void write_gaussian_json(const std::string& path, const Gaussian& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write file: " + path);
  out << gaussian_to_json(g) << "\n";
}

Eigen::MatrixXd read_csv_matrix(const std::string& path, bool skip_header) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skip_header && line_no == 1) continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<double> row;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) comma = line.size();
      const char* first = line.data() + start;
      const char* last = line.data() + comma;
      while (first < last && (*first == ' ' || *first == '\t')) ++first;
      while (last > first && (*(last - 1) == ' ' || *(last - 1) == '\t')) --last;
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec != std::errc() || ptr != last) {
        std::ostringstream msg;
        msg << path << ":" << line_no << ": cannot parse number \""
            << std::string(first, last) << "\"";
        throw InvalidInputError(msg.str());
      }
      row.push_back(value);
      start = comma + 1;
      if (comma == line.size()) break;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      std::ostringstream msg;
      msg << path << ":" << line_no << ": expected " << rows.front().size()
          << " columns, got " << row.size();
      throw InvalidInputError(msg.str());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw EmptyInputError(path + ": no data rows");

  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.front().size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInputError("cannot write file: " + path);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      char buf[32];
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), m(i, j));
      out.write(buf, ptr - buf);
      if (j + 1 < m.cols()) out.put(',');
    }
    out.put('\n');
  }
}

std::string file_digest(const std::string& path) {
  const std::string bytes = read_file(path);
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return std::string("fnv1a:") + buf;
}

}  // namespace gaussalign
