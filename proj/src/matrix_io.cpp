#include "wgd/matrix_io.hpp"

#include "wgd/error.hpp"

#include <fstream>
#include <sstream>

namespace wgd {

Matrix matrix_from_json(const nlohmann::json& j) {
  const nlohmann::json* rows = &j;
  if (j.is_object()) {
    if (!j.contains("rows")) fail(ErrorKind::InvalidInput, "matrix object needs a \"rows\" field");
    rows = &j.at("rows");
  }
  if (!rows->is_array() || rows->empty()) fail(ErrorKind::InvalidInput, "matrix rows must be a non-empty array");
  auto m = static_cast<Eigen::Index>(rows->size());
  if (j.is_object() && j.contains("m") && j.at("m").get<long>() != m)
    fail(ErrorKind::DimensionMismatch, "declared m does not match the number of rows");
  Matrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& row = (*rows)[i];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m)
      fail(ErrorKind::DimensionMismatch, "matrix must be square");
    for (Eigen::Index k = 0; k < m; ++k) {
      if (!row[k].is_number()) fail(ErrorKind::InvalidInput, "matrix entries must be numbers");
      a(i, k) = row[k].get<double>();
    }
  }
  return a;
}

nlohmann::json matrix_to_json(const Matrix& a) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index k = 0; k < a.cols(); ++k) row.push_back(a(i, k));
    rows.push_back(row);
  }
  return {{"m", a.rows()}, {"rows", rows}};
}

Matrix parse_csv_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        fail(ErrorKind::InvalidInput, "bad CSV cell '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) fail(ErrorKind::InvalidInput, "empty CSV matrix");
  auto m = static_cast<Eigen::Index>(rows.size());
  Matrix a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    if (static_cast<Eigen::Index>(rows[i].size()) != m) fail(ErrorKind::DimensionMismatch, "matrix must be square");
    for (Eigen::Index k = 0; k < m; ++k) a(i, k) = rows[i][k];
  }
  return a;
}

Matrix read_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text[first] == '{' || text[first] == '[')) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::InvalidInput, path + ": " + e.what());
    }
    return matrix_from_json(j);
  }
  return parse_csv_matrix(text);
}

}  // namespace wgd
