#pragma once

#include "wgd/matrix_core.hpp"

#include <json.hpp>

#include <string>

namespace wgd {

// Matrix files are either JSON ({"m": 2, "rows": [[..], [..]]} or a bare
// array of rows) or CSV with one row per line. A non-square shape is
// DimensionMismatch; anything else unreadable is InvalidInput.
Matrix read_matrix_file(const std::string& path);
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Matrix& a);
Matrix parse_csv_matrix(const std::string& text);

}  // namespace wgd
