#pragma once

#include <string>
#include <vector>

#include "stratapath/arrangements.hpp"
#include "stratapath/oracle.hpp"
#include "stratapath/pathforge_types.hpp"
#include "stratapath/types.hpp"

#include <json.hpp>

namespace stratapath {

/// Matrix schema: {"field": "R"|"C", "structure": "general"|"sym"|"skew",
/// "rows": m, "cols": n, "entries": [[..row..], ..]}, complex entries as
/// [re, im] pairs.
nlohmann::ordered_json matrix_to_json(const MatrixPoint& p);
MatrixPoint matrix_from_json(const nlohmann::json& j);

MatrixPoint load_matrix(const std::string& path);
void save_matrix(const MatrixPoint& p, const std::string& path);

/// Arrangement schema: [{"base": [..], "directions": [[..], ..]}, ..],
/// directions given as rows of the orthonormal frame.
Arrangement arrangement_from_json(const nlohmann::json& j);
nlohmann::ordered_json arrangement_to_json(const Arrangement& arr);
Arrangement load_arrangement(const std::string& path);

/// Path samples: CSV, one flattened (row-major, re/im interleaved for
/// complex) point per row, with a leading t column.
void write_samples_csv(const PiecewisePath& path, int per_segment,
                       const std::string& out);

/// Path sidecar: {"segments": [{"kind", "length"}, ..], "total_length",
/// "certificate"} describing an exported path.
nlohmann::ordered_json path_to_json(const PiecewisePath& path);
void write_path_sidecar(const PiecewisePath& path, const std::string& out);

/// Cloud export: CSV, one flattened point per row.
void write_cloud_csv(const PointCloud& cloud, const std::string& out);
/// Graph export: edge-list CSV (u, v, weight).
void write_graph_csv(const GeodesicGraph& g, const std::string& out);

Field parse_field(const std::string& s);
Structure parse_structure(const std::string& s);
std::string field_token(Field f);
std::string structure_token(Structure s);

}  // namespace stratapath
