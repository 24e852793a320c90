#include <fstream>
#include <sstream>

#include "stratapath/io.hpp"
#include "stratapath/pathforge.hpp"

namespace stratapath {

namespace {

nlohmann::ordered_json entry_to_json(const Complex& z, Field field) {
  if (field == Field::Real) return z.real();
  return nlohmann::ordered_json::array({z.real(), z.imag()});
}

Complex entry_from_json(const nlohmann::json& j) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2) {
    return Complex(j[0].get<double>(), j[1].get<double>());
  }
  throw InputError("matrix entry must be a number or an [re, im] pair");
}

}  // namespace

Field parse_field(const std::string& s) {
  if (s == "R" || s == "r" || s == "real") return Field::Real;
  if (s == "C" || s == "c" || s == "complex") return Field::Complex;
  throw InputError("unknown field '" + s + "' (expected R or C)");
}

Structure parse_structure(const std::string& s) {
  if (s == "general") return Structure::General;
  if (s == "sym" || s == "symmetric") return Structure::Symmetric;
  if (s == "skew" || s == "skew-symmetric") return Structure::Skew;
  throw InputError("unknown structure '" + s +
                   "' (expected general, sym or skew)");
}

std::string field_token(Field f) { return f == Field::Real ? "R" : "C"; }

std::string structure_token(Structure s) {
  switch (s) {
    case Structure::General: return "general";
    case Structure::Symmetric: return "sym";
    case Structure::Skew: return "skew";
  }
  return "general";
}

nlohmann::ordered_json matrix_to_json(const MatrixPoint& p) {
  nlohmann::ordered_json j;
  j["field"] = field_token(p.field());
  j["structure"] = structure_token(p.structure());
  j["rows"] = p.rows();
  j["cols"] = p.cols();
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (int i = 0; i < p.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (int k = 0; k < p.cols(); ++k) {
      row.push_back(entry_to_json(p.entries()(i, k), p.field()));
    }
    rows.push_back(std::move(row));
  }
  j["entries"] = std::move(rows);
  return j;
}

MatrixPoint matrix_from_json(const nlohmann::json& j) {
  for (const char* key : {"field", "structure", "rows", "cols", "entries"}) {
    if (!j.contains(key)) {
      throw InputError(std::string("matrix JSON: missing key '") + key + "'");
    }
  }
  const Field field = parse_field(j["field"].get<std::string>());
  const Structure structure =
      parse_structure(j["structure"].get<std::string>());
  const int m = j["rows"].get<int>();
  const int n = j["cols"].get<int>();
  if (m <= 0 || n <= 0) throw InputError("matrix JSON: non-positive shape");
  const auto& rows = j["entries"];
  if (!rows.is_array() || static_cast<int>(rows.size()) != m) {
    throw InputError("matrix JSON: entries must hold 'rows' rows");
  }
  Matrix a(m, n);
  for (int i = 0; i < m; ++i) {
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n) {
      throw InputError("matrix JSON: row " + std::to_string(i) +
                       " must hold 'cols' entries");
    }
    for (int k = 0; k < n; ++k) a(i, k) = entry_from_json(rows[i][k]);
  }
  return MatrixPoint(std::move(a), field, structure);
}

MatrixPoint load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open matrix file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("matrix file '" + path + "': " + e.what());
  }
  return matrix_from_json(j);
}

void save_matrix(const MatrixPoint& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write matrix file '" + path + "'");
  out << matrix_to_json(p).dump(2) << "\n";
}

Arrangement arrangement_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) {
    throw InputError("arrangement JSON: expected a non-empty list");
  }
  Arrangement arr;
  for (const auto& item : j) {
    if (!item.contains("base") || !item.contains("directions")) {
      throw InputError("arrangement JSON: each entry needs base+directions");
    }
    AffineSubspace l;
    const auto& base = item["base"];
    l.base = RealVector(base.size());
    for (size_t i = 0; i < base.size(); ++i) l.base(i) = base[i].get<double>();
    const auto& dirs = item["directions"];
    if (!dirs.is_array() || dirs.empty()) {
      throw InputError("arrangement JSON: directions must be a row list");
    }
    l.directions = RealMatrix(l.base.size(), dirs.size());
    for (size_t c = 0; c < dirs.size(); ++c) {
      if (static_cast<Eigen::Index>(dirs[c].size()) != l.base.size()) {
        throw InputError("arrangement JSON: direction length mismatch");
      }
      for (size_t i = 0; i < dirs[c].size(); ++i) {
        l.directions(i, c) = dirs[c][i].get<double>();
      }
    }
    l.validate();
    arr.subspaces.push_back(std::move(l));
  }
  return arr;
}

nlohmann::ordered_json arrangement_to_json(const Arrangement& arr) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& l : arr.subspaces) {
    nlohmann::ordered_json item;
    nlohmann::ordered_json base = nlohmann::ordered_json::array();
    for (int i = 0; i < l.base.size(); ++i) base.push_back(l.base(i));
    item["base"] = std::move(base);
    nlohmann::ordered_json dirs = nlohmann::ordered_json::array();
    for (int c = 0; c < l.directions.cols(); ++c) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (int i = 0; i < l.directions.rows(); ++i) {
        row.push_back(l.directions(i, c));
      }
      dirs.push_back(std::move(row));
    }
    item["directions"] = std::move(dirs);
    j.push_back(std::move(item));
  }
  return j;
}

Arrangement load_arrangement(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open arrangement file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("arrangement file '" + path + "': " + e.what());
  }
  return arrangement_from_json(j);
}

namespace {

void write_point_row(std::ostream& out, const MatrixPoint& p) {
  const bool complex_field = p.field() == Field::Complex;
  for (int i = 0; i < p.rows(); ++i) {
    for (int k = 0; k < p.cols(); ++k) {
      if (i != 0 || k != 0) out << ",";
      const Complex z = p.entries()(i, k);
      if (complex_field) {
        out << z.real() << "," << z.imag();
      } else {
        out << z.real();
      }
    }
  }
}

}  // namespace

void write_samples_csv(const PiecewisePath& path, int per_segment,
                       const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot write samples file '" + out_path + "'");
  out.precision(17);
  const auto samples = sample_path(path, per_segment);
  const size_t total = samples.size();
  for (size_t i = 0; i < total; ++i) {
    out << (total > 1 ? static_cast<double>(i) / (total - 1) : 0.0) << ",";
    write_point_row(out, samples[i]);
    out << "\n";
  }
}

nlohmann::ordered_json path_to_json(const PiecewisePath& path) {
  nlohmann::ordered_json j;
  nlohmann::ordered_json segments = nlohmann::ordered_json::array();
  for (const auto& seg : path.segments) {
    nlohmann::ordered_json s;
    s["kind"] = seg->kind();
    s["length"] = seg->length();
    segments.push_back(std::move(s));
  }
  j["segments"] = std::move(segments);
  j["total_length"] = path.total_length();
  if (path.certificate) {
    const Certificate& c = *path.certificate;
    nlohmann::ordered_json cert;
    cert["space"] = structure_token(c.stratum.space);
    cert["field"] = field_token(c.stratum.field);
    cert["m"] = c.stratum.m;
    cert["n"] = c.stratum.n;
    cert["r"] = c.stratum.r;
    cert["mode"] = to_string(c.stratum.mode);
    cert["samples_per_segment"] = c.samples_per_segment;
    cert["max_offstratum_residual"] = c.max_offstratum_residual;
    cert["min_rank_floor"] = c.min_rank_floor;
    cert["max_structure_residual"] = c.max_structure_residual;
    cert["valid"] = c.valid;
    if (!c.failure.empty()) cert["failure"] = c.failure;
    j["certificate"] = std::move(cert);
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

void write_path_sidecar(const PiecewisePath& path, const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot write sidecar file '" + out_path + "'");
  out << path_to_json(path).dump(2) << "\n";
}

void write_cloud_csv(const PointCloud& cloud, const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot write cloud file '" + out_path + "'");
  out.precision(17);
  for (const auto& p : cloud.points) {
    write_point_row(out, p);
    out << "\n";
  }
}

void write_graph_csv(const GeodesicGraph& g, const std::string& out_path) {
  std::ofstream out(out_path);
  if (!out) throw InputError("cannot write graph file '" + out_path + "'");
  out.precision(17);
  for (const auto& e : g.edges) {
    out << e.u << "," << e.v << "," << e.w << "\n";
  }
}

}  // namespace stratapath
