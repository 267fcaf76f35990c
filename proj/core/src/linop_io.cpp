#include "ergolab/linop_io.hpp"

#include <fstream>

namespace ergolab {

namespace {

using nlohmann::json;

std::vector<double> number_array(const json& j, const char* key, std::size_t expected) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw Error(Errc::ParseError, std::string("missing numeric array '") + key + "'");
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw Error(Errc::ParseError, std::string("non-numeric entry in '") + key + "'");
    out.push_back(v.get<double>());
  }
  if (out.size() != expected)
    throw Error(Errc::ParseError, std::string("'") + key + "' has " + std::to_string(out.size()) +
                                      " entries, expected " + std::to_string(expected));
  return out;
}

long long positive_count(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw Error(Errc::ParseError, std::string("missing integer '") + key + "'");
  const long long v = j.at(key).get<long long>();
  if (v < 1) throw Error(Errc::BadDimension, std::string("'") + key + "' must be >= 1");
  return v;
}

ComplexMatrix assemble(long long rows, long long cols, const std::vector<double>& re,
                       const std::vector<double>& im) {
  ComplexMatrix a(rows, cols);
  for (long long i = 0; i < rows; ++i)
    for (long long k = 0; k < cols; ++k) {
      const auto idx = static_cast<std::size_t>(i * cols + k);
      a(i, k) = Complex(re[idx], im.empty() ? 0.0 : im[idx]);
    }
  return a;
}

}  // namespace

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "matrix must be a JSON object");
  const long long rows = positive_count(j, "rows");
  const long long cols = positive_count(j, "cols");
  const auto n = static_cast<std::size_t>(rows * cols);
  const auto re = number_array(j, "re", n);
  const auto im = j.contains("im") ? number_array(j, "im", n) : std::vector<double>{};
  ComplexMatrix a = assemble(rows, cols, re, im);
  if (!all_finite(a)) throw Error(Errc::NonFinite, "matrix has non-finite entries");
  return a;
}

json matrix_to_json(const ComplexMatrix& a) {
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < a.rows(); ++i)
    for (Index k = 0; k < a.cols(); ++k) {
      re.push_back(a(i, k).real());
      im.push_back(a(i, k).imag());
    }
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"re", re}, {"im", im}};
}

GramGeometry gram_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "gram must be a JSON object");
  const long long dim = positive_count(j, "dim");
  if (j.contains("diag")) {
    const auto w = number_array(j, "diag", static_cast<std::size_t>(dim));
    return GramGeometry::diagonal(Eigen::Map<const Eigen::VectorXd>(w.data(), dim));
  }
  const auto n = static_cast<std::size_t>(dim * dim);
  const auto re = number_array(j, "gram_re", n);
  const auto im = j.contains("gram_im") ? number_array(j, "gram_im", n) : std::vector<double>{};
  return GramGeometry::dense(assemble(dim, dim, re, im));
}

json gram_to_json(const GramGeometry& g) {
  if (g.is_diagonal()) {
    json diag = json::array();
    for (Index i = 0; i < g.dim(); ++i) diag.push_back(g.weights()(i));
    return json{{"dim", g.dim()}, {"diag", diag}};
  }
  const ComplexMatrix gram = g.gram();
  json re = json::array();
  json im = json::array();
  for (Index i = 0; i < gram.rows(); ++i)
    for (Index k = 0; k < gram.cols(); ++k) {
      re.push_back(gram(i, k).real());
      im.push_back(gram(i, k).imag());
    }
  return json{{"dim", g.dim()}, {"gram_re", re}, {"gram_im", im}};
}

OperatorModel operator_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::ParseError, "operator must be a JSON object");
  if (!j.contains("matrix")) return make_operator(matrix_from_json(j), std::nullopt, "file");
  std::optional<GramGeometry> geometry;
  if (j.contains("geometry") && !j.at("geometry").is_null()) geometry = gram_from_json(j.at("geometry"));
  std::string label = j.value("label", std::string("file"));
  return make_operator(matrix_from_json(j.at("matrix")), std::move(geometry), std::move(label));
}

json operator_to_json(const OperatorModel& t) {
  json out{{"matrix", matrix_to_json(t.matrix)}, {"label", t.label}};
  if (t.geometry) out["geometry"] = gram_to_json(*t.geometry);
  return out;
}

OperatorModel load_operator_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw Error(Errc::ParseError, path.string() + ": " + e.what());
  }
  return operator_from_json(j);
}

void save_operator_file(const std::filesystem::path& path, const OperatorModel& t) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << operator_to_json(t).dump(2) << '\n';
  if (!out) throw Error(Errc::IoError, "write failed for " + path.string());
}

}  // namespace ergolab
