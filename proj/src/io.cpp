#include "homlab/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>

namespace homlab {

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const Json& j, std::uint32_t p) {
  if (!j.is_array()) throw IoError("matrix must be a list of rows");
  const auto r = static_cast<Index>(j.size());
  const Index c = r == 0 ? 0 : static_cast<Index>(j.front().size());
  Mat m(r, c, p);
  for (Index i = 0; i < r; ++i) {
    const Json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != c) throw IoError("ragged matrix");
    for (Index k = 0; k < c; ++k) m.set(i, k, row[static_cast<std::size_t>(k)].get<std::int64_t>());
  }
  return m;
}

namespace {

Json vector_to_json(const Mat& col) {
  Json v = Json::array();
  for (Index i = 0; i < col.rows(); ++i) v.push_back(col(i, 0));
  return v;
}

std::vector<std::int64_t> int_list(const Json& j, const char* what) {
  if (!j.is_array()) throw IoError(std::string(what) + " must be a list of integers");
  return j.get<std::vector<std::int64_t>>();
}

}  // namespace

Json algebra_to_json(const Algebra& a) {
  Json j;
  j["name"] = a.name();
  j["prime"] = a.prime();
  j["dim"] = a.dim();
  j["labels"] = a.labels();
  Json sc = Json::array();
  for (int i = 0; i < a.dim(); ++i)
    for (int k = 0; k < a.dim(); ++k)
      for (int l = 0; l < a.dim(); ++l) {
        const auto c = a.constant(i, k, l);
        if (c == 0) continue;
        sc.push_back(c == 1 ? Json::array({i, k, l}) : Json::array({i, k, l, c}));
      }
  j["structconst"] = std::move(sc);
  j["unit"] = vector_to_json(a.unit());
  j["idempotents"] = Json::array();
  for (const Mat& e : a.idempotents()) j["idempotents"].push_back(vector_to_json(e));
  j["radical"] = Json::array();
  for (Index c = 0; c < a.radical().cols(); ++c) j["radical"].push_back(vector_to_json(a.radical().col(c)));
  j["finite_global_dimension"] = a.finite_global_dimension();
  return j;
}

AlgPtr algebra_from_json(const Json& j, std::uint32_t prime) {
  try {
    AlgebraSpec s;
    s.prime = j.contains("prime") ? j.at("prime").get<std::uint32_t>() : prime;
    s.dim = j.at("dim").get<int>();
    if (s.dim <= 0) throw IoError("dim must be positive");
    s.name = j.value("name", std::string("custom"));
    if (j.contains("labels")) {
      s.labels = j.at("labels").get<std::vector<std::string>>();
    } else {
      for (int i = 0; i < s.dim; ++i) s.labels.push_back("b" + std::to_string(i));
    }
    s.structconst.assign(static_cast<std::size_t>(s.dim) * s.dim * s.dim, 0);
    for (const Json& t : j.at("structconst")) {
      const auto v = int_list(t, "structconst entry");
      if (v.size() != 3 && v.size() != 4) throw IoError("structconst entries are [i, j, k] or [i, j, k, c]");
      for (std::size_t q = 0; q < 3; ++q)
        if (v[q] < 0 || v[q] >= s.dim) throw IoError("structconst index out of range");
      s.structconst[static_cast<std::size_t>((v[0] * s.dim + v[1]) * s.dim + v[2])] += v.size() == 4 ? v[3] : 1;
    }
    s.unit = int_list(j.at("unit"), "unit");
    for (const Json& e : j.at("idempotents")) s.idempotents.push_back(int_list(e, "idempotent"));
    for (const Json& r : j.at("radical")) s.radical.push_back(int_list(r, "radical vector"));
    s.finite_global_dimension = j.value("finite_global_dimension", false);
    return make_algebra(s);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed algebra JSON: ") + e.what());
  }
}

AlgPtr load_algebra(const std::string& name_or_path, std::uint32_t prime) {
  const auto names = preset_names();
  const bool is_preset = std::find(names.begin(), names.end(), name_or_path) != names.end() ||
                         name_or_path.rfind("truncpoly(", 0) == 0;
  if (is_preset) return preset(name_or_path, prime);
  std::ifstream in(name_or_path);
  if (!in) throw IoError("unknown algebra '" + name_or_path + "' (neither a preset nor a readable file)");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(name_or_path + ": " + e.what());
  }
  return algebra_from_json(j, prime);
}

Json module_to_json(const Module& m) {
  Json actions = Json::array();
  for (const Mat& a : m.actions()) actions.push_back(matrix_to_json(a));
  return Json{{"actions", std::move(actions)}};
}

Module module_from_json(const AlgPtr& alg, const Json& j) {
  if (j.contains("ref")) {
    const std::string ref = j.at("ref").get<std::string>();
    if (ref == "regular") return regular(alg);
    if (ref == "zero") return zero_module(alg);
    if (ref.size() >= 2 && (ref[0] == 'P' || ref[0] == 'S' || ref[0] == 'I')) {
      int idx = 0;
      try {
        idx = std::stoi(ref.substr(1)) - 1;
      } catch (const std::exception&) {
        throw IoError("bad module reference '" + ref + "'");
      }
      if (idx < 0 || idx >= alg->num_idempotents()) throw IoError("module reference out of range: " + ref);
      return ref[0] == 'P' ? proj(alg, idx) : ref[0] == 'S' ? simple(alg, idx) : injective(alg, idx);
    }
    throw IoError("bad module reference '" + ref + "'");
  }
  if (!j.contains("actions")) throw IoError("module needs 'ref' or 'actions'");
  std::vector<Mat> actions;
  for (const Json& a : j.at("actions")) actions.push_back(matrix_from_json(a, alg->prime()));
  if (static_cast<int>(actions.size()) != alg->dim()) throw IoError("one action matrix per basis element required");
  return make_module(alg, std::move(actions));
}

Json complex_to_json(const Complex& x) {
  Json j;
  j["lo"] = x.lo();
  j["objects"] = Json::array();
  j["diffs"] = Json::array();
  for (int n = x.lo(); n <= x.hi(); ++n) {
    j["objects"].push_back(module_to_json(x.object(n)));
    if (n < x.hi()) j["diffs"].push_back(matrix_to_json(x.diff(n)));
  }
  return j;
}

Complex complex_from_json(const AlgPtr& alg, const Json& j) {
  try {
    std::vector<Module> objects;
    for (const Json& o : j.at("objects")) objects.push_back(module_from_json(alg, o));
    std::vector<Mat> diffs;
    for (const Json& d : j.value("diffs", Json::array())) diffs.push_back(matrix_from_json(d, alg->prime()));
    // Empty differentials may be written as [] regardless of shape.
    for (std::size_t k = 0; k < diffs.size() && k + 1 < objects.size(); ++k)
      if (diffs[k].rows() == 0) diffs[k] = Mat(objects[k + 1].dim(), objects[k].dim(), alg->prime());
    return make_complex(alg, j.at("lo").get<int>(), std::move(objects), std::move(diffs));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed complex JSON: ") + e.what());
  }
}

std::string quiver_to_dot(const Quiver& q, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph \"" << graph_name << "\" {\n";
  os << "  rankdir=LR;\n";
  for (std::size_t i = 0; i < q.vertices.size(); ++i)
    os << "  n" << i << " [label=\"" << q.vertices[i].label << " (" << q.vertices[i].dim << ")\"];\n";
  auto arrows = q.arrows;
  std::sort(arrows.begin(), arrows.end(),
            [](const QuiverArrow& a, const QuiverArrow& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  for (const auto& a : arrows)
    for (int m = 0; m < a.multiplicity; ++m) os << "  n" << a.from << " -> n" << a.to << ";\n";
  os << "}\n";
  return os.str();
}

Json quiver_to_json(const Quiver& q, const std::string& algebra, std::uint32_t prime) {
  Json j;
  j["algebra"] = algebra;
  j["prime"] = prime;
  j["vertices"] = Json::array();
  for (const auto& v : q.vertices) j["vertices"].push_back({{"name", v.label}, {"dim", v.dim}, {"dim_vector", v.dim_vector}});
  auto arrows = q.arrows;
  std::sort(arrows.begin(), arrows.end(),
            [](const QuiverArrow& a, const QuiverArrow& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  j["arrows"] = Json::array();
  for (const auto& a : arrows)
    j["arrows"].push_back({{"from", q.vertices[static_cast<std::size_t>(a.from)].label},
                           {"to", q.vertices[static_cast<std::size_t>(a.to)].label},
                           {"multiplicity", a.multiplicity}});
  return j;
}

Json table_to_json(const std::string& algebra, std::uint32_t prime, const std::vector<TableRow>& rows) {
  Json j;
  j["algebra"] = algebra;
  j["prime"] = prime;
  j["rows"] = Json::array();
  for (const auto& r : rows) j["rows"].push_back({{"src", r.src}, {"dst", r.dst}, {"degree", r.degree}, {"dim", r.dim}});
  return j;
}

}  // namespace homlab
