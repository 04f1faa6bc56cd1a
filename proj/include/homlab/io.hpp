#pragma once

// JSON and DOT serialization: algebras, modules, complexes, quivers and tables.
//
// Algebra JSON: {name, prime, dim, labels, structconst, unit, idempotents,
// radical[, finite_global_dimension]} where structconst lists the nonzero
// products as [i, j, k] (coefficient 1) or [i, j, k, c], meaning b_i b_j has
// coefficient c at b_k. Modules are {"ref": "P1" | "S1" | "I1" | "regular"}
// or {"actions": [matrix per basis element]}; complexes are
// {lo, objects: [module], diffs: [matrix]}. Matrices are lists of rows.

#include "homlab/complexes.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace homlab {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json matrix_to_json(const Mat& m);
Mat matrix_from_json(const Json& j, std::uint32_t p);

Json algebra_to_json(const Algebra& a);
/// `prime` is used when the document has none.
AlgPtr algebra_from_json(const Json& j, std::uint32_t prime);
/// A preset name, or a path to an algebra JSON file.
AlgPtr load_algebra(const std::string& name_or_path, std::uint32_t prime);

Json module_to_json(const Module& m);
Module module_from_json(const AlgPtr& alg, const Json& j);
Json complex_to_json(const Complex& x);
Complex complex_from_json(const AlgPtr& alg, const Json& j);

/// One node per vertex labelled "name (dim)", one edge per unit of multiplicity.
std::string quiver_to_dot(const Quiver& q, const std::string& graph_name);
Json quiver_to_json(const Quiver& q, const std::string& algebra, std::uint32_t prime);

struct TableRow {
  std::string src;
  std::string dst;
  int degree = 0;
  Index dim = 0;
};
Json table_to_json(const std::string& algebra, std::uint32_t prime, const std::vector<TableRow>& rows);

}  // namespace homlab
