#pragma once

// Bounded cochain complexes of modules, chain maps and homotopies, cones and
// certified exact triangles: the homotopy category K(A) made computable.
//
// Signs: d on shift(X, k) is (-1)^k d_X; the cone of f: X -> Y has
// C^n = X^{n+1} + Y^n with differential [[-d_X, 0], [f, d_Y]]; the Hom
// complex differential is D(f) = d f - (-1)^n f d; a homotopy h from phi to
// psi satisfies phi - psi = d h + h d.

#include "homlab/modcat.hpp"

#include <map>
#include <optional>
#include <random>
#include <vector>

namespace homlab {

class ComplexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Complex {
 public:
  Complex() = default;

  const AlgPtr& algebra() const { return data_->alg; }
  std::uint32_t prime() const { return data_->alg->prime(); }
  int lo() const { return data_->lo; }
  /// Last degree of the support (lo - 1 when empty).
  int hi() const { return data_->lo + static_cast<int>(data_->objects.size()) - 1; }
  int length() const { return static_cast<int>(data_->objects.size()); }
  bool in_support(int n) const { return n >= lo() && n <= hi(); }

  /// X^n; the zero module outside the support.
  const Module& object(int n) const;
  Index dim(int n) const { return object(n).dim(); }
  /// d^n: X^n -> X^{n+1}; a zero matrix outside the support.
  Mat diff(int n) const;
  bool is_zero() const;
  Index total_dim() const;

 private:
  friend Complex make_complex_unchecked(const AlgPtr&, int, std::vector<Module>, std::vector<Mat>);
  struct Data {
    AlgPtr alg;
    int lo = 0;
    std::vector<Module> objects;
    std::vector<Mat> diffs;  // diffs[k]: X^{lo+k} -> X^{lo+k+1}
    Module zero;
  };
  std::shared_ptr<const Data> data_;
};

/// diffs.size() must be objects.size() - 1; checks module maps and d d = 0.
Complex make_complex(const AlgPtr& alg, int lo, std::vector<Module> objects, std::vector<Mat> diffs);
Complex make_complex_unchecked(const AlgPtr& alg, int lo, std::vector<Module> objects, std::vector<Mat> diffs);
Complex zero_complex(const AlgPtr& alg);
Complex stalk(const Module& m, int degree);
/// Throws ComplexError naming the first bad degree.
void validate(const Complex& x);
bool same_complex(const Complex& a, const Complex& b);

/// Components X^n -> Y^{n + degree} for n over the support of src.
struct GradedMap {
  Complex src;
  Complex dst;
  int degree = 0;
  std::vector<Mat> comps;

  Mat at(int n) const;
};
using ChainMap = GradedMap;
using Homotopy = GradedMap;  // degree -1

GradedMap make_graded(const Complex& src, const Complex& dst, int degree, std::vector<Mat> comps);
ChainMap make_chain_map(const Complex& src, const Complex& dst, std::vector<Mat> comps);
ChainMap identity_chain(const Complex& x);
GradedMap zero_graded(const Complex& src, const Complex& dst, int degree = 0);
GradedMap compose(const GradedMap& g, const GradedMap& f);  // g after f, degrees add
GradedMap operator+(const GradedMap& a, const GradedMap& b);
GradedMap operator-(const GradedMap& a, const GradedMap& b);
GradedMap scaled(const GradedMap& a, std::int64_t s);
bool is_chain_map(const GradedMap& f);
bool same_map(const GradedMap& a, const GradedMap& b);
/// phi - psi == d h + h d, exactly.
bool verify_homotopy(const ChainMap& phi, const ChainMap& psi, const Homotopy& h);

struct CohomologyData {
  int degree = 0;
  Module module;
  Mat cycles;   // basis of Z^n, columns in X^n
  Mat proj;     // Z coordinates -> H coordinates
  Mat section;  // H coordinates -> Z coordinates
};
CohomologyData cohomology_at(const Complex& x, int n);
/// One entry per degree of the support.
std::vector<CohomologyData> cohomology(const Complex& x);
std::map<int, Index> cohomology_dims(const Complex& x);
/// H^n(f) in the bases of cohomology_at.
Mat induced_map(const ChainMap& f, int n);
bool is_quasi_iso(const ChainMap& f);

Complex shift(const Complex& x, int k);
/// Components of the shifted map; Sigma^k f has the same components as f.
GradedMap shift_map(const GradedMap& f, int k);

/// Unknowns are elements of Hom spaces given by bases; equations are
/// sum_t left_t * X_{var_t} * right_t + constant = 0.
class BlockSystem {
 public:
  explicit BlockSystem(std::uint32_t p) : p_(p) {}
  int add_var(std::vector<Mat> basis, Index rows, Index cols);
  /// Unknown Hom_A(a, b).
  int add_hom_var(const Module& a, const Module& b);
  struct Term {
    int var;
    Mat left;
    Mat right;
  };
  void add_equation(Index rows, Index cols, std::vector<Term> terms, const std::optional<Mat>& constant);

  /// Some solution, or nothing when inconsistent.
  std::optional<std::vector<Mat>> solve() const;
  /// Basis of the homogeneous solution space, in stacked coordinates.
  Mat kernel() const;
  std::vector<Mat> values(const Mat& coords) const;
  Index unknowns() const { return offset_; }

 private:
  struct Var {
    Index rows, cols;
    std::vector<Mat> basis;
    Index offset;
  };
  struct Eq {
    Index rows, cols;
    std::vector<Term> terms;
    std::optional<Mat> constant;
  };
  Mat assemble(Mat* rhs) const;
  std::uint32_t p_;
  Index offset_ = 0;
  std::vector<Var> vars_;
  std::vector<Eq> eqs_;
};

/// Homotopy h with phi - psi = d h + h d, or nothing (exact).
std::optional<Homotopy> null_homotopy(const ChainMap& phi, const ChainMap& psi);

struct Equivalence {
  ChainMap to;        // X -> Y
  ChainMap from;      // Y -> X
  Homotopy from_to;   // from o to ~ id_X
  Homotopy to_from;   // to o from ~ id_Y
};
bool verify_equivalence(const Equivalence& e);
/// g: P -> A with q g ~ t, for q: A -> B and t: P -> B; nothing when no such g exists.
std::optional<ChainMap> factor_through(const ChainMap& q, const ChainMap& t);

/// Homotopy inverse of f, when f is an isomorphism in K.
std::optional<Equivalence> homotopy_inverse(const ChainMap& f);

/// Degree-n part of Hom^*(X, Y) as coordinates over the ground field.
struct HomComplex {
  Complex x, y;
  Complex cx;  // over ground_field(p)
  struct Block {
    int i = 0;  // source degree
    std::vector<Mat> basis;
    Mat extract;  // vec(f^i) -> coordinates
    Index offset = 0;
  };
  std::map<int, std::vector<Block>> blocks;

  Mat coords(const GradedMap& f) const;
  GradedMap map(int degree, const Mat& coords) const;
  Index dim(int degree) const { return cx.dim(degree); }
};
HomComplex hom_complex(const Complex& x, const Complex& y);
/// dim Hom_K(X, Sigma^n Y).
Index khom_dim(const Complex& x, const Complex& y, int n = 0);

enum class TriangleCert { ByCone, IsoToCone };

struct Triangle {
  Complex x, y, z;
  ChainMap f, g, h;  // h: Z -> Sigma X
  TriangleCert cert = TriangleCert::ByCone;
  std::optional<Equivalence> to_cone;  // Z ~ cone(f), for IsoToCone
  std::vector<Homotopy> composites;    // g f ~ 0, h g ~ 0, (Sigma f) h ~ 0
};

/// Cone with its canonical triangle X -> Y -> C -> Sigma X.
Triangle cone(const ChainMap& f);
bool validate_triangle(const Triangle& t);
/// Cohomology sequence ... H^n X -> H^n Y -> H^n Z -> H^{n+1} X ... exact.
bool long_exact_sequence_holds(const Triangle& t);

/// Candidate triangle with unknown certificate; builds composite homotopies.
std::optional<Triangle> make_triangle(const ChainMap& f, const ChainMap& g, const ChainMap& h);
/// Certify a candidate against cone(f) via a fill-in of (id, id) that is a homotopy equivalence.
std::optional<Triangle> certify(const ChainMap& f, const ChainMap& g, const ChainMap& h);

/// phi3: Z -> Z' with phi3 g ~ g' phi2 and (Sigma phi1) h ~ h' phi3.
std::optional<ChainMap> fill_in(const Triangle& t, const Triangle& t2, const ChainMap& phi1, const ChainMap& phi2);
/// Two fill-ins of (id, id) on t that are not homotopic; exhaustive at p = 2
/// with at most 8 free parameters, refused (ComplexError) otherwise.
std::optional<std::pair<ChainMap, ChainMap>> fillin_ambiguity(const Triangle& t);

Triangle rotate(const Triangle& t);
Triangle sum_triangles(const std::vector<Triangle>& ts);

struct Octahedron {
  Triangle on_f, on_g, on_gf, comparison;  // comparison: C_f -> C_gf -> C_g -> Sigma C_f
  std::vector<Homotopy> squares;
};
Octahedron octahedron(const ChainMap& f, const ChainMap& g);
bool validate_octahedron(const Octahedron& o);

Complex direct_sum_complex(const AlgPtr& alg, const std::vector<Complex>& parts);
GradedMap direct_sum_graded(const std::vector<GradedMap>& parts, const Complex& src, const Complex& dst);

/// x is equivalent to sum_n Sigma^{-n} stalk(H^n x); requires a semisimple algebra.
struct SemisimpleSplit {
  Complex stalks;
  Equivalence equivalence;  // stalks -> x
};
SemisimpleSplit semisimple_split(const Complex& x);

/// Degreewise split 0 -> X -> Y -> Z -> 0: connecting map and triangle, certified against cone(i).
Triangle split_seq_to_triangle(const ChainMap& i, const ChainMap& p);

/// Smart truncation tau_{<= n}.
Complex truncate(const Complex& x, int n);

/// Random complex whose objects are sums of the blocks.
Complex random_complex(const AlgPtr& alg, const std::vector<Module>& blocks, int lo, int length, Index max_dim,
                       std::mt19937_64& rng);
/// Random element of the space of chain maps X -> Y.
ChainMap random_chain_map(const Complex& x, const Complex& y, std::mt19937_64& rng);

}  // namespace homlab
