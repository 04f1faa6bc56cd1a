#pragma once

// Finite-dimensional associative unital algebras given by structure
// constants, with designated primitive idempotents and a radical basis.

#include "homlab/exactla.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace homlab {

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raw description handed to make_algebra.
struct AlgebraSpec {
  std::uint32_t prime = 101;
  int dim = 0;
  std::vector<std::string> labels;
  /// c[(i*dim + j)*dim + k]: coefficient of b_k in b_i*b_j.
  std::vector<std::int64_t> structconst;
  std::vector<std::int64_t> unit;
  std::vector<std::vector<std::int64_t>> idempotents;
  /// Columns spanning the Jacobson radical (coordinate vectors).
  std::vector<std::vector<std::int64_t>> radical;
  std::string name;
  /// Preset algebras record this; it upgrades resolution cap exhaustion to an error.
  bool finite_global_dimension = false;
};

class Algebra;
using AlgPtr = std::shared_ptr<const Algebra>;

/// Validated algebra. Construct through make_algebra or preset.
class Algebra {
 public:
  std::uint32_t prime() const { return p_; }
  int dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& name() const { return name_; }
  bool finite_global_dimension() const { return finite_gldim_; }
  std::int64_t constant(int i, int j, int k) const {
    return c_[static_cast<std::size_t>((i * dim_ + j) * dim_ + k)];
  }

  const Mat& unit() const { return unit_; }
  const std::vector<Mat>& idempotents() const { return idempotents_; }
  int num_idempotents() const { return static_cast<int>(idempotents_.size()); }
  /// dim x r matrix whose columns are a basis of the radical.
  const Mat& radical() const { return radical_; }
  /// Smallest k with rad^k = 0.
  int loewy_length() const { return loewy_length_; }

  Mat basis_vector(int i) const { return Mat::unit_vector(dim_, i, p_); }
  Mat multiply(const Mat& x, const Mat& y) const;
  /// Matrix of y -> x*y.
  Mat left_multiplication(const Mat& x) const;
  /// Matrix of y -> y*x.
  Mat right_multiplication(const Mat& x) const;
  /// Basis of span{u*v : u in span(a), v in span(b)}.
  Mat product_span(const Mat& a, const Mat& b) const;
  /// Basis of e_i * A * e_j.
  Mat corner(int i, int j) const;
  /// Basis of e_i * X * e_j for a subspace X.
  Mat corner_of(const Mat& space, int i, int j) const;
  /// Basis of rad^k (rad^0 = A).
  Mat radical_power(int k) const;

  /// Algebra elements generating A together with the idempotents: lifts of a
  /// basis of rad/rad^2 chosen inside the Peirce corners.
  const std::vector<Mat>& radical_generators() const { return rad_generators_; }
  /// Corner (i, j) of each radical generator.
  const std::vector<std::pair<int, int>>& generator_corners() const { return gen_corners_; }

  bool is_semisimple() const { return radical_.cols() == 0; }

 private:
  friend AlgPtr make_algebra(const AlgebraSpec&);
  Algebra() = default;

  std::uint32_t p_ = 2;
  int dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<std::int64_t> c_;
  Mat unit_;
  std::vector<Mat> idempotents_;
  Mat radical_;
  std::string name_;
  bool finite_gldim_ = false;
  int loewy_length_ = 1;
  std::vector<Mat> left_mult_;  // left multiplication by basis vectors
  std::vector<Mat> rad_generators_;
  std::vector<std::pair<int, int>> gen_corners_;
};

/// Validates every algebra invariant exhaustively over the basis and throws
/// AlgebraError naming a witness on failure.
AlgPtr make_algebra(const AlgebraSpec& spec);

/// Presets: "lambda1", "lambda2", "lambda3", "truncpoly(n)", "ground_field".
AlgPtr preset(const std::string& name, std::uint32_t p);
AlgPtr truncpoly(int n, std::uint32_t p);
AlgPtr ground_field(std::uint32_t p);
std::vector<std::string> preset_names();

AlgPtr opposite(const AlgPtr& a);

/// Same prime, dimension, structure constants, unit, idempotents and radical span.
bool same_algebra(const Algebra& a, const Algebra& b);

AlgebraSpec spec_of(const Algebra& a);

struct AlgIso {
  Mat forward;   // dim x dim, a -> b
  Mat backward;  // b -> a
};

/// True when m preserves the unit and all basis products.
bool is_algebra_map(const Algebra& src, const Algebra& dst, const Mat& m);

/// Sound search for an algebra isomorphism; complete on the basic presets.
std::optional<AlgIso> algebra_iso_search(const Algebra& a, const Algebra& b);

}  // namespace homlab
