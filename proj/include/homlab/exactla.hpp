#pragma once

// Exact dense linear algebra over prime fields F_p.
//
// Matrices store residues in an Eigen row-major array together with the
// modulus. All routines are exact and deterministic: pivots are taken as the
// first nonzero entry in column order.

#include <Eigen/Core>

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace homlab {

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Index = Eigen::Index;

bool is_prime(std::uint64_t n);

/// Largest modulus accepted. Keeps p*p*inner_dim inside int64 for products.
inline constexpr std::uint32_t kMaxModulus = (1u << 20);

inline std::uint32_t checked_modulus(std::uint32_t p) {
  if (p < 2 || p > kMaxModulus || !is_prime(p)) {
    throw LinalgError("modulus " + std::to_string(p) + " is not a supported prime");
  }
  return p;
}

inline std::int64_t mod_reduce(std::int64_t v, std::uint32_t p) {
  v %= static_cast<std::int64_t>(p);
  return v < 0 ? v + p : v;
}

inline std::int64_t mod_inverse(std::int64_t a, std::uint32_t p) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = p, new_r = mod_reduce(a, p);
  if (new_r == 0) throw LinalgError("inverse of zero");
  while (new_r != 0) {
    const std::int64_t q = r / new_r;
    t = t - q * new_t;
    std::swap(t, new_t);
    r = r - q * new_r;
    std::swap(r, new_r);
  }
  return mod_reduce(t, p);
}

/// An element of F_p.
class Fp {
 public:
  Fp(std::int64_t value, std::uint32_t modulus)
      : p_(checked_modulus(modulus)), v_(mod_reduce(value, p_)) {}

  std::int64_t residue() const { return v_; }
  std::uint32_t modulus() const { return p_; }

  Fp operator+(const Fp& o) const { return {v_ + same(o).v_, p_, Raw{}}; }
  Fp operator-(const Fp& o) const { return {v_ - same(o).v_, p_, Raw{}}; }
  Fp operator*(const Fp& o) const { return {v_ * same(o).v_, p_, Raw{}}; }
  Fp operator-() const { return {-v_, p_, Raw{}}; }
  Fp inverse() const { return {mod_inverse(v_, p_), p_, Raw{}}; }
  Fp operator/(const Fp& o) const { return *this * same(o).inverse(); }
  bool operator==(const Fp& o) const { return p_ == o.p_ && v_ == o.v_; }
  bool is_zero() const { return v_ == 0; }

 private:
  struct Raw {};
  Fp(std::int64_t value, std::uint32_t p, Raw) : p_(p), v_(mod_reduce(value, p)) {}
  const Fp& same(const Fp& o) const {
    if (o.p_ != p_) throw LinalgError("mixed moduli in Fp arithmetic");
    return o;
  }
  std::uint32_t p_;
  std::int64_t v_;
};

/// Dense matrix over F_p. Entries are kept reduced in [0, p).
template <typename Scalar>
class FpMatrix {
 public:
  using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  FpMatrix() : p_(2) {}
  FpMatrix(Index rows, Index cols, std::uint32_t p)
      : p_(checked_modulus(p)), data_(Storage::Zero(rows, cols)) {}

  static FpMatrix zero(Index rows, Index cols, std::uint32_t p) { return FpMatrix(rows, cols, p); }
  static FpMatrix identity(Index n, std::uint32_t p) {
    FpMatrix m(n, n, p);
    m.data_.setIdentity();
    return m;
  }
  /// Row-major literal; entries are reduced mod p.
  static FpMatrix from_rows(std::uint32_t p,
                            std::initializer_list<std::initializer_list<std::int64_t>> rows) {
    const Index r = static_cast<Index>(rows.size());
    const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
    FpMatrix m(r, c, p);
    Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Index>(row.size()) != c) throw LinalgError("ragged matrix literal");
      Index j = 0;
      for (auto v : row) m.data_(i, j++) = static_cast<Scalar>(mod_reduce(v, p));
      ++i;
    }
    return m;
  }
  static FpMatrix column(std::uint32_t p, const std::vector<std::int64_t>& entries) {
    FpMatrix m(static_cast<Index>(entries.size()), 1, p);
    for (std::size_t i = 0; i < entries.size(); ++i)
      m.data_(static_cast<Index>(i), 0) = static_cast<Scalar>(mod_reduce(entries[i], p));
    return m;
  }
  static FpMatrix unit_vector(Index n, Index k, std::uint32_t p) {
    FpMatrix m(n, 1, p);
    m.data_(k, 0) = 1;
    return m;
  }
  /// Wraps arbitrary integer storage, reducing every entry.
  template <typename Derived>
  static FpMatrix reduced(const Eigen::MatrixBase<Derived>& raw, std::uint32_t p) {
    FpMatrix m(raw.rows(), raw.cols(), p);
    for (Index i = 0; i < raw.rows(); ++i)
      for (Index j = 0; j < raw.cols(); ++j)
        m.data_(i, j) = static_cast<Scalar>(mod_reduce(static_cast<std::int64_t>(raw(i, j)), p));
    return m;
  }

  Index rows() const { return data_.rows(); }
  Index cols() const { return data_.cols(); }
  std::uint32_t modulus() const { return p_; }
  Scalar operator()(Index i, Index j) const { return data_(i, j); }
  void set(Index i, Index j, std::int64_t v) { data_(i, j) = static_cast<Scalar>(mod_reduce(v, p_)); }
  Fp at(Index i, Index j) const { return Fp(data_(i, j), p_); }
  const Storage& storage() const { return data_; }
  Storage& mutable_storage() { return data_; }

  bool is_zero() const { return data_.isZero(); }
  bool operator==(const FpMatrix& o) const {
    return p_ == o.p_ && rows() == o.rows() && cols() == o.cols() && data_ == o.data_;
  }
  bool operator!=(const FpMatrix& o) const { return !(*this == o); }

  FpMatrix operator+(const FpMatrix& o) const {
    check_same_shape(o, "+");
    return from_raw(data_ + o.data_);
  }
  FpMatrix operator-(const FpMatrix& o) const {
    check_same_shape(o, "-");
    return from_raw(data_ - o.data_);
  }
  FpMatrix operator-() const { return from_raw(-data_); }
  FpMatrix operator*(const FpMatrix& o) const {
    if (o.p_ != p_) throw LinalgError("modulus mismatch in product");
    if (cols() != o.rows()) throw LinalgError("shape mismatch in product");
    if (rows() == 0 || o.cols() == 0 || cols() == 0) return FpMatrix(rows(), o.cols(), p_);
    return from_raw(data_ * o.data_);
  }
  FpMatrix scaled(std::int64_t s) const { return from_raw(data_ * static_cast<Scalar>(mod_reduce(s, p_))); }
  FpMatrix& operator+=(const FpMatrix& o) { return *this = *this + o; }
  FpMatrix& operator-=(const FpMatrix& o) { return *this = *this - o; }

  FpMatrix transpose() const {
    FpMatrix m(cols(), rows(), p_);
    m.data_ = data_.transpose();
    return m;
  }
  FpMatrix block(Index r, Index c, Index h, Index w) const {
    FpMatrix m(h, w, p_);
    if (h > 0 && w > 0) m.data_ = data_.block(r, c, h, w);
    return m;
  }
  void set_block(Index r, Index c, const FpMatrix& b) {
    if (b.rows() > 0 && b.cols() > 0) data_.block(r, c, b.rows(), b.cols()) = b.data_;
  }
  FpMatrix col(Index j) const { return block(0, j, rows(), 1); }
  FpMatrix row(Index i) const { return block(i, 0, 1, cols()); }

  /// Row-major flattening to a column vector.
  FpMatrix vectorized() const {
    FpMatrix v(rows() * cols(), 1, p_);
    for (Index i = 0; i < rows(); ++i)
      for (Index j = 0; j < cols(); ++j) v.data_(i * cols() + j, 0) = data_(i, j);
    return v;
  }
  static FpMatrix unvectorized(const FpMatrix& v, Index rows, Index cols) {
    FpMatrix m(rows, cols, v.modulus());
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m.data_(i, j) = v.data_(i * cols + j, 0);
    return m;
  }

 private:
  template <typename Expr>
  FpMatrix from_raw(const Expr& e) const {
    FpMatrix m;
    m.p_ = p_;
    m.data_ = e;
    const auto p = static_cast<Scalar>(p_);
    for (Index i = 0; i < m.data_.size(); ++i) {
      Scalar& x = m.data_.data()[i];
      x %= p;
      if (x < 0) x += p;
    }
    return m;
  }
  void check_same_shape(const FpMatrix& o, const char* op) const {
    if (o.p_ != p_ || o.rows() != rows() || o.cols() != cols())
      throw LinalgError(std::string("operand mismatch in ") + op);
  }

  std::uint32_t p_;
  Storage data_;
};

using Mat = FpMatrix<std::int64_t>;

template <typename Scalar>
std::ostream& operator<<(std::ostream& os, const FpMatrix<Scalar>& m) {
  os << "[";
  for (Index i = 0; i < m.rows(); ++i) {
    os << (i ? "; " : "");
    for (Index j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
  }
  return os << "] (mod " << m.modulus() << ")";
}

template <typename Scalar>
struct RrefResult {
  FpMatrix<Scalar> reduced;
  std::vector<Index> pivots;
  Index rank() const { return static_cast<Index>(pivots.size()); }
};

template <typename Scalar>
RrefResult<Scalar> rref(const FpMatrix<Scalar>& m) {
  RrefResult<Scalar> out{m, {}};
  auto& a = out.reduced.mutable_storage();
  const std::int64_t p = m.modulus();
  const Index rows = a.rows(), cols = a.cols();
  std::vector<Index> nz;
  Index r = 0;
  for (Index c = 0; c < cols && r < rows; ++c) {
    Index piv = -1;
    for (Index i = r; i < rows; ++i)
      if (a(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) a.row(piv).swap(a.row(r));
    const std::int64_t inv = mod_inverse(a(r, c), m.modulus());
    nz.clear();
    for (Index j = c; j < cols; ++j) {
      if (a(r, j) != 0) {
        a(r, j) = static_cast<Scalar>((a(r, j) * inv) % p);
        nz.push_back(j);
      }
    }
    for (Index i = 0; i < rows; ++i) {
      if (i == r) continue;
      const std::int64_t f = a(i, c);
      if (f == 0) continue;
      const std::int64_t g = p - f;
      for (Index j : nz) a(i, j) = static_cast<Scalar>((a(i, j) + g * a(r, j)) % p);
    }
    out.pivots.push_back(c);
    ++r;
  }
  return out;
}

template <typename Scalar>
Index rank(const FpMatrix<Scalar>& m) {
  return rref(m).rank();
}

/// Columns form a basis of the right null space.
template <typename Scalar>
FpMatrix<Scalar> kernel_basis(const FpMatrix<Scalar>& m) {
  const auto rr = rref(m);
  const Index n = m.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
  for (Index c : rr.pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  FpMatrix<Scalar> k(n, n - rr.rank(), m.modulus());
  Index col = 0;
  for (Index f = 0; f < n; ++f) {
    if (is_pivot[static_cast<std::size_t>(f)]) continue;
    k.set(f, col, 1);
    for (Index r = 0; r < rr.rank(); ++r) k.set(rr.pivots[static_cast<std::size_t>(r)], col, -rr.reduced(r, f));
    ++col;
  }
  return k;
}

/// Returns some X with a*X = b, or nothing when the system is inconsistent.
template <typename Scalar>
std::optional<FpMatrix<Scalar>> solve(const FpMatrix<Scalar>& a, const FpMatrix<Scalar>& b) {
  if (a.rows() != b.rows() || a.modulus() != b.modulus())
    throw LinalgError("solve: a has " + std::to_string(a.rows()) + " rows but b has " +
                      std::to_string(b.rows()));
  FpMatrix<Scalar> aug(a.rows(), a.cols() + b.cols(), a.modulus());
  aug.set_block(0, 0, a);
  aug.set_block(0, a.cols(), b);
  const auto rr = rref(aug);
  FpMatrix<Scalar> x(a.cols(), b.cols(), a.modulus());
  for (Index r = 0; r < rr.rank(); ++r) {
    const Index c = rr.pivots[static_cast<std::size_t>(r)];
    if (c >= a.cols()) return std::nullopt;
    for (Index j = 0; j < b.cols(); ++j) x.set(c, j, rr.reduced(r, a.cols() + j));
  }
  if (a * x != b) throw LinalgError("solve: internal verification failed");
  return x;
}

/// Original columns of m at its pivot positions; a basis of the column space.
template <typename Scalar>
FpMatrix<Scalar> column_basis(const FpMatrix<Scalar>& m) {
  const auto rr = rref(m);
  FpMatrix<Scalar> out(m.rows(), rr.rank(), m.modulus());
  for (Index k = 0; k < rr.rank(); ++k) out.set_block(0, k, m.col(rr.pivots[static_cast<std::size_t>(k)]));
  return out;
}

/// Reduced basis of the column space (canonical for a given subspace).
template <typename Scalar>
FpMatrix<Scalar> canonical_span(const FpMatrix<Scalar>& m) {
  const auto rr = rref(m.transpose());
  return rr.reduced.block(0, 0, rr.rank(), m.rows()).transpose();
}

template <typename Scalar>
FpMatrix<Scalar> hstack(const std::vector<FpMatrix<Scalar>>& parts, Index rows, std::uint32_t p) {
  Index cols = 0;
  for (const auto& m : parts) {
    if (m.rows() != rows) throw LinalgError("hstack: row mismatch");
    cols += m.cols();
  }
  FpMatrix<Scalar> out(rows, cols, p);
  Index c = 0;
  for (const auto& m : parts) {
    out.set_block(0, c, m);
    c += m.cols();
  }
  return out;
}

template <typename Scalar>
FpMatrix<Scalar> vstack(const std::vector<FpMatrix<Scalar>>& parts, Index cols, std::uint32_t p) {
  Index rows = 0;
  for (const auto& m : parts) {
    if (m.cols() != cols) throw LinalgError("vstack: column mismatch");
    rows += m.rows();
  }
  FpMatrix<Scalar> out(rows, cols, p);
  Index r = 0;
  for (const auto& m : parts) {
    out.set_block(r, 0, m);
    r += m.rows();
  }
  return out;
}

template <typename Scalar>
std::optional<FpMatrix<Scalar>> inverse(const FpMatrix<Scalar>& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const Index n = m.rows();
  FpMatrix<Scalar> aug(n, 2 * n, m.modulus());
  aug.set_block(0, 0, m);
  aug.set_block(0, n, FpMatrix<Scalar>::identity(n, m.modulus()));
  const auto rr = rref(aug);
  if (rr.rank() < n || (n > 0 && rr.pivots[static_cast<std::size_t>(n - 1)] >= n)) return std::nullopt;
  return rr.reduced.block(0, n, n, n);
}

/// Extends the independent columns of `basis` to an invertible matrix by
/// appending standard basis vectors.
template <typename Scalar>
FpMatrix<Scalar> complete_basis(const FpMatrix<Scalar>& basis) {
  const Index n = basis.rows();
  const auto rr = rref(basis.transpose());
  if (rr.rank() != basis.cols()) throw LinalgError("complete_basis: columns are dependent");
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (Index c : rr.pivots) used[static_cast<std::size_t>(c)] = true;
  FpMatrix<Scalar> out(n, n, basis.modulus());
  out.set_block(0, 0, basis);
  Index k = basis.cols();
  for (Index i = 0; i < n; ++i)
    if (!used[static_cast<std::size_t>(i)]) out.set(i, k++, 1);
  return out;
}

/// L with L*basis = identity, for a basis of full column rank.
template <typename Scalar>
FpMatrix<Scalar> left_inverse(const FpMatrix<Scalar>& basis) {
  if (basis.cols() == 0) return FpMatrix<Scalar>(0, basis.rows(), basis.modulus());
  const auto inv = inverse(complete_basis(basis));
  if (!inv) throw LinalgError("left_inverse: completion is singular");
  return inv->block(0, 0, basis.cols(), basis.rows());
}

/// Realizes F_p^n / span(sub): proj has kernel exactly span(sub) and
/// proj * section = identity.
template <typename Scalar>
struct QuotientStructure {
  FpMatrix<Scalar> proj;
  FpMatrix<Scalar> section;
  Index dim() const { return proj.rows(); }
};

template <typename Scalar>
QuotientStructure<Scalar> quotient_structure(Index ambient_dim, const FpMatrix<Scalar>& sub) {
  if (sub.rows() != ambient_dim) throw LinalgError("quotient_structure: sub has wrong row count");
  const auto span = column_basis(sub);
  const auto full = complete_basis(span);
  const auto inv = inverse(full);
  const Index r = span.cols(), q = ambient_dim - r;
  return {inv->block(r, 0, q, ambient_dim), full.block(0, r, ambient_dim, q)};
}

/// True when every column of `vectors` lies in the column span of `span`.
template <typename Scalar>
bool in_span(const FpMatrix<Scalar>& span, const FpMatrix<Scalar>& vectors) {
  if (vectors.cols() == 0) return true;
  if (span.cols() == 0) return vectors.is_zero();
  return rank(hstack<Scalar>({span, vectors}, span.rows(), span.modulus())) == rank(span);
}

}  // namespace homlab
