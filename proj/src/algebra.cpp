#include "homlab/algebra.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace homlab {

namespace {

std::string witness(const char* what, std::initializer_list<int> idx) {
  std::ostringstream os;
  os << what << " (witness";
  for (int i : idx) os << " " << i;
  os << ")";
  return os.str();
}

Mat vector_from(const std::vector<std::int64_t>& v, int dim, std::uint32_t p, const char* what) {
  if (static_cast<int>(v.size()) != dim) throw AlgebraError(std::string(what) + ": wrong length");
  return Mat::column(p, v);
}

}  // namespace

Mat Algebra::left_multiplication(const Mat& x) const {
  Mat out(dim_, dim_, p_);
  for (int i = 0; i < dim_; ++i)
    if (x(i, 0) != 0) out += left_mult_[static_cast<std::size_t>(i)].scaled(x(i, 0));
  return out;
}

Mat Algebra::right_multiplication(const Mat& x) const {
  Mat out(dim_, dim_, p_);
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j) {
      if (x(j, 0) == 0) continue;
      for (int k = 0; k < dim_; ++k) {
        const auto c = constant(i, j, k);
        if (c != 0) out.set(k, i, out(k, i) + c * x(j, 0));
      }
    }
  return out;
}

Mat Algebra::multiply(const Mat& x, const Mat& y) const { return left_multiplication(x) * y; }

Mat Algebra::product_span(const Mat& a, const Mat& b) const {
  std::vector<Mat> cols;
  for (Index s = 0; s < a.cols(); ++s) {
    const Mat l = left_multiplication(a.col(s));
    for (Index t = 0; t < b.cols(); ++t) cols.push_back(l * b.col(t));
  }
  if (cols.empty()) return Mat(dim_, 0, p_);
  return canonical_span(hstack(cols, dim_, p_));
}

Mat Algebra::corner_of(const Mat& space, int i, int j) const {
  const Mat l = left_multiplication(idempotents_[static_cast<std::size_t>(i)]);
  const Mat r = right_multiplication(idempotents_[static_cast<std::size_t>(j)]);
  if (space.cols() == 0) return Mat(dim_, 0, p_);
  return canonical_span(l * r * space);
}

Mat Algebra::corner(int i, int j) const { return corner_of(Mat::identity(dim_, p_), i, j); }

Mat Algebra::radical_power(int k) const {
  Mat cur = Mat::identity(dim_, p_);
  for (int s = 0; s < k; ++s) cur = s == 0 ? canonical_span(radical_) : product_span(cur, radical_);
  return cur;
}

AlgPtr make_algebra(const AlgebraSpec& spec) {
  const std::uint32_t p = checked_modulus(spec.prime);
  const int n = spec.dim;
  if (n <= 0) throw AlgebraError("algebra dimension must be positive");
  if (spec.structconst.size() != static_cast<std::size_t>(n) * n * n)
    throw AlgebraError("structure constant table has wrong size");

  std::shared_ptr<Algebra> a(new Algebra());
  a->p_ = p;
  a->dim_ = n;
  a->name_ = spec.name;
  a->finite_gldim_ = spec.finite_global_dimension;
  a->labels_ = spec.labels;
  if (a->labels_.empty())
    for (int i = 0; i < n; ++i) a->labels_.push_back("b" + std::to_string(i));
  if (static_cast<int>(a->labels_.size()) != n) throw AlgebraError("label count differs from dimension");
  a->c_.resize(spec.structconst.size());
  for (std::size_t i = 0; i < spec.structconst.size(); ++i) a->c_[i] = mod_reduce(spec.structconst[i], p);

  for (int i = 0; i < n; ++i) {
    Mat l(n, n, p);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) l.set(k, j, a->constant(i, j, k));
    a->left_mult_.push_back(std::move(l));
  }

  // Associativity: L_{b_i b_j} = L_i L_j, compared column by column.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat lhs(n, n, p);
      for (int k = 0; k < n; ++k)
        if (a->constant(i, j, k) != 0) lhs += a->left_mult_[static_cast<std::size_t>(k)].scaled(a->constant(i, j, k));
      const Mat rhs = a->left_mult_[static_cast<std::size_t>(i)] * a->left_mult_[static_cast<std::size_t>(j)];
      for (int l = 0; l < n; ++l)
        if (lhs.col(l) != rhs.col(l)) throw AlgebraError(witness("structure constants are not associative", {i, j, l}));
    }

  a->unit_ = vector_from(spec.unit, n, p, "unit");
  for (int i = 0; i < n; ++i) {
    const Mat b = a->basis_vector(i);
    if (a->multiply(a->unit_, b) != b || a->multiply(b, a->unit_) != b)
      throw AlgebraError(witness("unit is not a two-sided identity", {i}));
  }

  if (spec.idempotents.empty()) throw AlgebraError("at least one idempotent is required");
  Mat sum(n, 1, p);
  for (const auto& e : spec.idempotents) a->idempotents_.push_back(vector_from(e, n, p, "idempotent"));
  const int m = a->num_idempotents();
  for (int i = 0; i < m; ++i) {
    const Mat& ei = a->idempotents_[static_cast<std::size_t>(i)];
    if (ei.is_zero()) throw AlgebraError(witness("idempotent is zero", {i}));
    sum += ei;
    for (int j = 0; j < m; ++j) {
      const Mat prod = a->multiply(ei, a->idempotents_[static_cast<std::size_t>(j)]);
      if (i == j && prod != ei) throw AlgebraError(witness("element is not idempotent", {i}));
      if (i != j && !prod.is_zero()) throw AlgebraError(witness("idempotents are not orthogonal", {i, j}));
    }
  }
  if (sum != a->unit_) throw AlgebraError("idempotents do not sum to the unit");

  Mat rad(n, static_cast<Index>(spec.radical.size()), p);
  for (std::size_t s = 0; s < spec.radical.size(); ++s)
    rad.set_block(0, static_cast<Index>(s), vector_from(spec.radical[s], n, p, "radical vector"));
  a->radical_ = canonical_span(rad);
  const Mat& r = a->radical_;
  for (int i = 0; i < n; ++i) {
    const Mat b = a->basis_vector(i);
    for (Index s = 0; s < r.cols(); ++s) {
      if (!in_span(r, a->multiply(b, r.col(s))) || !in_span(r, a->multiply(r.col(s), b)))
        throw AlgebraError(witness("radical is not a two-sided ideal", {i, static_cast<int>(s)}));
    }
  }
  {
    Mat power = r;
    int k = 1;
    while (power.cols() > 0) {
      if (k > n) throw AlgebraError("radical is not nilpotent");
      power = a->product_span(power, r);
      ++k;
    }
    a->loewy_length_ = r.cols() == 0 ? 1 : k;
  }

  // Semisimplicity of A/rad via the trace form of its regular representation.
  {
    const auto q = quotient_structure(static_cast<Index>(n), r);
    const Index qd = q.dim();
    std::vector<Mat> lbar;
    for (Index s = 0; s < qd; ++s) lbar.push_back(q.proj * a->left_multiplication(q.section.col(s)) * q.section);
    Mat gram(qd, qd, p);
    for (Index s = 0; s < qd; ++s)
      for (Index t = 0; t < qd; ++t) {
        const Mat prod = lbar[static_cast<std::size_t>(s)] * lbar[static_cast<std::size_t>(t)];
        std::int64_t tr = 0;
        for (Index d = 0; d < qd; ++d) tr += prod(d, d);
        gram.set(s, t, tr);
      }
    if (rank(gram) != qd) throw AlgebraError("radical quotient not semisimple (degenerate trace form)");
  }

  // Basic and split: every corner e_i A e_i is k plus radical, off-diagonal corners are radical.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Index full = a->corner(i, j).cols();
      const Index radc = a->corner_of(r, i, j).cols();
      if (full - radc != (i == j ? 1 : 0))
        throw AlgebraError(witness("idempotents are not primitive and pairwise non-conjugate (algebra not basic)", {i, j}));
    }

  const Mat r2 = a->product_span(r, r);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      Mat chosen = a->corner_of(r2, i, j);
      const Mat rc = a->corner_of(r, i, j);
      for (Index s = 0; s < rc.cols(); ++s) {
        const Mat v = rc.col(s);
        if (in_span(chosen, v)) continue;
        chosen = hstack<std::int64_t>({chosen, v}, n, p);
        a->rad_generators_.push_back(v);
        a->gen_corners_.emplace_back(i, j);
      }
    }
  return a;
}

namespace {

using UnitPair = std::pair<int, int>;

AlgebraSpec matrix_unit_spec(const std::string& name, const std::vector<UnitPair>& units, std::uint32_t p) {
  AlgebraSpec s;
  s.prime = p;
  s.name = name;
  s.dim = static_cast<int>(units.size());
  const int n = s.dim;
  s.structconst.assign(static_cast<std::size_t>(n) * n * n, 0);
  auto index_of = [&](int i, int j) {
    for (int k = 0; k < n; ++k)
      if (units[static_cast<std::size_t>(k)] == UnitPair{i, j}) return k;
    return -1;
  };
  int max_vertex = 0;
  for (int a = 0; a < n; ++a) {
    const auto [i, j] = units[static_cast<std::size_t>(a)];
    max_vertex = std::max({max_vertex, i, j});
    s.labels.push_back("E" + std::to_string(i) + std::to_string(j));
    for (int b = 0; b < n; ++b) {
      const auto [k, l] = units[static_cast<std::size_t>(b)];
      if (j != k) continue;
      const int c = index_of(i, l);
      if (c >= 0) s.structconst[static_cast<std::size_t>((a * n + b) * n + c)] = 1;
    }
  }
  s.unit.assign(static_cast<std::size_t>(n), 0);
  for (int v = 1; v <= max_vertex; ++v) {
    std::vector<std::int64_t> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(index_of(v, v))] = 1;
    s.unit[static_cast<std::size_t>(index_of(v, v))] = 1;
    s.idempotents.push_back(e);
  }
  for (int a = 0; a < n; ++a) {
    if (units[static_cast<std::size_t>(a)].first == units[static_cast<std::size_t>(a)].second) continue;
    std::vector<std::int64_t> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(a)] = 1;
    s.radical.push_back(e);
  }
  s.finite_global_dimension = true;
  return s;
}

}  // namespace

AlgPtr truncpoly(int n, std::uint32_t p) {
  if (n < 1) throw AlgebraError("truncpoly needs n >= 1");
  AlgebraSpec s;
  s.prime = p;
  s.name = "truncpoly(" + std::to_string(n) + ")";
  s.dim = n;
  s.structconst.assign(static_cast<std::size_t>(n) * n * n, 0);
  for (int i = 0; i < n; ++i) {
    s.labels.push_back(i == 0 ? "1" : i == 1 ? "T" : "T^" + std::to_string(i));
    for (int j = 0; i + j < n; ++j) s.structconst[static_cast<std::size_t>((i * n + j) * n + i + j)] = 1;
  }
  s.unit.assign(static_cast<std::size_t>(n), 0);
  s.unit[0] = 1;
  s.idempotents.push_back(s.unit);
  for (int i = 1; i < n; ++i) {
    std::vector<std::int64_t> e(static_cast<std::size_t>(n), 0);
    e[static_cast<std::size_t>(i)] = 1;
    s.radical.push_back(e);
  }
  s.finite_global_dimension = (n == 1);
  return make_algebra(s);
}

AlgPtr ground_field(std::uint32_t p) {
  AlgebraSpec s;
  s.prime = p;
  s.name = "ground_field";
  s.dim = 1;
  s.labels = {"1"};
  s.structconst = {1};
  s.unit = {1};
  s.idempotents = {{1}};
  s.finite_global_dimension = true;
  return make_algebra(s);
}

AlgPtr preset(const std::string& name, std::uint32_t p) {
  if (name == "lambda1")
    return make_algebra(matrix_unit_spec(name, {{1, 1}, {1, 2}, {1, 3}, {2, 2}, {2, 3}, {3, 3}}, p));
  if (name == "lambda2")
    return make_algebra(matrix_unit_spec(name, {{1, 1}, {1, 2}, {2, 2}, {3, 2}, {3, 3}}, p));
  if (name == "lambda3")
    return make_algebra(matrix_unit_spec(name, {{1, 1}, {1, 2}, {2, 2}, {2, 3}, {3, 3}}, p));
  if (name == "ground_field") return ground_field(p);
  const std::string prefix = "truncpoly(";
  if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size() + 1 && name.back() == ')') {
    const std::string digits = name.substr(prefix.size(), name.size() - prefix.size() - 1);
    if (!digits.empty() && std::all_of(digits.begin(), digits.end(), ::isdigit) && digits.size() < 4)
      return truncpoly(std::stoi(digits), p);
  }
  std::string known;
  for (const auto& k : preset_names()) known += " " + k;
  throw AlgebraError("unknown algebra preset '" + name + "'; known:" + known);
}

std::vector<std::string> preset_names() {
  return {"lambda1", "lambda2", "lambda3", "truncpoly(n)", "ground_field"};
}

AlgebraSpec spec_of(const Algebra& a) {
  AlgebraSpec s;
  s.prime = a.prime();
  s.dim = a.dim();
  s.labels = a.labels();
  s.name = a.name();
  s.finite_global_dimension = a.finite_global_dimension();
  const int n = a.dim();
  s.structconst.resize(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s.structconst[static_cast<std::size_t>((i * n + j) * n + k)] = a.constant(i, j, k);
  auto to_vec = [n](const Mat& v) {
    std::vector<std::int64_t> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = v(i, 0);
    return out;
  };
  s.unit = to_vec(a.unit());
  for (const auto& e : a.idempotents()) s.idempotents.push_back(to_vec(e));
  for (Index c = 0; c < a.radical().cols(); ++c) s.radical.push_back(to_vec(a.radical().col(c)));
  return s;
}

AlgPtr opposite(const AlgPtr& a) {
  AlgebraSpec s = spec_of(*a);
  const int n = a->dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) s.structconst[static_cast<std::size_t>((i * n + j) * n + k)] = a->constant(j, i, k);
  const std::string suffix = "^op";
  if (s.name.size() > suffix.size() && s.name.compare(s.name.size() - suffix.size(), suffix.size(), suffix) == 0)
    s.name.resize(s.name.size() - suffix.size());
  else
    s.name += suffix;
  return make_algebra(s);
}

bool same_algebra(const Algebra& a, const Algebra& b) {
  if (&a == &b) return true;
  if (a.prime() != b.prime() || a.dim() != b.dim() || a.num_idempotents() != b.num_idempotents()) return false;
  const int n = a.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (a.constant(i, j, k) != b.constant(i, j, k)) return false;
  if (a.unit() != b.unit() || a.radical() != b.radical()) return false;
  for (int i = 0; i < a.num_idempotents(); ++i)
    if (a.idempotents()[static_cast<std::size_t>(i)] != b.idempotents()[static_cast<std::size_t>(i)]) return false;
  return true;
}

bool is_algebra_map(const Algebra& src, const Algebra& dst, const Mat& m) {
  if (m.rows() != dst.dim() || m.cols() != src.dim()) return false;
  if (m * src.unit() != dst.unit()) return false;
  for (int i = 0; i < src.dim(); ++i)
    for (int j = 0; j < src.dim(); ++j) {
      const Mat lhs = m * src.multiply(src.basis_vector(i), src.basis_vector(j));
      const Mat rhs = dst.multiply(m * src.basis_vector(i), m * src.basis_vector(j));
      if (lhs != rhs) return false;
    }
  return true;
}

namespace {

std::vector<std::vector<Index>> corner_dims(const Algebra& a) {
  const int m = a.num_idempotents();
  std::vector<std::vector<Index>> d(static_cast<std::size_t>(m), std::vector<Index>(static_cast<std::size_t>(m)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a.corner(i, j).cols();
  return d;
}

std::vector<std::vector<int>> generator_counts(const Algebra& a) {
  const int m = a.num_idempotents();
  std::vector<std::vector<int>> g(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(m), 0));
  for (const auto& [i, j] : a.generator_corners()) ++g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return g;
}

// Tries one assignment of idempotents and generators; builds the induced
// linear map from products of generators and verifies it.
std::optional<AlgIso> try_assignment(const Algebra& a, const Algebra& b, const std::vector<int>& perm,
                                     const std::vector<Mat>& gen_images) {
  const std::uint32_t p = a.prime();
  const int n = a.dim();
  struct Word {
    Mat src, img;
  };
  std::vector<Word> frontier;
  for (int i = 0; i < a.num_idempotents(); ++i)
    frontier.push_back({a.idempotents()[static_cast<std::size_t>(i)],
                        b.idempotents()[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]});
  Mat span(n, 0, p), images(n, 0, p);
  auto take = [&](const Word& w) {
    if (in_span(span, w.src)) return false;
    span = hstack<std::int64_t>({span, w.src}, n, p);
    images = hstack<std::int64_t>({images, w.img}, n, p);
    return true;
  };
  std::vector<Word> next;
  for (int len = 0; len <= n && !frontier.empty(); ++len) {
    next.clear();
    for (const auto& w : frontier) {
      if (!take(w) && len > 0) continue;
      for (std::size_t g = 0; g < gen_images.size(); ++g) {
        const Mat s = a.multiply(w.src, a.radical_generators()[g]);
        if (s.is_zero()) continue;
        next.push_back({s, b.multiply(w.img, gen_images[g])});
      }
    }
    frontier.swap(next);
  }
  if (span.cols() != n) return std::nullopt;
  const auto span_inv = inverse(span);
  const Mat forward = images * *span_inv;
  const auto backward = inverse(forward);
  if (!backward) return std::nullopt;
  if (!is_algebra_map(a, b, forward) || !is_algebra_map(b, a, *backward)) return std::nullopt;
  return AlgIso{forward, *backward};
}

}  // namespace

std::optional<AlgIso> algebra_iso_search(const Algebra& a, const Algebra& b) {
  if (a.prime() != b.prime() || a.dim() != b.dim() || a.num_idempotents() != b.num_idempotents()) return std::nullopt;
  if (a.radical().cols() != b.radical().cols() ||
      a.radical_generators().size() != b.radical_generators().size())
    return std::nullopt;
  const int m = a.num_idempotents();
  const std::uint32_t p = a.prime();
  const auto da = corner_dims(a), db = corner_dims(b);
  const auto ga = generator_counts(a), gb = generator_counts(b);
  std::vector<int> perm(static_cast<std::size_t>(m));
  std::iota(perm.begin(), perm.end(), 0);
  constexpr long kBudget = 20000;
  long tries = 0;
  do {
    bool match = true;
    for (int i = 0; i < m && match; ++i)
      for (int j = 0; j < m && match; ++j) {
        const auto si = static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]);
        const auto sj = static_cast<std::size_t>(perm[static_cast<std::size_t>(j)]);
        match = da[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == db[si][sj] &&
                ga[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == gb[si][sj];
      }
    if (!match) continue;

    // Candidate images: nonzero combinations of b's generators in the matching
    // corner, scalar 1 on a single generator first.
    std::vector<std::vector<Mat>> candidates;
    for (std::size_t g = 0; g < a.radical_generators().size(); ++g) {
      const auto [i, j] = a.generator_corners()[g];
      const int ti = perm[static_cast<std::size_t>(i)], tj = perm[static_cast<std::size_t>(j)];
      std::vector<Mat> corner_gens;
      for (std::size_t h = 0; h < b.radical_generators().size(); ++h)
        if (b.generator_corners()[h] == std::pair<int, int>{ti, tj}) corner_gens.push_back(b.radical_generators()[h]);
      std::vector<Mat> cands = corner_gens;
      // Remaining combinations, enumerated while small.
      const std::size_t k = corner_gens.size();
      double count = 1;
      for (std::size_t s = 0; s < k; ++s) count *= p;
      if (count <= 512) {
        std::vector<std::int64_t> coeff(k, 0);
        for (long idx = 1; idx < static_cast<long>(count); ++idx) {
          long rest = idx;
          int nonzero = 0;
          Mat v(b.dim(), 1, p);
          for (std::size_t s = 0; s < k; ++s) {
            coeff[s] = rest % p;
            rest /= p;
            if (coeff[s]) ++nonzero;
            v += corner_gens[s].scaled(coeff[s]);
          }
          if (nonzero == 1 && std::count(coeff.begin(), coeff.end(), 1) == 1) continue;
          cands.push_back(v);
        }
      }
      if (cands.empty()) {
        match = false;
        break;
      }
      candidates.push_back(std::move(cands));
    }
    if (!match) continue;

    std::vector<std::size_t> choice(candidates.size(), 0);
    while (true) {
      if (++tries > kBudget) return std::nullopt;
      std::vector<Mat> images;
      for (std::size_t g = 0; g < candidates.size(); ++g) images.push_back(candidates[g][choice[g]]);
      if (auto iso = try_assignment(a, b, perm, images)) return iso;
      std::size_t g = 0;
      while (g < choice.size() && ++choice[g] == candidates[g].size()) choice[g++] = 0;
      if (g == choice.size()) break;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return std::nullopt;
}

}  // namespace homlab
