#include "homlab/complexes.hpp"

#include <algorithm>

namespace homlab {

namespace {

std::int64_t sign(int k) { return (k % 2 == 0) ? 1 : -1; }

Mat zeros(Index r, Index c, std::uint32_t p) { return Mat(r, c, p); }
Mat eye(Index n, std::uint32_t p) { return Mat::identity(n, p); }

// [[a, b], [c, d]]
Mat block2(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
  Mat out(a.rows() + c.rows(), a.cols() + b.cols(), a.modulus());
  out.set_block(0, 0, a);
  out.set_block(0, a.cols(), b);
  out.set_block(a.rows(), 0, c);
  out.set_block(a.rows(), a.cols(), d);
  return out;
}

void check_complex_algebra(const Complex& a, const Complex& b, const char* where) {
  if (a.algebra() != b.algebra() && !same_algebra(*a.algebra(), *b.algebra()))
    throw ComplexError(std::string(where) + ": complexes over different algebras");
}

int min_lo(const Complex& a, const Complex& b) {
  if (a.length() == 0) return b.lo();
  if (b.length() == 0) return a.lo();
  return std::min(a.lo(), b.lo());
}
int max_hi(const Complex& a, const Complex& b) {
  if (a.length() == 0) return b.hi();
  if (b.length() == 0) return a.hi();
  return std::max(a.hi(), b.hi());
}

Module ground_module(const AlgPtr& k, Index d) { return make_module_unchecked(k, {Mat::identity(d, k->prime())}); }

// Graded unknown X^n -> Y^{n+degree}, one block variable per source degree.
struct GVar {
  Complex src, dst;
  int degree = 0;
  std::vector<int> ids;

  std::optional<BlockSystem::Term> term(int n, Mat left, Mat right) const {
    if (!src.in_support(n)) return std::nullopt;
    return BlockSystem::Term{ids[static_cast<std::size_t>(n - src.lo())], std::move(left), std::move(right)};
  }
  GradedMap value(const std::vector<Mat>& vals) const {
    GradedMap f{src, dst, degree, {}};
    for (int id : ids) f.comps.push_back(vals[static_cast<std::size_t>(id)]);
    return f;
  }
};

GVar add_graded_var(BlockSystem& sys, const Complex& src, const Complex& dst, int degree) {
  GVar v{src, dst, degree, {}};
  for (int n = src.lo(); n <= src.hi(); ++n) v.ids.push_back(sys.add_hom_var(src.object(n), dst.object(n + degree)));
  return v;
}

void push(std::vector<BlockSystem::Term>& terms, std::optional<BlockSystem::Term> t) {
  if (t) terms.push_back(std::move(*t));
}

// d v = v d for a degree-0 unknown.
void add_chain_equations(BlockSystem& sys, const GVar& v) {
  const auto p = v.src.prime();
  for (int n = v.src.lo() - 1; n <= v.src.hi(); ++n) {
    const Index r = v.dst.dim(n + 1), c = v.src.dim(n);
    if (r == 0 || c == 0) continue;
    std::vector<BlockSystem::Term> terms;
    push(terms, v.term(n, v.dst.diff(n), eye(c, p)));
    push(terms, v.term(n + 1, eye(r, p).scaled(-1), v.src.diff(n)));
    if (!terms.empty()) sys.add_equation(r, c, std::move(terms), std::nullopt);
  }
}

// constant + terms - d_dst h^n - h^{n+1} d_src = 0 for maps src^n -> dst^n.
void add_homotopy_equation(BlockSystem& sys, const GVar& h, int n, const std::optional<Mat>& constant,
                           std::vector<BlockSystem::Term> terms) {
  const auto p = h.src.prime();
  const Index r = h.dst.dim(n), c = h.src.dim(n);
  if (r == 0 || c == 0) return;
  push(terms, h.term(n, h.dst.diff(n - 1).scaled(-1), eye(c, p)));
  push(terms, h.term(n + 1, eye(r, p).scaled(-1), h.src.diff(n)));
  sys.add_equation(r, c, std::move(terms), constant);
}

std::vector<int> degree_range(const Complex& a, const Complex& b) {
  std::vector<int> out;
  for (int n = min_lo(a, b); n <= max_hi(a, b); ++n) out.push_back(n);
  return out;
}

}  // namespace

const Module& Complex::object(int n) const {
  if (!in_support(n)) return data_->zero;
  return data_->objects[static_cast<std::size_t>(n - lo())];
}

Mat Complex::diff(int n) const {
  if (in_support(n) && in_support(n + 1)) return data_->diffs[static_cast<std::size_t>(n - lo())];
  return Mat(dim(n + 1), dim(n), prime());
}

bool Complex::is_zero() const { return total_dim() == 0; }

Index Complex::total_dim() const {
  Index t = 0;
  for (const auto& m : data_->objects) t += m.dim();
  return t;
}

Complex make_complex_unchecked(const AlgPtr& alg, int lo, std::vector<Module> objects, std::vector<Mat> diffs) {
  auto data = std::make_shared<Complex::Data>();
  data->alg = alg;
  data->lo = lo;
  data->objects = std::move(objects);
  data->diffs = std::move(diffs);
  data->zero = zero_module(alg);
  Complex c;
  c.data_ = data;
  return c;
}

Complex make_complex(const AlgPtr& alg, int lo, std::vector<Module> objects, std::vector<Mat> diffs) {
  const std::size_t expected = objects.empty() ? 0 : objects.size() - 1;
  if (diffs.size() != expected)
    throw ComplexError("complex with " + std::to_string(objects.size()) + " objects needs " +
                       std::to_string(expected) + " differentials");
  Complex c = make_complex_unchecked(alg, lo, std::move(objects), std::move(diffs));
  validate(c);
  return c;
}

void validate(const Complex& x) {
  for (int n = x.lo(); n <= x.hi(); ++n) {
    const Module& m = x.object(n);
    if (m.algebra() != x.algebra() && !same_algebra(*m.algebra(), *x.algebra()))
      throw ComplexError("object in degree " + std::to_string(n) + " is over another algebra");
    if (n == x.hi()) break;
    const Mat d = x.diff(n);
    try {
      make_map(m, x.object(n + 1), d);
    } catch (const ModuleError& e) {
      throw ComplexError("differential in degree " + std::to_string(n) + ": " + e.what());
    }
    if (!(x.diff(n + 1) * d).is_zero()) throw ComplexError("d o d != 0 in degree " + std::to_string(n));
  }
}

Complex zero_complex(const AlgPtr& alg) { return make_complex_unchecked(alg, 0, {}, {}); }

Complex stalk(const Module& m, int degree) { return make_complex_unchecked(m.algebra(), degree, {m}, {}); }

bool same_complex(const Complex& a, const Complex& b) {
  if (a.algebra() != b.algebra() && !same_algebra(*a.algebra(), *b.algebra())) return false;
  for (int n = min_lo(a, b); n <= max_hi(a, b); ++n) {
    const bool za = a.dim(n) == 0, zb = b.dim(n) == 0;
    if (za != zb) return false;
    if (za) continue;
    if (!same_module(a.object(n), b.object(n))) return false;
    if (a.diff(n) != b.diff(n)) return false;
  }
  return true;
}

Mat GradedMap::at(int n) const {
  if (src.in_support(n)) return comps[static_cast<std::size_t>(n - src.lo())];
  return Mat(dst.dim(n + degree), src.dim(n), src.prime());
}

GradedMap make_graded(const Complex& src, const Complex& dst, int degree, std::vector<Mat> comps) {
  check_complex_algebra(src, dst, "graded map");
  if (static_cast<int>(comps.size()) != src.length()) throw ComplexError("graded map: wrong number of components");
  for (int n = src.lo(); n <= src.hi(); ++n) {
    const Mat& m = comps[static_cast<std::size_t>(n - src.lo())];
    if (m.rows() != dst.dim(n + degree) || m.cols() != src.dim(n))
      throw ComplexError("graded map: component " + std::to_string(n) + " has the wrong shape");
    try {
      make_map(src.object(n), dst.object(n + degree), m);
    } catch (const ModuleError& e) {
      throw ComplexError("graded map: component " + std::to_string(n) + ": " + e.what());
    }
  }
  return {src, dst, degree, std::move(comps)};
}

ChainMap make_chain_map(const Complex& src, const Complex& dst, std::vector<Mat> comps) {
  ChainMap f = make_graded(src, dst, 0, std::move(comps));
  if (!is_chain_map(f)) throw ComplexError("components do not commute with the differentials");
  return f;
}

ChainMap identity_chain(const Complex& x) {
  ChainMap f{x, x, 0, {}};
  for (int n = x.lo(); n <= x.hi(); ++n) f.comps.push_back(eye(x.dim(n), x.prime()));
  return f;
}

GradedMap zero_graded(const Complex& src, const Complex& dst, int degree) {
  GradedMap f{src, dst, degree, {}};
  for (int n = src.lo(); n <= src.hi(); ++n) f.comps.push_back(zeros(dst.dim(n + degree), src.dim(n), src.prime()));
  return f;
}

GradedMap compose(const GradedMap& g, const GradedMap& f) {
  GradedMap out{f.src, g.dst, f.degree + g.degree, {}};
  for (int n = f.src.lo(); n <= f.src.hi(); ++n) out.comps.push_back(g.at(n + f.degree) * f.at(n));
  return out;
}

GradedMap operator+(const GradedMap& a, const GradedMap& b) {
  GradedMap out{a.src, a.dst, a.degree, {}};
  for (int n = a.src.lo(); n <= a.src.hi(); ++n) out.comps.push_back(a.at(n) + b.at(n));
  return out;
}

GradedMap operator-(const GradedMap& a, const GradedMap& b) { return a + scaled(b, -1); }

GradedMap scaled(const GradedMap& a, std::int64_t s) {
  GradedMap out{a.src, a.dst, a.degree, {}};
  for (int n = a.src.lo(); n <= a.src.hi(); ++n) out.comps.push_back(a.at(n).scaled(s));
  return out;
}

bool is_chain_map(const GradedMap& f) {
  if (f.degree != 0) return false;
  for (int n = f.src.lo() - 1; n <= f.src.hi(); ++n)
    if (f.dst.diff(n) * f.at(n) != f.at(n + 1) * f.src.diff(n)) return false;
  return true;
}

bool same_map(const GradedMap& a, const GradedMap& b) {
  if (a.degree != b.degree) return false;
  for (int n = min_lo(a.src, b.src); n <= max_hi(a.src, b.src); ++n)
    if (a.at(n) != b.at(n)) return false;
  return true;
}

bool verify_homotopy(const ChainMap& phi, const ChainMap& psi, const Homotopy& h) {
  if (h.degree != -1) return false;
  for (int n = phi.src.lo(); n <= phi.src.hi(); ++n) {
    const Mat lhs = phi.at(n) - psi.at(n);
    const Mat rhs = phi.dst.diff(n - 1) * h.at(n) + h.at(n + 1) * phi.src.diff(n);
    if (lhs != rhs) return false;
  }
  return true;
}

CohomologyData cohomology_at(const Complex& x, int n) {
  const Module& m = x.object(n);
  const Sub z = submodule(m, kernel_basis(x.diff(n)));
  const Mat lz = left_inverse(z.inclusion.matrix);
  const Mat b = lz * x.diff(n - 1);
  const Quot h = quotient_module(z.module, b);
  return {n, h.module, z.inclusion.matrix, h.projection.matrix, h.section};
}

std::vector<CohomologyData> cohomology(const Complex& x) {
  std::vector<CohomologyData> out;
  for (int n = x.lo(); n <= x.hi(); ++n) out.push_back(cohomology_at(x, n));
  return out;
}

std::map<int, Index> cohomology_dims(const Complex& x) {
  std::map<int, Index> out;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    const Index z = x.dim(n) - rank(x.diff(n));
    out[n] = z - rank(x.diff(n - 1));
  }
  return out;
}

Mat induced_map(const ChainMap& f, int n) {
  const auto cx = cohomology_at(f.src, n);
  const auto cy = cohomology_at(f.dst, n);
  return cy.proj * left_inverse(cy.cycles) * f.at(n) * cx.cycles * cx.section;
}

bool is_quasi_iso(const ChainMap& f) {
  for (int n : degree_range(f.src, f.dst)) {
    const Mat h = induced_map(f, n);
    if (h.rows() != h.cols() || rank(h) != h.rows()) return false;
  }
  return true;
}

Complex shift(const Complex& x, int k) {
  if (k == 0) return x;
  std::vector<Module> objects;
  std::vector<Mat> diffs;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    objects.push_back(x.object(n));
    if (n < x.hi()) diffs.push_back(x.diff(n).scaled(sign(k)));
  }
  return make_complex_unchecked(x.algebra(), x.lo() - k, std::move(objects), std::move(diffs));
}

GradedMap shift_map(const GradedMap& f, int k) { return {shift(f.src, k), shift(f.dst, k), f.degree, f.comps}; }

int BlockSystem::add_var(std::vector<Mat> basis, Index rows, Index cols) {
  vars_.push_back({rows, cols, std::move(basis), offset_});
  offset_ += static_cast<Index>(vars_.back().basis.size());
  return static_cast<int>(vars_.size()) - 1;
}

int BlockSystem::add_hom_var(const Module& a, const Module& b) { return add_var(hom_basis(a, b), b.dim(), a.dim()); }

void BlockSystem::add_equation(Index rows, Index cols, std::vector<Term> terms, const std::optional<Mat>& constant) {
  if (rows == 0 || cols == 0) return;
  eqs_.push_back({rows, cols, std::move(terms), constant});
}

Mat BlockSystem::assemble(Mat* rhs) const {
  Index total = 0;
  for (const auto& e : eqs_) total += e.rows * e.cols;
  Mat a(total, offset_, p_);
  if (rhs) *rhs = Mat(total, 1, p_);
  Index row = 0;
  for (const auto& e : eqs_) {
    for (const auto& t : e.terms) {
      const Var& v = vars_[static_cast<std::size_t>(t.var)];
      for (std::size_t k = 0; k < v.basis.size(); ++k) {
        const Mat c = (t.left * v.basis[k] * t.right).vectorized();
        const Index col = v.offset + static_cast<Index>(k);
        for (Index i = 0; i < c.rows(); ++i)
          if (c(i, 0) != 0) a.set(row + i, col, a(row + i, col) + c(i, 0));
      }
    }
    if (rhs && e.constant) rhs->set_block(row, 0, (-*e.constant).vectorized());
    row += e.rows * e.cols;
  }
  return a;
}

std::optional<std::vector<Mat>> BlockSystem::solve() const {
  Mat rhs;
  const Mat a = assemble(&rhs);
  if (offset_ == 0) {
    if (!rhs.is_zero()) return std::nullopt;
    return values(Mat(0, 1, p_));
  }
  const auto x = homlab::solve(a, rhs);
  if (!x) return std::nullopt;
  return values(*x);
}

Mat BlockSystem::kernel() const { return kernel_basis(assemble(nullptr)); }

std::vector<Mat> BlockSystem::values(const Mat& coords) const {
  std::vector<Mat> out;
  for (const auto& v : vars_) {
    Mat m(v.rows, v.cols, p_);
    for (std::size_t k = 0; k < v.basis.size(); ++k) {
      const auto c = coords(v.offset + static_cast<Index>(k), 0);
      if (c != 0) m += v.basis[k].scaled(c);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::optional<Homotopy> null_homotopy(const ChainMap& phi, const ChainMap& psi) {
  BlockSystem sys(phi.src.prime());
  const GVar h = add_graded_var(sys, phi.src, phi.dst, -1);
  for (int n = phi.src.lo(); n <= phi.src.hi(); ++n) add_homotopy_equation(sys, h, n, phi.at(n) - psi.at(n), {});
  const auto sol = sys.solve();
  if (!sol) return std::nullopt;
  Homotopy out = h.value(*sol);
  if (!verify_homotopy(phi, psi, out)) throw ComplexError("null_homotopy: verification failed");
  return out;
}

bool verify_equivalence(const Equivalence& e) {
  return is_chain_map(e.to) && is_chain_map(e.from) &&
         verify_homotopy(compose(e.from, e.to), identity_chain(e.to.src), e.from_to) &&
         verify_homotopy(compose(e.to, e.from), identity_chain(e.to.dst), e.to_from);
}

std::optional<ChainMap> factor_through(const ChainMap& q, const ChainMap& t) {
  const Complex& pc = t.src;
  const auto p = pc.prime();
  BlockSystem sys(p);
  const GVar g = add_graded_var(sys, pc, q.src, 0);
  const GVar s = add_graded_var(sys, pc, q.dst, -1);
  add_chain_equations(sys, g);
  for (int n = pc.lo(); n <= pc.hi(); ++n) {
    std::vector<BlockSystem::Term> terms;
    push(terms, g.term(n, q.at(n), eye(pc.dim(n), p)));
    add_homotopy_equation(sys, s, n, t.at(n).scaled(-1), std::move(terms));
  }
  const auto sol = sys.solve();
  if (!sol) return std::nullopt;
  const ChainMap out = g.value(*sol);
  if (!is_chain_map(out) || !verify_homotopy(compose(q, out), t, s.value(*sol)))
    throw ComplexError("factor_through: verification failed");
  return out;
}

std::optional<Equivalence> homotopy_inverse(const ChainMap& f) {
  const Complex& x = f.src;
  const Complex& y = f.dst;
  const auto p = x.prime();
  BlockSystem sys(p);
  const GVar g = add_graded_var(sys, y, x, 0);
  const GVar h1 = add_graded_var(sys, x, x, -1);
  const GVar h2 = add_graded_var(sys, y, y, -1);
  add_chain_equations(sys, g);
  for (int n = x.lo(); n <= x.hi(); ++n) {
    std::vector<BlockSystem::Term> t;
    push(t, g.term(n, eye(x.dim(n), p), f.at(n)));
    add_homotopy_equation(sys, h1, n, eye(x.dim(n), p).scaled(-1), std::move(t));
  }
  for (int n = y.lo(); n <= y.hi(); ++n) {
    std::vector<BlockSystem::Term> t;
    push(t, g.term(n, f.at(n), eye(y.dim(n), p)));
    add_homotopy_equation(sys, h2, n, eye(y.dim(n), p).scaled(-1), std::move(t));
  }
  const auto sol = sys.solve();
  if (!sol) return std::nullopt;
  Equivalence e{f, g.value(*sol), h1.value(*sol), h2.value(*sol)};
  if (!verify_equivalence(e)) throw ComplexError("homotopy_inverse: verification failed");
  return e;
}

Mat HomComplex::coords(const GradedMap& f) const {
  const auto p = x.prime();
  Mat out(dim(f.degree), 1, p);
  const auto it = blocks.find(f.degree);
  if (it == blocks.end()) return out;
  for (const auto& b : it->second) out.set_block(b.offset, 0, b.extract * f.at(b.i).vectorized());
  return out;
}

GradedMap HomComplex::map(int degree, const Mat& c) const {
  GradedMap f = zero_graded(x, y, degree);
  const auto it = blocks.find(degree);
  if (it == blocks.end()) return f;
  for (const auto& b : it->second) {
    Mat& comp = f.comps[static_cast<std::size_t>(b.i - x.lo())];
    for (std::size_t k = 0; k < b.basis.size(); ++k) {
      const auto v = c(b.offset + static_cast<Index>(k), 0);
      if (v != 0) comp += b.basis[k].scaled(v);
    }
  }
  return f;
}

namespace {

// D(f) = d f - (-1)^n f d.
GradedMap hom_differential(const GradedMap& f) {
  GradedMap out{f.src, f.dst, f.degree + 1, {}};
  for (int i = f.src.lo(); i <= f.src.hi(); ++i)
    out.comps.push_back(f.dst.diff(i + f.degree) * f.at(i) - (f.at(i + 1) * f.src.diff(i)).scaled(sign(f.degree)));
  return out;
}

}  // namespace

HomComplex hom_complex(const Complex& x, const Complex& y) {
  check_complex_algebra(x, y, "hom_complex");
  const auto p = x.prime();
  const AlgPtr k = ground_field(p);
  HomComplex hc{x, y, zero_complex(k), {}};
  if (x.length() == 0 || y.length() == 0) return hc;
  const int lo = y.lo() - x.hi(), hi = y.hi() - x.lo();
  std::vector<Index> dims;
  for (int n = lo; n <= hi; ++n) {
    Index off = 0;
    auto& list = hc.blocks[n];
    for (int i = x.lo(); i <= x.hi(); ++i) {
      if (!y.in_support(i + n)) continue;
      auto basis = hom_basis(x.object(i), y.object(i + n));
      if (basis.empty()) continue;
      std::vector<Mat> cols;
      for (const auto& b : basis) cols.push_back(b.vectorized());
      const Mat stack = hstack(cols, basis.front().rows() * basis.front().cols(), p);
      const Index count = static_cast<Index>(basis.size());
      list.push_back({i, std::move(basis), left_inverse(stack), off});
      off += count;
    }
    dims.push_back(off);
  }
  std::vector<Module> objects;
  for (Index d : dims) objects.push_back(ground_module(k, d));
  hc.cx = make_complex_unchecked(k, lo, objects, {});
  std::vector<Mat> diffs;
  for (int n = lo; n < hi; ++n) {
    Mat d(hc.dim(n + 1), hc.dim(n), p);
    for (Index c = 0; c < hc.dim(n); ++c)
      d.set_block(0, c, hc.coords(hom_differential(hc.map(n, Mat::unit_vector(hc.dim(n), c, p)))));
    diffs.push_back(std::move(d));
  }
  hc.cx = make_complex_unchecked(k, lo, std::move(objects), std::move(diffs));
  return hc;
}

Index khom_dim(const Complex& x, const Complex& y, int n) {
  const HomComplex hc = hom_complex(x, y);
  const Complex& c = hc.cx;
  return c.dim(n) - rank(c.diff(n)) - rank(c.diff(n - 1));
}

Triangle cone(const ChainMap& f) {
  const Complex& x = f.src;
  const Complex& y = f.dst;
  const AlgPtr& alg = x.algebra();
  const auto p = x.prime();
  const Complex sx = shift(x, 1);
  int lo = min_lo(sx, y), hi = max_hi(sx, y);
  std::vector<Module> objects;
  std::vector<Mat> diffs;
  for (int n = lo; n <= hi; ++n) {
    objects.push_back(direct_sum(alg, {x.object(n + 1), y.object(n)}).sum);
    if (n == hi) break;
    diffs.push_back(block2(x.diff(n + 1).scaled(-1), zeros(x.dim(n + 2), y.dim(n), p), f.at(n + 1), y.diff(n)));
  }
  const Complex c = lo > hi ? zero_complex(alg) : make_complex_unchecked(alg, lo, std::move(objects), std::move(diffs));
  ChainMap g{y, c, 0, {}}, h{c, sx, 0, {}};
  Homotopy s{x, c, -1, {}};
  for (int n = y.lo(); n <= y.hi(); ++n) g.comps.push_back(block2(zeros(x.dim(n + 1), 0, p), zeros(x.dim(n + 1), y.dim(n), p), zeros(y.dim(n), 0, p), eye(y.dim(n), p)));
  for (int n = c.lo(); n <= c.hi(); ++n) h.comps.push_back(block2(eye(x.dim(n + 1), p), zeros(x.dim(n + 1), y.dim(n), p), zeros(0, x.dim(n + 1), p), zeros(0, y.dim(n), p)));
  // g f ~ 0 via x -> (x, 0); (Sigma f) h ~ 0 via (x, y) -> y.
  for (int n = x.lo(); n <= x.hi(); ++n) s.comps.push_back(block2(eye(x.dim(n), p), zeros(x.dim(n), 0, p), zeros(y.dim(n - 1), x.dim(n), p), zeros(y.dim(n - 1), 0, p)));
  const Complex sy = shift(y, 1);
  Homotopy t{c, sy, -1, {}};
  for (int n = c.lo(); n <= c.hi(); ++n) t.comps.push_back(block2(zeros(y.dim(n), x.dim(n + 1), p), eye(y.dim(n), p), zeros(0, x.dim(n + 1), p), zeros(0, y.dim(n), p)));
  Triangle tri{x, y, c, f, g, h, TriangleCert::ByCone, std::nullopt, {}};
  tri.composites = {s, zero_graded(y, sx, -1), t};
  return tri;
}

bool validate_triangle(const Triangle& t) {
  const Complex sx = shift(t.x, 1);
  if (!is_chain_map(t.f) || !is_chain_map(t.g) || !is_chain_map(t.h)) return false;
  if (!same_complex(t.f.src, t.x) || !same_complex(t.f.dst, t.y) || !same_complex(t.g.dst, t.z) ||
      !same_complex(t.h.dst, sx))
    return false;
  if (t.composites.size() != 3) return false;
  const ChainMap gf = compose(t.g, t.f);
  const ChainMap hg = compose(t.h, t.g);
  const ChainMap fh = compose(shift_map(t.f, 1), t.h);
  if (!verify_homotopy(gf, zero_graded(t.x, t.z), t.composites[0])) return false;
  if (!verify_homotopy(hg, zero_graded(t.y, sx), t.composites[1])) return false;
  if (!verify_homotopy(fh, zero_graded(t.z, shift(t.y, 1)), t.composites[2])) return false;
  const Triangle c = cone(t.f);
  if (t.cert == TriangleCert::ByCone)
    return same_complex(t.z, c.z) && same_map(t.g, c.g) && same_map(t.h, c.h);
  if (!t.to_cone || !verify_equivalence(*t.to_cone)) return false;
  const ChainMap& phi = t.to_cone->to;
  return null_homotopy(compose(phi, t.g), c.g).has_value() && null_homotopy(compose(c.h, phi), t.h).has_value();
}

bool long_exact_sequence_holds(const Triangle& t) {
  const Complex sx = shift(t.x, 1);
  auto exact_at = [](const Mat& a, const Mat& b, Index middle) {
    return (b * a).is_zero() && rank(a) + rank(b) == middle;
  };
  int lo = std::min({t.x.lo(), t.y.lo(), t.z.lo()}) - 2;
  int hi = std::max({t.x.hi(), t.y.hi(), t.z.hi()}) + 1;
  for (int n = lo; n <= hi; ++n) {
    const Mat a = induced_map(t.f, n), b = induced_map(t.g, n), c = induced_map(t.h, n);
    const Mat a1 = induced_map(t.f, n + 1);
    if (!exact_at(a, b, a.rows()) || !exact_at(b, c, b.rows()) || !exact_at(c, a1, c.rows())) return false;
  }
  return true;
}

std::optional<Triangle> make_triangle(const ChainMap& f, const ChainMap& g, const ChainMap& h) {
  if (!is_chain_map(f) || !is_chain_map(g) || !is_chain_map(h)) return std::nullopt;
  const Complex sx = shift(f.src, 1);
  auto c0 = null_homotopy(compose(g, f), zero_graded(f.src, g.dst));
  auto c1 = null_homotopy(compose(h, g), zero_graded(f.dst, sx));
  auto c2 = null_homotopy(compose(shift_map(f, 1), h), zero_graded(g.dst, shift(f.dst, 1)));
  if (!c0 || !c1 || !c2) return std::nullopt;
  Triangle t{f.src, f.dst, g.dst, f, g, h, TriangleCert::IsoToCone, std::nullopt, {*c0, *c1, *c2}};
  return t;
}

namespace {

struct FillSystem {
  BlockSystem sys;
  GVar phi3, s1, s2;
};

FillSystem fill_system(const Triangle& t, const Triangle& t2, const ChainMap& phi1, const ChainMap& phi2) {
  const auto p = t.x.prime();
  FillSystem fs{BlockSystem(p), {}, {}, {}};
  const Complex sx2 = shift(t2.x, 1);
  fs.phi3 = add_graded_var(fs.sys, t.z, t2.z, 0);
  fs.s1 = add_graded_var(fs.sys, t.y, t2.z, -1);
  fs.s2 = add_graded_var(fs.sys, t.z, sx2, -1);
  add_chain_equations(fs.sys, fs.phi3);
  for (int n = t.y.lo(); n <= t.y.hi(); ++n) {
    std::vector<BlockSystem::Term> terms;
    push(terms, fs.phi3.term(n, eye(t2.z.dim(n), p), t.g.at(n)));
    add_homotopy_equation(fs.sys, fs.s1, n, (t2.g.at(n) * phi2.at(n)).scaled(-1), std::move(terms));
  }
  const ChainMap sphi1_h = compose(shift_map(phi1, 1), t.h);
  for (int n = t.z.lo(); n <= t.z.hi(); ++n) {
    std::vector<BlockSystem::Term> terms;
    push(terms, fs.phi3.term(n, t2.h.at(n), eye(t.z.dim(n), p)));
    add_homotopy_equation(fs.sys, fs.s2, n, sphi1_h.at(n).scaled(-1), std::move(terms));
  }
  return fs;
}

bool fill_in_holds(const Triangle& t, const Triangle& t2, const ChainMap& phi1, const ChainMap& phi2,
                   const ChainMap& phi3, const Homotopy& s1, const Homotopy& s2) {
  return is_chain_map(phi3) && verify_homotopy(compose(phi3, t.g), compose(t2.g, phi2), s1) &&
         verify_homotopy(compose(t2.h, phi3), compose(shift_map(phi1, 1), t.h), s2);
}

}  // namespace

std::optional<ChainMap> fill_in(const Triangle& t, const Triangle& t2, const ChainMap& phi1, const ChainMap& phi2) {
  FillSystem fs = fill_system(t, t2, phi1, phi2);
  const auto sol = fs.sys.solve();
  if (!sol) return std::nullopt;
  const ChainMap phi3 = fs.phi3.value(*sol);
  if (!fill_in_holds(t, t2, phi1, phi2, phi3, fs.s1.value(*sol), fs.s2.value(*sol)))
    throw ComplexError("fill_in: verification failed");
  return phi3;
}

std::optional<std::pair<ChainMap, ChainMap>> fillin_ambiguity(const Triangle& t) {
  const auto p = t.x.prime();
  if (p != 2) throw ComplexError("fillin_ambiguity: exhaustive search runs at p = 2 only");
  const ChainMap id_x = identity_chain(t.x), id_y = identity_chain(t.y);
  FillSystem fs = fill_system(t, t, id_x, id_y);
  const auto sol = fs.sys.solve();
  if (!sol) return std::nullopt;
  const Mat k = fs.sys.kernel();
  if (k.cols() > 8)
    throw ComplexError("fillin_ambiguity: " + std::to_string(k.cols()) + " free parameters exceed the search bound 8");
  const ChainMap base = fs.phi3.value(*sol);
  for (std::uint64_t mask = 1; mask < (1ULL << k.cols()); ++mask) {
    Mat c(k.rows(), 1, p);
    for (Index j = 0; j < k.cols(); ++j)
      if (mask >> j & 1ULL) c += k.col(j);
    const auto vals = fs.sys.values(c);
    const ChainMap delta = fs.phi3.value(vals);
    if (null_homotopy(delta, zero_graded(t.z, t.z))) continue;
    const ChainMap other = base + delta;
    // Both are genuine fill-ins: the homogeneous part adds to the homotopies.
    if (!fill_in_holds(t, t, id_x, id_y, other, fs.s1.value(*sol) + fs.s1.value(vals),
                       fs.s2.value(*sol) + fs.s2.value(vals)))
      throw ComplexError("fillin_ambiguity: verification failed");
    return std::make_pair(base, other);
  }
  return std::nullopt;
}

std::optional<Triangle> certify(const ChainMap& f, const ChainMap& g, const ChainMap& h) {
  auto t = make_triangle(f, g, h);
  if (!t) return std::nullopt;
  const Triangle c = cone(f);
  const auto phi = fill_in(*t, c, identity_chain(f.src), identity_chain(f.dst));
  if (!phi) return std::nullopt;
  auto e = homotopy_inverse(*phi);
  if (!e) return std::nullopt;
  t->cert = TriangleCert::IsoToCone;
  t->to_cone = std::move(e);
  return t;
}

Triangle rotate(const Triangle& t) {
  auto r = certify(t.g, t.h, scaled(shift_map(t.f, 1), -1));
  if (!r) throw ComplexError("rotate: rotated triangle failed to certify");
  return *r;
}

Complex direct_sum_complex(const AlgPtr& alg, const std::vector<Complex>& parts) {
  if (parts.empty()) return zero_complex(alg);
  int lo = parts.front().lo(), hi = parts.front().hi();
  bool any = false;
  for (const auto& c : parts) {
    if (c.length() == 0) continue;
    if (!any) lo = c.lo(), hi = c.hi(), any = true;
    lo = std::min(lo, c.lo());
    hi = std::max(hi, c.hi());
  }
  if (!any) return zero_complex(alg);
  const auto p = alg->prime();
  std::vector<Module> objects;
  std::vector<Mat> diffs;
  for (int n = lo; n <= hi; ++n) {
    std::vector<Module> mods;
    Index rows = 0, cols = 0;
    for (const auto& c : parts) {
      mods.push_back(c.object(n));
      rows += c.dim(n + 1);
      cols += c.dim(n);
    }
    objects.push_back(direct_sum(alg, mods).sum);
    if (n == hi) break;
    Mat d(rows, cols, p);
    Index r = 0, cc = 0;
    for (const auto& c : parts) {
      d.set_block(r, cc, c.diff(n));
      r += c.dim(n + 1);
      cc += c.dim(n);
    }
    diffs.push_back(std::move(d));
  }
  return make_complex_unchecked(alg, lo, std::move(objects), std::move(diffs));
}

GradedMap direct_sum_graded(const std::vector<GradedMap>& parts, const Complex& src, const Complex& dst) {
  const int deg = parts.empty() ? 0 : parts.front().degree;
  GradedMap out{src, dst, deg, {}};
  for (int n = src.lo(); n <= src.hi(); ++n) {
    Mat m(dst.dim(n + deg), src.dim(n), src.prime());
    Index r = 0, c = 0;
    for (const auto& f : parts) {
      m.set_block(r, c, f.at(n));
      r += f.dst.dim(n + deg);
      c += f.src.dim(n);
    }
    out.comps.push_back(std::move(m));
  }
  return out;
}

Triangle sum_triangles(const std::vector<Triangle>& ts) {
  if (ts.empty()) throw ComplexError("sum_triangles: empty list");
  if (ts.size() == 1) return ts.front();
  const AlgPtr& alg = ts.front().x.algebra();
  std::vector<Complex> xs, ys, zs;
  std::vector<GradedMap> fs, gs, hs;
  for (const auto& t : ts) {
    xs.push_back(t.x);
    ys.push_back(t.y);
    zs.push_back(t.z);
    fs.push_back(t.f);
    gs.push_back(t.g);
    hs.push_back(t.h);
  }
  const Complex x = direct_sum_complex(alg, xs), y = direct_sum_complex(alg, ys), z = direct_sum_complex(alg, zs);
  auto r = certify(direct_sum_graded(fs, x, y), direct_sum_graded(gs, y, z), direct_sum_graded(hs, z, shift(x, 1)));
  if (!r) throw ComplexError("sum_triangles: sum failed to certify");
  return *r;
}

Octahedron octahedron(const ChainMap& f, const ChainMap& g) {
  const Complex& x = f.src;
  const Complex& y = f.dst;
  const Complex& z = g.dst;
  const auto p = x.prime();
  Octahedron o;
  o.on_f = cone(f);
  o.on_g = cone(g);
  o.on_gf = cone(compose(g, f));
  const Complex& cf = o.on_f.z;
  const Complex& cg = o.on_g.z;
  const Complex& cgf = o.on_gf.z;
  const Complex scf = shift(cf, 1);
  ChainMap u{cf, cgf, 0, {}}, v{cgf, cg, 0, {}}, w{cg, scf, 0, {}};
  for (int n = cf.lo(); n <= cf.hi(); ++n)
    u.comps.push_back(block2(eye(x.dim(n + 1), p), zeros(x.dim(n + 1), y.dim(n), p), zeros(z.dim(n), x.dim(n + 1), p), g.at(n)));
  for (int n = cgf.lo(); n <= cgf.hi(); ++n)
    v.comps.push_back(block2(f.at(n + 1), zeros(y.dim(n + 1), z.dim(n), p), zeros(z.dim(n), x.dim(n + 1), p), eye(z.dim(n), p)));
  for (int n = cg.lo(); n <= cg.hi(); ++n)
    w.comps.push_back(block2(zeros(x.dim(n + 2), y.dim(n + 1), p), zeros(x.dim(n + 2), z.dim(n), p), eye(y.dim(n + 1), p), zeros(y.dim(n + 1), z.dim(n), p)));
  auto comp = certify(u, v, w);
  if (!comp) throw ComplexError("octahedron: comparison triangle failed to certify");
  o.comparison = *comp;
  const std::vector<std::pair<ChainMap, ChainMap>> squares{
      {compose(u, o.on_f.g), compose(o.on_gf.g, g)},
      {o.on_f.h, compose(o.on_gf.h, u)},
      {compose(v, o.on_gf.g), o.on_g.g},
      {compose(o.on_g.h, v), compose(shift_map(f, 1), o.on_gf.h)},
      {w, compose(shift_map(o.on_f.g, 1), o.on_g.h)},
  };
  for (const auto& [a, b] : squares) {
    auto h = null_homotopy(a, b);
    if (!h) throw ComplexError("octahedron: a comparison square does not commute");
    o.squares.push_back(*h);
  }
  return o;
}

bool validate_octahedron(const Octahedron& o) {
  if (!validate_triangle(o.on_f) || !validate_triangle(o.on_g) || !validate_triangle(o.on_gf) ||
      !validate_triangle(o.comparison) || o.squares.size() != 5)
    return false;
  const ChainMap& u = o.comparison.f;
  const ChainMap& v = o.comparison.g;
  const ChainMap& w = o.comparison.h;
  const ChainMap g = o.on_g.f;
  const ChainMap f = o.on_f.f;
  const std::vector<std::pair<ChainMap, ChainMap>> squares{
      {compose(u, o.on_f.g), compose(o.on_gf.g, g)},
      {o.on_f.h, compose(o.on_gf.h, u)},
      {compose(v, o.on_gf.g), o.on_g.g},
      {compose(o.on_g.h, v), compose(shift_map(f, 1), o.on_gf.h)},
      {w, compose(shift_map(o.on_f.g, 1), o.on_g.h)},
  };
  for (std::size_t k = 0; k < squares.size(); ++k)
    if (!verify_homotopy(squares[k].first, squares[k].second, o.squares[k])) return false;
  return true;
}

SemisimpleSplit semisimple_split(const Complex& x) {
  const AlgPtr& alg = x.algebra();
  if (!alg->is_semisimple()) throw ComplexError("semisimple_split: algebra has a nonzero radical");
  const auto p = x.prime();
  std::vector<Module> hs;
  std::vector<Mat> to, from;
  for (int n = x.lo(); n <= x.hi(); ++n) {
    const CohomologyData c = cohomology_at(x, n);
    const Module& xn = x.object(n);
    const Index hd = c.module.dim();
    const Mat lz = left_inverse(c.cycles);
    BlockSystem sys(p);
    const int s = sys.add_hom_var(c.module, xn);
    const int r = sys.add_hom_var(xn, c.module);
    sys.add_equation(x.dim(n + 1), hd, {{s, x.diff(n), eye(hd, p)}}, std::nullopt);
    sys.add_equation(hd, hd, {{s, c.proj * lz, eye(hd, p)}}, eye(hd, p).scaled(-1));
    sys.add_equation(hd, c.cycles.cols(), {{r, eye(hd, p), c.cycles}}, c.proj.scaled(-1));
    const auto sol = sys.solve();
    if (!sol) throw ComplexError("semisimple_split: no module splitting in degree " + std::to_string(n));
    hs.push_back(c.module);
    to.push_back((*sol)[static_cast<std::size_t>(s)]);
    from.push_back((*sol)[static_cast<std::size_t>(r)]);
  }
  std::vector<Mat> zero_diffs;
  for (std::size_t k = 0; k + 1 < hs.size(); ++k) zero_diffs.push_back(zeros(hs[k + 1].dim(), hs[k].dim(), p));
  const Complex st = x.length() == 0 ? zero_complex(alg) : make_complex_unchecked(alg, x.lo(), hs, zero_diffs);
  const ChainMap phi = make_chain_map(st, x, to);
  const ChainMap psi = make_chain_map(x, st, from);
  auto back = null_homotopy(compose(psi, phi), identity_chain(st));
  auto forth = null_homotopy(compose(phi, psi), identity_chain(x));
  if (!back || !forth) throw ComplexError("semisimple_split: splitting is not a homotopy equivalence");
  return {st, {phi, psi, *back, *forth}};
}

Triangle split_seq_to_triangle(const ChainMap& i, const ChainMap& pmap) {
  const Complex& x = i.src;
  const Complex& y = i.dst;
  const Complex& z = pmap.dst;
  const auto p = x.prime();
  if (!same_complex(i.dst, pmap.src)) throw ComplexError("split_seq_to_triangle: maps are not composable");
  std::vector<Mat> sec, ret;
  for (int n = y.lo(); n <= y.hi(); ++n) {
    if (!(pmap.at(n) * i.at(n)).is_zero() || rank(i.at(n)) != x.dim(n) || rank(pmap.at(n)) != z.dim(n) ||
        x.dim(n) + z.dim(n) != y.dim(n))
      throw ComplexError("split_seq_to_triangle: not short exact in degree " + std::to_string(n));
    BlockSystem sys(p);
    const int s = sys.add_hom_var(z.object(n), y.object(n));
    sys.add_equation(z.dim(n), z.dim(n), {{s, pmap.at(n), eye(z.dim(n), p)}}, eye(z.dim(n), p).scaled(-1));
    const auto sol = sys.solve();
    if (!sol) throw ComplexError("split_seq_to_triangle: not degreewise split in degree " + std::to_string(n));
    const Mat sn = (*sol)[static_cast<std::size_t>(s)];
    sec.push_back(sn);
    ret.push_back(left_inverse(i.at(n)) * (eye(y.dim(n), p) - sn * pmap.at(n)));
  }
  auto at = [&](const std::vector<Mat>& v, int n, Index r, Index c) {
    return y.in_support(n) ? v[static_cast<std::size_t>(n - y.lo())] : zeros(r, c, p);
  };
  const Complex sx = shift(x, 1);
  ChainMap delta{z, sx, 0, {}};
  for (int n = z.lo(); n <= z.hi(); ++n) {
    const Mat s_n = at(sec, n, y.dim(n), z.dim(n));
    const Mat r_n1 = at(ret, n + 1, x.dim(n + 1), y.dim(n + 1));
    delta.comps.push_back((r_n1 * y.diff(n) * s_n).scaled(-1));
  }
  auto t = certify(i, pmap, delta);
  if (!t) throw ComplexError("split_seq_to_triangle: triangle failed to certify against the cone");
  return *t;
}

Complex truncate(const Complex& x, int n) {
  if (n >= x.hi()) return x;
  if (n < x.lo()) return zero_complex(x.algebra());
  std::vector<Module> objects;
  std::vector<Mat> diffs;
  for (int k = x.lo(); k < n; ++k) objects.push_back(x.object(k));
  const Sub z = submodule(x.object(n), kernel_basis(x.diff(n)));
  objects.push_back(z.module);
  for (int k = x.lo(); k < n - 1; ++k) diffs.push_back(x.diff(k));
  if (n > x.lo()) diffs.push_back(left_inverse(z.inclusion.matrix) * x.diff(n - 1));
  return make_complex_unchecked(x.algebra(), x.lo(), std::move(objects), std::move(diffs));
}

Complex random_complex(const AlgPtr& alg, const std::vector<Module>& blocks, int lo, int length, Index max_dim,
                       std::mt19937_64& rng) {
  const auto p = alg->prime();
  std::uniform_int_distribution<std::int64_t> coef(0, p - 1);
  std::vector<Module> objects;
  for (int k = 0; k < length; ++k) objects.push_back(random_sum(alg, blocks, max_dim, rng));
  std::vector<Mat> diffs;
  for (int k = 0; k + 1 < length; ++k) {
    const Module& a = objects[static_cast<std::size_t>(k)];
    const Module& b = objects[static_cast<std::size_t>(k + 1)];
    const auto h = hom_basis(a, b);
    Mat d(b.dim(), a.dim(), p);
    if (!h.empty()) {
      Mat k_basis = Mat::identity(static_cast<Index>(h.size()), p);
      if (k > 0) {
        const Mat& prev = diffs.back();
        std::vector<Mat> cols;
        for (const auto& f : h) cols.push_back((f * prev).vectorized());
        k_basis = kernel_basis(hstack(cols, b.dim() * prev.cols(), p));
      }
      for (Index c = 0; c < k_basis.cols(); ++c) {
        const std::int64_t r = coef(rng);
        if (r == 0) continue;
        for (Index t = 0; t < k_basis.rows(); ++t)
          if (k_basis(t, c) != 0) d += h[static_cast<std::size_t>(t)].scaled(r * k_basis(t, c));
      }
    }
    diffs.push_back(std::move(d));
  }
  return make_complex(alg, lo, std::move(objects), std::move(diffs));
}

ChainMap random_chain_map(const Complex& x, const Complex& y, std::mt19937_64& rng) {
  const HomComplex hc = hom_complex(x, y);
  const auto p = x.prime();
  std::uniform_int_distribution<std::int64_t> coef(0, p - 1);
  const Mat z = kernel_basis(hc.cx.diff(0));
  Mat c(hc.dim(0), 1, p);
  for (Index j = 0; j < z.cols(); ++j) c += z.col(j).scaled(coef(rng));
  ChainMap f = hc.map(0, c);
  if (!is_chain_map(f)) throw ComplexError("random_chain_map: produced a non-chain map");
  return f;
}

}  // namespace homlab
