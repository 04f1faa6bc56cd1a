#include "homlab/modcat.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace homlab {

namespace {

void check_same_algebra(const Module& a, const Module& b, const char* where) {
  if (a.algebra() != b.algebra() && !same_algebra(*a.algebra(), *b.algebra()))
    throw ModuleError(std::string(where) + ": modules over different algebras");
}

Mat vec_span(const std::vector<Mat>& mats, Index rows, Index cols, std::uint32_t p) {
  std::vector<Mat> v;
  v.reserve(mats.size());
  for (const auto& m : mats) v.push_back(m.vectorized());
  if (v.empty()) return Mat(rows * cols, 0, p);
  return hstack(v, rows * cols, p);
}

std::vector<Mat> unvec_columns(const Mat& basis, Index rows, Index cols) {
  std::vector<Mat> out;
  for (Index c = 0; c < basis.cols(); ++c) out.push_back(Mat::unvectorized(basis.col(c), rows, cols));
  return out;
}

// e_j A with the basis of algebra elements it is spanned by (columns).
std::pair<Module, Mat> proj_with_basis(const AlgPtr& alg, int j) {
  if (j < 0 || j >= alg->num_idempotents()) throw ModuleError("proj: idempotent index out of range");
  const Mat u = column_basis(alg->left_multiplication(alg->idempotents()[static_cast<std::size_t>(j)]));
  const Mat l = left_inverse(u);
  std::vector<Mat> action;
  for (int i = 0; i < alg->dim(); ++i) action.push_back(l * alg->right_multiplication(alg->basis_vector(i)) * u);
  return {make_module_unchecked(alg, std::move(action)), u};
}

std::vector<Mat> induced_actions(const Module& m, const Mat& left, const Mat& right) {
  std::vector<Mat> out;
  out.reserve(m.actions().size());
  for (const auto& a : m.actions()) out.push_back(left * a * right);
  return out;
}

std::int64_t determinant(Mat a) {
  const std::uint32_t p = a.modulus();
  const Index n = a.rows();
  std::int64_t det = 1;
  auto& s = a.mutable_storage();
  for (Index c = 0; c < n; ++c) {
    Index piv = -1;
    for (Index r = c; r < n; ++r)
      if (s(r, c) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != c) {
      s.row(piv).swap(s.row(c));
      det = mod_reduce(-det, p);
    }
    det = det * s(c, c) % p;
    const std::int64_t inv = mod_inverse(s(c, c), p);
    for (Index r = c + 1; r < n; ++r) {
      const std::int64_t f = s(r, c) * inv % p;
      if (f == 0) continue;
      for (Index j = c; j < n; ++j) s(r, j) = mod_reduce(s(r, j) - f * s(c, j), p);
    }
  }
  return det;
}

// Coefficients (low to high) of det(x I - a), by interpolation at 0..n.
std::vector<std::int64_t> charpoly(const Mat& a) {
  const std::uint32_t p = a.modulus();
  const Index n = a.rows();
  std::vector<std::int64_t> coeffs(static_cast<std::size_t>(n + 1), 0);
  for (Index t = 0; t <= n; ++t) {
    const std::int64_t yt = determinant(Mat::identity(n, p).scaled(t) - a);
    // Lagrange basis polynomial for node t.
    std::vector<std::int64_t> basis{1};
    std::int64_t denom = 1;
    for (Index s = 0; s <= n; ++s) {
      if (s == t) continue;
      std::vector<std::int64_t> next(basis.size() + 1, 0);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        next[k + 1] = (next[k + 1] + basis[k]) % p;
        next[k] = mod_reduce(next[k] - basis[k] * s, p);
      }
      basis = std::move(next);
      denom = denom * mod_reduce(t - s, p) % p;
    }
    const std::int64_t scale = yt * mod_inverse(denom, p) % p;
    for (std::size_t k = 0; k < basis.size(); ++k)
      coeffs[k] = (coeffs[k] + basis[k] * scale) % p;
  }
  return coeffs;
}

}  // namespace

Mat Module::act(const Mat& element) const {
  Mat out(data_->dim, data_->dim, prime());
  for (int i = 0; i < data_->alg->dim(); ++i)
    if (element(i, 0) != 0) out += data_->action[static_cast<std::size_t>(i)].scaled(element(i, 0));
  return out;
}

Module make_module_unchecked(const AlgPtr& alg, std::vector<Mat> action) {
  if (!alg) throw ModuleError("module needs an algebra");
  if (static_cast<int>(action.size()) != alg->dim())
    throw ModuleError("expected " + std::to_string(alg->dim()) + " action matrices, got " +
                      std::to_string(action.size()));
  const Index d = action.empty() ? 0 : action.front().rows();
  for (const auto& a : action)
    if (a.rows() != d || a.cols() != d || a.modulus() != alg->prime())
      throw ModuleError("action matrices must be square of a common size over the algebra's field");
  auto data = std::make_shared<Module::Data>();
  data->alg = alg;
  data->dim = d;
  data->action = std::move(action);
  Module m;
  m.data_ = data;
  for (const auto& e : alg->idempotents()) data->idempotent_action.push_back(m.act(e));
  for (const auto& g : alg->radical_generators()) data->generator_action.push_back(m.act(g));
  return m;
}

Module make_module(const AlgPtr& alg, std::vector<Mat> action) {
  Module m = make_module_unchecked(alg, std::move(action));
  const Index d = m.dim();
  const std::uint32_t p = alg->prime();
  if (m.act(alg->unit()) != Mat::identity(d, p)) throw ModuleError("unit does not act as the identity");
  const int n = alg->dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat rhs(d, d, p);
      for (int k = 0; k < n; ++k)
        if (alg->constant(i, j, k) != 0) rhs += m.action(k).scaled(alg->constant(i, j, k));
      if (m.action(j) * m.action(i) != rhs)
        throw ModuleError("action incompatible with structure constants (witness pair " + std::to_string(i) +
                          " " + std::to_string(j) + ")");
    }
  return m;
}

ModMap make_map(const Module& src, const Module& dst, Mat matrix) {
  check_same_algebra(src, dst, "make_map");
  if (matrix.rows() != dst.dim() || matrix.cols() != src.dim())
    throw ModuleError("map matrix has shape " + std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()) +
                      ", expected " + std::to_string(dst.dim()) + "x" + std::to_string(src.dim()));
  for (int j = 0; j < src.algebra()->num_idempotents(); ++j)
    if (matrix * src.idempotent_action(j) != dst.idempotent_action(j) * matrix)
      throw ModuleError("map does not commute with idempotent " + std::to_string(j));
  for (std::size_t g = 0; g < src.generator_actions().size(); ++g)
    if (matrix * src.generator_actions()[g] != dst.generator_actions()[g] * matrix)
      throw ModuleError("map does not commute with radical generator " + std::to_string(g));
  return {src, dst, std::move(matrix)};
}

ModMap identity_map(const Module& m) { return {m, m, Mat::identity(m.dim(), m.prime())}; }

ModMap zero_map(const Module& src, const Module& dst) { return {src, dst, Mat(dst.dim(), src.dim(), src.prime())}; }

ModMap compose(const ModMap& g, const ModMap& f) {
  if (f.dst.dim() != g.src.dim()) throw ModuleError("compose: endpoints do not match");
  return {f.src, g.dst, g.matrix * f.matrix};
}

Module zero_module(const AlgPtr& alg) {
  return make_module_unchecked(alg, std::vector<Mat>(static_cast<std::size_t>(alg->dim()), Mat(0, 0, alg->prime())));
}

Module regular(const AlgPtr& alg) {
  std::vector<Mat> action;
  for (int i = 0; i < alg->dim(); ++i) action.push_back(alg->right_multiplication(alg->basis_vector(i)));
  return make_module_unchecked(alg, std::move(action));
}

Module proj(const AlgPtr& alg, int j) { return proj_with_basis(alg, j).first; }

Module simple(const AlgPtr& alg, int j) { return top_socle(proj(alg, j)).top.module; }

Module injective(const AlgPtr& alg, int j) {
  const AlgPtr op = opposite(alg);
  return dual(proj(op, j), alg);
}

std::vector<Index> dim_vector(const Module& m) {
  std::vector<Index> out;
  for (int j = 0; j < m.algebra()->num_idempotents(); ++j) out.push_back(rank(m.idempotent_action(j)));
  return out;
}

bool same_module(const Module& a, const Module& b) {
  if (a.dim() != b.dim()) return false;
  if (a.algebra() != b.algebra() && !same_algebra(*a.algebra(), *b.algebra())) return false;
  return a.actions() == b.actions();
}

std::vector<Mat> hom_basis(const Module& m, const Module& n) {
  check_same_algebra(m, n, "hom_space");
  const std::uint32_t p = m.prime();
  const Index dm = m.dim(), dn = n.dim();
  if (dm == 0 || dn == 0) return {};
  // Any module map sends M e_j into N e_j and kills M e_i for i != j, so the
  // block maps v * w^T with v in N e_j and w^T vanishing off M e_j span a
  // space containing Hom.
  std::vector<Mat> basis;
  for (int j = 0; j < m.algebra()->num_idempotents(); ++j) {
    const Mat& am = m.idempotent_action(j);
    const Mat u = column_basis(am);
    if (u.cols() == 0) continue;
    const Mat w = left_inverse(u) * am;
    const Mat v = column_basis(n.idempotent_action(j));
    for (Index a = 0; a < v.cols(); ++a)
      for (Index b = 0; b < w.rows(); ++b) basis.push_back(v.col(a) * w.row(b));
  }
  for (std::size_t g = 0; g < m.generator_actions().size() && !basis.empty(); ++g) {
    const Mat& gm = m.generator_actions()[g];
    const Mat& gn = n.generator_actions()[g];
    std::vector<Mat> residuals;
    residuals.reserve(basis.size());
    for (const auto& b : basis) residuals.push_back((b * gm - gn * b).vectorized());
    const Mat k = kernel_basis(hstack(residuals, dn * dm, p));
    if (k.cols() == static_cast<Index>(basis.size())) continue;
    std::vector<Mat> next;
    for (Index c = 0; c < k.cols(); ++c) {
      Mat f(dn, dm, p);
      for (Index t = 0; t < k.rows(); ++t)
        if (k(t, c) != 0) f += basis[static_cast<std::size_t>(t)].scaled(k(t, c));
      next.push_back(std::move(f));
    }
    basis = std::move(next);
  }
  return basis;
}

std::vector<ModMap> hom_space(const Module& m, const Module& n) {
  std::vector<ModMap> out;
  for (auto& f : hom_basis(m, n)) out.push_back({m, n, std::move(f)});
  return out;
}

Sub submodule(const Module& m, const Mat& basis) {
  const Mat u = column_basis(basis);
  const Mat l = left_inverse(u);
  std::vector<Mat> action;
  for (const auto& a : m.actions()) {
    const Mat au = a * u;
    const Mat restricted = l * au;
    if (u * restricted != au) throw ModuleError("submodule: subspace is not invariant");
    action.push_back(restricted);
  }
  Module s = make_module_unchecked(m.algebra(), std::move(action));
  return {s, {s, m, u}};
}


Mat submodule_closure(const Module& m, const Mat& vectors) {
  const std::uint32_t p = m.prime();
  if (vectors.cols() == 0) return Mat(m.dim(), 0, p);
  Mat cur = canonical_span(vectors);
  while (true) {
    std::vector<Mat> parts{cur};
    for (const auto& a : m.algebra()->idempotents()) parts.push_back(m.act(a) * cur);
    for (const auto& g : m.generator_actions()) parts.push_back(g * cur);
    Mat next = canonical_span(hstack(parts, m.dim(), p));
    if (next.cols() == cur.cols()) return next;
    cur = std::move(next);
  }
}

Quot quotient_module(const Module& m, const Mat& sub_basis) {
  const auto qs = quotient_structure(m.dim(), sub_basis);
  for (const auto& a : m.actions())
    if (!(qs.proj * a * (sub_basis)).is_zero()) throw ModuleError("quotient_module: subspace is not invariant");
  Module q = make_module_unchecked(m.algebra(), induced_actions(m, qs.proj, qs.section));
  return {q, {m, q, qs.proj}, qs.section};
}

Kci kci(const ModMap& f) {
  const std::uint32_t p = f.src.prime();
  Sub ker = submodule(f.src, kernel_basis(f.matrix));
  const Mat img = column_basis(f.matrix);
  Quot coker = quotient_module(f.dst, img);
  Sub image = submodule(f.dst, img.cols() == 0 ? Mat(f.dst.dim(), 0, p) : img);
  return {ker, coker, image};
}

DirectSum direct_sum(const AlgPtr& alg, const std::vector<Module>& parts) {
  const std::uint32_t p = alg->prime();
  Index total = 0;
  for (const auto& m : parts) {
    if (m.algebra() != alg && !same_algebra(*m.algebra(), *alg)) throw ModuleError("direct_sum: algebra mismatch");
    total += m.dim();
  }
  std::vector<Mat> action(static_cast<std::size_t>(alg->dim()), Mat(total, total, p));
  Index off = 0;
  for (const auto& m : parts) {
    for (int i = 0; i < alg->dim(); ++i) action[static_cast<std::size_t>(i)].set_block(off, off, m.action(i));
    off += m.dim();
  }
  DirectSum out;
  out.sum = make_module_unchecked(alg, std::move(action));
  off = 0;
  for (const auto& m : parts) {
    Mat inj(total, m.dim(), p);
    inj.set_block(off, 0, Mat::identity(m.dim(), p));
    out.injections.push_back({m, out.sum, inj});
    out.projections.push_back({out.sum, m, inj.transpose()});
    off += m.dim();
  }
  return out;
}

ModMap direct_sum_map(const DirectSum& src, const DirectSum& dst, const std::vector<ModMap>& diagonal) {
  if (diagonal.size() != src.injections.size() || diagonal.size() != dst.injections.size())
    throw ModuleError("direct_sum_map: component count mismatch");
  Mat m(dst.sum.dim(), src.sum.dim(), src.sum.prime());
  for (std::size_t k = 0; k < diagonal.size(); ++k)
    m += dst.injections[k].matrix * diagonal[k].matrix * src.projections[k].matrix;
  return {src.sum, dst.sum, m};
}

Mat radical_of(const Module& m) {
  const std::uint32_t p = m.prime();
  const Mat& rad = m.algebra()->radical();
  if (m.dim() == 0 || rad.cols() == 0) return Mat(m.dim(), 0, p);
  std::vector<Mat> parts;
  for (Index c = 0; c < rad.cols(); ++c) parts.push_back(m.act(rad.col(c)));
  return column_basis(hstack(parts, m.dim(), p));
}

TopSocle top_socle(const Module& m) {
  const std::uint32_t p = m.prime();
  Quot top = quotient_module(m, radical_of(m));
  const Mat& rad = m.algebra()->radical();
  Mat soc;
  if (rad.cols() == 0) {
    soc = Mat::identity(m.dim(), p);
  } else {
    std::vector<Mat> parts;
    for (Index c = 0; c < rad.cols(); ++c) parts.push_back(m.act(rad.col(c)));
    soc = kernel_basis(vstack(parts, m.dim(), p));
  }
  return {top, submodule(m, soc)};
}

Cover projective_cover(const Module& m) {
  const AlgPtr& alg = m.algebra();
  const std::uint32_t p = m.prime();
  if (m.dim() == 0) {
    const Module z = zero_module(alg);
    return {z, {z, m, Mat(0, 0, p)}, std::vector<int>(static_cast<std::size_t>(alg->num_idempotents()), 0)};
  }
  const Quot top = quotient_module(m, radical_of(m));
  std::vector<Module> parts;
  std::vector<Mat> columns;
  std::vector<int> mult;
  for (int j = 0; j < alg->num_idempotents(); ++j) {
    const Mat tj = column_basis(top.module.idempotent_action(j));
    mult.push_back(static_cast<int>(tj.cols()));
    if (tj.cols() == 0) continue;
    const auto [pj, u] = proj_with_basis(alg, j);
    for (Index c = 0; c < tj.cols(); ++c) {
      // Lift inside M e_j so the generator is fixed by e_j.
      const Mat v = m.idempotent_action(j) * top.section * tj.col(c);
      Mat block(m.dim(), u.cols(), p);
      for (Index k = 0; k < u.cols(); ++k) block.set_block(0, k, m.act(u.col(k)) * v);
      parts.push_back(pj);
      columns.push_back(block);
    }
  }
  const DirectSum ds = direct_sum(alg, parts);
  const Mat epi = hstack(columns, m.dim(), p);
  if (rank(epi) != m.dim()) throw ModuleError("projective_cover: internal inconsistency (not surjective)");
  if (!in_span(radical_of(ds.sum), kernel_basis(epi)))
    throw ModuleError("projective_cover: internal inconsistency (kernel not in radical)");
  return {ds.sum, make_map(ds.sum, m, epi), mult};
}

Module dual(const Module& m, const AlgPtr& opposite_alg) {
  const Algebra& a = *m.algebra();
  const Algebra& b = *opposite_alg;
  bool ok = a.dim() == b.dim() && a.prime() == b.prime();
  for (int i = 0; ok && i < a.dim(); ++i)
    for (int j = 0; ok && j < a.dim(); ++j)
      for (int k = 0; ok && k < a.dim(); ++k) ok = a.constant(i, j, k) == b.constant(j, i, k);
  if (!ok) throw ModuleError("dual: target algebra is not the opposite algebra");
  std::vector<Mat> action;
  for (const auto& x : m.actions()) action.push_back(x.transpose());
  return make_module_unchecked(opposite_alg, std::move(action));
}

Envelope injective_envelope(const Module& m) {
  const AlgPtr op = opposite(m.algebra());
  const Cover c = projective_cover(dual(m, op));
  const Module i = dual(c.module, m.algebra());
  return {i, make_map(m, i, c.epi.matrix.transpose())};
}

bool is_projective(const Module& m) { return projective_cover(m).module.dim() == m.dim(); }

bool is_injective(const Module& m) { return injective_envelope(m).module.dim() == m.dim(); }

std::vector<std::int64_t> eigenvalues(const Mat& a) {
  const std::uint32_t p = a.modulus();
  const Index n = a.rows();
  std::vector<std::int64_t> out;
  if (n == 0) return out;
  if (static_cast<Index>(p) <= n + 1) {
    for (std::int64_t l = 0; l < p; ++l)
      if (rank(a - Mat::identity(n, p).scaled(l)) < n) out.push_back(l);
    return out;
  }
  const auto cp = charpoly(a);
  for (std::int64_t l = 0; l < p; ++l) {
    std::int64_t v = 0;
    for (auto it = cp.rbegin(); it != cp.rend(); ++it) v = (v * l + *it) % p;
    if (v == 0) out.push_back(l);
  }
  return out;
}

bool is_nilpotent(const Mat& a) {
  const Index n = a.rows();
  if (n == 0) return true;
  Mat b = a;
  for (Index k = 1; k < n; k *= 2) {
    b = b * b;
    if (b.is_zero()) return true;
  }
  return b.is_zero();
}

bool is_invertible(const Mat& a) { return a.rows() == a.cols() && rank(a) == a.rows(); }

std::optional<ModMap> is_isomorphic(const Module& m, const Module& n) {
  check_same_algebra(m, n, "is_isomorphic");
  if (m.dim() != n.dim()) return std::nullopt;
  if (m.dim() == 0) return ModMap{m, n, Mat(0, 0, m.prime())};
  if (dim_vector(m) != dim_vector(n)) return std::nullopt;
  const auto h = hom_basis(m, n);
  if (h.empty()) return std::nullopt;
  auto found = [&](const Mat& f) -> std::optional<ModMap> {
    if (is_invertible(f)) return ModMap{m, n, f};
    return std::nullopt;
  };
  for (const auto& f : h)
    if (auto r = found(f)) return r;
  for (std::size_t i = 0; i < h.size(); ++i)
    for (std::size_t j = i + 1; j < h.size(); ++j)
      if (auto r = found(h[i] + h[j])) return r;
  const std::uint32_t p = m.prime();
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_int_distribution<std::int64_t> coef(0, p - 1);
  for (int t = 0; t < 200; ++t) {
    Mat f(n.dim(), m.dim(), p);
    for (const auto& b : h) f += b.scaled(coef(rng));
    if (auto r = found(f)) return r;
  }
  return std::nullopt;
}

namespace {

// A map psi with psi neither nilpotent nor invertible, if phi has such a shift.
std::optional<Mat> fitting_candidate(const Mat& phi) {
  const Index d = phi.rows();
  for (auto l : eigenvalues(phi)) {
    const Mat psi = phi - Mat::identity(d, phi.modulus()).scaled(l);
    if (!is_nilpotent(psi) && !is_invertible(psi)) return psi;
  }
  return std::nullopt;
}

// Basis of the (non-unital) algebra generated by the given matrices.
std::vector<Mat> generated_algebra(const std::vector<Mat>& gens, Index d, std::uint32_t p) {
  std::vector<Mat> basis;
  Mat span(d * d, 0, p);
  auto add = [&](const Mat& x) {
    if (x.is_zero()) return false;
    const Mat v = x.vectorized();
    if (span.cols() > 0 && in_span(span, v)) return false;
    span = hstack<std::int64_t>({span, v}, d * d, p);
    basis.push_back(x);
    return true;
  };
  for (const auto& g : gens) add(g);
  for (bool grew = true; grew;) {
    grew = false;
    const std::size_t n = basis.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) grew = add(basis[i] * basis[j]) || grew;
  }
  return basis;
}

bool algebra_is_nilpotent(const std::vector<Mat>& basis, Index d, std::uint32_t p) {
  std::vector<Mat> power = basis;
  for (Index k = 0; k <= d; ++k) {
    if (power.empty()) return true;
    std::vector<Mat> prods;
    for (const auto& a : power)
      for (const auto& b : basis) prods.push_back(a * b);
    const Mat span = canonical_span(vec_span(prods, d, d, p));
    power = unvec_columns(span, d, d);
  }
  return power.empty();
}

// Returns a splitting endomorphism, or nothing when End(m) is certified local.
std::optional<Mat> find_split(const std::vector<Mat>& end, Index d, std::uint32_t p) {
  for (const auto& e : end)
    if (auto psi = fitting_candidate(e)) return psi;
  for (std::size_t i = 0; i < end.size(); ++i)
    for (std::size_t j = i + 1; j < end.size(); ++j)
      if (auto psi = fitting_candidate(end[i] + end[j])) return psi;
  std::mt19937_64 rng(0xdec0ULL);
  std::uniform_int_distribution<std::int64_t> coef(0, p - 1);
  auto random_comb = [&](const std::vector<Mat>& from) {
    Mat f(d, d, p);
    for (const auto& b : from) f += b.scaled(coef(rng));
    return f;
  };
  for (int t = 0; t < 32; ++t)
    if (auto psi = fitting_candidate(random_comb(end))) return psi;
  // Locality certificate: each basis element is scalar plus nilpotent and the
  // nilpotent parts generate a nilpotent algebra.
  std::vector<Mat> nil;
  bool scalar_plus_nilpotent = true;
  for (const auto& e : end) {
    const auto ev = eigenvalues(e);
    if (ev.size() != 1) {
      scalar_plus_nilpotent = false;
      break;
    }
    nil.push_back(e - Mat::identity(d, p).scaled(ev.front()));
  }
  if (scalar_plus_nilpotent) {
    const auto gen = generated_algebra(nil, d, p);
    if (algebra_is_nilpotent(gen, d, p)) return std::nullopt;
    for (const auto& g : gen)
      if (auto psi = fitting_candidate(g)) return psi;
    for (int t = 0; t < 256; ++t)
      if (auto psi = fitting_candidate(random_comb(gen))) return psi;
  }
  for (int t = 0; t < 1024; ++t)
    if (auto psi = fitting_candidate(random_comb(end))) return psi;
  throw ModuleError("decompose: could not split or certify a module (splitting field may be required)");
}

struct Piece {
  Module module;
  Mat inclusion;   // original <- piece
  Mat projection;  // piece <- original
};

void split_into(const Piece& piece, std::vector<Piece>& out) {
  const Module& m = piece.module;
  const Index d = m.dim();
  if (d == 0) return;
  const std::uint32_t p = m.prime();
  const auto psi = find_split(hom_basis(m, m), d, p);
  if (!psi) {
    out.push_back(piece);
    return;
  }
  Mat power = *psi;
  for (Index k = 1; k < d; k *= 2) power = power * power;
  const Mat k = kernel_basis(power);
  const Mat im = column_basis(power);
  const Mat basis = hstack<std::int64_t>({k, im}, d, p);
  const auto inv = inverse(basis);
  if (!inv) throw ModuleError("decompose: Fitting decomposition is not a direct sum");
  const Mat pk = inv->block(0, 0, k.cols(), d);
  const Mat pi = inv->block(k.cols(), 0, im.cols(), d);
  const Sub sk = submodule(m, k);
  const Sub si = submodule(m, im);
  split_into({sk.module, piece.inclusion * sk.inclusion.matrix, pk * piece.projection}, out);
  split_into({si.module, piece.inclusion * si.inclusion.matrix, pi * piece.projection}, out);
}

}  // namespace

std::vector<Summand> decompose_with_maps(const Module& m) {
  std::vector<Piece> pieces;
  const Mat id = Mat::identity(m.dim(), m.prime());
  split_into({m, id, id}, pieces);
  std::vector<Summand> out;
  for (auto& pc : pieces) out.push_back({pc.module, {pc.module, m, pc.inclusion}, {m, pc.module, pc.projection}});
  return out;
}

std::vector<IsoClass> decompose(const Module& m) {
  std::vector<IsoClass> out;
  for (const auto& s : decompose_with_maps(m)) {
    bool matched = false;
    for (auto& c : out)
      if (is_isomorphic(c.module, s.module)) {
        ++c.multiplicity;
        matched = true;
        break;
      }
    if (!matched) out.push_back({s.module, 1});
  }
  std::stable_sort(out.begin(), out.end(), [](const IsoClass& a, const IsoClass& b) {
    if (a.module.dim() != b.module.dim()) return a.module.dim() < b.module.dim();
    return dim_vector(a.module) < dim_vector(b.module);
  });
  return out;
}

bool is_indecomposable(const Module& m) {
  return m.dim() > 0 && !find_split(hom_basis(m, m), m.dim(), m.prime());
}

std::vector<Mat> radical_morphisms(const Module& x, const Module& y, bool same) {
  if (!same) return hom_basis(x, y);
  const Index d = x.dim();
  const std::uint32_t p = x.prime();
  std::vector<Mat> nil;
  for (const auto& e : hom_basis(x, x)) {
    const auto ev = eigenvalues(e);
    if (ev.size() != 1) throw ModuleError("radical_morphisms: endomorphism ring is not local");
    nil.push_back(e - Mat::identity(d, p).scaled(ev.front()));
  }
  return unvec_columns(column_basis(vec_span(nil, d, d, p)), d, d);
}

void sort_modules(std::vector<Module>& mods) {
  std::stable_sort(mods.begin(), mods.end(), [](const Module& a, const Module& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    return dim_vector(a) < dim_vector(b);
  });
}

std::vector<NamedModule> name_modules(const std::vector<Module>& mods) {
  std::vector<NamedModule> out;
  std::map<std::string, int> seen;
  for (const auto& m : mods) {
    const auto dv = dim_vector(m);
    std::string name;
    if (m.dim() == 1) {
      for (std::size_t j = 0; j < dv.size(); ++j)
        if (dv[j] == 1) name = "S" + std::to_string(j + 1);
    } else {
      name = "[";
      for (std::size_t j = 0; j < dv.size(); ++j) name += std::string(static_cast<std::size_t>(dv[j]), static_cast<char>('1' + j));
      name += "]";
    }
    const int k = seen[name]++;
    if (k > 0) name += std::string(static_cast<std::size_t>(k), '\'');
    out.push_back({name, m});
  }
  return out;
}

namespace {

bool classifiable(const Algebra& a) {
  const std::string& n = a.name();
  const bool preset_name = n == "lambda1" || n == "lambda2" || n == "lambda3" || n == "ground_field" ||
                           n.rfind("truncpoly(", 0) == 0;
  if (!preset_name) return false;
  try {
    return same_algebra(a, *preset(n, a.prime()));
  } catch (const AlgebraError&) {
    return false;
  }
}

std::string span_key(const Mat& m) {
  std::ostringstream os;
  os << m.cols() << ':';
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) os << m(i, j) << ',';
  return os.str();
}

// All submodules of m, grown one socle vector of the current quotient at a time.
std::vector<Mat> all_submodules(const Module& m) {
  const std::uint32_t p = m.prime();
  const Index d = m.dim();
  std::vector<Mat> out;
  std::set<std::string> seen;
  std::vector<Mat> queue{Mat(d, 0, p)};
  seen.insert(span_key(queue.front()));
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Mat u = queue[head];
    out.push_back(u);
    if (u.cols() == d) continue;
    const Quot q = quotient_module(m, u);
    const Mat soc = top_socle(q.module).socle.inclusion.matrix;
    for (int j = 0; j < m.algebra()->num_idempotents(); ++j) {
      const Mat sj = column_basis(q.module.idempotent_action(j) * soc);
      const Index s = sj.cols();
      if (s == 0) continue;
      // Projective points of F_p^s.
      std::vector<std::int64_t> c(static_cast<std::size_t>(s), 0);
      for (Index lead = 0; lead < s; ++lead) {
        const Index free = s - lead - 1;
        std::int64_t total = 1;
        for (Index k = 0; k < free; ++k) total *= p;
        for (std::int64_t code = 0; code < total; ++code) {
          Mat w = sj.col(lead);
          std::int64_t x = code;
          for (Index k = lead + 1; k < s; ++k) {
            const std::int64_t coef = x % p;
            x /= p;
            if (coef != 0) w += sj.col(k).scaled(coef);
          }
          const Mat v = q.section * w;
          const Mat next = canonical_span(u.cols() == 0 ? v : hstack<std::int64_t>({u, v}, d, p));
          if (seen.insert(span_key(next)).second) queue.push_back(next);
        }
      }
    }
  }
  return out;
}

}  // namespace

std::vector<NamedModule> classify_indecomposables(const AlgPtr& alg) {
  if (!classifiable(*alg)) throw ModuleError("classify_indecomposables: only preset algebras are supported");
  if (alg->prime() != 2 && alg->prime() != 3)
    throw ModuleError("classify_indecomposables: search-space guard requires p in {2, 3}");
  const int n = alg->num_idempotents();
  std::vector<Module> found;
  auto consider = [&](const Module& q) {
    for (const auto& s : decompose_with_maps(q)) {
      bool dup = false;
      for (const auto& f : found)
        if (f.dim() == s.module.dim() && is_isomorphic(f, s.module)) {
          dup = true;
          break;
        }
      if (!dup) found.push_back(s.module);
    }
  };
  std::vector<Module> tops;
  for (int i = 0; i < n; ++i) tops.push_back(proj(alg, i));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) tops.push_back(direct_sum(alg, {proj(alg, i), proj(alg, j)}).sum);
  for (const auto& q : tops) {
    // Every module with top of dimension <= 2 is Q / V with V inside rad(Q).
    const Sub rad = submodule(q, radical_of(q));
    for (const auto& v : all_submodules(rad.module)) consider(quotient_module(q, rad.inclusion.matrix * v).module);
  }
  sort_modules(found);
  return name_modules(found);
}

int Quiver::arrow_count() const {
  int c = 0;
  for (const auto& a : arrows) c += a.multiplicity;
  return c;
}

Quiver quiver_from_radical(const std::vector<NamedModule>& vertices,
                           const std::function<std::vector<Mat>(int, int)>& extra) {
  Quiver q;
  const int n = static_cast<int>(vertices.size());
  for (const auto& v : vertices) q.vertices.push_back({v.name, v.module.dim(), dim_vector(v.module)});
  if (n == 0) return q;
  const std::uint32_t p = vertices.front().module.prime();
  std::vector<std::vector<std::vector<Mat>>> rad(static_cast<std::size_t>(n),
                                                 std::vector<std::vector<Mat>>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      rad[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          radical_morphisms(vertices[static_cast<std::size_t>(a)].module, vertices[static_cast<std::size_t>(b)].module, a == b);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const auto& r = rad[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (r.empty()) continue;
      const Index da = vertices[static_cast<std::size_t>(a)].module.dim();
      const Index db = vertices[static_cast<std::size_t>(b)].module.dim();
      std::vector<Mat> sq;
      for (int c = 0; c < n; ++c)
        for (const auto& f : rad[static_cast<std::size_t>(a)][static_cast<std::size_t>(c)])
          for (const auto& g : rad[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)]) sq.push_back(g * f);
      if (extra)
        for (auto& e : extra(a, b)) sq.push_back(std::move(e));
      const Index r1 = rank(vec_span(r, db, da, p));
      const Index r2 = sq.empty() ? 0 : rank(vec_span(sq, db, da, p));
      if (r1 > r2) q.arrows.push_back({a, b, static_cast<int>(r1 - r2)});
    }
  return q;
}

Quiver ar_quiver(const AlgPtr& alg) { return quiver_from_radical(classify_indecomposables(alg)); }

Module random_sum(const AlgPtr& alg, const std::vector<Module>& blocks, Index max_dim, std::mt19937_64& rng) {
  std::vector<Module> parts;
  Index total = 0;
  if (blocks.empty()) return zero_module(alg);
  std::uniform_int_distribution<int> count(1, 3);
  std::uniform_int_distribution<std::size_t> pick(0, blocks.size() - 1);
  const int k = count(rng);
  for (int t = 0; t < k; ++t) {
    const Module& b = blocks[pick(rng)];
    if (total + b.dim() > max_dim) continue;
    parts.push_back(b);
    total += b.dim();
  }
  if (parts.size() == 1) return parts.front();
  return direct_sum(alg, parts).sum;
}

}  // namespace homlab
