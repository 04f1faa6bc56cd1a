#include "homlab/derived.hpp"

#include <algorithm>
#include <set>

namespace homlab {

namespace {

std::int64_t sign(int k) { return (k % 2 == 0) ? 1 : -1; }

Mat stack_rows(const Mat& top, const Mat& bottom, Index cols, std::uint32_t p) {
  return vstack(std::vector<Mat>{top, bottom}, cols, p);
}

}  // namespace

Resolution resolve_complex(const Complex& x, int cap) {
  if (cap < 1) throw DerivedError("resolve_complex: cap must be at least 1");
  const AlgPtr& alg = x.algebra();
  const auto p = x.prime();
  Resolution out;
  out.target = x;
  out.projective = true;
  out.cap = cap;
  if (x.length() == 0) {
    out.res = zero_complex(alg);
    out.comparison = zero_graded(out.res, x);
    return out;
  }

  // Built downwards; P^{hi+1} = 0.
  std::map<int, Module> obj;
  std::map<int, Mat> d, phi;
  const Module zero = zero_module(alg);
  const auto object = [&](int n) -> const Module& {
    const auto it = obj.find(n);
    return it == obj.end() ? zero : it->second;
  };
  const auto diff = [&](int n) {
    const auto it = d.find(n);
    return it == d.end() ? Mat(object(n + 1).dim(), object(n).dim(), p) : it->second;
  };
  const auto comp = [&](int n) {
    const auto it = phi.find(n);
    return it == phi.end() ? Mat(x.dim(n), object(n).dim(), p) : it->second;
  };

  int n = x.hi();
  for (;; --n) {
    const Module& above = object(n + 1);
    const Module& xn = x.object(n);
    const Index a = above.dim(), b = xn.dim();
    // Cycles of the partial cone: (q, y) with d q = 0 and phi q = d_X y.
    const Mat top = hstack(std::vector<Mat>{diff(n + 1), Mat(object(n + 2).dim(), b, p)}, object(n + 2).dim(), p);
    const Mat bottom = hstack(std::vector<Mat>{comp(n + 1), x.diff(n).scaled(-1)}, x.dim(n + 1), p);
    const Mat w = kernel_basis(stack_rows(top, bottom, a + b, p));
    if (w.cols() == 0) {
      if (n < x.lo()) break;
      continue;
    }
    if (n < x.lo() - cap) {
      if (alg->finite_global_dimension())
        throw DerivedError("resolution cap " + std::to_string(cap) + " exhausted with a syzygy of dimension " +
                           std::to_string(w.cols()));
      out.truncated = true;
      break;
    }
    const DirectSum ambient = direct_sum(alg, {above, xn});
    const Sub sub = submodule(ambient.sum, w);
    const Cover cover = projective_cover(sub.module);
    const Mat eps = sub.inclusion.matrix * cover.epi.matrix;
    obj[n] = cover.module;
    d[n] = eps.block(0, 0, a, eps.cols());
    phi[n] = eps.block(a, 0, b, eps.cols());
  }

  const int lo = n + 1;
  const int hi = std::max(x.hi(), lo);
  std::vector<Module> objects;
  std::vector<Mat> diffs, comps;
  for (int k = lo; k <= hi; ++k) {
    objects.push_back(object(k));
    comps.push_back(comp(k));
    if (k < hi) diffs.push_back(diff(k));
  }
  out.res = make_complex(alg, lo, std::move(objects), std::move(diffs));
  out.comparison = make_chain_map(out.res, x, std::move(comps));
  if (!out.truncated && !is_quasi_iso(out.comparison))
    throw DerivedError("resolve_complex: comparison is not a quasi-isomorphism");
  return out;
}

Resolution proj_resolution(const Module& m, int cap) {
  Resolution r = resolve_complex(stalk(m, 0), cap);
  return r;
}

Resolution inj_resolution(const Module& m, int cap) {
  const AlgPtr& alg = m.algebra();
  const AlgPtr opp = opposite(alg);
  const Resolution pr = proj_resolution(dual(m, opp), cap);
  const Complex& pc = pr.res;
  std::vector<Module> objects;
  std::vector<Mat> diffs;
  const int top = -pc.lo();
  for (int k = 0; k <= top; ++k) {
    objects.push_back(dual(pc.object(-k), alg));
    if (k < top) diffs.push_back(pc.diff(-k - 1).transpose());
  }
  Resolution out;
  out.target = stalk(m, 0);
  out.res = make_complex(alg, 0, std::move(objects), std::move(diffs));
  out.comparison = make_chain_map(out.target, out.res, {pr.comparison.at(0).transpose()});
  out.projective = false;
  out.cap = cap;
  out.truncated = pr.truncated;
  if (!out.truncated && !is_quasi_iso(out.comparison))
    throw DerivedError("inj_resolution: comparison is not a quasi-isomorphism");
  return out;
}

namespace {

Index guarded_hom(const Complex& x, const Complex& y, int n, int cap) {
  const Resolution r = resolve_complex(x, cap);
  const Index d = khom_dim(r.res, y, n);
  if (r.truncated) {
    const Index d2 = khom_dim(resolve_complex(x, cap + 2).res, y, n);
    if (d != d2)
      throw DerivedError("Hom_D unstable at cap " + std::to_string(cap) + " (" + std::to_string(d) + " vs " +
                         std::to_string(d2) + "); raise the cap");
  }
  return d;
}

}  // namespace

Index hom_derived(const Complex& x, const Complex& y, int n, int cap) { return guarded_hom(x, y, n, cap); }

Index ext(const Module& m, const Module& n, int degree, int cap) {
  if (degree < 0) throw DerivedError("ext: negative degree");
  return guarded_hom(stalk(m, 0), stalk(n, 0), degree, cap);
}

IsoInD is_iso_in_D(const ChainMap& f, int cap) {
  if (!is_chain_map(f)) throw DerivedError("is_iso_in_D: not a chain map");
  IsoInD out;
  out.iso = is_quasi_iso(f);
  if (!out.iso) return out;
  IsoInD::Certificate c;
  c.src_res = resolve_complex(f.src, cap);
  c.dst_res = resolve_complex(f.dst, cap);
  const bool exact = !c.src_res.truncated && !c.dst_res.truncated;
  const auto g = factor_through(f, c.dst_res.comparison);
  const auto rho = g ? factor_through(c.dst_res.comparison, compose(f, c.src_res.comparison)) : std::nullopt;
  if (!g || !rho) {
    if (exact) throw DerivedError("is_iso_in_D: no inverse found for a quasi-isomorphism");
    return out;
  }
  c.g = *g;
  c.rho = *rho;
  const auto fg = null_homotopy(compose(f, c.g), c.dst_res.comparison);
  const auto grho = null_homotopy(compose(c.g, c.rho), c.src_res.comparison);
  if (!fg || !grho) {
    if (exact) throw DerivedError("is_iso_in_D: round trips are not homotopic to the comparisons");
    return out;
  }
  c.fg = *fg;
  c.grho = *grho;
  out.cert = std::move(c);
  return out;
}

Mat DGAlgebra::product(int a, const Mat& u, int b, const Mat& v) const {
  const auto p = hom.x.prime();
  const auto it = mult.find({a, b});
  if (it == mult.end()) return Mat(dim(a + b), 1, p);
  Mat w(u.rows() * v.rows(), 1, p);
  for (Index i = 0; i < u.rows(); ++i)
    for (Index j = 0; j < v.rows(); ++j) w.set(i * v.rows() + j, 0, u(i, 0) * v(j, 0));
  return it->second * w;
}

DGAlgebra dg_end(const Complex& pc) {
  DGAlgebra a{hom_complex(pc, pc), {}, {}};
  const auto p = pc.prime();
  std::map<int, std::vector<GradedMap>> basis;
  for (int n = a.lo(); n <= a.hi(); ++n)
    for (Index i = 0; i < a.dim(n); ++i) basis[n].push_back(a.hom.map(n, Mat::unit_vector(a.dim(n), i, p)));
  for (const auto& [da, ba] : basis)
    for (const auto& [db, bb] : basis) {
      if (ba.empty() || bb.empty() || a.dim(da + db) == 0) continue;
      Mat m(a.dim(da + db), static_cast<Index>(ba.size() * bb.size()), p);
      for (std::size_t i = 0; i < ba.size(); ++i)
        for (std::size_t j = 0; j < bb.size(); ++j)
          m.set_block(0, static_cast<Index>(i * bb.size() + j), a.hom.coords(compose(ba[i], bb[j])));
      a.mult[{da, db}] = m;
    }
  a.unit = a.hom.coords(identity_chain(pc));
  return a;
}

bool leibniz_holds(const DGAlgebra& a) {
  const auto p = a.hom.x.prime();
  const Complex& cx = a.hom.cx;
  for (int da = a.lo(); da <= a.hi(); ++da)
    for (int db = a.lo(); db <= a.hi(); ++db)
      for (Index i = 0; i < a.dim(da); ++i)
        for (Index j = 0; j < a.dim(db); ++j) {
          const Mat u = Mat::unit_vector(a.dim(da), i, p), v = Mat::unit_vector(a.dim(db), j, p);
          const Mat lhs = cx.diff(da + db) * a.product(da, u, db, v);
          const Mat rhs = a.product(da + 1, cx.diff(da) * u, db, v) +
                          a.product(da, u, db + 1, cx.diff(db) * v).scaled(sign(da));
          if (lhs != rhs) return false;
        }
  return true;
}

bool associativity_holds(const DGAlgebra& a) {
  const auto p = a.hom.x.prime();
  for (const auto& [ab, mab] : a.mult) {
    const auto [da, db] = ab;
    for (int dc = a.lo(); dc <= a.hi(); ++dc) {
      for (Index i = 0; i < a.dim(da); ++i)
        for (Index j = 0; j < a.dim(db); ++j)
          for (Index k = 0; k < a.dim(dc); ++k) {
            const Mat u = Mat::unit_vector(a.dim(da), i, p), v = Mat::unit_vector(a.dim(db), j, p),
                      w = Mat::unit_vector(a.dim(dc), k, p);
            const Mat left = a.product(da + db, a.product(da, u, db, v), dc, w);
            const Mat right = a.product(da, u, db + dc, a.product(db, v, dc, w));
            if (left != right) return false;
          }
    }
  }
  return true;
}

bool unit_holds(const DGAlgebra& a) {
  const auto p = a.hom.x.prime();
  if (!(a.hom.cx.diff(0) * a.unit).is_zero()) return false;
  for (int n = a.lo(); n <= a.hi(); ++n)
    for (Index i = 0; i < a.dim(n); ++i) {
      const Mat e = Mat::unit_vector(a.dim(n), i, p);
      if (a.product(0, a.unit, n, e) != e || a.product(n, e, 0, a.unit) != e) return false;
    }
  return true;
}

std::map<int, Index> dg_cohomology_dims(const DGAlgebra& a) { return cohomology_dims(a.hom.cx); }

Slice idempotent_slice(const AlgPtr& alg, std::vector<int> idx) {
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  if (idx.empty()) throw DerivedError("idempotent_slice: no idempotents given");
  for (int j : idx)
    if (j < 0 || j >= alg->num_idempotents()) throw DerivedError("idempotent_slice: bad idempotent index");
  const auto p = alg->prime();
  const Index n = alg->dim();

  Slice s;
  s.base = alg;
  s.idempotents = idx;
  s.e = Mat(n, 1, p);
  for (int j : idx) s.e += alg->idempotents()[static_cast<std::size_t>(j)];
  std::vector<Mat> cols, rad;
  for (int i : idx)
    for (int k : idx) {
      cols.push_back(alg->corner(i, k));
      rad.push_back(alg->corner_of(alg->radical(), i, k));
    }
  s.embedding = hstack(cols, n, p);
  const Mat left = left_inverse(s.embedding);
  const auto coords = [&](const Mat& v) {
    const Mat c = left * v;
    if (s.embedding * c != v) throw DerivedError("idempotent_slice: element outside eAe");
    return c;
  };
  const auto to_vec = [](const Mat& c) {
    std::vector<std::int64_t> out;
    for (Index i = 0; i < c.rows(); ++i) out.push_back(c(i, 0));
    return out;
  };

  AlgebraSpec spec;
  spec.prime = p;
  spec.dim = static_cast<int>(s.embedding.cols());
  const auto g = static_cast<Index>(spec.dim);
  for (Index u = 0; u < g; ++u) {
    const Mat c = s.embedding.col(u);
    Index nz = 0, at = 0;
    for (Index i = 0; i < n; ++i)
      if (c(i, 0) != 0) ++nz, at = i;
    spec.labels.push_back(nz == 1 && c(at, 0) == 1 ? alg->labels()[static_cast<std::size_t>(at)]
                                                    : "g" + std::to_string(u + 1));
  }
  spec.structconst.assign(static_cast<std::size_t>(g * g * g), 0);
  for (Index u = 0; u < g; ++u)
    for (Index v = 0; v < g; ++v) {
      const Mat c = coords(alg->multiply(s.embedding.col(u), s.embedding.col(v)));
      for (Index k = 0; k < g; ++k) spec.structconst[static_cast<std::size_t>((u * g + v) * g + k)] = c(k, 0);
    }
  spec.unit = to_vec(coords(s.e));
  for (int j : idx) spec.idempotents.push_back(to_vec(coords(alg->idempotents()[static_cast<std::size_t>(j)])));
  const Mat r = hstack(rad, n, p);
  for (Index c = 0; c < r.cols(); ++c) spec.radical.push_back(to_vec(coords(r.col(c))));
  spec.name = alg->name() + "_e";
  for (int j : idx) spec.name += std::to_string(j + 1);
  s.gamma = make_algebra(spec);
  return s;
}

namespace {

struct SlicedObject {
  Module module;
  Mat basis;  // columns span M e
  Mat retraction;
};

SlicedObject slice_object(const Slice& s, const Module& m) {
  if (!same_algebra(*m.algebra(), *s.base)) throw DerivedError("slice: module over a different algebra");
  SlicedObject out;
  out.basis = column_basis(m.act(s.e));
  if (out.basis.cols() == 0) {
    out.module = zero_module(s.gamma);
    out.retraction = Mat(0, m.dim(), m.prime());
    return out;
  }
  out.retraction = left_inverse(out.basis);
  std::vector<Mat> action;
  for (Index u = 0; u < s.embedding.cols(); ++u)
    action.push_back(out.retraction * m.act(s.embedding.col(u)) * out.basis);
  out.module = make_module(s.gamma, std::move(action));
  return out;
}

}  // namespace

Module slice_module(const Slice& s, const Module& m) { return slice_object(s, m).module; }

Complex slice_complex(const Slice& s, const Complex& x) {
  std::vector<SlicedObject> parts;
  for (int n = x.lo(); n <= x.hi(); ++n) parts.push_back(slice_object(s, x.object(n)));
  std::vector<Module> objects;
  std::vector<Mat> diffs;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    objects.push_back(parts[k].module);
    if (k + 1 < parts.size())
      diffs.push_back(parts[k + 1].retraction * x.diff(x.lo() + static_cast<int>(k)) * parts[k].basis);
  }
  return make_complex(s.gamma, x.lo(), std::move(objects), std::move(diffs));
}

ChainMap slice_map(const Slice& s, const ChainMap& f) {
  const Complex src = slice_complex(s, f.src), dst = slice_complex(s, f.dst);
  std::vector<Mat> comps;
  for (int n = f.src.lo(); n <= f.src.hi(); ++n) {
    const SlicedObject a = slice_object(s, f.src.object(n)), b = slice_object(s, f.dst.object(n + f.degree));
    comps.push_back(b.retraction * f.at(n) * a.basis);
  }
  return make_graded(src, dst, f.degree, std::move(comps));
}

Complex idempotent_slice(const Complex& x, const std::vector<int>& idempotents) {
  return slice_complex(idempotent_slice(x.algebra(), idempotents), x);
}

EndAlgebra end_algebra(const Module& t) {
  const auto p = t.prime();
  EndAlgebra out;
  out.summands = decompose_with_maps(t);
  const std::size_t s = out.summands.size();
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = a + 1; b < s; ++b)
      if (is_isomorphic(out.summands[a].module, out.summands[b].module))
        throw DerivedError("end_algebra: module is not basic");
  const auto embed = [&](std::size_t a, std::size_t b, const Mat& h) {
    return out.summands[b].inclusion.matrix * h * out.summands[a].projection.matrix;
  };
  for (std::size_t a = 0; a < s; ++a)
    out.basis.push_back(embed(a, a, Mat::identity(out.summands[a].module.dim(), p)));
  for (std::size_t a = 0; a < s; ++a)
    for (std::size_t b = 0; b < s; ++b) {
      const Module& ta = out.summands[a].module;
      const Module& tb = out.summands[b].module;
      const auto rad = radical_morphisms(ta, tb, a == b);
      if (a == b && rad.size() + 1 != hom_basis(ta, ta).size())
        throw DerivedError("end_algebra: summand endomorphism ring is not split local");
      for (const Mat& h : rad) out.basis.push_back(embed(a, b, h));
    }
  const auto n = static_cast<Index>(out.basis.size());
  std::vector<Mat> vecs;
  for (const Mat& m : out.basis) vecs.push_back(m.vectorized());
  const Mat v = hstack(vecs, t.dim() * t.dim(), p);
  if (rank(v) != n) throw DerivedError("end_algebra: adapted basis is dependent");
  const Mat left = left_inverse(v);

  AlgebraSpec spec;
  spec.prime = p;
  spec.dim = static_cast<int>(n);
  spec.name = "End(T)";
  spec.structconst.assign(static_cast<std::size_t>(n * n * n), 0);
  for (Index i = 0; i < n; ++i) {
    const bool idem = i < static_cast<Index>(s);
    spec.labels.push_back(idem ? "e" + std::to_string(i + 1) : "r" + std::to_string(i + 1 - static_cast<Index>(s)));
    std::vector<std::int64_t> unitvec(static_cast<std::size_t>(n), 0);
    unitvec[static_cast<std::size_t>(i)] = 1;
    (idem ? spec.idempotents : spec.radical).push_back(unitvec);
    for (Index j = 0; j < n; ++j) {
      const Mat prod = (out.basis[static_cast<std::size_t>(i)] * out.basis[static_cast<std::size_t>(j)]).vectorized();
      const Mat c = left * prod;
      if (v * c != prod) throw DerivedError("end_algebra: composite outside the basis span");
      for (Index k = 0; k < n; ++k) spec.structconst[static_cast<std::size_t>((i * n + j) * n + k)] = c(k, 0);
    }
  }
  spec.unit.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t a = 0; a < s; ++a) spec.unit[a] = 1;
  out.algebra = make_algebra(spec);
  return out;
}

namespace {

using Profile = std::map<int, Module>;

// H^n Hom*(P, y) as right modules over End(T), acting through the lifts.
Profile rhom_profile(const Complex& pc, const std::vector<ChainMap>& lifts, const AlgPtr& gamma, const Complex& y) {
  const HomComplex hc = hom_complex(pc, y);
  Profile out;
  for (int n = hc.cx.lo(); n <= hc.cx.hi(); ++n) {
    const CohomologyData cd = cohomology_at(hc.cx, n);
    const Index h = cd.module.dim();
    if (h == 0) continue;
    std::vector<Mat> action;
    for (const ChainMap& lift : lifts) {
      Mat a(h, h, pc.prime());
      for (Index k = 0; k < h; ++k) {
        const Mat z = cd.cycles * cd.section.col(k);
        const Mat w = hc.coords(compose(hc.map(n, z), lift));
        const auto c = solve(cd.cycles, w);
        if (!c) throw DerivedError("tilting_check: action does not preserve cycles");
        a.set_block(0, k, cd.proj * *c);
      }
      action.push_back(a);
    }
    out[n] = make_module(gamma, std::move(action));
  }
  return out;
}

bool same_profile(const Profile& a, const Profile& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [n, m] : a) {
    const auto it = b.find(n);
    if (it == b.end() || !is_isomorphic(m, it->second)) return false;
  }
  return true;
}

std::string describe(const Module& m) {
  std::vector<std::string> parts;
  for (const IsoClass& c : decompose(m)) {
    const std::string name = name_modules({c.module}).front().name;
    parts.push_back(c.multiplicity == 1 ? name : std::to_string(c.multiplicity) + "*" + name);
  }
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& s : parts) out += (out.empty() ? "" : "+") + s;
  return out;
}

}  // namespace

TiltingReport tilting_check(const Module& t, const AlgPtr& target, int shift_lo, int shift_hi, int cap) {
  TiltingReport rep;
  rep.shift_lo = shift_lo;
  rep.shift_hi = shift_hi;
  const EndAlgebra ea = end_algebra(t);
  rep.end_dim = ea.algebra->dim();
  if (algebra_iso_search(*ea.algebra, *target)) {
    rep.iso_found = true;
    rep.side = "End";
  } else if (algebra_iso_search(*opposite(ea.algebra), *target)) {
    rep.iso_found = true;
    rep.side = "End^op";
  }

  const Resolution pr = proj_resolution(t, cap);
  if (pr.truncated) throw DerivedError("tilting_check: module has no finite projective resolution within the cap");
  const Complex st = stalk(t, 0);
  std::vector<ChainMap> lifts;
  for (const Mat& phi : ea.basis) {
    const auto lift = factor_through(pr.comparison, compose(make_chain_map(st, st, {phi}), pr.comparison));
    if (!lift) throw DerivedError("tilting_check: endomorphism does not lift to the resolution");
    lifts.push_back(*lift);
  }

  std::vector<Profile> profiles;
  for (const NamedModule& x : classify_indecomposables(t.algebra()))
    for (int s = shift_lo; s <= shift_hi; ++s) {
      profiles.push_back(rhom_profile(pr.res, lifts, ea.algebra, stalk(x.module, s)));
      if (s != 0) continue;
      for (const auto& [n, m] : profiles.back()) rep.rows.push_back({x.name, describe(m), n, m.dim()});
    }
  rep.injective = true;
  for (std::size_t i = 0; i < profiles.size() && rep.injective; ++i)
    for (std::size_t j = i + 1; j < profiles.size(); ++j)
      if (same_profile(profiles[i], profiles[j])) {
        rep.injective = false;
        break;
      }
  return rep;
}

std::pair<Index, Index> khom_agreement(const Module& m, const Complex& x, int cap) {
  for (int n = x.lo(); n <= x.hi(); ++n)
    if (!is_injective(x.object(n)))
      throw DerivedError("khom_agreement: component in degree " + std::to_string(n) + " is not injective");
  const Resolution r = inj_resolution(m, cap);
  return {khom_dim(r.res, x, 0), khom_dim(stalk(m, 0), x, 0)};
}

}  // namespace homlab
