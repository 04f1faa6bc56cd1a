#include "homlab/frobenius.hpp"

#include <map>

namespace homlab {

namespace {

std::string dim_vector_string(const Module& m) {
  std::string s = "(";
  for (Index d : dim_vector(m)) s += (s.size() > 1 ? "," : "") + std::to_string(d);
  return s + ")";
}

Mat vectorize_all(const std::vector<Mat>& maps, Index rows, std::uint32_t p) {
  std::vector<Mat> v;
  for (const Mat& m : maps) v.push_back(m.vectorized());
  return hstack(v, rows, p);
}

}  // namespace

SelfInjectiveCert assert_self_injective(const AlgPtr& alg) {
  SelfInjectiveCert cert{alg, {}};
  const int r = alg->num_idempotents();
  for (int j = 0; j < r; ++j) {
    const Module inj = injective(alg, j);
    int match = -1;
    for (int k = 0; k < r && match < 0; ++k)
      if (is_isomorphic(inj, proj(alg, k))) match = k;
    if (match < 0)
      throw FrobeniusError(alg->name() + " is not self-injective: the injective hull of S" + std::to_string(j + 1) +
                           " (dimension vector " + dim_vector_string(inj) + ") is not projective");
    cert.nakayama.push_back(match);
  }
  return cert;
}

bool is_self_injective(const AlgPtr& alg) {
  try {
    assert_self_injective(alg);
    return true;
  } catch (const FrobeniusError&) {
    return false;
  }
}

std::vector<Mat> projective_factoring(const Module& m, const Module& n) {
  const auto p = m.prime();
  if (m.dim() == 0 || n.dim() == 0) return {};
  const Cover cover = projective_cover(n);
  std::vector<Mat> through;
  for (const Mat& h : hom_basis(m, cover.module)) through.push_back(cover.epi.matrix * h);
  const Mat span = column_basis(vectorize_all(through, n.dim() * m.dim(), p));
  std::vector<Mat> out;
  for (Index c = 0; c < span.cols(); ++c) out.push_back(Mat::unvectorized(span.col(c), n.dim(), m.dim()));
  return out;
}

StableHom stable_hom(const Module& m, const Module& n) {
  assert_self_injective(m.algebra());
  const auto p = m.prime();
  StableHom out;
  const auto factoring = projective_factoring(m, n);
  Mat span = vectorize_all(factoring, n.dim() * m.dim(), p);
  Index r = rank(span);
  for (const Mat& h : hom_basis(m, n)) {
    const Mat next = hstack(std::vector<Mat>{span, h.vectorized()}, span.rows(), p);
    const Index r2 = rank(next);
    if (r2 > r) {
      out.basis.push_back(h);
      span = next;
      r = r2;
    }
  }
  out.dim = static_cast<Index>(out.basis.size());
  return out;
}

Module syzygy(const Module& m) {
  assert_self_injective(m.algebra());
  return kci(projective_cover(m).epi).ker.module;
}

Module cosyzygy(const Module& m) {
  assert_self_injective(m.algebra());
  return kci(injective_envelope(m).mono).coker.module;
}

bool has_projective_summand(const Module& m) {
  for (const IsoClass& c : decompose(m))
    if (is_projective(c.module)) return true;
  return false;
}

namespace {

void check_projective_acyclic(const Complex& x) {
  for (int n = x.lo(); n <= x.hi(); ++n) {
    if (!is_projective(x.object(n)))
      throw FrobeniusError("component in degree " + std::to_string(n) + " is not projective");
    if (n > x.lo() && n < x.hi() && cohomology_at(x, n).module.dim() != 0)
      throw FrobeniusError("complex is not acyclic in degree " + std::to_string(n));
  }
}

Sub z0_sub(const Complex& x) { return submodule(x.object(0), kernel_basis(x.diff(0))); }

}  // namespace

Module z0(const Complex& x) {
  check_projective_acyclic(x);
  return z0_sub(x).module;
}

CompleteRes complete_resolution(const Module& m, int lo, int hi) {
  if (lo > -2 || hi < 2) throw FrobeniusError("complete_resolution: window must contain [-2, 2]");
  const AlgPtr& alg = m.algebra();
  assert_self_injective(alg);
  if (has_projective_summand(m)) throw FrobeniusError("complete_resolution: module has a projective summand");

  std::map<int, Module> obj;
  std::map<int, Mat> d;
  const Envelope env0 = injective_envelope(m);
  obj[0] = env0.module;
  Mat mono = env0.mono.matrix;
  for (int n = 0; n < hi; ++n) {
    const Quot q = quotient_module(obj[n], mono);
    const Envelope env = injective_envelope(q.module);
    obj[n + 1] = env.module;
    d[n] = env.mono.matrix * q.projection.matrix;
    mono = env.mono.matrix;
  }
  Module kmod = m;
  Mat incl = env0.mono.matrix;
  for (int n = -1; n >= lo; --n) {
    const Cover cover = projective_cover(kmod);
    obj[n] = cover.module;
    d[n] = incl * cover.epi.matrix;
    const Sub ker = kci(cover.epi).ker;
    kmod = ker.module;
    incl = ker.inclusion.matrix;
  }

  std::vector<Module> objects;
  std::vector<Mat> diffs;
  for (int n = lo; n <= hi; ++n) {
    objects.push_back(obj[n]);
    if (n < hi) diffs.push_back(d[n]);
  }
  CompleteRes out{m, lo, hi, make_complex(alg, lo, std::move(objects), std::move(diffs)), {}};
  check_projective_acyclic(out.cx);
  const Sub z = z0_sub(out.cx);
  out.z0_iso = make_map(m, z.module, left_inverse(z.inclusion.matrix) * env0.mono.matrix);
  if (z.module.dim() != m.dim() || rank(out.z0_iso.matrix) != m.dim())
    throw FrobeniusError("complete_resolution: Z^0 is not isomorphic to the module");
  return out;
}

Index stable_hom_via_cr(const Module& m, const Module& n, int lo, int hi) {
  const auto at = [&](int a, int b) {
    const Complex x = complete_resolution(m, a, b + 1).cx;
    const Complex y = complete_resolution(n, a - 1, b).cx;
    return khom_dim(x, y, 0);
  };
  const Index d = at(lo, hi);
  const Index wider = at(lo - 1, hi + 1);
  if (d != wider)
    throw FrobeniusError("stable_hom_via_cr: window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "] is not stable");
  return d;
}

StableCategory stable_indecomposables(const AlgPtr& alg) {
  assert_self_injective(alg);
  StableCategory out;
  for (const NamedModule& x : classify_indecomposables(alg))
    if (!is_projective(x.module)) out.vertices.push_back(x);
  const auto& v = out.vertices;
  out.quiver = quiver_from_radical(v, [&v](int i, int j) {
    return projective_factoring(v[static_cast<std::size_t>(i)].module, v[static_cast<std::size_t>(j)].module);
  });
  return out;
}

}  // namespace homlab
