#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homlab/derived.hpp"
#include "oracles.hpp"

using namespace homlab;

namespace {

Module top_of(const Module& m) { return quotient_module(m, radical_of(m)).module; }

Module sum_of(const AlgPtr& a, const std::vector<Module>& parts) { return direct_sum(a, parts).sum; }

std::vector<Module> lambda_blocks(const AlgPtr& a) {
  std::vector<Module> b;
  for (int j = 0; j < a->num_idempotents(); ++j) {
    b.push_back(proj(a, j));
    b.push_back(simple(a, j));
  }
  return b;
}

// Degree n of the slice computed straight from the definition: dim of (H^n X) e.
Index sliced_cohomology_dim(const Complex& x, int n, const Mat& e) {
  const Module h = cohomology_at(x, n).module;
  return h.dim() == 0 ? 0 : rank(h.act(e));
}

}  // namespace

TEST_CASE("projective resolutions of small modules") {
  const auto a = preset("lambda1", 3);
  const Resolution rp = proj_resolution(proj(a, 0), 4);
  CHECK(rp.res.length() == 1);
  CHECK_FALSE(rp.truncated);

  const Resolution rs = proj_resolution(simple(a, 0), 4);
  CHECK(rs.res.lo() == -1);
  CHECK(rs.res.hi() == 0);
  CHECK(is_isomorphic(rs.res.object(-1), proj(a, 1)));
  CHECK(is_isomorphic(rs.res.object(0), proj(a, 0)));
  CHECK(is_quasi_iso(rs.comparison));
  for (int n = rs.res.lo(); n <= rs.res.hi(); ++n) CHECK(is_projective(rs.res.object(n)));

  const auto l3 = preset("lambda3", 3);
  const Resolution r3 = proj_resolution(simple(l3, 0), 4);
  CHECK(r3.res.lo() == -2);
}

TEST_CASE("resolving a complex with two cohomology groups") {
  const auto a = preset("lambda1", 3);
  const Module s1 = simple(a, 0), s2 = simple(a, 1);
  const Complex x = make_complex(a, -1, {s2, s1}, {Mat(1, 1, 3)});
  const Resolution r = resolve_complex(x, 6);
  CHECK(is_quasi_iso(r.comparison));
  CHECK(is_isomorphic(cohomology_at(r.res, -1).module, s2));
  CHECK(is_isomorphic(cohomology_at(r.res, 0).module, s1));
  for (int n = r.res.lo(); n <= r.res.hi(); ++n) CHECK(is_projective(r.res.object(n)));
}

TEST_CASE("injective resolutions") {
  const auto a = preset("lambda1", 3);
  for (int j = 0; j < 3; ++j) {
    const Resolution r = inj_resolution(simple(a, j), 4);
    CHECK_FALSE(r.projective);
    CHECK(is_quasi_iso(r.comparison));
    for (int n = r.res.lo(); n <= r.res.hi(); ++n) CHECK(is_injective(r.res.object(n)));
  }
  const auto t = truncpoly(2, 3);
  const Resolution r = inj_resolution(simple(t, 0), 4);
  CHECK(r.truncated);
  CHECK(r.res.lo() == 0);
  CHECK(r.res.hi() == 4);
  for (int n = 0; n <= 4; ++n) CHECK(is_isomorphic(r.res.object(n), regular(t)));
  CHECK_THROWS_AS(proj_resolution(simple(preset("lambda1", 3), 0), 0), DerivedError);
}

TEST_CASE("Ext over the three quiver algebras") {
  const auto a = preset("lambda1", 3);
  CHECK(ext(simple(a, 0), simple(a, 1), 1, 6) == 1);
  CHECK(ext(simple(a, 0), simple(a, 2), 1, 6) == 0);
  CHECK(ext(simple(a, 1), simple(a, 2), 1, 6) == 1);
  CHECK(hom_derived(stalk(simple(a, 0), 0), stalk(simple(a, 1), 0), 1, 6) == 1);
  CHECK(ext(simple(preset("lambda3", 3), 0), simple(preset("lambda3", 3), 2), 2, 6) == 1);

  for (const char* name : {"lambda1", "lambda2"}) {
    const auto alg = preset(name, 2);
    const auto ind = classify_indecomposables(alg);
    for (const auto& x : ind)
      for (const auto& y : ind) {
        CHECK(ext(x.module, y.module, 0, 6) == oracle::hom_dim(x.module, y.module));
        CHECK(ext(x.module, y.module, 2, 6) == 0);
        CHECK(ext(x.module, y.module, 1, 6) <= 1);
      }
  }
}

TEST_CASE("Hom_D on stalks and against regular") {
  const auto a = preset("lambda1", 3);
  const auto ind = classify_indecomposables(preset("lambda1", 3));
  for (const auto& x : ind)
    for (const auto& y : ind) {
      CHECK(hom_derived(stalk(x.module, 0), stalk(y.module, 0), 0, 6) == oracle::hom_dim(x.module, y.module));
      CHECK(hom_derived(stalk(x.module, 0), stalk(y.module, 0), -1, 6) == 0);
    }
  std::mt19937_64 rng(7);
  const auto blocks = lambda_blocks(a);
  for (int trial = 0; trial < 6; ++trial) {
    const Complex y = random_complex(a, blocks, -1, 3, 5, rng);
    const auto h = cohomology_dims(y);
    for (int n = -2; n <= 2; ++n) {
      const Index expect = h.count(n) ? h.at(n) : 0;
      CHECK(hom_derived(stalk(regular(a), 0), y, n, 6) == expect);
    }
    // Replacing either side by its resolution changes nothing.
    const Complex x = random_complex(a, blocks, 0, 2, 4, rng);
    const Complex px = resolve_complex(x, 6).res, py = resolve_complex(y, 6).res;
    for (int n = -1; n <= 1; ++n) {
      const Index d = hom_derived(x, y, n, 6);
      CHECK(hom_derived(px, y, n, 6) == d);
      CHECK(hom_derived(x, py, n, 6) == d);
    }
  }
}

TEST_CASE("Ext over k[T]/T^2 with the stability guard") {
  const auto t = truncpoly(2, 3);
  const Module k = simple(t, 0);
  for (int n = 0; n <= 4; ++n) CHECK(ext(k, k, n, 6) == 1);
}

TEST_CASE("inverting quasi-isomorphisms") {
  const auto a = preset("lambda1", 3);
  const Complex x = stalk(simple(a, 0), 0);
  const IsoInD id = is_iso_in_D(identity_chain(x), 6);
  CHECK(id.iso);
  CHECK(id.cert.has_value());

  const Resolution r = resolve_complex(x, 6);
  const IsoInD c = is_iso_in_D(r.comparison, 6);
  REQUIRE(c.cert.has_value());
  CHECK(verify_homotopy(compose(r.comparison, c.cert->g), c.cert->dst_res.comparison, c.cert->fg));
  CHECK(verify_homotopy(compose(c.cert->g, c.cert->rho), c.cert->src_res.comparison, c.cert->grho));

  const Module p1 = proj(a, 0);
  const Mat q = top_socle(p1).top.projection.matrix;
  const ChainMap pi = make_chain_map(stalk(p1, 0), stalk(simple(a, 0), 0), {q});
  CHECK_FALSE(is_iso_in_D(pi, 6).iso);
}

TEST_CASE("dg endomorphisms of the resolution of all simples") {
  const auto a = preset("lambda1", 3);
  const Module s = sum_of(a, {simple(a, 0), simple(a, 1), simple(a, 2)});
  const Complex ps = proj_resolution(s, 6).res;
  const DGAlgebra dg = dg_end(ps);
  const auto h = dg_cohomology_dims(dg);
  CHECK(h.at(0) == 3);
  CHECK(h.at(1) == 2);
  for (const auto& [n, d] : h)
    if (n >= 2 || n < 0) CHECK(d == 0);
  CHECK(leibniz_holds(dg));
  CHECK(associativity_holds(dg));
  CHECK(unit_holds(dg));

  const DGAlgebra e = dg_end(stalk(proj(a, 0), 0));
  CHECK(dg_cohomology_dims(e).at(0) == static_cast<Index>(hom_basis(proj(a, 0), proj(a, 0)).size()));
}

TEST_CASE("idempotent slices") {
  const auto a = preset("lambda1", 3);
  const Slice all = idempotent_slice(a, {0, 1, 2});
  CHECK(all.gamma->dim() == a->dim());
  const Slice s = idempotent_slice(a, {0});
  CHECK(s.gamma->dim() == 1);
  CHECK(slice_module(s, regular(a)).dim() == 1);
  CHECK(slice_module(s, proj(a, 0)).dim() == 1);
  CHECK(slice_module(s, proj(a, 1)).dim() == 0);

  std::mt19937_64 rng(3);
  const auto blocks = lambda_blocks(a);
  for (int trial = 0; trial < 5; ++trial) {
    const Complex x = random_complex(a, blocks, -1, 3, 6, rng);
    for (const std::vector<int>& idx : {std::vector<int>{0}, std::vector<int>{1, 2}}) {
      const Slice sl = idempotent_slice(a, idx);
      const Complex xe = slice_complex(sl, x);
      for (int n = x.lo(); n <= x.hi(); ++n)
        CHECK(cohomology_at(xe, n).module.dim() == sliced_cohomology_dim(x, n, sl.e));
      const ChainMap f = random_chain_map(x, x, rng);
      CHECK(is_chain_map(slice_map(sl, f)));
    }
  }
}

TEST_CASE("tilting modules B and C") {
  const auto a = preset("lambda1", 2);
  const Module b = sum_of(a, {proj(a, 0), proj(a, 1), top_of(proj(a, 1))});
  const Module c = sum_of(a, {top_of(proj(a, 0)), proj(a, 0), proj(a, 2)});
  const TiltingReport rb = tilting_check(b, preset("lambda2", 2));
  CHECK(rb.end_dim == 5);
  CHECK(rb.iso_found);
  CHECK(rb.injective);
  const TiltingReport rc = tilting_check(c, preset("lambda3", 2));
  CHECK(rc.end_dim == 5);
  CHECK(rc.iso_found);
  CHECK(rc.injective);
  const TiltingReport rr = tilting_check(regular(a), a);
  CHECK(rr.iso_found);
  CHECK(rr.injective);
  // Over End(Lambda) the table is Hom(Lambda, x) = x in degree 0 only.
  for (const auto& row : rr.rows) CHECK(row.degree == 0);
  CHECK_THROWS_AS(end_algebra(sum_of(a, {proj(a, 0), proj(a, 0)})), DerivedError);
}

TEST_CASE("Hom into complexes of injectives") {
  const auto a = preset("lambda1", 3);
  for (int j = 0; j < 3; ++j) {
    const Module m = simple(a, j);
    const Complex ir = inj_resolution(m, 6).res;
    const auto [from_res, from_stalk] = khom_agreement(m, ir);
    CHECK(from_res >= 1);
    CHECK(from_res == from_stalk);
    for (int k = 0; k < 3; ++k)
      for (int s = -1; s <= 1; ++s) {
        const auto [r, st] = khom_agreement(m, stalk(injective(a, k), s));
        CHECK(r == st);
      }
  }
  CHECK_THROWS_AS(khom_agreement(simple(a, 0), stalk(simple(a, 1), 0)), DerivedError);
}
