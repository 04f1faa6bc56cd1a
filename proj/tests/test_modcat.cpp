#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homlab/modcat.hpp"
#include "oracles.hpp"

#include <set>

using namespace homlab;

TEST_CASE("named constructors over lambda1") {
  const auto a = preset("lambda1", 3);
  CHECK(regular(a).dim() == 6);
  CHECK(proj(a, 0).dim() == 3);
  CHECK(proj(a, 1).dim() == 2);
  CHECK(proj(a, 2).dim() == 1);
  for (int j = 0; j < 3; ++j) CHECK(simple(a, j).dim() == 1);
  CHECK(zero_module(a).dim() == 0);
}

TEST_CASE("make_module rejects an incompatible action") {
  const auto a = preset("lambda3", 2);
  auto act = proj(a, 0).actions();
  act[1] = act[1] + Mat::identity(act[1].rows(), 2);
  CHECK_THROWS_AS(make_module(a, act), ModuleError);
  CHECK_NOTHROW(make_module(a, proj(a, 0).actions()));
}

TEST_CASE("hom spaces agree with the intertwiner oracle") {
  for (std::uint32_t p : {2u, 3u}) {
    for (const char* name : {"lambda1", "lambda2", "lambda3"}) {
      const auto a = preset(name, p);
      std::vector<Module> mods{regular(a)};
      for (int j = 0; j < a->num_idempotents(); ++j) {
        mods.push_back(proj(a, j));
        mods.push_back(simple(a, j));
        mods.push_back(injective(a, j));
      }
      for (const auto& m : mods)
        for (const auto& n : mods) {
          const auto h = hom_basis(m, n);
          CHECK(static_cast<Index>(h.size()) == oracle::hom_dim(m, n));
          for (const auto& f : h) CHECK_NOTHROW(make_map(m, n, f));
        }
    }
  }
  const auto a = preset("lambda1", 2);
  CHECK(hom_space(proj(a, 0), simple(a, 0)).size() == 1);
  CHECK(hom_space(proj(a, 2), proj(a, 0)).size() == 1);
  CHECK(hom_space(simple(a, 1), simple(a, 1)).size() == 1);
}

TEST_CASE("kernel, cokernel and image") {
  const auto a = preset("lambda1", 2);
  const Module p2 = proj(a, 1), s2 = simple(a, 1);
  const auto h = hom_space(p2, s2);
  REQUIRE(h.size() == 1);
  const Kci k = kci(h.front());
  CHECK(k.ker.module.dim() == 1);
  CHECK(k.coker.module.dim() == 0);
  CHECK(is_isomorphic(k.ker.module, simple(a, 2)));
  const Kci id = kci(identity_map(p2));
  CHECK(id.ker.module.dim() == 0);
  CHECK(id.image.module.dim() == 2);
  const Kci z = kci(zero_map(p2, s2));
  CHECK(z.ker.module.dim() == 2);
  CHECK(z.coker.module.dim() == 1);
}

TEST_CASE("direct sums and decomposition") {
  const auto a = preset("lambda1", 3);
  CHECK(direct_sum(a, {}).sum.dim() == 0);
  const auto parts = decompose(regular(a));
  REQUIRE(parts.size() == 3);
  for (const auto& c : parts) CHECK(c.multiplicity == 1);
  // P1 + P2 + P2/soc.
  const Module p2 = proj(a, 1);
  const Module q = kci(hom_space(p2, simple(a, 1)).front()).image.module;
  const Module b = direct_sum(a, {proj(a, 0), p2, q}).sum;
  CHECK(b.dim() == 6);
  CHECK(decompose(b).size() == 3);
  const auto ds = direct_sum(a, {p2, p2});
  const auto with_maps = decompose_with_maps(ds.sum);
  REQUIRE(with_maps.size() == 2);
  Mat sum(ds.sum.dim(), ds.sum.dim(), 3);
  for (const auto& s : with_maps) {
    CHECK(s.projection.matrix * s.inclusion.matrix == Mat::identity(s.module.dim(), 3));
    sum += s.inclusion.matrix * s.projection.matrix;
  }
  CHECK(sum == Mat::identity(ds.sum.dim(), 3));
  CHECK(decompose(ds.sum).front().multiplicity == 2);
}

TEST_CASE("top, socle, covers and envelopes") {
  const auto a = preset("lambda1", 2);
  const auto ts = top_socle(proj(a, 0));
  CHECK(ts.top.module.dim() == 1);
  CHECK(is_isomorphic(ts.top.module, simple(a, 0)));
  CHECK(top_socle(regular(truncpoly(3, 2))).socle.module.dim() == 1);
  const Cover c = projective_cover(simple(a, 0));
  CHECK(c.module.dim() == 3);
  CHECK(kci(c.epi).ker.module.dim() == 2);
  CHECK(is_isomorphic(kci(c.epi).ker.module, proj(a, 1)));
  const Envelope e = injective_envelope(simple(a, 2));
  CHECK(e.module.dim() == 3);
  CHECK(injective_envelope(zero_module(a)).module.dim() == 0);
  const auto t = truncpoly(3, 3);
  CHECK(is_injective(regular(t)));
  CHECK(is_projective(regular(t)));
  CHECK_FALSE(is_projective(simple(t, 0)));
}

TEST_CASE("double dual returns the module") {
  const auto a = preset("lambda2", 3);
  const auto op = opposite(a);
  for (int j = 0; j < 3; ++j) {
    const Module m = proj(a, j);
    CHECK(same_module(dual(dual(m, op), a), m));
  }
}

TEST_CASE("isomorphism tests") {
  const auto a = preset("lambda1", 2);
  CHECK(is_isomorphic(proj(a, 1), submodule(proj(a, 0), radical_of(proj(a, 0))).module));
  CHECK_FALSE(is_isomorphic(simple(a, 0), simple(a, 1)));
}

TEST_CASE("classification counts and dims") {
  for (std::uint32_t p : {2u, 3u}) {
    const auto l1 = classify_indecomposables(preset("lambda1", p));
    CHECK(l1.size() == 6);
    std::multiset<Index> dims;
    for (const auto& m : l1) dims.insert(m.module.dim());
    CHECK(dims == std::multiset<Index>{1, 1, 1, 2, 2, 3});
    CHECK(classify_indecomposables(preset("lambda2", p)).size() == 6);
    CHECK(classify_indecomposables(preset("lambda3", p)).size() == 5);
    CHECK(classify_indecomposables(truncpoly(3, p)).size() == 3);
  }
  CHECK_THROWS_AS(classify_indecomposables(preset("lambda1", 101)), ModuleError);
}

TEST_CASE("AR quivers") {
  CHECK(ar_quiver(ground_field(2)).vertices.size() == 1);
  CHECK(ar_quiver(ground_field(2)).arrow_count() == 0);
  for (std::uint32_t p : {2u, 3u}) {
    const Quiver q = ar_quiver(preset("lambda1", p));
    CHECK(q.vertices.size() == 6);
    CHECK(q.arrow_count() == 6);
    const Quiver t = ar_quiver(truncpoly(3, p));
    CHECK(t.vertices.size() == 3);
    CHECK(t.arrow_count() == 4);
  }
}

TEST_CASE("eigenvalues at a large prime") {
  const Mat m = Mat::from_rows(1000003, {{2, 1}, {0, 5}});
  CHECK(eigenvalues(m) == std::vector<std::int64_t>{2, 5});
}
