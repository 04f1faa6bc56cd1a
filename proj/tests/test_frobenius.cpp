#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homlab/frobenius.hpp"

#include <string>

using namespace homlab;

namespace {

// k[T]/T^j as a module over k[T]/T^n.
Module truncated(const AlgPtr& t, int j) { return quotient_module(regular(t), t->radical_power(j)).module; }

// Span of maps m -> n factoring through the injective envelope of m.
Index factoring_via_envelope(const Module& m, const Module& n) {
  if (m.dim() == 0 || n.dim() == 0) return 0;
  const Envelope env = injective_envelope(m);
  std::vector<Mat> v;
  for (const Mat& h : hom_basis(env.module, n)) v.push_back((h * env.mono.matrix).vectorized());
  return rank(hstack(v, n.dim() * m.dim(), m.prime()));
}

}  // namespace

TEST_CASE("self-injectivity certificates") {
  for (int n = 2; n <= 5; ++n) {
    const auto cert = assert_self_injective(truncpoly(n, 3));
    CHECK(cert.nakayama == std::vector<int>{0});
  }
  CHECK(is_self_injective(ground_field(5)));
  try {
    assert_self_injective(preset("lambda1", 3));
    FAIL("lambda1 accepted");
  } catch (const FrobeniusError& e) {
    CHECK(std::string(e.what()).find("S1") != std::string::npos);
  }
}

TEST_CASE("stable Hom") {
  const auto t2 = truncpoly(2, 3);
  const Module k = simple(t2, 0);
  CHECK(stable_hom(k, k).dim == 1);
  CHECK(stable_hom(regular(t2), k).dim == 0);
  CHECK(stable_hom(k, regular(t2)).dim == 0);
  CHECK_THROWS_AS(stable_hom(simple(preset("lambda1", 3), 0), simple(preset("lambda1", 3), 0)), FrobeniusError);

  const auto t4 = truncpoly(4, 3);
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      const Module a = truncated(t4, i), b = truncated(t4, j);
      CHECK(static_cast<Index>(projective_factoring(a, b).size()) == factoring_via_envelope(a, b));
      const Index expect = hom_basis(a, b).size() - projective_factoring(a, b).size();
      CHECK(stable_hom(a, b).dim == expect);
      if (i == 4 || j == 4) CHECK(stable_hom(a, b).dim == 0);
    }
}

TEST_CASE("syzygies") {
  const auto t5 = truncpoly(5, 3);
  CHECK(syzygy(regular(t5)).dim() == 0);
  for (int j = 1; j < 5; ++j) {
    CHECK(is_isomorphic(syzygy(truncated(t5, j)), truncated(t5, 5 - j)));
    CHECK(is_isomorphic(cosyzygy(syzygy(truncated(t5, j))), truncated(t5, j)));
    CHECK(is_isomorphic(syzygy(cosyzygy(truncated(t5, j))), truncated(t5, j)));
  }
  const auto t3 = truncpoly(3, 2);
  CHECK(is_isomorphic(cosyzygy(syzygy(simple(t3, 0))), simple(t3, 0)));
}

TEST_CASE("complete resolutions") {
  const auto t2 = truncpoly(2, 3);
  const CompleteRes cr = complete_resolution(simple(t2, 0), -3, 3);
  for (int n = -3; n <= 3; ++n) CHECK(is_isomorphic(cr.cx.object(n), regular(t2)));
  // Multiplication by T up to a change of basis: the image is the radical of the next term.
  for (int n = -3; n < 3; ++n) {
    CHECK(rank(cr.cx.diff(n)) == 1);
    CHECK(canonical_span(cr.cx.diff(n)) == canonical_span(radical_of(cr.cx.object(n + 1))));
  }
  CHECK(is_isomorphic(z0(cr.cx), simple(t2, 0)));

  const auto t4 = truncpoly(4, 3);
  const CompleteRes c2 = complete_resolution(truncated(t4, 2), -3, 3);
  for (int n = -3; n < 3; ++n) CHECK(rank(c2.cx.diff(n)) == 2);
  for (int n = -2; n <= 2; ++n) CHECK(cohomology_at(c2.cx, n).module.dim() == 0);

  CHECK_THROWS_AS(complete_resolution(direct_sum(t4, {regular(t4), simple(t4, 0)}).sum, -3, 3), FrobeniusError);
  CHECK_THROWS_AS(complete_resolution(simple(t4, 0), -1, 3), FrobeniusError);
}

TEST_CASE("Z0 and shifts") {
  const auto t4 = truncpoly(4, 3);
  for (int j = 1; j < 4; ++j) {
    const Module m = truncated(t4, j);
    const CompleteRes cr = complete_resolution(m, -4, 4);
    CHECK(is_isomorphic(z0(cr.cx), m));
    CHECK(is_isomorphic(z0(shift(cr.cx, 1)), cosyzygy(m)));
    CHECK(is_isomorphic(z0(shift(cr.cx, -1)), syzygy(m)));
  }
  const auto t2 = truncpoly(2, 3);
  const Module r = regular(t2);
  const Complex contractible = make_complex(t2, -1, {r, r}, {Mat::identity(2, 3)});
  CHECK(is_projective(z0(contractible)));
  CHECK_THROWS_AS(z0(stalk(simple(t2, 0), 0)), FrobeniusError);
}

TEST_CASE("stable Hom through complete resolutions") {
  for (int n = 2; n <= 4; ++n) {
    const auto t = truncpoly(n, 3);
    for (int i = 1; i < n; ++i) {
      for (int j = 1; j < n; ++j) {
        const Module a = truncated(t, i), b = truncated(t, j);
        CHECK(stable_hom_via_cr(a, b, -3, 3) == stable_hom(a, b).dim);
      }
      CHECK(stable_hom_via_cr(truncated(t, i), zero_module(t), -3, 3) == 0);
    }
  }
}

TEST_CASE("stable Auslander-Reiten quivers") {
  const auto q2 = stable_indecomposables(truncpoly(2, 2));
  CHECK(q2.vertices.size() == 1);
  CHECK(q2.quiver.arrow_count() == 0);
  const auto q3 = stable_indecomposables(truncpoly(3, 2));
  CHECK(q3.vertices.size() == 2);
  CHECK(q3.quiver.arrow_count() == 2);
  for (int n = 2; n <= 5; ++n) CHECK(stable_indecomposables(truncpoly(n, 3)).vertices.size() == static_cast<std::size_t>(n - 1));
  CHECK(stable_indecomposables(ground_field(2)).vertices.empty());
}
