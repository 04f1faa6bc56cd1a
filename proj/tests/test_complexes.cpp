#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homlab/complexes.hpp"

using namespace homlab;

namespace {

std::vector<Module> lambda1_blocks(const AlgPtr& a) {
  std::vector<Module> b;
  for (int j = 0; j < 3; ++j) {
    b.push_back(proj(a, j));
    b.push_back(simple(a, j));
  }
  return b;
}

// P2 -> P1, the inclusion of the radical, in degrees -1, 0.
Complex p2_into_p1(const AlgPtr& a) {
  const Module p1 = proj(a, 0), p2 = proj(a, 1);
  const auto h = hom_basis(p2, p1);
  REQUIRE(h.size() == 1);
  return make_complex(a, -1, {p2, p1}, {h.front()});
}

std::int64_t euler(const std::map<int, Index>& dims) {
  std::int64_t e = 0;
  for (auto [n, d] : dims) e += (n % 2 == 0 ? 1 : -1) * d;
  return e;
}

}  // namespace

TEST_CASE("stalks and the two-term projective complex") {
  const auto a = preset("lambda1", 3);
  const auto dims = cohomology_dims(stalk(simple(a, 0), 0));
  CHECK(dims.at(0) == 1);
  const Complex c = p2_into_p1(a);
  const auto h = cohomology_dims(c);
  CHECK(h.at(-1) == 0);
  CHECK(h.at(0) == 1);
  CHECK(is_isomorphic(cohomology_at(c, 0).module, simple(a, 0)));
}

TEST_CASE("d o d != 0 is rejected") {
  const auto t = truncpoly(2, 2);
  const Module r = regular(t);
  const Mat tmul = r.action(1);
  CHECK_NOTHROW(make_complex(t, 0, {r, r, r}, {tmul, tmul}));
  CHECK_THROWS_AS(make_complex(t, 0, {r, r, r}, {Mat::identity(2, 2), Mat::identity(2, 2)}), ComplexError);
}

TEST_CASE("acyclic complex of projectives over k[T]/T^2") {
  const auto t = truncpoly(2, 3);
  const Module r = regular(t);
  const Mat tmul = r.action(1);
  const Complex c = make_complex(t, -2, {r, r, r, r, r}, {tmul, tmul, tmul, tmul});
  const auto h = cohomology_dims(c);
  for (int n = -1; n <= 1; ++n) CHECK(h.at(n) == 0);
}

TEST_CASE("shift") {
  const auto a = preset("lambda1", 3);
  std::mt19937_64 rng(11);
  const Complex x = random_complex(a, lambda1_blocks(a), -1, 4, 5, rng);
  CHECK(same_complex(shift(x, 0), x));
  CHECK(same_complex(shift(shift(x, 1), -1), x));
  const auto hx = cohomology_dims(x), hs = cohomology_dims(shift(x, 1));
  for (auto [n, d] : hs) CHECK(d == hx.at(n + 1));
}

TEST_CASE("cones") {
  const auto a = preset("lambda1", 2);
  const Module p1 = proj(a, 0), p2 = proj(a, 1);
  const Complex x = stalk(p2, 0), y = stalk(p1, 0);
  const ChainMap f = make_chain_map(x, y, {hom_basis(p2, p1).front()});
  const Triangle t = cone(f);
  CHECK(validate_triangle(t));
  CHECK(long_exact_sequence_holds(t));
  const auto h = cohomology_dims(t.z);
  CHECK(h.at(0) == 1);
  CHECK(h.at(-1) == 0);
  const Triangle ci = cone(identity_chain(y));
  CHECK(null_homotopy(identity_chain(ci.z), zero_graded(ci.z, ci.z)).has_value());
  for (auto [n, d] : cohomology_dims(ci.z)) CHECK(d == 0);
}

TEST_CASE("null homotopies are exact") {
  const auto a = preset("lambda1", 2);
  const Complex s = stalk(simple(a, 0), 0);
  CHECK_FALSE(null_homotopy(identity_chain(s), zero_graded(s, s)).has_value());
  CHECK(null_homotopy(identity_chain(s), identity_chain(s)).has_value());
}

TEST_CASE("hom complex of stalks and Hom in K") {
  const auto a = preset("lambda1", 3);
  const Module m = proj(a, 0), n = simple(a, 0);
  const HomComplex hc = hom_complex(stalk(m, 0), stalk(n, 0));
  CHECK(hc.dim(0) == 1);
  const Complex pres = p2_into_p1(a);  // resolution of S1
  CHECK(khom_dim(pres, stalk(simple(a, 1), 0), 0) == 0);
  CHECK(khom_dim(pres, stalk(simple(a, 1), 0), 1) == 1);
  CHECK(khom_dim(pres, stalk(simple(a, 0), 0), 0) == 1);
}

TEST_CASE("hom complex squares to zero and satisfies Leibniz on random data") {
  const auto a = preset("lambda1", 2);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const Complex x = random_complex(a, lambda1_blocks(a), 0, 3, 4, rng);
    const Complex y = random_complex(a, lambda1_blocks(a), 0, 3, 4, rng);
    const HomComplex hc = hom_complex(x, y);
    for (int n = hc.cx.lo(); n < hc.cx.hi(); ++n) CHECK((hc.cx.diff(n + 1) * hc.cx.diff(n)).is_zero());
    const ChainMap f = random_chain_map(x, y, rng);
    CHECK(is_chain_map(f));
  }
}

TEST_CASE("triangles: rotation, sums, fill-ins") {
  const auto a = preset("lambda1", 2);
  std::mt19937_64 rng(3);
  const Complex x = random_complex(a, lambda1_blocks(a), 0, 2, 4, rng);
  const Complex y = random_complex(a, lambda1_blocks(a), 0, 2, 4, rng);
  const ChainMap f = random_chain_map(x, y, rng);
  const Triangle t = cone(f);
  const Triangle r = rotate(t);
  CHECK(validate_triangle(r));
  const Triangle r3 = rotate(rotate(r));
  CHECK(same_complex(r3.x, shift(x, 1)));
  CHECK(same_complex(r3.y, shift(y, 1)));
  CHECK(same_complex(r3.z, shift(t.z, 1)));
  CHECK(validate_triangle(sum_triangles({t, cone(identity_chain(x))})));
  const auto phi = fill_in(t, t, identity_chain(x), identity_chain(y));
  REQUIRE(phi);
  CHECK(homotopy_inverse(*phi).has_value());
}

TEST_CASE("fill-in ambiguity over the ground field") {
  const auto k = ground_field(2);
  const Module s = simple(k, 0);
  const Complex sx = stalk(s, 0), ssig = stalk(s, -1);
  // X = S, Y = Sigma S, f = 0: Hom(Sigma X, Y) is nonzero, so fill-ins differ.
  const Triangle t = cone(zero_graded(sx, ssig));
  const auto w = fillin_ambiguity(t);
  REQUIRE(w);
  CHECK_FALSE(same_map(w->first, w->second));
  CHECK_FALSE(null_homotopy(w->first, w->second).has_value());
  // With Y = S the fill-in of (id, id) is unique up to homotopy.
  CHECK_FALSE(fillin_ambiguity(cone(zero_graded(sx, sx))).has_value());
}

TEST_CASE("octahedron") {
  const auto a = preset("lambda1", 2);
  const Module p1 = proj(a, 0), p2 = proj(a, 1);
  const Complex x = stalk(p2, 0), y = stalk(p1, 0);
  const ChainMap f = make_chain_map(x, y, {hom_basis(p2, p1).front()});
  const Module q = kci(hom_space(p1, simple(a, 0)).front()).image.module;
  const Complex z = stalk(q, 0);
  const ChainMap g = make_chain_map(y, z, {hom_basis(p1, q).front()});
  const Octahedron o = octahedron(f, g);
  CHECK(validate_octahedron(o));
  const Octahedron oid = octahedron(identity_chain(x), f);
  CHECK(validate_octahedron(oid));
}

TEST_CASE("semisimple split") {
  const auto k = ground_field(3);
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    const Complex x = random_complex(k, {simple(k, 0)}, -1, 4, 3, rng);
    const SemisimpleSplit s = semisimple_split(x);
    CHECK(verify_equivalence(s.equivalence));
    for (auto [n, d] : cohomology_dims(x)) CHECK(s.stalks.dim(n) == d);
  }
  const Module one = simple(k, 0);
  const Complex id = make_complex(k, 0, {one, one}, {Mat::identity(1, 3)});
  CHECK(semisimple_split(id).stalks.is_zero());
  CHECK_THROWS_AS(semisimple_split(stalk(simple(preset("lambda1", 3), 0), 0)), ComplexError);
}

TEST_CASE("split sequences") {
  const auto a = preset("lambda1", 3);
  const Module s3 = simple(a, 2), p2 = proj(a, 1), s2 = simple(a, 1);
  const Complex x = stalk(s3, 0), y = stalk(p2, 0), z = stalk(s2, 0);
  const ChainMap i = make_chain_map(x, y, {hom_basis(s3, p2).front()});
  const ChainMap p = make_chain_map(y, z, {hom_basis(p2, s2).front()});
  CHECK_THROWS_AS(split_seq_to_triangle(i, p), ComplexError);
  // X -> X + Z -> Z
  const DirectSum ds = direct_sum(a, {s3, s2});
  const Complex yy = stalk(ds.sum, 0);
  const Triangle t = split_seq_to_triangle(make_chain_map(x, yy, {ds.injections[0].matrix}),
                                           make_chain_map(yy, z, {ds.projections[1].matrix}));
  CHECK(validate_triangle(t));
  CHECK(t.h.at(0).is_zero());
}

TEST_CASE("truncation") {
  const auto a = preset("lambda1", 2);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 5; ++t) {
    const Complex x = random_complex(a, lambda1_blocks(a), -2, 5, 5, rng);
    CHECK(same_complex(truncate(x, 10), x));
    CHECK(truncate(x, -10).is_zero());
    const Complex tr = truncate(x, 0);
    const auto hx = cohomology_dims(x), ht = cohomology_dims(tr);
    for (int n = -2; n <= 0; ++n) CHECK(ht.at(n) == hx.at(n));
    CHECK(euler(ht) == [&] { std::int64_t e = 0; for (int n = tr.lo(); n <= tr.hi(); ++n) e += (n % 2 == 0 ? 1 : -1) * tr.dim(n); return e; }());
  }
}
