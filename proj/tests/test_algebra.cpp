#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homlab/algebra.hpp"

using namespace homlab;

TEST_CASE("preset dimensions") {
  CHECK(preset("lambda1", 2)->dim() == 6);
  CHECK(preset("lambda2", 2)->dim() == 5);
  CHECK(preset("lambda3", 3)->dim() == 5);
  CHECK(truncpoly(4, 3)->loewy_length() == 4);
  CHECK(ground_field(101)->is_semisimple());
  CHECK_THROWS_AS(preset("nope", 2), AlgebraError);
}

TEST_CASE("radical generators live in Peirce corners") {
  const auto a = preset("lambda1", 3);
  CHECK(a->radical_generators().size() == 2);  // E12, E23; E13 = E12 E23
  const auto t = truncpoly(3, 2);
  CHECK(t->radical_generators().size() == 1);
}

TEST_CASE("make_algebra rejects a non-associative table") {
  AlgebraSpec s = spec_of(*preset("lambda3", 2));
  s.structconst[static_cast<std::size_t>((1 * 5 + 3) * 5 + 1)] = 1;  // E12*E23 := E12
  CHECK_THROWS_AS(make_algebra(s), AlgebraError);
}

TEST_CASE("make_algebra rejects a wrong unit and non-orthogonal idempotents") {
  AlgebraSpec s = spec_of(*preset("lambda1", 2));
  s.unit[0] = 0;
  CHECK_THROWS_AS(make_algebra(s), AlgebraError);
  AlgebraSpec t = spec_of(*preset("lambda1", 2));
  t.idempotents[1] = t.idempotents[0];
  CHECK_THROWS_AS(make_algebra(t), AlgebraError);
}

TEST_CASE("opposite is an involution") {
  for (const char* n : {"lambda1", "lambda2", "lambda3"}) {
    const auto a = preset(n, 3);
    CHECK(same_algebra(*opposite(opposite(a)), *a));
  }
}

TEST_CASE("iso search finds the identity and rejects non-isomorphic algebras") {
  const auto a = preset("lambda1", 2);
  const auto iso = algebra_iso_search(*a, *preset("lambda1", 2));
  REQUIRE(iso);
  CHECK(is_algebra_map(*a, *a, iso->forward));
  CHECK_FALSE(algebra_iso_search(*preset("lambda2", 2), *preset("lambda3", 2)));
  CHECK_FALSE(algebra_iso_search(*preset("lambda1", 2), *preset("lambda3", 2)));
}

TEST_CASE("lambda3 and lambda2^op") {
  // Linear A3 with two orientations; the opposite of a zigzag is a zigzag.
  const auto l2 = preset("lambda2", 2);
  CHECK(algebra_iso_search(*opposite(l2), *l2).has_value() == algebra_iso_search(*l2, *opposite(l2)).has_value());
}
