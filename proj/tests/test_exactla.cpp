#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "homlab/exactla.hpp"

#include <random>

using namespace homlab;

namespace {

Mat random_mat(Index r, Index c, std::uint32_t p, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> d(0, p - 1);
  Mat m(r, c, p);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) m.set(i, j, d(rng));
  return m;
}

}  // namespace

TEST_CASE("field arithmetic") {
  Fp a(3, 7), b(5, 7);
  CHECK((a * b).residue() == 1);
  CHECK((a / b * b) == a);
  CHECK((-a).residue() == 4);
  CHECK_THROWS_AS(Fp(1, 8), LinalgError);
  CHECK_THROWS_AS(Fp(0, 5).inverse(), LinalgError);
}

TEST_CASE("rref of a small matrix") {
  const Mat m = Mat::from_rows(5, {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
  const auto r = rref(m);
  CHECK(r.rank() == 2);
  CHECK(r.pivots == std::vector<Index>{0, 1});
  CHECK(kernel_basis(m).cols() == 1);
  CHECK((m * kernel_basis(m)).is_zero());
}

TEST_CASE("solve reports inconsistency and shape errors") {
  const Mat a = Mat::from_rows(3, {{1, 0}, {0, 0}});
  CHECK_FALSE(solve(a, Mat::from_rows(3, {{1}, {1}})).has_value());
  CHECK(solve(a, Mat::from_rows(3, {{2}, {0}})).has_value());
  CHECK_THROWS_AS(solve(a, Mat(3, 1, 3)), LinalgError);
}

TEST_CASE("rank-nullity, quotient and inverse on random matrices") {
  std::mt19937_64 rng(7);
  for (std::uint32_t p : {2u, 3u, 101u}) {
    for (int t = 0; t < 30; ++t) {
      const Index r = 1 + t % 5, c = 1 + (t * 3) % 6;
      const Mat m = random_mat(r, c, p, rng);
      const Mat k = kernel_basis(m);
      CHECK(rank(m) + k.cols() == c);
      CHECK((m * k).is_zero());
      const auto q = quotient_structure(r, m);
      CHECK((q.proj * m).is_zero());
      CHECK(q.proj * q.section == Mat::identity(q.dim(), p));
      CHECK(q.dim() == r - rank(m));
      const Mat sq = random_mat(4, 4, p, rng);
      if (auto inv = inverse(sq)) CHECK(*inv * sq == Mat::identity(4, p));
      else CHECK(rank(sq) < 4);
      const Mat b = column_basis(m);
      CHECK(left_inverse(b) * b == Mat::identity(b.cols(), p));
      CHECK(canonical_span(m) == canonical_span(b));
    }
  }
}

TEST_CASE("vectorize round trip") {
  const Mat m = Mat::from_rows(7, {{1, 2, 3}, {4, 5, 6}});
  CHECK(Mat::unvectorized(m.vectorized(), 2, 3) == m);
}
