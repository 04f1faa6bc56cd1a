#pragma once

// Independent brute-force references used by the unit and acceptance tests.

#include "homlab/modcat.hpp"

namespace oracle {

using homlab::Index;
using homlab::Mat;

/// dim Hom(M, N) from the full intertwining system over every basis element.
inline Index hom_dim(const homlab::Module& m, const homlab::Module& n) {
  const Index dm = m.dim(), dn = n.dim();
  const auto p = m.prime();
  if (dm == 0 || dn == 0) return 0;
  const int k = m.algebra()->dim();
  // Unknown f (dn x dm) row-major; equation f*A - B*f = 0 for every basis action.
  Mat sys(k * dn * dm, dn * dm, p);
  for (int i = 0; i < k; ++i) {
    const Mat& a = m.action(i);
    const Mat& b = n.action(i);
    for (Index r = 0; r < dn; ++r)
      for (Index c = 0; c < dm; ++c) {
        const Index row = (i * dn + r) * dm + c;
        for (Index t = 0; t < dm; ++t) sys.set(row, r * dm + t, sys(row, r * dm + t) + a(t, c));
        for (Index t = 0; t < dn; ++t) sys.set(row, t * dm + c, sys(row, t * dm + c) - b(r, t));
      }
  }
  return dn * dm - homlab::rank(sys);
}

}  // namespace oracle
