#pragma once

// Stable module categories of self-injective algebras: stable Hom, syzygies,
// windowed complete resolutions and the Z^0 correspondence.

#include "homlab/complexes.hpp"

#include <string>
#include <vector>

namespace homlab {

class FrobeniusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SelfInjectiveCert {
  AlgPtr algebra;
  /// I(S_j) is isomorphic to P_{nakayama[j]}.
  std::vector<int> nakayama;
};
/// Throws FrobeniusError naming a non-projective indecomposable injective.
SelfInjectiveCert assert_self_injective(const AlgPtr& alg);
bool is_self_injective(const AlgPtr& alg);

struct StableHom {
  Index dim = 0;
  std::vector<Mat> basis;  // representatives of Hom(m, n) / P(m, n)
};
/// Hom(m, n) modulo maps factoring through the projective cover of n.
StableHom stable_hom(const Module& m, const Module& n);
/// Basis of P(m, n), the maps m -> n factoring through a projective.
std::vector<Mat> projective_factoring(const Module& m, const Module& n);

Module syzygy(const Module& m);
Module cosyzygy(const Module& m);
bool has_projective_summand(const Module& m);

/// Acyclic complex of projectives on the window [lo, hi] with Z^0 = ker d^0 = m:
/// injective envelopes of cosyzygies to the right, projective covers of
/// syzygies to the left.
struct CompleteRes {
  Module module;
  int lo = 0, hi = 0;
  Complex cx;
  ModMap z0_iso;  // module -> Z^0(cx)
};
CompleteRes complete_resolution(const Module& m, int lo, int hi);

/// ker d^0 of a complex of projectives that is acyclic strictly inside its support.
Module z0(const Complex& x);

/// dim H^0 Hom*(CR(m), CR(n)) with CR(m) on [lo, hi + 1] and CR(n) on [lo - 1, hi];
/// recomputed on a window wider by one at each end, the two must agree.
Index stable_hom_via_cr(const Module& m, const Module& n, int lo, int hi);

struct StableCategory {
  std::vector<NamedModule> vertices;
  Quiver quiver;
};
/// Non-projective indecomposables and the quiver of irreducible stable maps.
StableCategory stable_indecomposables(const AlgPtr& alg);

}  // namespace homlab
