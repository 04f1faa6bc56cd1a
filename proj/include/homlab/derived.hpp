#pragma once

// Derived-category computations through resolutions: Hom_D and Ext, inverses
// of quasi-isomorphisms, dg endomorphism algebras, idempotent slices and the
// verification of tilting modules.

#include "homlab/complexes.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace homlab {

class DerivedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Resolution {
  Complex target;
  Complex res;
  /// res -> target for projective resolutions, target -> res for injective ones.
  ChainMap comparison;
  bool projective = true;
  int cap = 0;
  /// Cut off after `cap` steps with a nonzero syzygy left (infinite global dimension).
  bool truncated = false;
};

/// Quasi-isomorphism P -> x with projective components, descending from the top
/// degree: P^n covers the cycles of the partial mapping cone. At most `cap`
/// degrees below x.lo(); running out is an error over algebras of finite
/// global dimension and sets `truncated` otherwise.
Resolution resolve_complex(const Complex& x, int cap);
Resolution proj_resolution(const Module& m, int cap);
/// Dual of the minimal projective resolution of the dual module.
Resolution inj_resolution(const Module& m, int cap);

/// dim Hom_D(x, Sigma^n y). Truncated resolutions are recomputed at cap + 2
/// and must agree.
Index hom_derived(const Complex& x, const Complex& y, int n, int cap);
Index ext(const Module& m, const Module& n, int degree, int cap);

struct IsoInD {
  bool iso = false;
  /// Present when iso: g: P_dst -> src with f g ~ pi_dst, and rho: P_src -> P_dst
  /// lifting f pi_src with g rho ~ pi_src.
  struct Certificate {
    Resolution src_res, dst_res;
    ChainMap g, rho;
    Homotopy fg, grho;
  };
  std::optional<Certificate> cert;
};
IsoInD is_iso_in_D(const ChainMap& f, int cap);

/// End complex Hom*(P, P) with composition as product.
struct DGAlgebra {
  HomComplex hom;
  /// mult[{a, b}]: dim(a+b) x (dim(a) dim(b)); column i*dim(b)+j is basis_a[i] o basis_b[j].
  std::map<std::pair<int, int>, Mat> mult;
  Mat unit;  // degree-0 coordinates of the identity

  int lo() const { return hom.cx.lo(); }
  int hi() const { return hom.cx.hi(); }
  Index dim(int degree) const { return hom.dim(degree); }
  Mat product(int a, const Mat& u, int b, const Mat& v) const;
};
DGAlgebra dg_end(const Complex& p);
bool leibniz_holds(const DGAlgebra& a);
bool associativity_holds(const DGAlgebra& a);
/// D(unit) = 0 and the unit is a two-sided identity on every basis element.
bool unit_holds(const DGAlgebra& a);
std::map<int, Index> dg_cohomology_dims(const DGAlgebra& a);

/// Gamma = e A e for e a sum of designated idempotents, with X -> X e.
struct Slice {
  AlgPtr base;
  AlgPtr gamma;
  std::vector<int> idempotents;
  Mat embedding;  // columns: Gamma basis inside A
  Mat e;
};
Slice idempotent_slice(const AlgPtr& alg, std::vector<int> idempotents);
Module slice_module(const Slice& s, const Module& m);
Complex slice_complex(const Slice& s, const Complex& x);
ChainMap slice_map(const Slice& s, const ChainMap& f);
Complex idempotent_slice(const Complex& x, const std::vector<int>& idempotents);

/// End(T) as an algebra with product x*y = x o y, basis adapted to the summands
/// of T: idempotents, then radical morphisms between summands. Throws when T is
/// not basic.
struct EndAlgebra {
  AlgPtr algebra;
  std::vector<Summand> summands;
  std::vector<Mat> basis;  // endomorphisms of T
};
EndAlgebra end_algebra(const Module& t);

struct TiltingRow {
  std::string src;  // indecomposable
  std::string dst;  // summands of the cohomology over End(T)
  int degree = 0;
  Index dim = 0;
};
struct TiltingReport {
  Index end_dim = 0;
  bool iso_found = false;
  std::string side;  // "End" or "End^op"
  std::vector<TiltingRow> rows;
  int shift_lo = -2, shift_hi = 2;
  bool injective = false;
};
/// Compares End(T) (or its opposite) with `target`, then tabulates RHom(T, x)
/// = Hom*(pT, x) as End(T)-modules for the classified indecomposables x over
/// the algebra of T, and checks that shifted stalks give distinct profiles.
TiltingReport tilting_check(const Module& t, const AlgPtr& target, int shift_lo = -2, int shift_hi = 2, int cap = 12);

/// (dim Hom_K(iR(m), x), dim Hom_K(m, x)) for x with injective components.
std::pair<Index, Index> khom_agreement(const Module& m, const Complex& x, int cap = 12);

}  // namespace homlab
