#pragma once

// Finite-dimensional right modules over a basic algebra: Hom spaces, kernels
// and cokernels, covers and envelopes, Krull-Schmidt decomposition,
// classification of indecomposables and the Auslander-Reiten quiver.
//
// Convention: a module of dimension d is given by one d x d matrix A_i per
// algebra basis element, acting on column vectors, with m.b_i = A_i m. Right
// action order then reads A_j A_i = sum_k c[i][j][k] A_k.

#include "homlab/algebra.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace homlab {

class ModuleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Module {
 public:
  Module() = default;

  const AlgPtr& algebra() const { return data_->alg; }
  std::uint32_t prime() const { return data_->alg->prime(); }
  Index dim() const { return data_->dim; }
  const Mat& action(int i) const { return data_->action[static_cast<std::size_t>(i)]; }
  const std::vector<Mat>& actions() const { return data_->action; }
  /// Matrix of the action of an arbitrary algebra element.
  Mat act(const Mat& element) const;
  /// Matrices of the algebra generators (idempotents, then radical generators).
  const Mat& idempotent_action(int j) const { return data_->idempotent_action[static_cast<std::size_t>(j)]; }
  const std::vector<Mat>& generator_actions() const { return data_->generator_action; }
  bool valid() const { return data_ != nullptr; }

 private:
  friend Module make_module(const AlgPtr&, std::vector<Mat>);
  friend Module make_module_unchecked(const AlgPtr&, std::vector<Mat>);
  struct Data {
    AlgPtr alg;
    Index dim = 0;
    std::vector<Mat> action;
    std::vector<Mat> idempotent_action;
    std::vector<Mat> generator_action;
  };
  std::shared_ptr<const Data> data_;
};

/// A homomorphism; matrix is dim(dst) x dim(src).
struct ModMap {
  Module src;
  Module dst;
  Mat matrix;
};

Module make_module(const AlgPtr& alg, std::vector<Mat> action);
/// Skips the structure-constant check; for actions induced from validated modules.
Module make_module_unchecked(const AlgPtr& alg, std::vector<Mat> action);
ModMap make_map(const Module& src, const Module& dst, Mat matrix);
ModMap identity_map(const Module& m);
ModMap zero_map(const Module& src, const Module& dst);
ModMap compose(const ModMap& g, const ModMap& f);  // g after f

Module zero_module(const AlgPtr& alg);
Module regular(const AlgPtr& alg);
/// e_j A for the 0-based idempotent index j.
Module proj(const AlgPtr& alg, int j);
Module simple(const AlgPtr& alg, int j);
/// Indecomposable injective with socle simple(j).
Module injective(const AlgPtr& alg, int j);

/// dim(M e_j) for every designated idempotent.
std::vector<Index> dim_vector(const Module& m);

bool same_module(const Module& a, const Module& b);

std::vector<Mat> hom_basis(const Module& m, const Module& n);
std::vector<ModMap> hom_space(const Module& m, const Module& n);

/// Submodule spanned by the columns of `basis` (must be invariant), with inclusion.
struct Sub {
  Module module;
  ModMap inclusion;
};
Sub submodule(const Module& m, const Mat& basis);
/// Smallest submodule containing the columns of `vectors`.
Mat submodule_closure(const Module& m, const Mat& vectors);

struct Quot {
  Module module;
  ModMap projection;
  Mat section;  // linear (not module) section of projection
};
Quot quotient_module(const Module& m, const Mat& sub_basis);

struct Kci {
  Sub ker;
  Quot coker;
  Sub image;
};
Kci kci(const ModMap& f);

struct DirectSum {
  Module sum;
  std::vector<ModMap> injections;
  std::vector<ModMap> projections;
};
DirectSum direct_sum(const AlgPtr& alg, const std::vector<Module>& parts);
ModMap direct_sum_map(const DirectSum& src, const DirectSum& dst, const std::vector<ModMap>& diagonal);

struct TopSocle {
  Quot top;
  Sub socle;
};
/// Basis of M * rad.
Mat radical_of(const Module& m);
TopSocle top_socle(const Module& m);

struct Cover {
  Module module;
  ModMap epi;
  std::vector<int> multiplicities;
};
Cover projective_cover(const Module& m);

struct Envelope {
  Module module;
  ModMap mono;
};
/// Dual right module over the opposite algebra (transposed action).
Module dual(const Module& m, const AlgPtr& opposite_alg);
Envelope injective_envelope(const Module& m);

bool is_projective(const Module& m);
bool is_injective(const Module& m);

std::optional<ModMap> is_isomorphic(const Module& m, const Module& n);

/// Eigenvalues in F_p of a square matrix (by enumeration of F_p).
std::vector<std::int64_t> eigenvalues(const Mat& a);
bool is_nilpotent(const Mat& a);
bool is_invertible(const Mat& a);

struct Summand {
  Module module;
  ModMap inclusion;
  ModMap projection;
};
/// Fitting-style splitting into indecomposables; inclusion/projection give a
/// biproduct decomposition of m.
std::vector<Summand> decompose_with_maps(const Module& m);

struct IsoClass {
  Module module;
  int multiplicity = 0;
};
std::vector<IsoClass> decompose(const Module& m);
bool is_indecomposable(const Module& m);

/// Basis of rad(X, Y): all of Hom for non-isomorphic indecomposables, the
/// nilpotent endomorphisms when X is Y.
std::vector<Mat> radical_morphisms(const Module& x, const Module& y, bool same);

struct NamedModule {
  std::string name;
  Module module;
};

/// Complete list of indecomposables of a preset algebra at p in {2, 3}.
std::vector<NamedModule> classify_indecomposables(const AlgPtr& alg);
/// Names indecomposables by composition factors, e.g. "S2" or "[123]".
std::vector<NamedModule> name_modules(const std::vector<Module>& mods);
/// Sort key order: dimension, then dimension vector.
void sort_modules(std::vector<Module>& mods);

struct QuiverVertex {
  std::string label;
  Index dim = 0;
  std::vector<Index> dim_vector;
};
struct QuiverArrow {
  int from = 0;
  int to = 0;
  int multiplicity = 1;
};
struct Quiver {
  std::vector<QuiverVertex> vertices;
  std::vector<QuiverArrow> arrows;
  int arrow_count() const;
};

/// Arrow multiplicity X -> Y is dim rad(X,Y) - dim(rad^2(X,Y) + extra(X,Y)).
/// `extra` lets the stable quiver quotient by maps through projectives.
Quiver quiver_from_radical(const std::vector<NamedModule>& vertices,
                           const std::function<std::vector<Mat>(int, int)>& extra = {});
Quiver ar_quiver(const AlgPtr& alg);

/// Random module assembled from the given building blocks (total dim <= max_dim).
Module random_sum(const AlgPtr& alg, const std::vector<Module>& blocks, Index max_dim, std::mt19937_64& rng);

}  // namespace homlab
