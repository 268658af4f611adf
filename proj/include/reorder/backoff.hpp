// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_BACKOFF_HPP
#define REORDER_BACKOFF_HPP

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "reorder/counting.hpp"
#include "reorder/counts.hpp"
#include "reorder/extract.hpp"
#include "reorder/smoothing.hpp"
#include "reorder/types.hpp"

namespace reorder {

// A sub-span pair of a parent phrase-pair, in sentence coordinates.
// The target sub-span is anchored at the parent's target boundary: its
// end for Side::Right, its start for Side::Left.
struct SubPhrasePair {
  PhrasePair parent;
  Span src;
  Span tgt;

  int l() const { return src.length(); }
  int lp() const { return tgt.length(); }
  bool is_parent() const { return src == parent.src && tgt == parent.tgt; }
  auto operator<=>(const SubPhrasePair&) const = default;
};

// All non-empty sub-span pairs of `pp` anchored at the side's target
// boundary and consistent with the alignment restricted to the parent
// rectangle. Always contains pp itself. Sorted by (src, tgt).
std::vector<SubPhrasePair> eligible_subphrases(const PhrasePair& pp,
                                               const LinkSet& links, Side side);

// Rewrites an orientation of the parent into the equivalent orientation
// seen from the sub-phrase-pair's boundaries. On the Right side, M
// survives only when the sub keeps the parent's source end (otherwise
// the adjacent material sits beyond a gap: DR) and S only when it keeps
// the source start (otherwise DL); the Left side mirrors this with M
// anchored at the source start and S at the source end. Discontinuous
// orientations are fixed points. Throws ContractError when `sub`
// violates the anchoring/containment invariants.
Orientation remap_orientation(const SubPhrasePair& sub, Orientation o,
                              Side side);

// The maximal antichain of eligible proper sub-phrase-pairs under
// simultaneous source/target span inclusion: every eligible proper sub
// is contained in some member, and no member contains another.
std::vector<SubPhrasePair> longest_subphrases(const PhrasePair& pp,
                                              const LinkSet& links, Side side);

// Per-length interpolation weights: bucket (m, n) holds one weight per
// sub-phrase shape (l, l'); weights of a bucket sum to 1.
class LambdaTable {
 public:
  struct Shape {
    int l = 0;
    int lp = 0;
    auto operator<=>(const Shape&) const = default;
  };
  using Bucket = std::map<Shape, double>;

  void set(int m, int n, Bucket bucket);
  const Bucket* find(int m, int n) const;
  bool empty() const { return buckets_.empty(); }
  std::size_t size() const { return buckets_.size(); }
  const std::map<std::pair<int, int>, Bucket>& buckets() const {
    return buckets_;
  }

  // File format: header "m n l lprime lambda", one row per weight,
  // 6 decimals, sorted.
  void save(const std::string& path) const;
  static LambdaTable load(const std::string& path);

 private:
  std::map<std::pair<int, int>, Bucket> buckets_;
};

// Dirichlet-smoothed lookup over trained counts; unseen keys fall back
// to the global distribution.
class DirichletBaseModel {
 public:
  DirichletBaseModel(const CountTable& counts, double sigma, double alpha_u);

  Distribution lookup(std::string_view key, Side side) const;
  const Distribution& global(Side side) const {
    return global_[static_cast<int>(side)];
  }
  double sigma() const { return sigma_; }

 private:
  const CountTable* counts_;
  double sigma_;
  std::array<Distribution, 2> global_;
};

// One term of the interpolated back-off sum, kept for inspection.
struct BackoffTerm {
  SubPhrasePair sub;
  std::string key;
  double lambda = 0.0;                   // renormalized weight of the shape
  std::array<Orientation, 4> remapped{};  // parent orientation -> sub orientation
  Distribution base;
};

struct BackoffExpansion {
  std::vector<BackoffTerm> terms;
  Distribution raw;         // weighted sum before renormalization
  Distribution normalized;  // raw scaled to sum 1
};

// Linear interpolation over the eligible sub-phrase distributions:
// raw(o) = sum over subs of lambda_{l,l'} * base(remap(sub, o) | sub).
// Bucket weights are renormalized over the shapes present in the
// eligible set; the orientation remapping is many-to-one, so the raw
// sum is scaled to a distribution at the end. Throws ConfigError when
// the (m, n) bucket is missing.
BackoffExpansion interpolated_backoff_expand(const SentencePair& sp,
                                             const PhrasePair& pp, Side side,
                                             const LambdaTable& lambdas,
                                             const DirichletBaseModel& base);
Distribution interpolated_backoff(const SentencePair& sp, const PhrasePair& pp,
                                  Side side, const LambdaTable& lambdas,
                                  const DirichletBaseModel& base);

// ---- EM estimation of the interpolation weights ----

struct MixtureComponent {
  LambdaTable::Shape shape;
  double p = 0.0;  // component probability of the observed orientation
};

struct MixtureEvent {
  std::vector<MixtureComponent> components;
};

struct EmFitResult {
  LambdaTable::Bucket lambda;
  std::vector<double> log_likelihood;  // total nats after each iteration
  int iterations = 0;
  bool converged = false;
};

// Tied-weight mixture EM from uniform initialization. The held-out
// log-likelihood is non-decreasing at every iteration; iteration stops
// once the improvement falls below tol nats per event.
EmFitResult fit_mixture_weights(const std::vector<MixtureEvent>& events,
                                double tol_nats_per_event = 1e-6,
                                int max_iterations = 100);

struct EmTrainResult {
  LambdaTable table;
  std::uint64_t events = 0;
  std::uint64_t buckets = 0;
};

// Builds per-(m, n) mixture events from a held-out corpus (one event
// per extracted phrase-pair and side, components given by the eligible
// sub-phrases) and fits each bucket. Buckets without events are simply
// absent from the result.
EmTrainResult fit_interpolation_weights(CorpusReader& heldout, ModelKind model,
                                        int max_len,
                                        const DirichletBaseModel& base);

// ---- Recursive back-off MAP smoothing ----

// P(o | pair) = (C(o) + sum over L of alpha * P(remap(sub, o) | sub))
//             / (sum C + |L| * alpha)
// recursing through the longest-sub-phrase antichain; a pair without
// proper eligible subs is smoothed directly toward `global` with
// weight alpha. This form uses the instance's own alignment at every
// recursion level.
Distribution recursive_backoff(const SentencePair& sp, const PhrasePair& pp,
                               Side side, const CountTable& counts,
                               double alpha, const Distribution& global);

// Type-level variant for table construction: each key's distribution is
// derived from its most frequent recorded internal alignment, memoized
// per (key, side), so results do not depend on key processing order.
// Keys without a recorded alignment use the plain Dirichlet base case.
class RecursiveBackoffSmoother {
 public:
  RecursiveBackoffSmoother(const CountTable& counts, double alpha,
                           std::array<Distribution, 2> global);

  Distribution distribution(const std::string& key, Side side);

 private:
  const CountTable& counts_;
  double alpha_;
  std::array<Distribution, 2> global_;
  std::array<std::unordered_map<std::string, Distribution>, 2> memo_;
};

}  // namespace reorder

#endif  // REORDER_BACKOFF_HPP
