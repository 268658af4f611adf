// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_SMOOTHING_HPP
#define REORDER_SMOOTHING_HPP

#include "reorder/counts.hpp"
#include "reorder/types.hpp"

namespace reorder {

// Hyperparameters of the count smoothers. All strictly positive in
// normal use; zeros are accepted for limit behavior where defined.
struct SmoothingConfig {
  double sigma = 10.0;          // equivalent sample size of the Dirichlet prior
  double alpha_s = 10.0;        // source-phrase prior weight
  double alpha_t = 10.0;        // target-phrase prior weight
  double alpha_g = 10.0;        // global prior weight inside the marginals
  double alpha_u = 10.0;        // uniform mass of the global distribution
  double alpha_backoff = 10.0;  // per-sub-phrase weight in recursive back-off
};

// Relative frequency. Throws UndefinedDistributionError on all-zero
// counts; callers must smooth instead.
Distribution mle_distribution(const CountVector& counts);

// (C(o) + sigma * prior(o)) / (sum C + sigma). Equals the convex
// combination (N/(N+sigma)) * MLE + (sigma/(N+sigma)) * prior.
Distribution dirichlet_smooth(const CountVector& counts,
                              const Distribution& prior, double sigma);

// Marginal distribution over all phrase-pairs with a uniform
// add-alpha_u/4 term; total for alpha_u > 0.
Distribution global_distribution(const CountVector& marginal_counts,
                                 double alpha_u);
Distribution global_distribution(const CountTable& counts, Side side,
                                 double alpha_u);

// Recursive MAP smoothing: the pair counts are smoothed with
// source-phrase and target-phrase marginal distributions, which are in
// turn smoothed with the global distribution.
//
//   P(o|f,e) = (C + alpha_s * Ps(o|f) + alpha_t * Pt(o|e))
//              / (sum C + alpha_s + alpha_t)
//   Ps(o|f)  = (Cf + alpha_g * g) / (sum Cf + alpha_g), Pt likewise.
//
// Degenerate denominators (an all-zero level with its alpha set to 0)
// fall back to the next prior level.
Distribution recursive_map_smooth(const CountVector& pair_counts,
                                  const CountVector& src_marginal_counts,
                                  const CountVector& tgt_marginal_counts,
                                  const Distribution& global,
                                  const SmoothingConfig& cfg);

}  // namespace reorder

#endif  // REORDER_SMOOTHING_HPP
