// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/smoothing.hpp"

namespace reorder {

Distribution mle_distribution(const CountVector& counts) {
  const double n = static_cast<double>(total(counts));
  if (n == 0.0)
    throw UndefinedDistributionError(
        "relative frequency of all-zero counts is undefined");
  Distribution d;
  for (int o = 0; o < 4; ++o) d[o] = static_cast<double>(counts[o]) / n;
  return d;
}

Distribution dirichlet_smooth(const CountVector& counts,
                              const Distribution& prior, double sigma) {
  const double n = static_cast<double>(total(counts));
  if (n + sigma == 0.0)
    throw UndefinedDistributionError(
        "Dirichlet smoothing with zero counts and zero sigma is undefined");
  Distribution d;
  for (int o = 0; o < 4; ++o)
    d[o] = (static_cast<double>(counts[o]) + sigma * prior[o]) / (n + sigma);
  return d;
}

Distribution global_distribution(const CountVector& marginal_counts,
                                 double alpha_u) {
  const double n = static_cast<double>(total(marginal_counts));
  if (n + alpha_u == 0.0) return uniform_distribution();
  Distribution d;
  for (int o = 0; o < 4; ++o)
    d[o] = (static_cast<double>(marginal_counts[o]) + alpha_u / 4.0) /
           (n + alpha_u);
  return d;
}

Distribution global_distribution(const CountTable& counts, Side side,
                                 double alpha_u) {
  return global_distribution(counts.marginal(side), alpha_u);
}

namespace {

// One MAP level: counts smoothed toward the prior with weight alpha;
// falls back to the prior itself when no mass is available.
Distribution map_level(const CountVector& counts, const Distribution& prior,
                       double alpha) {
  const double n = static_cast<double>(total(counts));
  if (n + alpha == 0.0) return prior;
  Distribution d;
  for (int o = 0; o < 4; ++o)
    d[o] = (static_cast<double>(counts[o]) + alpha * prior[o]) / (n + alpha);
  return d;
}

}  // namespace

Distribution recursive_map_smooth(const CountVector& pair_counts,
                                  const CountVector& src_marginal_counts,
                                  const CountVector& tgt_marginal_counts,
                                  const Distribution& global,
                                  const SmoothingConfig& cfg) {
  const double n = static_cast<double>(total(pair_counts));
  const double denom = n + cfg.alpha_s + cfg.alpha_t;
  if (denom == 0.0)
    throw UndefinedDistributionError(
        "recursive MAP with zero counts and zero alphas is undefined");

  Distribution d;
  if (cfg.alpha_s == 0.0 && cfg.alpha_t == 0.0) return mle_distribution(pair_counts);

  Distribution p_src = map_level(src_marginal_counts, global, cfg.alpha_g);
  Distribution p_tgt = map_level(tgt_marginal_counts, global, cfg.alpha_g);
  for (int o = 0; o < 4; ++o)
    d[o] = (static_cast<double>(pair_counts[o]) + cfg.alpha_s * p_src[o] +
            cfg.alpha_t * p_tgt[o]) /
           denom;
  return d;
}

}  // namespace reorder
