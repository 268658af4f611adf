// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/backoff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace reorder {

std::vector<SubPhrasePair> eligible_subphrases(const PhrasePair& pp,
                                               const LinkSet& links,
                                               Side side) {
  // Consistency is checked against the alignment restricted to the
  // parent rectangle, in phrase-local coordinates.
  LocalAlignment local = local_alignment(links, pp);
  const int m = pp.m();
  const int n = pp.n();
  AlignmentIndex index(local, m, n);

  std::vector<SubPhrasePair> subs;
  for (int lp = 1; lp <= n; ++lp) {
    Span tgt_local = side == Side::Right ? Span{n - lp + 1, n} : Span{1, lp};
    for (int a = 1; a <= m; ++a) {
      for (int b = a; b <= m; ++b) {
        if (!index.consistent(Span{a, b}, tgt_local)) continue;
        subs.push_back(SubPhrasePair{
            pp,
            Span{pp.src.start + a - 1, pp.src.start + b - 1},
            Span{pp.tgt.start + tgt_local.start - 1,
                 pp.tgt.start + tgt_local.end - 1}});
      }
    }
  }
  std::sort(subs.begin(), subs.end());
  return subs;
}

Orientation remap_orientation(const SubPhrasePair& sub, Orientation o,
                              Side side) {
  const PhrasePair& parent = sub.parent;
  bool anchored = side == Side::Right ? sub.tgt.end == parent.tgt.end
                                      : sub.tgt.start == parent.tgt.start;
  if (!anchored || !parent.src.contains(sub.src) ||
      !parent.tgt.contains(sub.tgt))
    throw ContractError("orientation remapping on an ineligible sub-phrase");

  const bool start_kept = sub.src.start == parent.src.start;
  const bool end_kept = sub.src.end == parent.src.end;
  switch (o) {
    case Orientation::M: {
      bool kept = side == Side::Right ? end_kept : start_kept;
      return kept ? Orientation::M : Orientation::DR;
    }
    case Orientation::S: {
      bool kept = side == Side::Right ? start_kept : end_kept;
      return kept ? Orientation::S : Orientation::DL;
    }
    case Orientation::DL:
      return Orientation::DL;
    case Orientation::DR:
      return Orientation::DR;
  }
  return o;
}

std::vector<SubPhrasePair> longest_subphrases(const PhrasePair& pp,
                                              const LinkSet& links,
                                              Side side) {
  std::vector<SubPhrasePair> eligible = eligible_subphrases(pp, links, side);
  std::erase_if(eligible, [](const SubPhrasePair& s) { return s.is_parent(); });

  std::vector<SubPhrasePair> maximal;
  for (const SubPhrasePair& s : eligible) {
    bool dominated = false;
    for (const SubPhrasePair& t : eligible) {
      if (&s == &t) continue;
      if (t.src.contains(s.src) && t.tgt.contains(s.tgt)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) maximal.push_back(s);
  }
  return maximal;
}

void LambdaTable::set(int m, int n, Bucket bucket) {
  buckets_[{m, n}] = std::move(bucket);
}

const LambdaTable::Bucket* LambdaTable::find(int m, int n) const {
  auto it = buckets_.find({m, n});
  return it == buckets_.end() ? nullptr : &it->second;
}

void LambdaTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  out << "m n l lprime lambda\n";
  char buf[64];
  for (const auto& [mn, bucket] : buckets_) {
    for (const auto& [shape, lambda] : bucket) {
      std::snprintf(buf, sizeof(buf), "%d %d %d %d %.6f\n", mn.first, mn.second,
                    shape.l, shape.lp, lambda);
      out << buf;
    }
  }
  if (!out) throw IoError("failed writing file: " + path);
}

LambdaTable LambdaTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  LambdaTable table;
  std::string line;
  if (!std::getline(in, line) || line != "m n l lprime lambda")
    throw FormatError(path + ": missing weight table header");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    int m, n, l, lp;
    double lambda;
    if (std::sscanf(line.c_str(), "%d %d %d %d %lf", &m, &n, &l, &lp,
                    &lambda) != 5)
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": bad weight row '" + line + "'");
    table.buckets_[{m, n}][Shape{l, lp}] = lambda;
  }
  return table;
}

DirichletBaseModel::DirichletBaseModel(const CountTable& counts, double sigma,
                                       double alpha_u)
    : counts_(&counts), sigma_(sigma) {
  for (Side side : kSides)
    global_[static_cast<int>(side)] = global_distribution(counts, side, alpha_u);
}

Distribution DirichletBaseModel::lookup(std::string_view key, Side side) const {
  const PairCounts* pc = counts_->find(key);
  const Distribution& g = global_[static_cast<int>(side)];
  if (!pc) return g;
  return dirichlet_smooth(pc->side[static_cast<int>(side)], g, sigma_);
}

BackoffExpansion interpolated_backoff_expand(const SentencePair& sp,
                                             const PhrasePair& pp, Side side,
                                             const LambdaTable& lambdas,
                                             const DirichletBaseModel& base) {
  const LambdaTable::Bucket* bucket = lambdas.find(pp.m(), pp.n());
  if (!bucket)
    throw ConfigError("no interpolation weights for phrase lengths " +
                      std::to_string(pp.m()) + "x" + std::to_string(pp.n()));

  std::vector<SubPhrasePair> subs = eligible_subphrases(pp, sp.links, side);

  // Renormalize the bucket over the shapes this instance actually has.
  std::set<LambdaTable::Shape> present;
  for (const SubPhrasePair& sub : subs)
    present.insert(LambdaTable::Shape{sub.l(), sub.lp()});
  double z = 0.0;
  for (const auto& shape : present) {
    auto it = bucket->find(shape);
    if (it != bucket->end()) z += it->second;
  }

  BackoffExpansion expansion;
  for (const SubPhrasePair& sub : subs) {
    double lambda = 0.0;
    if (z > 0.0) {
      auto it = bucket->find(LambdaTable::Shape{sub.l(), sub.lp()});
      if (it != bucket->end()) lambda = it->second / z;
    } else {
      // Degenerate bucket: all weight on the original pair.
      lambda = sub.is_parent() ? 1.0 : 0.0;
    }
    if (lambda == 0.0) continue;

    BackoffTerm term;
    term.sub = sub;
    term.key = make_key(sp.src, sub.src, sp.tgt, sub.tgt);
    term.lambda = lambda;
    term.base = base.lookup(term.key, side);
    for (int o = 0; o < 4; ++o) {
      Orientation mapped =
          remap_orientation(sub, static_cast<Orientation>(o), side);
      term.remapped[o] = mapped;
      expansion.raw[o] += lambda * term.base[mapped];
    }
    expansion.terms.push_back(std::move(term));
  }

  double sum = expansion.raw.sum();
  if (sum <= 0.0)
    throw UndefinedDistributionError(
        "interpolated back-off collapsed to zero mass");
  for (int o = 0; o < 4; ++o) expansion.normalized[o] = expansion.raw[o] / sum;
  return expansion;
}

Distribution interpolated_backoff(const SentencePair& sp, const PhrasePair& pp,
                                  Side side, const LambdaTable& lambdas,
                                  const DirichletBaseModel& base) {
  return interpolated_backoff_expand(sp, pp, side, lambdas, base).normalized;
}

EmFitResult fit_mixture_weights(const std::vector<MixtureEvent>& events,
                                double tol_nats_per_event,
                                int max_iterations) {
  EmFitResult result;
  std::set<LambdaTable::Shape> shapes;
  for (const MixtureEvent& e : events)
    for (const MixtureComponent& c : e.components) shapes.insert(c.shape);
  if (shapes.empty()) return result;

  for (const auto& shape : shapes)
    result.lambda[shape] = 1.0 / static_cast<double>(shapes.size());
  if (events.empty() || shapes.size() == 1) {
    result.converged = true;
    return result;
  }

  auto log_likelihood = [&](const LambdaTable::Bucket& lambda) {
    double ll = 0.0;
    for (const MixtureEvent& e : events) {
      double p = 0.0;
      for (const MixtureComponent& c : e.components)
        p += lambda.at(c.shape) * c.p;
      ll += std::log(std::max(p, 1e-300));
    }
    return ll;
  };

  double prev_ll = log_likelihood(result.lambda);
  const double tol_total = tol_nats_per_event * static_cast<double>(events.size());
  for (int iter = 1; iter <= max_iterations; ++iter) {
    // E-step: expected shape counts.
    LambdaTable::Bucket expected;
    for (const auto& shape : shapes) expected[shape] = 0.0;
    for (const MixtureEvent& e : events) {
      double z = 0.0;
      for (const MixtureComponent& c : e.components)
        z += result.lambda.at(c.shape) * c.p;
      if (z <= 0.0) continue;  // zero-probability event carries no signal
      for (const MixtureComponent& c : e.components)
        expected[c.shape] += result.lambda.at(c.shape) * c.p / z;
    }
    // M-step: normalized expected counts.
    double sum = 0.0;
    for (const auto& [shape, count] : expected) sum += count;
    if (sum <= 0.0) break;
    for (auto& [shape, lambda] : result.lambda) lambda = expected[shape] / sum;

    double ll = log_likelihood(result.lambda);
    result.log_likelihood.push_back(ll);
    result.iterations = iter;
    if (ll - prev_ll < tol_total) {
      result.converged = true;
      break;
    }
    prev_ll = ll;
  }
  return result;
}

EmTrainResult fit_interpolation_weights(CorpusReader& heldout, ModelKind model,
                                        int max_len,
                                        const DirichletBaseModel& base) {
  std::map<std::pair<int, int>, std::vector<MixtureEvent>> events;

  while (auto sp = heldout.next()) {
    AlignmentIndex index(*sp);
    std::optional<BlockCornerIndex> corners;
    if (model == ModelKind::Hrm) corners.emplace(index);
    for (const PhrasePair& pp : extract_phrase_pairs(index, max_len)) {
      std::vector<SubPhrasePair> subs;
      for (Side side : kSides) {
        Orientation observed = model == ModelKind::Lrm
                                   ? lrm_orientation(pp, side, index)
                                   : hrm_orientation(pp, side, index, *corners);
        subs = eligible_subphrases(pp, sp->links, side);
        MixtureEvent event;
        event.components.reserve(subs.size());
        for (const SubPhrasePair& sub : subs) {
          MixtureComponent comp;
          comp.shape = LambdaTable::Shape{sub.l(), sub.lp()};
          std::string key = make_key(sp->src, sub.src, sp->tgt, sub.tgt);
          comp.p = base.lookup(key, side)[remap_orientation(sub, observed, side)];
          event.components.push_back(comp);
        }
        events[{pp.m(), pp.n()}].push_back(std::move(event));
      }
    }
  }

  EmTrainResult result;
  for (auto& [mn, bucket_events] : events) {
    result.events += bucket_events.size();
    EmFitResult fit = fit_mixture_weights(bucket_events);
    if (!fit.lambda.empty()) {
      result.table.set(mn.first, mn.second, std::move(fit.lambda));
      ++result.buckets;
    }
  }
  return result;
}

namespace {

// Shared recursion over one instance frame: keys come from the token
// resolver, structure from `links` restricted per level.
class InstanceRecursion {
 public:
  InstanceRecursion(const std::vector<std::string>& src_tokens,
                    const std::vector<std::string>& tgt_tokens,
                    const LinkSet& links, Side side, const CountTable& counts,
                    double alpha, const Distribution& global)
      : src_tokens_(src_tokens),
        tgt_tokens_(tgt_tokens),
        links_(links),
        side_(side),
        counts_(counts),
        alpha_(alpha),
        global_(global) {}

  Distribution run(const PhrasePair& pp) {
    auto key = std::make_pair(pp.src, pp.tgt);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;

    CountVector c{};
    if (const PairCounts* pc =
            counts_.find(make_key(src_tokens_, pp.src, tgt_tokens_, pp.tgt)))
      c = pc->side[static_cast<int>(side_)];

    std::vector<SubPhrasePair> antichain = longest_subphrases(pp, links_, side_);
    Distribution d;
    if (antichain.empty()) {
      const double denom = static_cast<double>(total(c)) + alpha_;
      if (denom == 0.0) {
        d = global_;
      } else {
        for (int o = 0; o < 4; ++o)
          d[o] = (static_cast<double>(c[o]) + alpha_ * global_[o]) / denom;
      }
    } else {
      for (int o = 0; o < 4; ++o) d[o] = static_cast<double>(c[o]);
      for (const SubPhrasePair& sub : antichain) {
        Distribution sub_dist = run(PhrasePair{sub.src, sub.tgt});
        for (int o = 0; o < 4; ++o)
          d[o] += alpha_ *
                  sub_dist[remap_orientation(sub, static_cast<Orientation>(o),
                                             side_)];
      }
      // The denominator sum C + |L| * alpha normalizes exactly only when
      // the remapping is one-to-one; scale by the realized mass instead.
      const double mass = d.sum();
      for (int o = 0; o < 4; ++o) d[o] /= mass;
    }
    memo_.emplace(key, d);
    return d;
  }

 private:
  const std::vector<std::string>& src_tokens_;
  const std::vector<std::string>& tgt_tokens_;
  const LinkSet& links_;
  Side side_;
  const CountTable& counts_;
  double alpha_;
  const Distribution& global_;
  std::map<std::pair<Span, Span>, Distribution> memo_;
};

}  // namespace

Distribution recursive_backoff(const SentencePair& sp, const PhrasePair& pp,
                               Side side, const CountTable& counts,
                               double alpha, const Distribution& global) {
  InstanceRecursion recursion(sp.src, sp.tgt, sp.links, side, counts, alpha,
                              global);
  return recursion.run(pp);
}

RecursiveBackoffSmoother::RecursiveBackoffSmoother(
    const CountTable& counts, double alpha, std::array<Distribution, 2> global)
    : counts_(counts), alpha_(alpha), global_(global) {}

Distribution RecursiveBackoffSmoother::distribution(const std::string& key,
                                                    Side side) {
  auto& memo = memo_[static_cast<int>(side)];
  auto it = memo.find(key);
  if (it != memo.end()) return it->second;

  const Distribution& global = global_[static_cast<int>(side)];
  const PairCounts* pc = counts_.find(key);
  CountVector c{};
  if (pc) c = pc->side[static_cast<int>(side)];
  const LocalAlignment* alignment = pc ? pc->dominant_alignment() : nullptr;

  Distribution d;
  if (!alignment) {
    // No recorded structure: smooth directly toward the global prior.
    const double denom = static_cast<double>(total(c)) + alpha_;
    if (denom == 0.0) {
      d = global;
    } else {
      for (int o = 0; o < 4; ++o)
        d[o] = (static_cast<double>(c[o]) + alpha_ * global[o]) / denom;
    }
  } else {
    std::vector<std::string> src_tokens = key_side_tokens(key, false);
    std::vector<std::string> tgt_tokens = key_side_tokens(key, true);
    PhrasePair full{Span{1, static_cast<int>(src_tokens.size())},
                    Span{1, static_cast<int>(tgt_tokens.size())}};
    std::vector<SubPhrasePair> antichain =
        longest_subphrases(full, *alignment, side);
    if (antichain.empty()) {
      const double denom = static_cast<double>(total(c)) + alpha_;
      for (int o = 0; o < 4; ++o)
        d[o] = (static_cast<double>(c[o]) + alpha_ * global[o]) / denom;
    } else {
      for (int o = 0; o < 4; ++o) d[o] = static_cast<double>(c[o]);
      for (const SubPhrasePair& sub : antichain) {
        // Each sub-phrase key is resolved through its own record, so the
        // memo is a pure function of the count table.
        std::string sub_key =
            make_key(src_tokens, sub.src, tgt_tokens, sub.tgt);
        Distribution sub_dist = distribution(sub_key, side);
        for (int o = 0; o < 4; ++o)
          d[o] += alpha_ *
                  sub_dist[remap_orientation(sub, static_cast<Orientation>(o),
                                             side)];
      }
      const double mass = d.sum();
      for (int o = 0; o < 4; ++o) d[o] /= mass;
    }
  }
  memo_[static_cast<int>(side)].emplace(key, d);
  return d;
}

}  // namespace reorder
