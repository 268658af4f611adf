// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_COUNTING_HPP
#define REORDER_COUNTING_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "reorder/counts.hpp"
#include "reorder/generalize.hpp"
#include "reorder/orient.hpp"

namespace reorder {

struct CounterConfig {
  ModelKind model = ModelKind::Lrm;
  int max_len = kDefaultMaxLen;
  int workers = 1;
  // Record per-key internal alignments (needed by back-off smoothing).
  bool record_alignments = false;
  // Also aggregate generalized-form counts; requires parses.
  std::optional<GenScheme> gen_scheme;
  // Skip sentences without parses instead of failing.
  bool allow_missing_parses = false;
};

struct CountResult {
  CountTable table;
  GeneralizationTable gen;
  std::uint64_t sentences = 0;
  std::uint64_t events = 0;
  std::uint64_t skipped_missing_parse = 0;

  void merge(CountResult&& other);
};

// Classifies every extracted phrase-pair of one sentence (one event per
// side) and aggregates into `out`.
void count_sentence(const SentencePair& sp, const CounterConfig& cfg,
                    CountResult& out);

// Streams the corpus through `cfg.workers` counting workers. The merged
// result is exactly the single-worker result; all aggregation is
// integer-valued and order-independent.
CountResult count_corpus(CorpusReader& reader, const CounterConfig& cfg);

}  // namespace reorder

#endif  // REORDER_COUNTING_HPP
