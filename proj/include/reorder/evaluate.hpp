// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_EVALUATE_HPP
#define REORDER_EVALUATE_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "reorder/counting.hpp"
#include "reorder/table.hpp"

namespace reorder {

struct ScoreResult {
  Distribution dist;
  bool fallback = false;  // no table row matched; a fallback was used
};

// Query interface over a trained table: distribution for one
// phrase-pair occurrence.
class ReorderingModel {
 public:
  virtual ~ReorderingModel() = default;
  virtual ScoreResult score(const SentencePair& sp, const PhrasePair& pp,
                            Side side) const = 0;
};

// Scoring over saved tables.
//  - lexical tables: exact key lookup, misses fall back to the global
//    header distribution;
//  - generalized tables (scheme pmlh/mmlh/lh/2pos): the occurrence is
//    generalized with the sentence parses and looked up by its form;
//  - lhsmoothed tables: lexical lookup first, then the companion
//    generalized table for unseen pairs.
class TableModel : public ReorderingModel {
 public:
  explicit TableModel(ReorderingTable table,
                      std::optional<ReorderingTable> gen_table = std::nullopt);

  ScoreResult score(const SentencePair& sp, const PhrasePair& pp,
                    Side side) const override;

  const ReorderingTable& table() const { return table_; }

 private:
  ScoreResult score_generalized(const ReorderingTable& table,
                                const SentencePair& sp, const PhrasePair& pp,
                                Side side) const;
  Distribution global_of(const ReorderingTable& table, Side side) const;

  ReorderingTable table_;
  std::optional<ReorderingTable> gen_table_;
  std::optional<GenScheme> scheme_;      // of table_ when generalized
  std::optional<GenScheme> gen_scheme_;  // of gen_table_
};

struct EvalOptions {
  ModelKind kind = ModelKind::Lrm;
  int max_len = kDefaultMaxLen;
  std::uint64_t infrequent_threshold = 10;
};

// Training-frequency bands of the per-band breakdown: 0-1, 2-9, 10-99
// and >= 100 occurrences.
inline constexpr std::array<const char*, 4> kBandNames = {"0-1", "2-9", "10-99",
                                                          ">=100"};

struct BandStats {
  std::uint64_t events = 0;
  double ce_sum = 0.0;  // total nats
  std::uint64_t correct = 0;

  double cross_entropy() const { return events ? ce_sum / events : 0.0; }
  double accuracy() const {
    return events ? static_cast<double>(correct) / events : 0.0;
  }
};

struct EvalReport {
  std::uint64_t events = 0;
  double cross_entropy = 0.0;  // nats per event
  double accuracy = 0.0;
  std::uint64_t zero_prob_events = 0;
  std::uint64_t fallback_events = 0;

  bool has_bands = false;  // train counts were provided
  std::array<BandStats, 4> bands;

  // Eval-time pair uses with training frequency below the threshold,
  // as a (source length, target length) grid; grid[i-1][j-1] counts
  // uses of i x j pairs.
  std::uint64_t pair_uses = 0;
  std::uint64_t infrequent_uses = 0;
  std::vector<std::vector<std::uint64_t>> infrequent_grid;

  // Mean cross-entropy over events whose training frequency is below
  // the threshold.
  BandStats infrequent;

  std::string to_text() const;
  std::string to_machine() const;  // key=value lines
};

// Scores every orientation event of the held-out corpus under `model`.
// CE = -(1/N) sum log P(observed); probabilities below 1e-12 are
// clamped and counted. Accuracy by argmax with M < S < DL < DR
// tie-break. Band and grid statistics need `train_counts`.
EvalReport evaluate_model(CorpusReader& heldout, const ReorderingModel& model,
                          const CountTable* train_counts,
                          const EvalOptions& opts);

struct SparsityReport {
  std::uint64_t total_uses = 0;
  std::uint64_t infrequent_uses = 0;
  std::vector<std::vector<std::uint64_t>> grid;  // [src len][tgt len], 1-based

  double percent() const {
    return total_uses
               ? 100.0 * static_cast<double>(infrequent_uses) / total_uses
               : 0.0;
  }
  std::string to_text() const;
};

// Length grid of eval-time pair uses whose training frequency is below
// `threshold`, plus the fraction of all uses they account for.
SparsityReport sparsity_report(const CountTable& train_counts,
                               CorpusReader& eval, std::uint64_t threshold,
                               int max_len);

}  // namespace reorder

#endif  // REORDER_EVALUATE_HPP
