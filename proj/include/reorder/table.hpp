// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_TABLE_HPP
#define REORDER_TABLE_HPP

#include <map>
#include <optional>
#include <string>

#include "reorder/backoff.hpp"
#include "reorder/counting.hpp"
#include "reorder/generalize.hpp"
#include "reorder/smoothing.hpp"

namespace reorder {

struct TableEntry {
  Distribution left;
  Distribution right;
};

// Self-describing header of a saved table: query-time code needs the
// scheme, the fallback distributions and (for generalized smoothing)
// the sigma that built the rows.
struct TableMeta {
  std::optional<std::string> scheme;
  std::optional<double> sigma;
  std::optional<Distribution> global_left;
  std::optional<Distribution> global_right;
};

// A trained reordering table: one row per (possibly generalized)
// phrase-pair key with two smoothed 4-way distributions.
class ReorderingTable {
 public:
  TableMeta meta;

  void set(std::string key, TableEntry entry);
  const TableEntry* find(std::string_view key) const;
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const std::map<std::string, TableEntry>& rows() const { return rows_; }

  // "src ||| tgt ||| pL(M) pL(S) pL(DL) pL(DR) pR(M) pR(S) pR(DL) pR(DR)",
  // 6 decimals, sorted; optional "#key: value" header lines first.
  void save(const std::string& path) const;
  static ReorderingTable load(const std::string& path);

 private:
  std::map<std::string, TableEntry> rows_;
};

enum class SmoothingScheme {
  Mle,
  Dirichlet,
  RecMap,
  Backoff,
  RecBackoff,
  Pmlh,
  Mmlh,
  Lh,
  LhSmoothed,
};

const char* to_string(SmoothingScheme scheme);
std::optional<SmoothingScheme> smoothing_scheme_from(std::string_view name);
bool is_generalizing(SmoothingScheme scheme);

struct TrainConfig {
  ModelKind model = ModelKind::Lrm;
  SmoothingScheme scheme = SmoothingScheme::Dirichlet;
  SmoothingConfig smoothing;
  double gen_sigma = 10.0;  // inner sigma of the generalized prior
  int max_len = kDefaultMaxLen;
  int workers = 1;
  bool allow_missing_parses = false;
  // Replaces the scheme's generalization with first/last POS tags.
  bool first_last_pos = false;
};

struct TrainOutput {
  ReorderingTable table;
  // Companion table of the generalized forms, produced by LhSmoothed so
  // unseen lexical pairs can be scored at query time.
  std::optional<ReorderingTable> gen_table;
  std::optional<LambdaTable> lambdas;  // fitted inline for Backoff
  CountResult counts;
};

// Counts the corpus and builds the smoothed table for cfg.scheme.
// Backoff requires either pre-fitted weights or a held-out corpus to
// fit them on.
TrainOutput train_tables(CorpusReader& corpus, const TrainConfig& cfg,
                         const LambdaTable* lambdas = nullptr,
                         CorpusReader* heldout = nullptr);

// Table construction from already-aggregated counts (the second half of
// train_tables; exposed for tests and tools).
ReorderingTable build_table(const CountResult& counts, const TrainConfig& cfg,
                            const LambdaTable* lambdas);

}  // namespace reorder

#endif  // REORDER_TABLE_HPP
