// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/evaluate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace reorder {

namespace {

constexpr double kProbFloor = 1e-12;

int band_of(std::uint64_t freq) {
  if (freq <= 1) return 0;
  if (freq <= 9) return 1;
  if (freq <= 99) return 2;
  return 3;
}

}  // namespace

TableModel::TableModel(ReorderingTable table,
                       std::optional<ReorderingTable> gen_table)
    : table_(std::move(table)), gen_table_(std::move(gen_table)) {
  if (table_.meta.scheme && *table_.meta.scheme != "lhsmoothed") {
    scheme_ = gen_scheme_from(*table_.meta.scheme);
    if (!scheme_)
      throw FormatError("unknown table scheme '" + *table_.meta.scheme + "'");
  }
  if (gen_table_) {
    if (!gen_table_->meta.scheme)
      throw FormatError("companion generalized table has no #scheme header");
    gen_scheme_ = gen_scheme_from(*gen_table_->meta.scheme);
    if (!gen_scheme_)
      throw FormatError("unknown table scheme '" + *gen_table_->meta.scheme +
                        "'");
  }
}

Distribution TableModel::global_of(const ReorderingTable& table,
                                   Side side) const {
  const auto& global =
      side == Side::Left ? table.meta.global_left : table.meta.global_right;
  return global ? *global : uniform_distribution();
}

ScoreResult TableModel::score_generalized(const ReorderingTable& table,
                                          const SentencePair& sp,
                                          const PhrasePair& pp,
                                          Side side) const {
  GenScheme gs = *gen_scheme_from(*table.meta.scheme);
  if (!sp.src_parse || !sp.tgt_parse)
    return ScoreResult{global_of(table, side), true};
  auto gen_src = generalize(sp.src, pp.src, *sp.src_parse, gs);
  auto gen_tgt = generalize(sp.tgt, pp.tgt, *sp.tgt_parse, gs);
  std::string key = make_key(join_tokens(gen_src), join_tokens(gen_tgt));
  if (const TableEntry* row = table.find(key))
    return ScoreResult{side == Side::Left ? row->left : row->right, false};
  return ScoreResult{global_of(table, side), true};
}

ScoreResult TableModel::score(const SentencePair& sp, const PhrasePair& pp,
                              Side side) const {
  if (scheme_) return score_generalized(table_, sp, pp, side);

  std::string key = make_key(sp.src, pp.src, sp.tgt, pp.tgt);
  if (const TableEntry* row = table_.find(key))
    return ScoreResult{side == Side::Left ? row->left : row->right, false};
  if (gen_table_) {
    ScoreResult gen = score_generalized(*gen_table_, sp, pp, side);
    gen.fallback = true;
    return gen;
  }
  return ScoreResult{global_of(table_, side), true};
}

EvalReport evaluate_model(CorpusReader& heldout, const ReorderingModel& model,
                          const CountTable* train_counts,
                          const EvalOptions& opts) {
  EvalReport report;
  report.has_bands = train_counts != nullptr;
  report.infrequent_grid.assign(opts.max_len,
                                std::vector<std::uint64_t>(opts.max_len, 0));
  double ce_sum = 0.0;
  std::uint64_t correct = 0;

  while (auto sp = heldout.next()) {
    AlignmentIndex index(*sp);
    std::optional<BlockCornerIndex> corners;
    if (opts.kind == ModelKind::Hrm) corners.emplace(index);
    for (const PhrasePair& pp : extract_phrase_pairs(index, opts.max_len)) {
      std::uint64_t freq = 0;
      if (train_counts) {
        std::string key = make_key(sp->src, pp.src, sp->tgt, pp.tgt);
        if (const PairCounts* pc = train_counts->find(key))
          freq = pc->occurrences();
        ++report.pair_uses;
        if (freq < opts.infrequent_threshold) {
          ++report.infrequent_uses;
          if (pp.m() <= opts.max_len && pp.n() <= opts.max_len)
            ++report.infrequent_grid[pp.m() - 1][pp.n() - 1];
        }
      }
      for (Side side : kSides) {
        Orientation observed =
            opts.kind == ModelKind::Lrm
                ? lrm_orientation(pp, side, index)
                : hrm_orientation(pp, side, index, *corners);
        ScoreResult scored = model.score(*sp, pp, side);
        double p = scored.dist[observed];
        if (p < kProbFloor) {
          p = kProbFloor;
          ++report.zero_prob_events;
        }
        double nats = -std::log(p);
        bool hit = scored.dist.argmax() == observed;

        ++report.events;
        ce_sum += nats;
        if (hit) ++correct;
        if (scored.fallback) ++report.fallback_events;
        if (train_counts) {
          BandStats& band = report.bands[band_of(freq)];
          ++band.events;
          band.ce_sum += nats;
          if (hit) ++band.correct;
          if (freq < opts.infrequent_threshold) {
            ++report.infrequent.events;
            report.infrequent.ce_sum += nats;
            if (hit) ++report.infrequent.correct;
          }
        }
      }
    }
  }
  if (report.events) {
    report.cross_entropy = ce_sum / static_cast<double>(report.events);
    report.accuracy = static_cast<double>(correct) / report.events;
  }
  return report;
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "events            %llu\n"
                "cross-entropy     %.4f nats/event\n"
                "accuracy          %.4f\n"
                "zero-prob events  %llu\n"
                "fallback events   %llu\n",
                static_cast<unsigned long long>(events), cross_entropy,
                accuracy, static_cast<unsigned long long>(zero_prob_events),
                static_cast<unsigned long long>(fallback_events));
  out << buf;
  if (has_bands) {
    out << "per-frequency-band breakdown (training frequency):\n";
    for (int b = 0; b < 4; ++b) {
      std::snprintf(buf, sizeof(buf),
                    "  band %-6s  events %-10llu ce %.4f  acc %.4f\n",
                    kBandNames[b],
                    static_cast<unsigned long long>(bands[b].events),
                    bands[b].cross_entropy(), bands[b].accuracy());
      out << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "infrequent (freq < threshold): events %llu  ce %.4f  acc "
                  "%.4f\n",
                  static_cast<unsigned long long>(infrequent.events),
                  infrequent.cross_entropy(), infrequent.accuracy());
    out << buf;
    double pct = pair_uses ? 100.0 * static_cast<double>(infrequent_uses) /
                                 static_cast<double>(pair_uses)
                           : 0.0;
    std::snprintf(buf, sizeof(buf),
                  "infrequent pair uses: %llu of %llu (%.1f%%)\n",
                  static_cast<unsigned long long>(infrequent_uses),
                  static_cast<unsigned long long>(pair_uses), pct);
    out << buf;
    out << "length grid of infrequent pair uses (rows: source length):\n";
    for (std::size_t i = 0; i < infrequent_grid.size(); ++i) {
      out << "  " << (i + 1) << " |";
      for (std::uint64_t cell : infrequent_grid[i]) {
        std::snprintf(buf, sizeof(buf), " %8llu",
                      static_cast<unsigned long long>(cell));
        out << buf;
      }
      out << '\n';
    }
  }
  return out.str();
}

std::string EvalReport::to_machine() const {
  std::ostringstream out;
  char buf[120];
  auto emit = [&](const char* key, double value) {
    std::snprintf(buf, sizeof(buf), "%s=%.6f\n", key, value);
    out << buf;
  };
  out << "events=" << events << '\n';
  emit("cross_entropy", cross_entropy);
  emit("accuracy", accuracy);
  out << "zero_prob_events=" << zero_prob_events << '\n';
  out << "fallback_events=" << fallback_events << '\n';
  if (has_bands) {
    for (int b = 0; b < 4; ++b) {
      out << "band_" << b << "_events=" << bands[b].events << '\n';
      std::snprintf(buf, sizeof(buf), "band_%d_ce=%.6f\nband_%d_accuracy=%.6f\n",
                    b, bands[b].cross_entropy(), b, bands[b].accuracy());
      out << buf;
    }
    out << "infrequent_events=" << infrequent.events << '\n';
    emit("infrequent_ce", infrequent.cross_entropy());
    emit("infrequent_accuracy", infrequent.accuracy());
    out << "infrequent_pair_uses=" << infrequent_uses << '\n';
    out << "pair_uses=" << pair_uses << '\n';
  }
  return out.str();
}

SparsityReport sparsity_report(const CountTable& train_counts,
                               CorpusReader& eval, std::uint64_t threshold,
                               int max_len) {
  SparsityReport report;
  report.grid.assign(max_len, std::vector<std::uint64_t>(max_len, 0));
  while (auto sp = eval.next()) {
    AlignmentIndex index(*sp);
    for (const PhrasePair& pp : extract_phrase_pairs(index, max_len)) {
      ++report.total_uses;
      std::string key = make_key(sp->src, pp.src, sp->tgt, pp.tgt);
      const PairCounts* pc = train_counts.find(key);
      std::uint64_t freq = pc ? pc->occurrences() : 0;
      if (freq < threshold) {
        ++report.infrequent_uses;
        ++report.grid[pp.m() - 1][pp.n() - 1];
      }
    }
  }
  return report;
}

std::string SparsityReport::to_text() const {
  std::ostringstream out;
  char buf[64];
  out << "pair uses below threshold by length (rows: source length, "
         "columns: target length):\n     ";
  for (std::size_t j = 0; j < grid.size(); ++j) {
    std::snprintf(buf, sizeof(buf), " %8zu", j + 1);
    out << buf;
  }
  out << '\n';
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "  %2zu |", i + 1);
    out << buf;
    for (std::uint64_t cell : grid[i]) {
      std::snprintf(buf, sizeof(buf), " %8llu",
                    static_cast<unsigned long long>(cell));
      out << buf;
    }
    out << '\n';
  }
  std::snprintf(buf, sizeof(buf), "%llu of %llu uses (%.1f%%)",
                static_cast<unsigned long long>(infrequent_uses),
                static_cast<unsigned long long>(total_uses), percent());
  out << "infrequent pair uses: " << buf << '\n';
  return out.str();
}

}  // namespace reorder
