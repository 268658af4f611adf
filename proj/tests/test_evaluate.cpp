// Apache License, Version 2.0, refer to LICENSE.txt
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "reorder/evaluate.hpp"
#include "reorder/synthetic.hpp"
#include "oracles.hpp"

using namespace reorder;

namespace {

// A model that returns one fixed distribution for every event.
class FixedModel : public ReorderingModel {
 public:
  explicit FixedModel(Distribution d) : d_(d) {}
  ScoreResult score(const SentencePair&, const PhrasePair&, Side) const override {
    return ScoreResult{d_, false};
  }

 private:
  Distribution d_;
};

// A model that always predicts the observed orientation with prob 1.
class OracleModel : public ReorderingModel {
 public:
  explicit OracleModel(ModelKind kind) : kind_(kind) {}
  ScoreResult score(const SentencePair& sp, const PhrasePair& pp,
                    Side side) const override {
    Orientation o = kind_ == ModelKind::Lrm
                        ? lrm_orientation(pp, side, sp.links, sp.src_len(),
                                          sp.tgt_len())
                        : hrm_orientation(pp, side, sp.links, sp.src_len(),
                                          sp.tgt_len());
    Distribution d;
    d[o] = 1.0;
    return ScoreResult{d, false};
  }

 private:
  ModelKind kind_;
};

struct TempCorpus {
  std::filesystem::path dir;
  explicit TempCorpus(const std::vector<SentencePair>& corpus) {
    dir = std::filesystem::temp_directory_path() /
          ("reorder_eval_" + std::to_string(std::random_device{}()));
    write_corpus_dir(corpus, dir.string());
  }
  ~TempCorpus() { std::filesystem::remove_all(dir); }
  CorpusReader reader() const { return CorpusReader(corpus_dir_paths(dir.string())); }
};

std::vector<SentencePair> small_corpus() {
  SynthConfig cfg;
  cfg.sentences = 40;
  cfg.seed = 99;
  return generate_synthetic_corpus(cfg);
}

}  // namespace

TEST_CASE("a uniform model scores ln 4 nats per event") {
  TempCorpus corpus(small_corpus());
  FixedModel model(uniform_distribution());
  auto reader = corpus.reader();
  EvalReport report = evaluate_model(reader, model, nullptr, EvalOptions{});
  REQUIRE(report.events > 0);
  CHECK(report.cross_entropy == doctest::Approx(std::log(4.0)).epsilon(1e-9));
  // Uniform ties resolve to M by the fixed tie-break.
  CHECK(report.zero_prob_events == 0);
}

TEST_CASE("a delta model on the observed orientation scores zero nats") {
  TempCorpus corpus(small_corpus());
  for (ModelKind kind : {ModelKind::Lrm, ModelKind::Hrm}) {
    OracleModel model(kind);
    auto reader = corpus.reader();
    EvalOptions opts;
    opts.kind = kind;
    EvalReport report = evaluate_model(reader, model, nullptr, opts);
    REQUIRE(report.events > 0);
    CHECK(report.cross_entropy == doctest::Approx(0.0));
    CHECK(report.accuracy == doctest::Approx(1.0));
  }
}

TEST_CASE("cross-entropy averages per-event nats") {
  // Two events with P(observed) = 0.5 and 0.25:
  // CE = -(ln 0.5 + ln 0.25) / 2.
  SentencePair sp;
  sp.index = 1;
  sp.src = {"a"};
  sp.tgt = {"x"};
  sp.links = {{1, 1}};
  // The single 1x1 pair has Left M (virtual corner) and Right M.
  class TwoValueModel : public ReorderingModel {
   public:
    ScoreResult score(const SentencePair&, const PhrasePair&,
                      Side side) const override {
      Distribution d;
      if (side == Side::Left)
        d = Distribution{{0.5, 0.5, 0.0, 0.0}};
      else
        d = Distribution{{0.25, 0.75, 0.0, 0.0}};
      return ScoreResult{d, false};
    }
  };
  TempCorpus corpus({sp});
  TwoValueModel model;
  auto reader = corpus.reader();
  EvalReport report = evaluate_model(reader, model, nullptr, EvalOptions{});
  REQUIRE(report.events == 2);
  CHECK(report.cross_entropy ==
        doctest::Approx(-(std::log(0.5) + std::log(0.25)) / 2).epsilon(1e-12));
  CHECK(report.accuracy == doctest::Approx(0.5));  // Right argmax is S
}

TEST_CASE("zero probabilities are clamped and counted") {
  TempCorpus corpus(small_corpus());
  FixedModel model(Distribution{{1.0, 0.0, 0.0, 0.0}});
  auto reader = corpus.reader();
  EvalReport report = evaluate_model(reader, model, nullptr, EvalOptions{});
  CHECK(report.zero_prob_events > 0);
  CHECK(std::isfinite(report.cross_entropy));
}

TEST_CASE("dirichlet-smoothed tables clamp nothing (full support)") {
  auto corpus = small_corpus();
  TempCorpus dir(corpus);

  TrainConfig cfg;
  cfg.scheme = SmoothingScheme::Dirichlet;
  auto train_reader = dir.reader();
  TrainOutput trained = train_tables(train_reader, cfg);

  TableModel model(std::move(trained.table));
  auto eval_reader = dir.reader();
  EvalReport report = evaluate_model(eval_reader, model, &trained.counts.table,
                                     EvalOptions{});
  CHECK(report.zero_prob_events == 0);
  CHECK(std::isfinite(report.cross_entropy));
  CHECK(report.has_bands);
  std::uint64_t band_sum = 0;
  for (const auto& band : report.bands) band_sum += band.events;
  CHECK(band_sum == report.events);
}

TEST_CASE("no model beats the empirical distribution of the event set") {
  auto corpus = small_corpus();
  TempCorpus dir(corpus);

  // Empirical orientation distribution over all events.
  CounterConfig counter;
  auto reader = dir.reader();
  CountResult counts = count_corpus(reader, counter);
  CountVector marginal{};
  for (Side side : kSides) {
    CountVector m = counts.table.marginal(side);
    for (int o = 0; o < 4; ++o) marginal[o] += m[o];
  }
  Distribution empirical = mle_distribution(marginal);
  double empirical_ce = 0;
  for (int o = 0; o < 4; ++o)
    if (empirical[o] > 0)
      empirical_ce -= empirical[o] * std::log(empirical[o]);

  FixedModel empirical_model(empirical);
  auto reader2 = dir.reader();
  EvalReport best = evaluate_model(reader2, empirical_model, nullptr, EvalOptions{});
  CHECK(best.cross_entropy == doctest::Approx(empirical_ce).epsilon(1e-9));

  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    Distribution d;
    double sum = 0;
    for (int o = 0; o < 4; ++o) sum += d[o] = u(rng);
    for (int o = 0; o < 4; ++o) d[o] /= sum;
    FixedModel other(d);
    auto reader3 = dir.reader();
    EvalReport report = evaluate_model(reader3, other, nullptr, EvalOptions{});
    REQUIRE(report.cross_entropy >= best.cross_entropy - 1e-9);
  }
}

TEST_CASE("table models resolve keys through the documented fallback chain") {
  // A lexical table with one row; a generalized companion with one
  // pooled row; the chain is row -> generalized form -> global header.
  ReorderingTable lexical;
  lexical.meta.scheme = "lhsmoothed";
  lexical.meta.global_left = Distribution{{0.7, 0.1, 0.1, 0.1}};
  lexical.meta.global_right = Distribution{{0.7, 0.1, 0.1, 0.1}};
  Distribution seen{{0.4, 0.2, 0.2, 0.2}};
  lexical.set(make_key("red dog", "Tred Tdog"), TableEntry{seen, seen});

  ReorderingTable gen;
  gen.meta.scheme = "lh";
  gen.meta.global_left = Distribution{{0.25, 0.25, 0.25, 0.25}};
  gen.meta.global_right = Distribution{{0.25, 0.25, 0.25, 0.25}};
  Distribution pooled{{0.1, 0.6, 0.2, 0.1}};
  gen.set(make_key("dog", "Tdog"), TableEntry{pooled, pooled});

  TableModel model(std::move(lexical), std::move(gen));

  // Sentence: "blue dog" / "Tblue Tdog", parses exposing "dog"/"Tdog".
  SentencePair sp;
  sp.index = 1;
  sp.src = {"blue", "dog"};
  sp.tgt = {"Tblue", "Tdog"};
  sp.links = {{1, 1}, {2, 2}};
  DependencyParse parse;
  parse.forms = sp.src;
  parse.heads = {2, 0};
  parse.labels = {"amod", "root"};
  parse.upos = {"ADJ", "NOUN"};
  sp.src_parse = parse;
  DependencyParse tgt_parse = parse;
  tgt_parse.forms = sp.tgt;
  sp.tgt_parse = tgt_parse;

  // Unseen lexical pair ("blue dog","Tblue Tdog") generalizes to
  // ("dog","Tdog"), which the companion table knows.
  ScoreResult via_gen = model.score(sp, PhrasePair{{1, 2}, {1, 2}}, Side::Left);
  CHECK(via_gen.fallback);
  for (int o = 0; o < 4; ++o)
    CHECK(via_gen.dist[o] == doctest::Approx(pooled[o]));

  // A seen lexical pair short-circuits the chain. ("red dog" is not in
  // this sentence, so construct the matching sentence.)
  SentencePair seen_sp = sp;
  seen_sp.src[0] = "red";
  seen_sp.tgt[0] = "Tred";
  seen_sp.src_parse->forms[0] = "red";
  seen_sp.tgt_parse->forms[0] = "Tred";
  ScoreResult direct =
      model.score(seen_sp, PhrasePair{{1, 2}, {1, 2}}, Side::Left);
  CHECK_FALSE(direct.fallback);
  for (int o = 0; o < 4; ++o) CHECK(direct.dist[o] == doctest::Approx(seen[o]));

  // A pair whose generalized form is unknown lands on the companion's
  // global header.
  ScoreResult to_global =
      model.score(sp, PhrasePair{{1, 1}, {1, 1}}, Side::Left);
  CHECK(to_global.fallback);
  for (int o = 0; o < 4; ++o)
    CHECK(to_global.dist[o] == doctest::Approx(0.25));
}

TEST_CASE("sparsity report: all pairs frequent means zero percent") {
  auto corpus = small_corpus();
  TempCorpus dir(corpus);
  auto reader = dir.reader();
  CounterConfig counter;
  CountResult counts = count_corpus(reader, counter);

  // Evaluating the training corpus against its own counts with
  // threshold 1 marks nothing infrequent.
  auto reader2 = dir.reader();
  SparsityReport report = sparsity_report(counts.table, reader2, 1, 7);
  CHECK(report.infrequent_uses == 0);
  CHECK(report.percent() == doctest::Approx(0.0));
  for (const auto& row : report.grid)
    for (std::uint64_t cell : row) CHECK(cell == 0);
}

TEST_CASE("sparsity report: a single unseen 1x1 pair is 100% infrequent") {
  SentencePair sp;
  sp.index = 1;
  sp.src = {"novel"};
  sp.tgt = {"Tnovel"};
  sp.links = {{1, 1}};
  TempCorpus dir({sp});
  CountTable empty_counts;
  auto reader = dir.reader();
  SparsityReport report = sparsity_report(empty_counts, reader, 10, 7);
  CHECK(report.total_uses == 1);
  CHECK(report.infrequent_uses == 1);
  CHECK(report.grid[0][0] == 1);
  CHECK(report.percent() == doctest::Approx(100.0));
}

TEST_CASE("sparsity grid reproduces a constructed split exactly") {
  // Train on one corpus; evaluate a second corpus built so the counts
  // per length cell are known: two unseen 1x1 pairs and one unseen
  // 2x1 pair, plus one pair seen 20 times in training.
  std::vector<SentencePair> train;
  for (int i = 0; i < 20; ++i) {
    SentencePair sp;
    sp.index = i + 1;
    sp.src = {"known"};
    sp.tgt = {"Tknown"};
    sp.links = {{1, 1}};
    train.push_back(sp);
  }
  TempCorpus train_dir(train);
  auto train_reader = train_dir.reader();
  CounterConfig counter;
  CountResult counts = count_corpus(train_reader, counter);

  std::vector<SentencePair> eval;
  {
    SentencePair sp;
    sp.index = 1;
    sp.src = {"new1"};
    sp.tgt = {"Tnew1"};
    sp.links = {{1, 1}};
    eval.push_back(sp);
    sp.index = 2;
    sp.src = {"new2"};
    sp.tgt = {"Tnew2"};
    sp.links = {{1, 1}};
    eval.push_back(sp);
    SentencePair two;
    two.index = 3;
    two.src = {"a", "b"};
    two.tgt = {"Tc"};
    two.links = {{1, 1}, {2, 1}};
    eval.push_back(two);
    SentencePair known;
    known.index = 4;
    known.src = {"known"};
    known.tgt = {"Tknown"};
    known.links = {{1, 1}};
    eval.push_back(known);
  }
  TempCorpus eval_dir(eval);
  auto eval_reader = eval_dir.reader();
  SparsityReport report = sparsity_report(counts.table, eval_reader, 10, 7);
  CHECK(report.total_uses == 4);
  CHECK(report.infrequent_uses == 3);
  CHECK(report.grid[0][0] == 2);  // the two unseen 1x1 uses
  CHECK(report.grid[1][0] == 1);  // the unseen 2x1 use
  CHECK(report.percent() == doctest::Approx(75.0));
}
