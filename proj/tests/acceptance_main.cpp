// Apache License, Version 2.0, refer to LICENSE.txt
//
// Acceptance suite: one self-contained check per criterion, each
// printing a PASS/FAIL line. The binary exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

#include "reorder/backoff.hpp"
#include "reorder/counting.hpp"
#include "reorder/evaluate.hpp"
#include "reorder/synthetic.hpp"
#include "reorder/table.hpp"
#include "oracles.hpp"

using namespace reorder;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int number, const char* name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", number,
              name, detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

SentencePair make_pair(const LinkSet& links, int src_len, int tgt_len) {
  SentencePair sp;
  sp.index = 1;
  for (int i = 1; i <= src_len; ++i) sp.src.push_back("f" + std::to_string(i));
  for (int j = 1; j <= tgt_len; ++j) sp.tgt.push_back("e" + std::to_string(j));
  sp.links = links;
  return sp;
}

// 1. Extraction equals brute-force consistency filtering on 500 random
//    sentence pairs in under 5 seconds.
void criterion_extraction_oracle() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    int src_len = 1 + static_cast<int>(rng() % 8);
    int tgt_len = 1 + static_cast<int>(rng() % 8);
    double density = 0.1 + 0.8 * static_cast<double>(rng() % 1000) / 1000.0;
    LinkSet links = oracle::random_links(rng, src_len, tgt_len, density);
    SentencePair sp = make_pair(links, src_len, tgt_len);
    for (int max_len : {2, 3, 7})
      if (extract_phrase_pairs(sp, max_len) !=
          oracle::extract(links, src_len, tgt_len, max_len))
        ++mismatches;
  }
  double elapsed = seconds_since(start);
  char detail[128];
  std::snprintf(detail, sizeof(detail), "%d mismatches, %.2fs", mismatches,
                elapsed);
  report(1, "extraction oracle equivalence", mismatches == 0 && elapsed < 5.0,
         detail);
}

// 2. Dirichlet smoothing equals its convex-combination form within
//    1e-12; recursive MAP with all alphas 0 equals MLE within 1e-12;
//    all outputs sum to 1 within 1e-9. 1e4 random cases.
void criterion_smoothing_algebra() {
  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  std::uniform_real_distribution<double> sigma_dist(0.0, 50.0);
  double max_combo_err = 0.0, max_mle_err = 0.0, max_sum_err = 0.0;
  for (int trial = 0; trial < 10000; ++trial) {
    CountVector c{rng() % 200, rng() % 200, rng() % 200, rng() % 200};
    if (total(c) == 0) c[trial % 4] = 1;
    Distribution prior;
    double norm = 0;
    for (int o = 0; o < 4; ++o) norm += prior[o] = unit(rng);
    for (int o = 0; o < 4; ++o) prior[o] /= norm;
    double sigma = sigma_dist(rng);

    Distribution smoothed = dirichlet_smooth(c, prior, sigma);
    Distribution mle = mle_distribution(c);
    double n = static_cast<double>(total(c));
    double w = n / (n + sigma);
    for (int o = 0; o < 4; ++o)
      max_combo_err = std::max(
          max_combo_err,
          std::abs(smoothed[o] - (w * mle[o] + (1.0 - w) * prior[o])));
    max_sum_err = std::max(max_sum_err, std::abs(smoothed.sum() - 1.0));

    SmoothingConfig zero;
    zero.alpha_s = zero.alpha_t = zero.alpha_g = 0.0;
    CountVector src = c, tgt = c;
    src[0] += rng() % 50;
    tgt[1] += rng() % 50;
    Distribution rec = recursive_map_smooth(c, src, tgt, prior, zero);
    for (int o = 0; o < 4; ++o)
      max_mle_err = std::max(max_mle_err, std::abs(rec[o] - mle[o]));

    SmoothingConfig cfg;  // defaults
    Distribution full = recursive_map_smooth(c, src, tgt, prior, cfg);
    max_sum_err = std::max(max_sum_err, std::abs(full.sum() - 1.0));
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "combo err %.2e, mle err %.2e, sum err %.2e", max_combo_err,
                max_mle_err, max_sum_err);
  report(2, "smoothing algebra",
         max_combo_err < 1e-12 && max_mle_err < 1e-12 && max_sum_err < 1e-9,
         detail);
}

// 3. The anchoring-fixture expansion of P(M | f1f2f3, e1e2e3) covers
//    exactly p(DR | f2, e3) and p(M | f2f3, e2e3) plus the original.
void criterion_remapping_ground_truth() {
  const LinkSet fixture = {{1, 1}, {2, 3}, {3, 2}};
  SentencePair sp = make_pair(fixture, 3, 3);
  PhrasePair full{{1, 3}, {1, 3}};

  CountTable counts;
  counts.add_event(make_key("f1 f2 f3", "e1 e2 e3"), Side::Right,
                   Orientation::M, 3);
  counts.add_event(make_key("f2 f3", "e2 e3"), Side::Right, Orientation::S, 2);
  counts.add_event(make_key("f2", "e3"), Side::Right, Orientation::DR, 1);
  DirichletBaseModel base(counts, 10.0, 10.0);
  LambdaTable lambdas;
  lambdas.set(3, 3,
              LambdaTable::Bucket{{LambdaTable::Shape{1, 1}, 0.2},
                                  {LambdaTable::Shape{2, 2}, 0.3},
                                  {LambdaTable::Shape{3, 3}, 0.5}});

  bool pass = true;
  std::string detail;
  try {
    BackoffExpansion expansion =
        interpolated_backoff_expand(sp, full, Side::Right, lambdas, base);
    pass = expansion.terms.size() == 3;
    bool saw_short = false, saw_long = false, saw_orig = false;
    for (const auto& term : expansion.terms) {
      Orientation mapped_m = term.remapped[static_cast<int>(Orientation::M)];
      if (term.key == make_key("f2", "e3")) {
        saw_short = true;
        pass = pass && mapped_m == Orientation::DR;
      } else if (term.key == make_key("f2 f3", "e2 e3")) {
        saw_long = true;
        pass = pass && mapped_m == Orientation::M;
      } else if (term.key == make_key("f1 f2 f3", "e1 e2 e3")) {
        saw_orig = true;
        pass = pass && mapped_m == Orientation::M && term.sub.is_parent();
      } else {
        pass = false;
      }
    }
    pass = pass && saw_short && saw_long && saw_orig;
    detail = "expansion terms: " + std::to_string(expansion.terms.size());
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(3, "sub-phrase remapping ground truth", pass, detail);
}

// 4. EM on 50 synthetic mixtures with known weights: monotone held-out
//    log-likelihood, convergence within 100 iterations, recovery within
//    0.05 total variation for well-separated components.
void criterion_em_recovery() {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  const std::vector<LambdaTable::Shape> shapes = {
      {1, 1}, {2, 1}, {2, 2}, {3, 3}};
  bool monotone = true, converged = true, recovered = true;
  double worst_tv = 0.0;

  for (int set = 0; set < 50; ++set) {
    int components = 2 + static_cast<int>(rng() % 3);
    std::vector<double> target(components);
    double norm = 0;
    for (double& w : target) norm += w = unit(rng);
    for (double& w : target) w /= norm;

    // Component k puts 0.9 on orientation k: disjoint argmaxes.
    auto component_prob = [&](int k, int o) {
      return o == k ? 0.9 : 0.1 / 3.0;
    };

    // Deterministic event set in exact proportions.
    const int events_total = 2000;
    std::vector<MixtureEvent> events;
    for (int k = 0; k < components; ++k) {
      int n_k = static_cast<int>(std::lround(target[k] * events_total));
      for (int o = 0; o < 4; ++o) {
        int n_ko = static_cast<int>(std::lround(component_prob(k, o) * n_k));
        for (int e = 0; e < n_ko; ++e) {
          MixtureEvent event;
          for (int j = 0; j < components; ++j)
            event.components.push_back(
                MixtureComponent{shapes[j], component_prob(j, o)});
          events.push_back(std::move(event));
        }
      }
    }

    EmFitResult fit = fit_mixture_weights(events);
    for (std::size_t i = 1; i < fit.log_likelihood.size(); ++i)
      if (fit.log_likelihood[i] < fit.log_likelihood[i - 1] - 1e-12)
        monotone = false;
    if (!fit.converged || fit.iterations > 100) converged = false;

    double tv = 0;
    for (int k = 0; k < components; ++k)
      tv += std::abs(fit.lambda.at(shapes[k]) - target[k]);
    tv /= 2.0;
    worst_tv = std::max(worst_tv, tv);
    if (tv > 0.05) recovered = false;
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "worst TV %.4f", worst_tv);
  report(4, "EM weight recovery", monotone && converged && recovered, detail);
}

// 5. Total discontinuous events under HRM never exceed LRM's on any
//    generated corpus.
void criterion_hrm_discontinuity() {
  bool pass = true;
  std::string detail;
  int config_id = 0;
  for (std::uint64_t seed : {1ULL, 7ULL, 42ULL, 1234ULL}) {
    for (int variant = 0; variant < 3; ++variant) {
      SynthConfig cfg;
      cfg.seed = seed + variant;
      cfg.sentences = 300;
      cfg.min_chunks = 2 + variant;
      cfg.max_chunks = 5 + variant;
      cfg.max_modifiers = 1 + variant;
      auto corpus = generate_synthetic_corpus(cfg);

      std::uint64_t disc[2] = {0, 0};
      for (ModelKind model : {ModelKind::Lrm, ModelKind::Hrm}) {
        CounterConfig counter;
        counter.model = model;
        CountResult result;
        for (const auto& sp : corpus) count_sentence(sp, counter, result);
        CountVector marginal{};
        for (Side side : kSides) {
          CountVector m = result.table.marginal(side);
          for (int o = 0; o < 4; ++o) marginal[o] += m[o];
        }
        disc[model == ModelKind::Lrm ? 0 : 1] =
            marginal[static_cast<int>(Orientation::DL)] +
            marginal[static_cast<int>(Orientation::DR)];
      }
      ++config_id;
      if (disc[1] > disc[0]) {
        pass = false;
        detail = "corpus " + std::to_string(config_id) + ": hrm " +
                 std::to_string(disc[1]) + " > lrm " + std::to_string(disc[0]);
      }
    }
  }
  report(5, "HRM discontinuity never exceeds LRM", pass, detail);
}

// 6. End-to-end: on a corpus whose head classes carry fixed orientation
//    laws, LHSmoothed beats the Dirichlet baseline by at least 5%
//    relative cross-entropy on infrequent eval pairs, within 60 s.
void criterion_directional_end_to_end() {
  auto start = std::chrono::steady_clock::now();
  fs::path dir = fs::temp_directory_path() /
                 ("reorder_acc6_" + std::to_string(std::random_device{}()));
  bool pass = false;
  std::string detail;
  try {
    SynthConfig cfg;
    cfg.sentences = 2000;
    cfg.seed = 20240601;
    cfg.min_modifiers = 1;
    auto corpus = generate_synthetic_corpus(cfg);
    write_corpus_splits(corpus, dir.string(),
                        {{"train", 80}, {"heldout", 10}, {"eval", 10}});

    TrainConfig base_cfg;
    base_cfg.model = ModelKind::Hrm;
    base_cfg.scheme = SmoothingScheme::Dirichlet;
    CorpusReader base_reader(corpus_dir_paths((dir / "train").string()));
    TrainOutput baseline = train_tables(base_reader, base_cfg);

    TrainConfig lhs_cfg;
    lhs_cfg.model = ModelKind::Hrm;
    lhs_cfg.scheme = SmoothingScheme::LhSmoothed;
    CorpusReader lhs_reader(corpus_dir_paths((dir / "train").string()));
    TrainOutput lhs = train_tables(lhs_reader, lhs_cfg);

    EvalOptions opts;
    opts.kind = ModelKind::Hrm;
    TableModel base_model(std::move(baseline.table));
    CorpusReader eval1(corpus_dir_paths((dir / "eval").string()));
    EvalReport base_report =
        evaluate_model(eval1, base_model, &baseline.counts.table, opts);

    TableModel lhs_model(std::move(lhs.table), std::move(lhs.gen_table));
    CorpusReader eval2(corpus_dir_paths((dir / "eval").string()));
    EvalReport lhs_report =
        evaluate_model(eval2, lhs_model, &lhs.counts.table, opts);

    double base_ce = base_report.infrequent.cross_entropy();
    double lhs_ce = lhs_report.infrequent.cross_entropy();
    double elapsed = seconds_since(start);
    double gain = (base_ce - lhs_ce) / base_ce;
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "freq<10 events=%llu, dirichlet CE %.4f, lhsmoothed CE %.4f, "
                  "gain %.1f%%, %.1fs",
                  static_cast<unsigned long long>(base_report.infrequent.events),
                  base_ce, lhs_ce, 100.0 * gain, elapsed);
    detail = buf;
    pass = base_report.infrequent.events > 0 && gain >= 0.05 && elapsed < 60.0;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  fs::remove_all(dir);
  report(6, "LHSmoothed beats Dirichlet on infrequent pairs", pass, detail);
}

bool files_equal(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::vector<char> ba(1 << 20), bb(1 << 20);
  while (true) {
    fa.read(ba.data(), ba.size());
    fb.read(bb.data(), bb.size());
    if (fa.gcount() != fb.gcount()) return false;
    if (!std::equal(ba.begin(), ba.begin() + fa.gcount(), bb.begin()))
      return false;
    if (!fa && !fb) return true;
    if (fa.eof() != fb.eof()) return false;
    if (fa.eof()) return true;
  }
}

// 7. Counting + training a 10,000-sentence corpus (about 25 tokens per
//    side) in under 60 s single-worker, with byte-identical outputs for
//    1 and 8 workers.
void criterion_determinism_throughput() {
  fs::path dir = fs::temp_directory_path() /
                 ("reorder_acc7_" + std::to_string(std::random_device{}()));
  bool pass = false;
  std::string detail;
  try {
    SynthConfig cfg;
    cfg.sentences = 10000;
    cfg.seed = 777;
    cfg.min_chunks = 10;
    cfg.max_chunks = 12;
    cfg.max_modifiers = 3;
    cfg.modifier_vocab = 2000;
    auto corpus = generate_synthetic_corpus(cfg);
    double avg_tokens = 0;
    for (const auto& sp : corpus) avg_tokens += sp.src_len() + sp.tgt_len();
    avg_tokens /= 2.0 * corpus.size();
    write_corpus_dir(corpus, (dir / "corpus").string());
    corpus.clear();
    corpus.shrink_to_fit();

    auto run = [&](int workers, const std::string& tag) {
      CorpusReader reader(corpus_dir_paths((dir / "corpus").string()));
      CounterConfig counter;
      counter.model = ModelKind::Hrm;
      counter.workers = workers;
      CountResult counts = count_corpus(reader, counter);
      counts.table.save((dir / ("counts_" + tag + ".txt")).string());

      TrainConfig train_cfg;
      train_cfg.scheme = SmoothingScheme::Dirichlet;
      ReorderingTable table = build_table(counts, train_cfg, nullptr);
      table.save((dir / ("table_" + tag + ".txt")).string());
      return counts.events;
    };

    auto start = std::chrono::steady_clock::now();
    std::uint64_t events = run(1, "w1");
    double elapsed = seconds_since(start);
    run(8, "w8");

    bool identical = files_equal(dir / "counts_w1.txt", dir / "counts_w8.txt") &&
                     files_equal(dir / "table_w1.txt", dir / "table_w8.txt");
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "avg %.1f tokens/side, %llu events, single-worker %.1fs, "
                  "byte-identical=%s",
                  avg_tokens, static_cast<unsigned long long>(events), elapsed,
                  identical ? "yes" : "no");
    detail = buf;
    pass = elapsed < 60.0 && identical && avg_tokens >= 24.0;
  } catch (const std::exception& e) {
    detail = e.what();
  }
  fs::remove_all(dir);
  report(7, "determinism and throughput", pass, detail);
}

// 8. PMLH and MMLH leave the distributions of 1x1 keys exactly equal to
//    the lexical Dirichlet baseline.
void criterion_single_word_identity() {
  bool pass = true;
  std::string detail;
  try {
    SynthConfig cfg;
    cfg.sentences = 400;
    cfg.seed = 31337;
    auto corpus = generate_synthetic_corpus(cfg);
    fs::path dir = fs::temp_directory_path() /
                   ("reorder_acc8_" + std::to_string(std::random_device{}()));
    write_corpus_dir(corpus, dir.string());

    TrainConfig base_cfg;
    base_cfg.scheme = SmoothingScheme::Dirichlet;
    CorpusReader base_reader(corpus_dir_paths(dir.string()));
    TrainOutput baseline = train_tables(base_reader, base_cfg);

    std::uint64_t checked = 0;
    for (SmoothingScheme scheme :
         {SmoothingScheme::Pmlh, SmoothingScheme::Mmlh}) {
      TrainConfig gen_cfg;
      gen_cfg.scheme = scheme;
      gen_cfg.gen_sigma = base_cfg.smoothing.sigma;
      CorpusReader reader(corpus_dir_paths(dir.string()));
      TrainOutput gen = train_tables(reader, gen_cfg);

      for (const auto& [key, entry] : baseline.table.rows()) {
        if (key_side_tokens(key, false).size() != 1 ||
            key_side_tokens(key, true).size() != 1)
          continue;
        const TableEntry* gen_entry = gen.table.find(key);
        if (!gen_entry) {
          pass = false;
          detail = "missing 1x1 key in generalized table";
          continue;
        }
        ++checked;
        for (int o = 0; o < 4; ++o) {
          if (entry.left[o] != gen_entry->left[o] ||
              entry.right[o] != gen_entry->right[o]) {
            pass = false;
            detail = "distribution mismatch on a 1x1 key";
          }
        }
      }
    }
    fs::remove_all(dir);
    if (pass) detail = std::to_string(checked) + " single-word rows identical";
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(8, "single-word identity under PMLH/MMLH", pass, detail);
}

}  // namespace

int main() {
  criterion_extraction_oracle();
  criterion_smoothing_algebra();
  criterion_remapping_ground_truth();
  criterion_em_recovery();
  criterion_hrm_discontinuity();
  criterion_directional_end_to_end();
  criterion_determinism_throughput();
  criterion_single_word_identity();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
