// Apache License, Version 2.0, refer to LICENSE.txt
//
// Command-line surface of the reordering-model toolkit. One binary with
// subcommands covering the pipeline: phrase extraction, orientation
// counting, interpolation-weight fitting, table training, table lookup,
// held-out evaluation, sparsity statistics and synthetic corpora.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "reorder/backoff.hpp"
#include "reorder/counting.hpp"
#include "reorder/evaluate.hpp"
#include "reorder/synthetic.hpp"
#include "reorder/table.hpp"

namespace {

using namespace reorder;

struct CorpusFlags {
  std::string src, tgt, align;
  std::string src_parses, tgt_parses;
  bool verify_tokens = false;

  void attach(CLI::App* cmd, bool parses = true) {
    cmd->add_option("--src", src, "source corpus, one tokenized sentence per line")
        ->required();
    cmd->add_option("--tgt", tgt, "target corpus, line-aligned with --src")
        ->required();
    cmd->add_option("--align", align,
                    "word alignments, Pharaoh format: space-separated "
                    "srcIdx-tgtIdx pairs, 0-indexed, one line per sentence")
        ->required();
    if (parses) {
      cmd->add_option("--src-parses", src_parses,
                      "source dependency parses, CoNLL-U, blocks in corpus order");
      cmd->add_option("--tgt-parses", tgt_parses,
                      "target dependency parses, CoNLL-U");
      cmd->add_flag("--verify-tokens", verify_tokens,
                    "require CoNLL-U FORM columns to match corpus tokens");
    }
  }

  CorpusReader open() const {
    CorpusPaths paths;
    paths.src = src;
    paths.tgt = tgt;
    paths.align = align;
    if (!src_parses.empty()) paths.src_parse = src_parses;
    if (!tgt_parses.empty()) paths.tgt_parse = tgt_parses;
    return CorpusReader(paths, CorpusOptions{verify_tokens});
  }
};

ModelKind parse_model(const std::string& name) {
  if (name == "lrm") return ModelKind::Lrm;
  if (name == "hrm") return ModelKind::Hrm;
  throw ConfigError("unknown model kind '" + name + "' (expected lrm|hrm)");
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void summary(const Timer& timer, std::uint64_t events, std::uint64_t keys) {
  std::fprintf(stderr, "done: events=%llu keys=%llu wall=%.2fs\n",
               static_cast<unsigned long long>(events),
               static_cast<unsigned long long>(keys), timer.seconds());
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty() || path == "-") return std::cout;
  file.open(path);
  if (!file) throw IoError("cannot write file: " + path);
  return file;
}

int run_extract(const CorpusFlags& corpus, int max_len,
                const std::string& out_path) {
  Timer timer;
  CorpusReader reader = corpus.open();
  std::ofstream file;
  std::ostream& out = open_output(file, out_path);
  std::uint64_t pairs = 0, sentences = 0;
  while (auto sp = reader.next()) {
    ++sentences;
    for (const PhrasePair& pp : extract_phrase_pairs(*sp, max_len)) {
      out << pp.src.start << ' ' << pp.src.end << " ||| " << pp.tgt.start
          << ' ' << pp.tgt.end << " ||| ";
      for (int i = pp.src.start; i <= pp.src.end; ++i)
        out << (i > pp.src.start ? " " : "") << sp->src[i - 1];
      out << " ||| ";
      for (int j = pp.tgt.start; j <= pp.tgt.end; ++j)
        out << (j > pp.tgt.start ? " " : "") << sp->tgt[j - 1];
      out << '\n';
      ++pairs;
    }
  }
  summary(timer, pairs, sentences);
  return 0;
}

int run_count(const CorpusFlags& corpus, const std::string& model, int max_len,
              int workers, const std::string& out_path) {
  Timer timer;
  CorpusReader reader = corpus.open();
  CounterConfig cfg;
  cfg.model = parse_model(model);
  cfg.max_len = max_len;
  cfg.workers = workers;
  CountResult result = count_corpus(reader, cfg);
  result.table.save(out_path);
  summary(timer, result.events, result.table.size());
  return 0;
}

int run_em_weights(const std::string& counts_path, const std::string& heldout,
                   const std::string& model, int max_len, double sigma,
                   double alpha_u, const std::string& out_path) {
  Timer timer;
  CountTable counts = CountTable::load(counts_path);
  DirichletBaseModel base(counts, sigma, alpha_u);
  CorpusReader reader(corpus_dir_paths(heldout));
  EmTrainResult result =
      fit_interpolation_weights(reader, parse_model(model), max_len, base);
  result.table.save(out_path);
  summary(timer, result.events, result.buckets);
  return 0;
}

int run_train(const CorpusFlags& corpus, const TrainConfig& cfg,
              const std::string& lambda_path, const std::string& heldout,
              const std::string& out_path, std::string gen_out_path) {
  Timer timer;
  if (is_generalizing(cfg.scheme) &&
      (corpus.src_parses.empty() || corpus.tgt_parses.empty()))
    throw ConfigError(std::string("--smoothing ") + to_string(cfg.scheme) +
                      " requires --src-parses and --tgt-parses");

  std::optional<LambdaTable> lambdas;
  if (!lambda_path.empty()) lambdas = LambdaTable::load(lambda_path);
  std::optional<CorpusReader> heldout_reader;
  if (!heldout.empty()) heldout_reader.emplace(corpus_dir_paths(heldout));
  if (cfg.scheme == SmoothingScheme::Backoff && !lambdas && !heldout_reader)
    throw ConfigError("--smoothing backoff requires --lambda or --heldout");

  CorpusReader reader = corpus.open();
  TrainOutput output =
      train_tables(reader, cfg, lambdas ? &*lambdas : nullptr,
                   heldout_reader ? &*heldout_reader : nullptr);
  output.table.save(out_path);
  if (output.gen_table) {
    if (gen_out_path.empty()) gen_out_path = out_path + ".gen";
    output.gen_table->save(gen_out_path);
  }
  if (output.counts.skipped_missing_parse)
    std::fprintf(stderr, "skipped %llu sentences without parses\n",
                 static_cast<unsigned long long>(
                     output.counts.skipped_missing_parse));
  summary(timer, output.counts.events, output.table.size());
  return 0;
}

int run_query(const std::string& table_path, const std::string& src,
              const std::string& tgt) {
  ReorderingTable table = ReorderingTable::load(table_path);
  std::string key = make_key(src, tgt);
  const TableEntry* row = table.find(key);
  if (!row) {
    std::cout << "not found\n";
    if (table.meta.global_left && table.meta.global_right) {
      char buf[200];
      std::snprintf(buf, sizeof(buf),
                    "global: %.6f %.6f %.6f %.6f ||| %.6f %.6f %.6f %.6f\n",
                    (*table.meta.global_left)[0], (*table.meta.global_left)[1],
                    (*table.meta.global_left)[2], (*table.meta.global_left)[3],
                    (*table.meta.global_right)[0], (*table.meta.global_right)[1],
                    (*table.meta.global_right)[2],
                    (*table.meta.global_right)[3]);
      std::cout << buf;
    }
    return 1;
  }
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "L: M=%.6f S=%.6f DL=%.6f DR=%.6f\n"
                "R: M=%.6f S=%.6f DL=%.6f DR=%.6f\n",
                row->left[0], row->left[1], row->left[2], row->left[3],
                row->right[0], row->right[1], row->right[2], row->right[3]);
  std::cout << buf;
  return 0;
}

int run_eval(const std::string& table_path, const std::string& gen_table_path,
             const std::string& heldout, const std::string& kind, int max_len,
             const std::string& train_counts_path, std::uint64_t threshold,
             bool machine) {
  Timer timer;
  ReorderingTable table = ReorderingTable::load(table_path);
  std::optional<ReorderingTable> gen;
  if (!gen_table_path.empty()) gen = ReorderingTable::load(gen_table_path);
  TableModel model(std::move(table), std::move(gen));

  std::optional<CountTable> counts;
  if (!train_counts_path.empty()) counts = CountTable::load(train_counts_path);

  EvalOptions opts;
  opts.kind = parse_model(kind);
  opts.max_len = max_len;
  opts.infrequent_threshold = threshold;

  CorpusReader reader(corpus_dir_paths(heldout));
  EvalReport report =
      evaluate_model(reader, model, counts ? &*counts : nullptr, opts);
  std::cout << (machine ? report.to_machine() : report.to_text());
  summary(timer, report.events, 0);
  return 0;
}

int run_stats(const std::string& train_counts_path, const std::string& heldout,
              std::uint64_t threshold, int max_len) {
  Timer timer;
  CountTable counts = CountTable::load(train_counts_path);
  CorpusReader reader(corpus_dir_paths(heldout));
  SparsityReport report = sparsity_report(counts, reader, threshold, max_len);
  std::cout << report.to_text();
  summary(timer, report.total_uses, 0);
  return 0;
}

int run_synthetic(const SynthConfig& cfg, const std::string& out_dir,
                  const std::string& split) {
  Timer timer;
  std::vector<SentencePair> corpus = generate_synthetic_corpus(cfg);
  if (split.empty()) {
    write_corpus_dir(corpus, out_dir);
  } else {
    int train = 0, heldout = 0, eval = 0;
    if (std::sscanf(split.c_str(), "%d,%d,%d", &train, &heldout, &eval) != 3)
      throw ConfigError("--split expects three percentages, e.g. 80,10,10");
    write_corpus_splits(corpus, out_dir,
                        {{"train", train}, {"heldout", heldout}, {"eval", eval}});
  }
  summary(timer, corpus.size(), 0);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "reorder - trains, smooths and evaluates phrase reordering models\n"
      "from word-aligned parallel corpora.\n\n"
      "File formats:\n"
      "  corpus      one tokenized sentence per line, space-separated tokens\n"
      "  alignments  Pharaoh: 'srcIdx-tgtIdx' pairs, 0-indexed, per line\n"
      "  parses      CoNLL-U; heldout directories hold src.txt tgt.txt\n"
      "              align.txt and optional src.conllu tgt.conllu\n"
      "  counts      src ||| tgt ||| L|R ||| cM cS cDL cDR\n"
      "  table       src ||| tgt ||| pL(M) pL(S) pL(DL) pL(DR) pR(M) pR(S) "
      "pR(DL) pR(DR)\n"
      "  weights     header 'm n l lprime lambda', one row per weight"};
  app.require_subcommand(1);
  // Flags beat config-file values, which beat built-in defaults. The
  // flag goes before the subcommand: reorder --config run.toml train ...
  app.set_config("--config", "",
                 "read option defaults from a TOML file with one section "
                 "per subcommand, e.g. [train]");

  // extract-phrases
  auto* extract = app.add_subcommand(
      "extract-phrases",
      "emit all consistent phrase-pairs: srcStart srcEnd ||| tgtStart tgtEnd "
      "||| src tokens ||| tgt tokens");
  CorpusFlags extract_corpus;
  extract_corpus.attach(extract, /*parses=*/false);
  int extract_max_len = kDefaultMaxLen;
  std::string extract_out;
  extract->add_option("--max-len", extract_max_len,
                      "maximum phrase length per side (0 = unlimited)");
  extract->add_option("--out", extract_out, "output file (default stdout)");

  // count-orientations
  auto* count = app.add_subcommand(
      "count-orientations",
      "aggregate per-phrase-pair orientation counts over a corpus");
  CorpusFlags count_corpus_flags;
  count_corpus_flags.attach(count, /*parses=*/false);
  std::string count_model = "lrm";
  int count_max_len = kDefaultMaxLen;
  int count_workers = 1;
  std::string count_out;
  count->add_option("--model", count_model, "orientation model: lrm|hrm");
  count->add_option("--max-len", count_max_len,
                    "maximum phrase length per side (0 = unlimited)");
  count->add_option("--workers", count_workers, "counting worker threads");
  count->add_option("--out", count_out, "counts file to write")->required();

  // em-weights
  auto* em = app.add_subcommand(
      "em-weights",
      "fit per-length interpolation weights on a held-out corpus");
  std::string em_counts, em_heldout, em_model = "lrm", em_out;
  int em_max_len = kDefaultMaxLen;
  double em_sigma = 10.0, em_alpha_u = 10.0;
  em->add_option("--train-counts", em_counts,
                 "orientation counts of the training corpus")
      ->required();
  em->add_option("--heldout", em_heldout, "held-out corpus directory")
      ->required();
  em->add_option("--model", em_model, "orientation model: lrm|hrm");
  em->add_option("--max-len", em_max_len, "maximum phrase length per side");
  em->add_option("--sigma", em_sigma, "sigma of the base distributions");
  em->add_option("--alpha-u", em_alpha_u, "uniform mass of the global prior");
  em->add_option("--out", em_out, "weight table to write")->required();

  // train
  auto* train = app.add_subcommand(
      "train", "count a corpus and write a smoothed reordering table");
  CorpusFlags train_corpus;
  train_corpus.attach(train);
  TrainConfig train_cfg;
  std::string train_model = "lrm", train_scheme = "dirichlet";
  std::string train_lambda, train_heldout, train_out, train_gen_out;
  train->add_option("--model", train_model, "orientation model: lrm|hrm");
  train->add_option(
      "--smoothing", train_scheme,
      "mle|dirichlet|recmap|backoff|recbackoff|pmlh|mmlh|lh|lhsmoothed");
  train->add_option("--sigma", train_cfg.smoothing.sigma,
                    "equivalent sample size of the Dirichlet prior");
  train->add_option("--gen-sigma", train_cfg.gen_sigma,
                    "sigma of the generalized-form distributions");
  train->add_option("--alpha-s", train_cfg.smoothing.alpha_s,
                    "source-marginal prior weight (recmap)");
  train->add_option("--alpha-t", train_cfg.smoothing.alpha_t,
                    "target-marginal prior weight (recmap)");
  train->add_option("--alpha-g", train_cfg.smoothing.alpha_g,
                    "global prior weight inside the marginals (recmap)");
  train->add_option("--alpha-u", train_cfg.smoothing.alpha_u,
                    "uniform mass of the global distribution");
  train->add_option("--alpha-backoff", train_cfg.smoothing.alpha_backoff,
                    "per-sub-phrase prior weight (recbackoff)");
  train->add_option("--max-len", train_cfg.max_len,
                    "maximum phrase length per side (0 = unlimited)");
  train->add_option("--workers", train_cfg.workers, "counting worker threads");
  train->add_flag("--allow-missing-parses", train_cfg.allow_missing_parses,
                  "skip (and report) sentences without parses");
  train->add_flag("--first-last-pos", train_cfg.first_last_pos,
                  "replace the generalization with first/last POS tags");
  train->add_option("--lambda", train_lambda,
                    "interpolation weights fitted by em-weights (backoff)");
  train->add_option("--heldout", train_heldout,
                    "held-out corpus directory to fit weights inline (backoff)");
  train->add_option("--out", train_out, "reordering table to write")->required();
  train->add_option("--gen-out", train_gen_out,
                    "companion generalized table (lhsmoothed; default "
                    "<out>.gen)");

  // query
  auto* query = app.add_subcommand("query", "look up one phrase-pair in a table");
  std::string query_table, query_src, query_tgt;
  query->add_option("--model", query_table, "reordering table file")->required();
  query->add_option("--src", query_src, "source phrase (space-separated tokens)")
      ->required();
  query->add_option("--tgt", query_tgt, "target phrase")->required();

  // eval
  auto* eval = app.add_subcommand(
      "eval", "intrinsic held-out evaluation of a trained table");
  std::string eval_table, eval_gen, eval_heldout, eval_kind = "lrm";
  std::string eval_counts;
  int eval_max_len = kDefaultMaxLen;
  std::uint64_t eval_threshold = 10;
  bool eval_machine = false;
  eval->add_option("--model", eval_table, "reordering table file")->required();
  eval->add_option("--gen-table", eval_gen,
                   "companion generalized table (lhsmoothed)");
  eval->add_option("--heldout", eval_heldout, "held-out corpus directory")
      ->required();
  eval->add_option("--kind", eval_kind, "orientation model: lrm|hrm");
  eval->add_option("--max-len", eval_max_len, "maximum phrase length per side");
  eval->add_option("--train-counts", eval_counts,
                   "training counts for the frequency-band breakdown");
  eval->add_option("--threshold", eval_threshold,
                   "infrequent-pair training-frequency threshold");
  eval->add_flag("--machine", eval_machine, "print key=value lines");

  // stats
  auto* stats = app.add_subcommand(
      "stats", "sparsity report: infrequent eval-time pair uses by length");
  std::string stats_counts, stats_heldout;
  std::uint64_t stats_threshold = 10;
  int stats_max_len = kDefaultMaxLen;
  stats->add_option("--train-counts", stats_counts, "training counts file")
      ->required();
  stats->add_option("--heldout", stats_heldout, "eval corpus directory")
      ->required();
  stats->add_option("--threshold", stats_threshold,
                    "training-frequency threshold");
  stats->add_option("--max-len", stats_max_len, "maximum phrase length per side");

  // gen-synthetic
  auto* synth = app.add_subcommand(
      "gen-synthetic",
      "generate a synthetic corpus whose head-word classes carry fixed "
      "orientation laws");
  SynthConfig synth_cfg;
  std::string synth_out, synth_split;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--sentences", synth_cfg.sentences, "sentence pairs");
  synth->add_option("--seed", synth_cfg.seed, "generator seed");
  synth->add_option("--min-chunks", synth_cfg.min_chunks, "chunks per sentence, lower bound");
  synth->add_option("--max-chunks", synth_cfg.max_chunks, "chunks per sentence, upper bound");
  synth->add_option("--max-mods", synth_cfg.max_modifiers, "modifiers per chunk, upper bound");
  synth->add_option("--mod-vocab", synth_cfg.modifier_vocab, "modifier vocabulary size");
  synth->add_option("--heads-per-class", synth_cfg.heads_per_class,
                    "head types per orientation class");
  synth->add_option("--split", synth_split,
                    "train,heldout,eval percentages, e.g. 80,10,10");

  try {
    app.parse(argc, argv);

    if (extract->parsed())
      return run_extract(extract_corpus,
                         extract_max_len == 0 ? kUnlimitedLen : extract_max_len,
                         extract_out);
    if (count->parsed())
      return run_count(count_corpus_flags, count_model,
                       count_max_len == 0 ? kUnlimitedLen : count_max_len,
                       count_workers, count_out);
    if (em->parsed())
      return run_em_weights(em_counts, em_heldout, em_model, em_max_len,
                            em_sigma, em_alpha_u, em_out);
    if (train->parsed()) {
      auto scheme = smoothing_scheme_from(train_scheme);
      if (!scheme)
        throw ConfigError("unknown --smoothing '" + train_scheme + "'");
      train_cfg.scheme = *scheme;
      train_cfg.model = parse_model(train_model);
      if (train_cfg.max_len == 0) train_cfg.max_len = kUnlimitedLen;
      return run_train(train_corpus, train_cfg, train_lambda, train_heldout,
                       train_out, train_gen_out);
    }
    if (query->parsed()) return run_query(query_table, query_src, query_tgt);
    if (eval->parsed())
      return run_eval(eval_table, eval_gen, eval_heldout, eval_kind,
                      eval_max_len, eval_counts, eval_threshold, eval_machine);
    if (stats->parsed())
      return run_stats(stats_counts, stats_heldout, stats_threshold,
                       stats_max_len);
    if (synth->parsed()) return run_synthetic(synth_cfg, synth_out, synth_split);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage problems are validation errors
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (...) {
    std::cerr << "error: unknown failure\n";
    return 1;
  }
  return 0;
}
