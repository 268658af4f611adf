// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/synthetic.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>

namespace reorder {

namespace {

struct Chunk {
  std::vector<std::string> tokens;  // modifiers then head
  int class_id = 0;
  int head_index() const { return static_cast<int>(tokens.size()); }  // 1-based
};

std::string target_form(const std::string& src_token) { return "T" + src_token; }

}  // namespace

std::vector<SentencePair> generate_synthetic_corpus(const SynthConfig& cfg) {
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> chunk_count(cfg.min_chunks, cfg.max_chunks);
  std::uniform_int_distribution<int> modifier_count(cfg.min_modifiers,
                                                    cfg.max_modifiers);
  std::uniform_int_distribution<int> modifier_id(0, cfg.modifier_vocab - 1);
  std::uniform_int_distribution<int> head_id(0, cfg.heads_per_class - 1);
  std::uniform_int_distribution<int> class_id(
      0, static_cast<int>(cfg.classes.size()) - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<SentencePair> corpus;
  corpus.reserve(cfg.sentences);

  for (int s = 0; s < cfg.sentences; ++s) {
    const int k = chunk_count(rng);
    std::vector<Chunk> chunks(k);
    for (Chunk& chunk : chunks) {
      chunk.class_id = class_id(rng);
      int mods = modifier_count(rng);
      for (int i = 0; i < mods; ++i)
        chunk.tokens.push_back("m" + std::to_string(modifier_id(rng)));
      chunk.tokens.push_back(cfg.classes[chunk.class_id].head_prefix +
                             std::to_string(head_id(rng)));
    }

    // Target-side chunk order, decided by each chunk head's class.
    std::vector<int> order;
    order.reserve(k);
    for (int i = 0; i < k;) {
      const SynthClass& cls = cfg.classes[chunks[i].class_id];
      double u = coin(rng);
      if (i + 2 < k && u < cls.jump_prob) {
        order.push_back(i + 1);
        order.push_back(i + 2);
        order.push_back(i);
        i += 3;
      } else if (i + 1 < k && u < cls.jump_prob + cls.swap_prob) {
        order.push_back(i + 1);
        order.push_back(i);
        i += 2;
      } else {
        order.push_back(i);
        i += 1;
      }
    }

    SentencePair sp;
    sp.index = static_cast<std::size_t>(s) + 1;

    std::vector<int> src_start(k);  // 1-based position of each chunk
    for (int i = 0; i < k; ++i) {
      src_start[i] = sp.src_len() + 1;
      for (const std::string& tok : chunks[i].tokens) sp.src.push_back(tok);
    }
    std::vector<int> tgt_start(k);
    std::vector<int> particle_positions;  // 1-based target positions
    std::uniform_int_distribution<int> particle_id(0, cfg.particle_vocab - 1);
    for (int c : order) {
      if (coin(rng) < cfg.particle_prob) {
        sp.tgt.push_back("Tp" + std::to_string(particle_id(rng)));
        particle_positions.push_back(sp.tgt_len());
      }
      tgt_start[c] = sp.tgt_len() + 1;
      for (const std::string& tok : chunks[c].tokens)
        sp.tgt.push_back(target_form(tok));
    }
    for (int i = 0; i < k; ++i)
      for (std::size_t w = 0; w < chunks[i].tokens.size(); ++w)
        sp.links.push_back(Link{src_start[i] + static_cast<int>(w),
                                tgt_start[i] + static_cast<int>(w)});
    std::sort(sp.links.begin(), sp.links.end());

    // Source parse: modifiers attach to their chunk head; chunk heads
    // chain left to right, last head is ROOT.
    DependencyParse src_parse;
    src_parse.heads.assign(sp.src_len(), 0);
    src_parse.labels.assign(sp.src_len(), "dep");
    src_parse.upos.assign(sp.src_len(), "NOUN");
    src_parse.forms = sp.src;
    for (int i = 0; i < k; ++i) {
      int head_pos = src_start[i] + chunks[i].head_index() - 1;
      for (int w = 0; w + 1 < static_cast<int>(chunks[i].tokens.size()); ++w) {
        src_parse.heads[src_start[i] + w - 1] = head_pos;
        src_parse.labels[src_start[i] + w - 1] = "amod";
        src_parse.upos[src_start[i] + w - 1] = "ADJ";
      }
      src_parse.heads[head_pos - 1] =
          i + 1 < k ? src_start[i + 1] + chunks[i + 1].head_index() - 1 : 0;
      if (i + 1 == k) src_parse.labels[head_pos - 1] = "root";
    }
    sp.src_parse = std::move(src_parse);

    // Target parse mirrors the structure in target surface order.
    DependencyParse tgt_parse;
    tgt_parse.heads.assign(sp.tgt_len(), 0);
    tgt_parse.labels.assign(sp.tgt_len(), "dep");
    tgt_parse.upos.assign(sp.tgt_len(), "NOUN");
    tgt_parse.forms = sp.tgt;
    for (std::size_t pos = 0; pos < order.size(); ++pos) {
      int c = order[pos];
      int head_pos = tgt_start[c] + chunks[c].head_index() - 1;
      for (int w = 0; w + 1 < static_cast<int>(chunks[c].tokens.size()); ++w) {
        tgt_parse.heads[tgt_start[c] + w - 1] = head_pos;
        tgt_parse.labels[tgt_start[c] + w - 1] = "amod";
        tgt_parse.upos[tgt_start[c] + w - 1] = "ADJ";
      }
      if (pos + 1 < order.size()) {
        int next = order[pos + 1];
        tgt_parse.heads[head_pos - 1] =
            tgt_start[next] + chunks[next].head_index() - 1;
      } else {
        tgt_parse.heads[head_pos - 1] = 0;
        tgt_parse.labels[head_pos - 1] = "root";
      }
    }
    for (int p : particle_positions) {
      // Particles precede a chunk; attach them to that chunk's head.
      for (int c = 0; c < k; ++c) {
        if (tgt_start[c] == p + 1) {
          tgt_parse.heads[p - 1] = tgt_start[c] + chunks[c].head_index() - 1;
          break;
        }
      }
      tgt_parse.labels[p - 1] = "case";
      tgt_parse.upos[p - 1] = "PART";
    }
    sp.tgt_parse = std::move(tgt_parse);

    corpus.push_back(std::move(sp));
  }
  return corpus;
}

namespace {

void write_conllu(const std::vector<SentencePair>& corpus,
                  const std::string& path, bool target) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  for (const SentencePair& sp : corpus) {
    const DependencyParse& parse = target ? *sp.tgt_parse : *sp.src_parse;
    for (int k = 1; k <= parse.size(); ++k) {
      out << k << '\t' << parse.forms[k - 1] << '\t' << parse.forms[k - 1]
          << '\t' << parse.pos(k) << '\t' << "_" << '\t' << "_" << '\t'
          << parse.head(k) << '\t' << parse.label(k) << '\t' << "_" << '\t'
          << "_" << '\n';
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing file: " + path);
}

}  // namespace

void write_corpus_dir(const std::vector<SentencePair>& corpus,
                      const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  std::ofstream src(fs::path(dir) / "src.txt");
  std::ofstream tgt(fs::path(dir) / "tgt.txt");
  std::ofstream align(fs::path(dir) / "align.txt");
  if (!src || !tgt || !align) throw IoError("cannot write corpus files in " + dir);
  bool have_parses = !corpus.empty();
  for (const SentencePair& sp : corpus) {
    for (int i = 0; i < sp.src_len(); ++i) src << (i ? " " : "") << sp.src[i];
    src << '\n';
    for (int j = 0; j < sp.tgt_len(); ++j) tgt << (j ? " " : "") << sp.tgt[j];
    tgt << '\n';
    align << serialize_alignment(sp.links) << '\n';
    have_parses = have_parses && sp.src_parse && sp.tgt_parse;
  }
  if (have_parses) {
    write_conllu(corpus, (fs::path(dir) / "src.conllu").string(), false);
    write_conllu(corpus, (fs::path(dir) / "tgt.conllu").string(), true);
  }
}

void write_corpus_splits(
    const std::vector<SentencePair>& corpus, const std::string& dir,
    const std::vector<std::pair<std::string, int>>& parts) {
  namespace fs = std::filesystem;
  int total_pct = 0;
  for (const auto& [name, pct] : parts) total_pct += pct;
  if (total_pct != 100) throw ConfigError("split percentages must sum to 100");

  std::size_t begin = 0;
  for (std::size_t p = 0; p < parts.size(); ++p) {
    std::size_t end = p + 1 == parts.size()
                          ? corpus.size()
                          : begin + corpus.size() * parts[p].second / 100;
    std::vector<SentencePair> part(corpus.begin() + begin, corpus.begin() + end);
    write_corpus_dir(part, (fs::path(dir) / parts[p].first).string());
    begin = end;
  }
}

}  // namespace reorder
