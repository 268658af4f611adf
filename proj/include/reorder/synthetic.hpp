// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_SYNTHETIC_HPP
#define REORDER_SYNTHETIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "reorder/corpus.hpp"

namespace reorder {

// Synthetic parallel corpora for tests and benchmarks. Sentences are
// sequences of chunks (zero or more modifier words followed by a head
// word); the head's class decides how its chunk is placed on the
// target side (kept in order, swapped with the right neighbor, or
// delayed behind the next two chunks), so each head class carries a
// fixed orientation law while modifiers are random decoration. Word
// alignment is one-to-one inside chunks; parses attach modifiers to
// their chunk head and chain chunk heads left to right.
struct SynthClass {
  std::string head_prefix;
  double swap_prob = 0.0;
  double jump_prob = 0.0;
};

struct SynthConfig {
  std::uint64_t seed = 42;
  int sentences = 2000;
  int min_chunks = 2;
  int max_chunks = 5;
  int min_modifiers = 0;
  int max_modifiers = 2;
  int modifier_vocab = 400;
  int heads_per_class = 8;
  // Unaligned target-only particle inserted before a chunk.
  double particle_prob = 0.12;
  int particle_vocab = 6;
  std::vector<SynthClass> classes = {
      {"ma", 0.01, 0.01},  // mostly monotone
      {"sw", 0.96, 0.01},  // mostly swapped
      {"ju", 0.02, 0.93},  // mostly delayed (discontinuous)
  };
};

std::vector<SentencePair> generate_synthetic_corpus(const SynthConfig& cfg);

// Writes src.txt, tgt.txt, align.txt, src.conllu and tgt.conllu.
void write_corpus_dir(const std::vector<SentencePair>& corpus,
                      const std::string& dir);

// Contiguous split by percentage, e.g. {80, 10, 10}; writes one
// subdirectory per named part.
void write_corpus_splits(const std::vector<SentencePair>& corpus,
                         const std::string& dir,
                         const std::vector<std::pair<std::string, int>>& parts);

}  // namespace reorder

#endif  // REORDER_SYNTHETIC_HPP
