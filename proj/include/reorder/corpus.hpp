// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_CORPUS_HPP
#define REORDER_CORPUS_HPP

#include <cstddef>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "reorder/types.hpp"

namespace reorder {

// Token substituted for a literal "<mod>" in input text, so corpus
// words can never collide with the generalization placeholder.
inline constexpr const char* kModPlaceholder = "<mod>";
inline constexpr const char* kEscapedModToken = "\\<mod>";

// One dependency parse; entry k-1 describes token k. head == 0 is ROOT.
struct DependencyParse {
  std::vector<int> heads;
  std::vector<std::string> labels;
  std::vector<std::string> upos;
  std::vector<std::string> forms;

  int size() const { return static_cast<int>(heads.size()); }
  int head(int token) const { return heads[token - 1]; }
  const std::string& label(int token) const { return labels[token - 1]; }
  const std::string& pos(int token) const { return upos[token - 1]; }
};

using LinkSet = std::vector<Link>;  // sorted, unique

struct SentencePair {
  std::size_t index = 0;  // 1-based ordinal in the corpus
  std::vector<std::string> src;
  std::vector<std::string> tgt;
  LinkSet links;
  std::optional<DependencyParse> src_parse;
  std::optional<DependencyParse> tgt_parse;

  int src_len() const { return static_cast<int>(src.size()); }
  int tgt_len() const { return static_cast<int>(tgt.size()); }
};

// Splits a line on whitespace. Tokens equal to "|||" are rejected
// (reserved as the field separator of every output format) and literal
// "<mod>" tokens are escaped.
std::vector<std::string> tokenize_line(const std::string& line);

// Parses one Pharaoh line ("0-0 1-2", 0-indexed on disk) into a sorted,
// duplicate-free, 1-indexed link set. Bounds are not checked here.
LinkSet parse_alignment_line(const std::string& text);

// Inverse of parse_alignment_line: 0-indexed, space separated, sorted.
std::string serialize_alignment(const LinkSet& links);

// Streams CoNLL-U blocks from a file. Multi-word token ranges ("3-4")
// and empty nodes ("5.1") are skipped; comment lines ignored.
class ConlluReader {
 public:
  explicit ConlluReader(const std::string& path);

  // Next parse block, or nullopt at end of file.
  std::optional<DependencyParse> next();

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
};

std::vector<DependencyParse> read_conllu(const std::string& path);

struct CorpusPaths {
  std::string src;
  std::string tgt;
  std::string align;
  std::optional<std::string> src_parse;
  std::optional<std::string> tgt_parse;
};

struct CorpusOptions {
  // Compare CoNLL-U FORM columns against corpus tokens.
  bool verify_tokens = false;
};

// Streams line-aligned parallel files into SentencePair records.
// Validation: equal line counts, in-bounds links, parse length equal to
// sentence length. Memory use is independent of corpus length.
class CorpusReader {
 public:
  CorpusReader(const CorpusPaths& paths, const CorpusOptions& opts = {});

  std::optional<SentencePair> next();

  std::size_t sentences_read() const { return index_; }

 private:
  CorpusPaths paths_;
  CorpusOptions opts_;
  std::ifstream src_in_;
  std::ifstream tgt_in_;
  std::ifstream align_in_;
  std::optional<ConlluReader> src_parses_;
  std::optional<ConlluReader> tgt_parses_;
  std::size_t index_ = 0;
};

// Directory convention used by --heldout style flags: DIR/src.txt,
// DIR/tgt.txt, DIR/align.txt and optional DIR/{src,tgt}.conllu.
CorpusPaths corpus_dir_paths(const std::string& dir);

}  // namespace reorder

#endif  // REORDER_CORPUS_HPP
