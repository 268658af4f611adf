// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>

namespace reorder {

namespace {

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  return in;
}

}  // namespace

std::vector<std::string> tokenize_line(const std::string& line) {
  std::vector<std::string> toks;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) {
      std::string tok = line.substr(i, j - i);
      if (tok == "|||")
        throw FormatError("token '|||' is reserved and cannot appear in a corpus");
      if (tok == kModPlaceholder) tok = kEscapedModToken;
      toks.push_back(std::move(tok));
    }
    i = j;
  }
  return toks;
}

LinkSet parse_alignment_line(const std::string& text) {
  LinkSet links;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::string_view tok(text.data() + i, j - i);
      std::size_t dash = tok.find('-');
      int a = 0, b = 0;
      if (dash == std::string_view::npos ||
          !parse_int(tok.substr(0, dash), a) ||
          !parse_int(tok.substr(dash + 1), b) || a < 0 || b < 0) {
        throw FormatError("malformed alignment token '" + std::string(tok) +
                          "' in line: " + text);
      }
      links.push_back(Link{a + 1, b + 1});  // disk is 0-indexed
    }
    i = j;
  }
  std::sort(links.begin(), links.end());
  links.erase(std::unique(links.begin(), links.end()), links.end());
  return links;
}

std::string serialize_alignment(const LinkSet& links) {
  std::string out;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(links[i].src - 1);
    out += '-';
    out += std::to_string(links[i].tgt - 1);
  }
  return out;
}

ConlluReader::ConlluReader(const std::string& path)
    : path_(path), in_(open_or_throw(path)) {}

std::optional<DependencyParse> ConlluReader::next() {
  DependencyParse parse;
  std::string line;
  bool saw_token = false;
  while (std::getline(in_, line)) {
    ++line_no_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      if (saw_token) break;
      continue;  // leading blank lines between blocks
    }
    if (line[0] == '#') continue;

    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (cols.size() != 10)
      throw FormatError(path_ + ":" + std::to_string(line_no_) +
                        ": expected 10 tab-separated columns, got " +
                        std::to_string(cols.size()));

    const std::string& id = cols[0];
    if (id.find('-') != std::string::npos) continue;  // multi-word token range
    if (id.find('.') != std::string::npos) continue;  // empty node

    int token_id = 0, head = 0;
    if (!parse_int(id, token_id))
      throw FormatError(path_ + ":" + std::to_string(line_no_) +
                        ": bad token id '" + id + "'");
    if (token_id != static_cast<int>(parse.heads.size()) + 1)
      throw FormatError(path_ + ":" + std::to_string(line_no_) +
                        ": token ids not sequential at '" + id + "'");
    if (!parse_int(cols[6], head))
      throw FormatError(path_ + ":" + std::to_string(line_no_) +
                        ": bad head '" + cols[6] + "'");

    std::string form = cols[1];
    if (form == kModPlaceholder) form = kEscapedModToken;

    saw_token = true;
    parse.forms.push_back(std::move(form));
    parse.upos.push_back(cols[3]);
    parse.heads.push_back(head);
    parse.labels.push_back(cols[7]);
  }
  if (!saw_token) return std::nullopt;

  // Validate head indices and acyclicity (tree rooted at 0).
  const int len = parse.size();
  for (int k = 1; k <= len; ++k) {
    int h = parse.head(k);
    if (h < 0 || h > len || h == k)
      throw FormatError(path_ + ": token " + std::to_string(k) +
                        " has invalid head " + std::to_string(h));
  }
  std::vector<int> state(len + 1, 0);  // 0 unseen, 1 on path, 2 done
  for (int k = 1; k <= len; ++k) {
    int node = k;
    std::vector<int> path;
    while (node != 0 && state[node] == 0) {
      state[node] = 1;
      path.push_back(node);
      node = parse.head(node);
    }
    if (node != 0 && state[node] == 1)
      throw FormatError(path_ + ": dependency heads form a cycle through token " +
                        std::to_string(node));
    for (int p : path) state[p] = 2;
  }
  return parse;
}

std::vector<DependencyParse> read_conllu(const std::string& path) {
  ConlluReader reader(path);
  std::vector<DependencyParse> parses;
  while (auto p = reader.next()) parses.push_back(std::move(*p));
  return parses;
}

CorpusReader::CorpusReader(const CorpusPaths& paths, const CorpusOptions& opts)
    : paths_(paths),
      opts_(opts),
      src_in_(open_or_throw(paths.src)),
      tgt_in_(open_or_throw(paths.tgt)),
      align_in_(open_or_throw(paths.align)) {
  if (paths.src_parse) src_parses_.emplace(*paths.src_parse);
  if (paths.tgt_parse) tgt_parses_.emplace(*paths.tgt_parse);
}

std::optional<SentencePair> CorpusReader::next() {
  std::string src_line, tgt_line, align_line;
  bool got_src = static_cast<bool>(std::getline(src_in_, src_line));
  bool got_tgt = static_cast<bool>(std::getline(tgt_in_, tgt_line));
  bool got_align = static_cast<bool>(std::getline(align_in_, align_line));
  const std::size_t ordinal = index_ + 1;

  if (!got_src && !got_tgt && !got_align) {
    // All text files ended; parse files must end too.
    if (src_parses_ && src_parses_->next())
      throw FormatError("line count mismatch: " + src_parses_->path() +
                        " has more blocks than sentences (" +
                        std::to_string(index_) + ")");
    if (tgt_parses_ && tgt_parses_->next())
      throw FormatError("line count mismatch: " + tgt_parses_->path() +
                        " has more blocks than sentences (" +
                        std::to_string(index_) + ")");
    return std::nullopt;
  }
  if (!got_src || !got_tgt || !got_align)
    throw FormatError("line count mismatch across corpus files at sentence " +
                      std::to_string(ordinal));

  SentencePair sp;
  sp.index = ordinal;
  sp.src = tokenize_line(src_line);
  sp.tgt = tokenize_line(tgt_line);
  sp.links = parse_alignment_line(align_line);

  for (const Link& l : sp.links) {
    if (l.src < 1 || l.src > sp.src_len() || l.tgt < 1 || l.tgt > sp.tgt_len())
      throw FormatError("alignment link " + std::to_string(l.src - 1) + "-" +
                        std::to_string(l.tgt - 1) +
                        " out of bounds at sentence " + std::to_string(ordinal));
  }

  auto attach_parse = [&](std::optional<ConlluReader>& reader,
                          const std::vector<std::string>& toks,
                          std::optional<DependencyParse>& out,
                          const char* which) {
    if (!reader) return;
    auto parse = reader->next();
    if (!parse)
      throw FormatError(std::string("line count mismatch: ") + reader->path() +
                        " ended before sentence " + std::to_string(ordinal));
    if (parse->size() != static_cast<int>(toks.size()))
      throw FormatError(std::string(which) + " parse has " +
                        std::to_string(parse->size()) + " tokens but sentence " +
                        std::to_string(ordinal) + " has " +
                        std::to_string(toks.size()));
    if (opts_.verify_tokens) {
      for (std::size_t i = 0; i < toks.size(); ++i) {
        if (parse->forms[i] != toks[i])
          throw FormatError(std::string(which) + " parse token '" +
                            parse->forms[i] + "' differs from corpus token '" +
                            toks[i] + "' at sentence " + std::to_string(ordinal));
      }
    }
    out = std::move(*parse);
  };
  attach_parse(src_parses_, sp.src, sp.src_parse, "source");
  attach_parse(tgt_parses_, sp.tgt, sp.tgt_parse, "target");

  ++index_;
  return sp;
}

CorpusPaths corpus_dir_paths(const std::string& dir) {
  namespace fs = std::filesystem;
  CorpusPaths paths;
  paths.src = (fs::path(dir) / "src.txt").string();
  paths.tgt = (fs::path(dir) / "tgt.txt").string();
  paths.align = (fs::path(dir) / "align.txt").string();
  auto src_parse = fs::path(dir) / "src.conllu";
  auto tgt_parse = fs::path(dir) / "tgt.conllu";
  if (fs::exists(src_parse)) paths.src_parse = src_parse.string();
  if (fs::exists(tgt_parse)) paths.tgt_parse = tgt_parse.string();
  return paths;
}

}  // namespace reorder
