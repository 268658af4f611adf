// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/counts.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

namespace reorder {

std::string make_key(std::string_view src_phrase, std::string_view tgt_phrase) {
  std::string key;
  key.reserve(src_phrase.size() + tgt_phrase.size() + 1);
  key.append(src_phrase);
  key.push_back(kKeySep);
  key.append(tgt_phrase);
  return key;
}

std::string make_key(const std::vector<std::string>& src_tokens, Span src,
                     const std::vector<std::string>& tgt_tokens, Span tgt) {
  std::string key;
  for (int i = src.start; i <= src.end; ++i) {
    if (i > src.start) key.push_back(' ');
    key.append(src_tokens[i - 1]);
  }
  key.push_back(kKeySep);
  for (int j = tgt.start; j <= tgt.end; ++j) {
    if (j > tgt.start) key.push_back(' ');
    key.append(tgt_tokens[j - 1]);
  }
  return key;
}

std::pair<std::string_view, std::string_view> split_key(std::string_view key) {
  std::size_t sep = key.find(kKeySep);
  return {key.substr(0, sep), key.substr(sep + 1)};
}

std::vector<std::string> key_side_tokens(std::string_view key, bool target) {
  auto [src, tgt] = split_key(key);
  std::string_view phrase = target ? tgt : src;
  std::vector<std::string> toks;
  std::size_t i = 0;
  while (i <= phrase.size()) {
    std::size_t sp = phrase.find(' ', i);
    if (sp == std::string_view::npos) {
      toks.emplace_back(phrase.substr(i));
      break;
    }
    toks.emplace_back(phrase.substr(i, sp - i));
    i = sp + 1;
  }
  return toks;
}

LocalAlignment local_alignment(const LinkSet& sentence_links,
                               const PhrasePair& pp) {
  LocalAlignment local;
  for (const Link& l : sentence_links)
    if (pp.src.contains(l.src) && pp.tgt.contains(l.tgt))
      local.push_back(Link{l.src - pp.src.start + 1, l.tgt - pp.tgt.start + 1});
  return local;  // sentence_links is sorted, so local is too
}

void PairCounts::merge(const PairCounts& other) {
  for (int s = 0; s < 2; ++s)
    for (int o = 0; o < 4; ++o) side[s][o] += other.side[s][o];
  for (const auto& [alignment, count] : other.alignments)
    alignments[alignment] += count;
}

const LocalAlignment* PairCounts::dominant_alignment() const {
  const LocalAlignment* best = nullptr;
  std::uint64_t best_count = 0;
  for (const auto& [alignment, count] : alignments) {
    if (count > best_count) {  // map order breaks ties toward the smallest
      best = &alignment;
      best_count = count;
    }
  }
  return best;
}

void CountTable::add_event(const std::string& key, Side side, Orientation o,
                           std::uint64_t count) {
  map_[key].side[static_cast<int>(side)][static_cast<int>(o)] += count;
}

void CountTable::add_alignment(const std::string& key, LocalAlignment alignment) {
  map_[key].alignments[std::move(alignment)] += 1;
}

void CountTable::merge(CountTable&& other) {
  if (map_.empty()) {
    map_ = std::move(other.map_);
    return;
  }
  for (auto& [key, counts] : other.map_) {
    auto it = map_.find(key);
    if (it == map_.end())
      map_.emplace(key, std::move(counts));
    else
      it->second.merge(counts);
  }
  other.map_.clear();
}

const PairCounts* CountTable::find(std::string_view key) const {
  auto it = map_.find(std::string(key));
  return it == map_.end() ? nullptr : &it->second;
}

std::vector<const CountTable::Map::value_type*> CountTable::sorted_items() const {
  std::vector<const Map::value_type*> items;
  items.reserve(map_.size());
  for (const auto& kv : map_) items.push_back(&kv);
  std::sort(items.begin(), items.end(),
            [](const auto* a, const auto* b) { return a->first < b->first; });
  return items;
}

CountVector CountTable::marginal(Side side) const {
  CountVector m{};
  for (const auto& [key, counts] : map_)
    for (int o = 0; o < 4; ++o)
      m[o] += counts.side[static_cast<int>(side)][o];
  return m;
}

std::uint64_t CountTable::events() const {
  std::uint64_t n = 0;
  for (const auto& [key, counts] : map_)
    n += total(counts.side[0]) + total(counts.side[1]);
  return n;
}

void CountTable::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write file: " + path);
  std::vector<std::string> lines;
  lines.reserve(map_.size() * 2);
  for (const auto& [key, counts] : map_) {
    auto [src, tgt] = split_key(key);
    for (Side side : kSides) {
      const CountVector& c = counts.side[static_cast<int>(side)];
      std::string line;
      line.append(src);
      line.append(" ||| ");
      line.append(tgt);
      line.append(" ||| ");
      line.append(to_string(side));
      line.append(" ||| ");
      line.append(std::to_string(c[0])).push_back(' ');
      line.append(std::to_string(c[1])).push_back(' ');
      line.append(std::to_string(c[2])).push_back(' ');
      line.append(std::to_string(c[3]));
      lines.push_back(std::move(line));
    }
  }
  std::sort(lines.begin(), lines.end());
  for (const std::string& line : lines) out << line << '\n';
  if (!out) throw IoError("failed writing file: " + path);
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t sep = line.find(" ||| ", start);
    if (sep == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, sep - start));
    start = sep + 5;
  }
  return fields;
}

}  // namespace

CountTable CountTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  CountTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (fields.size() != 4)
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected 4 '|||' fields");
    Side side;
    if (fields[2] == "L")
      side = Side::Left;
    else if (fields[2] == "R")
      side = Side::Right;
    else
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": bad side '" + fields[2] + "'");
    std::string key = make_key(fields[0], fields[1]);
    std::uint64_t c[4];
    const char* p = fields[3].c_str();
    const char* end = p + fields[3].size();
    for (int o = 0; o < 4; ++o) {
      while (p < end && *p == ' ') ++p;
      auto [next, ec] = std::from_chars(p, end, c[o]);
      if (ec != std::errc())
        throw FormatError(path + ":" + std::to_string(line_no) +
                          ": bad count field '" + fields[3] + "'");
      p = next;
    }
    for (int o = 0; o < 4; ++o)
      table.add_event(key, side, static_cast<Orientation>(o), c[o]);
  }
  return table;
}

}  // namespace reorder
