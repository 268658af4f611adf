// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_COUNTS_HPP
#define REORDER_COUNTS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "reorder/corpus.hpp"
#include "reorder/types.hpp"

namespace reorder {

// Phrase-pair keys are "src phrase" + '\x1F' + "tgt phrase" with tokens
// space-joined. The separator sorts below ' ' so shorter phrases order
// before their extensions.
inline constexpr char kKeySep = '\x1F';

std::string make_key(std::string_view src_phrase, std::string_view tgt_phrase);
std::string make_key(const std::vector<std::string>& src_tokens, Span src,
                     const std::vector<std::string>& tgt_tokens, Span tgt);
std::pair<std::string_view, std::string_view> split_key(std::string_view key);
std::vector<std::string> key_side_tokens(std::string_view key, bool target);

// Internal alignment of one phrase-pair occurrence, in phrase-local
// 1-based coordinates, sorted.
using LocalAlignment = std::vector<Link>;

LocalAlignment local_alignment(const LinkSet& sentence_links,
                               const PhrasePair& pp);

// Orientation counts of one phrase-pair, both sides, plus the multiset
// of observed internal alignments when recording is enabled.
struct PairCounts {
  std::array<CountVector, 2> side{};
  std::map<LocalAlignment, std::uint64_t> alignments;

  std::uint64_t occurrences() const { return total(side[0]); }
  void merge(const PairCounts& other);

  // Most frequent internal alignment; ties go to the smallest under
  // lexicographic link order. Empty when none were recorded.
  const LocalAlignment* dominant_alignment() const;
};

// Mergeable count map over phrase-pair keys. Merging per-shard tables
// over any partition of a corpus equals single-shard counting exactly.
class CountTable {
 public:
  using Map = std::unordered_map<std::string, PairCounts>;

  void add_event(const std::string& key, Side side, Orientation o,
                 std::uint64_t count = 1);
  void add_alignment(const std::string& key, LocalAlignment alignment);
  void merge(CountTable&& other);

  const PairCounts* find(std::string_view key) const;
  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }

  const Map& items() const { return map_; }
  std::vector<const Map::value_type*> sorted_items() const;

  // Marginal counts over all phrase-pairs for one side.
  CountVector marginal(Side side) const;

  std::uint64_t events() const;

  // Counts file: "src ||| tgt ||| side ||| cM cS cDL cDR" per line,
  // sorted. Internal alignments are not serialized.
  void save(const std::string& path) const;
  static CountTable load(const std::string& path);

 private:
  Map map_;
};

}  // namespace reorder

#endif  // REORDER_COUNTS_HPP
