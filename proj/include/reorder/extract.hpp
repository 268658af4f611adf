// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_EXTRACT_HPP
#define REORDER_EXTRACT_HPP

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "reorder/corpus.hpp"
#include "reorder/types.hpp"

namespace reorder {

inline constexpr int kUnlimitedLen = std::numeric_limits<int>::max();
inline constexpr int kDefaultMaxLen = 7;

// Per-sentence alignment lookup structure: 2-D prefix sums for O(1)
// rectangle counts plus per-row/per-column projections.
class AlignmentIndex {
 public:
  AlignmentIndex(const LinkSet& links, int src_len, int tgt_len);
  explicit AlignmentIndex(const SentencePair& sp)
      : AlignmentIndex(sp.links, sp.src_len(), sp.tgt_len()) {}

  int src_len() const { return src_len_; }
  int tgt_len() const { return tgt_len_; }

  bool has_link(int src, int tgt) const;
  std::uint32_t links_in(Span src, Span tgt) const;
  std::uint32_t links_in_rows(Span src) const;
  std::uint32_t links_in_cols(Span tgt) const;

  bool src_aligned(int i) const { return src_min_tgt_[i] != 0; }
  bool tgt_aligned(int j) const { return tgt_min_src_[j] != 0; }

  // Smallest target span covering all links of the source span, or
  // nullopt when the span is entirely unaligned. Mirrored for target.
  std::optional<Span> tgt_projection(Span src) const;
  std::optional<Span> src_projection(Span tgt) const;

  // Extremes of the source positions aligned to one target token;
  // 0 when the token is unaligned.
  int min_src_aligned_to(int tgt) const { return tgt_min_src_[tgt]; }
  int max_src_aligned_to(int tgt) const { return tgt_max_src_[tgt]; }

  // The three phrase-pair consistency conditions, O(1) per query.
  bool consistent(Span src, Span tgt) const;

 private:
  int src_len_;
  int tgt_len_;
  std::vector<std::uint32_t> prefix_;  // (L+1) x (T+1), row-major
  std::vector<int> src_min_tgt_, src_max_tgt_;
  std::vector<int> tgt_min_src_, tgt_max_src_;

  std::uint32_t at(int i, int j) const {
    return prefix_[static_cast<std::size_t>(i) * (tgt_len_ + 1) + j];
  }
};

// Alignment consistency of a span rectangle: (1) at least one link
// inside, (2) no source token in src links outside tgt, (3) no target
// token in tgt links outside src. With covered_only the rectangle must
// also be tight: every boundary row and column carries a link.
bool is_consistent(Span src, Span tgt, const LinkSet& links,
                   bool covered_only = false);

// All alignment-consistent phrase-pairs with both side lengths at most
// max_len, including expansions over unaligned boundary tokens.
// Returns pairs sorted by (src, tgt) span.
std::vector<PhrasePair> extract_phrase_pairs(const AlignmentIndex& index,
                                             int max_len = kDefaultMaxLen);
std::vector<PhrasePair> extract_phrase_pairs(const SentencePair& sp,
                                             int max_len = kDefaultMaxLen);

// Corner constraint for unbounded-length block existence queries.
enum class BlockAnchor {
  SrcEndTgtEnd,      // some block's source span ends at s and target at t
  SrcStartTgtEnd,    // source span starts at s, target span ends at t
  SrcStartTgtStart,  // source span starts at s, target span starts at t
  SrcEndTgtStart,    // source span ends at s, target span starts at t
};

// Valid-corner grid over all consistent blocks of unbounded length,
// computed in O(L^2 + L*T) per sentence.
class BlockCornerIndex {
 public:
  explicit BlockCornerIndex(const AlignmentIndex& index);

  // True iff some consistent block satisfies the anchor. The virtual
  // sentence-boundary corners (0,0) for SrcEndTgtEnd and
  // (src_len+1, tgt_len+1) for SrcStartTgtStart hold by convention.
  bool block_exists(BlockAnchor anchor, int s, int t) const;

 private:
  int src_len_;
  int tgt_len_;
  // [anchor][position] flags; position = s * (T+2) + t.
  std::array<std::vector<std::uint8_t>, 4> corner_;

  std::size_t pos(int s, int t) const {
    return static_cast<std::size_t>(s) * (tgt_len_ + 2) + t;
  }
};

// Convenience form matching one-off queries; builds both indexes.
bool consistent_block_exists(const LinkSet& links, int src_len, int tgt_len,
                             BlockAnchor anchor, int s, int t);

}  // namespace reorder

#endif  // REORDER_EXTRACT_HPP
