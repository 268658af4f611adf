// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/extract.hpp"

#include <algorithm>

namespace reorder {

AlignmentIndex::AlignmentIndex(const LinkSet& links, int src_len, int tgt_len)
    : src_len_(src_len), tgt_len_(tgt_len) {
  prefix_.assign(static_cast<std::size_t>(src_len + 1) * (tgt_len + 1), 0);
  src_min_tgt_.assign(src_len + 1, 0);
  src_max_tgt_.assign(src_len + 1, 0);
  tgt_min_src_.assign(tgt_len + 1, 0);
  tgt_max_src_.assign(tgt_len + 1, 0);

  for (const Link& l : links) {
    prefix_[static_cast<std::size_t>(l.src) * (tgt_len + 1) + l.tgt] += 1;
    if (src_min_tgt_[l.src] == 0 || l.tgt < src_min_tgt_[l.src])
      src_min_tgt_[l.src] = l.tgt;
    src_max_tgt_[l.src] = std::max(src_max_tgt_[l.src], l.tgt);
    if (tgt_min_src_[l.tgt] == 0 || l.src < tgt_min_src_[l.tgt])
      tgt_min_src_[l.tgt] = l.src;
    tgt_max_src_[l.tgt] = std::max(tgt_max_src_[l.tgt], l.src);
  }
  for (int i = 1; i <= src_len; ++i)
    for (int j = 1; j <= tgt_len; ++j)
      prefix_[static_cast<std::size_t>(i) * (tgt_len + 1) + j] +=
          at(i - 1, j) + at(i, j - 1) - at(i - 1, j - 1);
}

bool AlignmentIndex::has_link(int src, int tgt) const {
  if (src < 1 || src > src_len_ || tgt < 1 || tgt > tgt_len_) return false;
  return links_in(Span{src, src}, Span{tgt, tgt}) > 0;
}

std::uint32_t AlignmentIndex::links_in(Span src, Span tgt) const {
  return at(src.end, tgt.end) - at(src.start - 1, tgt.end) -
         at(src.end, tgt.start - 1) + at(src.start - 1, tgt.start - 1);
}

std::uint32_t AlignmentIndex::links_in_rows(Span src) const {
  return links_in(src, Span{1, tgt_len_});
}

std::uint32_t AlignmentIndex::links_in_cols(Span tgt) const {
  return links_in(Span{1, src_len_}, tgt);
}

std::optional<Span> AlignmentIndex::tgt_projection(Span src) const {
  int lo = 0, hi = 0;
  for (int i = src.start; i <= src.end; ++i) {
    if (src_min_tgt_[i] == 0) continue;
    if (lo == 0 || src_min_tgt_[i] < lo) lo = src_min_tgt_[i];
    hi = std::max(hi, src_max_tgt_[i]);
  }
  if (lo == 0) return std::nullopt;
  return Span{lo, hi};
}

std::optional<Span> AlignmentIndex::src_projection(Span tgt) const {
  int lo = 0, hi = 0;
  for (int j = tgt.start; j <= tgt.end; ++j) {
    if (tgt_min_src_[j] == 0) continue;
    if (lo == 0 || tgt_min_src_[j] < lo) lo = tgt_min_src_[j];
    hi = std::max(hi, tgt_max_src_[j]);
  }
  if (lo == 0) return std::nullopt;
  return Span{lo, hi};
}

bool AlignmentIndex::consistent(Span src, Span tgt) const {
  std::uint32_t inside = links_in(src, tgt);
  if (inside == 0) return false;
  return links_in_rows(src) == inside && links_in_cols(tgt) == inside;
}

bool is_consistent(Span src, Span tgt, const LinkSet& links, bool covered_only) {
  std::uint32_t inside = 0;
  bool src_start_covered = false, src_end_covered = false;
  bool tgt_start_covered = false, tgt_end_covered = false;
  for (const Link& l : links) {
    bool in_src = src.contains(l.src);
    bool in_tgt = tgt.contains(l.tgt);
    if (in_src != in_tgt) return false;  // conditions 2 and 3
    if (in_src && in_tgt) {
      ++inside;
      src_start_covered |= l.src == src.start;
      src_end_covered |= l.src == src.end;
      tgt_start_covered |= l.tgt == tgt.start;
      tgt_end_covered |= l.tgt == tgt.end;
    }
  }
  if (inside == 0) return false;  // condition 1
  if (covered_only && !(src_start_covered && src_end_covered &&
                        tgt_start_covered && tgt_end_covered))
    return false;
  return true;
}

std::vector<PhrasePair> extract_phrase_pairs(const AlignmentIndex& index,
                                             int max_len) {
  std::vector<PhrasePair> out;
  const int L = index.src_len();
  const int T = index.tgt_len();
  for (int i1 = 1; i1 <= L; ++i1) {
    for (int i2 = i1; i2 <= L && i2 - i1 + 1 <= max_len; ++i2) {
      Span src{i1, i2};
      auto proj = index.tgt_projection(src);
      if (!proj) continue;
      auto back = index.src_projection(*proj);
      if (back->start < i1 || back->end > i2) continue;

      // Expand the tight target span over unaligned boundary tokens.
      int lo = proj->start;
      while (lo > 1 && !index.tgt_aligned(lo - 1)) --lo;
      int hi = proj->end;
      while (hi < T && !index.tgt_aligned(hi + 1)) ++hi;

      for (int t1 = lo; t1 <= proj->start; ++t1)
        for (int t2 = proj->end; t2 <= hi; ++t2)
          if (t2 - t1 + 1 <= max_len)
            out.push_back(PhrasePair{src, Span{t1, t2}});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PhrasePair> extract_phrase_pairs(const SentencePair& sp,
                                             int max_len) {
  return extract_phrase_pairs(AlignmentIndex(sp), max_len);
}

BlockCornerIndex::BlockCornerIndex(const AlignmentIndex& index)
    : src_len_(index.src_len()), tgt_len_(index.tgt_len()) {
  for (auto& grid : corner_)
    grid.assign(static_cast<std::size_t>(src_len_ + 2) * (tgt_len_ + 2), 0);

  auto& end_end = corner_[static_cast<int>(BlockAnchor::SrcEndTgtEnd)];
  auto& start_end = corner_[static_cast<int>(BlockAnchor::SrcStartTgtEnd)];
  auto& start_start = corner_[static_cast<int>(BlockAnchor::SrcStartTgtStart)];
  auto& end_start = corner_[static_cast<int>(BlockAnchor::SrcEndTgtStart)];

  // Corners of tight blocks: both source endpoints aligned, target span
  // equal to the projection, back-projection contained.
  for (int i1 = 1; i1 <= src_len_; ++i1) {
    if (!index.src_aligned(i1)) continue;
    for (int i2 = i1; i2 <= src_len_; ++i2) {
      if (!index.src_aligned(i2)) continue;
      auto proj = index.tgt_projection(Span{i1, i2});
      auto back = index.src_projection(*proj);
      if (back->start < i1 || back->end > i2) continue;
      start_start[pos(i1, proj->start)] = 1;
      start_end[pos(i1, proj->end)] = 1;
      end_start[pos(i2, proj->start)] = 1;
      end_end[pos(i2, proj->end)] = 1;
    }
  }

  // Propagate over unaligned tokens: a block may extend its source end
  // rightward (or its source start leftward) across an unaligned word,
  // and likewise on the target axis.
  for (int i = 2; i <= src_len_; ++i) {
    if (index.src_aligned(i)) continue;
    for (int j = 1; j <= tgt_len_; ++j) {
      end_end[pos(i, j)] |= end_end[pos(i - 1, j)];
      end_start[pos(i, j)] |= end_start[pos(i - 1, j)];
    }
  }
  for (int i = src_len_ - 1; i >= 1; --i) {
    if (index.src_aligned(i)) continue;
    for (int j = 1; j <= tgt_len_; ++j) {
      start_end[pos(i, j)] |= start_end[pos(i + 1, j)];
      start_start[pos(i, j)] |= start_start[pos(i + 1, j)];
    }
  }
  for (int j = 2; j <= tgt_len_; ++j) {
    if (index.tgt_aligned(j)) continue;
    for (int i = 1; i <= src_len_; ++i) {
      end_end[pos(i, j)] |= end_end[pos(i, j - 1)];
      start_end[pos(i, j)] |= start_end[pos(i, j - 1)];
    }
  }
  for (int j = tgt_len_ - 1; j >= 1; --j) {
    if (index.tgt_aligned(j)) continue;
    for (int i = 1; i <= src_len_; ++i) {
      end_start[pos(i, j)] |= end_start[pos(i, j + 1)];
      start_start[pos(i, j)] |= start_start[pos(i, j + 1)];
    }
  }
}

bool BlockCornerIndex::block_exists(BlockAnchor anchor, int s, int t) const {
  if (anchor == BlockAnchor::SrcEndTgtEnd && s == 0 && t == 0) return true;
  if (anchor == BlockAnchor::SrcStartTgtStart && s == src_len_ + 1 &&
      t == tgt_len_ + 1)
    return true;
  if (s < 1 || s > src_len_ || t < 1 || t > tgt_len_) return false;
  return corner_[static_cast<int>(anchor)][pos(s, t)] != 0;
}

bool consistent_block_exists(const LinkSet& links, int src_len, int tgt_len,
                             BlockAnchor anchor, int s, int t) {
  AlignmentIndex index(links, src_len, tgt_len);
  BlockCornerIndex corners(index);
  return corners.block_exists(anchor, s, t);
}

}  // namespace reorder
