// Apache License, Version 2.0, refer to LICENSE.txt
#include "reorder/orient.hpp"

namespace reorder {

namespace {

// Locate the adjacent-context material in the source and pick the
// discontinuous direction. Left side scans downward from t1-1, Right
// side upward from t2+1; the virtual corners act as source position 0
// and L+1 respectively.
Orientation discontinuous_direction(const PhrasePair& pp, Side side,
                                    const AlignmentIndex& a) {
  if (side == Side::Left) {
    int t = pp.tgt.start - 1;
    while (t >= 1 && !a.tgt_aligned(t)) --t;
    int max_src = t >= 1 ? a.max_src_aligned_to(t) : 0;
    return max_src < pp.src.start ? Orientation::DR : Orientation::DL;
  }
  int t = pp.tgt.end + 1;
  while (t <= a.tgt_len() && !a.tgt_aligned(t)) ++t;
  int min_src = t <= a.tgt_len() ? a.min_src_aligned_to(t) : a.src_len() + 1;
  return min_src > pp.src.end ? Orientation::DR : Orientation::DL;
}

}  // namespace

Orientation lrm_orientation(const PhrasePair& pp, Side side,
                            const AlignmentIndex& a) {
  if (side == Side::Left) {
    const int bt = pp.tgt.start - 1;
    if ((pp.src.start == 1 && bt == 0) || a.has_link(pp.src.start - 1, bt))
      return Orientation::M;
    if (a.has_link(pp.src.end + 1, bt)) return Orientation::S;
  } else {
    const int bt = pp.tgt.end + 1;
    if ((pp.src.end == a.src_len() && bt == a.tgt_len() + 1) ||
        a.has_link(pp.src.end + 1, bt))
      return Orientation::M;
    if (a.has_link(pp.src.start - 1, bt)) return Orientation::S;
  }
  return discontinuous_direction(pp, side, a);
}

Orientation lrm_orientation(const PhrasePair& pp, Side side,
                            const LinkSet& links, int src_len, int tgt_len) {
  return lrm_orientation(pp, side, AlignmentIndex(links, src_len, tgt_len));
}

Orientation hrm_orientation(const PhrasePair& pp, Side side,
                            const AlignmentIndex& a,
                            const BlockCornerIndex& corners) {
  if (side == Side::Left) {
    if (corners.block_exists(BlockAnchor::SrcEndTgtEnd, pp.src.start - 1,
                             pp.tgt.start - 1))
      return Orientation::M;
    if (corners.block_exists(BlockAnchor::SrcStartTgtEnd, pp.src.end + 1,
                             pp.tgt.start - 1))
      return Orientation::S;
  } else {
    if (corners.block_exists(BlockAnchor::SrcStartTgtStart, pp.src.end + 1,
                             pp.tgt.end + 1))
      return Orientation::M;
    if (corners.block_exists(BlockAnchor::SrcEndTgtStart, pp.src.start - 1,
                             pp.tgt.end + 1))
      return Orientation::S;
  }
  return discontinuous_direction(pp, side, a);
}

Orientation hrm_orientation(const PhrasePair& pp, Side side,
                            const LinkSet& links, int src_len, int tgt_len) {
  AlignmentIndex index(links, src_len, tgt_len);
  BlockCornerIndex corners(index);
  return hrm_orientation(pp, side, index, corners);
}

}  // namespace reorder
