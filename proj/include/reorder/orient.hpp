// Apache License, Version 2.0, refer to LICENSE.txt
#ifndef REORDER_ORIENT_HPP
#define REORDER_ORIENT_HPP

#include "reorder/extract.hpp"
#include "reorder/types.hpp"

namespace reorder {

enum class ModelKind { Lrm, Hrm };

inline const char* to_string(ModelKind m) {
  return m == ModelKind::Lrm ? "lrm" : "hrm";
}

// Word-based orientation against the adjacent alignment points.
//
// Left side, with A' = links plus the virtual corners (0,0) and
// (L+1,T+1): M iff (s1-1, t1-1) in A'; else S iff (s2+1, t1-1) in A';
// else discontinuous. The discontinuous direction follows the jump
// reading: the boundary target position (scanned outward to the nearest
// aligned position, stopping at the virtual corner) is located in the
// source; material entirely left of the phrase gives DR on the Left
// side, material entirely right of it gives DR on the Right side.
Orientation lrm_orientation(const PhrasePair& pp, Side side,
                            const AlignmentIndex& index);
Orientation lrm_orientation(const PhrasePair& pp, Side side,
                            const LinkSet& links, int src_len, int tgt_len);

// Block-based orientation: the corner checks use the longest consistent
// blocks (unbounded length) instead of single alignment points. The
// discontinuous direction rule is shared with lrm_orientation.
Orientation hrm_orientation(const PhrasePair& pp, Side side,
                            const AlignmentIndex& index,
                            const BlockCornerIndex& corners);
Orientation hrm_orientation(const PhrasePair& pp, Side side,
                            const LinkSet& links, int src_len, int tgt_len);

}  // namespace reorder

#endif  // REORDER_ORIENT_HPP
