#pragma once

#include <string>

#include "qlr/quat_matrix.hpp"

namespace qlr {

/// How the QSVD-truncation baseline picks its truncation rank for a target
/// pure rank r.
enum class TruncationConvention {
    AtTarget,  ///< "a": truncate at r, then drop the real part (result rank may reach 4r)
    Quarter,   ///< "b": truncate at floor(r/4), so the pure result has rank <= r
};

TruncationConvention parse_convention(const std::string& s);
const char* convention_name(TruncationConvention c);

/// Truncation rank used for target rank r; 0 means the baseline returns zero.
Index truncation_rank(Index target_rank, TruncationConvention c);

/// pi2(pi1(A, r_trunc)).
QuatMatrix qsvd_tr(const QuatMatrix& a, Index r_trunc);

struct QsvdTrResult {
    QuatMatrix solution;
    TruncationConvention convention = TruncationConvention::AtTarget;
    Index target_rank = 0;
    Index truncation_rank = 0;
    Index result_rank = 0;  ///< numerical_rank(solution); may exceed the truncation rank
    double objective = 0.0;
    double elapsed = 0.0;
};

QsvdTrResult qsvd_tr_baseline(const QuatMatrix& a, Index target_rank, TruncationConvention c);

/// r <= rank(pure_part(A)) <= 4r, valid whenever rank(A) <= min(m, n)/4.
struct RankBounds {
    Index rank = 0;
    Index pure_rank = 0;
    bool ok = false;
    bool hypothesis_holds = false;  ///< false: the sandwich was checked anyway but is not guaranteed
};

RankBounds rank_bounds_check(const QuatMatrix& a, double rel_tol = 1e-10);

}  // namespace qlr
