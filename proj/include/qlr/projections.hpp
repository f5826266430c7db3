#pragma once

#include <optional>

#include "qlr/qsvd.hpp"
#include "qlr/quat_matrix.hpp"

namespace qlr {

/// Nearest rank-r matrix: truncate(qsvd(x), r). Ties among singular values
/// resolve to whichever minimizer the sweep order produces.
QuatMatrix pi1(const QuatMatrix& x, Index r);

/// Nearest pure matrix: drops the real component.
QuatMatrix pi2(const QuatMatrix& x);

/// pi1 for iterative solvers. Each call reuses the previous call's right
/// basis as the Jacobi starting point; outputs obey the same contract as pi1.
class RankProjector {
public:
    explicit RankProjector(Index rank, QsvdOptions opts = {});

    QuatMatrix operator()(const QuatMatrix& x);

    Index rank() const { return rank_; }
    /// Factors of the most recent argument.
    const std::optional<QsvdFactors>& last() const { return last_; }

private:
    Index rank_;
    QsvdOptions opts_;
    std::optional<QsvdFactors> last_;
};

}  // namespace qlr
