#include "qlr/projections.hpp"

#include <algorithm>
#include <sstream>

namespace qlr {

namespace {

void check_rank(const QuatMatrix& x, Index r) {
    const Index k = std::min(x.rows(), x.cols());
    if (r < 1 || r > k) {
        std::ostringstream ss;
        ss << "rank " << r << " outside [1, " << k << "] for a " << x.rows() << "x" << x.cols() << " matrix";
        throw ValidationError(ss.str());
    }
}

}  // namespace

QuatMatrix pi1(const QuatMatrix& x, Index r) {
    check_rank(x, r);
    return truncate(qsvd(x), r);
}

QuatMatrix pi2(const QuatMatrix& x) { return pure_part(x); }

RankProjector::RankProjector(Index rank, QsvdOptions opts) : rank_{rank}, opts_{opts} {
    if (rank < 1) {
        throw ValidationError("rank must be positive");
    }
}

QuatMatrix RankProjector::operator()(const QuatMatrix& x) {
    check_rank(x, rank_);
    last_ = last_ ? qsvd(x, *last_, opts_) : qsvd(x, opts_);
    return truncate(*last_, rank_);
}

}  // namespace qlr
