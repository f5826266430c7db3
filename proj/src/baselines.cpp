#include "qlr/baselines.hpp"

#include <algorithm>
#include <chrono>

#include "qlr/projections.hpp"
#include "qlr/qsvd.hpp"

namespace qlr {

TruncationConvention parse_convention(const std::string& s) {
    if (s == "a") {
        return TruncationConvention::AtTarget;
    }
    if (s == "b") {
        return TruncationConvention::Quarter;
    }
    throw ValidationError("convention must be 'a' or 'b', got '" + s + "'");
}

const char* convention_name(TruncationConvention c) {
    return c == TruncationConvention::AtTarget ? "a" : "b";
}

Index truncation_rank(Index target_rank, TruncationConvention c) {
    if (target_rank < 1) {
        throw ValidationError("target rank must be positive");
    }
    return c == TruncationConvention::AtTarget ? target_rank : target_rank / 4;
}

QuatMatrix qsvd_tr(const QuatMatrix& a, Index r_trunc) { return pi2(pi1(a, r_trunc)); }

QsvdTrResult qsvd_tr_baseline(const QuatMatrix& a, Index target_rank, TruncationConvention c) {
    const auto t0 = std::chrono::steady_clock::now();
    QsvdTrResult out;
    out.convention = c;
    out.target_rank = target_rank;
    out.truncation_rank = truncation_rank(target_rank, c);
    if (target_rank > std::min(a.rows(), a.cols())) {
        throw ValidationError("qsvd_tr: target rank exceeds min(m, n)");
    }
    out.solution = out.truncation_rank == 0 ? QuatMatrix(a.rows(), a.cols()) : qsvd_tr(a, out.truncation_rank);
    out.result_rank = numerical_rank(out.solution);
    out.objective = frobenius_norm(out.solution - a);
    out.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

RankBounds rank_bounds_check(const QuatMatrix& a, double rel_tol) {
    RankBounds b;
    b.rank = numerical_rank(a, rel_tol);
    b.pure_rank = numerical_rank(pure_part(a), rel_tol);
    b.hypothesis_holds = 4 * b.rank <= std::min(a.rows(), a.cols());
    b.ok = b.rank <= b.pure_rank && b.pure_rank <= 4 * b.rank;
    return b;
}

}  // namespace qlr
