#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlr/quat_matrix.hpp"

namespace qlr {

struct AltProjConfig {
    Index rank = 1;
    int max_iters = 5000;
    double residual_tol = 1e-6;
    bool trace = true;

    void validate(const QuatMatrix& a) const;
};

/// Per-step history of one solver phase.
struct PhaseTrace {
    std::vector<double> residual;   ///< ||Re(Y_k)||_F
    std::vector<double> objective;  ///< ||X_k - A||_F
    std::vector<double> seconds;    ///< wall clock since the solve started

    std::size_t size() const { return residual.size(); }
    void push(double res, double obj, double sec) {
        residual.push_back(res);
        objective.push_back(obj);
        seconds.push_back(sec);
    }
};

struct AltProjReport {
    QuatMatrix solution;  ///< pure; the last iterate, or the one with the smallest residual if not converged
    int iterations = 0;
    double objective = 0.0;       ///< ||solution - A||_F
    double final_residual = 0.0;  ///< ||Re(Y_k)||_F of the last iteration
    double solution_residual = 0.0;  ///< ||Re(Y)|| of the iteration that produced `solution`
    bool converged = false;
    double elapsed = 0.0;  ///< seconds, both phases
    PhaseTrace trace;      ///< alternating-projection phase; empty unless cfg.trace

    /// Geometric mean of residual[k+1] / residual[k] over the last 10
    /// iterations; empty when fewer than two positive residuals exist.
    std::optional<double> tail_ratio;

    // Set by hybrid_solve only.
    int drsm_steps = 0;
    PhaseTrace drsm_trace;
};

/// Alternating projections: Y_{k+1} = pi1(X_k), X_{k+1} = pi2(Y_{k+1}),
/// starting from X_0 = start. Stops once ||Re(Y_k)||_F < residual_tol or
/// after max_iters iterations.
AltProjReport alt_proj(const QuatMatrix& a, const QuatMatrix& start, const AltProjConfig& cfg);

inline AltProjReport alt_proj(const QuatMatrix& a, const AltProjConfig& cfg) { return alt_proj(a, a, cfg); }

/// Rank of the solution counted above max(1e-10 sigma_1, solution_residual).
/// The solution is a rank-r matrix minus its real part, so by Weyl's
/// inequality sigma_{r+1}(solution) <= solution_residual.
Index solution_rank(const AltProjReport& report);

std::optional<double> tail_ratio(const std::vector<double>& residuals, std::size_t window = 10);

/// CSV with header `phase,step,residual,objective,seconds`; DRSM rows first.
std::string trace_csv(const AltProjReport& report);

/// Summary without the solution matrix. Timing fields are omitted when
/// include_timing is false so that reruns compare equal.
nlohmann::json report_json(const AltProjReport& report, bool include_timing = true);

}  // namespace qlr
