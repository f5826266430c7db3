#include "qlr/altproj.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>

#include "qlr/projections.hpp"
#include "qlr/qsvd.hpp"

namespace qlr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

void AltProjConfig::validate(const QuatMatrix& a) const {
    const Index k = std::min(a.rows(), a.cols());
    if (rank < 1 || rank > k) {
        std::ostringstream ss;
        ss << "altproj: rank " << rank << " outside [1, " << k << "]";
        throw ValidationError(ss.str());
    }
    if (max_iters < 1) {
        throw ValidationError("altproj: max_iters must be positive");
    }
    if (!(residual_tol >= 0.0) || !std::isfinite(residual_tol)) {
        throw ValidationError("altproj: residual_tol must be a finite nonnegative number");
    }
}

std::optional<double> tail_ratio(const std::vector<double>& residuals, std::size_t window) {
    if (residuals.size() < 2 || window == 0) {
        return std::nullopt;
    }
    const std::size_t ratios = std::min(window, residuals.size() - 1);
    const std::size_t first = residuals.size() - 1 - ratios;
    double log_sum = 0.0;
    for (std::size_t i = first; i + 1 < residuals.size(); ++i) {
        if (!(residuals[i] > 0.0) || !(residuals[i + 1] > 0.0)) {
            return std::nullopt;
        }
        log_sum += std::log(residuals[i + 1] / residuals[i]);
    }
    return std::exp(log_sum / static_cast<double>(ratios));
}

AltProjReport alt_proj(const QuatMatrix& a, const QuatMatrix& start, const AltProjConfig& cfg) {
    require_same_shape(a, start, "altproj start point");
    cfg.validate(a);

    const auto t0 = Clock::now();
    RankProjector project(cfg.rank);
    QuatMatrix x = start;
    QuatMatrix best;
    double best_objective = 0.0;
    double best_residual = std::numeric_limits<double>::infinity();
    std::vector<double> recent;  // residual window for tail_ratio

    AltProjReport report;
    for (int it = 1; it <= cfg.max_iters; ++it) {
        QuatMatrix y = project(x);
        const double residual = real_part(y).norm();
        x = pi2(y);
        const double objective = frobenius_norm(x - a);

        report.iterations = it;
        report.final_residual = residual;
        if (cfg.trace) {
            report.trace.push(residual, objective, seconds_since(t0));
        }
        recent.push_back(residual);
        if (recent.size() > 11) {
            recent.erase(recent.begin());
        }
        if (residual < cfg.residual_tol) {
            report.converged = true;
            report.solution = std::move(x);
            report.objective = objective;
            report.solution_residual = residual;
            break;
        }
        // Without convergence the most nearly feasible iterate is kept.
        if (residual < best_residual) {
            best_objective = objective;
            best = x;
            best_residual = residual;
        }
    }
    if (!report.converged) {
        report.solution = std::move(best);
        report.objective = best_objective;
        report.solution_residual = best_residual;
    }
    report.tail_ratio = tail_ratio(recent);
    report.elapsed = seconds_since(t0);
    return report;
}

Index solution_rank(const AltProjReport& report) {
    const Eigen::VectorXd s = singular_values(report.solution);
    if (s.size() == 0 || s(0) == 0.0) {
        return 0;
    }
    const double cut = std::max(1e-10 * s(0), report.solution_residual * (1.0 + 1e-8));
    return (s.array() > cut).count();
}

std::string trace_csv(const AltProjReport& report) {
    std::ostringstream ss;
    ss.precision(17);
    ss << "phase,step,residual,objective,seconds\n";
    for (std::size_t i = 0; i < report.drsm_trace.size(); ++i) {
        ss << "drsm," << i + 1 << ',' << report.drsm_trace.residual[i] << ',' << report.drsm_trace.objective[i]
           << ',' << report.drsm_trace.seconds[i] << '\n';
    }
    for (std::size_t i = 0; i < report.trace.size(); ++i) {
        ss << "altproj," << i + 1 << ',' << report.trace.residual[i] << ',' << report.trace.objective[i] << ','
           << report.trace.seconds[i] << '\n';
    }
    return ss.str();
}

nlohmann::json report_json(const AltProjReport& report, bool include_timing) {
    nlohmann::json doc;
    doc["iterations"] = report.iterations;
    doc["objective"] = report.objective;
    doc["final_residual"] = report.final_residual;
    doc["solution_residual"] = report.solution_residual;
    doc["converged"] = report.converged;
    doc["tail_ratio"] = report.tail_ratio ? nlohmann::json(*report.tail_ratio) : nlohmann::json(nullptr);
    doc["drsm_steps"] = report.drsm_steps;
    doc["residual_trace"] = report.trace.residual;
    if (report.drsm_steps > 0) {
        doc["drsm_residual_trace"] = report.drsm_trace.residual;
    }
    if (include_timing) {
        doc["elapsed_seconds"] = report.elapsed;
    }
    return doc;
}

}  // namespace qlr
