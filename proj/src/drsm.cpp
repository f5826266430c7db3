#include "qlr/drsm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "qlr/projections.hpp"

namespace qlr {

namespace {

using Clock = std::chrono::steady_clock;

QuatMatrix blend(const QuatMatrix& w, const QuatMatrix& a, double alpha) {
    return (alpha / (1.0 + alpha)) * a + (1.0 / (1.0 + alpha)) * w;
}

void check_step(double alpha, double tau) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw ValidationError("prox: alpha must be positive and finite");
    }
    if (!(tau >= 0.0) || !std::isfinite(tau)) {
        throw ValidationError("prox: tau must be nonnegative and finite");
    }
}

}  // namespace

void DrsmConfig::validate() const {
    if (rank < 1) {
        throw ValidationError("drsm: rank must be positive");
    }
    if (steps < 0) {
        throw ValidationError("drsm: steps must be nonnegative");
    }
    if (!(tau0 >= 0.0) || !std::isfinite(tau0)) {
        throw ValidationError("drsm: tau0 must be nonnegative and finite");
    }
    if (tau_double_until < 0) {
        throw ValidationError("drsm: tau_double_until must be nonnegative");
    }
    if (!std::isfinite(std::ldexp(tau0, tau_double_until))) {
        throw ValidationError("drsm: tau0 * 2^tau_double_until overflows");
    }
    if (!(alpha0_numerator > 0.0) || !std::isfinite(alpha0_numerator)) {
        throw ValidationError("drsm: alpha0_numerator must be positive");
    }
    if (!(alpha_decay > 0.0 && alpha_decay < 1.0)) {
        throw ValidationError("drsm: alpha_decay must lie in (0, 1)");
    }
    if (!(alpha_floor_numerator > 0.0 && alpha_floor_numerator < 1.0)) {
        throw ValidationError("drsm: alpha_floor_numerator must lie in (0, 1)");
    }
}

DrsmSchedule::DrsmSchedule(const DrsmConfig& cfg)
    : cfg_{cfg}, tau_{cfg.tau0}, alpha_{cfg.alpha0_numerator / (1.0 + cfg.tau0)} {
    cfg_.validate();
}

void DrsmSchedule::advance() {
    ++k_;
    // 2^1000 is still a normal double, so tau is kept exactly.
    tau_ = std::ldexp(cfg_.tau0, std::min(k_, cfg_.tau_double_until));
    alpha_ = std::max(cfg_.alpha_decay * alpha_, cfg_.alpha_floor_numerator / (1.0 + tau_));
}

QuatMatrix prox_f(const QuatMatrix& y, const QuatMatrix& a, double alpha, double tau) {
    require_same_shape(y, a, "prox_f");
    check_step(alpha, tau);
    QuatMatrix out(y.rows(), y.cols());
    const double real_den = 1.0 + alpha + alpha * tau;
    out.component(0) = (alpha * a.a0() + y.a0()) / real_den;
    for (int c = 1; c < 4; ++c) {
        out.component(c) = (alpha * a.component(c) + y.component(c)) / (1.0 + alpha);
    }
    return out;
}

QuatMatrix prox_g(const QuatMatrix& w, const QuatMatrix& a, double alpha, Index r) {
    require_same_shape(w, a, "prox_g");
    check_step(alpha, 0.0);
    return pi1(blend(w, a, alpha), r);
}

DrsmState drsm_run(const QuatMatrix& a, const DrsmConfig& cfg) {
    cfg.validate();
    const Index k = std::min(a.rows(), a.cols());
    if (cfg.rank > k) {
        std::ostringstream ss;
        ss << "drsm: rank " << cfg.rank << " outside [1, " << k << "]";
        throw ValidationError(ss.str());
    }

    const auto t0 = Clock::now();
    DrsmState st;
    st.x = a;
    st.y = a;
    st.z = a;
    st.input_pure = a.is_pure();

    DrsmSchedule schedule(cfg);
    st.tau = schedule.tau();
    st.alpha = schedule.alpha();
    RankProjector project(cfg.rank);
    for (int step = 0; step < cfg.steps; ++step) {
        schedule.advance();
        const double alpha = schedule.alpha();
        const double tau = schedule.tau();

        st.y = prox_f(st.x, a, alpha, tau);
        st.z = project(blend(2.0 * st.y - st.x, a, alpha));
        st.x += st.z;
        st.x -= st.y;

        st.k = schedule.k();
        st.tau = tau;
        st.alpha = alpha;
        st.trace.push(real_part(st.y).norm(), frobenius_norm(st.y - a),
                      std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return st;
}

AltProjReport hybrid_solve(const QuatMatrix& a, const DrsmConfig& drsm_cfg, const AltProjConfig& ap_cfg) {
    ap_cfg.validate(a);
    if (drsm_cfg.rank != ap_cfg.rank) {
        throw ValidationError("hybrid: DRSM and AltProj ranks differ");
    }
    const auto t0 = Clock::now();
    DrsmState st = drsm_run(a, drsm_cfg);
    const double drsm_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    AltProjReport report = alt_proj(a, st.y, ap_cfg);
    report.drsm_steps = st.k;
    report.drsm_trace = std::move(st.trace);
    for (double& sec : report.trace.seconds) {
        sec += drsm_seconds;
    }
    report.elapsed += drsm_seconds;
    return report;
}

}  // namespace qlr
