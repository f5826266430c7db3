#pragma once

#include "qlr/altproj.hpp"
#include "qlr/quat_matrix.hpp"

namespace qlr {

/// Douglas-Rachford warm start on the penalized problem
///
///     min  1/2 ||X - A||^2 + tau/2 ||Re X||^2  +  1/2 ||X - A||^2 + indicator(rank X <= r)
///
/// with a doubling penalty tau_k and a decaying step alpha_k.
struct DrsmConfig {
    Index rank = 1;
    int steps = 500;
    double tau0 = 1.0;
    int tau_double_until = 1000;     ///< tau_k = tau0 * 2^min(k, tau_double_until)
    double alpha0_numerator = 150.0;  ///< alpha_0 = alpha0_numerator / (1 + tau0)
    double alpha_decay = 0.7;
    double alpha_floor_numerator = 0.99;  ///< alpha_k >= alpha_floor_numerator / (1 + tau_k)

    void validate() const;
};

/// Penalty and step schedule. After advance() has been called k times,
/// tau() and alpha() hold tau_k and alpha_k.
class DrsmSchedule {
public:
    explicit DrsmSchedule(const DrsmConfig& cfg);

    void advance();

    int k() const { return k_; }
    double tau() const { return tau_; }
    double alpha() const { return alpha_; }

private:
    DrsmConfig cfg_;
    int k_ = 0;
    double tau_;
    double alpha_;
};

struct DrsmState {
    QuatMatrix x;
    QuatMatrix y;
    QuatMatrix z;
    int k = 0;
    double tau = 0.0;
    double alpha = 0.0;
    bool input_pure = true;  ///< false if A had a real part (allowed, but outside the intended use)
    PhaseTrace trace;        ///< ||Re Y^k||, ||Y^k - A||, seconds per step
};

/// Proximal map of alpha*f, f(X) = 1/2 ||X - A||^2 + tau/2 ||Re X||^2:
/// real part (alpha A0 + Y0) / (1 + alpha + alpha tau), imaginary parts
/// (alpha A_c + Y_c) / (1 + alpha).
QuatMatrix prox_f(const QuatMatrix& y, const QuatMatrix& a, double alpha, double tau);

/// Proximal map of alpha*g: pi1(alpha/(1+alpha) A + 1/(1+alpha) W, r).
QuatMatrix prox_g(const QuatMatrix& w, const QuatMatrix& a, double alpha, Index r);

/// Runs cfg.steps iterations from X^0 = Y^0 = Z^0 = A.
DrsmState drsm_run(const QuatMatrix& a, const DrsmConfig& cfg);

/// drsm_run, then alt_proj from the final Y^k. The returned report carries the
/// DRSM phase trace and its length; elapsed covers both phases.
AltProjReport hybrid_solve(const QuatMatrix& a, const DrsmConfig& drsm_cfg, const AltProjConfig& ap_cfg);

}  // namespace qlr
