#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qlr/drsm.hpp"
#include "qlr/projections.hpp"
#include "qlr/random.hpp"

using qlr::DrsmConfig;
using qlr::QuatMatrix;

namespace {

// f(Z) + 1/(2 alpha) ||Z - Y||^2 with f(Z) = 1/2 ||Z - A||^2 + tau/2 ||Re Z||^2.
double prox_objective(const QuatMatrix& z, const QuatMatrix& y, const QuatMatrix& a, double alpha, double tau) {
    return 0.5 * qlr::frobenius_norm_sq(z - a) + 0.5 * tau * qlr::real_part(z).squaredNorm() +
           qlr::frobenius_norm_sq(z - y) / (2.0 * alpha);
}

DrsmConfig drsm(qlr::Index rank, int steps) {
    DrsmConfig c;
    c.rank = rank;
    c.steps = steps;
    return c;
}

}  // namespace

TEST_CASE("prox_f limits") {
    oracle::Gaussian g(51);
    const QuatMatrix y = g.quat(4, 3), a = g.pure(4, 3);
    CHECK(oracle::max_abs_diff(qlr::prox_f(y, a, 1e-12, 3.0), y) <= 1e-9);

    QuatMatrix real_only(4, 3);
    real_only.component(0) = y.a0();
    const QuatMatrix out = qlr::prox_f(real_only, a, 1.0, 1e12);
    CHECK(qlr::real_part(out).cwiseAbs().maxCoeff() <= 1e-10);

    // With A pure the real part is Y0 / (1 + alpha + alpha tau).
    const QuatMatrix p = qlr::prox_f(y, a, 0.5, 2.0);
    CHECK((p.a0() - y.a0() / 2.5).cwiseAbs().maxCoeff() <= 1e-15);
    double prev = INFINITY;
    for (double tau : {0.0, 1.0, 10.0, 100.0}) {
        const double re = qlr::real_part(qlr::prox_f(y, a, 0.5, tau)).norm();
        CHECK(re < prev);
        prev = re;
    }
}

TEST_CASE("prox_f is a local minimizer against 1000 perturbations") {
    oracle::Gaussian g(52);
    const QuatMatrix y = g.quat(3, 3), a = g.pure(3, 3);
    const double alpha = 0.5, tau = 2.0;
    const QuatMatrix z = qlr::prox_f(y, a, alpha, tau);
    const double best = prox_objective(z, y, a, alpha, tau);
    for (int t = 0; t < 1000; ++t) {
        QuatMatrix probe = z;
        probe += (t % 2 ? 1e-3 : 1e-1) * g.quat(3, 3);
        CHECK(prox_objective(probe, y, a, alpha, tau) >= best);
    }
}

TEST_CASE("prox_f contraction") {
    oracle::Gaussian g(53);
    const QuatMatrix a = g.pure(5, 4);
    const double alpha = 0.8, tau = 3.0;
    for (int t = 0; t < 20; ++t) {
        const QuatMatrix y1 = g.quat(5, 4), y2 = g.quat(5, 4);
        const QuatMatrix p1 = qlr::prox_f(y1, a, alpha, tau), p2 = qlr::prox_f(y2, a, alpha, tau);
        for (int c = 1; c < 4; ++c) {
            CHECK((p1.component(c) - p2.component(c)).norm() <=
                  (y1.component(c) - y2.component(c)).norm() / (1 + alpha) * (1 + 1e-12));
        }
        CHECK((p1.a0() - p2.a0()).norm() <= (y1.a0() - y2.a0()).norm() / (1 + alpha + alpha * tau) * (1 + 1e-12));
    }
}

TEST_CASE("prox_f and prox_g argument checks") {
    oracle::Gaussian g(54);
    const QuatMatrix y = g.quat(3, 3), a = g.pure(3, 3);
    CHECK_THROWS_AS(qlr::prox_f(y, a, 0.0, 1.0), qlr::ValidationError);
    CHECK_THROWS_AS(qlr::prox_f(y, a, 1.0, -1.0), qlr::ValidationError);
    CHECK_THROWS_AS(qlr::prox_f(y, g.pure(3, 2), 1.0, 1.0), qlr::DimensionError);
    CHECK_THROWS_AS(qlr::prox_g(y, a, -1.0, 1), qlr::ValidationError);
}

TEST_CASE("prox_g identities") {
    oracle::Gaussian g(55);
    const QuatMatrix a = g.pure(6, 5), w = g.quat(6, 5);
    for (double alpha : {0.1, 1.0, 7.0}) {
        CHECK(qlr::frobenius_norm(qlr::prox_g(a, a, alpha, 2) - qlr::pi1(a, 2)) <= 1e-10);
        CHECK(qlr::frobenius_norm(qlr::prox_g(a, a, alpha, 5) - a) <= 1e-10);
    }
    CHECK(qlr::frobenius_norm(qlr::prox_g(w, a, 1e-12, 3) - qlr::pi1(w, 3)) <= 1e-9);
}

TEST_CASE("schedule law") {
    DrsmConfig cfg = drsm(1, 0);
    qlr::DrsmSchedule s(cfg);
    CHECK(s.tau() == 1.0);
    CHECK(s.alpha() == 75.0);
    bool floor_reached = false;
    int crossover = -1;
    for (int k = 1; k <= 2500; ++k) {
        const double prev_alpha = s.alpha();
        s.advance();
        REQUIRE(s.k() == k);
        CHECK(s.tau() == std::ldexp(1.0, std::min(k, 1000)));
        const double floor = 0.99 / (1.0 + s.tau());
        CHECK(s.alpha() >= floor);
        CHECK(s.alpha() == std::max(0.7 * prev_alpha, floor));
        if (!floor_reached && s.alpha() == floor) {
            floor_reached = true;
            crossover = k;
        }
        if (floor_reached) {
            CHECK(s.alpha() * (1.0 + s.tau()) == doctest::Approx(0.99).epsilon(1e-15));
            CHECK(s.alpha() * (1.0 + s.tau()) < 1.0);
        }
    }
    CHECK(floor_reached);
    // 0.7^k decays more slowly than 2^-k, so the floor only binds once tau is frozen.
    CHECK(crossover > 1000);
    MESSAGE("decay/floor crossover at k = " << crossover);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(drsm(0, 10).validate(), qlr::ValidationError);
    CHECK_THROWS_AS(drsm(1, -1).validate(), qlr::ValidationError);
    auto c = drsm(1, 1);
    c.alpha_decay = 1.0;
    CHECK_THROWS_AS(c.validate(), qlr::ValidationError);
    c = drsm(1, 1);
    c.alpha_floor_numerator = 1.0;
    CHECK_THROWS_AS(c.validate(), qlr::ValidationError);
    c = drsm(1, 1);
    c.tau_double_until = 1100;
    CHECK_THROWS_AS(c.validate(), qlr::ValidationError);
}

TEST_CASE("drsm_run") {
    oracle::Gaussian g(56);
    SUBCASE("zero steps") {
        const QuatMatrix a = g.pure(5, 5);
        const auto st = qlr::drsm_run(a, drsm(2, 0));
        CHECK(st.k == 0);
        CHECK(st.x == a);
        CHECK(st.y == a);
        CHECK(st.z == a);
        CHECK(st.input_pure);
    }
    SUBCASE("rank-r pure input is a fixed point") {
        const QuatMatrix a = qlr::gen_random_pure_lowrank(12, 10, 1, 7);
        const qlr::Index r = qlr::numerical_rank(a);
        const auto st = qlr::drsm_run(a, drsm(r, 40));
        CHECK(st.k == 40);
        CHECK(st.trace.size() == 40);
        for (double obj : st.trace.objective) {
            CHECK(obj <= 1e-8);
        }
        CHECK(qlr::frobenius_norm(st.y - a) <= 1e-8);
    }
    SUBCASE("non-pure input is flagged") {
        CHECK_FALSE(qlr::drsm_run(g.quat(4, 4), drsm(1, 1)).input_pure);
    }
}

TEST_CASE("hybrid_solve") {
    oracle::Gaussian g(57);
    const QuatMatrix a = g.pure(8, 8);
    qlr::AltProjConfig ap;
    ap.rank = 3;
    ap.max_iters = 200;

    const auto plain = qlr::alt_proj(a, ap);
    const auto hybrid0 = qlr::hybrid_solve(a, drsm(3, 0), ap);
    CHECK(hybrid0.iterations == plain.iterations);
    CHECK(hybrid0.solution == plain.solution);
    CHECK(hybrid0.trace.residual == plain.trace.residual);
    CHECK(hybrid0.drsm_steps == 0);

    const auto hybrid = qlr::hybrid_solve(a, drsm(3, 30), ap);
    CHECK(hybrid.drsm_steps == 30);
    CHECK(hybrid.drsm_trace.size() == 30);
    CHECK(hybrid.solution.is_pure());
    const std::string csv = qlr::trace_csv(hybrid);
    CHECK(csv.find("drsm,30,") != std::string::npos);
    CHECK(csv.find("altproj,1,") > csv.find("drsm,30,"));

    const QuatMatrix exact = qlr::gen_random_pure_lowrank(12, 12, 1, 3);
    ap.rank = qlr::numerical_rank(exact);
    const auto rec = qlr::hybrid_solve(exact, drsm(ap.rank, 20), ap);
    CHECK(rec.converged);
    CHECK(rec.objective <= 1e-10);

    CHECK_THROWS_AS(qlr::hybrid_solve(a, drsm(2, 5), ap), qlr::ValidationError);
}
