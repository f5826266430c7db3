#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "qlr/altproj.hpp"
#include "qlr/experiment.hpp"
#include "qlr/projections.hpp"
#include "qlr/random.hpp"

using qlr::AltProjConfig;
using qlr::QuatMatrix;

namespace {

AltProjConfig config(qlr::Index rank, int max_iters = 5000) {
    AltProjConfig c;
    c.rank = rank;
    c.max_iters = max_iters;
    return c;
}

}  // namespace

TEST_CASE("exact recovery in one iteration") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const QuatMatrix a = qlr::gen_random_pure_lowrank(20, 16, 2, seed);
        const qlr::Index r = qlr::numerical_rank(a);
        CHECK(r <= 8);
        const auto rep = qlr::alt_proj(a, config(r));
        CHECK(rep.converged);
        CHECK(rep.iterations == 1);
        REQUIRE(rep.trace.size() == 1);
        CHECK(rep.trace.residual[0] < 1e-10);
        CHECK(rep.objective <= 1e-10);
        CHECK(rep.solution.is_pure());
    }
}

TEST_CASE("synthetic 5x5 at rank 4") {
    const QuatMatrix a = qlr::synthetic_5x5();
    const auto rep = qlr::alt_proj(a, config(4));
    CHECK(rep.converged);
    CHECK(rep.objective > 0.60);
    CHECK(rep.objective < 0.75);
    CHECK(rep.solution.is_pure());
    CHECK(qlr::solution_rank(rep) <= 4);
}

TEST_CASE("full rank is one cycle") {
    oracle::Gaussian g(41);
    const QuatMatrix a = g.pure(6, 4);
    const auto rep = qlr::alt_proj(a, config(4));
    CHECK(rep.converged);
    CHECK(rep.iterations == 1);
    CHECK(rep.objective <= 1e-12);
}

TEST_CASE("solutions are pure, low rank and above the unconstrained bound") {
    oracle::Gaussian g(42);
    for (int t = 0; t < 5; ++t) {
        const QuatMatrix a = g.pure(12, 10);
        const Eigen::VectorXd s = oracle::quat_singular_values(a);
        for (qlr::Index r : {2, 4, 6}) {
            const auto rep = qlr::alt_proj(a, config(r, 3000));
            CHECK(rep.solution.is_pure());
            CHECK(qlr::real_part(rep.solution).isZero(0.0));
            CHECK(rep.trace.size() == static_cast<std::size_t>(rep.iterations));
            CHECK(qlr::solution_rank(rep) <= r);
            CHECK(rep.objective >= std::sqrt(oracle::tail_sq(s, r)) - 1e-8);
            CHECK(rep.objective == doctest::Approx(qlr::frobenius_norm(rep.solution - a)));
            if (rep.converged) {
                CHECK(rep.final_residual < 1e-6);
                REQUIRE(rep.tail_ratio.has_value());
                CHECK(*rep.tail_ratio < 1.0);
            }
        }
    }
}

TEST_CASE("iteration budget and non-convergence") {
    oracle::Gaussian g(43);
    const QuatMatrix a = g.pure(10, 10);
    auto cfg = config(3, 2);
    cfg.residual_tol = 0.0;
    const auto rep = qlr::alt_proj(a, cfg);
    CHECK_FALSE(rep.converged);
    CHECK(rep.iterations == 2);
    CHECK(rep.solution.is_pure());
    CHECK(rep.solution_residual == doctest::Approx(std::min(rep.trace.residual[0], rep.trace.residual[1])));

    cfg.trace = false;
    CHECK(qlr::alt_proj(a, cfg).trace.size() == 0);
}

TEST_CASE("configuration errors") {
    oracle::Gaussian g(44);
    const QuatMatrix a = g.pure(5, 4);
    CHECK_THROWS_AS(qlr::alt_proj(a, config(0)), qlr::ValidationError);
    CHECK_THROWS_AS(qlr::alt_proj(a, config(5)), qlr::ValidationError);
    CHECK_THROWS_AS(qlr::alt_proj(a, config(2, 0)), qlr::ValidationError);
    auto cfg = config(2);
    cfg.residual_tol = -1.0;
    CHECK_THROWS_AS(qlr::alt_proj(a, cfg), qlr::ValidationError);
    CHECK_THROWS_AS(qlr::alt_proj(a, g.pure(4, 4), config(2)), qlr::DimensionError);
}

TEST_CASE("tail_ratio") {
    CHECK_FALSE(qlr::tail_ratio({}).has_value());
    CHECK_FALSE(qlr::tail_ratio({1.0}).has_value());
    CHECK(*qlr::tail_ratio({1.0, 0.5, 0.25}) == doctest::Approx(0.5));
    std::vector<double> r;
    for (int k = 0; k < 30; ++k) {
        r.push_back(k < 19 ? 1.0 : std::pow(0.1, k - 19));
    }
    CHECK(*qlr::tail_ratio(r) == doctest::Approx(0.1));
    CHECK_FALSE(qlr::tail_ratio({1.0, 0.0}).has_value());
}

TEST_CASE("trace CSV and JSON report") {
    const auto rep = qlr::alt_proj(qlr::synthetic_5x5(), config(4));
    const std::string csv = qlr::trace_csv(rep);
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "phase,step,residual,objective,seconds");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.rfind("altproj,", 0) == 0);
        ++rows;
    }
    CHECK(rows == rep.iterations);

    const auto doc = qlr::report_json(rep, false);
    CHECK(doc.at("iterations") == rep.iterations);
    CHECK_FALSE(doc.contains("elapsed_seconds"));
    CHECK(qlr::report_json(rep).contains("elapsed_seconds"));
}
