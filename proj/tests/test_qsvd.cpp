#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qlr/projections.hpp"
#include "qlr/qsvd.hpp"

using qlr::Index;
using qlr::QuatMatrix;
using qlr::RealMatrix;

namespace {

QuatMatrix example_2x2() {
    RealMatrix a1(2, 2), a2(2, 2), a3(2, 2);
    a1 << 1, 0, 0, 0;
    a2 << 0, 1, 0, 1;
    a3 << 0, 0, 1, 0;
    return QuatMatrix::pure(a1, a2, a3);
}

QuatMatrix reconstruct(const qlr::QsvdFactors& f) {
    QuatMatrix us = f.U;
    for (int c = 0; c < 4; ++c) {
        us.component(c) = us.component(c) * f.sigma.asDiagonal();
    }
    return us * qlr::conj_transpose(f.V);
}

double unitarity_error(const QuatMatrix& u) {
    return qlr::frobenius_norm(qlr::conj_transpose(u) * u - QuatMatrix::identity(u.cols()));
}

void check_factors(const QuatMatrix& a, const qlr::QsvdFactors& f) {
    const Index k = std::min(a.rows(), a.cols());
    REQUIRE(f.sigma.size() == k);
    REQUIRE(f.U.rows() == a.rows());
    REQUIRE(f.U.cols() == k);
    REQUIRE(f.V.rows() == a.cols());
    REQUIRE(f.V.cols() == k);
    for (Index i = 0; i < k; ++i) {
        CHECK(f.sigma(i) >= 0.0);
        if (i > 0) {
            CHECK(f.sigma(i) <= f.sigma(i - 1));
        }
    }
    CHECK(unitarity_error(f.U) <= 1e-8);
    CHECK(unitarity_error(f.V) <= 1e-8);
    CHECK(qlr::frobenius_norm(a - reconstruct(f)) <= 1e-8 * std::max(1.0, qlr::frobenius_norm(a)));
}

}  // namespace

TEST_CASE("diagonal input") {
    RealMatrix d = RealMatrix::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = 1;
    const QuatMatrix a(d, RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2), RealMatrix::Zero(2, 2));
    const auto f = qlr::qsvd(a);
    CHECK(f.sigma(0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(f.sigma(1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(oracle::max_abs_diff(f.U, QuatMatrix::identity(2)) <= 1e-15);
    CHECK(oracle::max_abs_diff(f.V, QuatMatrix::identity(2)) <= 1e-15);
}

TEST_CASE("2x2 example: singular values and the displayed truncation") {
    const QuatMatrix a = example_2x2();
    const auto f = qlr::qsvd(a);
    check_factors(a, f);
    // A*A = [2, i - k; k - i, 2] has eigenvalues 2 +- sqrt(2).
    CHECK(f.sigma(0) == doctest::Approx(std::sqrt(2.0 + std::sqrt(2.0))).epsilon(1e-12));
    CHECK(f.sigma(1) == doctest::Approx(std::sqrt(2.0 - std::sqrt(2.0))).epsilon(1e-12));
    CHECK(f.sigma(0) == doctest::Approx(1.847759065022573).epsilon(1e-12));
    CHECK(f.sigma(1) == doctest::Approx(0.765366864730180).epsilon(1e-12));

    const Eigen::VectorXd s = oracle::real_singular_values(qlr::to_real_rep(a).data);
    for (int t = 0; t < 4; ++t) {
        CHECK(s(t) == doctest::Approx(f.sigma(0)).epsilon(1e-12));
        CHECK(s(4 + t) == doctest::Approx(f.sigma(1)).epsilon(1e-12));
    }

    const QuatMatrix t = qlr::truncate(f, 1);
    const double h = 0.5 * std::sqrt(0.5);  // 0.3536
    const double big = 0.5 + h;              // 0.8536
    CHECK(t.a0()(0, 0) == doctest::Approx(0.0));
    CHECK(t.a0()(0, 1) == doctest::Approx(-h).epsilon(1e-12));
    CHECK(t.a0()(1, 1) == doctest::Approx(h).epsilon(1e-12));
    CHECK(t.a1()(0, 0) == doctest::Approx(big).epsilon(1e-12));
    CHECK(t.a1()(1, 0) == doctest::Approx(h).epsilon(1e-12));
    CHECK(t.a3()(0, 0) == doctest::Approx(h).epsilon(1e-12));
    CHECK(t.a3()(1, 0) == doctest::Approx(big).epsilon(1e-12));
    // j-part entries have modulus 0.85; the sign follows from optimality.
    CHECK(t.a2()(0, 1) == doctest::Approx(big).epsilon(1e-12));
    CHECK(t.a2()(1, 1) == doctest::Approx(big).epsilon(1e-12));

    CHECK(qlr::numerical_rank(t) == 1);
    CHECK(qlr::numerical_rank(qlr::pure_part(t)) == 2);
}

TEST_CASE("rank counting on constructed input") {
    oracle::Gaussian g(21);
    for (int t = 0; t < 5; ++t) {
        QuatMatrix d(5, 5);
        d.component(0)(0, 0) = 1.0;
        d.component(0)(1, 1) = 1.0;
        const QuatMatrix a = oracle::random_unitary(g, 5) * d * qlr::conj_transpose(oracle::random_unitary(g, 5));
        const auto s = qlr::singular_values(a);
        CHECK((s.array() > 1e-10).count() == 2);
        CHECK(qlr::numerical_rank(a) == 2);
    }
}

TEST_CASE("factor invariants and oracle agreement on sizes up to 30x20") {
    oracle::Gaussian g(22);
    const std::pair<Index, Index> shapes[] = {{1, 1}, {1, 5}, {5, 1}, {3, 3}, {7, 4}, {4, 7}, {12, 12}, {30, 20}, {20, 30}};
    for (auto [m, n] : shapes) {
        CAPTURE(m);
        CAPTURE(n);
        const QuatMatrix a = g.quat(m, n);
        const auto f = qlr::qsvd(a);
        check_factors(a, f);
        const Eigen::VectorXd ref = oracle::real_singular_values(qlr::to_real_rep(a).data);
        for (Index i = 0; i < f.sigma.size(); ++i) {
            for (int t = 0; t < 4; ++t) {
                CHECK(std::abs(ref(4 * i + t) - f.sigma(i)) <= 1e-8 * ref(0));
            }
        }
        for (Index r = 1; r <= f.sigma.size(); ++r) {
            const double err = qlr::frobenius_norm_sq(a - qlr::truncate(f, r));
            const double tail = oracle::tail_sq(f.sigma, r);
            CHECK(std::abs(err - tail) <= 1e-8 * std::max(tail, 1e-8 * f.sigma.squaredNorm()));
        }
        CHECK(qlr::frobenius_norm(qlr::truncate(f, f.sigma.size()) - a) <= 1e-8 * qlr::frobenius_norm(a));
    }
}

TEST_CASE("rank-deficient inputs keep unitary factors") {
    oracle::Gaussian g(23);
    for (Index r : {1, 2, 4}) {
        const QuatMatrix a = g.low_rank(9, 6, r);
        const auto f = qlr::qsvd(a);
        check_factors(a, f);
        CHECK(qlr::numerical_rank(f.sigma) == r);
        CHECK(qlr::frobenius_norm(qlr::truncate(f, r) - a) <= 1e-8 * qlr::frobenius_norm(a));
    }
    const auto z = qlr::qsvd(QuatMatrix(4, 3));
    check_factors(QuatMatrix(4, 3), z);
    CHECK(z.sigma.isZero());
    CHECK(qlr::numerical_rank(QuatMatrix(4, 3)) == 0);
}

TEST_CASE("numerical rank of random products") {
    oracle::Gaussian g(24);
    for (Index r = 1; r <= 5; ++r) {
        CHECK(qlr::numerical_rank(g.low_rank(10, 12, r)) == r);
    }
}

TEST_CASE("truncation is optimal against 100 random rank-r matrices") {
    oracle::Gaussian g(25);
    const QuatMatrix a = g.quat(6, 5);
    const auto f = qlr::qsvd(a);
    for (Index r : {1, 2, 3}) {
        const double best = qlr::frobenius_norm(a - qlr::truncate(f, r));
        for (int t = 0; t < 100; ++t) {
            QuatMatrix b = g.low_rank(6, 5, r);
            b *= qlr::frobenius_norm(a) / qlr::frobenius_norm(b);
            CHECK(best <= qlr::frobenius_norm(a - b));
        }
    }
}

TEST_CASE("unitary invariance") {
    oracle::Gaussian g(26);
    for (int t = 0; t < 5; ++t) {
        const QuatMatrix a = g.quat(6, 4);
        const QuatMatrix b = oracle::random_unitary(g, 6) * a * oracle::random_unitary(g, 4);
        const auto sa = qlr::singular_values(a);
        const auto sb = qlr::singular_values(b);
        CHECK((sa - sb).cwiseAbs().maxCoeff() <= 1e-8);
    }
}

TEST_CASE("phase convention and determinism") {
    oracle::Gaussian g(27);
    const QuatMatrix a = g.quat(8, 5);
    const auto f = qlr::qsvd(a);
    for (Index i = 0; i < f.U.cols(); ++i) {
        for (Index r = 0; r < f.U.rows(); ++r) {
            const qlr::Quaternion q = f.U(r, i);
            if (qlr::modulus(q) > 1e-8) {
                CHECK(q.r > 0.0);
                CHECK(q.i == 0.0);
                CHECK(q.j == 0.0);
                CHECK(q.k == 0.0);
                break;
            }
        }
    }
    const auto f2 = qlr::qsvd(a);
    CHECK(f2.U == f.U);
    CHECK(f2.V == f.V);
    CHECK(f2.sigma == f.sigma);
}

TEST_CASE("warm start meets the cold contract") {
    oracle::Gaussian g(28);
    const QuatMatrix a = g.quat(10, 7);
    const auto cold = qlr::qsvd(a);
    QuatMatrix nearby = a;
    nearby += 1e-3 * g.quat(10, 7);
    const auto warm = qlr::qsvd(nearby, cold);
    check_factors(nearby, warm);
    CHECK(warm.sweeps <= qlr::qsvd(nearby).sweeps);
    CHECK((warm.sigma - qlr::qsvd(nearby).sigma).cwiseAbs().maxCoeff() <= 1e-10);

    // A basis of the wrong shape falls back to a cold start.
    const auto other = qlr::qsvd(g.quat(3, 3));
    check_factors(nearby, qlr::qsvd(nearby, other));
}

TEST_CASE("sweep budget and range errors") {
    oracle::Gaussian g(29);
    const QuatMatrix a = g.quat(12, 12);
    CHECK_THROWS_AS(qlr::qsvd(a, qlr::QsvdOptions{1}), qlr::ConvergenceError);
    const auto f = qlr::qsvd(a);
    CHECK_THROWS_AS(qlr::truncate(f, 0), qlr::ValidationError);
    CHECK_THROWS_AS(qlr::truncate(f, 13), qlr::ValidationError);
}
