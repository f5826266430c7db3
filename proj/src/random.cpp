#include "qlr/random.hpp"

#include <cmath>
#include <numbers>

#include "qlr/projections.hpp"

namespace qlr {

double NormalStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double NormalStream::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

namespace {

void fill(RealMatrix& m, NormalStream& rng) {
    for (Index r = 0; r < m.rows(); ++r) {
        for (Index c = 0; c < m.cols(); ++c) {
            m(r, c) = rng.normal();
        }
    }
}

void check_dims(Index m, Index n) {
    if (m < 1 || n < 1) {
        throw ValidationError("random matrix dimensions must be positive");
    }
}

}  // namespace

QuatMatrix gen_random_quaternion(Index m, Index n, std::uint64_t seed) {
    check_dims(m, n);
    NormalStream rng(seed);
    QuatMatrix out(m, n);
    for (int c = 0; c < 4; ++c) {
        fill(out.component(c), rng);
    }
    return out;
}

QuatMatrix gen_random_pure(Index m, Index n, std::uint64_t seed) {
    check_dims(m, n);
    NormalStream rng(seed);
    QuatMatrix out(m, n);
    for (int c = 1; c < 4; ++c) {
        fill(out.component(c), rng);
    }
    return out;
}

QuatMatrix gen_random_pure_lowrank(Index m, Index n, Index r, std::uint64_t seed) {
    return pi2(pi1(gen_random_quaternion(m, n, seed), r));
}

}  // namespace qlr
