#pragma once

#include <cstdint>
#include <random>

#include "qlr/quat_matrix.hpp"

namespace qlr {

/// Seeded standard-normal stream meant to be reproducible in any language:
/// std::mt19937_64 (output fully fixed by the C++ standard) -> 53-bit
/// uniform u = (x >> 11) * 2^-53 -> Box-Muller on (1 - u1, u2), returning the
/// cosine variate first and the sine variate on the next call.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_{seed} {}

    double uniform();
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Entries of A0..A3 drawn in that order, each row-major.
QuatMatrix gen_random_quaternion(Index m, Index n, std::uint64_t seed);

/// Entries of A1..A3 drawn in that order, each row-major; A0 = 0.
QuatMatrix gen_random_pure(Index m, Index n, std::uint64_t seed);

/// pure_part(pi1(G, r)) for G = gen_random_quaternion(m, n, seed). The
/// result has rank between r and 4r, typically 4r.
QuatMatrix gen_random_pure_lowrank(Index m, Index n, Index r, std::uint64_t seed);

}  // namespace qlr
