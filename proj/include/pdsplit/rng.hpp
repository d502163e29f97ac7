#pragma once

#include <cstdint>
#include <random>

#include "pdsplit/linalg.hpp"

namespace pdsplit {

// Deterministic 64-bit generator. Distribution code is written out so the
// same seed produces the same stream on every platform/libstdc++ version.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        // 53-bit mantissa from the top bits of the raw draw
        uint64_t r = gen_();
        double u = static_cast<double>(r >> 11) * (1.0 / 9007199254740992.0);
        return lo + (hi - lo) * u;
    }

    double normal() {
        // Box-Muller; one value per call keeps the stream simple
        double u1 = uniform(0.0, 1.0);
        double u2 = uniform(0.0, 1.0);
        if (u1 < 1e-300) u1 = 1e-300;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    Vec uniform_vec(int n, double lo, double hi) {
        Vec v(n);
        for (double& x : v) x = uniform(lo, hi);
        return v;
    }

    Vec normal_vec(int n) {
        Vec v(n);
        for (double& x : v) x = normal();
        return v;
    }

    Mat normal_mat(int r, int c) {
        Mat m(r, c);
        for (double& x : m.a) x = normal();
        return m;
    }

    uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace pdsplit
