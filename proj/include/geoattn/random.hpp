#pragma once

// Seeded generators for property sweeps, benchmarks and experiments.

#include <cmath>
#include <cstdint>
#include <random>

#include "geoattn/linalg.hpp"

namespace geoattn {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
    }
    /// exp of a uniform draw in [log lo, log hi].
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }

    Vector gaussian(std::size_t n) {
        Vector v(n);
        for (double& x : v) x = normal();
        return v;
    }

    Vector unit(std::size_t n) {
        Vector v = gaussian(n);
        const double s = norm(v);
        for (double& x : v) x /= s;
        return v;
    }

    /// Uniform direction with norm uniform in [0, max_norm].
    Vector in_ball(std::size_t n, double max_norm) {
        Vector v = unit(n);
        const double r = uniform(0.0, max_norm);
        for (double& x : v) x *= r;
        return v;
    }

    Matrix gaussian(std::size_t rows, std::size_t cols) {
        Matrix m(rows, cols);
        for (double& x : m.data()) x = normal();
        return m;
    }

    Matrix unit_rows(std::size_t rows, std::size_t cols) {
        Matrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i) m.set_row(i, unit(cols));
        return m;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace geoattn
