#pragma once

// Latency harness for the three attention kernels.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geoattn/attention.hpp"
#include "geoattn/linalg.hpp"
#include "geoattn/random.hpp"

namespace geoattn::bench {

inline constexpr std::size_t kMaxScoreEntries = std::size_t{1} << 24;
inline constexpr int kWarmups = 3;

struct BenchConfig {
    std::size_t n = 256;
    std::size_t m = 256;
    std::size_t d = 256;
    std::size_t repeats = 10;
    std::uint64_t seed = 0;
    AttentionConfig attention{};
};

struct BenchRecord {
    std::string kernel;
    std::size_t n = 0, m = 0, d = 0, heads = 0;
    std::string space;
    double mean_ns = 0.0, p50_ns = 0.0, p95_ns = 0.0;
    std::size_t repeats = 0;
};

class BudgetError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Nearest-rank percentile of an ascending sample.
inline double percentile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("percentile of empty sample");
    const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(sorted.size())));
    return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

inline BenchRecord summarize(std::string kernel, std::string space, const BenchConfig& cfg,
                             std::vector<double> samples_ns) {
    std::sort(samples_ns.begin(), samples_ns.end());
    double sum = 0.0;
    for (double s : samples_ns) sum += s;
    BenchRecord r;
    r.kernel = std::move(kernel);
    r.space = std::move(space);
    r.n = cfg.n;
    r.m = cfg.m;
    r.d = cfg.d;
    r.heads = cfg.attention.heads;
    r.repeats = samples_ns.size();
    r.mean_ns = sum / static_cast<double>(samples_ns.size());
    r.p50_ns = percentile(samples_ns, 50.0);
    r.p95_ns = percentile(samples_ns, 95.0);
    if (samples_ns.size() == 1) r.p50_ns = r.p95_ns = r.mean_ns;
    return r;
}

inline std::vector<double> time_ns(const std::function<void()>& fn, std::size_t repeats) {
    for (int i = 0; i < kWarmups; ++i) fn();
    std::vector<double> out;
    out.reserve(repeats);
    for (std::size_t i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        out.push_back(static_cast<double>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count()));
    }
    return out;
}

/// Times euclidean, oblique and lorentz attention on one seeded input set.
inline std::vector<BenchRecord> run(const BenchConfig& cfg) {
    if (cfg.n == 0 || cfg.m == 0 || cfg.d == 0) throw std::invalid_argument("sizes must be >= 1");
    if (cfg.repeats == 0) throw std::invalid_argument("repeats must be >= 1");
    if (cfg.n > kMaxScoreEntries / cfg.m) {
        throw BudgetError("n*m = " + std::to_string(cfg.n) + "*" + std::to_string(cfg.m) +
                          " exceeds the 2^24 score-matrix budget");
    }
    cfg.attention.validate();
    cfg.attention.head_dim(cfg.d, "feature");

    Rng rng(cfg.seed);
    const Matrix q = rng.gaussian(cfg.n, cfg.d);
    const Matrix k = rng.gaussian(cfg.m, cfg.d);
    const Matrix v = rng.gaussian(cfg.m, cfg.d);
    const AttentionConfig& a = cfg.attention;
    double sink = 0.0;

    std::vector<BenchRecord> out;
    out.push_back(summarize("euclidean", "euclidean", cfg, time_ns([&] {
        sink += euclidean_attention(q, k, v, a)(0, 0);
    }, cfg.repeats)));
    out.push_back(summarize("oblique", "oblique", cfg, time_ns([&] {
        sink += oblique_attention(q, k, v, a)(0, 0);
    }, cfg.repeats)));
    out.push_back(summarize("lorentz", "lorentz", cfg, time_ns([&] {
        sink += lorentz_cross_attention(q, k, v, a)(0, 0);
    }, cfg.repeats)));
    if (!std::isfinite(sink)) throw NonFiniteError("benchmark produced non-finite output");
    return out;
}

inline constexpr const char* kCsvHeader = "kernel,n,m,d,heads,space,mean_ns,p50_ns,p95_ns,repeats";

inline void write_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
    os << kCsvHeader << '\n';
    for (const auto& r : records) {
        os << r.kernel << ',' << r.n << ',' << r.m << ',' << r.d << ',' << r.heads << ','
           << r.space << ',' << format_double(r.mean_ns) << ',' << format_double(r.p50_ns) << ','
           << format_double(r.p95_ns) << ',' << r.repeats << '\n';
    }
}

}  // namespace geoattn::bench
