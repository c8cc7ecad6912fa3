#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "geoattn/bench.hpp"
#include "geoattn/experiments.hpp"
#include "geoattn/verify.hpp"

namespace geoattn::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

enum class Format { csv, json };

/// GEOATTN_SEED, when set to an unsigned integer, replaces the default seed.
inline std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("GEOATTN_SEED");
    if (!s || !*s) return std::nullopt;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (*end != '\0') throw std::invalid_argument(std::string("GEOATTN_SEED is not an integer: ") + s);
    return static_cast<std::uint64_t>(v);
}

// --- verify ------------------------------------------------------------------

inline int cmd_verify(const verify::Options& opts, const std::string& filter, std::ostream& out) {
    const auto results = verify::run(opts, filter);
    if (results.empty()) {
        out << "no property matches filter '" << filter << "'\n";
        return kUsage;
    }
    std::vector<std::string> failed;
    for (const auto& r : results) {
        out << (r.pass ? "PASS" : "FAIL") << "  [" << r.module << "] " << r.name
            << "  measured=" << format_double(r.measured) << " bound=" << format_double(r.bound);
        if (!r.detail.empty()) out << "  (" << r.detail << ")";
        out << '\n';
        if (!r.pass) failed.push_back("[" + r.module + "] " + r.name);
    }
    out << results.size() - failed.size() << "/" << results.size() << " properties passed\n";
    for (const auto& f : failed) out << "failed: " << f << '\n';
    return failed.empty() ? kOk : kFailure;
}

// --- bench -------------------------------------------------------------------

inline nlohmann::json to_json(const std::vector<bench::BenchRecord>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) {
        arr.push_back({{"kernel", r.kernel},   {"n", r.n},           {"m", r.m},
                       {"d", r.d},             {"heads", r.heads},   {"space", r.space},
                       {"mean_ns", r.mean_ns}, {"p50_ns", r.p50_ns}, {"p95_ns", r.p95_ns},
                       {"repeats", r.repeats}});
    }
    return arr;
}

inline void write_records(std::ostream& os, const std::vector<bench::BenchRecord>& records,
                          Format fmt) {
    if (fmt == Format::csv)
        bench::write_csv(os, records);
    else
        os << to_json(records).dump(2) << '\n';
}

inline int cmd_bench(const bench::BenchConfig& cfg, Format fmt, std::ostream& out) {
    write_records(out, bench::run(cfg), fmt);
    return kOk;
}

// --- tree-embed ----------------------------------------------------------------

struct TreeEmbedConfig {
    experiments::TreeSpec tree{};
    std::size_t dim = 2;
    std::size_t steps = 5000;
    double step_size = 1e-3;
    std::vector<double> curvatures{1.0};
    std::vector<std::uint64_t> seeds{0, 333, 777};
};

struct ArmReport {
    std::string space;
    double curvature = 0.0;
    std::vector<experiments::EmbeddingRun> runs;
    double mean_distortion() const {
        double s = 0.0;
        for (const auto& r : runs) s += r.final_distortion;
        return s / static_cast<double>(runs.size());
    }
};

/// One Euclidean arm plus one Lorentz arm per curvature. Arms run
/// concurrently; seeds within an arm run in order.
inline std::vector<ArmReport> run_tree_embed(const TreeEmbedConfig& cfg) {
    if (cfg.seeds.empty()) throw std::invalid_argument("at least one seed is required");
    if (cfg.curvatures.empty()) throw std::invalid_argument("at least one curvature is required");
    for (double c : cfg.curvatures) lorentz::Curvature{c};

    struct ArmSpec {
        experiments::EmbeddingSpace space;
        double c;
    };
    std::vector<ArmSpec> specs{{experiments::EmbeddingSpace::euclidean, 0.0}};
    for (double c : cfg.curvatures) specs.push_back({experiments::EmbeddingSpace::lorentz, c});

    std::vector<std::future<ArmReport>> jobs;
    for (const ArmSpec& s : specs) {
        jobs.push_back(std::async(std::launch::async, [&cfg, s] {
            ArmReport arm{experiments::to_string(s.space), s.c, {}};
            for (std::uint64_t seed : cfg.seeds) {
                experiments::EmbeddingParams p;
                p.space = s.space;
                if (s.space == experiments::EmbeddingSpace::lorentz) p.curvature = s.c;
                p.dim = cfg.dim;
                p.steps = cfg.steps;
                p.step_size = cfg.step_size;
                p.seed = seed;
                arm.runs.push_back(experiments::embed_tree(cfg.tree, p));
            }
            return arm;
        }));
    }
    std::vector<ArmReport> arms;
    for (auto& j : jobs) arms.push_back(j.get());
    return arms;
}

inline std::string arm_label(const ArmReport& a) {
    return a.space == "lorentz" ? "lorentz(c=" + format_double(a.curvature) + ")" : a.space;
}

inline void write_tree_report(std::ostream& os, const std::vector<ArmReport>& arms, Format fmt) {
    if (fmt == Format::json) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& a : arms) {
            nlohmann::json runs = nlohmann::json::array();
            for (const auto& r : a.runs) {
                runs.push_back({{"seed", r.params.seed},
                                {"final_distortion", r.final_distortion},
                                {"worst_distortion", r.worst_distortion},
                                {"final_stress", r.final_stress},
                                {"accepted_steps", r.accepted_steps}});
            }
            arr.push_back({{"space", a.space},
                           {"curvature", a.space == "lorentz" ? nlohmann::json(a.curvature)
                                                              : nlohmann::json(nullptr)},
                           {"mean_distortion", a.mean_distortion()},
                           {"runs", runs}});
        }
        os << arr.dump(2) << '\n';
        return;
    }
    os << "space,curvature,seed,final_distortion,worst_distortion,final_stress,accepted_steps\n";
    for (const auto& a : arms) {
        const std::string c = a.space == "lorentz" ? format_double(a.curvature) : "";
        for (const auto& r : a.runs) {
            os << a.space << ',' << c << ',' << r.params.seed << ','
               << format_double(r.final_distortion) << ',' << format_double(r.worst_distortion)
               << ',' << format_double(r.final_stress) << ',' << r.accepted_steps << '\n';
        }
        os << a.space << ',' << c << ",mean," << format_double(a.mean_distortion()) << ",,,\n";
    }
}

/// Human summary: per-seed comparison of every hyperbolic arm against Euclidean.
inline void write_tree_summary(std::ostream& os, const std::vector<ArmReport>& arms) {
    const ArmReport& base = arms.front();
    for (std::size_t a = 1; a < arms.size(); ++a) {
        std::size_t wins = 0;
        for (std::size_t s = 0; s < base.runs.size(); ++s)
            if (arms[a].runs[s].final_distortion < base.runs[s].final_distortion) ++wins;
        os << arm_label(arms[a]) << " beats euclidean on " << wins << "/" << base.runs.size()
           << " seeds (mean distortion " << format_double(arms[a].mean_distortion()) << " vs "
           << format_double(base.mean_distortion()) << ")\n";
    }
}

inline int cmd_tree_embed(const TreeEmbedConfig& cfg, Format fmt, std::ostream& report,
                          std::ostream& summary) {
    const auto arms = run_tree_embed(cfg);
    write_tree_report(report, arms, fmt);
    write_tree_summary(summary, arms);
    return kOk;
}

// --- descent -----------------------------------------------------------------

inline int cmd_descent(const experiments::DescentParams& params,
                       const std::filesystem::path& output_dir, const std::string& prefix,
                       std::ostream& out) {
    const auto run = experiments::descent_demo(params);
    const auto files = experiments::export_trajectories(run, output_dir, prefix);
    const double ratio = static_cast<double>(run.unconstrained.iterations) /
                         static_cast<double>(std::max<std::size_t>(run.oblique.iterations, 1));
    out << "start=(" << format_double(run.start_x) << ", " << format_double(run.start_y) << ")\n"
        << "unconstrained: iterations=" << run.unconstrained.iterations
        << " converged=" << std::boolalpha << run.unconstrained.converged << " -> "
        << files.unconstrained.string() << '\n'
        << "oblique: iterations=" << run.oblique.iterations << " converged=" << run.oblique.converged
        << " -> " << files.oblique.string() << '\n'
        << "ratio unconstrained/oblique=" << format_double(ratio) << '\n';
    return run.unconstrained.converged && run.oblique.converged ? kOk : kFailure;
}

}  // namespace geoattn::cli
