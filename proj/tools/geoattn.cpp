#include <cmath>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"

#include "commands.hpp"

namespace {

using geoattn::cli::Format;

const std::map<std::string, Format> kFormats{{"csv", Format::csv}, {"json", Format::json}};

// Writes to `path` if given, else stdout.
template <typename Fn>
int with_output(const std::string& path, Fn&& fn) {
    if (path.empty()) return fn(std::cout);
    std::ofstream os(path);
    if (!os) {
        std::cerr << "error: cannot open output file '" << path << "'\n";
        return geoattn::cli::kFailure;
    }
    const int rc = fn(os);
    if (!os) {
        std::cerr << "error: failed writing '" << path << "'\n";
        return geoattn::cli::kFailure;
    }
    return rc;
}

void add_attention_flags(CLI::App* cmd, geoattn::AttentionConfig& a, std::optional<double>& log_alpha) {
    cmd->add_option("--heads", a.heads, "attention heads")->check(CLI::PositiveNumber);
    cmd->add_option("--tau-obl", a.tau_obl, "oblique temperature")->check(CLI::PositiveNumber);
    cmd->add_option("--tau,--tau-lor", a.tau_lor, "lorentz temperature")->check(CLI::PositiveNumber);
    cmd->add_option("--eps-oblique", a.eps_oblique, "oblique cosine clip");
    cmd->add_option("--eps-lorentz", a.eps_lorentz, "lorentz arcosh clip");
    cmd->add_option("--log-alpha", log_alpha, "log of the lorentz tangent scale (default 1/sqrt(d))");
}

}  // namespace

int main(int argc, char** argv) {
    namespace cli = geoattn::cli;
    CLI::App app{"Geodesic attention kernels: verification, benchmarks and experiments"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::optional<double> log_alpha;
    std::string output;
    Format format = Format::csv;

    // verify
    auto* verify = app.add_subcommand("verify", "run every invariant and property check");
    geoattn::verify::Options vopts;
    std::string filter;
    verify->add_option("--filter", filter, "only properties whose module or name contains this");
    verify->add_option("--seed", seed, "sweep seed");
    verify->add_option("--curvature", vopts.attention.curvature, "curvature for fixed-c properties")
        ->check(CLI::Range(geoattn::lorentz::kMinCurvature, 1e6));
    add_attention_flags(verify, vopts.attention, log_alpha);

    // bench
    auto* bench = app.add_subcommand("bench", "time euclidean, oblique and lorentz attention");
    geoattn::bench::BenchConfig bcfg;
    bench->add_option("--n", bcfg.n, "query rows")->check(CLI::PositiveNumber);
    bench->add_option("--m", bcfg.m, "key rows")->check(CLI::PositiveNumber);
    bench->add_option("--d", bcfg.d, "feature dimension")->check(CLI::PositiveNumber);
    bench->add_option("--repeats", bcfg.repeats, "timed iterations per kernel")->check(CLI::PositiveNumber);
    bench->add_option("--curvature", bcfg.attention.curvature, "lorentz curvature")
        ->check(CLI::Range(geoattn::lorentz::kMinCurvature, 1e6));
    bench->add_option("--seed", seed, "input seed");
    bench->add_option("--format", format, "csv or json")->transform(CLI::CheckedTransformer(kFormats));
    bench->add_option("--output,-o", output, "output file (default stdout)");
    add_attention_flags(bench, bcfg.attention, log_alpha);

    // tree-embed
    auto* tree = app.add_subcommand("tree-embed", "embed a balanced tree, euclidean vs lorentz");
    cli::TreeEmbedConfig tcfg;
    std::vector<std::uint64_t> seeds;
    tree->add_option("--depth", tcfg.tree.depth, "tree depth");
    tree->add_option("--branching", tcfg.tree.branching, "children per node")->check(CLI::PositiveNumber);
    tree->add_option("--dim", tcfg.dim, "embedding dimension")->check(CLI::PositiveNumber);
    tree->add_option("--steps", tcfg.steps, "total gradient steps (split across curvature stages)")->check(CLI::PositiveNumber);
    tree->add_option("--step-size", tcfg.step_size, "initial step size")->check(CLI::PositiveNumber);
    tree->add_option("--curvature", tcfg.curvatures, "comma-separated lorentz curvatures")
        ->delimiter(',');
    tree->add_option("--seeds", seeds, "comma-separated seeds")->delimiter(',');
    tree->add_option("--format", format, "csv or json")->transform(CLI::CheckedTransformer(kFormats));
    tree->add_option("--output,-o", output, "report file (default stdout)");

    // descent
    auto* descent = app.add_subcommand("descent", "constrained vs unconstrained descent demo");
    geoattn::experiments::DescentParams dparams;
    std::string output_dir = ".";
    std::string prefix;
    descent->add_option("--condition-number", dparams.condition_number, "kappa of diag(1, kappa)")
        ->check(CLI::Range(1.0, 1e12));
    descent->add_option("--tol", dparams.tol, "stop once f <= tol")->check(CLI::PositiveNumber);
    descent->add_option("--max-iters", dparams.max_iters, "iteration cap")->check(CLI::PositiveNumber);
    descent->add_option("--step-scale", dparams.step_scale, "step as a fraction of 1/L")
        ->check(CLI::Range(1e-12, 1.0));
    descent->add_option("--seed", seed, "start-point seed");
    descent->add_option("--output-dir", output_dir, "directory for trajectory CSVs");
    descent->add_option("--prefix", prefix, "trajectory file name prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? cli::kOk : cli::kUsage;
    }

    try {
        const std::uint64_t base_seed = seed ? *seed : cli::env_seed().value_or(0);
        if (log_alpha) {
            vopts.attention.lorentz_scale = std::exp(*log_alpha);
            bcfg.attention.lorentz_scale = std::exp(*log_alpha);
        }

        if (*verify) {
            vopts.seed = base_seed;
            return cli::cmd_verify(vopts, filter, std::cout);
        }
        if (*bench) {
            bcfg.seed = base_seed;
            return with_output(output, [&](std::ostream& os) { return cli::cmd_bench(bcfg, format, os); });
        }
        if (*tree) {
            if (!seeds.empty())
                tcfg.seeds = seeds;
            else if (const auto env = cli::env_seed())
                tcfg.seeds = {*env};
            return with_output(output, [&](std::ostream& os) {
                return cli::cmd_tree_embed(tcfg, format, os, std::cerr);
            });
        }
        if (*descent) {
            dparams.seed = base_seed;
            return cli::cmd_descent(dparams, output_dir, prefix, std::cout);
        }
    } catch (const geoattn::experiments::OutputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kFailure;
    }
    return cli::kUsage;
}
