#include <gtest/gtest.h>

#include <sstream>

#include "commands.hpp"

namespace cli = geoattn::cli;

namespace {

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
        if (!line.empty()) rows.push_back(geoattn::split_csv_line(line));
    return rows;
}

}  // namespace

TEST(Bench, CsvAndJsonCarryIdenticalValues) {
    geoattn::bench::BenchConfig cfg;
    cfg.n = cfg.m = 16;
    cfg.d = 8;
    cfg.repeats = 4;
    const auto records = geoattn::bench::run(cfg);
    std::ostringstream csv, json;
    cli::write_records(csv, records, cli::Format::csv);
    cli::write_records(json, records, cli::Format::json);

    const auto rows = csv_rows(csv.str());
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0], geoattn::split_csv_line(geoattn::bench::kCsvHeader));
    const auto arr = nlohmann::json::parse(json.str());
    ASSERT_EQ(arr.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& obj = arr[i];
        EXPECT_EQ(obj.size(), rows[0].size());
        EXPECT_EQ(obj["kernel"], rows[i + 1][0]);
        EXPECT_EQ(obj["heads"].get<std::size_t>(), std::stoull(rows[i + 1][4]));
        EXPECT_EQ(obj["mean_ns"].get<double>(), geoattn::parse_double(rows[i + 1][6]));
        EXPECT_EQ(obj["p50_ns"].get<double>(), geoattn::parse_double(rows[i + 1][7]));
        EXPECT_EQ(obj["p95_ns"].get<double>(), geoattn::parse_double(rows[i + 1][8]));
        EXPECT_LE(obj["p50_ns"].get<double>(), obj["p95_ns"].get<double>());
        EXPECT_EQ(obj["repeats"], 4);
    }
    EXPECT_EQ(arr[0]["kernel"], "euclidean");
    EXPECT_EQ(arr[1]["kernel"], "oblique");
    EXPECT_EQ(arr[2]["kernel"], "lorentz");
}

TEST(Bench, SingleRepeatCollapsesPercentiles) {
    geoattn::bench::BenchConfig cfg;
    cfg.n = cfg.m = cfg.d = 4;
    cfg.repeats = 1;
    for (const auto& r : geoattn::bench::run(cfg)) {
        EXPECT_EQ(r.p50_ns, r.mean_ns);
        EXPECT_EQ(r.p95_ns, r.mean_ns);
    }
}

TEST(Bench, GuardFiresBeforeAllocation) {
    geoattn::bench::BenchConfig cfg;
    cfg.n = 1u << 13;
    cfg.m = (1u << 11) + 1;
    EXPECT_THROW(geoattn::bench::run(cfg), geoattn::bench::BudgetError);
}

TEST(Bench, Percentile) {
    EXPECT_EQ(geoattn::bench::percentile({1, 2, 3, 4}, 50), 2.0);
    EXPECT_EQ(geoattn::bench::percentile({1, 2, 3, 4}, 95), 4.0);
}

TEST(Verify, FilterSelectsModule) {
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_verify({}, "oblique", out), cli::kOk);
    EXPECT_EQ(out.str().find("[lorentz]"), std::string::npos);
    EXPECT_NE(out.str().find("[oblique] clip floor"), std::string::npos);
}

TEST(Verify, UnknownFilterIsUsageError) {
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_verify({}, "no-such-property", out), cli::kUsage);
}

TEST(Verify, LorentzClipFaultDetected) {
    geoattn::verify::Options opts;
    opts.attention.eps_lorentz = 0.0;
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_verify(opts, "clip floor", out), cli::kFailure);
    EXPECT_NE(out.str().find("FAIL  [lorentz] clip floor"), std::string::npos);
    EXPECT_NE(out.str().find("PASS  [oblique] clip floor"), std::string::npos);
}

TEST(Verify, Deterministic) {
    std::ostringstream a, b;
    cli::cmd_verify({}, "geodesic-attention", a);
    cli::cmd_verify({}, "geodesic-attention", b);
    EXPECT_EQ(a.str(), b.str());
}

TEST(TreeEmbed, CurvatureSweepAddsArms) {
    cli::TreeEmbedConfig cfg;
    cfg.tree = {2, 2, 1.0};
    cfg.steps = 100;
    cfg.curvatures = {0.5, 1.0, 2.0};
    cfg.seeds = {0, 1};
    std::ostringstream report, summary;
    EXPECT_EQ(cli::cmd_tree_embed(cfg, cli::Format::csv, report, summary), cli::kOk);
    const auto rows = csv_rows(report.str());
    ASSERT_EQ(rows.size(), 1u + 4u * 3u);
    EXPECT_EQ(rows[0][0], "space");
    EXPECT_EQ(rows[3][2], "mean");
    EXPECT_EQ(rows[4][0], "lorentz");
    EXPECT_EQ(rows[4][1], "0.5");
    EXPECT_NE(summary.str().find("lorentz(c=2)"), std::string::npos);
}

TEST(TreeEmbed, JsonReport) {
    cli::TreeEmbedConfig cfg;
    cfg.tree = {2, 1, 1.0};
    cfg.steps = 50;
    cfg.seeds = {3};
    std::ostringstream report, summary;
    cli::cmd_tree_embed(cfg, cli::Format::json, report, summary);
    const auto arr = nlohmann::json::parse(report.str());
    ASSERT_EQ(arr.size(), 2u);
    EXPECT_TRUE(arr[0]["curvature"].is_null());
    EXPECT_EQ(arr[1]["curvature"], 1.0);
    EXPECT_EQ(arr[1]["runs"][0]["seed"], 3);
}

TEST(TreeEmbed, RejectsBadCurvature) {
    cli::TreeEmbedConfig cfg;
    cfg.curvatures = {0.0};
    EXPECT_THROW(cli::run_tree_embed(cfg), std::invalid_argument);
}

TEST(Descent, SummaryAndFiles) {
    const auto dir = std::filesystem::temp_directory_path() / "geoattn_cli_descent";
    std::filesystem::create_directories(dir);
    geoattn::experiments::DescentParams p;
    p.condition_number = 1.0;
    std::ostringstream out;
    EXPECT_EQ(cli::cmd_descent(p, dir, "", out), cli::kOk);
    EXPECT_NE(out.str().find("ratio unconstrained/oblique=1\n"), std::string::npos);
    EXPECT_TRUE(std::filesystem::exists(dir / "oblique.csv"));
    std::filesystem::remove_all(dir);
}

TEST(EnvSeed, ParsesOrRejects) {
    ::setenv("GEOATTN_SEED", "42", 1);
    EXPECT_EQ(cli::env_seed(), 42u);
    ::setenv("GEOATTN_SEED", "4x", 1);
    EXPECT_THROW(cli::env_seed(), std::invalid_argument);
    ::unsetenv("GEOATTN_SEED");
    EXPECT_FALSE(cli::env_seed().has_value());
}
