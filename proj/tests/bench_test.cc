// Copyright 2026 The tnqec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "tnqec/bench.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "tnqec/errors.h"

using namespace tnqec;

namespace {

ResultRow sample_row() {
    ResultRow r;
    r.kind = "cbf-sweep";
    r.decoder = "tn";
    r.metric = "logical-error-rate";
    r.width = r.height = 5;
    r.parameter_name = "beta";
    r.parameter = 1 / 0.9;
    r.chi = 8;
    r.norm = "diamond";
    r.samples = 12000;
    r.seed = 7;
    r.value = 1.0 / 3.0;
    r.half_width = 0.0123456789012345;
    r.lower = 0.32;
    r.upper = 0.35;
    r.count = 4000;
    r.wall_seconds = 12.5;
    r.note = "a, \"quoted\" note";
    return r;
}

std::vector<std::string> data_lines(const std::string &text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line[0] != '#') {
            out.push_back(line);
        }
    }
    return out;
}

// Rows with the wall time cleared, the one column that legitimately varies.
std::string timeless(std::vector<ResultRow> rows) {
    for (auto &r : rows) {
        r.wall_seconds = 0;
    }
    return format_results(rows, Format::Csv, nlohmann::json::object());
}

}  // namespace

TEST(statistics, wilson_anchors) {
    Interval a = wilson_interval(5, 10);
    EXPECT_NEAR(a.lower, 0.236593, 1e-6);
    EXPECT_NEAR(a.upper, 0.763407, 1e-6);
    Interval zero = wilson_interval(0, 50);
    EXPECT_EQ(zero.lower, 0.0);
    EXPECT_NEAR(zero.upper, 0.071348, 1e-6);
    Interval all = wilson_interval(50, 50);
    EXPECT_EQ(all.upper, 1.0);
    EXPECT_NEAR(z95(), 1.959964, 1e-6);
}

TEST(statistics, wilson_coverage_on_bernoulli_streams) {
    std::mt19937_64 rng(2024);
    for (double p : {0.01, 0.1, 0.5}) {
        std::bernoulli_distribution coin(p);
        int covered = 0;
        const int reps = 1000, n = 500;
        for (int rep = 0; rep < reps; ++rep) {
            std::size_t k = 0;
            for (int i = 0; i < n; ++i) {
                k += coin(rng);
            }
            Interval ci = wilson_interval(k, n);
            covered += ci.lower <= p && p <= ci.upper;
        }
        EXPECT_GE(covered, 930) << "p = " << p;
    }
}

TEST(statistics, mean_and_standard_error) {
    MeanEstimate m = mean_estimate({1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(m.mean, 2.5);
    EXPECT_NEAR(m.standard_error, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
    EXPECT_EQ(mean_estimate({}).mean, 0.0);
    EXPECT_EQ(mean_estimate({3}).standard_error, 0.0);
}

TEST(statistics, derived_streams_are_reproducible_and_distinct) {
    auto a = derived_rng(5, {1, 2}), b = derived_rng(5, {1, 2}), c = derived_rng(5, {2, 1}), d = derived_rng(6, {1, 2});
    auto x = a();
    EXPECT_EQ(x, b());
    EXPECT_NE(x, c());
    EXPECT_NE(x, d());
}

TEST(statistics, parallel_for_visits_every_task_and_rethrows) {
    std::vector<int> hits(100, 0);
    parallel_for(100, 4, [&](std::size_t i) { hits[i] += 1; });
    EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 100);
    EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                     if (i == 7) {
                         throw DomainError("boom");
                     }
                 }),
                 DomainError);
}

TEST(scaling_fit, recovers_linear_and_quadratic_laws) {
    std::vector<double> n = {9, 25, 49, 81};
    std::vector<double> lin, quad;
    for (double v : n) {
        lin.push_back(0.5 + 0.01 * v);
        quad.push_back(1e-4 * v * v);
    }
    ScalingFit a = fit_scaling(n, lin);
    EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
    EXPECT_NEAR(a.slope, 0.01, 1e-12);
    EXPECT_NEAR(a.intercept, 0.5, 1e-10);
    EXPECT_NEAR(a.exponent, 1.0, 1e-4);
    ScalingFit b = fit_scaling(n, quad);
    EXPECT_NEAR(b.exponent, 2.0, 1e-4);
    EXPECT_LT(b.r_squared, 1.0);
    EXPECT_THROW(fit_scaling({1, 2}, {1, 2}), DomainError);
}

TEST(experiment_config, defaults_round_trip_through_json) {
    for (auto kind : {ExperimentKind::AdSweep, ExperimentKind::AdSizeSweep, ExperimentKind::CbfSweep,
                      ExperimentKind::OracleCheck, ExperimentKind::Timing}) {
        ExperimentConfig c = ExperimentConfig::defaults(kind);
        nlohmann::json j = c.to_json();
        EXPECT_EQ(ExperimentConfig::from_json(j).to_json(), j) << to_string(kind);
    }
    EXPECT_EQ(ExperimentConfig::defaults(ExperimentKind::CbfSweep).samples, 12000u);
}

TEST(experiment_config, parses_fields) {
    auto j = nlohmann::json::parse(R"({"kind": "cbf-sweep", "sizes": [3, 5], "inverse_betas": [0.5, 1.0],
        "ising": {"j2": 0}, "chi": "exact", "norm": "trace", "samples": 10, "seed": 99,
        "mcmc": {"start": "random", "block": 7}})");
    ExperimentConfig c = ExperimentConfig::from_json(j);
    EXPECT_EQ(c.sizes, (std::vector<std::size_t>{3, 5}));
    ASSERT_EQ(c.betas.size(), 2u);
    EXPECT_DOUBLE_EQ(c.betas[0], 2.0);
    EXPECT_EQ(c.ising.j2, 0.0);
    EXPECT_EQ(c.ising.j1, 1.0);
    EXPECT_EQ(c.chi, kUnboundedBond);
    EXPECT_EQ(c.norm, Norm::Trace);
    EXPECT_EQ(c.seed, 99u);
    EXPECT_FALSE(c.mcmc.ordered_start);
    EXPECT_EQ(c.mcmc.block, 7u);
}

TEST(experiment_config, rejects_invalid_documents) {
    auto bad = [](const char *text) {
        EXPECT_THROW(ExperimentConfig::from_json(nlohmann::json::parse(text)), ConfigError) << text;
    };
    bad(R"({"sizes": [3]})");
    bad(R"({"kind": "nope"})");
    bad(R"({"kind": "cbf-sweep", "unknown": 1})");
    bad(R"({"kind": "cbf-sweep", "samples": 0})");
    bad(R"({"kind": "cbf-sweep", "chi": 0})");
    bad(R"({"kind": "cbf-sweep", "betas": [-1]})");
    bad(R"({"kind": "cbf-sweep", "betas": [1], "inverse_betas": [1]})");
    bad(R"({"kind": "ad-sweep", "sizes": [4]})");
    bad(R"({"kind": "ad-sweep", "gammas": [1.5]})");
    bad(R"({"kind": "cbf-sweep", "norm": "frobenius"})");
    bad(R"({"kind": "cbf-sweep", "mcmc": {"start": "sideways"}})");
    bad(R"({"kind": "cbf-sweep", "workers": 0})");
    bad(R"([1, 2])");
    EXPECT_THROW(ExperimentConfig::load("/nonexistent/config.json"), ConfigError);
}

TEST(emit_results, empty_rows_give_header_only) {
    nlohmann::json md = {{"kind", "cbf-sweep"}, {"seed", 3}};
    std::string csv = format_results({}, Format::Csv, md);
    auto lines = data_lines(csv);
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0].rfind("kind,decoder,metric,", 0), 0u);
    EXPECT_NE(csv.find("# seed: 3"), std::string::npos);
    auto doc = nlohmann::json::parse(format_results({}, Format::Json, md));
    EXPECT_TRUE(doc["rows"].empty());
    EXPECT_EQ(doc["metadata"], md);
    EXPECT_EQ(doc["columns"].size(), result_columns().size());
}

TEST(emit_results, one_csv_row_has_twelve_significant_digits) {
    std::string csv = format_results({sample_row()}, Format::Csv, {{"kind", "cbf-sweep"}});
    auto lines = data_lines(csv);
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_NE(lines[1].find(",0.333333333333,"), std::string::npos);
    EXPECT_NE(lines[1].find(",0.0123456789012,"), std::string::npos);
    EXPECT_NE(lines[1].find("\"a, \"\"quoted\"\" note\""), std::string::npos);
}

TEST(emit_results, json_round_trip) {
    std::vector<ResultRow> rows = {sample_row(), sample_row()};
    rows[1].decoder = "mwpm";
    rows[1].value = 0.1;
    rows[1].parameter = 1.25;
    rows[1].half_width = 0.0125;
    std::vector<ResultRow> back = parse_results_json(format_results(rows, Format::Json, {}));
    ASSERT_EQ(back.size(), 2u);
    // Values are carried to 12 significant digits; re-emission is byte-identical.
    EXPECT_NEAR(back[0].value, rows[0].value, 1e-12);
    EXPECT_EQ(back[1], rows[1]);
    EXPECT_EQ(format_results(back, Format::Json, {}), format_results(rows, Format::Json, {}));
    EXPECT_EQ(parse_results_json(format_results(back, Format::Json, {})), back);
}

TEST(emit_results, writes_files_and_reports_io_errors) {
    auto path = std::filesystem::temp_directory_path() / "tnqec_emit_test.csv";
    emit_results({sample_row()}, path.string(), Format::Csv, {});
    std::ifstream in(path);
    std::stringstream text;
    text << in.rdbuf();
    EXPECT_EQ(text.str(), format_results({sample_row()}, Format::Csv, {}));
    std::filesystem::remove(path);
    EXPECT_THROW(emit_results({}, "/nonexistent/dir/out.csv", Format::Csv, {}), IoError);
    EXPECT_THROW(format_from_string("xml"), ConfigError);
}

TEST(cbf_benchmark, decoder_errors_count_as_failures) {
    // Hot wide lattices flip more checks than the matcher accepts.
    ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::CbfSweep);
    c.sizes = {11};
    c.betas = {0.2};
    c.samples = 8;
    auto rows = run_cbf_benchmark(c);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].decode_errors, 0u);
    EXPECT_EQ(rows[1].decode_errors, 8u);
    EXPECT_EQ(rows[1].count, 8u);
    EXPECT_EQ(rows[1].value, 1.0);
    c.kind = ExperimentKind::Timing;
    EXPECT_THROW(run_cbf_benchmark(c), ConfigError);
}

TEST(cbf_benchmark, deterministic_across_runs_and_worker_counts) {
    ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::CbfSweep);
    c.sizes = {3};
    c.betas = {1 / 1.4};
    c.samples = 250;
    c.mcmc.block = 40;
    std::string one = timeless(run_cbf_benchmark(c));
    EXPECT_EQ(one, timeless(run_cbf_benchmark(c)));
    c.workers = 3;
    EXPECT_EQ(one, timeless(run_cbf_benchmark(c)));
    c.seed = 2;
    EXPECT_NE(one, timeless(run_cbf_benchmark(c)));
}

TEST(cbf_benchmark, matches_exact_maximum_likelihood_rate) {
    // At d = 3 the tensor network decoder is ML; its failure rate estimates the ML
    // failure probability sum_s min(class masses).
    IsingParams p;
    p.beta = 1.0;
    Lattice lat = Lattice::build(3, 3);
    CbfMlTable table(p, lat);
    double ml_failure = 0;
    for (auto key : table.reachable()) {
        auto m = table.class_mass(Syndrome::from_key(key, lat));
        ml_failure += std::min(m[0], m[1]);
    }
    ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::CbfSweep);
    c.sizes = {3};
    c.betas = {1.0};
    c.samples = 4000;
    c.mcmc.block = 20;
    auto rows = run_cbf_benchmark(c);
    EXPECT_LE(rows[0].lower, ml_failure + 0.01);
    EXPECT_GE(rows[0].upper, ml_failure - 0.01);
    EXPECT_LE(rows[0].value, rows[1].value + 0.02);
}

TEST(ad_benchmark, noiseless_and_small_runs) {
    ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::AdSizeSweep);
    c.sizes = {2};
    c.gammas = {0.0, 0.2};
    c.samples = 40;
    auto rows = run_ad_benchmark(c);
    ASSERT_EQ(rows.size(), 6u);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(rows[k].width, 3u);
        EXPECT_EQ(rows[k].height, 2u);
        EXPECT_EQ(rows[k].value, 0.0) << rows[k].decoder;
        EXPECT_EQ(rows[k].count, 40u);
    }
    const ResultRow &tn = rows[3], &opt = rows[4], &mw = rows[5];
    EXPECT_EQ(opt.decoder, "optimal");
    EXPECT_LE(opt.value, tn.value + 1e-9);
    EXPECT_LE(opt.value, mw.value + 1e-9);
    EXPECT_GT(opt.value, 0.0);
    c.workers = 2;
    auto again = run_ad_benchmark(c);
    EXPECT_EQ(timeless(rows), timeless(again));
}

TEST(oracle_check, exact_passes_and_bond_one_fails) {
    CheckResult exact = check_dense_choi(0.2, kUnboundedBond, 1e-8);
    EXPECT_TRUE(exact.passed) << exact.deviation;
    EXPECT_LT(exact.deviation, 1e-8);
    CheckResult crude = check_dense_choi(0.2, 1, 1e-8);
    EXPECT_FALSE(crude.passed);
    EXPECT_GT(crude.deviation, 1e-4);
}

TEST(oracle_check, structural_suites_pass) {
    IsingParams p;
    EXPECT_TRUE(check_mwpm_optimality().passed);
    EXPECT_TRUE(check_j2_irrelevance(p, 1e-12).passed);
    CheckResult f = check_network_factors(p, 1e-10);
    EXPECT_TRUE(f.passed) << f.deviation;
    CheckResult m = check_mcmc_distribution(p, 2000, 5, 3.5);
    EXPECT_TRUE(m.passed) << m.deviation;
    p.beta = 1.4;
    CheckResult ml = check_cbf_ml_agreement(p, 8);
    EXPECT_TRUE(ml.passed) << ml.detail;
    OracleReport report;
    report.checks = {f, ml};
    EXPECT_TRUE(report.passed());
    report.checks.push_back(check_dense_choi(0.09, 1, 1e-8));
    EXPECT_FALSE(report.passed());
    EXPECT_EQ(report_to_json(report)["checks"].size(), 3u);
}

TEST(timing, reports_rows_and_fit) {
    ExperimentConfig c = ExperimentConfig::defaults(ExperimentKind::Timing);
    c.sizes = {3, 4, 5};
    c.samples = 2;
    TimingReport t = run_timing(c);
    ASSERT_EQ(t.rows.size(), 5u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(t.rows[i].metric, "decode-seconds");
        EXPECT_GT(t.rows[i].value, 0.0);
    }
    EXPECT_EQ(t.rows[3].metric, "fit-r-squared");
    EXPECT_EQ(t.rows[4].metric, "fit-exponent");
    EXPECT_GE(t.fit.r_squared, 0.0);
    EXPECT_LE(t.fit.r_squared, 1.0);
}
