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

// Command-line front end for decoding single syndromes and running the benchmarks.
//
// Exit status: 0 on success, 1 when a check or run fails, 2 for configuration errors.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "tnqec/bench.h"
#include "tnqec/errors.h"

namespace {

using nlohmann::json;
using namespace tnqec;

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "-";
    std::string format = "csv";
    std::optional<std::size_t> workers;
};

void add_common(CLI::App *cmd, Options &o, bool config_required) {
    auto *c = cmd->add_option("--config", o.config, "JSON config or request file");
    if (config_required) {
        c->required();
    }
    cmd->add_option("--seed", o.seed, "Override the seed");
    cmd->add_option("--out", o.out, "Output path, '-' for stdout")->capture_default_str();
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    cmd->add_option("--workers", o.workers, "Worker threads")->check(CLI::PositiveNumber);
}

void write_text(const std::string &text, const std::string &path) {
    if (path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path);
    if (!out || !(out << text) || !(out.flush())) {
        throw IoError("cannot write '" + path + "'");
    }
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string q = "\"";
    for (char c : s) {
        q += c == '"' ? std::string("\"\"") : std::string(1, c);
    }
    return q + "\"";
}

ExperimentConfig load_config(const Options &o, ExperimentKind fallback, std::initializer_list<ExperimentKind> allowed) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig::defaults(fallback) : ExperimentConfig::load(o.config);
    bool ok = false;
    for (auto k : allowed) {
        ok = ok || cfg.kind == k;
    }
    if (!ok) {
        throw ConfigError("config kind '" + to_string(cfg.kind) + "' does not match this subcommand");
    }
    if (o.seed) {
        cfg.seed = *o.seed;
    }
    if (o.workers) {
        cfg.workers = *o.workers;
    }
    if (o.out != "-") {
        cfg.output = o.out;
    }
    cfg.validate();
    return cfg;
}

std::string output_path(const ExperimentConfig &cfg) {
    return cfg.output.empty() ? "-" : cfg.output;
}

int run_decode(const Options &o) {
    DecodeRequest req = DecodeRequest::load(o.config);
    json result = run_decode_request(req, o.seed.value_or(DiamondOptions{}.seed));
    std::string text;
    if (o.format == "json") {
        text = result.dump(2) + "\n";
    } else {
        std::ostringstream s;
        s << "# request: " << req.to_json().dump() << "\n";
        s << "syndrome,correction,mwpm_correction,log_probability,trace_distance,diamond_distance\n";
        std::string c = result["correction"];
        s << req.syndrome << "," << c << "," << result["mwpm_correction"].get<std::string>() << ","
          << result["log_probability"].dump() << "," << result["distances"][c]["trace"].dump() << ","
          << result["distances"][c]["diamond"].dump() << "\n";
        text = s.str();
    }
    write_text(text, o.out);
    return 0;
}

int run_rows(const Options &o, ExperimentKind fallback, std::initializer_list<ExperimentKind> allowed) {
    ExperimentConfig cfg = load_config(o, fallback, allowed);
    std::vector<ResultRow> rows;
    if (cfg.kind == ExperimentKind::CbfSweep) {
        rows = run_cbf_benchmark(cfg);
    } else if (cfg.kind == ExperimentKind::Timing) {
        rows = run_timing(cfg).rows;
    } else {
        rows = run_ad_benchmark(cfg);
    }
    emit_results(rows, output_path(cfg), format_from_string(o.format), cfg.to_json());
    return 0;
}

int run_oracle(const Options &o) {
    ExperimentConfig cfg = load_config(o, ExperimentKind::OracleCheck, {ExperimentKind::OracleCheck});
    OracleReport report = run_oracle_check(cfg);
    std::string text;
    if (o.format == "json") {
        json j = report_to_json(report);
        j["config"] = cfg.to_json();
        text = j.dump(2) + "\n";
    } else {
        std::ostringstream s;
        s << "# config: " << cfg.to_json().dump() << "\n";
        s << "check,passed,deviation,tolerance,detail\n";
        for (const auto &c : report.checks) {
            char dev[40], tol[40];
            std::snprintf(dev, sizeof dev, "%.12g", c.deviation);
            std::snprintf(tol, sizeof tol, "%.12g", c.tolerance);
            s << csv_field(c.name) << "," << (c.passed ? "true" : "false") << "," << dev << "," << tol << ","
              << csv_field(c.detail) << "\n";
        }
        text = s.str();
    }
    write_text(text, output_path(cfg));
    for (const auto &c : report.checks) {
        if (!c.passed) {
            std::cerr << "check failed: " << c.name << " (" << c.detail << ")\n";
        }
    }
    return report.passed() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Tensor-network decoding of the surface code"};
    app.require_subcommand(1);
    Options o;
    auto *decode = app.add_subcommand("decode", "Decode one syndrome from a JSON request");
    auto *bench_ad = app.add_subcommand("bench-ad", "Amplitude-damping benchmark");
    auto *bench_cbf = app.add_subcommand("bench-cbf", "Correlated bit-flip benchmark");
    auto *oracle = app.add_subcommand("oracle-check", "Exhaustive d = 3 oracle suite");
    auto *timing = app.add_subcommand("timing", "Decode wall time against lattice size");
    add_common(decode, o, true);
    for (auto *cmd : {bench_ad, bench_cbf, oracle, timing}) {
        add_common(cmd, o, false);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }
    try {
        if (*decode) {
            return run_decode(o);
        }
        if (*bench_ad) {
            return run_rows(o, ExperimentKind::AdSweep, {ExperimentKind::AdSweep, ExperimentKind::AdSizeSweep});
        }
        if (*bench_cbf) {
            return run_rows(o, ExperimentKind::CbfSweep, {ExperimentKind::CbfSweep});
        }
        if (*timing) {
            return run_rows(o, ExperimentKind::Timing, {ExperimentKind::Timing});
        }
        return run_oracle(o);
    } catch (const ConfigError &e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError &e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
