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

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_fit.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "tnqec/errors.h"
#include "tnqec/grid.h"

namespace tnqec {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

const std::map<ExperimentKind, std::string> &kind_names() {
    static const std::map<ExperimentKind, std::string> names = {
        {ExperimentKind::AdSweep, "ad-sweep"},         {ExperimentKind::AdSizeSweep, "ad-size-sweep"},
        {ExperimentKind::CbfSweep, "cbf-sweep"},       {ExperimentKind::OracleCheck, "oracle-check"},
        {ExperimentKind::Timing, "timing"},
    };
    return names;
}

bool is_ad(ExperimentKind k) {
    return k == ExperimentKind::AdSweep || k == ExperimentKind::AdSizeSweep;
}

template <typename T>
T get_field(const json &j, const char *key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception &e) {
        throw ConfigError(std::string("config field '") + key + "': " + e.what());
    }
}

std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

double round12(double x) {
    return std::isfinite(x) ? std::stod(fmt12(x)) : x;
}

std::string csv_field(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

json row_to_json(const ResultRow &r) {
    return json{{"kind", r.kind},
                {"decoder", r.decoder},
                {"metric", r.metric},
                {"width", r.width},
                {"height", r.height},
                {"parameter_name", r.parameter_name},
                {"parameter", round12(r.parameter)},
                {"chi", r.chi},
                {"norm", r.norm},
                {"samples", r.samples},
                {"seed", r.seed},
                {"value", round12(r.value)},
                {"half_width", round12(r.half_width)},
                {"lower", round12(r.lower)},
                {"upper", round12(r.upper)},
                {"count", r.count},
                {"decode_errors", r.decode_errors},
                {"wall_seconds", round12(r.wall_seconds)},
                {"note", r.note}};
}

std::vector<std::string> row_fields(const ResultRow &r) {
    return {r.kind,
            r.decoder,
            r.metric,
            std::to_string(r.width),
            std::to_string(r.height),
            r.parameter_name,
            fmt12(r.parameter),
            std::to_string(r.chi),
            r.norm,
            std::to_string(r.samples),
            std::to_string(r.seed),
            fmt12(r.value),
            fmt12(r.half_width),
            fmt12(r.lower),
            fmt12(r.upper),
            std::to_string(r.count),
            std::to_string(r.decode_errors),
            fmt12(r.wall_seconds),
            r.note};
}

ResultRow rate_row(std::size_t failures, std::size_t n) {
    ResultRow r;
    r.metric = "logical-error-rate";
    r.samples = n;
    r.count = failures;
    r.value = n ? double(failures) / double(n) : 0;
    Interval ci = wilson_interval(failures, n);
    r.lower = ci.lower;
    r.upper = ci.upper;
    r.half_width = ci.half_width();
    return r;
}

ResultRow mean_row(const std::vector<double> &values, std::size_t samples) {
    ResultRow r;
    r.samples = samples;
    r.count = values.size();
    MeanEstimate m = mean_estimate(values);
    r.value = m.mean;
    r.half_width = z95() * m.standard_error;
    r.lower = r.value - r.half_width;
    r.upper = r.value + r.half_width;
    return r;
}

void echo_config(ResultRow &r, const ExperimentConfig &cfg, std::size_t width, std::size_t height) {
    r.kind = to_string(cfg.kind);
    r.width = width;
    r.height = height;
    r.chi = cfg.chi;
    r.norm = to_string(cfg.norm);
    r.seed = cfg.seed;
}

std::size_t chi_field(const json &v) {
    if (v.is_string()) {
        if (v.get<std::string>() == "exact") {
            return kUnboundedBond;
        }
        throw ConfigError("chi must be a positive integer or \"exact\"");
    }
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw ConfigError("chi must be a positive integer or \"exact\"");
    }
    return v.get<std::size_t>();
}

// Contracts the factor network for one Pauli string on both PTM indices.
cplx network_entry(const NoiseNetworkFactor &f, const std::vector<int> &pauli) {
    GridNetwork net(f.rows, f.cols);
    for (std::size_t q = 0; q < f.sites.size(); ++q) {
        Tensor o({"out"}, {4});
        o.at({std::size_t(pauli[q])}) = 1;
        Tensor i({"in"}, {4});
        i.at({std::size_t(pauli[q])}) = 1;
        net.cells[q] = contract(contract(f.sites[q], o), i).permuted({"up", "down", "left", "right"});
    }
    return contract_grid_dense(net) * std::exp(f.log_scale);
}

CheckResult make_check(std::string name, double deviation, double tol, bool strict = true) {
    CheckResult c;
    c.name = std::move(name);
    c.deviation = deviation;
    c.tolerance = tol;
    c.passed = strict ? deviation < tol : deviation <= tol;
    return c;
}

std::string param_label(const char *name, double v) {
    return std::string(name) + "=" + fmt12(v);
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    return kind_names().at(kind);
}

ExperimentKind experiment_kind_from_string(const std::string &name) {
    for (const auto &[k, n] : kind_names()) {
        if (n == name) {
            return k;
        }
    }
    throw ConfigError("unknown experiment kind '" + name + "'");
}

std::string to_string(Norm norm) {
    return norm == Norm::Trace ? "trace" : "diamond";
}

Norm norm_from_string(const std::string &name) {
    if (name == "trace") {
        return Norm::Trace;
    }
    if (name == "diamond") {
        return Norm::Diamond;
    }
    throw ConfigError("unknown norm '" + name + "'");
}

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind) {
    ExperimentConfig c;
    c.kind = kind;
    switch (kind) {
        case ExperimentKind::AdSweep:
            c.sizes = {3};
            c.gammas = {0.05, 0.09, 0.15, 0.2, 0.3, 0.39};
            break;
        case ExperimentKind::AdSizeSweep:
            c.sizes = {2, 3};
            c.gammas = {0.09, 0.2, 0.39};
            break;
        case ExperimentKind::CbfSweep:
            c.sizes = {5};
            c.betas = {1 / 0.7, 1 / 0.8, 1 / 0.9, 1 / 1.0};
            break;
        case ExperimentKind::OracleCheck:
            c.sizes = {3};
            c.gammas = {0.09, 0.2, 0.39};
            c.betas = {0.8, 1.0, 1.4};
            c.chi = kUnboundedBond;
            c.samples = 10000;
            break;
        case ExperimentKind::Timing:
            c.sizes = {3, 5, 7, 9};
            c.betas = {1 / 0.9};
            c.samples = 20;
            break;
    }
    return c;
}

ExperimentConfig ExperimentConfig::from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    static const std::vector<std::string> known = {"kind",  "sizes",  "gammas",  "betas",  "inverse_betas",
                                                   "ising", "chi",    "norm",    "samples", "seed",
                                                   "output", "workers", "mcmc"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw ConfigError("unknown config field '" + it.key() + "'");
        }
    }
    if (!j.contains("kind")) {
        throw ConfigError("config field 'kind' is required");
    }
    ExperimentConfig c = defaults(experiment_kind_from_string(get_field<std::string>(j, "kind")));
    if (j.contains("sizes")) {
        c.sizes = get_field<std::vector<std::size_t>>(j, "sizes");
    }
    if (j.contains("gammas")) {
        c.gammas = get_field<std::vector<double>>(j, "gammas");
    }
    if (j.contains("betas") && j.contains("inverse_betas")) {
        throw ConfigError("give either 'betas' or 'inverse_betas'");
    }
    if (j.contains("betas")) {
        c.betas = get_field<std::vector<double>>(j, "betas");
    }
    if (j.contains("inverse_betas")) {
        c.betas.clear();
        for (double t : get_field<std::vector<double>>(j, "inverse_betas")) {
            if (!(t > 0)) {
                throw ConfigError("inverse_betas must be positive");
            }
            c.betas.push_back(1 / t);
        }
    }
    if (j.contains("ising")) {
        const json &is = j.at("ising");
        if (!is.is_object()) {
            throw ConfigError("config field 'ising' must be an object");
        }
        for (auto it = is.begin(); it != is.end(); ++it) {
            if (it.key() == "h") {
                c.ising.h = get_field<double>(is, "h");
            } else if (it.key() == "j1") {
                c.ising.j1 = get_field<double>(is, "j1");
            } else if (it.key() == "j2") {
                c.ising.j2 = get_field<double>(is, "j2");
            } else {
                throw ConfigError("unknown ising field '" + it.key() + "'");
            }
        }
    }
    if (j.contains("chi")) {
        c.chi = chi_field(j.at("chi"));
    }
    if (j.contains("norm")) {
        c.norm = norm_from_string(get_field<std::string>(j, "norm"));
    }
    if (j.contains("samples")) {
        if (!j.at("samples").is_number_integer() || j.at("samples").get<long long>() < 1) {
            throw ConfigError("samples must be a positive integer");
        }
        c.samples = get_field<std::size_t>(j, "samples");
    }
    if (j.contains("seed")) {
        c.seed = get_field<std::uint64_t>(j, "seed");
    }
    if (j.contains("output")) {
        c.output = get_field<std::string>(j, "output");
    }
    if (j.contains("workers")) {
        if (!j.at("workers").is_number_integer() || j.at("workers").get<long long>() < 1) {
            throw ConfigError("workers must be a positive integer");
        }
        c.workers = get_field<std::size_t>(j, "workers");
    }
    if (j.contains("mcmc")) {
        const json &m = j.at("mcmc");
        if (!m.is_object()) {
            throw ConfigError("config field 'mcmc' must be an object");
        }
        for (auto it = m.begin(); it != m.end(); ++it) {
            if (it.key() == "burn_in_sweeps") {
                c.mcmc.burn_in_sweeps = get_field<std::size_t>(m, "burn_in_sweeps");
            } else if (it.key() == "thin_sweeps") {
                c.mcmc.thin_sweeps = get_field<std::size_t>(m, "thin_sweeps");
            } else if (it.key() == "block") {
                c.mcmc.block = get_field<std::size_t>(m, "block");
            } else if (it.key() == "start") {
                std::string s = get_field<std::string>(m, "start");
                if (s != "ordered" && s != "random") {
                    throw ConfigError("mcmc.start must be 'ordered' or 'random'");
                }
                c.mcmc.ordered_start = s == "ordered";
            } else {
                throw ConfigError("unknown mcmc field '" + it.key() + "'");
            }
        }
    }
    c.validate();
    return c;
}

ExperimentConfig ExperimentConfig::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

json ExperimentConfig::to_json() const {
    json j;
    j["kind"] = to_string(kind);
    j["sizes"] = sizes;
    j["gammas"] = gammas;
    j["betas"] = betas;
    j["ising"] = {{"h", ising.h}, {"j1", ising.j1}, {"j2", ising.j2}};
    if (chi == kUnboundedBond) {
        j["chi"] = "exact";
    } else {
        j["chi"] = chi;
    }
    j["norm"] = to_string(norm);
    j["samples"] = samples;
    j["seed"] = seed;
    j["output"] = output;
    j["workers"] = workers;
    j["mcmc"] = {{"burn_in_sweeps", mcmc.burn_in_sweeps},
                 {"thin_sweeps", mcmc.thin_sweeps},
                 {"block", mcmc.block},
                 {"start", mcmc.ordered_start ? "ordered" : "random"}};
    return j;
}

void ExperimentConfig::validate() const {
    if (samples < 1) {
        throw ConfigError("samples must be at least 1");
    }
    if (workers < 1) {
        throw ConfigError("workers must be at least 1");
    }
    if (chi < 1) {
        throw ConfigError("chi must be at least 1");
    }
    if (mcmc.thin_sweeps < 1 || mcmc.block < 1) {
        throw ConfigError("mcmc.thin_sweeps and mcmc.block must be at least 1");
    }
    try {
        IsingParams p = ising;
        p.validate();
    } catch (const DomainError &e) {
        throw ConfigError(e.what());
    }
    for (double g : gammas) {
        if (!(g >= 0 && g <= 1)) {
            throw ConfigError("gamma must lie in [0, 1]");
        }
    }
    for (double b : betas) {
        if (!(b >= 0) || !std::isfinite(b)) {
            throw ConfigError("beta must be finite and nonnegative");
        }
    }
    if (is_ad(kind)) {
        if (sizes.empty() || gammas.empty()) {
            throw ConfigError("amplitude damping sweeps need sizes and gammas");
        }
        for (auto w : sizes) {
            if (w < 2 || w > 3) {
                throw ConfigError("amplitude damping sizes must satisfy 2 <= W <= 3 (dense oracle capacity)");
            }
        }
    } else if (kind == ExperimentKind::CbfSweep || kind == ExperimentKind::Timing) {
        if (sizes.empty() || betas.empty()) {
            throw ConfigError("correlated bit-flip runs need sizes and betas");
        }
        for (auto d : sizes) {
            if (d < 2) {
                throw ConfigError("lattice sizes must be at least 2");
            }
        }
    }
}

const std::vector<std::string> &result_columns() {
    static const std::vector<std::string> cols = {
        "kind",  "decoder", "metric", "width", "height", "parameter_name", "parameter",    "chi",          "norm", "samples",
        "seed",  "value",   "half_width", "lower", "upper", "count",       "decode_errors", "wall_seconds", "note"};
    return cols;
}

double z95() {
    return gsl_cdf_ugaussian_Pinv(0.975);
}

Interval wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) {
        return {0, 1};
    }
    const double nn = double(n), p = double(k) / nn, z2 = z * z;
    const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
    const double spread = z / (1 + z2 / nn) * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn));
    return {std::max(0.0, centre - spread), std::min(1.0, centre + spread)};
}

MeanEstimate mean_estimate(const std::vector<double> &values) {
    MeanEstimate m;
    if (values.empty()) {
        return m;
    }
    double sum = 0;
    for (double v : values) {
        sum += v;
    }
    m.mean = sum / double(values.size());
    if (values.size() > 1) {
        double ss = 0;
        for (double v : values) {
            ss += (v - m.mean) * (v - m.mean);
        }
        m.standard_error = std::sqrt(ss / double(values.size() - 1) / double(values.size()));
    }
    return m;
}

std::mt19937_64 derived_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream) {
    std::vector<std::uint32_t> words = {std::uint32_t(seed), std::uint32_t(seed >> 32)};
    for (auto s : stream) {
        words.push_back(std::uint32_t(s));
        words.push_back(std::uint32_t(s >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return std::mt19937_64(seq);
}

void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)> &fn) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < n;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(mu);
                    if (!error) {
                        error = std::current_exception();
                    }
                    next = n;
                }
            }
        });
    }
    for (auto &t : pool) {
        t.join();
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::vector<ResultRow> run_cbf_benchmark(const ExperimentConfig &cfg) {
    if (cfg.kind != ExperimentKind::CbfSweep) {
        throw ConfigError("run_cbf_benchmark needs kind cbf-sweep");
    }
    cfg.validate();
    std::vector<ResultRow> rows;
    for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
        const std::size_t d = cfg.sizes[si];
        for (std::size_t bi = 0; bi < cfg.betas.size(); ++bi) {
            const auto t0 = Clock::now();
            IsingParams p = cfg.ising;
            p.beta = cfg.betas[bi];
            ResultRow tn_row, mw_row;
            try {
                Lattice lat = Lattice::build(d, d);
                CodeNetwork base(lat, cbf_network_factors(p, lat));
                CbfSampler sampler(p, lat);
                DecoderConfig dc;
                dc.chi = cfg.chi;
                dc.norm = cfg.norm;
                dc.diamond.seed = cfg.seed;

                const std::size_t n = cfg.samples, block = cfg.mcmc.block;
                const std::size_t blocks = (n + block - 1) / block;
                std::vector<std::uint8_t> tn_fail(n), mw_fail(n), tn_err(n), mw_err(n);
                std::mutex mu;
                std::map<std::string, std::optional<Logical>> memo;
                std::vector<std::string> notes;

                parallel_for(blocks, cfg.workers, [&](std::size_t b) {
                    std::mt19937_64 rng = derived_rng(cfg.seed, {2, d, bi, b});
                    SpinConfig sigma(lat.num_qubits(), 1);
                    if (!cfg.mcmc.ordered_start) {
                        for (auto &v : sigma) {
                            v = (rng() & 1) ? 1 : -1;
                        }
                    }
                    for (std::size_t k = 0; k < cfg.mcmc.burn_in_sweeps; ++k) {
                        sampler.sweep(sigma, rng);
                    }
                    for (std::size_t i = b * block; i < std::min(n, (b + 1) * block); ++i) {
                        for (std::size_t k = 0; k < cfg.mcmc.thin_sweeps; ++k) {
                            sampler.sweep(sigma, rng);
                        }
                        PauliFrame error = frame_from_spins(sigma);
                        Syndrome s = syndrome_of(error, lat);
                        PauliFrame rec = recovery_frame(s, lat);

                        std::string key = s.bits();
                        std::optional<Logical> tn;
                        bool cached = false;
                        {
                            std::lock_guard<std::mutex> lock(mu);
                            auto it = memo.find(key);
                            if (it != memo.end()) {
                                tn = it->second;
                                cached = true;
                            }
                        }
                        if (!cached) {
                            try {
                                tn = decode(s, base, dc).correction;
                            } catch (const Error &e) {
                                std::lock_guard<std::mutex> lock(mu);
                                if (notes.size() < 3) {
                                    notes.push_back(e.what());
                                }
                            }
                            std::lock_guard<std::mutex> lock(mu);
                            memo.emplace(key, tn);
                        }
                        if (tn) {
                            PauliFrame residual = error;
                            residual ^= rec;
                            residual ^= logical_frame(*tn, lat);
                            tn_fail[i] = homology_class(residual, lat) != Logical::I;
                        } else {
                            tn_err[i] = 1;
                            tn_fail[i] = 1;
                        }
                        try {
                            PauliFrame residual = error;
                            residual ^= mwpm_match(s, lat).frame;
                            mw_fail[i] = homology_class(residual, lat) != Logical::I;
                        } catch (const Error &) {
                            mw_err[i] = 1;
                            mw_fail[i] = 1;
                        }
                    }
                });
                auto count = [](const std::vector<std::uint8_t> &v) {
                    return std::size_t(std::count(v.begin(), v.end(), 1));
                };
                tn_row = rate_row(count(tn_fail), n);
                tn_row.decode_errors = count(tn_err);
                mw_row = rate_row(count(mw_fail), n);
                mw_row.decode_errors = count(mw_err);
                for (const auto &note : notes) {
                    tn_row.note += (tn_row.note.empty() ? "" : "; ") + note;
                }
            } catch (const Error &e) {
                tn_row = ResultRow{};
                mw_row = ResultRow{};
                tn_row.metric = mw_row.metric = "error";
                tn_row.note = mw_row.note = e.what();
            }
            double wall = seconds_since(t0);
            for (auto [row, name] : {std::pair{&tn_row, "tn"}, std::pair{&mw_row, "mwpm"}}) {
                echo_config(*row, cfg, d, d);
                row->decoder = name;
                row->parameter_name = "beta";
                row->parameter = p.beta;
                row->samples = cfg.samples;
                row->wall_seconds = wall;
                rows.push_back(*row);
            }
        }
    }
    return rows;
}

std::vector<ResultRow> run_ad_benchmark(const ExperimentConfig &cfg) {
    if (!is_ad(cfg.kind)) {
        throw ConfigError("run_ad_benchmark needs kind ad-sweep or ad-size-sweep");
    }
    cfg.validate();
    std::vector<ResultRow> rows;
    for (std::size_t wi = 0; wi < cfg.sizes.size(); ++wi) {
        const std::size_t w = cfg.sizes[wi];
        for (std::size_t gi = 0; gi < cfg.gammas.size(); ++gi) {
            const double gamma = cfg.gammas[gi];
            const auto t0 = Clock::now();
            Lattice lat = Lattice::build(2 * w - 1, w);
            std::array<ResultRow, 3> out;
            const std::array<const char *, 3> names = {"tn", "optimal", "mwpm"};
            try {
                NoiseNetworkFactor noise = iid_network_factors(amplitude_damping(gamma), lat);
                CodeNetwork base(lat, noise);
                // The exact decode selects with the cheap trace norm; diamond distances of
                // the exact channel are evaluated once below for every correction.
                DecoderConfig exact;
                exact.chi = kUnboundedBond;
                exact.norm = Norm::Trace;
                exact.zero_floor = 1e-13;
                exact.diamond.seed = cfg.seed;
                DecoderConfig capped = exact;
                capped.chi = cfg.chi;
                capped.norm = cfg.norm;
                capped.zero_floor = 0;
                TnSyndromeSampler sampler(lat, noise, exact);

                struct Outcome {
                    bool ok = false;
                    std::array<double, 3> distance{};
                    std::string note;
                };
                const std::size_t n = cfg.samples;
                std::vector<Outcome> outcomes(n);
                std::mutex mu;
                std::map<std::string, Outcome> memo;
                parallel_for(n, cfg.workers, [&](std::size_t t) {
                    std::mt19937_64 rng = derived_rng(cfg.seed, {1, w, gi, t});
                    Syndrome s = sampler.sample(rng);
                    const std::string key = s.bits();
                    {
                        std::lock_guard<std::mutex> lock(mu);
                        auto it = memo.find(key);
                        if (it != memo.end()) {
                            outcomes[t] = it->second;
                            return;
                        }
                    }
                    Outcome o;
                    try {
                        DecodeResult ex = decode(s, base, exact);
                        std::array<double, 4> dist{};
                        for (int l = 0; l < 4; ++l) {
                            dist[std::size_t(l)] = correction_error(ex.channel, Pauli(l), Norm::Diamond, exact.diamond);
                        }
                        Logical best = ex.correction;
                        if (cfg.norm == Norm::Diamond) {
                            double lowest = *std::min_element(dist.begin(), dist.end());
                            for (int l = 3; l >= 0; --l) {
                                if (dist[std::size_t(l)] <= lowest + 1e-9) {
                                    best = Pauli(l);
                                }
                            }
                        }
                        Logical tn = decode(s, base, capped).correction;
                        Logical mw = mwpm_decode(s, lat);
                        const std::array<Logical, 3> picks = {tn, best, mw};
                        for (std::size_t k = 0; k < 3; ++k) {
                            o.distance[k] = dist[std::size_t(picks[k])];
                        }
                        o.ok = true;
                    } catch (const Error &e) {
                        o.note = e.what();
                    }
                    std::lock_guard<std::mutex> lock(mu);
                    outcomes[t] = memo.emplace(key, o).first->second;
                });
                std::size_t errors = 0;
                std::string note;
                std::array<std::vector<double>, 3> values;
                for (const auto &o : outcomes) {
                    if (!o.ok) {
                        ++errors;
                        if (note.empty()) {
                            note = o.note;
                        }
                        continue;
                    }
                    for (std::size_t k = 0; k < 3; ++k) {
                        values[k].push_back(o.distance[k]);
                    }
                }
                for (std::size_t k = 0; k < 3; ++k) {
                    out[k] = mean_row(values[k], n);
                    out[k].decode_errors = errors;
                    out[k].note = note;
                }
            } catch (const Error &e) {
                for (auto &r : out) {
                    r = ResultRow{};
                    r.note = e.what();
                }
            }
            double wall = seconds_since(t0);
            for (std::size_t k = 0; k < 3; ++k) {
                ResultRow &r = out[k];
                echo_config(r, cfg, lat.width(), lat.height());
                r.decoder = names[k];
                r.metric = r.note.empty() || r.count > 0 ? "diamond-distance-mean" : "error";
                r.parameter_name = "gamma";
                r.parameter = gamma;
                r.samples = cfg.samples;
                r.wall_seconds = wall;
                rows.push_back(r);
            }
        }
    }
    return rows;
}

ScalingFit fit_scaling(const std::vector<double> &n, const std::vector<double> &t) {
    if (n.size() != t.size() || n.size() < 3) {
        throw DomainError("scaling fit needs at least three matching points");
    }
    ScalingFit fit;
    const std::size_t m = n.size();
    double c0, c1, cov00, cov01, cov11, sumsq;
    gsl_fit_linear(n.data(), 1, t.data(), 1, m, &c0, &c1, &cov00, &cov01, &cov11, &sumsq);
    double mean = 0;
    for (double v : t) {
        mean += v / double(m);
    }
    double total = 0;
    for (double v : t) {
        total += (v - mean) * (v - mean);
    }
    fit.intercept = c0;
    fit.slope = c1;
    fit.r_squared = total > 0 ? 1 - sumsq / total : 1;

    auto residual = [&](double alpha) {
        std::vector<double> x(m);
        for (std::size_t i = 0; i < m; ++i) {
            x[i] = std::pow(n[i], alpha);
        }
        double a, b, v00, v01, v11, ss;
        gsl_fit_linear(x.data(), 1, t.data(), 1, m, &a, &b, &v00, &v01, &v11, &ss);
        return ss;
    };
    // Coarse scan, then golden-section refinement around the best grid point.
    double best = 1, best_ss = residual(1);
    for (double a = 0.1; a <= 4.0 + 1e-9; a += 0.01) {
        double ss = residual(a);
        if (ss < best_ss) {
            best_ss = ss;
            best = a;
        }
    }
    double lo = best - 0.01, hi = best + 0.01;
    const double g = (std::sqrt(5.0) - 1) / 2;
    for (int it = 0; it < 60; ++it) {
        double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
        if (residual(x1) < residual(x2)) {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    fit.exponent = (lo + hi) / 2;
    return fit;
}

TimingReport run_timing(const ExperimentConfig &cfg) {
    if (cfg.kind != ExperimentKind::Timing) {
        throw ConfigError("run_timing needs kind timing");
    }
    cfg.validate();
    TimingReport report;
    IsingParams p = cfg.ising;
    p.beta = cfg.betas.front();
    DecoderConfig dc;
    dc.chi = cfg.chi;
    dc.norm = cfg.norm;
    std::vector<double> ns, ts;
    for (std::size_t d : cfg.sizes) {
        const auto t0 = Clock::now();
        Lattice lat = Lattice::build(d, d);
        CodeNetwork base(lat, cbf_network_factors(p, lat));
        CbfSampler sampler(p, lat);
        std::mt19937_64 rng = derived_rng(cfg.seed, {4, d});
        SpinConfig sigma(lat.num_qubits(), 1);
        for (std::size_t k = 0; k < cfg.mcmc.burn_in_sweeps; ++k) {
            sampler.sweep(sigma, rng);
        }
        std::vector<double> times;
        std::size_t errors = 0;
        // Decodes run one at a time so wall times are not inflated by contention.
        for (std::size_t i = 0; i < cfg.samples; ++i) {
            for (std::size_t k = 0; k < cfg.mcmc.thin_sweeps; ++k) {
                sampler.sweep(sigma, rng);
            }
            Syndrome s = syndrome_of(frame_from_spins(sigma), lat);
            const auto d0 = Clock::now();
            try {
                decode(s, base, dc);
                times.push_back(seconds_since(d0));
            } catch (const Error &) {
                ++errors;
            }
        }
        ResultRow r = mean_row(times, cfg.samples);
        echo_config(r, cfg, d, d);
        r.decoder = "tn";
        r.metric = "decode-seconds";
        r.parameter_name = "beta";
        r.parameter = p.beta;
        r.decode_errors = errors;
        r.wall_seconds = seconds_since(t0);
        report.rows.push_back(r);
        ns.push_back(double(lat.num_qubits()));
        ts.push_back(r.value);
    }
    if (ns.size() >= 3) {
        report.fit = fit_scaling(ns, ts);
        for (auto [metric, value] : {std::pair{"fit-r-squared", report.fit.r_squared},
                                     std::pair{"fit-exponent", report.fit.exponent}}) {
            ResultRow r;
            echo_config(r, cfg, 0, 0);
            r.decoder = "tn";
            r.metric = metric;
            r.parameter_name = "beta";
            r.parameter = p.beta;
            r.samples = cfg.samples;
            r.value = r.lower = r.upper = value;
            r.count = ns.size();
            report.rows.push_back(r);
        }
    }
    return report;
}

CheckResult check_dense_choi(double gamma, std::size_t chi, double tol) {
    Lattice lat = Lattice::build(3, 3);
    KrausChannel k = amplitude_damping(gamma);
    CodeNetwork base(lat, iid_network_factors(k, lat));
    DenseSimulator sim(lat, k);
    DecoderConfig cfg;
    cfg.chi = chi;
    double worst = 0;
    std::uint64_t worst_key = 0;
    for (std::uint64_t key = 0; key < (std::uint64_t(1) << lat.num_checks()); ++key) {
        Syndrome s = Syndrome::from_key(key, lat);
        LogicalChoi dense = sim.logical_channel(s).choi;
        LogicalChoi tn = logical_choi(base.with_syndrome(s, recovery_frame(s, lat)), cfg);
        Mat4 a = dense.c * std::exp(dense.log_scale), b = tn.c * std::exp(tn.log_scale);
        double scale = a.cwiseAbs().maxCoeff();
        double dev = scale > 0 ? (a - b).cwiseAbs().maxCoeff() / scale : b.cwiseAbs().maxCoeff();
        if (!(dev <= worst)) {
            worst = std::isnan(dev) ? INFINITY : dev;
            worst_key = key;
        }
    }
    CheckResult c = make_check("dense-choi " + param_label("gamma", gamma), worst, tol);
    c.detail = "worst syndrome key " + std::to_string(worst_key);
    return c;
}

CheckResult check_bond_cap_selection(double gamma, std::size_t chi, Norm norm, double tol) {
    Lattice lat = Lattice::build(3, 3);
    KrausChannel k = amplitude_damping(gamma);
    CodeNetwork base(lat, iid_network_factors(k, lat));
    DenseSimulator sim(lat, k);
    DecoderConfig cfg;
    cfg.chi = chi;
    cfg.norm = norm;
    double mass = 0;
    std::size_t differ = 0;
    for (std::uint64_t key = 0; key < (std::uint64_t(1) << lat.num_checks()); ++key) {
        Syndrome s = Syndrome::from_key(key, lat);
        double p = sim.logical_channel(s).probability;
        if (p <= 0) {
            continue;
        }
        Logical best = optimal_decode_dense(s, sim, norm, cfg.diamond);
        bool same = false;
        try {
            same = decode(s, base, cfg).correction == best;
        } catch (const ZeroProbabilityError &) {
        }
        if (!same) {
            mass += p;
            ++differ;
        }
    }
    CheckResult c = make_check("bond-cap-selection " + param_label("gamma", gamma), mass, tol);
    c.detail = std::to_string(differ) + " syndromes differ";
    return c;
}

CheckResult check_cbf_ml_agreement(const IsingParams &p, std::size_t chi) {
    Lattice lat = Lattice::build(3, 3);
    CbfMlTable table(p, lat);
    CodeNetwork base(lat, cbf_network_factors(p, lat));
    DecoderConfig cfg;
    cfg.chi = chi;
    auto keys = table.reachable();
    std::size_t differ = 0;
    for (auto key : keys) {
        Syndrome s = Syndrome::from_key(key, lat);
        bool same = false;
        try {
            same = decode(s, base, cfg).correction == table.decode(s);
        } catch (const ZeroProbabilityError &) {
        }
        differ += !same;
    }
    CheckResult c = make_check("cbf-ml-agreement " + param_label("beta", p.beta),
                               keys.empty() ? 1.0 : double(differ) / double(keys.size()), 0, false);
    c.detail = std::to_string(keys.size() - differ) + "/" + std::to_string(keys.size()) + " reachable syndromes agree";
    return c;
}

CheckResult check_j2_irrelevance(const IsingParams &p, double tol) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams flat = p;
    flat.j2 = 0;
    CbfMlTable a(p, lat), b(flat, lat);
    double worst = 0;
    for (auto key : a.reachable()) {
        Syndrome s = Syndrome::from_key(key, lat);
        auto ca = a.conditional(s), cb = b.conditional(s);
        for (std::size_t i = 0; i < ca.size(); ++i) {
            worst = std::max(worst, std::abs(ca[i] - cb[i]));
        }
    }
    return make_check("j2-irrelevance " + param_label("j2", p.j2), worst, tol);
}

CheckResult check_mwpm_optimality() {
    Lattice lat = Lattice::build(3, 3);
    const std::size_t n = lat.num_qubits();
    std::map<std::uint64_t, std::size_t> min_x, min_z;
    for (std::uint64_t m = 0; m < (std::uint64_t(1) << n); ++m) {
        PauliFrame fx(n), fz(n);
        for (std::size_t q = 0; q < n; ++q) {
            fx.x[q] = fz.z[q] = (m >> q) & 1;
        }
        std::size_t w = std::size_t(std::popcount(m));
        auto kx = syndrome_of(fx, lat).key(), kz = syndrome_of(fz, lat).key();
        if (!min_x.count(kx) || w < min_x[kx]) {
            min_x[kx] = w;
        }
        if (!min_z.count(kz) || w < min_z[kz]) {
            min_z[kz] = w;
        }
    }
    double excess = 0;
    std::size_t bad = 0;
    const std::uint64_t total = std::uint64_t(1) << lat.num_checks();
    for (std::uint64_t key = 0; key < total; ++key) {
        Syndrome s = Syndrome::from_key(key, lat);
        MatchingResult mr = mwpm_match(s, lat);
        Syndrome sx = Syndrome::trivial(lat), sz = Syndrome::trivial(lat);
        for (std::size_t f = 0; f < lat.num_checks(); ++f) {
            (lat.faces()[f].type == CheckType::Z ? sx : sz).set_outcome(f, s.outcome(f));
        }
        double e = double(mr.frame.x_weight()) - double(min_x.at(sx.key())) + double(mr.frame.z_weight()) -
                   double(min_z.at(sz.key()));
        bool reproduces = syndrome_of(mr.frame, lat).key() == key;
        if (e != 0 || !reproduces) {
            ++bad;
        }
        excess = std::max(excess, reproduces ? std::abs(e) : INFINITY);
    }
    CheckResult c = make_check("mwpm-optimality", excess, 0, false);
    c.detail = std::to_string(total - bad) + "/" + std::to_string(total) + " syndromes at minimum weight";
    return c;
}

CheckResult check_mcmc_distribution(const IsingParams &p, std::size_t samples, std::uint64_t seed, double z_max) {
    Lattice lat = Lattice::build(3, 3);
    CbfDistribution dist = cbf_exact_distribution(p, lat);
    auto bin_of = [&](const SpinConfig &sigma) {
        PauliFrame e = frame_from_spins(sigma);
        Syndrome s = syndrome_of(e, lat);
        PauliFrame rel = e;
        rel ^= recovery_frame(s, lat);
        return std::pair{s.key(), int(homology_class(rel, lat))};
    };
    std::map<std::pair<std::uint64_t, int>, double> expected;
    for (std::uint64_t k = 0; k < dist.probabilities.size(); ++k) {
        expected[bin_of(CbfDistribution::config(k, lat.num_qubits()))] += dist.probabilities[k];
    }
    std::map<std::pair<std::uint64_t, int>, std::size_t> counts;
    for (std::size_t i = 0; i < samples; ++i) {
        std::mt19937_64 rng = derived_rng(seed, {3, i});
        ++counts[bin_of(cbf_mcmc_sample(p, lat, 100, rng()))];
    }
    double worst = 0;
    const double n = double(samples);
    for (const auto &[bin, c] : counts) {
        if (!expected.count(bin)) {
            worst = INFINITY;
        }
    }
    // Bins expecting fewer than five samples are pooled; their z-scores are far from normal.
    auto z_score = [&](double c, double q) {
        double sd = std::sqrt(n * q * (1 - q));
        return sd > 0 ? std::abs(c - n * q) / sd : 0.0;
    };
    double rare_q = 0, rare_c = 0;
    std::size_t tested = 0;
    for (const auto &[bin, q] : expected) {
        double c = counts.count(bin) ? double(counts[bin]) : 0;
        if (n * q < 5) {
            rare_q += q;
            rare_c += c;
            continue;
        }
        worst = std::max(worst, z_score(c, q));
        ++tested;
    }
    if (rare_q > 0) {
        worst = std::max(worst, z_score(rare_c, rare_q));
        ++tested;
    }
    CheckResult r = make_check("mcmc-vs-exact " + param_label("beta", p.beta), worst, z_max, false);
    r.detail = std::to_string(tested) + " (syndrome, class) bins, " + std::to_string(samples) + " samples";
    return r;
}

CheckResult check_network_factors(const IsingParams &p, double tol) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams flat = p;
    flat.j2 = 0;
    NoiseNetworkFactor f = cbf_network_factors(flat, lat);
    CbfDistribution dist = cbf_exact_distribution(flat, lat);
    const std::size_t n = lat.num_qubits();
    std::vector<int> ident(n, 0);
    const double z = std::exp(dist.log_partition);
    cplx norm = network_entry(f, ident);
    double worst = std::abs(norm / z - 1.0);
    for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
        double expected = 0;
        for (std::uint64_t k = 0; k < dist.probabilities.size(); ++k) {
            expected += dist.probabilities[k] * (std::popcount(k & mask) % 2 ? -1 : 1);
        }
        std::vector<int> s(n);
        for (std::size_t q = 0; q < n; ++q) {
            s[q] = (mask >> q) & 1 ? 3 : 0;
        }
        worst = std::max(worst, std::abs(network_entry(f, s) / norm - expected));
    }
    return make_check("network-factors-ptm " + param_label("beta", p.beta), worst, tol);
}

CheckResult check_probability_sum(double gamma, double tol) {
    Lattice lat = Lattice::build(3, 3);
    DenseSimulator sim(lat, amplitude_damping(gamma));
    double total = 0;
    for (std::uint64_t key = 0; key < (std::uint64_t(1) << lat.num_checks()); ++key) {
        total += sim.logical_channel(Syndrome::from_key(key, lat)).probability;
    }
    return make_check("probability-sum " + param_label("gamma", gamma), std::abs(total - 1), tol);
}

bool OracleReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

OracleReport run_oracle_check(const ExperimentConfig &cfg) {
    if (cfg.kind != ExperimentKind::OracleCheck) {
        throw ConfigError("run_oracle_check needs kind oracle-check");
    }
    cfg.validate();
    OracleReport report;
    for (double g : cfg.gammas) {
        report.checks.push_back(check_dense_choi(g, cfg.chi, 1e-8));
    }
    for (double b : cfg.betas) {
        IsingParams p = cfg.ising;
        p.beta = b;
        report.checks.push_back(check_cbf_ml_agreement(p, cfg.chi));
    }
    IsingParams p = cfg.ising;
    p.beta = cfg.betas.empty() ? 1.0 : cfg.betas.front();
    report.checks.push_back(check_j2_irrelevance(p, 1e-12));
    report.checks.push_back(check_mwpm_optimality());
    report.checks.push_back(check_mcmc_distribution(p, cfg.samples, cfg.seed, 3.0));
    report.checks.push_back(check_network_factors(p, 1e-10));
    if (!cfg.gammas.empty()) {
        report.checks.push_back(check_probability_sum(cfg.gammas.front(), 1e-12));
    }
    return report;
}

Format format_from_string(const std::string &name) {
    if (name == "csv") {
        return Format::Csv;
    }
    if (name == "json") {
        return Format::Json;
    }
    throw ConfigError("unknown format '" + name + "'");
}

std::string format_results(const std::vector<ResultRow> &rows, Format format, const json &metadata) {
    if (format == Format::Json) {
        json rs = json::array();
        for (const auto &r : rows) {
            rs.push_back(row_to_json(r));
        }
        json doc = {{"metadata", metadata}, {"columns", result_columns()}, {"rows", rs}};
        return doc.dump(2) + "\n";
    }
    std::ostringstream out;
    if (metadata.is_object()) {
        for (auto it = metadata.begin(); it != metadata.end(); ++it) {
            out << "# " << it.key() << ": " << it.value().dump() << "\n";
        }
    }
    const auto &cols = result_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) {
        out << (i ? "," : "") << cols[i];
    }
    out << "\n";
    for (const auto &r : rows) {
        auto fields = row_fields(r);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            out << (i ? "," : "") << csv_field(fields[i]);
        }
        out << "\n";
    }
    return out.str();
}

void emit_results(const std::vector<ResultRow> &rows, const std::string &path, Format format, const json &metadata) {
    std::string text = format_results(rows, format, metadata);
    if (path.empty() || path == "-") {
        std::cout << text << std::flush;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("failed writing '" + path + "'");
    }
}

std::vector<ResultRow> parse_results_json(const std::string &text) {
    std::vector<ResultRow> rows;
    json doc;
    try {
        doc = json::parse(text);
        for (const auto &j : doc.at("rows")) {
            ResultRow r;
            r.kind = j.at("kind").get<std::string>();
            r.decoder = j.at("decoder").get<std::string>();
            r.metric = j.at("metric").get<std::string>();
            r.width = j.at("width").get<std::size_t>();
            r.height = j.at("height").get<std::size_t>();
            r.parameter_name = j.at("parameter_name").get<std::string>();
            r.parameter = j.at("parameter").get<double>();
            r.chi = j.at("chi").get<std::size_t>();
            r.norm = j.at("norm").get<std::string>();
            r.samples = j.at("samples").get<std::size_t>();
            r.seed = j.at("seed").get<std::uint64_t>();
            r.value = j.at("value").get<double>();
            r.half_width = j.at("half_width").get<double>();
            r.lower = j.at("lower").get<double>();
            r.upper = j.at("upper").get<double>();
            r.count = j.at("count").get<std::size_t>();
            r.decode_errors = j.at("decode_errors").get<std::size_t>();
            r.wall_seconds = j.at("wall_seconds").get<double>();
            r.note = j.at("note").get<std::string>();
            rows.push_back(std::move(r));
        }
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed results document: ") + e.what());
    }
    return rows;
}

json report_to_json(const OracleReport &report) {
    json checks = json::array();
    for (const auto &c : report.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"deviation", round12(c.deviation)},
                          {"tolerance", round12(c.tolerance)},
                          {"detail", c.detail}});
    }
    return {{"passed", report.passed()}, {"checks", checks}};
}

DecodeRequest DecodeRequest::from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("decode request must be a JSON object");
    }
    static const std::vector<std::string> known = {"width", "height", "syndrome", "chi", "norm", "noise"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw ConfigError("unknown request field '" + it.key() + "'");
        }
    }
    for (const char *key : {"width", "height", "syndrome", "noise"}) {
        if (!j.contains(key)) {
            throw ConfigError(std::string("request field '") + key + "' is required");
        }
    }
    DecodeRequest r;
    for (const char *key : {"width", "height"}) {
        if (!j.at(key).is_number_integer() || j.at(key).get<long long>() < 2) {
            throw ConfigError(std::string("request field '") + key + "' must be an integer >= 2");
        }
    }
    r.width = get_field<std::size_t>(j, "width");
    r.height = get_field<std::size_t>(j, "height");
    r.syndrome = get_field<std::string>(j, "syndrome");
    if (j.contains("chi")) {
        r.chi = chi_field(j.at("chi"));
    }
    if (j.contains("norm")) {
        r.norm = norm_from_string(get_field<std::string>(j, "norm"));
    }
    const json &n = j.at("noise");
    if (!n.is_object() || !n.contains("model")) {
        throw ConfigError("request field 'noise' must be an object with a 'model'");
    }
    r.model = get_field<std::string>(n, "model");
    std::vector<std::string> fields;
    if (r.model == "amplitude-damping") {
        fields = {"model", "gamma"};
        r.gamma = get_field<double>(n, "gamma");
        if (!(r.gamma >= 0 && r.gamma <= 1)) {
            throw ConfigError("gamma must lie in [0, 1]");
        }
    } else if (r.model == "cbf") {
        fields = {"model", "beta", "h", "j1", "j2"};
        r.ising.beta = get_field<double>(n, "beta");
        if (n.contains("h")) {
            r.ising.h = get_field<double>(n, "h");
        }
        if (n.contains("j1")) {
            r.ising.j1 = get_field<double>(n, "j1");
        }
        if (n.contains("j2")) {
            r.ising.j2 = get_field<double>(n, "j2");
        }
        try {
            r.ising.validate();
        } catch (const DomainError &e) {
            throw ConfigError(e.what());
        }
    } else if (r.model == "pauli") {
        fields = {"model", "probabilities"};
        auto p = get_field<std::vector<double>>(n, "probabilities");
        double total = 0;
        for (double v : p) {
            if (!(v >= 0)) {
                throw ConfigError("Pauli probabilities must be non-negative");
            }
            total += v;
        }
        if (p.size() != 4 || std::abs(total - 1) > 1e-12) {
            throw ConfigError("Pauli probabilities must be four values summing to 1");
        }
        std::copy(p.begin(), p.end(), r.probabilities.begin());
    } else {
        throw ConfigError("unknown noise model '" + r.model + "'");
    }
    for (auto it = n.begin(); it != n.end(); ++it) {
        if (std::find(fields.begin(), fields.end(), it.key()) == fields.end()) {
            throw ConfigError("unknown noise field '" + it.key() + "'");
        }
    }
    return r;
}

DecodeRequest DecodeRequest::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read request file '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ConfigError("request file '" + path + "' is not valid JSON: " + e.what());
    }
    return from_json(j);
}

json DecodeRequest::to_json() const {
    json noise = {{"model", model}};
    if (model == "amplitude-damping") {
        noise["gamma"] = gamma;
    } else if (model == "cbf") {
        noise.update({{"beta", ising.beta}, {"h", ising.h}, {"j1", ising.j1}, {"j2", ising.j2}});
    } else {
        noise["probabilities"] = probabilities;
    }
    json j = {{"width", width}, {"height", height}, {"syndrome", syndrome}, {"norm", to_string(norm)},
              {"noise", noise}};
    if (chi == kUnboundedBond) {
        j["chi"] = "exact";
    } else {
        j["chi"] = chi;
    }
    return j;
}

json run_decode_request(const DecodeRequest &req, std::uint64_t seed) {
    Lattice lat = Lattice::build(req.width, req.height);
    if (req.syndrome.size() != lat.num_checks()) {
        throw ConfigError("syndrome has " + std::to_string(req.syndrome.size()) + " characters, the lattice has " +
                          std::to_string(lat.num_checks()) + " checks");
    }
    Syndrome s = Syndrome::trivial(lat);
    for (std::size_t k = 0; k < req.syndrome.size(); ++k) {
        char c = req.syndrome[k];
        if (c != '0' && c != '1') {
            throw ConfigError("syndrome characters must be '0' or '1'");
        }
        s.set_outcome(k, c == '1' ? -1 : 1);
    }
    NoiseNetworkFactor noise;
    if (req.model == "amplitude-damping") {
        noise = iid_network_factors(amplitude_damping(req.gamma), lat);
    } else if (req.model == "cbf") {
        noise = cbf_network_factors(req.ising, lat);
    } else {
        Eigen::Vector4d p(req.probabilities[0], req.probabilities[1], req.probabilities[2], req.probabilities[3]);
        noise = iid_network_factors(QubitChannel::pauli_channel(p), lat);
    }
    DecoderConfig cfg;
    cfg.chi = req.chi;
    cfg.norm = req.norm;
    cfg.diamond.seed = seed;
    DecodeResult res = decode(s, noise, lat, cfg);
    json ptm = json::array();
    for (int i = 0; i < 4; ++i) {
        json row = json::array();
        for (int k = 0; k < 4; ++k) {
            row.push_back(round12(res.channel.ptm()(i, k)));
        }
        ptm.push_back(row);
    }
    const DiamondOptions &dopt = cfg.diamond;
    json out = {{"request", req.to_json()},
                {"seed", seed},
                {"correction", std::string(1, pauli_char(res.correction))},
                {"mwpm_correction", std::string(1, pauli_char(mwpm_decode(s, lat)))},
                {"log_probability", round12(res.log_probability)},
                {"ptm", ptm},
                {"truncation_error", round12(res.truncation_error)},
                {"wall_seconds", round12(res.wall_seconds)}};
    json distances = json::object();
    for (int l = 0; l < 4; ++l) {
        distances[std::string(1, pauli_char(Pauli(l)))] = {
            {"trace", round12(correction_error(res.channel, Pauli(l), Norm::Trace, dopt))},
            {"diamond", round12(correction_error(res.channel, Pauli(l), Norm::Diamond, dopt))}};
    }
    out["distances"] = distances;
    return out;
}

}  // namespace tnqec
