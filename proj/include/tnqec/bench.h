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


#ifndef TNQEC_BENCH_H
#define TNQEC_BENCH_H

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "tnqec/baselines.h"
#include "tnqec/tn_decoder.h"

namespace tnqec {

enum class ExperimentKind { AdSweep, AdSizeSweep, CbfSweep, OracleCheck, Timing };

std::string to_string(ExperimentKind kind);
/// Throws ConfigError for unknown names.
ExperimentKind experiment_kind_from_string(const std::string &name);
std::string to_string(Norm norm);
Norm norm_from_string(const std::string &name);

struct McmcSettings {
    std::size_t burn_in_sweeps = 100;
    std::size_t thin_sweeps = 10;
    /// Samples drawn from one chain before a fresh chain is seeded.
    std::size_t block = 100;
    /// Chains start from all spins up; otherwise from a uniformly random configuration.
    bool ordered_start = true;
};

struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::CbfSweep;
    /// W for the amplitude damping sweeps (lattice 2W-1 wide, W high), d otherwise.
    std::vector<std::size_t> sizes;
    std::vector<double> gammas;
    /// J1, J2 and h of the correlated bit-flip model; beta comes from `betas`.
    IsingParams ising;
    std::vector<double> betas;
    std::size_t chi = 8;
    Norm norm = Norm::Diamond;
    std::size_t samples = 12000;
    std::uint64_t seed = 1;
    std::string output;
    std::size_t workers = 1;
    McmcSettings mcmc;

    /// Defaults for the given kind; every field is explicit in to_json().
    static ExperimentConfig defaults(ExperimentKind kind);
    /// Missing keys take the kind's defaults. "chi" may be "exact"; "inverse_betas"
    /// may replace "betas". Throws ConfigError for unknown keys or bad values.
    static ExperimentConfig from_json(const nlohmann::json &j);
    static ExperimentConfig load(const std::string &path);
    nlohmann::json to_json() const;
    /// Throws ConfigError when a field is outside its domain.
    void validate() const;
};

struct ResultRow {
    std::string kind;
    std::string decoder;
    std::string metric;
    std::size_t width = 0;
    std::size_t height = 0;
    std::string parameter_name;
    double parameter = 0;
    std::size_t chi = 0;
    std::string norm;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double value = 0;
    /// 95% half-width: Wilson for rates, z times the standard error for means.
    double half_width = 0;
    double lower = 0;
    double upper = 0;
    /// Failures for rates, contributing samples for means.
    std::size_t count = 0;
    std::size_t decode_errors = 0;
    double wall_seconds = 0;
    std::string note;

    bool operator==(const ResultRow &) const = default;
};

/// Column order of emitted results.
const std::vector<std::string> &result_columns();

struct Interval {
    double lower = 0;
    double upper = 0;
    double half_width() const {
        return (upper - lower) / 2;
    }
};

/// Two-sided 95% normal quantile.
double z95();
/// Wilson score interval for k successes in n trials.
Interval wilson_interval(std::size_t k, std::size_t n, double z = z95());

struct MeanEstimate {
    double mean = 0;
    double standard_error = 0;
};
MeanEstimate mean_estimate(const std::vector<double> &values);

/// Reproducible generator for a seed and a tuple of stream indices.
std::mt19937_64 derived_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> stream);

/// Runs fn(task) for task in [0, n) on `workers` threads. Exceptions are rethrown.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)> &fn);

/// Logical error rates of the tensor network and matching decoders per (d, beta).
std::vector<ResultRow> run_cbf_benchmark(const ExperimentConfig &cfg);

/// Mean diamond distance of the corrected logical channel for the tn, optimal and
/// mwpm corrections per (W, gamma). Syndromes come from the exact chain-rule sampler.
std::vector<ResultRow> run_ad_benchmark(const ExperimentConfig &cfg);

struct ScalingFit {
    double intercept = 0;
    double slope = 0;
    /// Coefficient of determination of the affine fit t = a + b N.
    double r_squared = 0;
    /// alpha of the least-squares fit t = a + b N^alpha.
    double exponent = 0;
};
ScalingFit fit_scaling(const std::vector<double> &n, const std::vector<double> &t);

struct TimingReport {
    std::vector<ResultRow> rows;
    ScalingFit fit;
};

/// Mean chi-capped decode time on correlated bit-flip syndromes per size.
TimingReport run_timing(const ExperimentConfig &cfg);

struct CheckResult {
    std::string name;
    bool passed = false;
    double deviation = 0;
    double tolerance = 0;
    std::string detail;
};

struct OracleReport {
    std::vector<CheckResult> checks;
    bool passed() const;
};

/// Exact tensor network C_ij against the dense oracle on all d = 3 syndromes; the
/// deviation is max |dC| / max |C| over syndromes.
CheckResult check_dense_choi(double gamma, std::size_t chi, double tol);
/// Probability mass of d = 3 syndromes where the chi-capped choice differs from
/// optimal_decode_dense.
CheckResult check_bond_cap_selection(double gamma, std::size_t chi, Norm norm, double tol);
/// Fraction of reachable d = 3 syndromes where the decoder disagrees with exact ML.
CheckResult check_cbf_ml_agreement(const IsingParams &p, std::size_t chi);
/// Largest |p(sigma|s; J2) - p(sigma|s; 0)| at d = 3.
CheckResult check_j2_irrelevance(const IsingParams &p, double tol);
/// Largest excess of the matching frame weight over the exhaustive minimum at d = 3.
CheckResult check_mwpm_optimality();
/// Largest |z-score| of MCMC (syndrome, class) frequencies against enumeration at d = 3.
CheckResult check_mcmc_distribution(const IsingParams &p, std::size_t samples, std::uint64_t seed, double z_max);
/// Largest deviation of the factor network's Pauli diagonal from enumeration at d = 3,
/// relative to the all-identity entry.
CheckResult check_network_factors(const IsingParams &p, double tol);
/// |sum_s p(s) - 1| for the dense amplitude damping pipeline at d = 3.
CheckResult check_probability_sum(double gamma, double tol);

/// The d = 3 suites: dense Choi equality per gamma, ML agreement per beta, matching
/// optimality and the distribution checks. cfg.chi selects the bond cap under test.
OracleReport run_oracle_check(const ExperimentConfig &cfg);

enum class Format { Csv, Json };
Format format_from_string(const std::string &name);

/// Rows with the metadata as comment lines (csv) or a metadata object (json); floats
/// carry 12 significant digits.
std::string format_results(const std::vector<ResultRow> &rows, Format format, const nlohmann::json &metadata);
/// Writes to `path`, or stdout for "-". Throws IoError when the file cannot be written.
void emit_results(const std::vector<ResultRow> &rows, const std::string &path, Format format,
                  const nlohmann::json &metadata);
std::vector<ResultRow> parse_results_json(const std::string &text);
nlohmann::json report_to_json(const OracleReport &report);

/// One syndrome to decode, read from a JSON document:
///   {"width": 3, "height": 3, "syndrome": "01000000", "chi": 8 | "exact",
///    "norm": "diamond" | "trace", "noise": {...}}
/// with noise one of {"model": "amplitude-damping", "gamma": g},
/// {"model": "cbf", "beta": b, "h": h, "j1": j1, "j2": j2} or
/// {"model": "pauli", "probabilities": [pI, pX, pY, pZ]}. Syndrome characters are '0'/'1'
/// per face in lattice face order (X faces first).
struct DecodeRequest {
    std::size_t width = 3;
    std::size_t height = 3;
    std::string model = "amplitude-damping";
    double gamma = 0;
    IsingParams ising;
    std::array<double, 4> probabilities{1, 0, 0, 0};
    std::string syndrome;
    std::size_t chi = 8;
    Norm norm = Norm::Diamond;

    /// Throws ConfigError for malformed or out-of-range fields.
    static DecodeRequest from_json(const nlohmann::json &j);
    static DecodeRequest load(const std::string &path);
    nlohmann::json to_json() const;
};

/// Decodes the request with the tensor-network decoder and reports the correction, the
/// normalized logical channel, its distances from the identity and the matching decoder's
/// choice for comparison.
nlohmann::json run_decode_request(const DecodeRequest &req, std::uint64_t seed);

}  // namespace tnqec

#endif
