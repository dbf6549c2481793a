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

#include "tnqec/tn_decoder.h"

#include <gtest/gtest.h>

#include <cmath>

#include "tnqec/baselines.h"
#include "tnqec/errors.h"

using namespace tnqec;

namespace {

DecoderConfig exact_config() {
    DecoderConfig cfg;
    cfg.chi = kUnboundedBond;
    cfg.norm = Norm::Trace;
    cfg.zero_floor = 1e-13;
    return cfg;
}

cplx entry(const LogicalChoi &lc, int i, int j) {
    return lc.c(i, j) * std::exp(lc.log_scale);
}

double max_relative_gap(const LogicalChoi &a, const LogicalChoi &b) {
    double scale = 0, gap = 0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            scale = std::max(scale, std::abs(entry(b, i, j)));
            gap = std::max(gap, std::abs(entry(a, i, j) - entry(b, i, j)));
        }
    }
    return scale == 0 ? gap : gap / scale;
}

KrausChannel single_pauli(Pauli p) {
    return KrausChannel::unitary(pauli_matrix(p));
}

// Z flips with probability p.
KrausChannel phase_flip(double p) {
    return {{std::sqrt(1 - p) * pauli_matrix(Pauli::I), std::sqrt(p) * pauli_matrix(Pauli::Z)}};
}

}  // namespace

TEST(tn_decoder, identity_noise_trace_of_code_projector) {
    Lattice lat = Lattice::build(3, 3);
    CodeNetwork net(lat, iid_network_factors(KrausChannel::identity(), lat));
    LogicalChoi lc = logical_choi(net, exact_config());
    EXPECT_NEAR(entry(lc, 0, 0).real(), 2.0, 1e-10);

    DenseSimulator dense(lat, KrausChannel::identity());
    std::vector<int> unmeasured(lat.num_checks(), 0);
    EXPECT_NEAR(dense.outcome_probability(unmeasured) * 2, 2.0, 1e-10);
}

TEST(tn_decoder, identity_noise_gives_identity_logical_channel) {
    Lattice lat = Lattice::build(3, 3);
    CodeNetwork base(lat, iid_network_factors(KrausChannel::identity(), lat));
    Syndrome s = Syndrome::trivial(lat);
    DecodeResult r = decode(s, base, exact_config());
    EXPECT_EQ(r.correction, Logical::I);
    EXPECT_TRUE(r.channel.ptm().isApprox(Ptm::Identity(), 1e-12));
    EXPECT_NEAR(std::exp(r.log_probability), 1.0, 1e-10);
}

TEST(tn_decoder, amplitude_damping_preserves_trace) {
    Lattice lat = Lattice::build(3, 3);
    CodeNetwork net(lat, iid_network_factors(amplitude_damping(0.2), lat));
    EXPECT_FALSE(net.pauli_diagonal());
    LogicalChoi lc = logical_choi(net, exact_config());
    EXPECT_NEAR(entry(lc, 0, 0).real(), 2.0, 1e-10);
    EXPECT_NEAR(entry(lc, 0, 0).imag(), 0.0, 1e-10);
}

TEST(tn_decoder, correlated_bit_flip_network_matches_partition_function) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams p{1.0, 0.01, 1.0, 0.0};
    CodeNetwork net(lat, cbf_network_factors(p, lat));
    EXPECT_TRUE(net.pauli_diagonal());
    LogicalChoi lc = logical_choi(net, exact_config());
    double log_value = std::log(lc.c(0, 0).real()) + lc.log_scale;
    double log_expected = std::log(2.0) + cbf_exact_distribution(p, lat).log_partition;
    EXPECT_NEAR(log_value, log_expected, 1e-10);
}

TEST(tn_decoder, matches_dense_oracle_for_amplitude_damping_on_every_syndrome) {
    Lattice lat = Lattice::build(3, 3);
    KrausChannel ad = amplitude_damping(0.2);
    DenseSimulator dense(lat, ad);
    CodeNetwork base(lat, iid_network_factors(ad, lat));
    double worst = 0, total = 0;
    for (std::uint64_t key = 0; key < (1u << lat.num_checks()); ++key) {
        Syndrome s = Syndrome::from_key(key, lat);
        CodeNetwork net = base.with_syndrome(s, recovery_frame(s, lat));
        LogicalChoi tn = logical_choi(net, exact_config());
        auto ref = dense.logical_channel(s);
        worst = std::max(worst, max_relative_gap(tn, ref.choi));
        total += ref.probability;
    }
    EXPECT_LT(worst, 1e-8);
    EXPECT_NEAR(total, 1.0, 1e-12);
}

namespace {

// Identity noise everywhere except `channel` on site q.
NoiseNetworkFactor single_site_noise(const Lattice &lat, std::size_t q, const KrausChannel &channel) {
    NoiseNetworkFactor f = iid_network_factors(KrausChannel::identity(), lat);
    f.sites[q] = iid_network_factors(channel, lat).sites[q];
    return f;
}

double choi_min_eigenvalue(const QubitChannel &e) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(e.choi());
    return es.eigenvalues().minCoeff();
}

}  // namespace

TEST(tn_decoder, cached_sweeps_match_reference_contraction) {
    Lattice lat = Lattice::build(3, 3);
    CodeNetwork ad(lat, iid_network_factors(amplitude_damping(0.2), lat));
    for (std::uint64_t key : {0ull, 5ull, 77ull, 200ull}) {
        Syndrome s = Syndrome::from_key(key, lat);
        CodeNetwork net = ad.with_syndrome(s, recovery_frame(s, lat));
        for (std::size_t chi : {std::size_t(2), std::size_t(8), kUnboundedBond}) {
            DecoderConfig cfg = exact_config();
            cfg.chi = chi;
            EXPECT_LT(max_relative_gap(logical_choi(net, cfg), logical_choi_reference(net, cfg)), 1e-12);
        }
    }
    Lattice big = Lattice::build(5, 5);
    IsingParams p;
    CodeNetwork cbf(big, cbf_network_factors(p, big));
    for (std::uint64_t seed : {1, 2, 3}) {
        Syndrome s = syndrome_of(frame_from_spins(cbf_mcmc_sample(p, big, 50, seed)), big);
        CodeNetwork net = cbf.with_syndrome(s, recovery_frame(s, big));
        DecoderConfig cfg;
        EXPECT_LT(max_relative_gap(logical_choi(net, cfg), logical_choi_reference(net, cfg)), 1e-12);
    }
}

TEST(tn_decoder, deterministic_bit_flip_gives_its_homology_class) {
    Lattice lat = Lattice::build(3, 3);
    const std::size_t q = lat.site(1, 1);
    NoiseNetworkFactor noise = single_site_noise(lat, q, single_pauli(Pauli::X));
    CodeNetwork base(lat, noise);
    PauliFrame error(9);
    error.x[q] = 1;
    Syndrome expected = syndrome_of(error, lat);
    Logical cls = homology_class(error ^ recovery_frame(expected, lat), lat);
    for (std::uint64_t key = 0; key < 256; ++key) {
        Syndrome s = Syndrome::from_key(key, lat);
        LogicalChoi lc = logical_choi(base.with_syndrome(s, recovery_frame(s, lat)), exact_config());
        if (s == expected) {
            QubitChannel e = lc.normalized();
            EXPECT_TRUE(e.ptm().isApprox(QubitChannel::pauli_conjugation(cls).ptm(), 1e-12));
            EXPECT_EQ(decode(s, base, exact_config()).correction, cls);
        } else {
            EXPECT_LT(std::abs(entry(lc, 0, 0)), 1e-12);
        }
    }
}

TEST(tn_decoder, pure_phase_noise_never_flips_z_checks) {
    Lattice lat = Lattice::build(3, 3);
    CodeNetwork base(lat, iid_network_factors(phase_flip(0.1), lat));
    for (std::uint64_t key = 0; key < 256; ++key) {
        Syndrome s = Syndrome::from_key(key, lat);
        if (s.is_trivial() || std::count(s.z.begin(), s.z.end(), -1) == 0) {
            continue;
        }
        LogicalChoi lc = logical_choi(base.with_syndrome(s, recovery_frame(s, lat)), exact_config());
        EXPECT_LT(std::abs(entry(lc, 0, 0)), 1e-12);
        EXPECT_THROW(decode(s, base, exact_config()), ZeroProbabilityError);
    }
}

TEST(tn_decoder, normalized_channels_are_physical) {
    // Under amplitude damping the syndrome statistics depend on the logical state, so a
    // conditioned channel need not preserve trace; only the sum over syndromes does.
    Lattice lat = Lattice::build(3, 3);
    CodeNetwork base(lat, iid_network_factors(amplitude_damping(0.2), lat));
    Eigen::Matrix4cd total = Eigen::Matrix4cd::Zero();
    for (std::uint64_t key = 0; key < 256; ++key) {
        Syndrome s = Syndrome::from_key(key, lat);
        for (std::size_t chi : {std::size_t(8), kUnboundedBond}) {
            DecoderConfig cfg = exact_config();
            cfg.chi = chi;
            DecodeResult r = decode(s, base, cfg);
            double tol = std::max(1e-10, 10 * r.truncation_error);
            EXPECT_NEAR(r.channel.ptm()(0, 0), 1.0, 1e-12);
            EXPECT_LT(r.choi.max_imag_residual(), tol);
            EXPECT_GE(choi_min_eigenvalue(r.channel), -tol);
            if (chi == kUnboundedBond) {
                total += r.choi.c * std::exp(r.choi.log_scale);
            }
        }
    }
    Ptm average = (total / total(0, 0)).real();
    for (int j = 1; j < 4; ++j) {
        EXPECT_NEAR(average(0, j), 0.0, 1e-12);
    }

    Lattice big = Lattice::build(5, 5);
    IsingParams p;
    CodeNetwork cbf(big, cbf_network_factors(p, big));
    for (std::uint64_t seed : {11, 12, 13, 14}) {
        Syndrome s = syndrome_of(frame_from_spins(cbf_mcmc_sample(p, big, 50, seed)), big);
        DecodeResult r = decode(s, cbf, DecoderConfig{});
        double tol = std::max(1e-10, 10 * r.truncation_error);
        for (int j = 1; j < 4; ++j) {
            EXPECT_NEAR(r.channel.ptm()(0, j), 0.0, tol);
        }
        EXPECT_GE(choi_min_eigenvalue(r.channel), -tol);
    }
}

TEST(tn_decoder, agrees_with_exhaustive_maximum_likelihood) {
    Lattice lat = Lattice::build(3, 3);
    IsingParams p;
    CbfMlTable table(p, lat);
    CodeNetwork base(lat, cbf_network_factors(p, lat));
    DecoderConfig cfg;
    for (std::uint64_t key : table.reachable()) {
        Syndrome s = Syndrome::from_key(key, lat);
        EXPECT_EQ(decode(s, base, cfg).correction, table.decode(s)) << key;
    }
}

TEST(tn_decoder, pauli_coset_sums_match_dense_oracle_on_every_syndrome) {
    Lattice lat = Lattice::build(3, 3);
    KrausChannel k{{std::sqrt(0.85) * pauli_matrix(Pauli::I), std::sqrt(0.05) * pauli_matrix(Pauli::X),
                    std::sqrt(0.04) * pauli_matrix(Pauli::Y), std::sqrt(0.06) * pauli_matrix(Pauli::Z)}};
    DenseSimulator dense(lat, k);
    CodeNetwork base(lat, iid_network_factors(k, lat));
    EXPECT_FALSE(base.coset_sums());
    double worst = 0;
    for (std::uint64_t key = 0; key < (1u << lat.num_checks()); ++key) {
        Syndrome s = Syndrome::from_key(key, lat);
        CodeNetwork net = base.with_syndrome(s, recovery_frame(s, lat));
        ASSERT_TRUE(net.coset_sums());
        worst = std::max(worst, max_relative_gap(logical_choi(net, exact_config()), dense.logical_channel(s).choi));
    }
    EXPECT_LT(worst, 1e-10);
    EXPECT_FALSE(base.with_outcomes(std::vector<int>(lat.num_checks(), 1)).coset_sums());
}

TEST(tn_decoder, low_temperature_bit_flip_keeps_relative_precision) {
    // Atypical syndromes weigh e^-20 or less of the trivial one at beta = 3.
    Lattice lat = Lattice::build(3, 3);
    for (double beta : {3.0}) {
        IsingParams p;
        p.beta = beta;
        CbfMlTable table(p, lat);
        CodeNetwork base(lat, cbf_network_factors(p, lat));
        DecoderConfig cfg;
        for (std::uint64_t key : table.reachable()) {
            Syndrome s = Syndrome::from_key(key, lat);
            auto mass = table.class_mass(s);
            DecodeResult r = decode(s, base, cfg);
            EXPECT_EQ(r.correction, table.decode(s)) << beta << " " << key;
            EXPECT_NEAR(r.channel.ptm()(3, 3), (mass[0] - mass[1]) / (mass[0] + mass[1]), 1e-6) << beta << " " << key;
        }
    }
}

TEST(tn_decoder, decodes_sampled_syndromes_on_a_wide_lattice) {
    // Cuts crossing many flipped checks once drove the signed contraction to rounding dust.
    Lattice lat = Lattice::build(15, 15);
    IsingParams p;
    p.beta = 1 / 0.9;
    CodeNetwork base(lat, cbf_network_factors(p, lat));
    DecoderConfig cfg;
    for (std::uint64_t seed = 100; seed < 106; ++seed) {
        Syndrome s = syndrome_of(frame_from_spins(cbf_mcmc_sample(p, lat, 100, seed)), lat);
        DecodeResult r = decode(s, base, cfg);
        EXPECT_TRUE(std::isfinite(r.log_probability)) << seed;
        EXPECT_LE(std::abs(r.channel.ptm()(3, 3)), 1 + 1e-9) << seed;
    }
}

TEST(tn_decoder, chain_rule_sampler_matches_dense_distribution) {
    Lattice lat = Lattice::build(3, 3);
    KrausChannel ad = amplitude_damping(0.2);
    DenseSimulator dense(lat, ad);
    TnSyndromeSampler sampler(lat, iid_network_factors(ad, lat), exact_config());
    std::vector<double> exact(256);
    double worst = 0;
    for (std::uint64_t key = 0; key < 256; ++key) {
        Syndrome s = Syndrome::from_key(key, lat);
        exact[key] = dense.logical_channel(s).probability;
        worst = std::max(worst, std::abs(sampler.probability(s) - exact[key]));
    }
    EXPECT_LT(worst, 1e-12);

    const int draws = 100000;
    std::vector<int> counts(256, 0);
    std::mt19937_64 rng(5);
    for (int k = 0; k < draws; ++k) {
        counts[sampler.sample(rng).key()]++;
    }
    for (std::uint64_t key = 0; key < 256; ++key) {
        double mean = draws * exact[key];
        EXPECT_LE(std::abs(counts[key] - mean), 4 * std::sqrt(mean * (1 - exact[key])) + 1) << key;
    }
}

TEST(tn_decoder, selection_quality_improves_with_bond_cap) {
    Lattice lat = Lattice::build(3, 3);
    KrausChannel ad = amplitude_damping(0.2);
    DenseSimulator dense(lat, ad);
    CodeNetwork base(lat, iid_network_factors(ad, lat));
    std::vector<Logical> optimal(256);
    std::vector<double> prob(256);
    for (std::uint64_t key = 0; key < 256; ++key) {
        Syndrome s = Syndrome::from_key(key, lat);
        auto r = dense.logical_channel(s);
        prob[key] = r.probability;
        optimal[key] = select_correction(r.choi, Norm::Trace);
    }
    std::vector<double> disagreement;
    for (std::size_t chi : {1, 2, 4, 8}) {
        DecoderConfig cfg = exact_config();
        cfg.chi = chi;
        double mass = 0;
        for (std::uint64_t key = 0; key < 256; ++key) {
            Syndrome s = Syndrome::from_key(key, lat);
            try {
                if (decode(s, base, cfg).correction != optimal[key]) {
                    mass += prob[key];
                }
            } catch (const ZeroProbabilityError &) {
                // Heavy truncation can drive C_II negative; count it as a wrong selection.
                mass += prob[key];
            }
        }
        disagreement.push_back(mass);
    }
    for (std::size_t k = 1; k < disagreement.size(); ++k) {
        EXPECT_LE(disagreement[k], disagreement[k - 1] + 1e-12) << "chi index " << k;
    }
    EXPECT_LT(disagreement.back(), 0.01);
}

TEST(tn_decoder, bond_cap_eight_converged_on_correlated_noise) {
    Lattice lat = Lattice::build(5, 5);
    IsingParams p;
    p.beta = 1 / 0.9;
    CodeNetwork base(lat, cbf_network_factors(p, lat));
    DecoderConfig small, large;
    large.chi = 64;
    small.norm = large.norm = Norm::Trace;
    // A different choice costs the gap between the two class masses, |PTM_ZZ| of the
    // converged channel; disagreements are allowed only on near ties.
    const int total = 200;
    double regret = 0;
    for (int k = 0; k < total; ++k) {
        Syndrome s = syndrome_of(frame_from_spins(cbf_mcmc_sample(p, lat, 100, 7000 + k)), lat);
        DecodeResult a = decode(s, base, small), b = decode(s, base, large);
        if (a.correction != b.correction) {
            double gap = std::abs(b.channel.ptm()(3, 3));
            EXPECT_LT(gap, 0.05) << "sample " << k;
            regret += gap;
        }
    }
    EXPECT_LT(regret / total, 1e-3);
}

TEST(tn_decoder, rejects_bad_inputs) {
    Lattice lat = Lattice::build(3, 3);
    CodeNetwork base(lat, iid_network_factors(amplitude_damping(0.1), lat));
    Syndrome s = Syndrome::from_key(3, lat);
    EXPECT_THROW(base.with_syndrome(s, PauliFrame(9)), PreconditionError);
    EXPECT_THROW(CodeNetwork(lat, iid_network_factors(amplitude_damping(0.1), Lattice::build(3, 4))),
                 StructuralError);
    DecoderConfig cfg;
    cfg.chi = 0;
    EXPECT_THROW(cfg.validate(), DomainError);
    cfg.chi = 8;
    cfg.tol = -1;
    EXPECT_THROW(cfg.validate(), DomainError);
}
