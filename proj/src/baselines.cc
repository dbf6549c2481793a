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

#include "tnqec/baselines.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>

#include "tnqec/errors.h"

namespace tnqec {

namespace {

// ---------------------------------------------------------------------------
// Matching.

struct CheckGraph {
    std::vector<std::size_t> faces;
    // Neighbors of each vertex as (vertex, qubit); the last vertex is the boundary.
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj;

    std::size_t boundary() const {
        return faces.size();
    }
};

CheckGraph check_graph(const Lattice &lat, CheckType type) {
    CheckGraph g;
    std::vector<int> local(lat.num_checks(), -1);
    for (std::size_t f = 0; f < lat.num_checks(); ++f) {
        if (lat.faces()[f].type == type) {
            local[f] = int(g.faces.size());
            g.faces.push_back(f);
        }
    }
    g.adj.assign(g.faces.size() + 1, {});
    for (std::size_t q = 0; q < lat.num_qubits(); ++q) {
        std::vector<std::size_t> touching;
        for (auto f : lat.faces_of_site(q)) {
            if (local[f] >= 0) {
                touching.push_back(std::size_t(local[f]));
            }
        }
        if (touching.size() == 1) {
            touching.push_back(g.boundary());
        }
        if (touching.size() == 2) {
            g.adj[touching[0]].emplace_back(touching[1], q);
            g.adj[touching[1]].emplace_back(touching[0], q);
        }
    }
    return g;
}

struct Bfs {
    std::vector<std::size_t> dist;
    std::vector<std::pair<std::size_t, std::size_t>> parent;
};

Bfs bfs(const CheckGraph &g, std::size_t source) {
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    Bfs b;
    b.dist.assign(g.adj.size(), none);
    b.parent.assign(g.adj.size(), {none, none});
    std::deque<std::size_t> queue{source};
    b.dist[source] = 0;
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (auto [u, q] : g.adj[v]) {
            if (b.dist[u] == none) {
                b.dist[u] = b.dist[v] + 1;
                b.parent[u] = {v, q};
                queue.push_back(u);
            }
        }
    }
    return b;
}

// Matches the defects of one check type and flips the path qubits in `bits`.
void match_type(const Lattice &lat, const Syndrome &s, CheckType type, std::vector<std::uint8_t> &bits) {
    CheckGraph g = check_graph(lat, type);
    std::vector<std::size_t> defects;
    for (std::size_t k = 0; k < g.faces.size(); ++k) {
        if (s.outcome(g.faces[k]) == -1) {
            defects.push_back(k);
        }
    }
    const std::size_t n = defects.size();
    if (n == 0) {
        return;
    }
    if (n > kMaxMatchingDefects) {
        throw CapacityError("matching supports at most " + std::to_string(kMaxMatchingDefects) +
                            " defects per check type, got " + std::to_string(n));
    }
    std::vector<Bfs> trees;
    for (auto d : defects) {
        trees.push_back(bfs(g, d));
    }
    const std::size_t none = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < n; ++i) {
        if (trees[i].dist[g.boundary()] == none) {
            throw StructuralError("check graph is disconnected from the boundary");
        }
    }

    const std::uint32_t full = (std::uint32_t{1} << n) - 1;
    std::vector<std::uint32_t> best(std::size_t(full) + 1, std::numeric_limits<std::uint32_t>::max());
    // Partner of the lowest defect in each mask; n means the boundary.
    std::vector<std::uint8_t> choice(std::size_t(full) + 1, 0);
    best[0] = 0;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        std::size_t i = std::size_t(std::countr_zero(mask));
        std::uint32_t rest = mask & ~(std::uint32_t{1} << i);
        std::uint32_t top = std::numeric_limits<std::uint32_t>::max();
        std::uint8_t pick = 0;
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!((rest >> j) & 1)) {
                continue;
            }
            std::uint32_t c = std::uint32_t(trees[i].dist[defects[j]]) + best[rest & ~(std::uint32_t{1} << j)];
            if (c < top) {
                top = c;
                pick = std::uint8_t(j);
            }
        }
        std::uint32_t c = std::uint32_t(trees[i].dist[g.boundary()]) + best[rest];
        if (c < top) {
            top = c;
            pick = std::uint8_t(n);
        }
        best[mask] = top;
        choice[mask] = pick;
    }

    auto flip_path = [&](std::size_t from, std::size_t to) {
        const Bfs &t = trees[from];
        for (std::size_t v = to; v != defects[from]; v = t.parent[v].first) {
            bits[t.parent[v].second] ^= 1;
        }
    };
    std::uint32_t mask = full;
    while (mask != 0) {
        std::size_t i = std::size_t(std::countr_zero(mask));
        std::size_t j = choice[mask];
        mask &= ~(std::uint32_t{1} << i);
        if (j == n) {
            flip_path(i, g.boundary());
        } else {
            flip_path(i, defects[j]);
            mask &= ~(std::uint32_t{1} << j);
        }
    }
}

// ---------------------------------------------------------------------------
// Dense operators. A Pauli string is phase * prod_q X^x_q Z^z_q.

using Mat = DenseSimulator::Matrix;

struct PauliString {
    std::uint32_t x = 0;
    std::uint32_t z = 0;
    cplx phase{1};

    // Coefficient c of P|b> = c |b ^ x>.
    cplx coeff(std::uint32_t b) const {
        return (std::popcount(z & b) & 1) ? -phase : phase;
    }
};

// Hermitian string with Y = i X Z on every site.
PauliString string_of(const PauliFrame &f) {
    PauliString p;
    int ys = 0;
    for (std::size_t q = 0; q < f.num_qubits(); ++q) {
        if (f.x[q]) {
            p.x |= std::uint32_t{1} << q;
        }
        if (f.z[q]) {
            p.z |= std::uint32_t{1} << q;
        }
        ys += f.x[q] && f.z[q];
    }
    static const cplx powers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    p.phase = powers[ys % 4];
    return p;
}

PauliString face_string(const Face &f) {
    PauliString p;
    for (auto q : f.sites) {
        (f.type == CheckType::X ? p.x : p.z) |= std::uint32_t{1} << q;
    }
    return p;
}

// P M: row b of M moves to row b ^ x.
Mat left_apply(const PauliString &p, const Mat &m) {
    Mat out(m.rows(), m.cols());
    for (Eigen::Index b = 0; b < m.rows(); ++b) {
        out.row(Eigen::Index(std::uint32_t(b) ^ p.x)) = p.coeff(std::uint32_t(b)) * m.row(b);
    }
    return out;
}

// M P: column c of the result is coeff(c) times column c ^ x of M.
Mat right_apply(const Mat &m, const PauliString &p) {
    Mat out(m.rows(), m.cols());
    const Eigen::Index n = m.cols();
    std::vector<cplx> coeff(std::size_t(n), cplx{});
    for (Eigen::Index c = 0; c < n; ++c) {
        coeff[std::size_t(c)] = p.coeff(std::uint32_t(c));
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const cplx *src = m.data() + r * n;
        cplx *dst = out.data() + r * n;
        for (Eigen::Index c = 0; c < n; ++c) {
            dst[c] = coeff[std::size_t(c)] * src[std::uint32_t(c) ^ p.x];
        }
    }
    return out;
}

// tr[P M]
cplx trace_with(const PauliString &p, const Mat &m) {
    cplx t{0};
    for (Eigen::Index b = 0; b < m.rows(); ++b) {
        t += p.coeff(std::uint32_t(b)) * m(b, Eigen::Index(std::uint32_t(b) ^ p.x));
    }
    return t;
}

// (I + s S) M / 2 in place. Row b of S M is coeff(b ^ x) times row b ^ x of M.
void project_left(Mat &m, const PauliString &check, double sign) {
    const Eigen::Index n = m.cols();
    for (Eigen::Index b = 0; b < m.rows(); ++b) {
        const std::uint32_t partner = std::uint32_t(b) ^ check.x;
        if (partner == std::uint32_t(b)) {
            const double keep = 0.5 * (1.0 + sign * check.coeff(partner).real());
            if (keep != 1.0) {
                m.row(b) *= keep;
            }
            continue;
        }
        if (partner < std::uint32_t(b)) {
            continue;
        }
        const cplx c0 = 0.5 * sign * check.coeff(partner);
        const cplx c1 = 0.5 * sign * check.coeff(std::uint32_t(b));
        cplx *r0 = m.data() + b * n;
        cplx *r1 = m.data() + Eigen::Index(partner) * n;
        for (Eigen::Index c = 0; c < n; ++c) {
            const cplx a = r0[c], d = r1[c];
            r0[c] = 0.5 * a + c0 * d;
            r1[c] = 0.5 * d + c1 * a;
        }
    }
}

// M (I + s S) / 2 in place. Column c of M S is coeff(c) times column c ^ x of M.
void project_right(Mat &m, const PauliString &check, double sign) {
    const Eigen::Index n = m.cols();
    std::vector<cplx> coeff(std::size_t(n), cplx{});
    for (Eigen::Index c = 0; c < n; ++c) {
        coeff[std::size_t(c)] = 0.5 * sign * check.coeff(std::uint32_t(c));
    }
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        cplx *row = m.data() + r * n;
        if (check.x == 0) {
            for (Eigen::Index c = 0; c < n; ++c) {
                row[c] *= 0.5 + coeff[std::size_t(c)];
            }
            continue;
        }
        for (Eigen::Index c = 0; c < n; ++c) {
            const Eigen::Index partner = Eigen::Index(std::uint32_t(c) ^ check.x);
            if (partner < c) {
                continue;
            }
            const cplx a = row[c], d = row[partner];
            row[c] = 0.5 * a + coeff[std::size_t(c)] * d;
            row[partner] = 0.5 * d + coeff[std::size_t(partner)] * a;
        }
    }
}

// sum_k K_k M K_k^dag with K_k acting on qubit q.
Mat apply_kraus(const Mat &m, const KrausChannel &k, std::size_t q) {
    const Eigen::Index bit = Eigen::Index(1) << q;
    const Eigen::Index n = m.cols();
    Mat total = Mat::Zero(m.rows(), n);
    Mat left(m.rows(), n);
    for (const auto &op : k.ops) {
        for (Eigen::Index b = 0; b < m.rows(); ++b) {
            if (b & bit) {
                continue;
            }
            left.row(b) = op(0, 0) * m.row(b) + op(0, 1) * m.row(b | bit);
            left.row(b | bit) = op(1, 0) * m.row(b) + op(1, 1) * m.row(b | bit);
        }
        const cplx k00 = std::conj(op(0, 0)), k01 = std::conj(op(0, 1));
        const cplx k10 = std::conj(op(1, 0)), k11 = std::conj(op(1, 1));
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            const cplx *src = left.data() + r * n;
            cplx *dst = total.data() + r * n;
            for (Eigen::Index c = 0; c < n; ++c) {
                if (c & bit) {
                    continue;
                }
                dst[c] += src[c] * k00 + src[c | bit] * k01;
                dst[c | bit] += src[c] * k10 + src[c | bit] * k11;
            }
        }
    }
    return total;
}

}  // namespace

MatchingResult mwpm_match(const Syndrome &s, const Lattice &lat) {
    MatchingResult r;
    r.frame = PauliFrame(lat.num_qubits());
    match_type(lat, s, CheckType::Z, r.frame.x);
    match_type(lat, s, CheckType::X, r.frame.z);
    r.correction = homology_class(r.frame ^ recovery_frame(s, lat), lat);
    return r;
}

Logical mwpm_decode(const Syndrome &s, const Lattice &lat) {
    return mwpm_match(s, lat).correction;
}

DenseSimulator::DenseSimulator(const Lattice &lat, const std::vector<KrausChannel> &per_site) : lat_(lat) {
    if (per_site.size() != lat.num_qubits()) {
        throw DomainError("need one Kraus channel per site");
    }
    prepare(&per_site, nullptr);
}

DenseSimulator::DenseSimulator(const Lattice &lat, const KrausChannel &every_site)
    : DenseSimulator(lat, std::vector<KrausChannel>(lat.num_qubits(), every_site)) {
}

DenseSimulator::DenseSimulator(const Lattice &lat, const IsingParams &params) : lat_(lat) {
    prepare(nullptr, &params);
}

void DenseSimulator::prepare(const std::vector<KrausChannel> *kraus, const IsingParams *params) {
    const std::size_t n = lat_.num_qubits();
    if (n > kMaxQubits) {
        throw CapacityError("dense simulation supports at most " + std::to_string(kMaxQubits) + " qubits");
    }
    if (kraus != nullptr) {
        for (const auto &k : *kraus) {
            k.validate();
        }
    }
    const Eigen::Index dim = Eigen::Index(1) << n;
    Mat code = Mat::Identity(dim, dim);
    for (const auto &f : lat_.faces()) {
        project_left(code, face_string(f), 1.0);
    }
    std::vector<double> mixture;
    if (params != nullptr) {
        mixture = cbf_exact_distribution(*params, lat_).probabilities;
    }
    for (int j = 0; j < 4; ++j) {
        Mat m = left_apply(string_of(logical_frame(Pauli(j), lat_)), code);
        if (kraus != nullptr) {
            for (std::size_t q = 0; q < n; ++q) {
                m = apply_kraus(m, (*kraus)[q], q);
            }
        } else {
            Mat mixed = Mat::Zero(dim, dim);
            for (std::size_t sigma = 0; sigma < mixture.size(); ++sigma) {
                const double p = mixture[sigma];
                if (p == 0) {
                    continue;
                }
                const Eigen::Index flip = Eigen::Index(sigma);
                for (Eigen::Index b = 0; b < dim; ++b) {
                    const cplx *src = m.data() + (b ^ flip) * dim;
                    cplx *dst = mixed.data() + b * dim;
                    for (Eigen::Index c = 0; c < dim; ++c) {
                        dst[c] += p * src[c ^ flip];
                    }
                }
            }
            m = std::move(mixed);
        }
        noisy_[std::size_t(j)] = std::move(m);
    }
}

DenseSimulator::Result DenseSimulator::logical_channel(const Syndrome &s) const {
    PauliString r = string_of(recovery_frame(s, lat_));
    Result out;
    for (int j = 0; j < 4; ++j) {
        Mat m = noisy_[std::size_t(j)];
        for (std::size_t k = 0; k < lat_.num_checks(); ++k) {
            PauliString check = face_string(lat_.faces()[k]);
            project_left(m, check, s.outcome(k));
            project_right(m, check, s.outcome(k));
        }
        // string_of gives a Hermitian string, so R^dag = R.
        m = right_apply(left_apply(r, m), r);
        for (int i = 0; i < 4; ++i) {
            out.choi.c(i, j) = trace_with(string_of(logical_frame(Pauli(i), lat_)), m);
        }
    }
    out.probability = out.choi.c(0, 0).real() / 2;
    return out;
}

double DenseSimulator::outcome_probability(const std::vector<int> &outcomes) const {
    if (outcomes.size() != lat_.num_checks()) {
        throw DomainError("outcome list does not match the number of checks");
    }
    Mat m = noisy_[0];
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (outcomes[k] != 0) {
            project_left(m, face_string(lat_.faces()[k]), outcomes[k]);
        }
    }
    return m.trace().real() / 2;
}

Syndrome DenseSimulator::sample(std::mt19937_64 &rng) {
    auto prefix_probability = [&](const std::string &prefix) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = memo_.find(prefix);
            if (it != memo_.end()) {
                return it->second;
            }
        }
        std::vector<int> outcomes(lat_.num_checks(), 0);
        for (std::size_t k = 0; k < prefix.size(); ++k) {
            outcomes[k] = prefix[k] == '-' ? -1 : 1;
        }
        double p = std::max(0.0, outcome_probability(outcomes));
        std::lock_guard<std::mutex> lock(mu_);
        memo_.emplace(prefix, p);
        return p;
    };
    Syndrome s = Syndrome::trivial(lat_);
    std::string prefix;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t k = 0; k < lat_.num_checks(); ++k) {
        double plus = prefix_probability(prefix + '+');
        double minus = prefix_probability(prefix + '-');
        if (!(plus + minus > 0)) {
            throw ZeroProbabilityError("sampler reached a prefix of zero probability");
        }
        bool flip = u(rng) * (plus + minus) >= plus;
        prefix.push_back(flip ? '-' : '+');
        s.set_outcome(k, flip ? -1 : 1);
    }
    return s;
}

Logical optimal_decode_dense(const Syndrome &s, const DenseSimulator &sim, Norm norm, const DiamondOptions &opts) {
    return select_correction(sim.logical_channel(s).choi, norm, opts);
}

CbfMlTable::CbfMlTable(const IsingParams &p, const Lattice &lat) : lat_(lat), dist_(cbf_exact_distribution(p, lat)) {
    const std::size_t n = lat.num_qubits();
    std::vector<std::uint32_t> masks;
    for (std::size_t k = 0; k < lat.num_z_faces(); ++k) {
        std::uint32_t m = 0;
        for (auto q : lat.z_face(k).sites) {
            m |= std::uint32_t{1} << q;
        }
        masks.push_back(m);
    }
    std::uint32_t left_column = 0;
    for (auto q : lat.z_logical_support()) {
        left_column |= std::uint32_t{1} << q;
    }
    std::map<std::uint64_t, std::uint32_t> recovery_x;
    syndrome_key_.resize(dist_.probabilities.size());
    cls_.resize(dist_.probabilities.size());
    for (std::uint32_t sigma = 0; sigma < dist_.probabilities.size(); ++sigma) {
        std::uint64_t key = 0;
        for (std::size_t k = 0; k < masks.size(); ++k) {
            if (std::popcount(sigma & masks[k]) & 1) {
                key |= std::uint64_t{1} << (lat.num_x_faces() + k);
            }
        }
        auto it = recovery_x.find(key);
        if (it == recovery_x.end()) {
            PauliFrame r = recovery_frame(Syndrome::from_key(key, lat), lat);
            std::uint32_t bits = 0;
            for (std::size_t q = 0; q < n; ++q) {
                bits |= std::uint32_t(r.x[q] != 0) << q;
            }
            it = recovery_x.emplace(key, bits).first;
        }
        std::uint8_t cls = std::popcount((sigma ^ it->second) & left_column) & 1 ? 1 : 0;
        syndrome_key_[sigma] = key;
        cls_[sigma] = cls;
        mass_[key][cls] += dist_.probabilities[sigma];
    }
}

std::array<double, 4> CbfMlTable::class_mass(const Syndrome &s) const {
    auto it = mass_.find(s.key());
    return it == mass_.end() ? std::array<double, 4>{} : it->second;
}

double CbfMlTable::syndrome_probability(const Syndrome &s) const {
    auto m = class_mass(s);
    return m[0] + m[1] + m[2] + m[3];
}

Logical CbfMlTable::decode(const Syndrome &s) const {
    auto m = class_mass(s);
    double top = *std::max_element(m.begin(), m.end());
    if (!(top > 0)) {
        throw ZeroProbabilityError("syndrome " + s.bits() + " is unreachable");
    }
    for (int l = 0; l < 4; ++l) {
        if (m[std::size_t(l)] >= top * (1 - 1e-12)) {
            return Pauli(l);
        }
    }
    return Pauli::I;
}

std::vector<std::uint64_t> CbfMlTable::reachable() const {
    std::vector<std::uint64_t> keys;
    for (const auto &[key, m] : mass_) {
        if (m[0] + m[1] + m[2] + m[3] > 0) {
            keys.push_back(key);
        }
    }
    return keys;
}

std::vector<double> CbfMlTable::conditional(const Syndrome &s) const {
    const std::uint64_t key = s.key();
    double total = syndrome_probability(s);
    std::vector<double> out(dist_.probabilities.size(), 0.0);
    if (total > 0) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            if (syndrome_key_[i] == key) {
                out[i] = dist_.probabilities[i] / total;
            }
        }
    }
    return out;
}

Logical ml_decode_cbf_exact(const Syndrome &s, const IsingParams &p, const Lattice &lat) {
    return CbfMlTable(p, lat).decode(s);
}

}  // namespace tnqec
