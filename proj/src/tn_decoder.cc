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

#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>

#include "tnqec/errors.h"

namespace tnqec {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    while (exp-- > 0) {
        r *= base;
    }
    return r;
}

enum Dir { kRight = 0, kLeft = 1, kDown = 2, kUp = 3 };

using ValueTable = std::array<std::array<std::optional<GridValue>, 4>, 4>;

LogicalChoi assemble(const CodeNetwork &net, const ValueTable &vals) {
    double top = -std::numeric_limits<double>::infinity();
    for (const auto &row : vals) {
        for (const auto &v : row) {
            if (v && v->mantissa != cplx{0}) {
                top = std::max(top, v->log_scale);
            }
        }
    }
    LogicalChoi lc;
    if (!std::isfinite(top)) {
        return lc;
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const auto &v = vals[std::size_t(i)][std::size_t(j)];
            if (v && v->mantissa != cplx{0}) {
                lc.c(i, j) = v->mantissa * std::exp(v->log_scale - top);
            }
        }
    }
    lc.log_scale = top + net.log_scale();
    return lc;
}

// Coset masses V_L on the diagonal become C_PP = 2 sum_L V_L (-1)^[P, L anticommute], so
// that C_II / 2 is the syndrome probability as in the signed form.
LogicalChoi assemble_cosets(const CodeNetwork &net, const ValueTable &vals) {
    double top = -std::numeric_limits<double>::infinity();
    for (int l = 0; l < 4; ++l) {
        const auto &v = vals[std::size_t(l)][std::size_t(l)];
        if (v && v->mantissa != cplx{0}) {
            top = std::max(top, v->log_scale);
        }
    }
    LogicalChoi lc;
    if (!std::isfinite(top)) {
        return lc;
    }
    std::array<cplx, 4> mass{};
    for (int l = 0; l < 4; ++l) {
        const auto &v = vals[std::size_t(l)][std::size_t(l)];
        if (v) {
            mass[std::size_t(l)] = v->mantissa * std::exp(v->log_scale - top);
        }
    }
    for (int p = 0; p < 4; ++p) {
        cplx c = 0;
        for (int l = 0; l < 4; ++l) {
            c += anticommute(Pauli(p), Pauli(l)) ? -mass[std::size_t(l)] : mass[std::size_t(l)];
        }
        lc.c(p, p) = 2.0 * c;
    }
    lc.log_scale = top + net.coset_log_scale();
    return lc;
}

LogicalChoi finish(const CodeNetwork &net, const ValueTable &vals) {
    return net.coset_sums() ? assemble_cosets(net, vals) : assemble(net, vals);
}

void record(ChoiDiagnostics *diag, const GridValue &v, std::size_t bond) {
    if (diag == nullptr) {
        return;
    }
    diag->truncation_error = std::max(diag->truncation_error, v.truncation_error);
    diag->contractions += 1;
    diag->max_bond = std::max(diag->max_bond, bond);
}

}  // namespace

void DecoderConfig::validate() const {
    if (chi == 0) {
        throw DomainError("chi must be at least 1");
    }
    if (!(tol >= 0)) {
        throw DomainError("truncation tolerance must be non-negative");
    }
    if (!(zero_floor >= 0)) {
        throw DomainError("zero floor must be non-negative");
    }
}

CodeNetwork::CodeNetwork(const Lattice &lat, const NoiseNetworkFactor &noise)
    : lat_(lat), noise_log_scale_(noise.log_scale), recovery_(lat.num_qubits()) {
    const std::size_t rows = lat.height(), cols = lat.width();
    if (noise.rows != rows || noise.cols != cols || noise.sites.size() != lat.num_qubits()) {
        throw StructuralError("noise factor geometry does not match the lattice");
    }
    for (std::size_t q = 0; q < lat.num_qubits(); ++q) {
        const Tensor &t = noise.sites[q];
        for (const char *label : {"out", "in", "left", "right", "up", "down"}) {
            if (!t.has_label(label)) {
                throw StructuralError(std::string("noise site is missing label ") + label);
            }
        }
        Tensor p = t.permuted({"out", "in", "left", "right", "up", "down"});
        std::size_t r = lat.row_of(q), c = lat.col_of(q);
        const auto &sh = p.shape();
        bool edges_ok = (c > 0 || sh[2] == 1) && (c + 1 < cols || sh[3] == 1) && (r > 0 || sh[4] == 1) &&
                        (r + 1 < rows || sh[5] == 1);
        if (sh[0] != 4 || sh[1] != 4 || !edges_ok) {
            throw StructuralError("noise site has the wrong shape");
        }
        if (c + 1 < cols && noise.sites[q + 1].dim("left") != sh[3]) {
            throw StructuralError("noise bond dimensions disagree");
        }
        if (r + 1 < rows && noise.sites[q + cols].dim("up") != sh[5]) {
            throw StructuralError("noise bond dimensions disagree");
        }
        noise_sites_.push_back(std::move(p));
    }
    pauli_ = noise.pauli_diagonal();
    if (pauli_ && !noise.error_weights.empty()) {
        if (noise.error_weights.size() != noise.sites.size()) {
            throw StructuralError("error weights do not match the noise sites");
        }
        auto probs = std::make_shared<std::vector<Tensor>>();
        for (std::size_t q = 0; q < noise.sites.size(); ++q) {
            Tensor pt = noise.error_weights[q].permuted({"out", "in", "left", "right", "up", "down"});
            if (pt.shape() != noise_sites_[q].shape()) {
                throw StructuralError("error weights do not match the noise sites");
            }
            probs->push_back(std::move(pt));
        }
        coset_sites_ = std::move(probs);
    } else if (pauli_) {
        // p(E) = (1/4) sum_P lambda(P) (-1)^[P, E anticommute], site by site.
        auto probs = std::make_shared<std::vector<Tensor>>();
        for (const Tensor &t : noise_sites_) {
            Tensor pt = t;
            auto &out = pt.data();
            std::fill(out.begin(), out.end(), cplx{0});
            const std::size_t bonds = t.size() / 16;
            for (std::size_t e = 0; e < 4; ++e) {
                for (std::size_t k = 0; k < bonds; ++k) {
                    cplx acc = 0;
                    for (std::size_t p = 0; p < 4; ++p) {
                        cplx lam = t.data()[(p * 4 + p) * bonds + k];
                        acc += anticommute(Pauli(p), Pauli(e)) ? -lam : lam;
                    }
                    out[(e * 4 + e) * bonds + k] = acc / 4.0;
                }
            }
            probs->push_back(std::move(pt));
        }
        coset_sites_ = std::move(probs);
    }
    outcomes_.assign(lat.num_checks(), 0);

    info_.resize(lat.num_qubits());
    const int h = int(rows), w = int(cols);
    for (std::size_t q = 0; q < lat.num_qubits(); ++q) {
        SiteInfo &si = info_[q];
        const int r = int(lat.row_of(q)), c = int(lat.col_of(q));
        for (auto f : lat.faces_of_site(q)) {
            const Face &face = lat.faces()[f];
            si.faces.push_back(f);
            si.owned.push_back(std::max(face.row, 0) == r && std::max(face.col, 0) == c);
            si.x_type.push_back(face.type == CheckType::X);
        }
        auto local = [&](int fr, int fc, std::vector<std::size_t> &out) {
            int f = lat.face_at(fr, fc);
            if (f < 0) {
                return;
            }
            for (std::size_t k = 0; k < si.faces.size(); ++k) {
                if (si.faces[k] == std::size_t(f)) {
                    out.push_back(k);
                    return;
                }
            }
            throw StructuralError("bond face does not touch its site");
        };
        // Horizontal bond (r, c)-(r, c+1): the faces below and above it.
        if (c + 1 < w) {
            local(r, c, si.bond[kRight]);
            local(r - 1, c, si.bond[kRight]);
        }
        if (c > 0) {
            local(r, c - 1, si.bond[kLeft]);
            local(r - 1, c - 1, si.bond[kLeft]);
        }
        // Vertical bond (r, c)-(r+1, c): the face to its right, plus the left boundary
        // face in column 0.
        if (r + 1 < h) {
            local(r, c, si.bond[kDown]);
            if (c == 0) {
                local(r, -1, si.bond[kDown]);
            }
        }
        if (r > 0) {
            local(r - 1, c, si.bond[kUp]);
            if (c == 0) {
                local(r - 1, -1, si.bond[kUp]);
            }
        }
    }
}

CodeNetwork CodeNetwork::with_syndrome(const Syndrome &s, const PauliFrame &r) const {
    if (!(syndrome_of(r, lat_) == s)) {
        throw PreconditionError("recovery frame does not produce the syndrome");
    }
    std::vector<int> outcomes(lat_.num_checks());
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        outcomes[k] = s.outcome(k);
    }
    CodeNetwork out = with_outcomes(outcomes);
    out.recovery_ = r;
    out.coset_ = pauli_;
    return out;
}

CodeNetwork CodeNetwork::with_outcomes(const std::vector<int> &outcomes) const {
    if (outcomes.size() != lat_.num_checks()) {
        throw DomainError("outcome list does not match the number of checks");
    }
    for (int v : outcomes) {
        if (v != 1 && v != -1 && v != 0) {
            throw DomainError("face outcomes must be +1, -1 or 0");
        }
    }
    CodeNetwork out = *this;
    out.outcomes_ = outcomes;
    out.recovery_ = PauliFrame(lat_.num_qubits());
    out.coset_ = false;
    return out;
}

double CodeNetwork::log_unconditioned_probability(const DecoderConfig &cfg) const {
    auto key = std::make_pair(cfg.chi, cfg.tol);
    {
        std::lock_guard<std::mutex> lock(trace_cache_->mu);
        auto it = trace_cache_->values.find(key);
        if (it != trace_cache_->values.end()) {
            return it->second;
        }
    }
    double value = outcome_log_probability(*this, std::vector<int>(lat_.num_checks(), 0), cfg);
    std::lock_guard<std::mutex> lock(trace_cache_->mu);
    trace_cache_->values.emplace(key, value);
    return value;
}

double CodeNetwork::log_scale() const {
    std::size_t measured = 0;
    for (int v : outcomes_) {
        measured += v != 0;
    }
    double sites = double(lat_.num_qubits());
    double halves = double(measured + lat_.num_checks());
    return noise_log_scale_ + (sites - halves) * kLn2;
}

Tensor CodeNetwork::cell(std::size_t q, Logical out, Logical in) const {
    const SiteInfo &si = info_[q];
    const Tensor &t = noise_sites_[q];
    const std::size_t nl = t.shape()[2], nr = t.shape()[3], nu = t.shape()[4], nd = t.shape()[5];
    const std::size_t fd = face_dim();
    std::array<std::size_t, 4> noise_dim{nr, nl, nd, nu};
    std::array<std::size_t, 4> leg{};
    for (int d = 0; d < 4; ++d) {
        leg[std::size_t(d)] = ipow(fd, si.bond[d].size()) * noise_dim[std::size_t(d)];
    }
    // Grid orientation is mirrored: the physical right bond is the grid's left leg.
    Tensor cell({"up", "down", "left", "right"}, {leg[kUp], leg[kDown], leg[kRight], leg[kLeft]});
    auto &data = cell.data();

    const Pauli p_out = lat_.logical_on_site(out, q);
    const Pauli p_in = lat_.logical_on_site(in, q);
    if (coset_) {
        return coset_cell(q, p_out, std::move(cell), leg);
    }
    const double sign = anticommute(recovery_.at(q), p_out) ? -1.0 : 1.0;
    const std::size_t k = si.faces.size();
    std::vector<std::size_t> st(k);
    std::array<std::size_t, 4> idx{};
    for (std::size_t code = 0, states = ipow(fd, k); code < states; ++code) {
        std::size_t rem = code;
        for (std::size_t f = k; f-- > 0;) {
            st[f] = rem % fd;
            rem /= fd;
        }
        bool ua = false, va = false, ub = false, vb = false;
        cplx w = sign;
        for (std::size_t f = 0; f < k; ++f) {
            bool a = pauli_ ? st[f] != 0 : (st[f] & 1) != 0;
            bool b = pauli_ ? st[f] != 0 : (st[f] >> 1) != 0;
            (si.x_type[f] ? ua : va) ^= a;
            (si.x_type[f] ? ub : vb) ^= b;
            if (si.owned[f] && a) {
                w *= double(outcomes_[si.faces[f]]);
            }
        }
        if (w == cplx{0}) {
            continue;
        }
        PhasedPauli sa = from_xz(ua, va), sb = from_xz(ub, vb);
        PhasedPauli a_op = multiply(p_out, sa.pauli);
        PhasedPauli b_op = multiply(p_in, sb.pauli);
        w *= sa.phase * a_op.phase * sb.phase * b_op.phase;
        const std::size_t o = std::size_t(a_op.pauli), i = std::size_t(b_op.pauli);
        if (pauli_ && o != i) {
            continue;
        }
        for (int d = 0; d < 4; ++d) {
            std::size_t v = 0;
            for (auto f : si.bond[d]) {
                v = v * fd + st[f];
            }
            idx[std::size_t(d)] = v;
        }
        const cplx *block = t.data().data() + (o * 4 + i) * nl * nr * nu * nd;
        for (std::size_t l = 0; l < nl; ++l) {
            for (std::size_t r = 0; r < nr; ++r) {
                for (std::size_t u = 0; u < nu; ++u) {
                    for (std::size_t d = 0; d < nd; ++d) {
                        cplx m = block[((l * nr + r) * nu + u) * nd + d];
                        if (m == cplx{0}) {
                            continue;
                        }
                        std::size_t up = idx[kUp] * nu + u, down = idx[kDown] * nd + d;
                        std::size_t gl = idx[kRight] * nr + r, gr = idx[kLeft] * nl + l;
                        data[((up * leg[kDown] + down) * leg[kRight] + gl) * leg[kLeft] + gr] += w * m;
                    }
                }
            }
        }
    }
    return cell;
}

Tensor CodeNetwork::coset_cell(std::size_t q, Pauli logical, Tensor cell,
                               const std::array<std::size_t, 4> &leg) const {
    const SiteInfo &si = info_[q];
    const Tensor &t = (*coset_sites_)[q];
    const std::size_t nl = t.shape()[2], nr = t.shape()[3], nu = t.shape()[4], nd = t.shape()[5];
    const Pauli frame = recovery_.at(q);
    auto &data = cell.data();
    const std::size_t k = si.faces.size();
    std::array<std::size_t, 4> idx{};
    for (std::size_t code = 0, states = std::size_t(1) << k; code < states; ++code) {
        // Bit f of code applies the generator of local face f (the first face is the
        // most significant digit, as in the signed cells).
        bool x = x_part(frame) ^ x_part(logical), z = z_part(frame) ^ z_part(logical);
        for (std::size_t f = 0; f < k; ++f) {
            if ((code >> (k - 1 - f)) & 1) {
                (si.x_type[f] ? x : z) ^= true;
            }
        }
        for (int d = 0; d < 4; ++d) {
            std::size_t v = 0;
            for (auto f : si.bond[d]) {
                v = v * 2 + ((code >> (k - 1 - f)) & 1);
            }
            idx[std::size_t(d)] = v;
        }
        const std::size_t e = std::size_t(pauli_from_parts(x, z));
        const cplx *block = t.data().data() + (e * 4 + e) * nl * nr * nu * nd;
        for (std::size_t l = 0; l < nl; ++l) {
            for (std::size_t r = 0; r < nr; ++r) {
                for (std::size_t u = 0; u < nu; ++u) {
                    for (std::size_t d = 0; d < nd; ++d) {
                        cplx m = block[((l * nr + r) * nu + u) * nd + d];
                        std::size_t up = idx[kUp] * nu + u, down = idx[kDown] * nd + d;
                        std::size_t gl = idx[kRight] * nr + r, gr = idx[kLeft] * nl + l;
                        data[((up * leg[kDown] + down) * leg[kRight] + gl) * leg[kLeft] + gr] += m;
                    }
                }
            }
        }
    }
    return cell;
}

GridNetwork CodeNetwork::grid(Logical out, Logical in) const {
    GridNetwork g(lat_.height(), lat_.width());
    for (std::size_t col = 0; col < lat_.width(); ++col) {
        fill_column(g, col, out, in);
    }
    return g;
}

void CodeNetwork::fill_column(GridNetwork &grid, std::size_t g, Logical out, Logical in) const {
    const std::size_t col = lat_.width() - 1 - g;
    for (std::size_t r = 0; r < lat_.height(); ++r) {
        grid.at(r, g) = cell(lat_.site(r, col), out, in);
    }
}

LogicalChoi logical_choi(const CodeNetwork &net, const DecoderConfig &cfg, ChoiDiagnostics *diag) {
    cfg.validate();
    const std::size_t cols = net.lattice().width();
    const bool pauli = net.pauli_diagonal();
    ValueTable vals;
    // Only the X parts of the two logicals reach columns other than the last one.
    for (int xo = 0; xo < 2; ++xo) {
        for (int xi = 0; xi < 2; ++xi) {
            if (pauli && xo != xi) {
                continue;
            }
            GridNetwork g = net.grid(pauli_from_parts(xo, false), pauli_from_parts(xi, false));
            g.validate();
            BoundaryChain chain = sweep_columns(g, cols - 2, cfg.chi, cfg.tol);
            for (int zo = 0; zo < 2; ++zo) {
                for (int zi = 0; zi < 2; ++zi) {
                    Logical lo = pauli_from_parts(xo, zo), li = pauli_from_parts(xi, zi);
                    if (pauli && lo != li) {
                        continue;
                    }
                    net.fill_column(g, cols - 1, lo, li);
                    GridValue v = close_chain(chain, g, cols - 1);
                    record(diag, v, chain.max_bond_dim());
                    vals[std::size_t(lo)][std::size_t(li)] = v;
                }
            }
        }
    }
    return finish(net, vals);
}

LogicalChoi logical_choi_reference(const CodeNetwork &net, const DecoderConfig &cfg, ChoiDiagnostics *diag) {
    cfg.validate();
    ValueTable vals;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (net.pauli_diagonal() && i != j) {
                continue;
            }
            GridValue v = contract_grid(net.grid(Pauli(i), Pauli(j)), cfg.chi, cfg.tol);
            record(diag, v, 0);
            vals[std::size_t(i)][std::size_t(j)] = v;
        }
    }
    return finish(net, vals);
}

DecodeResult decode(const Syndrome &s, const CodeNetwork &base, const DecoderConfig &cfg) {
    auto start = std::chrono::steady_clock::now();
    DecodeResult out;
    out.recovery = recovery_frame(s, base.lattice());
    CodeNetwork net = base.with_syndrome(s, out.recovery);
    ChoiDiagnostics diag;
    out.choi = logical_choi(net, cfg, &diag);
    double c00 = out.choi.norm_factor().real();
    if (!(c00 > 0)) {
        throw ZeroProbabilityError("syndrome " + s.bits() + " has zero probability");
    }
    out.log_probability = std::log(c00) + out.choi.log_scale - kLn2;
    if (cfg.zero_floor > 0 &&
        out.log_probability - base.log_unconditioned_probability(cfg) < std::log(cfg.zero_floor)) {
        throw ZeroProbabilityError("syndrome " + s.bits() + " has probability below the zero floor");
    }
    out.channel = out.choi.normalized();
    out.correction = select_correction(out.channel, cfg.norm, cfg.diamond);
    out.truncation_error = diag.truncation_error;
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

DecodeResult decode(const Syndrome &s, const NoiseNetworkFactor &noise, const Lattice &lat, const DecoderConfig &cfg) {
    return decode(s, CodeNetwork(lat, noise), cfg);
}

double outcome_log_probability(const CodeNetwork &base, const std::vector<int> &outcomes, const DecoderConfig &cfg) {
    cfg.validate();
    CodeNetwork net = base.with_outcomes(outcomes);
    GridValue v = contract_grid(net.grid(Pauli::I, Pauli::I), cfg.chi, cfg.tol);
    double re = v.mantissa.real();
    if (!(re > 0)) {
        return -std::numeric_limits<double>::infinity();
    }
    return std::log(re) + v.log_scale + net.log_scale() - kLn2;
}

TnSyndromeSampler::TnSyndromeSampler(const Lattice &lat, const NoiseNetworkFactor &noise, const DecoderConfig &cfg)
    : base_(lat, noise), cfg_(cfg) {
    cfg.validate();
}

double TnSyndromeSampler::prefix_probability(const std::string &prefix) {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(prefix);
        if (it != memo_.end()) {
            return it->second;
        }
    }
    std::vector<int> outcomes(base_.lattice().num_checks(), 0);
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        outcomes[k] = prefix[k] == '-' ? -1 : 1;
    }
    double p = std::exp(outcome_log_probability(base_, outcomes, cfg_));
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(prefix, p);
    return p;
}

Syndrome TnSyndromeSampler::sample(std::mt19937_64 &rng) {
    const Lattice &lat = base_.lattice();
    Syndrome s = Syndrome::trivial(lat);
    std::string prefix;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t k = 0; k < lat.num_checks(); ++k) {
        double plus = prefix_probability(prefix + '+');
        double minus = prefix_probability(prefix + '-');
        double total = plus + minus;
        if (!(total > 0)) {
            throw ZeroProbabilityError("sampler reached a prefix of zero probability");
        }
        bool flip = u(rng) * total >= plus;
        prefix.push_back(flip ? '-' : '+');
        s.set_outcome(k, flip ? -1 : 1);
    }
    return s;
}

double TnSyndromeSampler::probability(const Syndrome &s) {
    std::string prefix;
    for (std::size_t k = 0; k < base_.lattice().num_checks(); ++k) {
        prefix.push_back(s.outcome(k) == -1 ? '-' : '+');
    }
    return prefix_probability(prefix);
}

}  // namespace tnqec
