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

#include "tnqec/tensor.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "tnqec/errors.h"

namespace tnqec {

namespace {

using RowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t product(const std::vector<std::size_t> &dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

std::string join(const std::vector<std::string> &labels) {
    std::string out = "(";
    for (std::size_t k = 0; k < labels.size(); ++k) {
        out += (k ? "," : "") + labels[k];
    }
    return out + ")";
}

// Reorders data so that output axis k is input axis perm[k].
std::vector<cplx> permute_data(const std::vector<cplx> &data, const std::vector<std::size_t> &shape,
                               const std::vector<std::size_t> &perm) {
    const std::size_t rank = shape.size();
    bool identity = true;
    for (std::size_t k = 0; k < rank; ++k) {
        identity &= perm[k] == k;
    }
    if (identity) {
        return data;
    }
    std::vector<std::size_t> in_strides(rank, 1);
    for (std::size_t k = rank; k-- > 1;) {
        in_strides[k - 1] = in_strides[k] * shape[k];
    }
    std::vector<std::size_t> out_shape(rank), strides(rank);
    for (std::size_t k = 0; k < rank; ++k) {
        out_shape[k] = shape[perm[k]];
        strides[k] = in_strides[perm[k]];
    }
    std::vector<cplx> out(data.size());
    std::vector<std::size_t> counter(rank, 0);
    std::size_t src = 0;
    for (std::size_t dst = 0; dst < out.size(); ++dst) {
        out[dst] = data[src];
        for (std::size_t k = rank; k-- > 0;) {
            if (++counter[k] < out_shape[k]) {
                src += strides[k];
                break;
            }
            src -= strides[k] * (out_shape[k] - 1);
            counter[k] = 0;
        }
    }
    return out;
}

}  // namespace

Tensor::Tensor() : data_(1, cplx{0}) {
}

Tensor::Tensor(std::vector<std::string> labels, std::vector<std::size_t> shape)
    : Tensor(std::move(labels), shape, std::vector<cplx>(product(shape), cplx{0})) {
}

Tensor::Tensor(std::vector<std::string> labels, std::vector<std::size_t> shape, std::vector<cplx> data)
    : labels_(std::move(labels)), shape_(std::move(shape)), data_(std::move(data)) {
    if (labels_.size() != shape_.size()) {
        throw ContractError("tensor has " + std::to_string(labels_.size()) + " labels but " +
                            std::to_string(shape_.size()) + " dimensions");
    }
    if (product(shape_) != data_.size()) {
        throw ContractError("tensor data length does not match shape " + join(labels_));
    }
    std::unordered_set<std::string> seen(labels_.begin(), labels_.end());
    if (seen.size() != labels_.size()) {
        throw ContractError("duplicate label in " + join(labels_));
    }
}

Tensor Tensor::scalar(cplx value) {
    return Tensor({}, {}, {value});
}

bool Tensor::has_label(const std::string &label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t Tensor::axis(const std::string &label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw ContractError("no label '" + label + "' in " + join(labels_));
    }
    return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t Tensor::dim(const std::string &label) const {
    return shape_[axis(label)];
}

std::size_t Tensor::offset(std::initializer_list<std::size_t> index) const {
    if (index.size() != shape_.size()) {
        throw ContractError("index rank mismatch");
    }
    std::size_t off = 0, k = 0;
    for (std::size_t i : index) {
        if (i >= shape_[k]) {
            throw ContractError("index out of range");
        }
        off = off * shape_[k++] + i;
    }
    return off;
}

cplx &Tensor::at(std::initializer_list<std::size_t> index) {
    return data_[offset(index)];
}

cplx Tensor::at(std::initializer_list<std::size_t> index) const {
    return data_[offset(index)];
}

cplx Tensor::scalar_value() const {
    if (data_.size() != 1) {
        throw StructuralError("tensor " + join(labels_) + " is not a scalar");
    }
    return data_[0];
}

Tensor Tensor::permuted(const std::vector<std::string> &order) const {
    if (order.size() != labels_.size()) {
        throw ContractError("permutation " + join(order) + " does not match " + join(labels_));
    }
    std::vector<std::size_t> perm(order.size());
    std::vector<std::size_t> new_shape(order.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        perm[k] = axis(order[k]);
        new_shape[k] = shape_[perm[k]];
    }
    return Tensor(order, new_shape, permute_data(data_, shape_, perm));
}

Tensor Tensor::relabeled(const std::string &from, const std::string &to) const {
    Tensor out = *this;
    out.labels_[axis(from)] = to;
    if (from != to && has_label(to)) {
        throw ContractError("relabel to existing label '" + to + "'");
    }
    return out;
}

Tensor Tensor::fused(const std::vector<std::string> &group, const std::string &fused) const {
    if (group.empty()) {
        throw ContractError("cannot fuse an empty group");
    }
    std::size_t first = axis(group.front());
    for (const auto &g : group) {
        first = std::min(first, axis(g));
    }
    std::vector<std::string> order;
    std::vector<std::string> out_labels;
    std::vector<std::size_t> out_shape;
    std::size_t merged = 1;
    for (const auto &g : group) {
        merged *= dim(g);
    }
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (k == first) {
            order.insert(order.end(), group.begin(), group.end());
            out_labels.push_back(fused);
            out_shape.push_back(merged);
        }
        if (std::find(group.begin(), group.end(), labels_[k]) == group.end()) {
            order.push_back(labels_[k]);
            out_labels.push_back(labels_[k]);
            out_shape.push_back(shape_[k]);
        }
    }
    Tensor p = permuted(order);
    return Tensor(std::move(out_labels), std::move(out_shape), std::move(p.data_));
}

Tensor Tensor::unfused(const std::string &label, const std::vector<std::string> &parts,
                       const std::vector<std::size_t> &dims) const {
    std::size_t ax = axis(label);
    if (product(dims) != shape_[ax] || parts.size() != dims.size()) {
        throw ContractError("unfuse of '" + label + "' does not preserve its dimension");
    }
    std::vector<std::string> out_labels;
    std::vector<std::size_t> out_shape;
    for (std::size_t k = 0; k < labels_.size(); ++k) {
        if (k == ax) {
            out_labels.insert(out_labels.end(), parts.begin(), parts.end());
            out_shape.insert(out_shape.end(), dims.begin(), dims.end());
        } else {
            out_labels.push_back(labels_[k]);
            out_shape.push_back(shape_[k]);
        }
    }
    return Tensor(std::move(out_labels), std::move(out_shape), data_);
}

Tensor Tensor::conj() const {
    Tensor out = *this;
    for (auto &v : out.data_) {
        v = std::conj(v);
    }
    return out;
}

double Tensor::norm() const {
    double s = 0;
    for (const auto &v : data_) {
        s += std::norm(v);
    }
    return std::sqrt(s);
}

double Tensor::max_abs() const {
    double m = 0;
    for (const auto &v : data_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

Tensor &Tensor::operator*=(cplx factor) {
    for (auto &v : data_) {
        v *= factor;
    }
    return *this;
}

Tensor contract(const Tensor &a, const Tensor &b) {
    std::vector<std::string> free_a, shared, free_b;
    std::size_t m = 1, k = 1, n = 1;
    for (std::size_t i = 0; i < a.rank(); ++i) {
        const auto &label = a.labels()[i];
        if (b.has_label(label)) {
            if (b.dim(label) != a.shape()[i]) {
                throw ContractError("label '" + label + "' has dimension " + std::to_string(a.shape()[i]) +
                                    " vs " + std::to_string(b.dim(label)));
            }
            shared.push_back(label);
            k *= a.shape()[i];
        } else {
            free_a.push_back(label);
            m *= a.shape()[i];
        }
    }
    for (std::size_t i = 0; i < b.rank(); ++i) {
        if (!a.has_label(b.labels()[i])) {
            free_b.push_back(b.labels()[i]);
            n *= b.shape()[i];
        }
    }

    std::vector<std::string> order_a = free_a;
    order_a.insert(order_a.end(), shared.begin(), shared.end());
    std::vector<std::string> order_b = shared;
    order_b.insert(order_b.end(), free_b.begin(), free_b.end());
    Tensor pa = a.permuted(order_a);
    Tensor pb = b.permuted(order_b);

    Eigen::Map<const RowMat> ma(pa.data().data(), Eigen::Index(m), Eigen::Index(k));
    Eigen::Map<const RowMat> mb(pb.data().data(), Eigen::Index(k), Eigen::Index(n));
    std::vector<cplx> out(m * n);
    Eigen::Map<RowMat> mc(out.data(), Eigen::Index(m), Eigen::Index(n));
    mc.noalias() = ma * mb;

    std::vector<std::string> labels = free_a;
    labels.insert(labels.end(), free_b.begin(), free_b.end());
    std::vector<std::size_t> shape;
    for (const auto &l : free_a) {
        shape.push_back(a.dim(l));
    }
    for (const auto &l : free_b) {
        shape.push_back(b.dim(l));
    }
    return Tensor(std::move(labels), std::move(shape), std::move(out));
}

std::size_t truncated_rank(const std::vector<double> &singular_values, std::size_t max_bond, double tol) {
    if (singular_values.empty()) {
        return 0;
    }
    const double cutoff = tol * singular_values.front();
    std::size_t keep = 0;
    while (keep < singular_values.size() && singular_values[keep] > cutoff) {
        ++keep;
    }
    keep = std::min(keep, max_bond);
    return std::max<std::size_t>(keep, 1);
}

SvdSplitResult svd_split(const Tensor &t, const std::vector<std::string> &left_labels, std::size_t max_bond,
                         double tol, const std::string &bond_label) {
    if (left_labels.empty() || left_labels.size() >= t.rank()) {
        throw SplitError("left label set must be a nonempty strict subset of " + std::to_string(t.rank()) +
                         " labels");
    }
    if (max_bond == 0) {
        throw SplitError("max_bond must be positive");
    }
    std::vector<std::string> right_labels;
    for (const auto &l : t.labels()) {
        if (std::find(left_labels.begin(), left_labels.end(), l) == left_labels.end()) {
            right_labels.push_back(l);
        }
    }
    if (right_labels.size() + left_labels.size() != t.rank()) {
        throw SplitError("left labels are not all present in the tensor");
    }
    std::vector<std::string> order = left_labels;
    order.insert(order.end(), right_labels.begin(), right_labels.end());
    Tensor p = t.permuted(order);

    std::vector<std::size_t> left_dims, right_dims;
    std::size_t rows = 1, cols = 1;
    for (const auto &l : left_labels) {
        left_dims.push_back(t.dim(l));
        rows *= left_dims.back();
    }
    for (const auto &l : right_labels) {
        right_dims.push_back(t.dim(l));
        cols *= right_dims.back();
    }

    Eigen::Map<const RowMat> mat(p.data().data(), Eigen::Index(rows), Eigen::Index(cols));
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto &sv = svd.singularValues();

    SvdSplitResult result;
    std::vector<double> all(sv.data(), sv.data() + sv.size());
    std::size_t keep = truncated_rank(all, max_bond, tol);
    double discarded = 0;
    for (std::size_t i = keep; i < all.size(); ++i) {
        discarded += all[i] * all[i];
    }
    result.truncation_error = std::sqrt(discarded);
    result.singular_values.assign(all.begin(), all.begin() + Eigen::Index(keep));

    RowMat u = svd.matrixU().leftCols(Eigen::Index(keep));
    RowMat r = sv.head(Eigen::Index(keep)).asDiagonal() * svd.matrixV().leftCols(Eigen::Index(keep)).adjoint();

    std::vector<std::string> l_labels = left_labels;
    l_labels.push_back(bond_label);
    std::vector<std::size_t> l_shape = left_dims;
    l_shape.push_back(keep);
    result.left = Tensor(l_labels, l_shape, std::vector<cplx>(u.data(), u.data() + u.size()));

    std::vector<std::string> r_labels{bond_label};
    r_labels.insert(r_labels.end(), right_labels.begin(), right_labels.end());
    std::vector<std::size_t> r_shape{keep};
    r_shape.insert(r_shape.end(), right_dims.begin(), right_dims.end());
    result.right = Tensor(r_labels, r_shape, std::vector<cplx>(r.data(), r.data() + r.size()));
    return result;
}

}  // namespace tnqec
