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

#ifndef TNQEC_TENSOR_H
#define TNQEC_TENSOR_H

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace tnqec {

using cplx = std::complex<double>;

/// Dense complex tensor with named indices, stored row-major over its index order.
///
/// Contraction is driven entirely by labels: two tensors are summed over every label
/// they have in common. Labels must be unique within a tensor.
class Tensor {
   public:
    /// Rank-0 tensor holding 0.
    Tensor();
    Tensor(std::vector<std::string> labels, std::vector<std::size_t> shape);
    Tensor(std::vector<std::string> labels, std::vector<std::size_t> shape, std::vector<cplx> data);

    static Tensor scalar(cplx value);

    std::size_t rank() const {
        return labels_.size();
    }
    std::size_t size() const {
        return data_.size();
    }
    const std::vector<std::string> &labels() const {
        return labels_;
    }
    const std::vector<std::size_t> &shape() const {
        return shape_;
    }
    const std::vector<cplx> &data() const {
        return data_;
    }
    std::vector<cplx> &data() {
        return data_;
    }

    bool has_label(const std::string &label) const;
    std::size_t axis(const std::string &label) const;
    std::size_t dim(const std::string &label) const;

    cplx &at(std::initializer_list<std::size_t> index);
    cplx at(std::initializer_list<std::size_t> index) const;

    /// Value of a tensor whose every index has dimension 1.
    cplx scalar_value() const;

    /// Same tensor with its indices reordered to `order` (a permutation of labels()).
    Tensor permuted(const std::vector<std::string> &order) const;
    Tensor relabeled(const std::string &from, const std::string &to) const;

    /// Merges `group` into one index named `fused` placed where the first member was.
    /// The merged index runs row-major over the group in the given order.
    Tensor fused(const std::vector<std::string> &group, const std::string &fused) const;

    /// Inverse of `fused`: splits `label` into `parts` with dimensions `dims`.
    Tensor unfused(const std::string &label, const std::vector<std::string> &parts,
                   const std::vector<std::size_t> &dims) const;

    Tensor conj() const;
    double norm() const;
    double max_abs() const;
    Tensor &operator*=(cplx factor);

   private:
    std::size_t offset(std::initializer_list<std::size_t> index) const;

    std::vector<std::string> labels_;
    std::vector<std::size_t> shape_;
    std::vector<cplx> data_;
};

/// Sums over all shared labels. Output labels: a's free labels then b's free labels.
/// Throws ContractError when a shared label has different dimensions.
Tensor contract(const Tensor &a, const Tensor &b);

struct SvdSplitResult {
    /// Isometry over (left labels..., bond).
    Tensor left;
    /// Singular values times right isometry, over (bond, remaining labels...).
    Tensor right;
    double truncation_error = 0;
    std::vector<double> singular_values;
};

/// Splits `t` across the bipartition `left_labels` | rest.
///
/// Keeps min(max_bond, #{s > tol * s_max}) singular values (at least one). The
/// truncation error is the 2-norm of the discarded singular values.
SvdSplitResult svd_split(const Tensor &t, const std::vector<std::string> &left_labels,
                         std::size_t max_bond, double tol, const std::string &bond_label = "bond");

/// Number of singular values retained under the relative cutoff and hard cap.
std::size_t truncated_rank(const std::vector<double> &singular_values, std::size_t max_bond, double tol);

}  // namespace tnqec

#endif
