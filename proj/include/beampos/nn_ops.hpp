// SPDX-License-Identifier: Apache-2.0
//
// beampos - position-aided mmWave beam prediction for V2V links
// Copyright (C) 2026 The beampos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Dense kernels for the 1D convolutional classifier.
//
// Batched feature maps are stored as a (channels x length*batch) matrix:
// sample b occupies columns [b*length, (b+1)*length). Convolution weights are
// (out_channels x in_channels*kernel) with tap k of input channel c at column
// c*kernel + k, so a convolution is one GEMM against the im2col matrix.

#ifndef BEAMPOS_NN_OPS_HPP
#define BEAMPOS_NN_OPS_HPP

#include "beampos/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace beampos::nn
{

using Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

constexpr Index conv_output_length(Index length, Index kernel, Index padding)
{
    return length + 2 * padding - kernel + 1;
}

constexpr Index pool_output_length(Index length, Index window)
{
    return (length + window - 1) / window;
}

template <typename Derived>
Matrix<typename Derived::Scalar> im2col(const Eigen::MatrixBase<Derived> &x, Index length, Index batch, Index kernel,
                                        Index padding)
{
    using Scalar = typename Derived::Scalar;
    const Index channels = x.rows();
    const Index out_len = conv_output_length(length, kernel, padding);
    if (x.cols() != length * batch || out_len < 1 || kernel < 1 || padding < 0)
        throw Error(Errc::ShapeMismatch, "conv1d", "input/kernel/padding combination is invalid");

    Matrix<Scalar> cols = Matrix<Scalar>::Zero(channels * kernel, out_len * batch);
    for (Index b = 0; b < batch; ++b)
        for (Index j = 0; j < out_len; ++j)
            for (Index k = 0; k < kernel; ++k)
            {
                const Index src = j + k - padding;
                if (src < 0 || src >= length)
                    continue;
                for (Index c = 0; c < channels; ++c)
                    cols(c * kernel + k, b * out_len + j) = x(c, b * length + src);
            }
    return cols;
}

/// Adjoint of im2col: scatters column gradients back onto the input layout.
template <typename Derived>
Matrix<typename Derived::Scalar> col2im(const Eigen::MatrixBase<Derived> &dcols, Index channels, Index length, Index batch,
                                        Index kernel, Index padding)
{
    using Scalar = typename Derived::Scalar;
    const Index out_len = conv_output_length(length, kernel, padding);
    Matrix<Scalar> dx = Matrix<Scalar>::Zero(channels, length * batch);
    for (Index b = 0; b < batch; ++b)
        for (Index j = 0; j < out_len; ++j)
            for (Index k = 0; k < kernel; ++k)
            {
                const Index src = j + k - padding;
                if (src < 0 || src >= length)
                    continue;
                for (Index c = 0; c < channels; ++c)
                    dx(c, b * length + src) += dcols(c * kernel + k, b * out_len + j);
            }
    return dx;
}

/// Cross-correlation of a single (channels x length) input, plus bias.
template <typename DerivedX, typename DerivedW, typename DerivedB>
Matrix<typename DerivedX::Scalar> conv1d(const Eigen::MatrixBase<DerivedX> &input, const Eigen::MatrixBase<DerivedW> &weights,
                                         const Eigen::MatrixBase<DerivedB> &bias, Index padding)
{
    const Index channels = input.rows();
    if (channels == 0 || weights.cols() % channels != 0 || bias.size() != weights.rows())
        throw Error(Errc::ShapeMismatch, "conv1d", "weights do not match input channels or bias");
    const Index kernel = weights.cols() / channels;
    if (kernel > input.cols() + 2 * padding)
        throw Error(Errc::ShapeMismatch, "conv1d", "kernel longer than padded input");
    const auto cols = im2col(input, input.cols(), 1, kernel, padding);
    return (weights * cols).colwise() + bias.derived();
}

/// Non-overlapping max pooling in ceiling mode over a batched feature map.
/// `argmax`, when given, receives the source column of each output element
/// (first maximum on ties), indexed as row * out_cols + col.
template <typename Derived>
Matrix<typename Derived::Scalar> maxpool1d(const Eigen::MatrixBase<Derived> &x, Index length, Index batch, Index window,
                                           std::vector<Index> *argmax = nullptr)
{
    using Scalar = typename Derived::Scalar;
    if (length < 1 || window < 1 || x.cols() != length * batch)
        throw Error(Errc::ShapeMismatch, "maxpool1d", "invalid pooling shape");
    const Index out_len = pool_output_length(length, window);
    const Index out_cols = out_len * batch;
    Matrix<Scalar> y(x.rows(), out_cols);
    if (argmax)
        argmax->assign(static_cast<std::size_t>(x.rows() * out_cols), 0);

    for (Index c = 0; c < x.rows(); ++c)
        for (Index b = 0; b < batch; ++b)
            for (Index j = 0; j < out_len; ++j)
            {
                const Index first = b * length + j * window;
                const Index last = b * length + std::min((j + 1) * window, length);
                Index best = first;
                for (Index s = first + 1; s < last; ++s)
                    if (x(c, s) > x(c, best))
                        best = s;
                y(c, b * out_len + j) = x(c, best);
                if (argmax)
                    (*argmax)[static_cast<std::size_t>(c * out_cols + b * out_len + j)] = best;
            }
    return y;
}

template <typename Derived>
Matrix<typename Derived::Scalar> maxpool1d(const Eigen::MatrixBase<Derived> &x, Index window)
{
    return maxpool1d(x, x.cols(), 1, window);
}

/// Column-wise softmax with max subtraction.
template <typename Derived>
Matrix<typename Derived::Scalar> softmax_columns(const Eigen::MatrixBase<Derived> &logits)
{
    using Scalar = typename Derived::Scalar;
    Matrix<Scalar> out(logits.rows(), logits.cols());
    for (Index b = 0; b < logits.cols(); ++b)
    {
        const Scalar top = logits.col(b).maxCoeff();
        out.col(b) = (logits.col(b).array() - top).exp().matrix();
        out.col(b) /= out.col(b).sum();
    }
    return out;
}

template <typename Derived>
auto relu(const Eigen::MatrixBase<Derived> &x)
{
    return x.cwiseMax(typename Derived::Scalar(0));
}

} // namespace beampos::nn

#endif // BEAMPOS_NN_OPS_HPP
