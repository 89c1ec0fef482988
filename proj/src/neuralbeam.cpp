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

#include "beampos/neuralbeam.hpp"
#include "beampos/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace beampos
{

namespace
{

// Evaluation passes run in chunks of this many samples.
constexpr std::size_t kEvalChunk = 1024;

struct ForwardCache
{
    std::vector<Eigen::MatrixXd> cols;       // im2col per conv block
    std::vector<Eigen::MatrixXd> pre;        // conv pre-activations
    std::vector<std::vector<Index>> argmax;  // pooling sources per block
    std::vector<Index> lengths;              // sequence length entering each block (+ final pooled)
    std::vector<Eigen::MatrixXd> dense_in;   // input of each dense layer
    std::vector<Eigen::MatrixXd> dense_pre;  // pre-activation of each dense layer
    Eigen::MatrixXd probabilities;
};

Eigen::MatrixXd run_forward(const ModelParams &params, const LayerSpec &spec, const Eigen::MatrixXd &inputs,
                            ForwardCache *cache)
{
    const Index channels = spec.input.channels();
    const Index length = spec.input.length();
    if (inputs.rows() != channels || length == 0 || inputs.cols() % length != 0)
        throw Error(Errc::ShapeMismatch, "input", "input does not match the model's input layout");
    const Index batch = inputs.cols() / length;

    Eigen::MatrixXd x = inputs;
    Index len = length;
    if (cache)
    {
        cache->cols.clear();
        cache->pre.clear();
        cache->argmax.clear();
        cache->lengths.clear();
        cache->dense_in.clear();
        cache->dense_pre.clear();
    }

    for (std::size_t i = 0; i < spec.conv.size(); ++i)
    {
        const auto &blk = spec.conv[i];
        Eigen::MatrixXd cols = nn::im2col(x, len, batch, blk.kernel, blk.padding);
        Eigen::MatrixXd pre = (params.conv_weight(i) * cols).colwise() + params.conv_bias(i).col(0);
        const Index conv_len = nn::conv_output_length(len, blk.kernel, blk.padding);
        std::vector<Index> arg;
        Eigen::MatrixXd pooled = nn::maxpool1d(nn::relu(pre), conv_len, batch, blk.pool, cache ? &arg : nullptr);
        if (cache)
        {
            cache->lengths.push_back(len);
            cache->cols.push_back(std::move(cols));
            cache->pre.push_back(std::move(pre));
            cache->argmax.push_back(std::move(arg));
        }
        len = nn::pool_output_length(conv_len, blk.pool);
        x = std::move(pooled);
    }
    if (cache)
        cache->lengths.push_back(len);

    // Flatten channel-major per sample: feature c*len + l.
    const Index width = x.rows() * len;
    Eigen::MatrixXd a(width, batch);
    for (Index b = 0; b < batch; ++b)
        for (Index c = 0; c < x.rows(); ++c)
            for (Index l = 0; l < len; ++l)
                a(c * len + l, b) = x(c, b * len + l);

    for (std::size_t j = 0; j < spec.dense.size(); ++j)
    {
        Eigen::MatrixXd z = (params.dense_weight(j) * a).colwise() + params.dense_bias(j).col(0);
        const bool last = j + 1 == spec.dense.size();
        Eigen::MatrixXd next = last ? z : Eigen::MatrixXd(nn::relu(z));
        if (cache)
        {
            cache->dense_in.push_back(std::move(a));
            cache->dense_pre.push_back(std::move(z));
        }
        a = std::move(next);
    }

    Eigen::MatrixXd probs = nn::softmax_columns(a);
    if (cache)
        cache->probabilities = probs;
    return probs;
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd &inputs, Index length, std::span<const std::size_t> samples)
{
    Eigen::MatrixXd out(inputs.rows(), length * static_cast<Index>(samples.size()));
    for (std::size_t k = 0; k < samples.size(); ++k)
        out.middleCols(static_cast<Index>(k) * length, length) = inputs.middleCols(static_cast<Index>(samples[k]) * length, length);
    return out;
}

void check_labels(std::span<const std::size_t> labels, Index classes)
{
    for (const std::size_t l : labels)
        if (static_cast<Index>(l) >= classes)
            throw Error(Errc::CodebookMismatch, "label", "beam index " + std::to_string(l) + " exceeds model classes");
}

} // namespace

LayerSpec LayerSpec::standard(Index classes, InputSpec input)
{
    LayerSpec s;
    s.input = input;
    s.conv = {{32, 3, 2, 1}, {64, 3, 2, 1}, {128, 3, 2, 1}};
    s.dense = {256, classes};
    return s;
}

std::vector<Index> conv_lengths(const LayerSpec &spec)
{
    std::vector<Index> lengths{spec.input.length()};
    for (const auto &blk : spec.conv)
    {
        const Index len = lengths.back();
        if (blk.kernel < 1 || blk.pool < 1 || blk.padding < 0 || blk.out_channels < 1)
            throw Error(Errc::ShapeMismatch, "conv", "conv block counts must be positive");
        if (blk.kernel > len + 2 * blk.padding)
            throw Error(Errc::ShapeMismatch, "conv", "kernel longer than padded sequence");
        lengths.push_back(nn::pool_output_length(nn::conv_output_length(len, blk.kernel, blk.padding), blk.pool));
    }
    return lengths;
}

void validate(const LayerSpec &spec)
{
    if (spec.input.window < 1)
        throw Error(Errc::ShapeMismatch, "window", "window must be at least 1");
    if (spec.conv.empty())
        throw Error(Errc::ShapeMismatch, "conv", "at least one conv block is required");
    if (spec.dense.empty())
        throw Error(Errc::ShapeMismatch, "dense", "at least one dense layer is required");
    for (const Index w : spec.dense)
        if (w < 1)
            throw Error(Errc::ShapeMismatch, "dense", "dense widths must be positive");
    conv_lengths(spec);
}

Index flatten_width(const LayerSpec &spec)
{
    return spec.conv.back().out_channels * conv_lengths(spec).back();
}

std::vector<std::string> tensor_names(const LayerSpec &spec)
{
    std::vector<std::string> names;
    for (std::size_t i = 0; i < spec.conv.size(); ++i)
    {
        names.push_back("conv" + std::to_string(i) + ".weight");
        names.push_back("conv" + std::to_string(i) + ".bias");
    }
    for (std::size_t j = 0; j < spec.dense.size(); ++j)
    {
        names.push_back("dense" + std::to_string(j) + ".weight");
        names.push_back("dense" + std::to_string(j) + ".bias");
    }
    return names;
}

Index ModelParams::parameter_count() const
{
    Index n = 0;
    for (const auto &t : tensors)
        n += t.size();
    return n;
}

bool ModelParams::all_finite() const
{
    return std::all_of(tensors.begin(), tensors.end(), [](const auto &t) { return t.allFinite(); });
}

bool ModelParams::operator==(const ModelParams &other) const
{
    if (conv_count != other.conv_count || tensors.size() != other.tensors.size())
        return false;
    for (std::size_t i = 0; i < tensors.size(); ++i)
        if (tensors[i].rows() != other.tensors[i].rows() || tensors[i].cols() != other.tensors[i].cols() ||
            !(tensors[i].array() == other.tensors[i].array()).all())
            return false;
    return true;
}

ModelParams zero_params(const LayerSpec &spec)
{
    validate(spec);
    ModelParams p;
    p.conv_count = spec.conv.size();
    Index in_channels = spec.input.channels();
    for (const auto &blk : spec.conv)
    {
        p.tensors.push_back(Eigen::MatrixXd::Zero(blk.out_channels, in_channels * blk.kernel));
        p.tensors.push_back(Eigen::MatrixXd::Zero(blk.out_channels, 1));
        in_channels = blk.out_channels;
    }
    Index in_width = flatten_width(spec);
    for (const Index w : spec.dense)
    {
        p.tensors.push_back(Eigen::MatrixXd::Zero(w, in_width));
        p.tensors.push_back(Eigen::MatrixXd::Zero(w, 1));
        in_width = w;
    }
    return p;
}

ModelParams zeros_like(const ModelParams &p)
{
    ModelParams z;
    z.conv_count = p.conv_count;
    for (const auto &t : p.tensors)
        z.tensors.push_back(Eigen::MatrixXd::Zero(t.rows(), t.cols()));
    return z;
}

ModelParams init_params(const LayerSpec &spec, std::uint64_t seed)
{
    ModelParams p = zero_params(spec);
    Rng rng(mix_seed(seed, 0x1417));
    for (std::size_t t = 0; t < p.tensors.size(); t += 2)
    {
        auto &w = p.tensors[t];
        auto &b = p.tensors[t + 1];
        // Conv fan-in is in_channels*kernel, dense fan-in is the input width;
        // both equal the weight's column count.
        const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols()));
        for (Index c = 0; c < w.cols(); ++c)
            for (Index r = 0; r < w.rows(); ++r)
                w(r, c) = rng.uniform(-bound, bound);
        for (Index r = 0; r < b.rows(); ++r)
            b(r, 0) = rng.uniform(-bound, bound);
    }
    return p;
}

void check_shapes(const ModelParams &params, const LayerSpec &spec)
{
    const ModelParams ref = zero_params(spec);
    bool ok = params.conv_count == ref.conv_count && params.tensors.size() == ref.tensors.size();
    for (std::size_t i = 0; ok && i < ref.tensors.size(); ++i)
        ok = params.tensors[i].rows() == ref.tensors[i].rows() && params.tensors[i].cols() == ref.tensors[i].cols();
    if (!ok)
        throw Error(Errc::ShapeMismatch, "params", "parameter tensors do not match the layer spec");
}

void validate(const TrainingConfig &cfg)
{
    if (!(cfg.learning_rate >= 0.0))
        throw Error(Errc::InvalidArgument, "learning_rate", "learning rate must be non-negative");
    if (!(cfg.weight_decay >= 0.0))
        throw Error(Errc::InvalidArgument, "weight_decay", "weight decay must be non-negative");
    if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) || !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0))
        throw Error(Errc::InvalidArgument, "beta", "betas must lie in [0, 1)");
    if (!(cfg.epsilon > 0.0))
        throw Error(Errc::InvalidArgument, "epsilon", "epsilon must be positive");
    if (cfg.batch_size < 1)
        throw Error(Errc::InvalidArgument, "batch_size", "batch size must be at least 1");
}

std::vector<std::size_t> rank_indices(const Eigen::VectorXd &scores, std::size_t m)
{
    std::vector<std::size_t> idx(static_cast<std::size_t>(scores.size()));
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    m = std::min(m, idx.size());
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m), idx.end(), [&](std::size_t a, std::size_t b) {
        const double sa = scores(static_cast<Index>(a));
        const double sb = scores(static_cast<Index>(b));
        return sa > sb || (sa == sb && a < b);
    });
    idx.resize(m);
    return idx;
}

Eigen::MatrixXd forward_batch(const ModelParams &params, const LayerSpec &spec, const Eigen::MatrixXd &inputs)
{
    return run_forward(params, spec, inputs, nullptr);
}

Prediction forward(const ModelParams &params, const LayerSpec &spec, const Eigen::MatrixXd &input, std::size_t m)
{
    if (input.cols() != spec.input.length())
        throw Error(Errc::ShapeMismatch, "input", "expected a single sample");
    if (m < 1 || static_cast<Index>(m) > spec.classes())
        throw Error(Errc::InvalidArgument, "m", "m must lie in [1, classes]");
    Prediction p;
    p.probabilities = run_forward(params, spec, input, nullptr).col(0);
    p.top_m = rank_indices(p.probabilities, m);
    return p;
}

double cross_entropy(const Eigen::VectorXd &probabilities, std::size_t true_index)
{
    if (static_cast<Index>(true_index) >= probabilities.size())
        throw Error(Errc::ShapeMismatch, "true_index", "label outside the probability vector");
    return -std::log(std::max(probabilities(static_cast<Index>(true_index)), kProbabilityFloor));
}

double cross_entropy(const Eigen::MatrixXd &probabilities, std::span<const std::size_t> labels)
{
    if (static_cast<Index>(labels.size()) != probabilities.cols() || labels.empty())
        throw Error(Errc::ShapeMismatch, "labels", "one label per column is required");
    CompensatedSum<double> sum;
    for (std::size_t b = 0; b < labels.size(); ++b)
        sum.add(cross_entropy(Eigen::VectorXd(probabilities.col(static_cast<Index>(b))), labels[b]));
    return sum.value() / static_cast<double>(labels.size());
}

ModelParams backward(const ModelParams &params, const LayerSpec &spec, const Batch &batch, double *loss)
{
    if (batch.labels.empty())
        throw Error(Errc::ShapeMismatch, "batch", "batch is empty");
    check_labels(batch.labels, spec.classes());

    ForwardCache cache;
    run_forward(params, spec, batch.inputs, &cache);
    const Index n = static_cast<Index>(batch.size());
    if (cache.probabilities.cols() != n)
        throw Error(Errc::ShapeMismatch, "batch", "input width does not match label count");
    if (loss)
        *loss = cross_entropy(cache.probabilities, batch.labels);

    ModelParams grad = zeros_like(params);

    // d(mean CE)/d(logits) = (p - onehot) / n
    Eigen::MatrixXd dz = cache.probabilities;
    for (Index b = 0; b < n; ++b)
        dz(static_cast<Index>(batch.labels[static_cast<std::size_t>(b)]), b) -= 1.0;
    dz /= static_cast<double>(n);

    Eigen::MatrixXd dflat;
    for (std::size_t jj = spec.dense.size(); jj-- > 0;)
    {
        grad.dense_weight(jj).noalias() = dz * cache.dense_in[jj].transpose();
        grad.dense_bias(jj) = dz.rowwise().sum();
        Eigen::MatrixXd da = params.dense_weight(jj).transpose() * dz;
        if (jj == 0)
        {
            dflat = std::move(da);
            break;
        }
        dz = da.cwiseProduct((cache.dense_pre[jj - 1].array() > 0.0).cast<double>().matrix());
    }

    // Unflatten into the last block's pooled layout.
    const std::size_t n_conv = spec.conv.size();
    Index len = cache.lengths.back();
    Index ch = spec.conv.back().out_channels;
    Eigen::MatrixXd dpooled(ch, len * n);
    for (Index b = 0; b < n; ++b)
        for (Index c = 0; c < ch; ++c)
            for (Index l = 0; l < len; ++l)
                dpooled(c, b * len + l) = dflat(c * len + l, b);

    for (std::size_t ii = n_conv; ii-- > 0;)
    {
        const auto &blk = spec.conv[ii];
        const Index in_len = cache.lengths[ii];
        const Eigen::MatrixXd &pre = cache.pre[ii];
        const auto &arg = cache.argmax[ii];

        Eigen::MatrixXd dpre = Eigen::MatrixXd::Zero(pre.rows(), pre.cols());
        const Index out_cols = dpooled.cols();
        for (Index c = 0; c < dpooled.rows(); ++c)
            for (Index k = 0; k < out_cols; ++k)
            {
                const Index src = arg[static_cast<std::size_t>(c * out_cols + k)];
                if (pre(c, src) > 0.0)
                    dpre(c, src) += dpooled(c, k);
            }

        grad.conv_weight(ii).noalias() = dpre * cache.cols[ii].transpose();
        grad.conv_bias(ii) = dpre.rowwise().sum();
        if (ii == 0)
            break;
        const Eigen::MatrixXd dcols = params.conv_weight(ii).transpose() * dpre;
        const Index in_channels = spec.conv[ii - 1].out_channels;
        dpooled = nn::col2im(dcols, in_channels, in_len, n, blk.kernel, blk.padding);
    }
    return grad;
}

AdamState make_adam_state(const ModelParams &params)
{
    return {zeros_like(params), zeros_like(params), 0};
}

void adam_step(ModelParams &params, const ModelParams &gradients, AdamState &state, const TrainingConfig &cfg)
{
    if (gradients.tensors.size() != params.tensors.size() || state.first_moment.tensors.size() != params.tensors.size())
        throw Error(Errc::ShapeMismatch, "adam", "state does not match parameters");
    ++state.step;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(cfg.beta1, t);
    const double bc2 = 1.0 - std::pow(cfg.beta2, t);

    for (std::size_t i = 0; i < params.tensors.size(); ++i)
    {
        auto p = params.tensors[i].array();
        auto m = state.first_moment.tensors[i].array();
        auto v = state.second_moment.tensors[i].array();
        const Eigen::ArrayXXd g = gradients.tensors[i].array() + cfg.weight_decay * p;
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * g;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * g.square();
        p -= cfg.learning_rate * (m / bc1) / ((v / bc2).sqrt() + cfg.epsilon);
    }
}

NormalizationParams fit_input_normalization(const Dataset &train, const InputSpec &input)
{
    std::vector<GeoPosition> pts = train.tx_positions();
    if (input.source == PositionSource::TxRx)
        for (const auto &s : train.samples)
        {
            if (!s.rx_pos)
                throw Error(Errc::MissingInput, "rx_pos", "receiver positions are required for tx+rx input");
            pts.push_back(*s.rx_pos);
        }
    return fit_normalization(pts);
}

Eigen::MatrixXd build_inputs(const Dataset &d, const InputSpec &input, const NormalizationParams &norm)
{
    const Index coords = input.coordinates();
    const Index n = static_cast<Index>(d.size());

    // One column of normalized coordinates per sample.
    Eigen::MatrixXd feat(coords, n);
    for (Index i = 0; i < n; ++i)
    {
        const Sample &s = d.samples[static_cast<std::size_t>(i)];
        const NormalizedPosition tx = normalize(s.tx_pos, norm);
        feat(0, i) = tx.u;
        feat(1, i) = tx.v;
        if (input.source == PositionSource::TxRx)
        {
            if (!s.rx_pos)
                throw Error(Errc::MissingInput, "rx_pos", "receiver positions are required for tx+rx input");
            const NormalizedPosition rx = normalize(*s.rx_pos, norm);
            feat(2, i) = rx.u;
            feat(3, i) = rx.v;
        }
    }

    if (input.window == 1)
    {
        // (1 x coords*n): the coordinates form the sequence.
        Eigen::MatrixXd out(1, coords * n);
        for (Index i = 0; i < n; ++i)
            out.middleCols(i * coords, coords) = feat.col(i).transpose();
        return out;
    }

    const Index w = input.window;
    Eigen::MatrixXd out(coords, w * n);
    for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < w; ++k)
            out.col(i * w + k) = feat.col(std::max<Index>(0, i - (w - 1 - k)));
    return out;
}

std::vector<std::size_t> labels_of(const Dataset &d)
{
    std::vector<std::size_t> labels;
    labels.reserve(d.size());
    for (const auto &s : d.samples)
        labels.push_back(s.optimal_index);
    return labels;
}

double mean_loss(const ModelParams &params, const LayerSpec &spec, const Eigen::MatrixXd &inputs,
                 std::span<const std::size_t> labels)
{
    if (labels.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const Index len = spec.input.length();
    CompensatedSum<double> sum;
    for (std::size_t start = 0; start < labels.size(); start += kEvalChunk)
    {
        const std::size_t count = std::min(kEvalChunk, labels.size() - start);
        const Eigen::MatrixXd probs = forward_batch(params, spec, inputs.middleCols(static_cast<Index>(start) * len, static_cast<Index>(count) * len));
        for (std::size_t b = 0; b < count; ++b)
            sum.add(-std::log(std::max(probs(static_cast<Index>(labels[start + b]), static_cast<Index>(b)), kProbabilityFloor)));
    }
    return sum.value() / static_cast<double>(labels.size());
}

double top1_accuracy(const ModelParams &params, const LayerSpec &spec, const Eigen::MatrixXd &inputs,
                     std::span<const std::size_t> labels)
{
    if (labels.empty())
        return std::numeric_limits<double>::quiet_NaN();
    const Index len = spec.input.length();
    std::size_t hits = 0;
    for (std::size_t start = 0; start < labels.size(); start += kEvalChunk)
    {
        const std::size_t count = std::min(kEvalChunk, labels.size() - start);
        const Eigen::MatrixXd probs = forward_batch(params, spec, inputs.middleCols(static_cast<Index>(start) * len, static_cast<Index>(count) * len));
        for (std::size_t b = 0; b < count; ++b)
            hits += rank_indices(probs.col(static_cast<Index>(b)), 1).front() == labels[start + b];
    }
    return static_cast<double>(hits) / static_cast<double>(labels.size());
}

TrainResult train(const Dataset &train_set, const Dataset &val_set, const LayerSpec &spec, const TrainingConfig &cfg,
                  const NormalizationParams &norm)
{
    validate(spec);
    validate(cfg);
    if (train_set.empty())
        throw Error(Errc::EmptyDataset, "train", "training set is empty");
    if (static_cast<Index>(train_set.codebook_size) != spec.classes())
        throw Error(Errc::CodebookMismatch, "classes", "model classes do not match the dataset codebook size");

    const Eigen::MatrixXd train_inputs = build_inputs(train_set, spec.input, norm);
    const std::vector<std::size_t> train_labels = labels_of(train_set);
    const Eigen::MatrixXd val_inputs = build_inputs(val_set, spec.input, norm);
    const std::vector<std::size_t> val_labels = labels_of(val_set);
    check_labels(train_labels, spec.classes());
    check_labels(val_labels, spec.classes());

    TrainResult result;
    result.params = init_params(spec, cfg.seed);
    AdamState state = make_adam_state(result.params);
    Rng shuffle_rng(mix_seed(cfg.seed, 0x5EED));

    const Index len = spec.input.length();
    std::vector<std::size_t> order(train_labels.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    Batch batch;
    for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch)
    {
        shuffle_rng.shuffle(std::span<std::size_t>(order));
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size)
        {
            const std::size_t count = std::min(cfg.batch_size, order.size() - start);
            const std::span<const std::size_t> ids(order.data() + start, count);
            batch.inputs = gather_columns(train_inputs, len, ids);
            batch.labels.resize(count);
            for (std::size_t k = 0; k < count; ++k)
                batch.labels[k] = train_labels[ids[k]];
            const ModelParams grad = backward(result.params, spec, batch);
            adam_step(result.params, grad, state, cfg);
        }
        if (!result.params.all_finite())
            throw Error(Errc::Numeric, "params", "training diverged at epoch " + std::to_string(epoch));

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = mean_loss(result.params, spec, train_inputs, train_labels);
        rec.val_top1 = top1_accuracy(result.params, spec, val_inputs, val_labels);
        result.history.push_back(rec);
    }
    return result;
}

Prediction predict_topM(const BeamModel &model, const GeoPosition &tx, std::size_t m, const std::optional<GeoPosition> &rx)
{
    if (model.spec.input.window != 1)
        throw Error(Errc::InvalidArgument, "window", "single-fix prediction needs a window-1 model");
    Sample s;
    s.tx_pos = validate_position(tx);
    if (rx)
        s.rx_pos = validate_position(*rx);
    Dataset d;
    d.codebook_size = static_cast<std::size_t>(model.spec.classes());
    d.samples.push_back(s);
    return forward(model.params, model.spec, build_inputs(d, model.spec.input, model.norm), m);
}

std::vector<std::vector<std::size_t>> rank_dataset(const BeamModel &model, const Dataset &d, std::size_t m)
{
    const Eigen::MatrixXd inputs = build_inputs(d, model.spec.input, model.norm);
    const Index len = model.spec.input.length();
    std::vector<std::vector<std::size_t>> out;
    out.reserve(d.size());
    for (std::size_t start = 0; start < d.size(); start += kEvalChunk)
    {
        const std::size_t count = std::min(kEvalChunk, d.size() - start);
        const Eigen::MatrixXd probs =
            forward_batch(model.params, model.spec, inputs.middleCols(static_cast<Index>(start) * len, static_cast<Index>(count) * len));
        for (std::size_t b = 0; b < count; ++b)
            out.push_back(rank_indices(probs.col(static_cast<Index>(b)), m));
    }
    return out;
}

} // namespace beampos
