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

#ifndef BEAMPOS_NEURALBEAM_HPP
#define BEAMPOS_NEURALBEAM_HPP

#include "beampos/geodata.hpp"
#include "beampos/ingest.hpp"
#include "beampos/nn_ops.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace beampos
{

using Eigen::Index;

/// conv -> ReLU -> maxpool
struct ConvBlockSpec
{
    Index out_channels = 32;
    Index kernel = 3;
    Index pool = 2;
    Index padding = 1;
};

enum class PositionSource
{
    Tx,  ///< transmitter fix only
    TxRx ///< transmitter and receiver fixes
};

/// Model input layout. With window == 1 the normalized coordinates form a
/// single-channel sequence (u_tx, v_tx[, u_rx, v_rx]). With window > 1 each
/// coordinate is a channel and the last `window` fixes form the sequence.
struct InputSpec
{
    PositionSource source = PositionSource::Tx;
    Index window = 1;

    Index coordinates() const { return source == PositionSource::Tx ? 2 : 4; }
    Index channels() const { return window == 1 ? 1 : coordinates(); }
    Index length() const { return window == 1 ? coordinates() : window; }
};

struct LayerSpec
{
    InputSpec input;
    std::vector<ConvBlockSpec> conv;
    std::vector<Index> dense; // last entry is the number of classes

    Index classes() const { return dense.empty() ? 0 : dense.back(); }

    /// Three conv blocks {32, 64, 128} (kernel 3, padding 1, pool 2), then
    /// dense {256, classes}.
    static LayerSpec standard(Index classes = 64, InputSpec input = {});
};

/// Throws ShapeMismatch when any block would produce an empty sequence.
void validate(const LayerSpec &spec);

/// Sequence length entering each conv block, plus the final pooled length.
std::vector<Index> conv_lengths(const LayerSpec &spec);

/// Flattened width after the last conv block.
Index flatten_width(const LayerSpec &spec);

/// All learnable tensors, in order: for each conv block weight
/// (out x in*kernel) and bias (out x 1), then for each dense layer weight
/// (out x in) and bias (out x 1).
struct ModelParams
{
    std::vector<Eigen::MatrixXd> tensors;

    std::size_t conv_count = 0;

    Eigen::MatrixXd &conv_weight(std::size_t i) { return tensors[2 * i]; }
    Eigen::MatrixXd &conv_bias(std::size_t i) { return tensors[2 * i + 1]; }
    Eigen::MatrixXd &dense_weight(std::size_t j) { return tensors[2 * (conv_count + j)]; }
    Eigen::MatrixXd &dense_bias(std::size_t j) { return tensors[2 * (conv_count + j) + 1]; }
    const Eigen::MatrixXd &conv_weight(std::size_t i) const { return tensors[2 * i]; }
    const Eigen::MatrixXd &conv_bias(std::size_t i) const { return tensors[2 * i + 1]; }
    const Eigen::MatrixXd &dense_weight(std::size_t j) const { return tensors[2 * (conv_count + j)]; }
    const Eigen::MatrixXd &dense_bias(std::size_t j) const { return tensors[2 * (conv_count + j) + 1]; }

    Index parameter_count() const;
    bool all_finite() const;
    bool operator==(const ModelParams &other) const;
};

std::vector<std::string> tensor_names(const LayerSpec &spec);

/// Zero-valued tensors with the shapes `spec` requires.
ModelParams zero_params(const LayerSpec &spec);
ModelParams zeros_like(const ModelParams &p);

/// Uniform in +-1/sqrt(fan_in) for weights and biases alike.
ModelParams init_params(const LayerSpec &spec, std::uint64_t seed);

/// Throws ShapeMismatch if the tensors do not fit `spec`.
void check_shapes(const ModelParams &params, const LayerSpec &spec);

struct TrainingConfig
{
    double learning_rate = 0.01;
    double weight_decay = 1e-4;
    std::size_t batch_size = 128;
    std::size_t epochs = 30;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    std::uint64_t seed = 0;
};

void validate(const TrainingConfig &cfg);

struct Prediction
{
    Eigen::VectorXd probabilities;
    std::vector<std::size_t> top_m;
};

/// Indices of the m largest entries, descending, lowest index first on ties.
std::vector<std::size_t> rank_indices(const Eigen::VectorXd &scores, std::size_t m);

/// Class probabilities (classes x batch) for a batched input laid out as
/// (channels x length*batch).
Eigen::MatrixXd forward_batch(const ModelParams &params, const LayerSpec &spec, const Eigen::MatrixXd &inputs);

/// Single-sample forward pass on a (channels x length) input.
Prediction forward(const ModelParams &params, const LayerSpec &spec, const Eigen::MatrixXd &input, std::size_t m = 1);

inline constexpr double kProbabilityFloor = 1e-12;

/// -log(max(p[true_index], 1e-12))
double cross_entropy(const Eigen::VectorXd &probabilities, std::size_t true_index);

/// Mean cross-entropy over the columns of `probabilities`.
double cross_entropy(const Eigen::MatrixXd &probabilities, std::span<const std::size_t> labels);

struct Batch
{
    Eigen::MatrixXd inputs; // channels x length*size
    std::vector<std::size_t> labels;

    std::size_t size() const { return labels.size(); }
};

/// Gradient of the batch-mean cross-entropy with respect to every tensor.
/// `loss`, when given, receives the batch loss at `params`.
ModelParams backward(const ModelParams &params, const LayerSpec &spec, const Batch &batch, double *loss = nullptr);

struct AdamState
{
    ModelParams first_moment;
    ModelParams second_moment;
    std::uint64_t step = 0;
};

AdamState make_adam_state(const ModelParams &params);

/// Adam with bias correction; weight decay is added to the gradient (coupled
/// L2) before the moment updates.
void adam_step(ModelParams &params, const ModelParams &gradients, AdamState &state, const TrainingConfig &cfg);

/// Normalization fit over every position the input spec consumes from
/// `train` (transmitter fixes, plus receiver fixes for TxRx).
NormalizationParams fit_input_normalization(const Dataset &train, const InputSpec &input);

/// Model inputs for every sample, (channels x length*n). Window mode looks back
/// along the dataset's own sample order and repeats the first fix at the start.
Eigen::MatrixXd build_inputs(const Dataset &d, const InputSpec &input, const NormalizationParams &norm);

std::vector<std::size_t> labels_of(const Dataset &d);

/// Mean cross-entropy of the model over a labelled input set, evaluated in
/// fixed order.
double mean_loss(const ModelParams &params, const LayerSpec &spec, const Eigen::MatrixXd &inputs,
                 std::span<const std::size_t> labels);

/// Fraction of samples whose top-1 prediction equals the label.
double top1_accuracy(const ModelParams &params, const LayerSpec &spec, const Eigen::MatrixXd &inputs,
                     std::span<const std::size_t> labels);

struct EpochRecord
{
    std::size_t epoch = 0; // 1-based
    double train_loss = 0.0;
    double val_top1 = 0.0; // NaN when the validation set is empty

    bool operator==(const EpochRecord &) const = default;
};

struct TrainResult
{
    ModelParams params;
    std::vector<EpochRecord> history;
};

/// Mini-batch Adam training from a seeded initialization. Returns the
/// final-epoch parameters; validation accuracy is recorded but not used for
/// model selection.
TrainResult train(const Dataset &train_set, const Dataset &val_set, const LayerSpec &spec, const TrainingConfig &cfg,
                  const NormalizationParams &norm);

/// Everything needed to run inference, as stored in a checkpoint.
struct BeamModel
{
    LayerSpec spec;
    ModelParams params;
    NormalizationParams norm;
    std::uint64_t seed = 0;
};

Prediction predict_topM(const BeamModel &model, const GeoPosition &tx, std::size_t m,
                        const std::optional<GeoPosition> &rx = std::nullopt);

/// Full ranking (or the top m) for every sample of a dataset.
std::vector<std::vector<std::size_t>> rank_dataset(const BeamModel &model, const Dataset &d, std::size_t m);

nlohmann::json layer_spec_to_json(const LayerSpec &spec);
LayerSpec layer_spec_from_json(const nlohmann::json &j, const std::string &path = "model");

nlohmann::json checkpoint_to_json(const BeamModel &model);
BeamModel checkpoint_from_json(const nlohmann::json &j);
void save_checkpoint(const BeamModel &model, const std::filesystem::path &path);
BeamModel load_checkpoint(const std::filesystem::path &path);

void write_history_csv(const std::vector<EpochRecord> &history, std::ostream &out);
void write_history_csv(const std::vector<EpochRecord> &history, const std::filesystem::path &path);

} // namespace beampos

#endif // BEAMPOS_NEURALBEAM_HPP
