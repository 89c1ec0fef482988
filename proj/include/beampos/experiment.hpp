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

#ifndef BEAMPOS_EXPERIMENT_HPP
#define BEAMPOS_EXPERIMENT_HPP

#include "beampos/evalmetrics.hpp"
#include "beampos/fingerprint.hpp"
#include "beampos/neuralbeam.hpp"
#include "beampos/scenario.hpp"

#include "json.hpp"

#include <filesystem>
#include <functional>
#include <optional>

namespace beampos
{

struct BaselineConfig
{
    std::size_t bins_u = 32;
    std::size_t bins_v = 32;
    bool include_validation = true; // build from train+val, test on the shared test part
};

/// A full experiment as recorded in its JSON config file.
struct ExperimentConfig
{
    std::uint64_t seed = 0;
    std::optional<ScenarioConfig> synthetic;
    std::optional<std::filesystem::path> csv;
    SplitSpec split;
    LayerSpec model = LayerSpec::standard();
    bool model_classes_explicit = false;
    TrainingConfig training;
    BaselineConfig baseline;
    std::vector<std::size_t> m_values = kDefaultMValues;
    std::size_t repeats = 1;
    std::filesystem::path output_dir = "out";
    std::size_t threads = 1;
};

/// Seed of each random consumer, all derived from the master seed.
struct DerivedSeeds
{
    std::uint64_t master = 0;
    std::uint64_t split = 0;
    std::uint64_t channel = 0;

    std::uint64_t training(std::size_t repeat) const;
};

DerivedSeeds derive_seeds(std::uint64_t master);

/// Pushes the master seed into every sub-config.
void apply_seed(ExperimentConfig &cfg, std::uint64_t seed);

/// Relative CSV paths resolve against `base_dir`.
ExperimentConfig experiment_from_json(const nlohmann::json &j, const std::filesystem::path &base_dir = {});
nlohmann::json experiment_to_json(const ExperimentConfig &cfg);
ExperimentConfig load_experiment(const std::filesystem::path &path);

/// Reads a JSON file; malformed text raises a Config error naming the nearest field.
nlohmann::json load_json_document(const std::filesystem::path &path);

/// Throws Config errors for inconsistent combinations.
void validate(const ExperimentConfig &cfg);

Dataset resolve_dataset(const ExperimentConfig &cfg);

/// Model layer spec with the output width matched to the dataset codebook.
LayerSpec model_spec_for(const ExperimentConfig &cfg, std::size_t codebook_size);

struct TrainedModel
{
    BeamModel model;
    std::vector<EpochRecord> history;
};

/// Fits normalization on the training part and trains with the seed of `repeat`.
TrainedModel train_model(const ExperimentConfig &cfg, const DatasetSplit &split, std::size_t repeat = 0);

struct Baseline
{
    FingerprintDatabase db;
    NormalizationParams norm;
};

Baseline build_baseline(const ExperimentConfig &cfg, const DatasetSplit &split);

CandidateLists rank_baseline(const Baseline &baseline, const Dataset &test);

/// Produces full beam rankings for the test set in run `repeat`.
using RankingFn = std::function<CandidateLists(const Dataset &test, std::size_t repeat)>;

/// Runs every repeat of both predictors on the shared test part and
/// aggregates mean and standard deviation per metric and M.
SummaryReport run_evaluation(const ExperimentConfig &cfg, const DatasetSplit &split, const RankingFn &model,
                             const RankingFn &baseline);

/// Train-and-evaluate for every repeat, or evaluate a fixed checkpoint.
SummaryReport run_experiment(const ExperimentConfig &cfg, const DatasetSplit &split,
                             const std::optional<BeamModel> &checkpoint = std::nullopt);

void write_report_files(const SummaryReport &report, const std::filesystem::path &dir, bool emit_svg);

/// CLI exit code for an error: 2 config/input content, 3 missing input, 4 runtime failure.
int exit_code_for(const Error &e);

} // namespace beampos

#endif // BEAMPOS_EXPERIMENT_HPP
