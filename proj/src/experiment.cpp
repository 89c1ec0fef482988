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

#include "beampos/experiment.hpp"
#include "beampos/numeric.hpp"
#include "json_util.hpp"

#include <algorithm>

namespace beampos
{

namespace
{

const char *split_mode_name(SplitMode m)
{
    return m == SplitMode::Shuffle ? "shuffle" : "sequential";
}

} // namespace

std::uint64_t DerivedSeeds::training(std::size_t repeat) const
{
    return mix_seed(master, 100 + repeat);
}

DerivedSeeds derive_seeds(std::uint64_t master)
{
    return {master, mix_seed(master, 1), mix_seed(master, 2)};
}

void apply_seed(ExperimentConfig &cfg, std::uint64_t seed)
{
    const DerivedSeeds s = derive_seeds(seed);
    cfg.seed = seed;
    cfg.split.seed = s.split;
    if (cfg.synthetic)
        cfg.synthetic->channel.seed = s.channel;
    cfg.training.seed = s.training(0);
}

ExperimentConfig experiment_from_json(const nlohmann::json &j, const std::filesystem::path &base_dir)
{
    using detail::read_field;
    detail::require_object(j, "");
    detail::reject_unknown_keys(j, "", {"seed", "dataset", "split", "model", "training", "baseline", "m_values", "repeats",
                                        "output_dir", "threads"});

    ExperimentConfig cfg;
    const std::uint64_t seed = read_field<std::uint64_t>(j, "", "seed", 0);

    if (!j.contains("dataset"))
        throw Error(Errc::Config, "dataset", "a dataset source is required");
    const auto &ds = j.at("dataset");
    detail::require_object(ds, "dataset");
    detail::reject_unknown_keys(ds, "dataset", {"synthetic", "csv"});
    if (ds.contains("synthetic") == ds.contains("csv"))
        throw Error(Errc::Config, "dataset", "exactly one of dataset.synthetic or dataset.csv is required");
    if (ds.contains("csv"))
    {
        std::filesystem::path p = read_field<std::string>(ds, "dataset", "csv", "");
        cfg.csv = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
    }
    else
    {
        try
        {
            cfg.synthetic = scenario_from_json(ds.at("synthetic"));
        }
        catch (const Error &e)
        {
            throw Error(Errc::Config, detail::join_path("dataset.synthetic", e.field()), e.what());
        }
    }

    if (j.contains("split"))
    {
        const auto &s = j.at("split");
        detail::require_object(s, "split");
        detail::reject_unknown_keys(s, "split", {"train", "val", "test", "mode"});
        cfg.split.train_frac = read_field<double>(s, "split", "train", cfg.split.train_frac);
        cfg.split.val_frac = read_field<double>(s, "split", "val", cfg.split.val_frac);
        cfg.split.test_frac = read_field<double>(s, "split", "test", cfg.split.test_frac);
        const std::string mode = read_field<std::string>(s, "split", "mode", "shuffle");
        if (mode == "shuffle")
            cfg.split.mode = SplitMode::Shuffle;
        else if (mode == "sequential")
            cfg.split.mode = SplitMode::Sequential;
        else
            throw Error(Errc::Config, "split.mode", "expected \"shuffle\" or \"sequential\"");
    }

    if (j.contains("model"))
    {
        cfg.model = layer_spec_from_json(j.at("model"), "model");
        cfg.model_classes_explicit = j.at("model").contains("dense");
    }

    if (j.contains("training"))
    {
        const auto &t = j.at("training");
        const std::string p = "training";
        detail::require_object(t, p);
        detail::reject_unknown_keys(t, p, {"learning_rate", "weight_decay", "batch_size", "epochs", "beta1", "beta2", "epsilon"});
        auto &tc = cfg.training;
        tc.learning_rate = read_field<double>(t, p, "learning_rate", tc.learning_rate);
        tc.weight_decay = read_field<double>(t, p, "weight_decay", tc.weight_decay);
        tc.batch_size = read_field<std::size_t>(t, p, "batch_size", tc.batch_size);
        tc.epochs = read_field<std::size_t>(t, p, "epochs", tc.epochs);
        tc.beta1 = read_field<double>(t, p, "beta1", tc.beta1);
        tc.beta2 = read_field<double>(t, p, "beta2", tc.beta2);
        tc.epsilon = read_field<double>(t, p, "epsilon", tc.epsilon);
    }

    if (j.contains("baseline"))
    {
        const auto &b = j.at("baseline");
        detail::require_object(b, "baseline");
        detail::reject_unknown_keys(b, "baseline", {"bins_u", "bins_v", "include_validation"});
        cfg.baseline.bins_u = read_field<std::size_t>(b, "baseline", "bins_u", cfg.baseline.bins_u);
        cfg.baseline.bins_v = read_field<std::size_t>(b, "baseline", "bins_v", cfg.baseline.bins_v);
        if (b.contains("include_validation"))
        {
            if (!b.at("include_validation").is_boolean())
                throw Error(Errc::Config, "baseline.include_validation", "expected a boolean");
            cfg.baseline.include_validation = b.at("include_validation").get<bool>();
        }
    }

    if (j.contains("m_values"))
    {
        const auto &m = j.at("m_values");
        if (!m.is_array() || m.empty())
            throw Error(Errc::Config, "m_values", "expected a non-empty array of integers");
        cfg.m_values.clear();
        for (const auto &v : m)
        {
            if (!v.is_number_unsigned())
                throw Error(Errc::Config, "m_values", "expected positive integers");
            cfg.m_values.push_back(v.get<std::size_t>());
        }
    }
    cfg.repeats = read_field<std::size_t>(j, "", "repeats", cfg.repeats);
    cfg.output_dir = read_field<std::string>(j, "", "output_dir", cfg.output_dir.string());
    cfg.threads = read_field<std::size_t>(j, "", "threads", cfg.threads);

    apply_seed(cfg, seed);
    validate(cfg);
    return cfg;
}

nlohmann::json experiment_to_json(const ExperimentConfig &cfg)
{
    nlohmann::json ds;
    if (cfg.synthetic)
        ds["synthetic"] = scenario_to_json(*cfg.synthetic);
    else if (cfg.csv)
        ds["csv"] = cfg.csv->string();
    const auto &tc = cfg.training;
    return {{"seed", cfg.seed},
            {"dataset", ds},
            {"split",
             {{"train", cfg.split.train_frac},
              {"val", cfg.split.val_frac},
              {"test", cfg.split.test_frac},
              {"mode", split_mode_name(cfg.split.mode)}}},
            {"model", layer_spec_to_json(cfg.model)},
            {"training",
             {{"learning_rate", tc.learning_rate},
              {"weight_decay", tc.weight_decay},
              {"batch_size", tc.batch_size},
              {"epochs", tc.epochs},
              {"beta1", tc.beta1},
              {"beta2", tc.beta2},
              {"epsilon", tc.epsilon}}},
            {"baseline",
             {{"bins_u", cfg.baseline.bins_u},
              {"bins_v", cfg.baseline.bins_v},
              {"include_validation", cfg.baseline.include_validation}}},
            {"m_values", cfg.m_values},
            {"repeats", cfg.repeats},
            {"output_dir", cfg.output_dir.string()},
            {"threads", cfg.threads}};
}

ExperimentConfig load_experiment(const std::filesystem::path &path)
{
    return experiment_from_json(detail::load_json_file(path), path.parent_path());
}

nlohmann::json load_json_document(const std::filesystem::path &path)
{
    return detail::load_json_file(path);
}

void validate(const ExperimentConfig &cfg)
{
    if (cfg.synthetic.has_value() == cfg.csv.has_value())
        throw Error(Errc::Config, "dataset", "exactly one dataset source is required");
    if (cfg.repeats < 1)
        throw Error(Errc::Config, "repeats", "repeats must be at least 1");
    if (cfg.threads < 1)
        throw Error(Errc::Config, "threads", "threads must be at least 1");
    if (cfg.m_values.empty())
        throw Error(Errc::Config, "m_values", "at least one M is required");
    for (const std::size_t m : cfg.m_values)
        if (m < 1)
            throw Error(Errc::Config, "m_values", "M must be at least 1");
    if (cfg.baseline.bins_u < 1 || cfg.baseline.bins_v < 1)
        throw Error(Errc::Config, "baseline", "bin counts must be positive");
    if (cfg.model.input.window > 1 && cfg.split.mode == SplitMode::Shuffle)
        throw Error(Errc::Config, "model.input.window", "windowed input needs split.mode = \"sequential\"");

    const auto rethrow = [](const Error &e, const std::string &prefix) {
        throw Error(Errc::Config, detail::join_path(prefix, e.field()), e.what());
    };
    try
    {
        validate(cfg.split);
    }
    catch (const Error &e)
    {
        rethrow(e, "");
    }
    try
    {
        validate(cfg.training);
    }
    catch (const Error &e)
    {
        rethrow(e, "training");
    }
}

Dataset resolve_dataset(const ExperimentConfig &cfg)
{
    if (cfg.synthetic)
        return generate_scenario(*cfg.synthetic, cfg.threads);
    if (!cfg.csv || !std::filesystem::exists(*cfg.csv))
        throw Error(Errc::MissingInput, cfg.csv ? cfg.csv->string() : "dataset", "dataset file not found");
    return parse_dataset(*cfg.csv);
}

LayerSpec model_spec_for(const ExperimentConfig &cfg, std::size_t codebook_size)
{
    LayerSpec spec = cfg.model;
    if (!cfg.model_classes_explicit)
        spec.dense.back() = static_cast<Index>(codebook_size);
    if (spec.classes() != static_cast<Index>(codebook_size))
        throw Error(Errc::CodebookMismatch, "model.dense",
                    "model has " + std::to_string(spec.classes()) + " classes but the codebook has " + std::to_string(codebook_size));
    return spec;
}

TrainedModel train_model(const ExperimentConfig &cfg, const DatasetSplit &split, std::size_t repeat)
{
    const LayerSpec spec = model_spec_for(cfg, split.train.codebook_size);
    TrainingConfig tc = cfg.training;
    tc.seed = derive_seeds(cfg.seed).training(repeat);

    TrainedModel out;
    out.model.spec = spec;
    out.model.seed = cfg.seed;
    out.model.norm = fit_input_normalization(split.train, spec.input);
    TrainResult r = train(split.train, split.val, spec, tc, out.model.norm);
    out.model.params = std::move(r.params);
    out.history = std::move(r.history);
    return out;
}

Baseline build_baseline(const ExperimentConfig &cfg, const DatasetSplit &split)
{
    const Dataset source = cfg.baseline.include_validation ? concat(split.train, split.val) : split.train;
    Baseline b;
    b.norm = fit_normalization(source.tx_positions());
    b.db = build_database(source, BinGrid::uniform(cfg.baseline.bins_u, cfg.baseline.bins_v), b.norm);
    return b;
}

CandidateLists rank_baseline(const Baseline &baseline, const Dataset &test)
{
    return evaluate_baseline(baseline.db, test, baseline.norm, baseline.db.codebook_size);
}

SummaryReport run_evaluation(const ExperimentConfig &cfg, const DatasetSplit &split, const RankingFn &model,
                             const RankingFn &baseline)
{
    std::vector<EvaluationReport> runs;
    for (std::size_t r = 0; r < cfg.repeats; ++r)
    {
        auto [m, b] = build_report(model(split.test, r), baseline(split.test, r), split.test, cfg.m_values);
        runs.push_back(std::move(m));
        runs.push_back(std::move(b));
    }
    return summarize(runs, cfg.seed);
}

SummaryReport run_experiment(const ExperimentConfig &cfg, const DatasetSplit &split, const std::optional<BeamModel> &checkpoint)
{
    if (checkpoint && static_cast<std::size_t>(checkpoint->spec.classes()) != split.test.codebook_size)
        throw Error(Errc::CodebookMismatch, "checkpoint",
                    "checkpoint predicts " + std::to_string(checkpoint->spec.classes()) + " beams but the dataset has " +
                        std::to_string(split.test.codebook_size));

    const Baseline baseline = build_baseline(cfg, split);
    const CandidateLists baseline_rank = rank_baseline(baseline, split.test);
    std::optional<CandidateLists> fixed_model_rank;
    if (checkpoint)
        fixed_model_rank = rank_dataset(*checkpoint, split.test, split.test.codebook_size);

    const RankingFn model_fn = [&](const Dataset &test, std::size_t repeat) {
        if (fixed_model_rank)
            return *fixed_model_rank;
        const TrainedModel tm = train_model(cfg, split, repeat);
        return rank_dataset(tm.model, test, test.codebook_size);
    };
    const RankingFn baseline_fn = [&](const Dataset &, std::size_t) { return baseline_rank; };
    return run_evaluation(cfg, split, model_fn, baseline_fn);
}

void write_report_files(const SummaryReport &report, const std::filesystem::path &dir, bool emit_svg)
{
    std::filesystem::create_directories(dir);
    write_report_csv(report, dir / "report.csv");
    write_report_json(report, dir / "report.json");
    if (emit_svg)
        write_report_svg(report, dir / "report.svg");
}

int exit_code_for(const Error &e)
{
    switch (e.code())
    {
    case Errc::MissingInput:
    case Errc::Io:
        return 3;
    case Errc::Config:
    case Errc::InvalidArgument:
    case Errc::CodebookMismatch:
    case Errc::SchemaMismatch:
    case Errc::RowParseError:
    case Errc::IndexMismatch:
    case Errc::OutOfRange:
    case Errc::DegenerateRange:
    case Errc::ShapeMismatch:
    case Errc::LengthMismatch:
        return 2;
    default:
        return 4;
    }
}

} // namespace beampos
