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

// beampos command-line driver: generate | train | baseline | eval | report.

#include "beampos/experiment.hpp"
#include "beampos/numeric.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

using namespace beampos;
namespace fs = std::filesystem;

namespace
{

struct Options
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> threads;
    std::string out;
    std::string m_values;
    std::string split_mode;
    std::optional<std::size_t> repeats;
    bool emit_svg = false;
    std::string checkpoint;
    std::string dataset;
    std::string in;
};

void setup_logging()
{
    auto logger = spdlog::stderr_logger_mt("beampos");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    if (const char *env = std::getenv("BEAM_LOG"))
    {
        const auto level = spdlog::level::from_str(env);
        // from_str maps unknown names to off; only accept it when asked for.
        if (level != spdlog::level::off || std::string(env) == "off")
            spdlog::set_level(level);
        else
            spdlog::warn("ignoring unknown BEAM_LOG level '{}'", env);
    }
}

std::vector<std::size_t> parse_m_values(const std::string &text)
{
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ','))
    {
        std::size_t pos = 0;
        unsigned long long v = 0;
        try
        {
            v = std::stoull(tok, &pos);
        }
        catch (const std::exception &)
        {
            pos = 0;
        }
        if (pos == 0 || pos != tok.size() || v == 0 || tok.front() == '-')
            throw Error(Errc::Config, "--m-values", "expected comma-separated positive integers, got '" + text + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    if (out.empty())
        throw Error(Errc::Config, "--m-values", "at least one M is required");
    return out;
}

ExperimentConfig load_config(const Options &opt)
{
    ExperimentConfig cfg;
    if (!opt.config.empty())
    {
        cfg = load_experiment(opt.config);
    }
    else if (!opt.dataset.empty())
    {
        cfg.csv = opt.dataset;
        apply_seed(cfg, 0);
    }
    else
    {
        throw Error(Errc::Config, "--config", "a config file or --dataset is required");
    }

    if (!opt.dataset.empty())
    {
        cfg.synthetic.reset();
        cfg.csv = opt.dataset;
    }
    if (opt.seed)
        apply_seed(cfg, *opt.seed);
    if (opt.threads)
        cfg.threads = *opt.threads;
    if (!opt.out.empty())
        cfg.output_dir = opt.out;
    if (!opt.m_values.empty())
        cfg.m_values = parse_m_values(opt.m_values);
    if (!opt.split_mode.empty())
        cfg.split.mode = opt.split_mode == "sequential" ? SplitMode::Sequential : SplitMode::Shuffle;
    if (opt.repeats)
        cfg.repeats = *opt.repeats;
    validate(cfg);
    return cfg;
}

void write_text(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw Error(Errc::Io, path.string(), "cannot write file");
}

void record_config(const ExperimentConfig &cfg)
{
    fs::create_directories(cfg.output_dir);
    write_text(cfg.output_dir / "config.json", experiment_to_json(cfg).dump(2) + "\n");
}

DatasetSplit load_split(const ExperimentConfig &cfg)
{
    const Dataset data = resolve_dataset(cfg);
    spdlog::info("dataset: {} samples, codebook {}", data.samples.size(), data.codebook_size);
    DatasetSplit s = split(data, cfg.split);
    spdlog::info("split: train {}, val {}, test {}", s.train.samples.size(), s.val.samples.size(), s.test.samples.size());
    return s;
}

int cmd_generate(const Options &opt)
{
    // Accepts an experiment config with dataset.synthetic or a bare scenario config.
    ScenarioConfig sc;
    std::size_t threads = opt.threads.value_or(1);
    if (!opt.config.empty())
    {
        const nlohmann::json j = load_json_document(opt.config);
        if (j.is_object() && j.contains("dataset"))
        {
            ExperimentConfig cfg = experiment_from_json(j, fs::path(opt.config).parent_path());
            if (opt.seed)
                apply_seed(cfg, *opt.seed);
            if (!cfg.synthetic)
                throw Error(Errc::Config, "dataset.synthetic", "generate needs a synthetic dataset source");
            sc = *cfg.synthetic;
            if (!opt.threads)
                threads = cfg.threads;
        }
        else
        {
            sc = scenario_from_json(j);
            if (opt.seed)
                sc.channel.seed = derive_seeds(*opt.seed).channel;
        }
    }
    else if (opt.seed)
    {
        sc.channel.seed = derive_seeds(*opt.seed).channel;
    }

    fs::path target = opt.out.empty() ? fs::path("out") : fs::path(opt.out);
    if (target.extension() != ".csv")
        target /= "dataset.csv";
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());

    const Dataset d = generate_scenario(sc, threads);
    write_dataset(d, target);
    write_text(fs::path(target).replace_extension(".json"), scenario_to_json(sc).dump(2) + "\n");
    std::cout << d.samples.size() << " samples written to " << target.string() << '\n';
    return 0;
}

int cmd_train(const Options &opt)
{
    const ExperimentConfig cfg = load_config(opt);
    record_config(cfg);
    const DatasetSplit s = load_split(cfg);
    write_split(s, cfg.output_dir / "dataset");

    const TrainedModel tm = train_model(cfg, s, 0);
    for (const auto &r : tm.history)
        spdlog::info("epoch {:>3}  loss {:.5f}  val top-1 {:.4f}", r.epoch, r.train_loss, r.val_top1);
    save_checkpoint(tm.model, cfg.output_dir / "model.json");
    write_history_csv(tm.history, cfg.output_dir / "history.csv");
    std::cout << "checkpoint written to " << (cfg.output_dir / "model.json").string() << '\n';
    return 0;
}

int cmd_baseline(const Options &opt)
{
    const ExperimentConfig cfg = load_config(opt);
    record_config(cfg);
    const DatasetSplit s = load_split(cfg);
    const Baseline b = build_baseline(cfg, s);
    save_database(b.db, cfg.output_dir / "fingerprint.json");

    const EvaluationReport r = evaluate_rankings("baseline", rank_baseline(b, s.test), s.test, cfg.m_values);
    for (const auto &row : r.rows)
        std::cout << "baseline M=" << row.m << " accuracy " << format_double(row.accuracy_inclusion) << " power_ratio "
                  << format_double(row.power_ratio) << '\n';
    std::cout << b.db.bins.size() << " occupied bins written to " << (cfg.output_dir / "fingerprint.json").string() << '\n';
    return 0;
}

void print_report(const SummaryReport &report)
{
    for (const auto &r : report.rows)
    {
        if (r.variant == "literal")
            continue;
        std::cout << r.predictor << ' ' << r.metric << " M=" << r.m << " mean " << format_double(r.mean) << " stddev "
                  << format_double(r.stddev) << '\n';
    }
}

int cmd_eval(const Options &opt)
{
    const ExperimentConfig cfg = load_config(opt);
    record_config(cfg);
    const DatasetSplit s = load_split(cfg);
    std::optional<BeamModel> checkpoint;
    if (!opt.checkpoint.empty())
        checkpoint = load_checkpoint(opt.checkpoint);
    const SummaryReport report = run_experiment(cfg, s, checkpoint);
    write_report_files(report, cfg.output_dir, opt.emit_svg);
    print_report(report);
    return 0;
}

int cmd_report(const Options &opt)
{
    if (opt.in.empty())
        throw Error(Errc::Config, "--in", "a report.json path is required");
    const SummaryReport report = load_report_json(opt.in);
    const fs::path dir = opt.out.empty() ? fs::path(opt.in).parent_path() : fs::path(opt.out);
    if (!dir.empty())
        fs::create_directories(dir);
    write_report_csv(report, dir / "report.csv");
    if (opt.emit_svg)
        write_report_svg(report, dir / "report.svg");
    print_report(report);
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    setup_logging();

    CLI::App app{"Position-aided top-M mmWave beam prediction"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    app.add_option("--config", opt.config, "Experiment (or scenario) JSON config");
    app.add_option("--seed", opt.seed, "Master seed; overrides the config");
    app.add_option("--threads", opt.threads, "Worker threads for scenario generation")->check(CLI::PositiveNumber);
    app.add_option("--out", opt.out, "Output directory");
    app.add_option("--m-values", opt.m_values, "Comma-separated list of M");
    app.add_option("--split-mode", opt.split_mode, "Split mode")->check(CLI::IsMember({"shuffle", "sequential"}));
    app.add_option("--repeats", opt.repeats, "Training repeats")->check(CLI::PositiveNumber);
    app.add_flag("--emit-svg", opt.emit_svg, "Also write report.svg");

    auto *gen = app.add_subcommand("generate", "Generate a synthetic scenario CSV");
    auto *train = app.add_subcommand("train", "Split, train and write a checkpoint and history");
    auto *base = app.add_subcommand("baseline", "Build the fingerprint database");
    auto *eval = app.add_subcommand("eval", "Evaluate model and baseline and write reports");
    auto *report = app.add_subcommand("report", "Re-render a saved report");
    for (auto *sub : {train, base, eval})
        sub->add_option("--dataset", opt.dataset, "CSV dataset; replaces the configured source");
    eval->add_option("--checkpoint", opt.checkpoint, "Evaluate this checkpoint instead of training");
    report->add_option("--in", opt.in, "report.json to render");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    try
    {
        if (*gen)
            return cmd_generate(opt);
        if (*train)
            return cmd_train(opt);
        if (*base)
            return cmd_baseline(opt);
        if (*eval)
            return cmd_eval(opt);
        return cmd_report(opt);
    }
    catch (const Error &e)
    {
        spdlog::error("{}", e.what());
        return exit_code_for(e);
    }
    catch (const fs::filesystem_error &e)
    {
        spdlog::error("Io: {}", e.what());
        return 3;
    }
    catch (const std::exception &e)
    {
        spdlog::error("{}", e.what());
        return 4;
    }
}
