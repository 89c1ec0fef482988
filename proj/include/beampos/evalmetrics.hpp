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

#ifndef BEAMPOS_EVALMETRICS_HPP
#define BEAMPOS_EVALMETRICS_HPP

#include "beampos/ingest.hpp"

#include "json.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace beampos
{

using CandidateLists = std::vector<std::vector<std::size_t>>;

/// Fraction of samples whose ground-truth beam is among its candidates.
double topM_accuracy_inclusion(std::span<const std::vector<std::size_t>> preds, std::span<const std::size_t> truths);

/// Mean of |{truth} ∩ candidates| / |candidates|, i.e. the set-overlap form
/// with a singleton ground truth. Equals the inclusion variant when every
/// list has one entry.
double topM_accuracy_literal(std::span<const std::vector<std::size_t>> preds, std::span<const std::size_t> truths);

/// Mean over samples of (best power among the candidates) / (power at the
/// ground-truth beam).
double received_power_ratio(std::span<const std::vector<std::size_t>> preds, std::span<const PowerVector> powers,
                            std::span<const std::size_t> truths);

struct MetricRow
{
    std::size_t m = 0;
    double accuracy_inclusion = 0.0;
    double accuracy_literal = 0.0;
    double power_ratio = 0.0;

    bool operator==(const MetricRow &) const = default;
};

struct EvaluationReport
{
    std::string predictor;
    std::size_t n_test = 0;
    std::vector<MetricRow> rows; // one per M, in the order requested

    bool operator==(const EvaluationReport &) const = default;
};

inline const std::vector<std::size_t> kDefaultMValues{1, 5, 9, 13};

/// Truncates each ranking to its first M entries before scoring, so
/// rankings must hold at least max(m_values) beams.
EvaluationReport evaluate_rankings(const std::string &label, const CandidateLists &rankings, const Dataset &test,
                                   const std::vector<std::size_t> &m_values);

/// Scores both predictors on the same test set at every M.
std::pair<EvaluationReport, EvaluationReport> build_report(const CandidateLists &model_rankings,
                                                           const CandidateLists &baseline_rankings, const Dataset &test,
                                                           const std::vector<std::size_t> &m_values);

/// One line of the aggregated report: a metric variant at one M, averaged
/// over repeated runs.
struct SummaryRow
{
    std::string predictor;
    std::string metric;  // "accuracy" | "power_ratio"
    std::string variant; // "inclusion" | "literal" | "best_candidate"
    std::size_t m = 0;
    double mean = 0.0;
    double stddev = 0.0; // sample standard deviation; 0 for a single run
    std::size_t runs = 0;

    bool operator==(const SummaryRow &) const = default;
};

struct SummaryReport
{
    std::uint64_t seed = 0;
    std::size_t n_test = 0;
    std::vector<std::size_t> m_values;
    std::vector<SummaryRow> rows;

    /// Row lookup; throws InvalidArgument when absent.
    const SummaryRow &at(const std::string &predictor, const std::string &metric, const std::string &variant,
                         std::size_t m) const;

    bool operator==(const SummaryReport &) const = default;
};

/// Aggregates per-run reports; all runs of a predictor must share n_test and M values.
SummaryReport summarize(const std::vector<EvaluationReport> &runs, std::uint64_t seed);

void write_report_csv(const SummaryReport &report, std::ostream &out);
void write_report_csv(const SummaryReport &report, const std::filesystem::path &path);
nlohmann::json report_to_json(const SummaryReport &report);
SummaryReport report_from_json(const nlohmann::json &j);
void write_report_json(const SummaryReport &report, const std::filesystem::path &path);
SummaryReport load_report_json(const std::filesystem::path &path);

/// Grouped bar chart: one panel per metric, one group per M, one bar per predictor.
std::string render_report_svg(const SummaryReport &report);
void write_report_svg(const SummaryReport &report, const std::filesystem::path &path);

} // namespace beampos

#endif // BEAMPOS_EVALMETRICS_HPP
