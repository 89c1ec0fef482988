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

#include "beampos/evalmetrics.hpp"
#include "beampos/numeric.hpp"
#include "json_util.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace beampos
{

namespace
{

constexpr const char *kFormat = "beampos-report";
constexpr int kVersion = 1;

void check_lengths(std::size_t preds, std::size_t truths)
{
    if (preds != truths)
        throw Error(Errc::LengthMismatch, "preds", std::to_string(preds) + " candidate lists for " + std::to_string(truths) +
                                                      " ground-truth indices");
    if (preds == 0)
        throw Error(Errc::EmptyDataset, "preds", "no samples to evaluate");
}

bool contains(const std::vector<std::size_t> &list, std::size_t value)
{
    return std::find(list.begin(), list.end(), value) != list.end();
}

std::vector<std::size_t> prefix(const std::vector<std::size_t> &ranking, std::size_t m)
{
    if (ranking.size() < m)
        throw Error(Errc::LengthMismatch, "ranking", "ranking shorter than requested M=" + std::to_string(m));
    return {ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(m)};
}

std::string xml_escape(const std::string &s)
{
    std::string out;
    for (const char c : s)
    {
        switch (c)
        {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fixed(double v, int digits)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

} // namespace

double topM_accuracy_inclusion(std::span<const std::vector<std::size_t>> preds, std::span<const std::size_t> truths)
{
    check_lengths(preds.size(), truths.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < preds.size(); ++i)
        hits += contains(preds[i], truths[i]) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double topM_accuracy_literal(std::span<const std::vector<std::size_t>> preds, std::span<const std::size_t> truths)
{
    check_lengths(preds.size(), truths.size());
    // Hits counted per list length, so equal-length lists cost one division.
    std::map<std::size_t, std::size_t> hits_by_length;
    for (std::size_t i = 0; i < preds.size(); ++i)
    {
        if (preds[i].empty())
            throw Error(Errc::InvalidArgument, "preds", "candidate list is empty");
        if (contains(preds[i], truths[i]))
            ++hits_by_length[preds[i].size()];
    }
    CompensatedSum<double> sum;
    for (const auto &[length, hits] : hits_by_length)
        sum.add(static_cast<double>(hits) / static_cast<double>(length));
    return sum.value() / static_cast<double>(preds.size());
}

double received_power_ratio(std::span<const std::vector<std::size_t>> preds, std::span<const PowerVector> powers,
                            std::span<const std::size_t> truths)
{
    check_lengths(preds.size(), truths.size());
    if (powers.size() != truths.size())
        throw Error(Errc::LengthMismatch, "powers", "one power vector per sample is required");

    CompensatedSum<double> sum;
    for (std::size_t i = 0; i < preds.size(); ++i)
    {
        const PowerVector &p = powers[i];
        const auto size = static_cast<std::size_t>(p.size());
        if (truths[i] >= size)
            throw Error(Errc::ShapeMismatch, "truths", "ground-truth index outside the power vector");
        if (preds[i].empty())
            throw Error(Errc::InvalidArgument, "preds", "candidate list is empty");
        const double gt = p(static_cast<Eigen::Index>(truths[i]));
        if (!(gt > 0.0))
            throw Error(Errc::ZeroGroundTruthPower, "powers", "ground-truth power is zero at sample " + std::to_string(i));
        double best = 0.0;
        for (const std::size_t c : preds[i])
        {
            if (c >= size)
                throw Error(Errc::ShapeMismatch, "preds", "candidate beam outside the codebook");
            best = std::max(best, p(static_cast<Eigen::Index>(c)));
        }
        sum.add(best / gt);
    }
    return sum.value() / static_cast<double>(preds.size());
}

EvaluationReport evaluate_rankings(const std::string &label, const CandidateLists &rankings, const Dataset &test,
                                   const std::vector<std::size_t> &m_values)
{
    if (m_values.empty())
        throw Error(Errc::InvalidArgument, "m_values", "at least one M is required");
    for (const std::size_t m : m_values)
        if (m < 1 || m > test.codebook_size)
            throw Error(Errc::InvalidArgument, "m_values", "M=" + std::to_string(m) + " outside [1, codebook size]");

    std::vector<std::size_t> truths;
    std::vector<PowerVector> powers;
    truths.reserve(test.size());
    powers.reserve(test.size());
    for (const auto &s : test.samples)
    {
        truths.push_back(s.optimal_index);
        powers.push_back(s.powers);
    }

    EvaluationReport report;
    report.predictor = label;
    report.n_test = test.size();
    for (const std::size_t m : m_values)
    {
        CandidateLists lists;
        lists.reserve(rankings.size());
        for (const auto &r : rankings)
            lists.push_back(prefix(r, m));
        MetricRow row;
        row.m = m;
        row.accuracy_inclusion = topM_accuracy_inclusion(lists, truths);
        row.accuracy_literal = topM_accuracy_literal(lists, truths);
        row.power_ratio = received_power_ratio(lists, powers, truths);
        report.rows.push_back(row);
    }
    return report;
}

std::pair<EvaluationReport, EvaluationReport> build_report(const CandidateLists &model_rankings,
                                                           const CandidateLists &baseline_rankings, const Dataset &test,
                                                           const std::vector<std::size_t> &m_values)
{
    return {evaluate_rankings("model", model_rankings, test, m_values),
            evaluate_rankings("baseline", baseline_rankings, test, m_values)};
}

const SummaryRow &SummaryReport::at(const std::string &predictor, const std::string &metric, const std::string &variant,
                                    std::size_t m) const
{
    for (const auto &r : rows)
        if (r.predictor == predictor && r.metric == metric && r.variant == variant && r.m == m)
            return r;
    throw Error(Errc::InvalidArgument, "report", "no row for " + predictor + "/" + metric + "/" + variant + "/M=" + std::to_string(m));
}

SummaryReport summarize(const std::vector<EvaluationReport> &runs, std::uint64_t seed)
{
    if (runs.empty())
        throw Error(Errc::InvalidArgument, "runs", "no runs to summarize");

    SummaryReport out;
    out.seed = seed;
    out.n_test = runs.front().n_test;
    for (const auto &row : runs.front().rows)
        out.m_values.push_back(row.m);

    // Predictors in first-seen order.
    std::vector<std::string> labels;
    for (const auto &r : runs)
    {
        if (r.n_test != out.n_test || r.rows.size() != out.m_values.size())
            throw Error(Errc::LengthMismatch, "runs", "runs disagree on test size or M values");
        if (std::find(labels.begin(), labels.end(), r.predictor) == labels.end())
            labels.push_back(r.predictor);
    }

    struct Variant
    {
        const char *metric;
        const char *variant;
        double MetricRow::*field;
    };
    const Variant variants[] = {{"accuracy", "inclusion", &MetricRow::accuracy_inclusion},
                                {"accuracy", "literal", &MetricRow::accuracy_literal},
                                {"power_ratio", "best_candidate", &MetricRow::power_ratio}};

    for (const auto &label : labels)
        for (const auto &var : variants)
            for (std::size_t k = 0; k < out.m_values.size(); ++k)
            {
                std::vector<double> values;
                for (const auto &r : runs)
                    if (r.predictor == label)
                    {
                        if (r.rows[k].m != out.m_values[k])
                            throw Error(Errc::LengthMismatch, "runs", "runs disagree on M values");
                        values.push_back(r.rows[k].*var.field);
                    }
                CompensatedSum<double> sum;
                for (const double v : values)
                    sum.add(v);
                const double mean = sum.value() / static_cast<double>(values.size());
                double stddev = 0.0;
                if (values.size() > 1)
                {
                    CompensatedSum<double> sq;
                    for (const double v : values)
                        sq.add((v - mean) * (v - mean));
                    stddev = std::sqrt(sq.value() / static_cast<double>(values.size() - 1));
                }
                out.rows.push_back({label, var.metric, var.variant, out.m_values[k], mean, stddev, values.size()});
            }
    return out;
}

void write_report_csv(const SummaryReport &report, std::ostream &out)
{
    out << "predictor,metric,variant,M,mean,stddev\n";
    for (const auto &r : report.rows)
        out << r.predictor << ',' << r.metric << ',' << r.variant << ',' << r.m << ',' << format_double(r.mean) << ','
            << format_double(r.stddev) << '\n';
}

void write_report_csv(const SummaryReport &report, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, path.string(), "cannot open file for writing");
    write_report_csv(report, out);
    if (!out)
        throw Error(Errc::Io, path.string(), "write failed");
}

nlohmann::json report_to_json(const SummaryReport &report)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto &r : report.rows)
        rows.push_back({{"predictor", r.predictor},
                        {"metric", r.metric},
                        {"variant", r.variant},
                        {"M", r.m},
                        {"mean", r.mean},
                        {"stddev", r.stddev},
                        {"runs", r.runs}});
    return {{"format", kFormat},
            {"version", kVersion},
            {"seed", report.seed},
            {"n_test", report.n_test},
            {"m_values", report.m_values},
            {"rows", rows}};
}

SummaryReport report_from_json(const nlohmann::json &j)
{
    try
    {
        if (j.at("format").get<std::string>() != kFormat)
            throw Error(Errc::Config, "format", "not a report document");
        if (j.at("version").get<int>() != kVersion)
            throw Error(Errc::Config, "version", "unsupported report version");
        SummaryReport r;
        r.seed = j.at("seed").get<std::uint64_t>();
        r.n_test = j.at("n_test").get<std::size_t>();
        r.m_values = j.at("m_values").get<std::vector<std::size_t>>();
        for (const auto &row : j.at("rows"))
            r.rows.push_back({row.at("predictor").get<std::string>(), row.at("metric").get<std::string>(),
                              row.at("variant").get<std::string>(), row.at("M").get<std::size_t>(),
                              row.at("mean").get<double>(), row.at("stddev").get<double>(),
                              row.at("runs").get<std::size_t>()});
        return r;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(Errc::Config, "report", e.what());
    }
}

void write_report_json(const SummaryReport &report, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, path.string(), "cannot open file for writing");
    out << report_to_json(report).dump(2) << '\n';
    if (!out)
        throw Error(Errc::Io, path.string(), "write failed");
}

SummaryReport load_report_json(const std::filesystem::path &path)
{
    return report_from_json(detail::load_json_file(path));
}

std::string render_report_svg(const SummaryReport &report)
{
    struct Panel
    {
        const char *metric;
        const char *variant;
        const char *title;
    };
    const Panel panels[] = {{"accuracy", "inclusion", "Top-M accuracy (%)"},
                            {"power_ratio", "best_candidate", "Received power ratio (%)"}};
    const char *colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

    std::vector<std::string> predictors;
    for (const auto &r : report.rows)
        if (std::find(predictors.begin(), predictors.end(), r.predictor) == predictors.end())
            predictors.push_back(r.predictor);

    const double panel_w = 420, panel_h = 300, margin = 50;
    const double width = margin + 2 * (panel_w + margin);
    const double height = panel_h + 2 * margin + 30;
    const double plot_h = panel_h - 40;
    const std::size_t groups = std::max<std::size_t>(1, report.m_values.size());
    const double group_w = (panel_w - 20) / static_cast<double>(groups);
    const double bar_w = group_w * 0.8 / static_cast<double>(std::max<std::size_t>(1, predictors.size()));

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t p = 0; p < std::size(panels); ++p)
    {
        const double x0 = margin + static_cast<double>(p) * (panel_w + margin);
        const double y0 = margin;
        const double base = y0 + plot_h;
        svg << "<text x=\"" << x0 + panel_w / 2 << "\" y=\"" << y0 - 15 << "\" text-anchor=\"middle\" font-size=\"14\">"
            << panels[p].title << "</text>\n";
        svg << "<line x1=\"" << x0 << "\" y1=\"" << base << "\" x2=\"" << x0 + panel_w << "\" y2=\"" << base
            << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << base << "\" stroke=\"black\"/>\n";
        for (int tick = 0; tick <= 100; tick += 25)
        {
            const double y = base - plot_h * tick / 100.0;
            svg << "<text x=\"" << x0 - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\">" << tick << "</text>\n";
            svg << "<line x1=\"" << x0 << "\" y1=\"" << y << "\" x2=\"" << x0 + panel_w << "\" y2=\"" << y
                << "\" stroke=\"#ddd\"/>\n";
        }
        for (std::size_t g = 0; g < report.m_values.size(); ++g)
        {
            const double gx = x0 + 10 + static_cast<double>(g) * group_w;
            svg << "<text x=\"" << gx + group_w / 2 << "\" y=\"" << base + 16 << "\" text-anchor=\"middle\">M="
                << report.m_values[g] << "</text>\n";
            for (std::size_t k = 0; k < predictors.size(); ++k)
            {
                const SummaryRow &row = report.at(predictors[k], panels[p].metric, panels[p].variant, report.m_values[g]);
                const double h = plot_h * std::clamp(row.mean, 0.0, 1.0);
                const double bx = gx + group_w * 0.1 + static_cast<double>(k) * bar_w;
                svg << "<rect x=\"" << fixed(bx, 2) << "\" y=\"" << fixed(base - h, 2) << "\" width=\"" << fixed(bar_w, 2)
                    << "\" height=\"" << fixed(h, 2) << "\" fill=\"" << colors[k % std::size(colors)] << "\"><title>"
                    << xml_escape(predictors[k]) << " M=" << row.m << ": " << fixed(100.0 * row.mean, 2) << "% (sd "
                    << fixed(100.0 * row.stddev, 2) << ")</title></rect>\n";
                if (row.stddev > 0.0)
                {
                    const double cx = bx + bar_w / 2;
                    const double lo = base - plot_h * std::clamp(row.mean - row.stddev, 0.0, 1.0);
                    const double hi = base - plot_h * std::clamp(row.mean + row.stddev, 0.0, 1.0);
                    svg << "<line x1=\"" << fixed(cx, 2) << "\" y1=\"" << fixed(lo, 2) << "\" x2=\"" << fixed(cx, 2)
                        << "\" y2=\"" << fixed(hi, 2) << "\" stroke=\"black\"/>\n";
                }
            }
        }
    }

    double lx = margin;
    for (std::size_t k = 0; k < predictors.size(); ++k)
    {
        const double ly = height - 20;
        svg << "<rect x=\"" << lx << "\" y=\"" << ly - 10 << "\" width=\"12\" height=\"12\" fill=\"" << colors[k % std::size(colors)]
            << "\"/>\n";
        svg << "<text x=\"" << lx + 18 << "\" y=\"" << ly << "\">" << xml_escape(predictors[k]) << "</text>\n";
        lx += 120;
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_report_svg(const SummaryReport &report, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, path.string(), "cannot open file for writing");
    out << render_report_svg(report);
    if (!out)
        throw Error(Errc::Io, path.string(), "write failed");
}

} // namespace beampos
