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
#include "json_util.hpp"

#include <fstream>

namespace beampos
{

namespace
{

constexpr const char *kFormat = "beampos-checkpoint";
constexpr int kVersion = 1;

const char *source_name(PositionSource s)
{
    return s == PositionSource::Tx ? "tx" : "tx_rx";
}

} // namespace

nlohmann::json layer_spec_to_json(const LayerSpec &spec)
{
    nlohmann::json conv = nlohmann::json::array();
    for (const auto &blk : spec.conv)
        conv.push_back({{"out_channels", blk.out_channels}, {"kernel", blk.kernel}, {"pool", blk.pool}, {"padding", blk.padding}});
    return {{"input", {{"source", source_name(spec.input.source)}, {"window", spec.input.window}}},
            {"conv_blocks", conv},
            {"dense", spec.dense}};
}

LayerSpec layer_spec_from_json(const nlohmann::json &j, const std::string &path)
{
    using detail::join_path;
    using detail::read_field;
    detail::require_object(j, path);
    detail::reject_unknown_keys(j, path, {"input", "conv_blocks", "dense"});

    LayerSpec spec = LayerSpec::standard();
    if (j.contains("input"))
    {
        const auto &in = j.at("input");
        const std::string p = join_path(path, "input");
        detail::require_object(in, p);
        detail::reject_unknown_keys(in, p, {"source", "window"});
        const std::string source = read_field<std::string>(in, p, "source", "tx");
        if (source == "tx")
            spec.input.source = PositionSource::Tx;
        else if (source == "tx_rx")
            spec.input.source = PositionSource::TxRx;
        else
            throw Error(Errc::Config, join_path(p, "source"), "expected \"tx\" or \"tx_rx\"");
        spec.input.window = read_field<Index>(in, p, "window", 1);
        if (spec.input.window < 1)
            throw Error(Errc::Config, join_path(p, "window"), "window must be at least 1");
    }
    if (j.contains("conv_blocks"))
    {
        const std::string p = join_path(path, "conv_blocks");
        const auto &arr = j.at("conv_blocks");
        if (!arr.is_array() || arr.empty())
            throw Error(Errc::Config, p, "expected a non-empty array");
        spec.conv.clear();
        for (const auto &b : arr)
        {
            detail::require_object(b, p);
            detail::reject_unknown_keys(b, p, {"out_channels", "kernel", "pool", "padding"});
            ConvBlockSpec blk;
            blk.out_channels = read_field<Index>(b, p, "out_channels", blk.out_channels);
            blk.kernel = read_field<Index>(b, p, "kernel", blk.kernel);
            blk.pool = read_field<Index>(b, p, "pool", blk.pool);
            blk.padding = read_field<Index>(b, p, "padding", blk.kernel / 2);
            spec.conv.push_back(blk);
        }
    }
    if (j.contains("dense"))
    {
        const std::string p = join_path(path, "dense");
        const auto &arr = j.at("dense");
        if (!arr.is_array() || arr.empty())
            throw Error(Errc::Config, p, "expected a non-empty array of widths");
        spec.dense.clear();
        for (const auto &w : arr)
        {
            if (!w.is_number_integer() || w.get<long long>() < 1)
                throw Error(Errc::Config, p, "widths must be positive integers");
            spec.dense.push_back(w.get<Index>());
        }
    }
    try
    {
        validate(spec);
    }
    catch (const Error &e)
    {
        throw Error(Errc::Config, join_path(path, e.field()), e.what());
    }
    return spec;
}

nlohmann::json checkpoint_to_json(const BeamModel &model)
{
    const auto names = tensor_names(model.spec);
    nlohmann::json tensors = nlohmann::json::array();
    for (std::size_t i = 0; i < model.params.tensors.size(); ++i)
    {
        const auto &t = model.params.tensors[i];
        tensors.push_back({{"name", names.at(i)},
                           {"rows", t.rows()},
                           {"cols", t.cols()},
                           {"data", std::vector<double>(t.data(), t.data() + t.size())}});
    }
    const auto &n = model.norm;
    return {{"format", kFormat},
            {"version", kVersion},
            {"seed", model.seed},
            {"spec", layer_spec_to_json(model.spec)},
            {"normalization", {{"lat_min", n.lat_min}, {"lat_max", n.lat_max}, {"lon_min", n.lon_min}, {"lon_max", n.lon_max}}},
            {"tensors", tensors}};
}

BeamModel checkpoint_from_json(const nlohmann::json &j)
{
    try
    {
        if (j.at("format").get<std::string>() != kFormat)
            throw Error(Errc::Config, "format", "not a checkpoint document");
        if (j.at("version").get<int>() != kVersion)
            throw Error(Errc::Config, "version", "unsupported checkpoint version");
        BeamModel model;
        model.seed = j.at("seed").get<std::uint64_t>();
        model.spec = layer_spec_from_json(j.at("spec"), "spec");
        const auto &n = j.at("normalization");
        model.norm = make_normalization(n.at("lat_min").get<double>(), n.at("lat_max").get<double>(),
                                        n.at("lon_min").get<double>(), n.at("lon_max").get<double>());
        model.params = zero_params(model.spec);
        const auto names = tensor_names(model.spec);
        const auto &tensors = j.at("tensors");
        if (tensors.size() != model.params.tensors.size())
            throw Error(Errc::ShapeMismatch, "tensors", "tensor count does not match the layer spec");
        for (std::size_t i = 0; i < tensors.size(); ++i)
        {
            const auto &t = tensors[i];
            auto &dst = model.params.tensors[i];
            if (t.at("name").get<std::string>() != names[i] || t.at("rows").get<Index>() != dst.rows() ||
                t.at("cols").get<Index>() != dst.cols())
                throw Error(Errc::ShapeMismatch, names[i], "tensor shape or name does not match the layer spec");
            const auto data = t.at("data").get<std::vector<double>>();
            if (static_cast<Index>(data.size()) != dst.size())
                throw Error(Errc::ShapeMismatch, names[i], "tensor data has the wrong length");
            dst = Eigen::Map<const Eigen::MatrixXd>(data.data(), dst.rows(), dst.cols());
        }
        if (!model.params.all_finite())
            throw Error(Errc::Numeric, "tensors", "checkpoint holds non-finite values");
        return model;
    }
    catch (const nlohmann::json::exception &e)
    {
        throw Error(Errc::Config, "checkpoint", e.what());
    }
}

void save_checkpoint(const BeamModel &model, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, path.string(), "cannot open file for writing");
    out << checkpoint_to_json(model).dump() << '\n';
    if (!out)
        throw Error(Errc::Io, path.string(), "write failed");
}

BeamModel load_checkpoint(const std::filesystem::path &path)
{
    return checkpoint_from_json(detail::load_json_file(path));
}

void write_history_csv(const std::vector<EpochRecord> &history, std::ostream &out)
{
    out << "epoch,train_loss,val_top1\n";
    for (const auto &r : history)
        out << r.epoch << ',' << format_double(r.train_loss) << ',' << format_double(r.val_top1) << '\n';
}

void write_history_csv(const std::vector<EpochRecord> &history, const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, path.string(), "cannot open file for writing");
    write_history_csv(history, out);
    if (!out)
        throw Error(Errc::Io, path.string(), "write failed");
}

} // namespace beampos
