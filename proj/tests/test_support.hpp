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

#ifndef BEAMPOS_TEST_SUPPORT_HPP
#define BEAMPOS_TEST_SUPPORT_HPP

#include "beampos/ingest.hpp"
#include "beampos/numeric.hpp"

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace beampos::test
{

/// Fresh scratch directory under the system temp path.
inline std::filesystem::path scratch_dir(const std::string &name)
{
    const auto dir = std::filesystem::temp_directory_path() / ("beampos_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string read_file(const std::filesystem::path &p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Random dataset with distinct, strictly positive powers so the argmax is unique.
inline Dataset random_dataset(Rng &rng, std::size_t n, std::size_t codebook, bool with_rx)
{
    Dataset d;
    d.codebook_size = codebook;
    for (std::size_t i = 0; i < n; ++i)
    {
        PowerVector p(static_cast<Eigen::Index>(codebook));
        for (Eigen::Index k = 0; k < p.size(); ++k)
            p(k) = rng.uniform(1e-9, 1.0);
        std::optional<GeoPosition> rx;
        if (with_rx)
            rx = GeoPosition{rng.uniform(33.0, 33.1), rng.uniform(-112.0, -111.9)};
        d.samples.push_back(make_sample(0.1 * static_cast<double>(i), {rng.uniform(33.0, 33.1), rng.uniform(-112.0, -111.9)},
                                        rx, std::move(p)));
    }
    return d;
}

} // namespace beampos::test

#endif // BEAMPOS_TEST_SUPPORT_HPP
