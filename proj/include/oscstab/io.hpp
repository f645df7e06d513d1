// Copyright 2026 The oscstab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "oscstab/integrator.hpp"

namespace oscstab {

/// Shortest form that keeps 17 significant digits ("%.17g" semantics).
std::string format_double(double value);

/// Header `t,x1,...,xn,V,norm`, one LF-terminated row per recorded sample.
std::string trajectory_csv(const Trajectory& traj);

/// Array of {j, t, V, W, r_hat}. Non-finite W is written as null.
nlohmann::json windows_json(const Trajectory& traj);

/// Writes via a temporary sibling and rename. Throws IoError.
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Creates the directory if needed and checks that it is writable. Throws IoError.
void prepare_output_dir(const std::filesystem::path& dir);

}  // namespace oscstab
