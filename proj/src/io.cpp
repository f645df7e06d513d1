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

#include "oscstab/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "oscstab/errors.hpp"

namespace oscstab {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                 std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

std::string trajectory_csv(const Trajectory& traj) {
  const int n = traj.x.empty() ? 0 : static_cast<int>(traj.x.front().size());
  std::string out = "t";
  for (int k = 1; k <= n; ++k) out += ",x" + std::to_string(k);
  out += ",V,norm\n";
  for (std::size_t s = 0; s < traj.t.size(); ++s) {
    out += format_double(traj.t[s]);
    for (int k = 0; k < n; ++k) {
      out += ',';
      out += format_double(traj.x[s][k]);
    }
    out += ',';
    out += format_double(traj.V[s]);
    out += ',';
    out += format_double(traj.norm[s]);
    out += '\n';
  }
  return out;
}

nlohmann::json windows_json(const Trajectory& traj) {
  auto finite_or_null = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json();
  };
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& w : traj.windows) {
    arr.push_back({{"j", w.j},
                   {"t", w.t},
                   {"V", finite_or_null(w.V)},
                   {"W", finite_or_null(w.W)},
                   {"r_hat", finite_or_null(w.r_hat)}});
  }
  return arr;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
}

void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
  const auto probe = dir / ".oscstab_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw IoError("output directory '" + dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

}  // namespace oscstab
