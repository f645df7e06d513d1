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

#include "oscstab/registry.hpp"

#include <algorithm>
#include <map>

#include "oscstab/brockett.hpp"
#include "oscstab/errors.hpp"

namespace oscstab {

namespace {

// Three-dimensional nonholonomic integrator: f1 = (1, 0, -x2), f2 = (0, 1, x1).
std::shared_ptr<const VectorFieldSystem> heisenberg_system() {
  static const auto sys = [] {
    std::vector<VectorField> fields;
    fields.emplace_back(SmoothMap(3, 3, [](auto x, auto out) {
      out[0] = 1.0;
      out[1] = 0.0;
      out[2] = -x[1];
    }));
    fields.emplace_back(SmoothMap(3, 3, [](auto x, auto out) {
      out[0] = 0.0;
      out[1] = 1.0;
      out[2] = x[0];
    }));
    return std::make_shared<const VectorFieldSystem>("heisenberg3", 3, std::move(fields),
                                                     std::vector<IndexPair>{{0, 1}});
  }();
  return sys;
}

std::shared_ptr<const LyapunovSpec> heisenberg_lyapunov(double p) {
  SmoothMap v(3, 1, [p](auto x, auto out) {
    out[0] = 0.5 * (x[0] * x[0] + x[1] * x[1]) + pow(abs(x[2]), 2.0 * p) / (2.0 * p);
  });
  return std::make_shared<const LyapunovSpec>(std::move(v), p);
}

const std::map<std::string, SystemEntry, std::less<>>& registry() {
  static const std::map<std::string, SystemEntry, std::less<>> r = [] {
    std::map<std::string, SystemEntry, std::less<>> m;
    m["brockett10"] = SystemEntry{
        "brockett10",
        [] { return brockett::system(); },
        [](double p) { return brockett::lyapunov(p); },
        [](double p, double gamma, double eps, const std::optional<std::vector<int>>& k) {
          return brockett::closed_form_law(p, gamma, eps, k);
        },
        [](std::string_view name) { return brockett::preset_state(name); },
    };
    m["heisenberg3"] = SystemEntry{
        "heisenberg3",
        [] { return heisenberg_system(); },
        [](double p) { return heisenberg_lyapunov(p); },
        {},
        [](std::string_view name) -> std::optional<Vector> {
          if (name == "unit") return Vector::Ones(3);
          return std::nullopt;
        },
    };
    return m;
  }();
  return r;
}

}  // namespace

const SystemEntry& find_system(std::string_view name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) throw ConfigError("unknown system '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> registered_systems() {
  std::vector<std::string> names;
  for (const auto& [name, entry] : registry()) names.push_back(name);
  return names;
}

Vector parse_state(const SystemEntry& entry, std::string_view text, int n) {
  if (entry.preset) {
    if (auto preset = entry.preset(text)) return *preset;
  }
  std::vector<double> values;
  try {
    values = parse_double_list(text);
  } catch (const ConfigError&) {
    throw ConfigError("'" + std::string(text) + "' is neither a preset of " + entry.name +
                      " nor a numeric state");
  }
  if (values.size() == 1) return Vector::Constant(n, values[0]);
  if (static_cast<int>(values.size()) != n) {
    throw ConfigError("state has " + std::to_string(values.size()) + " entries, system " +
                      entry.name + " needs " + std::to_string(n));
  }
  return Eigen::Map<const Vector>(values.data(), n);
}

Setup materialize(const RunConfig& config) {
  config.validate();
  Setup s;
  s.entry = &find_system(config.system);
  s.p = config.effective_p();
  s.system = s.entry->system();
  s.lyapunov = s.entry->lyapunov(s.p);
  if (config.kappa && config.kappa->size() != s.system->pairs().size()) {
    throw ConfigError("kappa override needs " + std::to_string(s.system->pairs().size()) +
                      " entries");
  }
  const int max_kappa = config.kappa
                            ? *std::max_element(config.kappa->begin(), config.kappa->end())
                            : static_cast<int>(s.system->pairs().size());
  if (config.substeps < 50 * max_kappa) {
    throw ConfigError("substeps must be at least 50 * max kappa = " +
                      std::to_string(50 * max_kappa));
  }
  if (config.law == LawMode::ClosedForm) {
    if (!s.entry->closed_form) {
      throw ConfigError("system " + s.entry->name + " has no closed-form law");
    }
    s.law = std::make_shared<const FeedbackLaw>(
        s.entry->closed_form(s.p, config.gamma, config.eps, config.kappa));
  } else {
    s.law = std::make_shared<const FeedbackLaw>(make_synthesized_law(
        s.system, s.lyapunov, config.gamma,
        assign_frequencies(s.system->pairs(), config.eps, config.kappa)));
  }
  s.x0 = parse_state(*s.entry, config.x0, s.system->n());
  return s;
}

}  // namespace oscstab
