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

// Command-line front end. Talks to the library only through the C interface.
#include <cstdio>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "oscstab/oscstab.h"

namespace {

constexpr int kExitError = 1;

struct Invocation {
  std::string config_file;
  std::vector<std::string> sets;                // "key=value" from --set
  std::map<std::string, std::string> flags;     // --<key> value
  bool json = false;
};

void add_common(CLI::App* cmd, Invocation& inv) {
  cmd->add_option("-c,--config", inv.config_file, "Config file with 'key = value' lines")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", inv.sets, "Override a config key, as key=value (repeatable)");
  cmd->add_flag("--json", inv.json, "Print the summary JSON instead of the text report");
  for (std::size_t k = 0; k < oscstab_config_key_count(); ++k) {
    const std::string key = oscstab_config_key_name(k);
    cmd->add_option_function<std::string>(
        "--" + key, [&inv, key](const std::string& v) { inv.flags[key] = v; },
        "Config key '" + key + "'");
  }
}

int report_error(const char* context) {
  std::fprintf(stderr, "oscstab: %s: %s\n", context, oscstab_last_error());
  return kExitError;
}

int execute(const std::string& command, const Invocation& inv) {
  oscstab_config* cfg = nullptr;
  if (oscstab_config_create(&cfg) != OSCSTAB_OK) return report_error("config");
  std::unique_ptr<oscstab_config, decltype(&oscstab_config_destroy)> guard(cfg, oscstab_config_destroy);

  if (!inv.config_file.empty() && oscstab_config_load_file(cfg, inv.config_file.c_str()) != OSCSTAB_OK) {
    return report_error("config");
  }
  for (const auto& kv : inv.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "oscstab: --set expects key=value, got '%s'\n", kv.c_str());
      return kExitError;
    }
    if (oscstab_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()) != OSCSTAB_OK) {
      return report_error("config");
    }
  }
  for (const auto& [key, value] : inv.flags) {
    if (oscstab_config_set(cfg, key.c_str(), value.c_str()) != OSCSTAB_OK) return report_error("config");
  }

  oscstab_report* rep = nullptr;
  oscstab_status st = OSCSTAB_OK;
  if (command == "run") st = oscstab_run(cfg, &rep);
  else if (command == "compare") st = oscstab_compare(cfg, &rep);
  else st = oscstab_verify(cfg, &rep);
  if (st != OSCSTAB_OK) return report_error(command.c_str());
  std::unique_ptr<oscstab_report, decltype(&oscstab_report_destroy)> rguard(rep, oscstab_report_destroy);

  if (inv.json) {
    std::printf("%s\n", oscstab_report_json(rep));
  } else {
    std::printf("%s", oscstab_report_text(rep));
    std::printf("output: %s\n", oscstab_report_output_dir(rep));
    std::printf("wall-clock: %.3f s\n", oscstab_report_wall_seconds(rep));
  }
  return oscstab_report_exit_code(rep);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oscillatory feedback stabilization of driftless systems"};
  app.set_version_flag("--version", std::string(oscstab_version()));
  app.require_subcommand(1);

  std::vector<std::pair<std::string, Invocation>> commands = {
      {"run", {}}, {"compare", {}}, {"verify", {}}};
  const std::map<std::string, std::string> help = {
      {"run", "Integrate the closed loop and write trajectory, window and summary files"},
      {"compare", "Run classical and sample-and-hold solutions and tabulate their difference"},
      {"verify", "Check the stability hypotheses numerically"}};
  std::vector<CLI::App*> subs;
  for (auto& [name, inv] : commands) {
    auto* sub = app.add_subcommand(name, help.at(name));
    add_common(sub, inv);
    subs.push_back(sub);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  for (std::size_t k = 0; k < subs.size(); ++k) {
    if (subs[k]->parsed()) return execute(commands[k].first, commands[k].second);
  }
  return kExitError;
}
