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

#include "oscstab/oscstab.h"

#include <memory>
#include <string>

#include "oscstab/app.hpp"
#include "oscstab/errors.hpp"
#include "oscstab/io.hpp"
#include "oscstab/registry.hpp"

struct oscstab_config {
  oscstab::RunConfig cfg;
};

struct oscstab_report {
  oscstab::Report report;
  std::string json;
  std::string dir;
};

struct oscstab_system {
  std::shared_ptr<const oscstab::VectorFieldSystem> sys;
};

struct oscstab_law {
  oscstab::Setup setup;
};

struct oscstab_trajectory {
  oscstab::Trajectory traj;
};

namespace {

thread_local std::string g_last_error;

oscstab_status fail(oscstab_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename F>
oscstab_status guarded(F&& fn) {
  g_last_error.clear();
  try {
    fn();
    return OSCSTAB_OK;
  } catch (const oscstab::ConfigError& e) {
    return fail(OSCSTAB_ERR_CONFIG, e.what());
  } catch (const oscstab::InvalidArgument& e) {
    return fail(OSCSTAB_ERR_INVALID_ARGUMENT, e.what());
  } catch (const oscstab::SingularMatrixError& e) {
    return fail(OSCSTAB_ERR_SINGULAR, e.what());
  } catch (const oscstab::EvaluationError& e) {
    return fail(OSCSTAB_ERR_EVALUATION, e.what());
  } catch (const oscstab::IoError& e) {
    return fail(OSCSTAB_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return fail(OSCSTAB_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(OSCSTAB_ERR_INTERNAL, "unknown error");
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw oscstab::InvalidArgument(what);
}

oscstab::Vector to_vector(const double* x, int n) {
  require(x != nullptr, "null state pointer");
  return Eigen::Map<const oscstab::Vector>(x, n);
}

void copy_out(const oscstab::Vector& v, double* out) {
  require(out != nullptr, "null output pointer");
  std::copy(v.data(), v.data() + v.size(), out);
}

template <typename Fn>
oscstab_status subcommand(const oscstab_config* config, oscstab_report** out, Fn fn) {
  return guarded([&] {
    require(config && out, "null argument");
    auto r = std::make_unique<oscstab_report>();
    r->report = fn(config->cfg);
    r->json = r->report.summary.dump(2);
    r->dir = r->report.out_dir.string();
    *out = r.release();
  });
}

}  // namespace

extern "C" {

const char* oscstab_version(void) { return "0.1.0"; }

const char* oscstab_last_error(void) { return g_last_error.c_str(); }

const char* oscstab_status_name(oscstab_status status) {
  switch (status) {
    case OSCSTAB_OK: return "ok";
    case OSCSTAB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case OSCSTAB_ERR_CONFIG: return "config error";
    case OSCSTAB_ERR_EVALUATION: return "evaluation error";
    case OSCSTAB_ERR_SINGULAR: return "singular matrix";
    case OSCSTAB_ERR_IO: return "i/o error";
    case OSCSTAB_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

oscstab_status oscstab_config_create(oscstab_config** out) {
  return guarded([&] {
    require(out != nullptr, "null argument");
    *out = new oscstab_config();
  });
}

void oscstab_config_destroy(oscstab_config* config) { delete config; }

oscstab_status oscstab_config_set(oscstab_config* config, const char* key, const char* value) {
  return guarded([&] {
    require(config && key && value, "null argument");
    config->cfg.set(key, value);
  });
}

oscstab_status oscstab_config_load_file(oscstab_config* config, const char* path) {
  return guarded([&] {
    require(config && path, "null argument");
    config->cfg.load_file(path);
  });
}

oscstab_status oscstab_config_load_text(oscstab_config* config, const char* text) {
  return guarded([&] {
    require(config && text, "null argument");
    config->cfg.load_text(text);
  });
}

oscstab_status oscstab_config_validate(const oscstab_config* config) {
  return guarded([&] {
    require(config != nullptr, "null argument");
    (void)oscstab::materialize(config->cfg);
  });
}

size_t oscstab_config_key_count(void) { return oscstab::RunConfig::keys().size(); }

const char* oscstab_config_key_name(size_t index) {
  const auto& k = oscstab::RunConfig::keys();
  return index < k.size() ? k[index].c_str() : nullptr;
}

oscstab_status oscstab_config_initial_state(const oscstab_config* config, double* x0, int n) {
  return guarded([&] {
    require(config && x0, "null argument");
    const auto& entry = oscstab::find_system(config->cfg.system);
    const int dim = entry.system()->n();
    require(n == dim, "state buffer size does not match the system dimension");
    copy_out(oscstab::parse_state(entry, config->cfg.x0, dim), x0);
  });
}

oscstab_status oscstab_run(const oscstab_config* config, oscstab_report** out) {
  return subcommand(config, out, oscstab::run_command);
}

oscstab_status oscstab_compare(const oscstab_config* config, oscstab_report** out) {
  return subcommand(config, out, oscstab::compare_command);
}

oscstab_status oscstab_verify(const oscstab_config* config, oscstab_report** out) {
  return subcommand(config, out, oscstab::verify_command);
}

void oscstab_report_destroy(oscstab_report* report) { delete report; }

int oscstab_report_exit_code(const oscstab_report* report) {
  return report ? report->report.exit_code : oscstab::kExitError;
}

const char* oscstab_report_json(const oscstab_report* report) {
  return report ? report->json.c_str() : "";
}

const char* oscstab_report_text(const oscstab_report* report) {
  return report ? report->report.text.c_str() : "";
}

const char* oscstab_report_output_dir(const oscstab_report* report) {
  return report ? report->dir.c_str() : "";
}

double oscstab_report_wall_seconds(const oscstab_report* report) {
  return report ? report->report.wall_seconds : 0.0;
}

size_t oscstab_system_registered_count(void) { return oscstab::registered_systems().size(); }

const char* oscstab_system_registered_name(size_t index) {
  static const std::vector<std::string> names = oscstab::registered_systems();
  return index < names.size() ? names[index].c_str() : nullptr;
}

oscstab_status oscstab_system_create(const char* name, oscstab_system** out) {
  return guarded([&] {
    require(name && out, "null argument");
    *out = new oscstab_system{oscstab::find_system(name).system()};
  });
}

void oscstab_system_destroy(oscstab_system* system) { delete system; }

int oscstab_system_state_dim(const oscstab_system* system) { return system ? system->sys->n() : 0; }

int oscstab_system_input_dim(const oscstab_system* system) { return system ? system->sys->m() : 0; }

int oscstab_system_pair_count(const oscstab_system* system) {
  return system ? static_cast<int>(system->sys->pairs().size()) : 0;
}

oscstab_status oscstab_system_pair(const oscstab_system* system, int index, int* i, int* j) {
  return guarded([&] {
    require(system && i && j, "null argument");
    const auto& pairs = system->sys->pairs();
    require(index >= 0 && index < static_cast<int>(pairs.size()), "pair index out of range");
    *i = pairs[index].i;
    *j = pairs[index].j;
  });
}

oscstab_status oscstab_system_field(const oscstab_system* system, int k, const double* x,
                                    double* out) {
  return guarded([&] {
    require(system != nullptr, "null system");
    require(k >= 0 && k < system->sys->m(), "field index out of range");
    copy_out(system->sys->field(k, to_vector(x, system->sys->n())), out);
  });
}

oscstab_status oscstab_system_lie_bracket(const oscstab_system* system, int i, int j,
                                          const double* x, double* out) {
  return guarded([&] {
    require(system != nullptr, "null system");
    copy_out(oscstab::lie_bracket(*system->sys, i, j, to_vector(x, system->sys->n())), out);
  });
}

oscstab_status oscstab_system_assemble_F(const oscstab_system* system, const double* x,
                                         double* out, double* condition) {
  return guarded([&] {
    require(system && out, "null argument");
    const auto bm = oscstab::assemble_F(*system->sys, to_vector(x, system->sys->n()));
    std::copy(bm.columns.data(), bm.columns.data() + bm.columns.size(), out);
    if (condition) *condition = bm.condition;
  });
}

oscstab_status oscstab_law_create(const oscstab_config* config, oscstab_law** out) {
  return guarded([&] {
    require(config && out, "null argument");
    *out = new oscstab_law{oscstab::materialize(config->cfg)};
  });
}

void oscstab_law_destroy(oscstab_law* law) { delete law; }

int oscstab_law_state_dim(const oscstab_law* law) { return law ? law->setup.system->n() : 0; }

int oscstab_law_input_dim(const oscstab_law* law) { return law ? law->setup.system->m() : 0; }

oscstab_status oscstab_law_eval(const oscstab_law* law, const double* x, double t, double* u) {
  return guarded([&] {
    require(law != nullptr, "null law");
    copy_out(law->setup.law->eval(to_vector(x, law->setup.system->n()), t), u);
  });
}

oscstab_status oscstab_law_lyapunov(const oscstab_law* law, const double* x, double* value) {
  return guarded([&] {
    require(law && value, "null argument");
    *value = law->setup.lyapunov->value(to_vector(x, law->setup.system->n()));
  });
}

oscstab_status oscstab_law_certificate(const oscstab_law* law, const double* x, double* W,
                                       double* alpha, double* beta) {
  return guarded([&] {
    require(law != nullptr, "null law");
    const auto c = oscstab::compute_W(*law->setup.law, *law->setup.lyapunov,
                                      to_vector(x, law->setup.system->n()));
    if (W) *W = c.W;
    if (alpha) *alpha = c.alpha;
    if (beta) *beta = c.beta;
  });
}

oscstab_status oscstab_integrate(const oscstab_law* law, const double* x0, double horizon,
                                 int substeps, int record_stride, int sampled,
                                 oscstab_trajectory** out) {
  return guarded([&] {
    require(law && out, "null argument");
    oscstab::IntegrationOptions opts;
    opts.substeps = substeps;
    opts.record_stride = record_stride;
    const auto mode = sampled ? oscstab::IntegrationMode::Sampled : oscstab::IntegrationMode::Classical;
    auto traj = oscstab::integrate(mode, *law->setup.law, *law->setup.lyapunov,
                                   to_vector(x0, law->setup.system->n()), horizon, opts);
    *out = new oscstab_trajectory{std::move(traj)};
  });
}

void oscstab_trajectory_destroy(oscstab_trajectory* traj) { delete traj; }

size_t oscstab_trajectory_size(const oscstab_trajectory* traj) { return traj ? traj->traj.t.size() : 0; }

size_t oscstab_trajectory_window_count(const oscstab_trajectory* traj) {
  return traj ? traj->traj.completed_windows() : 0;
}

int oscstab_trajectory_diverged(const oscstab_trajectory* traj) {
  return traj && traj->traj.diverged ? 1 : 0;
}

oscstab_status oscstab_trajectory_sample(const oscstab_trajectory* traj, size_t index, double* t,
                                         double* x, double* V, double* norm) {
  return guarded([&] {
    require(traj != nullptr, "null trajectory");
    require(index < traj->traj.t.size(), "sample index out of range");
    if (t) *t = traj->traj.t[index];
    if (x) copy_out(traj->traj.x[index], x);
    if (V) *V = traj->traj.V[index];
    if (norm) *norm = traj->traj.norm[index];
  });
}

oscstab_status oscstab_trajectory_write_csv(const oscstab_trajectory* traj, const char* path) {
  return guarded([&] {
    require(traj && path, "null argument");
    oscstab::write_text_file(path, oscstab::trajectory_csv(traj->traj));
  });
}

oscstab_status oscstab_trajectory_write_windows(const oscstab_trajectory* traj, const char* path) {
  return guarded([&] {
    require(traj && path, "null argument");
    oscstab::write_text_file(path, oscstab::windows_json(traj->traj).dump(2) + "\n");
  });
}

}  // extern "C"
