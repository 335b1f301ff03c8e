// Copyright 2026 The embrmt Authors
// SPDX-License-Identifier: Apache-2.0

#include "embrmt/embrmt.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "embrmt/basis.hpp"
#include "embrmt/classical.hpp"
#include "embrmt/errors.hpp"
#include "embrmt/moments.hpp"
#include "embrmt/orchestrator.hpp"
#include "embrmt/run_config.hpp"
#include "embrmt/version.hpp"

struct embrmt_run_config {
  embrmt::RunConfig config;
};

struct embrmt_manifest {
  embrmt::RunManifest manifest;
};

namespace {

thread_local std::string g_last_error;
thread_local bool g_member_failed = false;
thread_local std::uint64_t g_member = 0;

embrmt_status status_of(embrmt::ErrorKind kind) {
  using embrmt::ErrorKind;
  switch (kind) {
    case ErrorKind::kSpecification: return EMBRMT_ERR_SPEC;
    case ErrorKind::kDomain: return EMBRMT_ERR_DOMAIN;
    case ErrorKind::kCapacity: return EMBRMT_ERR_CAPACITY;
    case ErrorKind::kConfig: return EMBRMT_ERR_CONFIG;
    case ErrorKind::kNumerical: return EMBRMT_ERR_NUMERICAL;
    case ErrorKind::kIo: return EMBRMT_ERR_IO;
  }
  return EMBRMT_ERR_INTERNAL;
}

template <typename Fn>
embrmt_status guarded(Fn&& fn) {
  g_last_error.clear();
  g_member_failed = false;
  try {
    fn();
    return EMBRMT_OK;
  } catch (const embrmt::MemberError& e) {
    g_last_error = e.what();
    g_member_failed = true;
    g_member = e.member();
    return status_of(e.kind());
  } catch (const embrmt::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EMBRMT_ERR_CAPACITY;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EMBRMT_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return EMBRMT_ERR_INTERNAL;
  }
}

embrmt_status invalid(const char* what) {
  g_last_error = what;
  g_member_failed = false;
  return EMBRMT_ERR_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* embrmt_version(void) {
  static const std::string v(embrmt::version());
  return v.c_str();
}

const char* embrmt_status_string(embrmt_status status) {
  switch (status) {
    case EMBRMT_OK: return "ok";
    case EMBRMT_ERR_SPEC: return "invalid ensemble definition";
    case EMBRMT_ERR_DOMAIN: return "domain error";
    case EMBRMT_ERR_CAPACITY: return "capacity error";
    case EMBRMT_ERR_CONFIG: return "config error";
    case EMBRMT_ERR_NUMERICAL: return "numerical error";
    case EMBRMT_ERR_IO: return "io error";
    case EMBRMT_ERR_INVALID_ARGUMENT: return "invalid argument";
    case EMBRMT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* embrmt_last_error(void) { return g_last_error.c_str(); }

int embrmt_last_error_member(uint64_t* member) {
  if (!g_member_failed) return 0;
  if (member != nullptr) *member = g_member;
  return 1;
}

void embrmt_string_free(char* s) { std::free(s); }

embrmt_status embrmt_config_new(embrmt_run_config** out) {
  if (out == nullptr) return invalid("null output pointer");
  return guarded([&] { *out = new embrmt_run_config{}; });
}

embrmt_status embrmt_config_from_json(const char* json, embrmt_run_config** out) {
  if (json == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] { *out = new embrmt_run_config{embrmt::parse_run_config(json)}; });
}

embrmt_status embrmt_config_load(const char* path, embrmt_run_config** out) {
  if (path == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] { *out = new embrmt_run_config{embrmt::load_run_config(path)}; });
}

void embrmt_config_free(embrmt_run_config* config) { delete config; }

embrmt_status embrmt_config_merge_json(embrmt_run_config* config, const char* json) {
  if (config == nullptr || json == nullptr) return invalid("null argument");
  return guarded([&] { config->config = embrmt::merge_run_config(config->config, json); });
}

embrmt_status embrmt_config_set_command(embrmt_run_config* config, const char* command) {
  if (config == nullptr || command == nullptr) return invalid("null argument");
  return guarded([&] {
    const auto c = embrmt::parse_command(command);
    if (!c) throw embrmt::ConfigError(std::string("unknown command '") + command + "'");
    config->config.command = *c;
  });
}

embrmt_status embrmt_config_set_seed(embrmt_run_config* config, uint64_t seed) {
  if (config == nullptr) return invalid("null config");
  config->config.seed = seed;
  return EMBRMT_OK;
}

embrmt_status embrmt_config_set_members(embrmt_run_config* config, size_t members) {
  if (config == nullptr) return invalid("null config");
  config->config.members = members;
  return EMBRMT_OK;
}

embrmt_status embrmt_config_set_workers(embrmt_run_config* config, size_t workers) {
  if (config == nullptr) return invalid("null config");
  config->config.workers = workers;
  return EMBRMT_OK;
}

embrmt_status embrmt_config_set_output_dir(embrmt_run_config* config, const char* dir) {
  if (config == nullptr || dir == nullptr) return invalid("null argument");
  return guarded([&] { config->config.output_dir = dir; });
}

embrmt_status embrmt_config_validate(const embrmt_run_config* config) {
  if (config == nullptr) return invalid("null config");
  return guarded([&] { config->config.validate(); });
}

embrmt_status embrmt_config_to_json(const embrmt_run_config* config, char** out) {
  if (config == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] { *out = copy_string(embrmt::to_json(config->config)); });
}

embrmt_status embrmt_config_hash(const embrmt_run_config* config, char** out) {
  if (config == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] { *out = copy_string(embrmt::config_hash(config->config)); });
}

embrmt_status embrmt_run(const embrmt_run_config* config, embrmt_manifest** out) {
  if (config == nullptr) return invalid("null config");
  return guarded([&] {
    auto m = std::make_unique<embrmt_manifest>(embrmt_manifest{embrmt::run(config->config)});
    if (out != nullptr) *out = m.release();
  });
}

void embrmt_manifest_free(embrmt_manifest* manifest) { delete manifest; }

size_t embrmt_manifest_artifact_count(const embrmt_manifest* manifest) {
  return manifest == nullptr ? 0 : manifest->manifest.artifacts.size();
}

const char* embrmt_manifest_artifact_path(const embrmt_manifest* manifest, size_t i) {
  if (manifest == nullptr || i >= manifest->manifest.artifacts.size()) return nullptr;
  return manifest->manifest.artifacts[i].path.c_str();
}

const char* embrmt_manifest_artifact_sha256(const embrmt_manifest* manifest, size_t i) {
  if (manifest == nullptr || i >= manifest->manifest.artifacts.size()) return nullptr;
  return manifest->manifest.artifacts[i].sha256.c_str();
}

const char* embrmt_manifest_config_hash(const embrmt_manifest* manifest) {
  return manifest == nullptr ? nullptr : manifest->manifest.config_hash.c_str();
}

double embrmt_manifest_total_seconds(const embrmt_manifest* manifest) {
  if (manifest == nullptr) return 0.0;
  for (const auto& [name, seconds] : manifest->manifest.timings) {
    if (name == "total") return seconds;
  }
  return 0.0;
}

embrmt_status embrmt_manifest_to_json(const embrmt_manifest* manifest, char** out) {
  if (manifest == nullptr || out == nullptr) return invalid("null argument");
  return guarded([&] { *out = copy_string(manifest->manifest.to_json()); });
}

embrmt_status embrmt_dimension(size_t ell, size_t m, int bosons, uint64_t* out) {
  if (out == nullptr) return invalid("null output pointer");
  return guarded([&] {
    *out = embrmt::dimension(ell, m, bosons ? embrmt::Statistics::kBoson : embrmt::Statistics::kFermion);
  });
}

embrmt_status embrmt_semicircle_density(double e, double radius, double* out) {
  if (out == nullptr) return invalid("null output pointer");
  return guarded([&] { *out = embrmt::semicircle_density(e, radius); });
}

embrmt_status embrmt_semicircle_cdf(double e, double radius, double* out) {
  if (out == nullptr) return invalid("null output pointer");
  return guarded([&] { *out = embrmt::semicircle_cdf(e, radius); });
}

embrmt_status embrmt_edgeworth_density(double x, double gamma1, double gamma2, double* out) {
  if (out == nullptr) return invalid("null output pointer");
  return guarded([&] { *out = embrmt::edgeworth_density(x, gamma1, gamma2); });
}

}  // extern "C"
