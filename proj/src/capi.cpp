// Copyright 2026 codazzi-lab developers
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

#include "codazzi_lab.h"

#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include "codazzi/runner.hpp"

struct codazzi_session {
  codazzi::ScenarioConfig config;
  std::optional<codazzi::VerificationReport> report;
  std::string error;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

codazzi_status record_error(codazzi_session* s, codazzi_status code, const char* what) {
  if (s) s->error = what;
  return code;
}

}  // namespace

extern "C" {

const char* codazzi_version(void) { return "codazzi-lab 1.0.0"; }

codazzi_status codazzi_session_create(const char* config_text, codazzi_session** out) {
  if (!out) return CODAZZI_ERR_USAGE;
  *out = nullptr;
  if (!config_text) return CODAZZI_ERR_USAGE;
  try {
    auto* s = new codazzi_session;
    s->config = codazzi::parse_scenario(config_text);
    *out = s;
    return CODAZZI_OK;
  } catch (const codazzi::ConfigError&) {
    return CODAZZI_ERR_CONFIG;
  } catch (const std::exception&) {
    return CODAZZI_ERR_CONFIG;
  }
}

void codazzi_session_destroy(codazzi_session* s) { delete s; }

const char* codazzi_session_error(const codazzi_session* s) {
  return s ? s->error.c_str() : "";
}

codazzi_status codazzi_session_run(codazzi_session* s) {
  if (!s) return CODAZZI_ERR_USAGE;
  s->error.clear();
  try {
    s->report = codazzi::run_scenario(s->config);
    return s->report->all_pass() ? CODAZZI_OK : CODAZZI_CHECK_FAILED;
  } catch (const codazzi::ConfigError& e) {
    return record_error(s, CODAZZI_ERR_CONFIG, e.what());
  } catch (const codazzi::GeometryError& e) {
    return record_error(s, CODAZZI_ERR_GEOMETRY, e.what());
  } catch (const std::exception& e) {
    return record_error(s, CODAZZI_ERR_GEOMETRY, e.what());
  }
}

codazzi_status codazzi_session_report(codazzi_session* s, const char* format, char** out) {
  if (!s || !format || !out) return CODAZZI_ERR_USAGE;
  *out = nullptr;
  s->error.clear();
  if (!s->report) return record_error(s, CODAZZI_ERR_USAGE, "no run to report");
  try {
    std::string text;
    if (std::strcmp(format, "json") == 0) {
      text = codazzi::emit_report_json(*s->report);
    } else if (std::strcmp(format, "markdown") == 0) {
      text = codazzi::emit_report_markdown(*s->report);
    } else {
      return record_error(s, CODAZZI_ERR_CONFIG, "format must be json or markdown");
    }
    *out = dup_string(text);
    return *out ? CODAZZI_OK : CODAZZI_ERR_USAGE;
  } catch (const std::exception& e) {
    return record_error(s, CODAZZI_ERR_GEOMETRY, e.what());
  }
}

codazzi_status codazzi_session_converge(codazzi_session* s, const int* resolutions,
                                        int count, char** out) {
  if (!s || !resolutions || !out || count < 1) return CODAZZI_ERR_USAGE;
  *out = nullptr;
  s->error.clear();
  try {
    std::vector<int> res(resolutions, resolutions + count);
    auto rows = codazzi::convergence_study(s->config, res);
    *out = dup_string(codazzi::convergence_json(rows).dump(2) + "\n");
    return *out ? CODAZZI_OK : CODAZZI_ERR_USAGE;
  } catch (const codazzi::ConfigError& e) {
    return record_error(s, CODAZZI_ERR_CONFIG, e.what());
  } catch (const codazzi::GeometryError& e) {
    return record_error(s, CODAZZI_ERR_GEOMETRY, e.what());
  } catch (const std::exception& e) {
    return record_error(s, CODAZZI_ERR_GEOMETRY, e.what());
  }
}

codazzi_status codazzi_catalog_json(char** out) {
  if (!out) return CODAZZI_ERR_USAGE;
  *out = nullptr;
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const codazzi::CatalogEntry& e : codazzi::catalog_entries())
    j.push_back({{"name", e.name}, {"signature", e.signature}, {"description", e.description}});
  *out = dup_string(j.dump(2) + "\n");
  return *out ? CODAZZI_OK : CODAZZI_ERR_USAGE;
}

codazzi_status codazzi_render_markdown(const char* report_json, char** out) {
  if (!report_json || !out) return CODAZZI_ERR_USAGE;
  *out = nullptr;
  try {
    auto j = nlohmann::ordered_json::parse(report_json);
    if (!j.contains("schema") || j.at("schema").get<std::string>() != "codazzi-lab/1")
      return CODAZZI_ERR_CONFIG;
    *out = dup_string(codazzi::render_report_markdown(j));
    return *out ? CODAZZI_OK : CODAZZI_ERR_USAGE;
  } catch (const std::exception&) {
    return CODAZZI_ERR_CONFIG;
  }
}

void codazzi_string_free(char* s) { std::free(s); }

}  // extern "C"
