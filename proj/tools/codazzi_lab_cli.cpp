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

// Command-line front end; talks to the engine exclusively through the C API.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "codazzi_lab.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitError = 2;

int status_to_exit(codazzi_status s) {
  if (s == CODAZZI_OK) return kExitPass;
  if (s == CODAZZI_CHECK_FAILED) return kExitCheckFailed;
  return kExitError;
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path);
  if (!in) return false;
  std::stringstream ss;
  ss << in.rdbuf();
  out = ss.str();
  return true;
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path);
  if (!out) return false;
  out << text;
  return bool(out);
}

/// The config format is line-based, so CLI overrides are applied textually:
/// conflicting lines are dropped, override lines appended.
std::string apply_overrides(const std::string& config, int grid, const std::string& mode,
                            const std::vector<std::string>& tols) {
  std::stringstream in(config);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    std::string key = line.substr(0, line.find('='));
    key.erase(key.find_last_not_of(" \t") + 1);
    key.erase(0, key.find_first_not_of(" \t"));
    if (grid > 0 && key.rfind("grid.n", 0) == 0) continue;
    if (!mode.empty() && key == "mode") continue;
    out << line << "\n";
  }
  if (grid > 0) out << "grid.n1 = " << grid << "\n";
  if (!mode.empty()) out << "mode = " << mode << "\n";
  for (const std::string& t : tols) {
    size_t eq = t.find('=');
    if (eq == std::string::npos) throw CLI::ValidationError("--tol expects NAME=VALUE");
    out << "tol." << t.substr(0, eq) << " = " << t.substr(eq + 1) << "\n";
  }
  return out.str();
}

struct SessionHolder {
  codazzi_session* s = nullptr;
  ~SessionHolder() { codazzi_session_destroy(s); }
};

struct StringHolder {
  char* p = nullptr;
  ~StringHolder() { codazzi_string_free(p); }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of submanifold tensor identities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(codazzi_version()));

  auto* list = app.add_subcommand("list", "Print the immersion catalog");

  std::string config_path, output_path, format = "json", mode;
  int grid = 0;
  std::vector<std::string> tols;
  auto* verify = app.add_subcommand("verify", "Run a scenario's check pipeline");
  verify->add_option("config", config_path, "scenario config file")->required();
  verify->add_option("--grid", grid, "override every chart axis resolution");
  verify->add_option("--tol", tols, "tolerance override NAME=VALUE (repeatable)");
  verify->add_option("--mode", mode, "differentiation mode")
      ->check(CLI::IsMember({"dual", "fd"}));
  verify->add_option("--output", output_path, "write the report here (default stdout)");
  verify->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "markdown"}));

  std::string grids_arg;
  auto* converge = app.add_subcommand("converge", "Residual convergence study");
  converge->add_option("config", config_path, "scenario config file")->required();
  converge->add_option("--grids", grids_arg, "comma-separated resolutions, e.g. 64,128,256")
      ->required();
  converge->add_option("--output", output_path, "write the table here (default stdout)");

  std::string report_path, report_format = "markdown";
  auto* report = app.add_subcommand("report", "Re-render a JSON report");
  report->add_option("json", report_path, "report file from a previous run")->required();
  report->add_option("--format", report_format, "output format")
      ->check(CLI::IsMember({"json", "markdown"}));
  report->add_option("--output", output_path, "write here (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  if (list->parsed()) {
    StringHolder text;
    if (codazzi_catalog_json(&text.p) != CODAZZI_OK) return kExitError;
    std::cout << text.p;
    return kExitPass;
  }

  if (verify->parsed() || converge->parsed()) {
    std::string config;
    if (!read_file(config_path, config)) {
      std::cerr << "error: cannot read " << config_path << "\n";
      return kExitError;
    }
    try {
      config = apply_overrides(config, grid, mode, tols);
    } catch (const CLI::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitError;
    }
    SessionHolder session;
    codazzi_status st = codazzi_session_create(config.c_str(), &session.s);
    if (st != CODAZZI_OK) {
      std::cerr << "error: invalid configuration\n";
      return kExitError;
    }

    if (verify->parsed()) {
      codazzi_status run = codazzi_session_run(session.s);
      if (run != CODAZZI_OK && run != CODAZZI_CHECK_FAILED) {
        std::cerr << "error: " << codazzi_session_error(session.s) << "\n";
        return kExitError;
      }
      StringHolder text;
      if (codazzi_session_report(session.s, format.c_str(), &text.p) != CODAZZI_OK) {
        std::cerr << "error: " << codazzi_session_error(session.s) << "\n";
        return kExitError;
      }
      if (!write_output(output_path, text.p)) {
        std::cerr << "error: cannot write " << output_path << "\n";
        return kExitError;
      }
      return status_to_exit(run);
    }

    std::vector<int> resolutions;
    std::stringstream gs(grids_arg);
    std::string tok;
    while (std::getline(gs, tok, ',')) {
      try {
        resolutions.push_back(std::stoi(tok));
      } catch (const std::exception&) {
        std::cerr << "error: bad --grids entry '" << tok << "'\n";
        return kExitError;
      }
    }
    StringHolder text;
    codazzi_status st2 = codazzi_session_converge(session.s, resolutions.data(),
                                                  int(resolutions.size()), &text.p);
    if (st2 != CODAZZI_OK) {
      std::cerr << "error: " << codazzi_session_error(session.s) << "\n";
      return kExitError;
    }
    if (!write_output(output_path, text.p)) {
      std::cerr << "error: cannot write " << output_path << "\n";
      return kExitError;
    }
    return kExitPass;
  }

  // report
  std::string json_text;
  if (!read_file(report_path, json_text)) {
    std::cerr << "error: cannot read " << report_path << "\n";
    return kExitError;
  }
  if (report_format == "json") {
    return write_output(output_path, json_text) ? kExitPass : kExitError;
  }
  StringHolder text;
  if (codazzi_render_markdown(json_text.c_str(), &text.p) != CODAZZI_OK) {
    std::cerr << "error: not a valid report\n";
    return kExitError;
  }
  return write_output(output_path, text.p) ? kExitPass : kExitError;
}
