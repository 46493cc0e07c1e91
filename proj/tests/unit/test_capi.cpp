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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstring>
#include <string>

#include "codazzi_lab.h"
#include "json.hpp"

namespace {

struct Session {
  codazzi_session* s = nullptr;
  ~Session() { codazzi_session_destroy(s); }
};

struct Str {
  char* p = nullptr;
  ~Str() { codazzi_string_free(p); }
};

constexpr const char* kSphereConfig =
    "immersion.name = round_sphere\n"
    "grid.n1 = 24\n"
    "checks = codazzi_h, umbilicity\n";

}  // namespace

TEST_CASE("capi: version and catalog") {
  CHECK(std::strlen(codazzi_version()) > 0);
  Str cat;
  REQUIRE(codazzi_catalog_json(&cat.p) == CODAZZI_OK);
  auto j = nlohmann::json::parse(cat.p);
  CHECK(j.size() == 7);
  CHECK(j[0].contains("name"));
  CHECK(j[0].contains("signature"));
}

TEST_CASE("capi: create, run, report round-trip") {
  Session s;
  REQUIRE(codazzi_session_create(kSphereConfig, &s.s) == CODAZZI_OK);
  CHECK(std::string(codazzi_session_error(s.s)).empty());
  CHECK(codazzi_session_run(s.s) == CODAZZI_OK);

  Str json;
  REQUIRE(codazzi_session_report(s.s, "json", &json.p) == CODAZZI_OK);
  auto j = nlohmann::json::parse(json.p);
  CHECK(j.at("schema") == "codazzi-lab/1");
  CHECK(j.at("checks").size() == 4);  // prerequisites expanded: structure, codazzi
  for (const auto& c : j.at("checks")) CHECK(c.at("pass") == true);

  Str md;
  REQUIRE(codazzi_session_report(s.s, "markdown", &md.p) == CODAZZI_OK);
  CHECK(std::string(md.p).find("round_sphere") != std::string::npos);

  Str md2;
  REQUIRE(codazzi_render_markdown(json.p, &md2.p) == CODAZZI_OK);
  CHECK(std::string(md2.p) == std::string(md.p));
}

TEST_CASE("capi: check failure maps to CODAZZI_CHECK_FAILED") {
  Session s;
  const char* cfg =
      "immersion.name = clifford_torus\n"
      "grid.n1 = 16\n"
      "checks = umbilicity\n";  // not umbilic
  REQUIRE(codazzi_session_create(cfg, &s.s) == CODAZZI_OK);
  CHECK(codazzi_session_run(s.s) == CODAZZI_CHECK_FAILED);
  Str json;
  REQUIRE(codazzi_session_report(s.s, "json", &json.p) == CODAZZI_OK);
  auto j = nlohmann::json::parse(json.p);
  bool saw_fail = false;
  for (const auto& c : j.at("checks"))
    if (!c.at("pass").get<bool>()) saw_fail = true;
  CHECK(saw_fail);
}

TEST_CASE("capi: config errors") {
  codazzi_session* s = reinterpret_cast<codazzi_session*>(1);
  CHECK(codazzi_session_create("mode = telepathy\n", &s) == CODAZZI_ERR_CONFIG);
  CHECK(s == nullptr);
  CHECK(codazzi_session_create(nullptr, &s) == CODAZZI_ERR_USAGE);
  CHECK(codazzi_session_create("x = 1\n", nullptr) == CODAZZI_ERR_USAGE);
}

TEST_CASE("capi: usage errors and error messages") {
  Session s;
  REQUIRE(codazzi_session_create(kSphereConfig, &s.s) == CODAZZI_OK);
  Str out;
  CHECK(codazzi_session_report(s.s, "json", &out.p) == CODAZZI_ERR_USAGE);  // before run
  CHECK(std::string(codazzi_session_error(s.s)) == "no run to report");
  REQUIRE(codazzi_session_run(s.s) == CODAZZI_OK);
  Str bad;
  CHECK(codazzi_session_report(s.s, "yaml", &bad.p) == CODAZZI_ERR_CONFIG);
  CHECK(std::string(codazzi_session_error(s.s)).find("format") != std::string::npos);
  CHECK(codazzi_session_run(nullptr) == CODAZZI_ERR_USAGE);
  CHECK(codazzi_render_markdown("{\"schema\":\"other\"}", &bad.p) == CODAZZI_ERR_CONFIG);
  CHECK(codazzi_render_markdown("not json", &bad.p) == CODAZZI_ERR_CONFIG);
}

TEST_CASE("capi: convergence study") {
  Session s;
  const char* cfg =
      "immersion.name = torus_of_revolution\n"
      "mode = fd\n"
      "fd.order = 2\n"
      "checks = codazzi_h\n"
      "tol.codazzi_h = 1.0\n";
  REQUIRE(codazzi_session_create(cfg, &s.s) == CODAZZI_OK);
  int grids[3] = {16, 32, 64};
  Str out;
  REQUIRE(codazzi_session_converge(s.s, grids, 3, &out.p) == CODAZZI_OK);
  auto j = nlohmann::json::parse(out.p);
  CHECK(j.size() == 3);
  CHECK(j[2].at("observed_order").at("codazzi_h").get<double>() > 1.8);

  int bad[2] = {16, 32};
  Str out2;
  CHECK(codazzi_session_converge(s.s, bad, 2, &out2.p) == CODAZZI_ERR_CONFIG);
}
