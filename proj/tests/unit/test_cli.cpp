/* Copyright 2026 The nvbang Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "nvbang/cli.hpp"

namespace nvbang::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "nvbang");
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST_CASE("synth at the operating point") {
  const Result r = invoke({"synth", "--d-ghz", "2.87", "--b-ghz", "1.435", "--m-mhz", "200"});
  REQUIRE(r.code == kExitOk);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["n_swt"] == 8);
  CHECK(j["t_m_ns"].get<double>() == doctest::Approx(0.3497).epsilon(1e-3 / 0.3497));
  CHECK(j["regime"] == "weak");
  CHECK(r.err.find("n_swt=8") != std::string::npos);
}

TEST_CASE("bias in gauss") {
  const Result g = invoke({"synth", "--b-gauss", "512.042819", "--m-mhz", "200"});
  const Result f = invoke({"synth", "--b-ghz", "1.435", "--m-mhz", "200"});
  REQUIRE(g.code == kExitOk);
  CHECK(nlohmann::json::parse(g.out)["n_swt"] == nlohmann::json::parse(f.out)["n_swt"]);
  CHECK(invoke({"synth", "--b-gauss", "500", "--b-ghz", "1", "--m-mhz", "200"}).code == kExitUsage);
}

TEST_CASE("exit codes") {
  const Result singular = invoke({"synth", "--b-ghz", "2.87", "--m-mhz", "200"});
  CHECK(singular.code == kExitDomain);
  CHECK(singular.err.find("the point E=0 is singular") != std::string::npos);
  CHECK(invoke({"synth", "--b-ghz", "1", "--m-mhz", "0"}).code == kExitUsage);
  CHECK(invoke({"synth", "--b-ghz", "1"}).code == kExitUsage);
  CHECK(invoke({"synth", "--m-mhz", "200"}).code == kExitUsage);
  CHECK(invoke({"frobnicate"}).code == kExitUsage);
  CHECK(invoke({}).code == kExitUsage);
  CHECK(invoke({"synth", "--b-ghz", "x", "--m-mhz", "200"}).code == kExitUsage);
  CHECK(invoke({"evolve", "--b-ghz", "1", "--m-mhz", "200", "--levels", "4"}).code == kExitUsage);
  CHECK(invoke({"--help"}).code == kExitOk);
}

TEST_CASE("evolve prints populations") {
  const Result r = invoke({"evolve", "--b-ghz", "1.435", "--m-mhz", "200"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.find("P-1 = ") != std::string::npos);
  const Result j = invoke({"evolve", "--b-ghz", "2.77", "--m-mhz", "200", "--levels", "2", "--format", "json"});
  REQUIRE(j.code == kExitOk);
  CHECK(nlohmann::json::parse(j.out)["fidelity_2lvl"].get<double>() >= 1.0 - 1e-6);
}

TEST_CASE("recorded trajectory has increasing time") {
  const Result r = invoke({"evolve", "--b-ghz", "2.77", "--m-mhz", "200", "--levels", "2", "--record"});
  REQUIRE(r.code == kExitOk);
  const std::vector<std::string> rows = lines(r.out);
  REQUIRE(rows.size() > 10);
  CHECK(rows[0] == "t_ns,p_plus1,p_0,p_minus1,bloch_x,bloch_y,bloch_z");
  double previous = -1.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double t = std::stod(rows[i].substr(0, rows[i].find(',')));
    CHECK(t > previous);
    previous = t;
  }
}

TEST_CASE("sweep, scan and spectrum headers") {
  const Result sweep = invoke({"sweep", "--m-mhz", "200", "--b-from-ghz", "1.4", "--b-to-ghz", "1.45", "--step-mhz", "10"});
  REQUIRE(sweep.code == kExitOk);
  const std::vector<std::string> sweep_rows = lines(sweep.out);
  CHECK(sweep_rows[0] == "b_ghz,b_gauss,regime,t_ns,t_over_trwa,p_minus1,p_plus1,n_swt");
  CHECK(sweep_rows.size() == 7);

  const Result scan = invoke({"scan", "--b-ghz", "1.435", "--m-mhz", "200", "--nu-from-ghz", "3", "--nu-to-ghz", "5", "--step-ghz", "0.5"});
  REQUIRE(scan.code == kExitOk);
  const std::vector<std::string> scan_rows = lines(scan.out);
  CHECK(scan_rows[0] == "nu_c_ghz,p_minus1,p_plus1");
  CHECK(scan_rows.size() == 6);

  const Result spec = invoke({"spectrum", "--b-ghz", "1.435", "--m-mhz", "200", "--max-ghz", "6"});
  REQUIRE(spec.code == kExitOk);
  CHECK(lines(spec.out)[0] == "nu_ghz,magnitude");
}

TEST_CASE("json formats parse") {
  for (const std::vector<std::string>& args : std::vector<std::vector<std::string>>{
           {"sweep", "--m-mhz", "200", "--b-from-ghz", "1.4", "--b-to-ghz", "1.45", "--step-mhz", "10", "--format", "json"},
           {"scan", "--b-ghz", "1.435", "--m-mhz", "200", "--nu-from-ghz", "3", "--nu-to-ghz", "5", "--step-ghz", "0.5", "--format", "json"},
           {"spectrum", "--b-ghz", "1.435", "--m-mhz", "200", "--max-ghz", "2", "--format", "json"}}) {
    const Result r = invoke(args);
    REQUIRE(r.code == kExitOk);
    CHECK(nlohmann::json::parse(r.out).is_structured());
  }
}

TEST_CASE("output is deterministic and honours --out") {
  const std::vector<std::string> args = {"sweep", "--m-mhz", "200", "--b-from-ghz", "1.0", "--b-to-ghz", "2.0", "--step-mhz", "50", "--threads", "3"};
  const Result a = invoke(args);
  const Result b = invoke(args);
  REQUIRE(a.code == kExitOk);
  CHECK(a.out == b.out);

  const std::filesystem::path path = std::filesystem::temp_directory_path() / "nvbang_cli_test.csv";
  std::vector<std::string> to_file = args;
  to_file.insert(to_file.end(), {"--out", path.string()});
  const Result c = invoke(to_file);
  REQUIRE(c.code == kExitOk);
  CHECK(c.out.empty());
  std::ifstream in(path);
  std::stringstream written;
  written << in.rdbuf();
  CHECK(written.str() == a.out);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace nvbang::cli
