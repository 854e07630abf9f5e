#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <string>

#include "bch/json_io.hpp"

using bch::AlgebraSpec;
using bch::TypeTag;
using nlohmann::json;

namespace {

std::string cli_path() {
  const char* env = std::getenv("BCH_CLI");
  REQUIRE_MESSAGE(env != nullptr, "BCH_CLI must point at the CLI binary");
  return env;
}

struct CmdResult {
  int exit_code;
  std::string out;
};

CmdResult run_cmd(const std::string& args) {
  const std::string full = cli_path() + " " + args + " 2>/dev/null";
  FILE* pipe = popen(full.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  const int status = pclose(pipe);
  return CmdResult{WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string fixtures_dir() {
  static std::string dir = [] {
    char tmpl[] = "/tmp/bch_cli_XXXXXX";
    REQUIRE(mkdtemp(tmpl) != nullptr);
    return std::string(tmpl);
  }();
  return dir;
}

std::string write_spec(const std::string& name, const AlgebraSpec& spec) {
  const std::string path = fixtures_dir() + "/" + name;
  std::ofstream(path) << bch::spec_to_json(spec).dump(2) << "\n";
  return path;
}

std::string write_text(const std::string& name, const std::string& text) {
  const std::string path = fixtures_dir() + "/" + name;
  std::ofstream(path) << text;
  return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("classify: report and exit codes") {
  const AlgebraSpec t1a = bch::complete_spec(
      TypeTag::T1a, {{"c", 1.0}, {"d", 2.0}, {"v", 3.0}, {"w", 4.0}, {"n", 0.5}, {"e", 0.25}});
  const auto r = run_cmd("classify --input " + write_spec("t1a.json", t1a));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("T1a") != std::string::npos);
  CHECK(r.out.find("D=6") != std::string::npos);
  CHECK(r.out.find("free: e,n") != std::string::npos);

  AlgebraSpec zero_pairs;
  zero_pairs.m = 2.0; zero_pairs.n = 1.0; zero_pairs.p = 0.25; zero_pairs.e = 0.5;
  const auto r2 = run_cmd("classify --input " + write_spec("t1cv.json", zero_pairs));
  CHECK(r2.exit_code == 0);
  CHECK(r2.out.find("T1c_v") != std::string::npos);
  CHECK(r2.out.find("D=4") != std::string::npos);

  const auto r3 = run_cmd("classify --input " + write_text("broken.json", "{not json"));
  CHECK(r3.exit_code == 3);

  AlgebraSpec corrupt = bch::sample_spec(TypeTag::T5, 2, 0.5);
  corrupt.n += 0.01;  // break the Jacobi system
  const auto r4 = run_cmd("classify --input " + write_spec("corrupt.json", corrupt));
  CHECK(r4.exit_code == 2);
}

TEST_CASE("solve: branch listing and failure codes") {
  const AlgebraSpec t5 = bch::sample_spec(TypeTag::T5, 6, 0.4);
  const auto r = run_cmd("solve --format json --input " + write_spec("t5.json", t5));
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["type"] == "T5");
  REQUIRE(j["solutions"].size() == 2);
  CHECK(j["solutions"][0]["branch"] == "factor_xu");
  CHECK(j["solutions"][1]["branch"] == "factor_xz");

  const AlgebraSpec t4 = bch::sample_spec(TypeTag::T4, 6, 0.4);
  const auto r4 = run_cmd("solve --format json --input " + write_spec("t4.json", t4));
  CHECK(r4.exit_code == 0);
  CHECK(json::parse(r4.out)["solutions"].size() == 2);

  const AlgebraSpec t3a = bch::sample_spec(TypeTag::T3a, 1, 0.4);
  const auto r3 = run_cmd("solve --format json --input " + write_spec("t3a.json", t3a));
  CHECK(r3.exit_code == 0);
  const json j3 = json::parse(r3.out);
  REQUIRE(j3["solutions"].size() == 1);
  // alpha = (m+u)/u
  const auto& a = j3["solutions"][0]["alpha"];
  const bch::Cplx want = (t3a.m + t3a.u) / t3a.u;
  CHECK(std::abs(bch::Cplx(a[0].get<double>(), a[1].get<double>()) - want) < 1e-12);

  // T1c_iii with w = 2*pi*i: the only root has s(w - beta z) on a pole, so
  // every candidate is inadmissible -> exit 4.
  AlgebraSpec excluded;
  excluded.d = 1.0;
  excluded.w = bch::Cplx(0.0, 2.0 * std::numbers::pi);
  excluded.m = 0.5;
  excluded.n = 0.3;
  const auto r5 = run_cmd("solve --input " + write_spec("excluded.json", excluded));
  CHECK(r5.exit_code == 4);
}

TEST_CASE("verify: sampled types and matrix oracle line") {
  const auto r = run_cmd("verify --type T1c_ii --seed 3 --tolerance 1e-9 --format json");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["pass"] == true);
  for (const auto& entry : j["series_oracle"])
    CHECK(entry["max_coeff_deviation"].get<double>() < 1e-9);

  AlgebraSpec central;
  central.c = 0.03; central.d = -0.02; central.e = 0.01;
  const auto r2 =
      run_cmd("verify --format json --input " + write_spec("central.json", central));
  CHECK(r2.exit_code == 0);
  const json j2 = json::parse(r2.out);
  REQUIRE(j2.contains("matrix_oracle"));
  CHECK(j2["matrix_oracle"][0]["deviation"].get<double>() < 1e-12);

  AlgebraSpec corrupt = bch::sample_spec(TypeTag::T2b, 2, 0.5);
  corrupt.n += 0.01;
  const auto r3 = run_cmd("verify --input " + write_spec("corrupt2.json", corrupt));
  CHECK(r3.exit_code == 2);
}

TEST_CASE("verify: failure exit code carries the worst discrepancy") {
  // unreachable tolerance forces the failure path
  const auto r = run_cmd("verify --type T4 --seed 1 --tolerance 1e-18 --format json");
  CHECK(r.exit_code == 5);
  CHECK(json::parse(r.out)["pass"] == false);
}

TEST_CASE("verify: large specs are rescaled onto the oracle's trusted range") {
  const AlgebraSpec big = bch::sample_spec(TypeTag::T5, 9, 2.0);
  const auto r = run_cmd("verify --format json --input " + write_spec("big.json", big));
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["oracle_scaling"].get<double>() < 1.0);
  CHECK(j["pass"] == true);
}

TEST_CASE("determinism: byte-identical reports") {
  const AlgebraSpec t4 = bch::sample_spec(TypeTag::T4, 13, 0.3);
  const std::string path = write_spec("det.json", t4);
  const auto a = run_cmd("solve --format json --input " + path);
  const auto b = run_cmd("solve --format json --input " + path);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);

  const auto c = run_cmd("verify --type T4 --seed 7 --format json");
  const auto d = run_cmd("verify --type T4 --seed 7 --format json");
  CHECK(c.out == d.out);
}

TEST_CASE("virasoro: values and usage errors") {
  const auto r = run_cmd(
      "virasoro --k 2 --lambda-minus-k 0.1 --lambda-0 0 --lambda-k 0.07 --central 1 "
      "--format json");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["two_factor"] == true);
  // c_k = l_{-k} l_k (c/24)(k^4 - k^2) = 0.007 * 12/24
  CHECK(std::abs(j["c_k"][0].get<double>() - 0.1 * 0.07 * 0.5) < 1e-12);
  CHECK(j["pass"] == true);

  const auto bad = run_cmd("virasoro --k 0 --lambda-minus-k 0.1 --lambda-0 0.1 --lambda-k 0.1");
  CHECK(bad.exit_code == 1);

  const auto k1 = run_cmd(
      "virasoro --k 1 --lambda-minus-k 0.1 --lambda-0 0.2 --lambda-k 0.1 --tolerance 1e-9 "
      "--format json");
  CHECK(k1.exit_code == 0);
  const json jk = json::parse(k1.out);
  CHECK(jk["matrix_oracle_deviation"].get<double>() < 1e-10);
  CHECK(jk["root_product_deviation"].get<double>() < 1e-12);
}

TEST_CASE("verify --all sweeps every type") {
  const auto r = run_cmd("verify --all --format json");
  CHECK(r.exit_code == 0);
  const json j = json::parse(r.out);
  CHECK(j["pass"] == true);
  CHECK(j["per_type"].size() == 13);
  for (const auto& entry : j["per_type"]) CHECK(entry["seeds"] == 25);
}

}  // TEST_SUITE
