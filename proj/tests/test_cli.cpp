#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

using json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
};

// Runs the CLI with stderr discarded unless requested.
Run cli(const std::string& args, bool merge_stderr = false) {
  const std::string cmd = std::string(MML_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::filesystem::path scratch() {
  auto dir = std::filesystem::temp_directory_path() / "mml_cli_unit";
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("pack examples") {
  auto r = cli("pack --m 10 --mode exhaustive");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["vectors"].size() >= 4);
  r = cli("pack --m 1 --target 2");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["vectors"].size() == 2);
  r = cli("pack --m 64 --mode exhaustive", true);
  CHECK(r.code == 2);
  CHECK(r.out.find("2^") != std::string::npos);
}

TEST_CASE("family examples") {
  auto r = cli("family ising --graph path:8 --n 700 --c2 0.1");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["models"].size() >= 3);
  r = cli("family gaussian --graph empty:5 --n 100 --c2 0.1");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["models"].size() == 1);
  const auto bad = scratch() / "bad_graph.json";
  std::FILE* f = std::fopen(bad.c_str(), "w");
  std::fputs(R"({"d": 4, "edgez": [[1, 2]]})", f);
  std::fclose(f);
  r = cli("family ising --graph " + bad.string() + " --n 700 --c2 0.1", true);
  CHECK(r.code == 2);
  CHECK(r.out.find("'edges'") != std::string::npos);
}

TEST_CASE("bound examples") {
  auto r = cli("bound vc --family gaussian --d 8 --m 7 --n 2400 --c 1");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)[0]["value"].get<double>() == doctest::Approx(0.1));
  r = cli("bound fano --alpha 1 --beta 0 --size 2 --n 10");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)[0]["value"].get<double>() == 0.0);
  r = cli("bound vc --family ising-no-field --d 10 --m 0 --n 5");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)[0]["value"].get<double>() == 0.0);
  r = cli("bound vc --family gaussian --d 8 --m 7 --n 2400 --format csv");
  CHECK(r.out == "family,d,m,n,bound_type,value,constants\ngaussian,8,7,2400,vc,0.1,c=1;vc_dimension=24\n");
}

TEST_CASE("risk examples and validation") {
  auto r = cli("risk --inject n^-0.5 --n-grid 100,400,1600,6400");
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["fit"]["slope"].get<double>() == doctest::Approx(-0.5));
  const auto fam = scratch() / "fam.json";
  REQUIRE(cli("family ising --graph path:6 --delta 0.05 --out " + fam.string()).code == 0);
  CHECK(cli("risk --family " + fam.string() + " --n-grid 10 --trials 0").code == 2);
  CHECK(cli("risk --family " + fam.string() + " --n-grid 40,10 --trials 5").code == 2);
  const auto plot = scratch() / "plot.csv";
  r = cli("risk --family " + fam.string() + " --n-grid 10,40 --trials 5 --plot-data " + plot.string());
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["points"].size() == 2);
  CHECK(std::filesystem::exists(plot));
}

TEST_CASE("verify examples and exit codes") {
  auto r = cli("verify --check psd --seed 7");
  CHECK(r.code == 0);
  CHECK(json::parse(r.out)["status"] == "PASS");
  r = cli("verify --check nonsense", true);
  CHECK(r.code == 2);
  CHECK(r.out.find("kl-ising") != std::string::npos);
  CHECK(cli("pack").code == 2);
  CHECK(cli("frobnicate").code == 2);
}

TEST_CASE("manifest replay reproduces the output") {
  const auto dir = scratch();
  const auto out = dir / "pack.json";
  REQUIRE(cli("pack --m 12 --mode random --target 6 --seed 4 --out " + out.string()).code == 0);
  const auto manifest = dir / "pack.json.manifest.json";
  REQUIRE(std::filesystem::exists(manifest));
  std::FILE* f = std::fopen(out.c_str(), "r");
  std::string first(4096, '\0');
  first.resize(std::fread(first.data(), 1, first.size(), f));
  std::fclose(f);
  std::filesystem::remove(out);
  REQUIRE(cli("replay " + manifest.string()).code == 0);
  f = std::fopen(out.c_str(), "r");
  std::string second(4096, '\0');
  second.resize(std::fread(second.data(), 1, second.size(), f));
  std::fclose(f);
  CHECK(first == second);
}

TEST_CASE("environment overrides the enumeration cutoff") {
  const auto fam = scratch() / "fam8.json";
  REQUIRE(cli("family ising --graph path:8 --delta 0.05 --out " + fam.string()).code == 0);
  const std::string risk = "risk --family " + fam.string() + " --n-grid 10 --trials 2";
  CHECK(cli(risk).code == 0);
  const std::string cmd = "MML_EXACT_CUTOFF=6 " + std::string(MML_CLI_PATH) + " " + risk + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  CHECK(WEXITSTATUS(status) == 2);
  CHECK(out.find("MML_EXACT_CUTOFF") != std::string::npos);
}
