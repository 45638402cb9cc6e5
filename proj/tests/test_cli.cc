#include "support.hh"
#include "tal/automaton.hh"
#include "tal/json_io.hh"

#include <catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

using namespace tal;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr discarded.
Result tal_cli(const std::string& args) {
  std::string cmd = std::string(TAL_BIN) + " " + args + " 2>/dev/null";
  Result r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf{};
  while (auto n = fread(buf.data(), 1, buf.size(), p)) r.out.append(buf.data(), n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "tal_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string quoted(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("run prints acceptance and resets") {
  auto r = tal_cli("run " + test::data("example_cta.json") + " --word 'a:11/10;b:0'");
  CHECK(r.code == 0);
  CHECK(r.out == "accepted\n⊥⊤;⊥⊤\n");
  auto rejected = tal_cli("run " + test::data("example_cta.json") + " --word 'b:0'");
  CHECK(rejected.code == 1);
  CHECK(rejected.out.rfind("rejected", 0) == 0);
}

TEST_CASE("equiv exit codes") {
  CHECK(tal_cli("equiv " + test::data("example_cta.json") + " " + test::data("example_cta.json")).code == 0);
  save_automaton(test::third_hypothesis(), scratch("h3.json").string());
  auto r = tal_cli("equiv " + test::data("example_cta.json") + " " + quoted(scratch("h3.json")));
  CHECK(r.code == 1);
  CHECK(tal_cli("equiv " + test::data("example_cta.json") + " " + test::data("normal_a.json")).code == 2);
}

TEST_CASE("complete adds a sink") {
  auto r = tal_cli("complete " + test::data("example_dta.json") + " -o " + quoted(scratch("cta.json")));
  REQUIRE(r.code == 0);
  auto dta = test::load("example_dta.json");
  auto cta = load_automaton(scratch("cta.json").string());
  CHECK(cta.locations().size() == dta.locations().size() + 1);
  CHECK(cta.transitions().size() == dta.transitions().size() + 8);
  CHECK(is_complete(cta));
}

TEST_CASE("malformed input exits with 2") {
  std::ofstream(scratch("bad.json")) << R"({"alphabet": 3})";
  auto r = tal_cli("run " + quoted(scratch("bad.json")) + " --word 'a:0'");
  CHECK(r.code == 2);
  std::ofstream(scratch("truncated.json")) << R"({"alphabet": ["a"], )";
  CHECK(tal_cli("equiv " + quoted(scratch("truncated.json")) + " " + test::data("normal_a.json")).code == 2);
  CHECK(tal_cli("run " + test::data("example_cta.json") + " --word 'a:x'").code == 2);
  CHECK(tal_cli("learn --target /nonexistent.json").code == 2);
}

TEST_CASE("generate is deterministic and round-trips") {
  std::string args = "generate --locations 3 --actions 2 --clocks 2 --max-constant 3 --seed 11";
  auto a = tal_cli(args);
  auto b = tal_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  auto parsed = automaton_from_json(nlohmann::json::parse(a.out));
  CHECK(is_complete(parsed));
  CHECK(to_json(parsed) == nlohmann::json::parse(a.out));
}

TEST_CASE("learn writes an equivalent automaton and stats") {
  auto out = scratch("learned.json");
  auto stats = scratch("stats.csv");
  auto r = tal_cli("learn --mode powerful --target " + test::data("example_cta.json") + " --clocks 2 --ceilings 3,3 -o " +
                   quoted(out) + " --stats " + quoted(stats));
  REQUIRE(r.code == 0);
  CHECK(tal_cli("equiv " + test::data("example_cta.json") + " " + quoted(out)).code == 0);
  auto csv = read_file(stats);
  CHECK(csv.rfind("case_id,mode,mq,eq,rq,tables_explored,n,time_ms\n", 0) == 0);
  CHECK(tal_cli("learn --mode powerful --target " + test::data("example_cta.json") + " --clocks 3").code == 2);
  CHECK(tal_cli("learn --mode normal --target " + test::data("normal_a.json") + " --max-instances 5").code == 3);
}

TEST_CASE("bench CSV") {
  auto empty = tal_cli("bench");
  CHECK(empty.code == 0);
  CHECK(empty.out == "case_id,mode,mq,eq,rq,tables_explored,n,time_ms\n");
  auto r = tal_cli("bench --target " + test::data("example_cta.json") + " " + test::data("normal_a.json") + " --modes powerful");
  CHECK(r.code == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 3);
}
