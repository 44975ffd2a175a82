// End-to-end checks of the command line binary. Each case shells out to the
// real executable (path injected by the build) and inspects exit codes and,
// for --format json runs, the parsed report.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int exit_code;
  std::string output;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("perimetric-cli-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

CliResult run_cli(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const std::string cmd =
      std::string(PERIMETRIC_CLI_PATH) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  int code = -1;
  if (status != -1 && WIFEXITED(status)) code = WEXITSTATUS(status);
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  return {code, buf.str()};
}

fs::path write_doc(const std::string& name, const json& doc) {
  const fs::path p = work_dir() / name;
  std::ofstream out(p);
  out << doc.dump(2);
  return p;
}

fs::path line_instance() {
  static const fs::path p = write_doc("line.json", {
      {"labels", {"0", "1", "3"}},
      {"dist", {{0, 1, 3}, {1, 0, 2}, {3, 2, 0}}},
      {"map", {0, 0, 1}},
  });
  return p;
}

fs::path broken_instance() {
  static const fs::path p = write_doc("broken.json", {
      {"labels", {"a", "b", "c"}},
      {"dist", {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}},
      {"map", {0, 0, 0}},
  });
  return p;
}

fs::path cycle_instance() {
  static const fs::path p = write_doc("cycle.json", {
      {"labels", {"a", "b", "c"}},
      {"dist", {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}},
      {"map", {1, 0, 2}},
  });
  return p;
}

}  // namespace

TEST_CASE("cli: validate a clean instance") {
  const auto r = run_cli("validate --input " + line_instance().string());
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.output.find("OK") != std::string::npos);
}

TEST_CASE("cli: validate reports violations and exits 1") {
  const auto r = run_cli("validate --input " + broken_instance().string() +
                         " --format json");
  REQUIRE(r.exit_code == 1);
  const json rep = json::parse(r.output);
  REQUIRE_FALSE(rep["validation"]["ok"].get<bool>());
  REQUIRE(rep["validation"]["violations"][0]["axiom"] == "triangle");
}

TEST_CASE("cli: classify emits the full report") {
  const auto r = run_cli("classify --input " + line_instance().string() +
                         " --format json");
  REQUIRE(r.exit_code == 0);
  const json rep = json::parse(r.output);
  REQUIRE(rep["classification"]["banach"]["modulus"].get<double>() == 0.5);
  REQUIRE(rep["classification"]["perimeter"]["modulus"].get<double>() == 2.0 / 6.0);
  REQUIRE(rep["classification"]["fixed_points"] == json::array({"0"}));
  REQUIRE_FALSE(rep["classification"].contains("fg"));
}

TEST_CASE("cli: classify with an aggregator pair") {
  const auto r = run_cli("classify --input " + line_instance().string() +
                         " --f sum --g qnorm:2 --format json");
  REQUIRE(r.exit_code == 0);
  const json rep = json::parse(r.output);
  const double fg = rep["classification"]["fg"]["modulus"].get<double>();
  REQUIRE(std::abs(fg - 2.0 / std::sqrt(14.0)) <= 1e-15);
  REQUIRE(rep["classification"]["fg"]["g"] == "qnorm:2");
}

TEST_CASE("cli: classify pre-validates the metric") {
  const auto r = run_cli("classify --input " + broken_instance().string());
  REQUIRE(r.exit_code == 1);
  REQUIRE(r.output.find("FAILED") != std::string::npos);
}

TEST_CASE("cli: half an aggregator pair is an input error") {
  const auto r = run_cli("classify --input " + line_instance().string() + " --f sum");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.output.find("together") != std::string::npos);
}

TEST_CASE("cli: malformed aggregator spec is an input error") {
  const auto r = run_cli("classify --input " + line_instance().string() +
                         " --f sum --g qnorm:");
  REQUIRE(r.exit_code == 2);
}

TEST_CASE("cli: solve walks to the fixed point") {
  const auto r = run_cli("solve --input " + line_instance().string() +
                         " --start 3 --format json");
  REQUIRE(r.exit_code == 0);
  const json rep = json::parse(r.output);
  REQUIRE(rep["result"]["status"] == "converged");
  REQUIRE(rep["result"]["fixed_point"] == "0");
  REQUIRE(rep["orbit"]["points"] == json::array({"3", "1", "0"}));
  REQUIRE(rep["result"]["p0"].get<double>() == 6.0);
}

TEST_CASE("cli: solve on a cycle exits 1") {
  const auto r = run_cli("solve --input " + cycle_instance().string() +
                         " --start a --format json");
  REQUIRE(r.exit_code == 1);
  const json rep = json::parse(r.output);
  REQUIRE(rep["result"]["status"] == "cycle");
  REQUIRE(rep["period2_points"] == json::array({"a", "b"}));
}

TEST_CASE("cli: unknown start label is an input error") {
  const auto r = run_cli("solve --input " + line_instance().string() + " --start zz");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.output.find("zz") != std::string::npos);
}

TEST_CASE("cli: gallery three_point passes its claims") {
  const auto r = run_cli("gallery three_point --format json");
  REQUIRE(r.exit_code == 0);
  const json rep = json::parse(r.output);
  REQUIRE(rep["claims"]["ok"].get<bool>());
  REQUIRE(rep["claims"]["classification"]["fixed_points"] == json::array({"x", "y"}));
}

TEST_CASE("cli: gallery chain example passes its claims") {
  const auto r = run_cli("gallery figure1 --n 20 --epsilon 0.01 --format json");
  REQUIRE(r.exit_code == 0);
  const json rep = json::parse(r.output);
  REQUIRE(rep["claims"]["ok"].get<bool>());
  REQUIRE(rep["claims"]["banach_off_patch"]["modulus"].get<double>() == 1.0);
}

TEST_CASE("cli: gallery export writes a loadable instance") {
  const fs::path exported = work_dir() / "exported.json";
  const auto r = run_cli("gallery random --n 6 --seed 1 --export " + exported.string());
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(exported));

  std::ifstream in(exported);
  const json doc = json::parse(in);
  REQUIRE(doc["labels"].size() == 6);
  REQUIRE(doc["map"].size() == 6);
  REQUIRE(doc["meta"]["seed"] == 1);

  // The exported file is itself a valid classify input.
  const auto again = run_cli("classify --input " + exported.string());
  REQUIRE(again.exit_code == 0);
}

TEST_CASE("cli: unknown gallery name is an input error") {
  const auto r = run_cli("gallery nonesuch");
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.output.find("nonesuch") != std::string::npos);
}

TEST_CASE("cli: input errors") {
  REQUIRE(run_cli("validate").exit_code == 2);                    // missing --input
  REQUIRE(run_cli("validate --input /no/such/file.json").exit_code == 2);
  REQUIRE(run_cli("frobnicate").exit_code == 2);                  // unknown command
  REQUIRE(run_cli("validate --input x --bogus-flag").exit_code == 2);

  const fs::path garbage = work_dir() / "garbage.json";
  std::ofstream(garbage) << "{ not json";
  REQUIRE(run_cli("validate --input " + garbage.string()).exit_code == 2);

  const fs::path dup = write_doc("dup_labels.json", {
      {"labels", {"a", "a", "b"}},
      {"dist", {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}},
  });
  const auto r = run_cli("validate --input " + dup.string());
  REQUIRE(r.exit_code == 2);
  REQUIRE(r.output.find("duplicates") != std::string::npos);

  REQUIRE(run_cli("solve --input " + line_instance().string() +
                  " --max-steps 0").exit_code == 2);
}

TEST_CASE("cli: help exits cleanly") {
  REQUIRE(run_cli("--help").exit_code == 0);
  REQUIRE(run_cli("classify --help").exit_code == 0);
}

TEST_CASE("cli: solve without a map is an input error") {
  const fs::path nomap = write_doc("nomap.json", {
      {"labels", {"a", "b", "c"}},
      {"dist", {{0, 1, 1}, {1, 0, 1}, {1, 1, 0}}},
  });
  REQUIRE(run_cli("solve --input " + nomap.string()).exit_code == 2);
  REQUIRE(run_cli("classify --input " + nomap.string()).exit_code == 2);
}
