#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "qmc/cli.hpp"
#include "qmc/io.hpp"

using namespace qmc;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path p = fs::temp_directory_path() / ("qmc_cli_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> lines;
  std::stringstream ss(s);
  for (std::string line; std::getline(ss, line);) lines.push_back(line);
  return lines;
}

std::vector<double> column(const std::string& csv, std::size_t col) {
  std::vector<double> out;
  const auto lines = split_lines(csv);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    std::stringstream ss(lines[i]);
    std::string cell;
    for (std::size_t c = 0; c <= col; ++c) std::getline(ss, cell, ',');
    out.push_back(std::stod(cell));
  }
  return out;
}

std::string markov_file() {
  return write("markov.json", state_to_json(hidden_markov_state(2, 2, {{1, 1}, {1, 1}}, 3)).dump());
}

}  // namespace

TEST_SUITE("cli") {
TEST_CASE("number formatting") {
  CHECK(format_number(0.0) == "0.000000000000");
  CHECK(format_number(-1e-14) == "0.000000000000");
  CHECK(format_number(1.0) == "1.000000000000");
  CHECK(format_csv_number(0.1) == "0.1");
  CHECK(format_csv_number(2.0) == "2");
}

TEST_CASE("cmi") {
  CHECK(run({"cmi", markov_file()}).out == "0.000000000000\n");
  const std::string z = scratch() / "z2.json";
  REQUIRE(run({"family", "zeta-d", "--d", "2", "--out", z}).code == 0);
  CHECK(run({"cmi", z}).out == "0.415037499279\n");
  const std::string psi = scratch() / "psi.json";
  REQUIRE(run({"family", "psi-x", "--x", "0.5", "--out", psi}).code == 0);
  CHECK(run({"cmi", psi}).out.rfind("0.668122", 0) == 0);

  const Run bad = run({"cmi", write("bad.json", R"({"dims": [2, 2, 2], "matrix": 4})")});
  CHECK(bad.code == kExitInputError);
  CHECK(bad.err.find("'matrix'") != std::string::npos);
  const Run broken = run({"cmi", write("broken.json", "{\"dims\": [2, 2")});
  CHECK(broken.code == kExitInputError);
  CHECK(broken.err.find("'file'") != std::string::npos);
}

TEST_CASE("classical") {
  const std::string common = write("common.json", R"({"shape": [2, 1, 2], "table": [0.5, 0, 0, 0.5]})");
  const Run r = run({"classical", common});
  CHECK(r.code == 0);
  CHECK(r.out == "cmi 1.000000000000\nD 1.000000000000\n");
  const std::string q = scratch() / "q.json";
  CHECK(run({"classical", common, "--project", "--out", q}).code == 0);
  const ClassicalJoint proj = classical_from_json(read_json_file(q));
  for (double v : proj.table()) CHECK(v == doctest::Approx(0.25));

  const std::string chain = write("chain.json", R"({"shape": [2, 2, 2], "table": [0.5, 0, 0, 0, 0, 0, 0, 0.5]})");
  CHECK(run({"classical", chain}).out == "cmi 0.000000000000\nD 0.000000000000\n");
  const Run neg = run({"classical", write("neg.json", R"({"shape": [2, 1, 1], "table": [1.5, -0.5]})")});
  CHECK(neg.code == kExitInputError);
  CHECK(neg.err.find("table[1]") != std::string::npos);
}

TEST_CASE("delta") {
  const std::string m = markov_file();
  const std::string out1 = scratch() / "r1.json", out2 = scratch() / "r2.json";
  const Run r = run({"delta", m, "--restarts", "2", "--seed", "5", "--out", out1});
  CHECK(r.code == 0);
  CHECK(read_json_file(out1)["value"].get<double>() <= 1e-6);
  CHECK(run({"delta", m, "--restarts", "2", "--seed", "5", "--out", out2}).code == 0);
  CHECK(slurp(out1) == slurp(out2));

  const std::string psi = scratch() / "psi5.json";
  REQUIRE(run({"family", "psi-x", "--x", "0.5", "--out", psi}).code == 0);
  const Run p = run({"delta", psi, "--restarts", "2"});
  CHECK(p.code == 0);
  const auto lines = split_lines(p.out);
  REQUIRE(lines.size() == 2);
  const double upper = std::stod(lines[1].substr(6));
  CHECK(upper >= 0.811278 - 1e-3);
  CHECK(upper <= 1.622556 + 1e-3);

  CHECK(run({"delta", psi, "--max-iters", "2", "--restarts", "1", "--shape", "trivial"}).code == kExitNotConverged);
  CHECK(run({"delta", psi, "--restarts", "0"}).code == kExitInputError);
  CHECK(run({"delta", psi, "--shape", "diagonal"}).code == kExitInputError);
  CHECK(run({"delta", write("z3.json", state_to_json(*zeta_d(3).pure).dump()), "--shape", "full"}).code ==
        kExitInputError);
}

TEST_CASE("ep") {
  const double s = 1.0 / std::sqrt(2.0);
  json bell = {{"dims", {2, 2}}, {"vector", {{s, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {s, 0.0}}}};
  const Run r = run({"ep", write("bell.json", bell.dump()), "--restarts", "1"});
  CHECK(r.code == 0);
  CHECK(std::abs(std::stod(r.out) - 1.0) < 1e-3);
}

TEST_CASE("family and scan") {
  const Run cq = run({"family", "cq", "--params",
                      write("cq.json", R"({"family": "cq", "probs": [0.5, 0.5], "states": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]})")});
  CHECK(cq.code == 0);
  CHECK(cq.out.find("\"matrix\"") != std::string::npos);
  CHECK(run({"family", "psi-x"}).code == kExitInputError);
  CHECK(run({"family", "psi-x", "--x", "1.5"}).code == kExitInputError);

  const Run psi = run({"scan", "psi-x", "--grid", "0.3,0.2,0.1,0.05", "--restarts", "2"});
  CHECK(psi.code == 0);
  CHECK(split_lines(psi.out)[0] == "param,S_A,S_B,cmi,delta_lower,delta_upper,delta_hat,ratio");
  const auto ratio = column(psi.out, 7);
  REQUIRE(ratio.size() == 4);
  for (std::size_t i = 1; i < ratio.size(); ++i) CHECK(ratio[i] > ratio[i - 1]);
  const auto lower = column(psi.out, 4), upper = column(psi.out, 5), hat = column(psi.out, 6);
  for (std::size_t i = 0; i < hat.size(); ++i) {
    CHECK(hat[i] >= lower[i] - 1e-3);
    CHECK(hat[i] <= upper[i] + 1e-3);
  }

  const std::string csv = scratch() / "zeta.csv";
  const Run z = run({"scan", "zeta-d", "--grid", "2,3", "--restarts", "1", "--max-iters", "50", "--csv", csv});
  CHECK((z.code == 0 || z.code == kExitNotConverged));
  const std::string text = slurp(csv);
  for (double c : column(text, 3)) CHECK(c < 1.0);
  const auto dl = column(text, 4);
  REQUIRE(dl.size() == 2);
  CHECK(dl[0] == doctest::Approx(1.0));
  CHECK(dl[1] == doctest::Approx(1.585).epsilon(1e-3));
  CHECK(run({"scan", "zeta-d", "--grid", "2,x"}).code == kExitInputError);
}

TEST_CASE("verify") {
  const Run c = run({"verify", "--suite", "classical", "--seed", "3"});
  CHECK(c.code == 0);
  CHECK(c.out.find("classical/relative_entropy_equals_cmi  passed=200 failed=0") != std::string::npos);
  const Run e = run({"verify", "--suite", "entropy"});
  CHECK(e.code == 0);
  CHECK(e.out.find("entropy/pinsker") != std::string::npos);
  CHECK(e.out.find("entropy/fannes") != std::string::npos);
  CHECK(run({"verify", "--suite", "all", "--seed", "4"}).out == run({"verify", "--suite", "all", "--seed", "4"}).out);
  CHECK(run({"verify", "--suite", "nothing"}).code == kExitInputError);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitInputError);
  CHECK(run({"frobnicate"}).code == kExitInputError);
  CHECK(run({"cmi"}).code == kExitInputError);
  CHECK(run({"cmi", "/nonexistent.json"}).code == kExitInputError);
  CHECK(run({"--help"}).code == 0);
}
}
