#include <doctest.h>

#include <string>

#include "qmc/errors.hpp"
#include "qmc/io.hpp"

using namespace qmc;

namespace {

// Field named by the ParseError thrown from f, or "" when nothing is thrown.
template <class F>
std::string failing_field(F&& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST_SUITE("io") {
TEST_CASE("state round trips") {
  const TripartiteState rho = random_tripartite({2, 1, 3}, 2, 5);
  const LoadedState back = state_from_json(json::parse(state_to_json(rho).dump()));
  CHECK(back.state.matrix() == rho.matrix());
  CHECK(back.state.dims() == rho.dims());
  CHECK_FALSE(back.pure.has_value());

  const FamilyPoint p = psi_x(0.3);
  const LoadedState pure = state_from_json(family_to_json(p));
  REQUIRE(pure.pure.has_value());
  CHECK(max_abs_diff(pure.state.matrix(), p.state.matrix()) < 1e-15);
}

TEST_CASE("state parse errors name the field") {
  CHECK(failing_field([] { state_from_json(json::parse(R"({"matrix": []})")); }) == "dims");
  CHECK(failing_field([] { state_from_json(json::parse(R"({"dims": [2, 0, 2], "vector": []})")); }) == "dims");
  CHECK(failing_field([] { state_from_json(json::parse(R"({"dims": [1, 1]})")); }) == "dims");
  CHECK(failing_field([] { state_from_json(json::parse(R"({"dims": [1, 1, 1]})")); }) == "matrix");
  CHECK(failing_field([] { state_from_json(json::parse(R"({"dims": [1, 1, 2], "vector": [[1, 0]]})")); }) == "vector");
  CHECK(failing_field([] { state_from_json(json::parse(R"({"dims": [1, 1, 2], "vector": [[1, 0], [1]]})")); }) ==
        "vector[1]");
  CHECK(failing_field([] { state_from_json(json::parse(R"({"dims": [1, 1, 2], "vector": [[1, 0], [1, 0]]})")); }) ==
        "vector");
  CHECK(failing_field([] {
          state_from_json(json::parse(R"({"dims": [1, 1, 2], "matrix": [[1, 0], [0, 0], [0, 0], [1, 0]]})"));
        }) == "matrix");
  CHECK(failing_field([] { read_json_file("/nonexistent/qmc.json"); }) == "file");
}

TEST_CASE("classical round trip and errors") {
  const ClassicalJoint p({2, 1, 2}, {0.5, 0.0, 0.0, 0.5});
  const ClassicalJoint back = classical_from_json(classical_to_json(p));
  CHECK(back.table() == p.table());
  CHECK(back.shape() == p.shape());
  CHECK(failing_field([] { classical_from_json(json::parse(R"({"shape": [2, 1, 1], "table": [1.5, -0.5]})")); }) ==
        "table[1]");
  CHECK(failing_field([] { classical_from_json(json::parse(R"({"shape": [2, 1, 1], "table": [0.5]})")); }) ==
        "table");
  CHECK(failing_field([] { classical_from_json(json::parse(R"({"shape": [2, 1, 1], "table": [0.5, 0.4]})")); }) ==
        "table");
  CHECK(failing_field([] { classical_from_json(json::parse(R"({"table": [1]})")); }) == "shape");
}

TEST_CASE("decomposition round trip") {
  const Decomposition d(std::vector<SummandShape>{{2, 1}, {1, 1}}, random_haar_isometry(2, 3, 8));
  const Decomposition back = decomposition_from_json(json::parse(decomposition_to_json(d).dump()));
  CHECK(back.summands() == d.summands());
  CHECK(back.isometry() == d.isometry());
  json bad = decomposition_to_json(d);
  bad["isometry"]["entries"][0] = json::array({5.0, 0.0});
  CHECK(failing_field([&] { decomposition_from_json(bad); }) == "isometry");
  bad = decomposition_to_json(d);
  bad["summands"][0] = 3;
  CHECK(failing_field([&] { decomposition_from_json(bad); }) == "summands[0]");
}

TEST_CASE("optimizer results serialize") {
  OptResult r{0.5, Decomposition::canonical(2, {{2, 1}}), 0.25, {}, true};
  r.trace.push_back({0, 0, 0.5, 12, true, {0.7, 0.5}});
  const json j = opt_result_to_json(r);
  CHECK(j["value"] == 0.5);
  CHECK(j["lower_bound"] == 0.25);
  CHECK(j["converged"] == true);
  CHECK(j["trace"][0]["iterations"] == 12);
  CHECK(j["decomposition"]["summands"][0][0] == 2);
}

TEST_CASE("family parameter files") {
  const FamilyPoint p = family_from_json(json::parse(R"({"family": "psi-x", "x": 0.5})"));
  CHECK(p.closed_forms.at("S_A") == doctest::Approx(0.811278124459));
  CHECK(family_from_json(json::parse(R"({"family": "zeta-d", "d": 2})")).state.dims() == Dims3{2, 3, 2});
  const FamilyPoint cq = family_from_json(
      json::parse(R"({"family": "cq", "probs": [0.5, 0.5], "states": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]]})"));
  CHECK(cq.state.dims() == Dims3{2, 2, 2});
  CHECK(failing_field([] { family_from_json(json::parse(R"({"family": "psi-x", "x": 2})")); }) == "x");
  CHECK(failing_field([] { family_from_json(json::parse(R"({"family": "psi-x"})")); }) == "x");
  CHECK(failing_field([] { family_from_json(json::parse(R"({"family": "zeta-d", "d": 1.5})")); }) == "d");
  CHECK(failing_field([] { family_from_json(json::parse(R"({"family": "ghz"})")); }) == "family");
  CHECK(failing_field([] { family_from_json(json::parse(R"({"family": "cq", "probs": [1], "states": [[[1, 0], [1, 0]]]})")); }) ==
        "states");
}
}
