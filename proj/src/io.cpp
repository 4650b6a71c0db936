#include "qmc/io.hpp"

#include <fstream>
#include <sstream>

#include "qmc/errors.hpp"

namespace qmc {

namespace {

const json& require(const json& j, const std::string& key, const std::string& context) {
  if (!j.is_object()) throw ParseError(context, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(context.empty() ? key : context + "." + key, "missing");
  return *it;
}

std::string join(const std::string& context, const std::string& key) {
  return context.empty() ? key : context + "." + key;
}

std::size_t count_from_json(const json& j, const std::string& field) {
  if (!j.is_number_integer() && !j.is_number_unsigned())
    throw ParseError(field, "expected a nonnegative integer");
  const auto v = j.get<long long>();
  if (v < 0) throw ParseError(field, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

double real_from_json(const json& j, const std::string& field) {
  if (!j.is_number()) throw ParseError(field, "expected a number");
  return j.get<double>();
}

std::vector<std::size_t> dims_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw ParseError(field, "expected a nonempty array of dimensions");
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::size_t d = count_from_json(j[i], field + "[" + std::to_string(i) + "]");
    if (d == 0) throw ParseError(field, "dimensions must be positive");
    dims.push_back(d);
  }
  return dims;
}

std::vector<cplx> complex_list(const json& j, const std::string& field) {
  if (!j.is_array()) throw ParseError(field, "expected an array of [re, im] pairs");
  std::vector<cplx> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(complex_from_json(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

json complex_array(std::span<const cplx> values) {
  json arr = json::array();
  for (const cplx& z : values) arr.push_back(complex_to_json(z));
  return arr;
}

// Wraps library validation failures so the message points at the field that caused them.
template <class F>
auto with_field(const std::string& field, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(field, e.what());
  }
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("file", "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("file", std::string("malformed JSON: ") + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("out", "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(field, "expected an [re, im] pair of numbers");
  return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const ComplexMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", complex_array(m.entries())}};
}

ComplexMatrix matrix_from_json(const json& j, const std::string& field) {
  const std::size_t rows = count_from_json(require(j, "rows", field), join(field, "rows"));
  const std::size_t cols = count_from_json(require(j, "cols", field), join(field, "cols"));
  if (rows == 0 || cols == 0) throw ParseError(field, "matrix must be nonempty");
  const std::vector<cplx> entries = complex_list(require(j, "entries", field), join(field, "entries"));
  if (entries.size() != rows * cols)
    throw ParseError(join(field, "entries"), "expected rows * cols entries");
  ComplexMatrix m(rows, cols);
  std::copy(entries.begin(), entries.end(), m.entries().begin());
  return m;
}

json state_to_json(const TripartiteState& rho) {
  return {{"dims", rho.dims().list()}, {"matrix", complex_array(rho.matrix().entries())}};
}

json state_to_json(const PureState& psi) {
  return {{"dims", psi.dims()}, {"vector", complex_array(psi.amplitudes())}};
}

LoadedState state_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("file", "expected a JSON object");
  const std::vector<std::size_t> dims = dims_from_json(require(j, "dims", ""), "dims");
  if (dims.size() != 3) throw ParseError("dims", "expected three dimensions (d_A, d_B, d_C)");
  const bool has_matrix = j.contains("matrix");
  const bool has_vector = j.contains("vector");
  if (has_matrix == has_vector) throw ParseError("matrix", "exactly one of 'matrix' or 'vector' is required");
  const Dims3 d3{dims[0], dims[1], dims[2]};
  const std::size_t side = d3.total();
  if (has_vector) {
    std::vector<cplx> amp = complex_list(j["vector"], "vector");
    if (amp.size() != side) throw ParseError("vector", "length does not match the product of dims");
    PureState psi = with_field("vector", [&] { return PureState(std::move(amp), dims); });
    TripartiteState rho(psi.density(), d3);
    return {std::move(rho), std::move(psi)};
  }
  const std::vector<cplx> entries = complex_list(j["matrix"], "matrix");
  if (entries.size() != side * side) throw ParseError("matrix", "expected (d_A d_B d_C)^2 entries");
  ComplexMatrix m(side, side);
  std::copy(entries.begin(), entries.end(), m.entries().begin());
  return {with_field("matrix", [&] { return TripartiteState(std::move(m), d3); }), std::nullopt};
}

json classical_to_json(const ClassicalJoint& p) {
  return {{"shape", p.shape()}, {"table", p.table()}};
}

ClassicalJoint classical_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("file", "expected a JSON object");
  const std::vector<std::size_t> shape = dims_from_json(require(j, "shape", ""), "shape");
  if (shape.size() != 3) throw ParseError("shape", "expected three sizes");
  const json& table = require(j, "table", "");
  if (!table.is_array()) throw ParseError("table", "expected an array of probabilities");
  std::vector<double> values;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::string field = "table[" + std::to_string(i) + "]";
    const double v = real_from_json(table[i], field);
    if (v < 0.0) throw ParseError(field, "probabilities must be nonnegative");
    values.push_back(v);
  }
  if (values.size() != shape[0] * shape[1] * shape[2])
    throw ParseError("table", "length does not match the shape");
  return with_field("table", [&] {
    return ClassicalJoint({shape[0], shape[1], shape[2]}, std::move(values));
  });
}

json decomposition_to_json(const Decomposition& d) {
  json summands = json::array();
  for (const SummandShape& s : d.summands()) summands.push_back({s.left, s.right});
  return {{"summands", summands}, {"isometry", matrix_to_json(d.isometry())}};
}

Decomposition decomposition_from_json(const json& j) {
  const json& list = require(j, "summands", "");
  if (!list.is_array()) throw ParseError("summands", "expected an array of [left, right] pairs");
  std::vector<SummandShape> shapes;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string field = "summands[" + std::to_string(i) + "]";
    if (!list[i].is_array() || list[i].size() != 2) throw ParseError(field, "expected [left, right]");
    shapes.push_back({count_from_json(list[i][0], field), count_from_json(list[i][1], field)});
  }
  ComplexMatrix w = matrix_from_json(require(j, "isometry", ""), "isometry");
  return with_field("isometry", [&] { return Decomposition(std::move(shapes), std::move(w)); });
}

json opt_result_to_json(const OptResult& r) {
  json trace = json::array();
  for (const RestartTrace& t : r.trace)
    trace.push_back({{"restart", t.restart},
                     {"shape_index", t.shape_index},
                     {"value", t.value},
                     {"iterations", t.iterations},
                     {"converged", t.converged}});
  return {{"value", r.value},
          {"lower_bound", r.lower_bound},
          {"decomposition", decomposition_to_json(r.decomposition)},
          {"trace", trace},
          {"converged", r.converged}};
}

FamilyPoint family_from_json(const json& j) {
  const json& name = require(j, "family", "");
  if (!name.is_string()) throw ParseError("family", "expected a string");
  const std::string family = name.get<std::string>();
  if (family == "psi-x")
    return with_field("x", [&] { return psi_x(real_from_json(require(j, "x", ""), "x")); });
  if (family == "zeta-d")
    return with_field("d", [&] { return zeta_d(count_from_json(require(j, "d", ""), "d")); });
  if (family == "cq") {
    const json& probs = require(j, "probs", "");
    if (!probs.is_array()) throw ParseError("probs", "expected an array");
    std::vector<double> p;
    for (std::size_t i = 0; i < probs.size(); ++i)
      p.push_back(real_from_json(probs[i], "probs[" + std::to_string(i) + "]"));
    const json& states = require(j, "states", "");
    if (!states.is_array()) throw ParseError("states", "expected an array of vectors");
    std::vector<std::vector<cplx>> s;
    for (std::size_t i = 0; i < states.size(); ++i)
      s.push_back(complex_list(states[i], "states[" + std::to_string(i) + "]"));
    return with_field("states", [&] { return cq_ensemble(p, s); });
  }
  throw ParseError("family", "unknown family '" + family + "'");
}

json family_to_json(const FamilyPoint& p) {
  return p.pure ? state_to_json(*p.pure) : state_to_json(p.state);
}

}  // namespace qmc
