#include "delocal/state_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace delocal {

using nlohmann::json;

namespace {

json complex_list(const ComplexMatrix& m) {
  json list = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) list.push_back({m(r, c).real(), m(r, c).imag()});
  return list;
}

std::vector<Complex> read_complex_list(const json& list, const char* field) {
  if (!list.is_array()) throw ValidationError(field, "expected a list of [re, im] pairs");
  std::vector<Complex> out;
  for (const json& e : list) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      throw ValidationError(field, "entries must be [re, im] number pairs");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

Dims read_dims(const json& doc) {
  if (!doc.contains("dims") || !doc["dims"].is_array()) throw ValidationError("dims", "missing dims list");
  Dims dims;
  for (const json& d : doc["dims"]) {
    if (!d.is_number_integer() || d.get<int>() <= 0) throw ValidationError("dims", "dims must be positive integers");
    dims.push_back(d.get<int>());
  }
  return dims;
}

ComplexMatrix read_square(const json& doc, const Dims& dims) {
  const int n = total_dim(dims);
  const std::vector<Complex> entries = read_complex_list(doc["matrix"], "matrix");
  if (static_cast<int>(entries.size()) != n * n)
    throw ValidationError("matrix", fmt::format("expected {} entries, found {}", n * n, entries.size()));
  ComplexMatrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = entries[static_cast<std::size_t>(r * n + c)];
  return m;
}

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("document", fmt::format("invalid JSON: {}", e.what()));
  }
}

StateParams params_from_json(const json& p) {
  StateParams params;
  if (p.is_null()) return params;
  if (!p.is_object()) throw ValidationError("params", "expected an object");
  for (const auto& [key, value] : p.items()) {
    if (value.is_number())
      params[key] = value.get<double>();
    else if (value.is_string())
      params[key] = value.get<std::string>();
    else
      throw ValidationError(key, "parameter must be a number or a string");
  }
  return params;
}

json unitary_json(const ComplexMatrix& m) { return {{"dims", {m.rows()}}, {"matrix", complex_list(m)}}; }

ComplexMatrix read_unitary(const json& doc, const char* field) {
  if (!doc.is_object()) throw ValidationError(field, "expected {dims, matrix}");
  try {
    return read_square(doc, read_dims(doc));
  } catch (const ValidationError& e) {
    throw ValidationError(field, e.what());
  }
}

}  // namespace

State parse_state_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object()) throw ValidationError("document", "expected a JSON object");
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ValidationError("name", "expected a string");
    return named_state(doc["name"].get<std::string>(), params_from_json(doc.value("params", json())));
  }
  const Dims dims = read_dims(doc);
  if (doc.contains("amplitudes")) {
    const std::vector<Complex> a = read_complex_list(doc["amplitudes"], "amplitudes");
    if (static_cast<int>(a.size()) != total_dim(dims))
      throw ValidationError("amplitudes", "length does not match dims");
    return PureState(dims, Eigen::Map<const ComplexVector>(a.data(), static_cast<Eigen::Index>(a.size())));
  }
  if (!doc.contains("matrix")) throw ValidationError("matrix", "state document needs name, matrix or amplitudes");
  return DensityMatrix(dims, read_square(doc, dims));
}

std::string state_to_json(const State& state) {
  json doc;
  if (const auto* psi = std::get_if<PureState>(&state)) {
    doc["dims"] = psi->dims();
    doc["amplitudes"] = complex_list(psi->amplitudes());
  } else {
    const auto& rho = std::get<DensityMatrix>(state);
    doc["dims"] = rho.dims();
    doc["matrix"] = complex_list(rho.matrix());
  }
  return doc.dump(2) + "\n";
}

State parse_state_shorthand(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string name = spec.substr(0, colon);
  if (name.empty()) throw ValidationError("state", "empty state name");
  StateParams params;
  if (colon != std::string::npos) {
    std::stringstream rest(spec.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos)
        params[name == "basis" || name == "product" ? "bits" : "k"] = item;
      else
        params[item.substr(0, eq)] = item.substr(eq + 1);
    }
  }
  return named_state(name, params);
}

State load_state(const std::string& spec_or_path) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(spec_or_path, ec)) return parse_state_json(read_text_file(spec_or_path));
  return parse_state_shorthand(spec_or_path);
}

Tactic parse_tactic_json(const std::string& text) {
  const json doc = parse_document(text);
  if (!doc.is_object() || !doc.contains("u_a") || !doc.contains("v_b"))
    throw ValidationError("tactic", "tactic document needs u_a and v_b");
  return Tactic(read_unitary(doc["u_a"], "u_a"), read_unitary(doc["v_b"], "v_b"), doc.value("label", "file"));
}

std::string tactic_to_json(const Tactic& t) {
  json doc;
  doc["label"] = t.label();
  doc["u_a"] = unitary_json(t.u_a());
  doc["v_b"] = unitary_json(t.v_b());
  return doc.dump(2) + "\n";
}

Tactic read_tactic_file(const std::string& path) { return parse_tactic_json(read_text_file(path)); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot read '{}'", path));
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path));
  out << text;
  if (!out) throw IoError(fmt::format("write to '{}' failed", path));
}

std::string matrix_to_json(const ComplexMatrix& m) { return unitary_json(m).dump(); }

}  // namespace delocal
