#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "structdist/distribution.hpp"

// Problem files are JSON documents:
//
//   {
//     "family": "linear_chain",
//     "config": {"n": 3, "m": 2},
//     "potentials": {"init": [0, 0], "transitions": [[[0, 0], [0, "-inf"]], ...]},
//     "structure": {...}          optional indicator, same layout as potentials
//   }
//
// Spanning-tree configs carry "directed", "projective" and "single_root_edge"; CTC configs
// carry "target". Infinite values are the strings "-inf" and "inf".

namespace structdist::io {

using Json = nlohmann::json;

struct ProblemFile {
  StructuredDistribution distribution;
  std::optional<StructureIndicator> structure;
};

inline Json number_to_json(double x) {
  if (x == kNegInf) return "-inf";
  if (x == kPosInf) return "inf";
  return x;
}

inline double number_from_json(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "-inf") return kNegInf;
    if (s == "inf") return kPosInf;
  }
  throw InvalidArgument("expected a number or \"-inf\", got " + j.dump());
}

namespace detail {

inline Json nested(const Tensor& t, std::size_t dim, std::size_t& cursor) {
  if (dim == t.rank()) return number_to_json(t.data()[cursor++]);
  Json arr = Json::array();
  for (std::size_t k = 0; k < t.extent(dim); ++k) arr.push_back(nested(t, dim + 1, cursor));
  return arr;
}

inline void infer_shape(const Json& j, Shape& shape, std::size_t dim) {
  if (!j.is_array()) return;
  if (dim == shape.size()) shape.push_back(j.size());
  if (!j.empty()) infer_shape(j.front(), shape, dim + 1);
}

inline void collect(const Json& j, const Shape& shape, std::size_t dim, std::vector<double>& out) {
  if (dim == shape.size()) {
    if (j.is_array()) throw InvalidArgument("ragged tensor: unexpected nesting depth");
    out.push_back(number_from_json(j));
    return;
  }
  if (!j.is_array() || j.size() != shape[dim]) throw InvalidArgument("ragged tensor: rows of unequal length");
  for (const auto& e : j) collect(e, shape, dim + 1, out);
}

}  // namespace detail

inline Json tensor_to_json(const Tensor& t) {
  std::size_t cursor = 0;
  return detail::nested(t, 0, cursor);
}

/// Nested arrays (or a bare number for a scalar) to a tensor. Rows must be rectangular.
inline Tensor tensor_from_json(const Json& j) {
  Shape shape;
  detail::infer_shape(j, shape, 0);
  std::vector<double> data;
  detail::collect(j, shape, 0, data);
  return Tensor(std::move(shape), std::move(data));
}

inline Json tensor_set_to_json(const TensorSet& set) {
  Json obj = Json::object();
  for (const auto& [name, t] : set.entries()) obj[name] = tensor_to_json(t);
  return obj;
}

inline Json config_to_json(Family family, const Config& c) {
  Json j = Json::object();
  switch (family) {
    case Family::linear_chain:
    case Family::monotone_alignment:
    case Family::tree_crf: j = {{"n", c.n}, {"m", c.m}}; break;
    case Family::semi_markov: j = {{"n", c.n}, {"s", c.s}, {"m", c.m}}; break;
    case Family::ctc: j = {{"n", c.n}, {"v", c.v}, {"target", c.target}}; break;
    case Family::one_to_one: j = {{"n", c.n}}; break;
    case Family::pcfg: j = {{"n", c.n}, {"nt", c.nt}, {"pt", c.pt}}; break;
    case Family::spanning_tree:
      j = {{"n", c.n},
           {"directed", c.spanning.directed},
           {"projective", c.spanning.projective},
           {"single_root_edge", c.spanning.single_root_edge}};
      break;
  }
  return j;
}

inline Config config_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("\"config\" must be an object");
  Config c;
  const auto size = [&](const char* key, std::size_t& field) {
    if (!j.contains(key)) return;
    if (!j[key].is_number_unsigned()) throw InvalidArgument(std::string("config \"") + key + "\" must be a non-negative integer");
    field = j[key].get<std::size_t>();
  };
  const auto flag = [&](const char* key, bool& field) {
    if (!j.contains(key)) return;
    if (!j[key].is_boolean()) throw InvalidArgument(std::string("config \"") + key + "\" must be a boolean");
    field = j[key].get<bool>();
  };
  size("n", c.n);
  size("m", c.m);
  size("s", c.s);
  size("nt", c.nt);
  size("pt", c.pt);
  size("v", c.v);
  flag("directed", c.spanning.directed);
  flag("projective", c.spanning.projective);
  flag("single_root_edge", c.spanning.single_root_edge);
  if (j.contains("target")) {
    if (!j["target"].is_array()) throw InvalidArgument("config \"target\" must be an array of labels");
    for (const auto& x : j["target"]) {
      if (!x.is_number_unsigned()) throw InvalidArgument("config \"target\" labels must be non-negative integers");
      c.target.push_back(x.get<std::size_t>());
    }
  }
  return c;
}

namespace detail {

// An empty nested array loses its trailing extents; restore them from the declared config.
inline TensorSet tensor_set_from_json(const Json& j, Family family, const Config& declared) {
  if (!j.is_object()) throw InvalidArgument("tensor set must be an object of named nested arrays");
  TensorSet set;
  std::optional<std::vector<std::pair<std::string, Shape>>> layout;
  for (const auto& [name, value] : j.items()) {
    Tensor t = tensor_from_json(value);
    if (t.size() == 0) {
      if (!layout) layout = potential_layout(family, declared);
      for (const auto& [lname, shape] : *layout)
        if (lname == name && shape_size(shape) == 0) t = Tensor(shape);
    }
    set.add(name, std::move(t));
  }
  return set;
}

}  // namespace detail

inline ProblemFile problem_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("problem document must be a JSON object");
  if (!j.contains("family") || !j["family"].is_string()) throw InvalidArgument("problem document needs a \"family\" string");
  if (!j.contains("potentials")) throw InvalidArgument("problem document needs \"potentials\"");
  const Family family = family_from_string(j["family"].get<std::string>());
  const Config declared = j.contains("config") ? config_from_json(j["config"]) : Config{};
  StructuredDistribution dist(family, detail::tensor_set_from_json(j["potentials"], family, declared), declared);
  std::optional<StructureIndicator> structure;
  if (j.contains("structure")) structure = detail::tensor_set_from_json(j["structure"], family, dist.config());
  return {std::move(dist), std::move(structure)};
}

inline Json problem_to_json(const StructuredDistribution& d, const std::optional<StructureIndicator>& structure = {}) {
  Json j = {{"family", std::string(to_string(d.family()))},
            {"config", config_to_json(d.family(), d.config())},
            {"potentials", tensor_set_to_json(d.potentials())}};
  if (structure) j["structure"] = tensor_set_to_json(*structure);
  return j;
}

inline ProblemFile read_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
  return problem_from_json(j);
}

inline void write_problem(const std::string& path, const StructuredDistribution& d,
                          const std::optional<StructureIndicator>& structure = {}) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << problem_to_json(d, structure).dump(2) << '\n';
}

}  // namespace structdist::io
