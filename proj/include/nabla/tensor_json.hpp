#pragma once

// Tensor interchange format:
//
//   {"shape": {"p": 2, "q": 1, "n": 4},
//    "components": [{"cov": [1, 2], "contra": [1], "poly": "x3"}, ...]}
//
// Only nonzero components are listed, in flat (row-major, covariant first)
// order.  Indices are 1-based.

#include "nabla/poly_io.hpp"
#include "nabla/tensor.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <stdexcept>
#include <string>

namespace nabla {

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline nlohmann::json tensor_to_json(const TensorField& t) {
  const auto& s = t.shape();
  nlohmann::json comps = nlohmann::json::array();
  IndexCodec c = t.codec();
  for (std::size_t flat = 0; flat < s.component_count(); ++flat) {
    if (t[flat].is_zero()) continue;
    auto idx = c.decode(flat);
    nlohmann::json cov = nlohmann::json::array(), contra = nlohmann::json::array();
    for (std::size_t i = 0; i < s.p; ++i) cov.push_back(idx[i] + 1);
    for (std::size_t i = 0; i < s.q; ++i) contra.push_back(idx[s.p + i] + 1);
    comps.push_back({{"cov", cov}, {"contra", contra}, {"poly", to_string(t[flat])}});
  }
  return {{"shape", {{"p", s.p}, {"q", s.q}, {"n", s.n}}}, {"components", comps}};
}

inline TensorField tensor_from_json(const nlohmann::json& j) {
  try {
    const auto& sj = j.at("shape");
    TensorShape s{sj.at("p").get<std::size_t>(), sj.at("q").get<std::size_t>(), sj.at("n").get<std::size_t>()};
    if (s.n == 0) throw FormatError("tensor dimension must be positive");
    TensorField t(s);
    std::set<std::size_t> seen;
    for (const auto& cj : j.at("components")) {
      auto cov = cj.at("cov").get<std::vector<std::size_t>>();
      auto contra = cj.at("contra").get<std::vector<std::size_t>>();
      if (cov.size() != s.p || contra.size() != s.q) throw FormatError("component index arity does not match shape");
      std::vector<std::size_t> idx;
      for (auto v : cov) idx.push_back(v);
      for (auto v : contra) idx.push_back(v);
      for (auto& v : idx) {
        if (v < 1 || v > s.n) throw FormatError("component index " + std::to_string(v) + " out of range");
        --v;
      }
      std::size_t flat = t.codec().encode(idx);
      if (!seen.insert(flat).second) throw FormatError("duplicate component entry");
      t[flat] = parse_polynomial(cj.at("poly").get<std::string>(), s.n);
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed tensor document: ") + e.what());
  }
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

inline TensorField read_tensor_file(const std::string& path) { return tensor_from_json(read_json_file(path)); }

inline void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

}  // namespace nabla
