#pragma once

#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "hllab/tensor.hpp"

namespace hllab {

// Tensor file format, version 1: a JSON document
//   {"version": 1, "m": 2, "dims": [2,2,1], "field": "real", "data": [...]}
// where data is the flat row-major array; complex entries are [re, im] pairs.

inline void write_tensor(std::ostream& os, const CoeffTensor& a) {
  validate(a);
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["m"] = dims_of(a).size() - 1;
  j["dims"] = dims_of(a);
  j["field"] = to_string(field_of(a));
  auto& data = j["data"];
  data = nlohmann::ordered_json::array();
  if (const auto* rt = std::get_if<RealTensor>(&a)) {
    for (double v : rt->data) data.push_back(v);
  } else {
    for (const auto& v : std::get<CplxTensor>(a).data)
      data.push_back({v.real(), v.imag()});
  }
  os << j.dump(2) << "\n";
}

inline void write_tensor(const std::string& path, const CoeffTensor& a) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_tensor(os, a);
}

[[nodiscard]] inline CoeffTensor read_tensor(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("tensor file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("version", 0) != 1)
    throw std::invalid_argument("tensor file must be a version-1 document");
  CoeffTensor out;
  try {
    std::vector<std::size_t> dims = j.at("dims").get<std::vector<std::size_t>>();
    Field field = parse_field(j.at("field").get<std::string>());
    const auto& data = j.at("data");
    if (!data.is_array()) throw std::invalid_argument("tensor data must be an array");
    if (field == Field::real) {
      RealTensor t;
      t.dims = dims;
      t.data.reserve(data.size());
      for (const auto& v : data) t.data.push_back(v.get<double>());
      out = std::move(t);
    } else {
      CplxTensor t;
      t.dims = dims;
      t.data.reserve(data.size());
      for (const auto& v : data) {
        if (!v.is_array() || v.size() != 2)
          throw std::invalid_argument("complex tensor entries must be [re, im] pairs");
        t.data.emplace_back(v[0].get<double>(), v[1].get<double>());
      }
      out = std::move(t);
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("tensor file malformed: ") + e.what());
  }
  try {
    validate(out);
  } catch (const std::domain_error& e) {
    throw std::invalid_argument(std::string("tensor file invalid: ") + e.what());
  }
  return out;
}

[[nodiscard]] inline CoeffTensor read_tensor(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open tensor file: " + path);
  return read_tensor(is);
}

}  // namespace hllab
