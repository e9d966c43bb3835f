// Copyright 2026 The shapetensor Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SHAPETENSOR_JSON_IO_HPP
#define SHAPETENSOR_JSON_IO_HPP

#include <fstream>
#include <set>
#include <string>

#include <json.hpp>

#include "shapetensor/bodies.hpp"
#include "shapetensor/reconstruct.hpp"
#include "shapetensor/tensors.hpp"

namespace shapetensor {

using nlohmann::json;

namespace detail {

inline void require_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& what) {
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument(what + ": unknown field '" + it.key() + "'");
}

inline json vec_to_json(const Vec& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

inline Vec vec_from_json(const json& arr) {
  Vec v(arr.size());
  for (size_t i = 0; i < arr.size(); ++i) v[int(i)] = arr[i].get<double>();
  return v;
}

}  // namespace detail

// --- measures --------------------------------------------------------------

inline json measure_to_json(const DiscreteMeasure& mu) {
  json j;
  j["n"] = mu.dim;
  json atoms = json::array(), weights = json::array();
  for (int i = 0; i < mu.size(); ++i) {
    atoms.push_back(detail::vec_to_json(mu.atoms[i]));
    weights.push_back(mu.weights[i]);
  }
  j["atoms"] = atoms;
  j["weights"] = weights;
  return j;
}

inline DiscreteMeasure measure_from_json(const json& j) {
  detail::require_keys(j, {"n", "atoms", "weights"}, "measure");
  DiscreteMeasure mu(j.at("n").get<int>());
  const json& atoms = j.at("atoms");
  const json& weights = j.at("weights");
  if (atoms.size() != weights.size())
    throw std::invalid_argument("measure: atoms/weights length mismatch");
  for (size_t i = 0; i < atoms.size(); ++i)
    mu.add(detail::vec_from_json(atoms[i]), weights[i].get<double>());
  return mu;
}

// --- tensor sets and harmonic vectors ---------------------------------------

inline json tensor_set_to_json(const TensorSet& ts) {
  json j;
  j["kind"] = "tensors";
  j["n"] = ts.n;
  j["s_o"] = ts.s_o;
  j["ordering"] = "lex-v1";
  j["values"] = detail::vec_to_json(ts.phi_vector());
  return j;
}

inline TensorSet tensor_set_from_json(const json& j) {
  detail::require_keys(j, {"kind", "n", "s_o", "ordering", "values", "surface_area", "phi0"},
                       "tensor set");
  if (j.value("kind", "tensors") != std::string("tensors"))
    throw std::invalid_argument("tensor set: wrong kind");
  if (j.value("ordering", "lex-v1") != std::string("lex-v1"))
    throw std::invalid_argument("tensor set: unsupported ordering");
  return TensorSet::from_phi_vector(j.at("n").get<int>(), j.at("s_o").get<int>(),
                                    detail::vec_from_json(j.at("values")));
}

inline json harmonic_vector_to_json(const HarmonicVector& h) {
  json j;
  j["kind"] = "harmonics";
  j["n"] = h.n;
  j["s_o"] = h.s_o;
  j["ordering"] = "lex-v1";
  j["values"] = detail::vec_to_json(h.values);
  return j;
}

inline HarmonicVector harmonic_vector_from_json(const json& j) {
  detail::require_keys(j, {"kind", "n", "s_o", "ordering", "values"}, "harmonic vector");
  if (j.value("kind", "harmonics") != std::string("harmonics"))
    throw std::invalid_argument("harmonic vector: wrong kind");
  if (j.value("ordering", "lex-v1") != std::string("lex-v1"))
    throw std::invalid_argument("harmonic vector: unsupported ordering");
  HarmonicVector h(j.at("n").get<int>(), j.at("s_o").get<int>());
  Vec v = detail::vec_from_json(j.at("values"));
  if (v.size() != h.values.size())
    throw std::invalid_argument("harmonic vector: wrong value count");
  h.values = v;
  return h;
}

// --- body specs --------------------------------------------------------------

inline json body_spec_to_json(const BodySpec& spec) {
  json j;
  switch (spec.kind) {
    case BodySpec::Kind::Ball:
      j["type"] = "ball";
      j["n"] = spec.dim;
      j["radius"] = spec.radius;
      break;
    case BodySpec::Kind::Ellipsoid:
      j["type"] = "ellipsoid";
      j["semi_axes"] = detail::vec_to_json(spec.semi_axes);
      break;
    case BodySpec::Kind::RegularPolygon:
      j["type"] = "regular_polygon";
      j["m"] = spec.polygon_sides;
      break;
    case BodySpec::Kind::Pyramid:
      j["type"] = "pyramid";
      j["base"] = spec.base_side;
      j["height"] = spec.height;
      break;
    case BodySpec::Kind::PolytopeH: {
      j["type"] = "polytope";
      json nrm = json::array(), sup = json::array();
      for (size_t i = 0; i < spec.normals.size(); ++i) {
        nrm.push_back(detail::vec_to_json(spec.normals[i]));
        sup.push_back(spec.supports[i]);
      }
      j["normals"] = nrm;
      j["supports"] = sup;
      break;
    }
    case BodySpec::Kind::PolytopeV: {
      j["type"] = "polytope";
      json verts = json::array();
      for (const Vec& v : spec.vertices) verts.push_back(detail::vec_to_json(v));
      j["vertices"] = verts;
      break;
    }
  }
  return j;
}

inline BodySpec body_spec_from_json(const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "ball") {
    detail::require_keys(j, {"type", "n", "radius"}, "body spec");
    return BodySpec::ball(j.at("radius").get<double>(), j.value("n", 3));
  }
  if (type == "ellipsoid") {
    detail::require_keys(j, {"type", "semi_axes"}, "body spec");
    Vec a = detail::vec_from_json(j.at("semi_axes"));
    if (a.size() != 3) throw std::invalid_argument("body spec: need 3 semi axes");
    return BodySpec::ellipsoid(a[0], a[1], a[2]);
  }
  if (type == "regular_polygon") {
    detail::require_keys(j, {"type", "m"}, "body spec");
    return BodySpec::regular_polygon(j.at("m").get<int>());
  }
  if (type == "pyramid") {
    detail::require_keys(j, {"type", "base", "height"}, "body spec");
    return BodySpec::pyramid(j.value("base", 1.0), j.value("height", 1.0));
  }
  if (type == "polytope") {
    detail::require_keys(j, {"type", "normals", "supports", "vertices"}, "body spec");
    if (j.contains("vertices")) {
      std::vector<Vec> verts;
      for (const auto& v : j.at("vertices")) verts.push_back(detail::vec_from_json(v));
      return BodySpec::polytope_v(std::move(verts));
    }
    std::vector<Vec> nrm;
    std::vector<double> sup;
    for (const auto& v : j.at("normals")) nrm.push_back(detail::vec_from_json(v));
    for (const auto& s : j.at("supports")) sup.push_back(s.get<double>());
    if (nrm.size() != sup.size())
      throw std::invalid_argument("body spec: normals/supports length mismatch");
    return BodySpec::polytope_h(std::move(nrm), std::move(sup));
  }
  throw std::invalid_argument("body spec: unknown type '" + type + "'");
}

// --- reconstruction results ---------------------------------------------------

inline json result_to_json(const ReconstructionResult& res) {
  json j;
  j["case"] = case_name(res.tag);
  j["residual"] = res.residual;
  j["measure"] = measure_to_json(res.measure);
  json diag;
  diag["iterations"] = res.iterations;
  diag["start_residuals"] = res.start_residuals;
  j["diagnostics"] = diag;
  return j;
}

// --- files ---------------------------------------------------------------------

inline json load_json(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open " + path);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("parse error in ") + path + ": " + e.what());
  }
  return j;
}

inline void save_json(const json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  os << j.dump(2) << "\n";
}

}  // namespace shapetensor

#endif  // SHAPETENSOR_JSON_IO_HPP
