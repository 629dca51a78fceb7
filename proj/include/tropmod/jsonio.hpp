#pragma once

#include <tropmod/combtypes.hpp>
#include <tropmod/irreducibility.hpp>
#include <tropmod/modulifan.hpp>
#include <tropmod/paramcurves.hpp>

#include <nlohmann/json.hpp>

#include <limits>
#include <stdexcept>

namespace tropmod {

// JSON views of the public value types.  Objects use insertion order so a
// given value always serializes to the same bytes.
using Json = nlohmann::ordered_json;

namespace detail {

inline long long json_int(const Int& v) {
  if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
    throw std::overflow_error("json_int: entry does not fit a 64-bit integer");
  return v.convert_to<long long>();
}

}  // namespace detail

// A split as the sorted label list of its canonical side.
inline Json split_json(const Split& s) { return Json(s.members()); }

// {"n": ..., "splits": [[labels...], ...]} with splits in stored order.
inline Json combtype_json(const CombType& t) {
  Json splits = Json::array();
  for (const Split& s : t.splits()) splits.push_back(split_json(s));
  return Json{{"n", t.n()}, {"splits", std::move(splits)}};
}

// {"n": ..., "dim": ..., "cones": [{"splits": ..., "weight": ...}, ...]}
// with cones in the cycle's deterministic order.
inline Json cycle_json(const Cycle& x) {
  Json cones = Json::array();
  for (const auto& [cone, weight] : x.weights()) {
    Json entry = combtype_json(cone);
    cones.push_back(Json{{"splits", std::move(entry["splits"])}, {"weight", weight}});
  }
  return Json{{"n", x.n()}, {"dim", x.dim()}, {"cones", std::move(cones)}};
}

// {"local": ..., "connected": ..., "weight_space_dim": ..., "global": ...,
//  "basis": [[...], ...]} with one basis row per support cone, in support order.
inline Json irreducibility_json(const IrreducibilityReport& r) {
  Json basis = Json::array();
  for (const auto& row : r.weight_space_basis) {
    Json v = Json::array();
    for (const Int& e : row) v.push_back(detail::json_int(e));
    basis.push_back(std::move(v));
  }
  return Json{{"local", r.locally_irreducible},
              {"connected", r.connected},
              {"weight_space_dim", r.weight_space_dim},
              {"global", r.globally_irreducible},
              {"basis", std::move(basis)}};
}

// {"rays": [[...], ...], "weight": ...}; rays are primitive and sorted.
inline Json image_cell_json(const ImageCell& c) {
  Json rays = Json::array();
  for (const auto& ray : c.rays) rays.push_back(Json(ray));
  return Json{{"rays", std::move(rays)}, {"weight", c.weight}};
}

inline Json image_cells_json(const std::vector<ImageCell>& cells) {
  Json out = Json::array();
  for (const ImageCell& c : cells) out.push_back(image_cell_json(c));
  return out;
}

}  // namespace tropmod
