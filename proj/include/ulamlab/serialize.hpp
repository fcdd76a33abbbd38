// Copyright 2026 The UlamLab Authors
//
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

#pragma once

/// \file serialize.hpp
/// JSON forms of the library's values and the group spec-string grammar:
///
///   cyclic:N | dihedral:N | symmetric:N | product:<spec>,<spec>
///   | table:<path.json> | freeball:RANK:RADIUS
///
/// Complex numbers are [re, im]; matrices are row-major nested arrays.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "ulamlab/generators.hpp"
#include "ulamlab/gmap.hpp"
#include "ulamlab/meanforms.hpp"
#include "ulamlab/stabilize.hpp"

namespace ulamlab {

using Json = nlohmann::json;

// ---------------------------------------------------------------------------
// Numbers and matrices

/// Non-finite reals (e.g. a -inf pd_min_eig) become strings: JSON has no
/// literal for them.
inline Json real_to_json(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline double real_from_json(const Json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ParameterError("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

inline Json matrix_to_json(const CMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back({a(i, j).real(), a(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw ShapeError("matrix: expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  CMatrix a(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ShapeError("matrix: row " + std::to_string(r) + " has the wrong length");
    for (Eigen::Index c = 0; c < n; ++c) {
      const Json& z = row[static_cast<std::size_t>(c)];
      if (z.is_number()) {
        a(r, c) = Complex(z.get<double>(), 0.0);
      } else if (z.is_array() && z.size() == 2) {
        a(r, c) = Complex(z[0].get<double>(), z[1].get<double>());
      } else {
        throw ShapeError("matrix: entry must be [re, im]");
      }
    }
  }
  check_square_finite(a, "matrix_from_json");
  return a;
}

// ---------------------------------------------------------------------------
// Groups and domains

inline Json group_table_to_json(const FiniteGroup& g) {
  return Json{{"label", g.label()}, {"mul", g.table()}};
}

inline FiniteGroup group_from_table_json(const Json& j) {
  if (!j.is_object() || !j.contains("mul"))
    throw ParameterError("group table: expected {\"label\": str, \"mul\": [[int]]}");
  FiniteGroup::Table t;
  try {
    t = j.at("mul").get<FiniteGroup::Table>();
  } catch (const Json::exception& e) {
    throw ParameterError(std::string("group table: ") + e.what());
  }
  return FiniteGroup::from_table(t, j.value("label", std::string("table")));
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParameterError("'" + path + "': " + e.what());
  }
}

namespace detail {

inline std::size_t parse_count(std::string_view text, const std::string& spec) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string_view::npos)
    throw ParameterError("group spec '" + spec + "': expected a non-negative integer, got '" +
                         std::string(text) + "'");
  if (text.size() > 9) throw ParameterError("group spec '" + spec + "': number too large");
  return std::stoul(std::string(text));
}

inline FiniteGroup parse_finite_group(const std::string& spec);

inline FiniteGroup parse_finite_group(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ParameterError("group spec '" + spec + "': missing ':'");
  const std::string head = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (head == "cyclic") return cyclic(parse_count(rest, spec));
  if (head == "dihedral") return dihedral(parse_count(rest, spec));
  if (head == "symmetric") return symmetric(parse_count(rest, spec));
  if (head == "table") {
    FiniteGroup g = group_from_table_json(read_json_file(rest));
    return g.relabeled(spec);
  }
  if (head == "product") {
    // Nested products make the comma ambiguous; take the first split where
    // both sides parse.
    for (auto pos = rest.find(','); pos != std::string::npos; pos = rest.find(',', pos + 1)) {
      try {
        FiniteGroup a = parse_finite_group(rest.substr(0, pos));
        FiniteGroup b = parse_finite_group(rest.substr(pos + 1));
        return direct_product(a, b);
      } catch (const ParameterError&) {
        continue;
      }
    }
    throw ParameterError("group spec '" + spec + "': cannot split into two factors");
  }
  throw ParameterError("group spec '" + spec + "': unknown family '" + head + "'");
}

}  // namespace detail

/// Parses a group spec string into a domain.
inline Domain parse_domain(const std::string& spec) {
  if (spec.rfind("freeball:", 0) == 0) {
    const std::string rest = spec.substr(9);
    const auto colon = rest.find(':');
    if (colon == std::string::npos)
      throw ParameterError("group spec '" + spec + "': expected freeball:RANK:RADIUS");
    return Domain(free_ball(detail::parse_count(rest.substr(0, colon), spec),
                            detail::parse_count(rest.substr(colon + 1), spec)));
  }
  return Domain(detail::parse_finite_group(spec));
}

// ---------------------------------------------------------------------------
// Group maps

/// {"group": spec, "dim": d, "label": str, "values": {"<index>": matrix}}
inline Json group_map_to_json(const GroupMap& phi) {
  Json values = Json::object();
  for (Element x = 0; x < phi.size(); ++x) values[std::to_string(x)] = matrix_to_json(phi(x));
  return Json{{"group", phi.domain().label()},
              {"dim", phi.dim()},
              {"label", phi.label()},
              {"values", std::move(values)}};
}

/// Reads a GroupMap; the domain is rebuilt from the spec unless one is given.
inline GroupMap group_map_from_json(const Json& j, const Domain* domain = nullptr) {
  if (!j.is_object() || !j.contains("values") || !j.contains("dim"))
    throw ParameterError("group map: expected {\"group\", \"dim\", \"values\"}");
  Domain dom = domain ? *domain : parse_domain(j.at("group").get<std::string>());
  const auto dim = j.at("dim").get<std::size_t>();
  const Json& values = j.at("values");
  if (!values.is_object() || values.size() != dom.size())
    throw ShapeError("group map: need exactly one value per element (" +
                     std::to_string(dom.size()) + ")");
  std::vector<CMatrix> mats(dom.size());
  std::vector<char> seen(dom.size(), 0);
  for (const auto& [key, val] : values.items()) {
    const std::size_t x = detail::parse_count(key, "values");
    if (x >= dom.size() || seen[x]) throw ShapeError("group map: bad element index " + key);
    seen[x] = 1;
    mats[x] = matrix_from_json(val);
    if (static_cast<std::size_t>(mats[x].rows()) != dim)
      throw ShapeError("group map: value " + key + " has the wrong dimension");
  }
  return GroupMap(std::move(dom), std::move(mats), j.value("label", std::string{}));
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const NormKind& k) { return k.to_string(); }

inline Json to_json(const DefectReport& r) {
  return Json{{"epsilon", r.epsilon},
              {"delta", r.delta},
              {"iso_delta", r.iso_delta},
              {"sup_norm", r.sup_norm},
              {"norm", r.norm_kind.to_string()},
              {"witness_pair", {r.witness_pair.first, r.witness_pair.second}},
              {"witness_element", r.witness_element},
              {"restricted", r.restricted}};
}

inline Json to_json(const PerturbationReport& r) {
  return Json{{"eta", r.eta},
              {"phi_sup", r.phi_sup},
              {"psi_sup", r.psi_sup},
              {"measured", {{"iso", r.measured_iso}, {"unit", r.measured_unit}, {"mult", r.measured_mult}}},
              {"predicted", {{"iso", r.predicted_iso}, {"unit", r.predicted_unit}, {"mult", r.predicted_mult}}},
              {"ok", {{"iso", r.iso_ok}, {"unit", r.unit_ok}, {"mult", r.mult_ok}}}};
}

inline Json to_json(const MarginReport& r) {
  Json j{{"skipped", r.skipped}, {"pass", r.pass()}};
  if (r.skipped) {
    j["reason"] = r.reason;
    return j;
  }
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["margins"] = r.margins;
  j["worst_margin"] = r.worst_margin();
  return j;
}

inline Json to_json(const ConditionBReport& r) {
  Json pd = Json::array(), left = Json::array();
  for (double v : r.pd_min_eigs) pd.push_back(real_to_json(v));
  for (double v : r.pd_min_eigs_left) left.push_back(real_to_json(v));
  return Json{{"form_at_one", matrix_to_json(r.form_at_one)},
              {"form_at_one_deviation", r.form_at_one_deviation},
              {"form_at_one_min_eig", r.form_at_one_min_eig},
              {"bound_ratio", r.bound_ratio},
              {"pd_min_eigs", std::move(pd)},
              {"pd_min_eigs_left", std::move(left)},
              {"pass", r.pass()}};
}

inline Json to_json(const RepairReport& r) {
  return Json{{"epsilon", r.epsilon},         {"delta", r.delta},
              {"distance", r.distance},       {"psi_unit_defect", r.psi_unit_defect},
              {"psi_mult_defect", r.psi_mult_defect}, {"mult_bound", r.mult_bound},
              {"unitary_ok", r.unitary_ok},   {"distance_ok", r.distance_ok},
              {"mult_ok", r.mult_ok},         {"built_from_phi_alone", r.built_from_phi_alone}};
}

inline Json to_json(const KazhdanReport& r) {
  return Json{{"epsilon", r.epsilon},
              {"unital_deviation", r.unital_deviation},
              {"pd_min_eig", real_to_json(r.pd_min_eig)},
              {"distance", r.distance},
              {"unit_defect", r.unit_defect},
              {"sharp_bound", r.sharp_bound},
              {"crude_bound", r.crude_bound},
              {"pass", r.pass()}};
}

inline Json to_json(const BoundCertificate& c) {
  return Json{{"kappa1", c.kappa1},
              {"kappa2", c.kappa2},
              {"p", c.p},
              {"delta", c.delta},
              {"series_constant", c.series_constant},
              {"truncation_terms", c.truncation_terms},
              {"truncation_error_bound", c.truncation_error_bound}};
}

inline Json to_json(const IterationRecord& r) {
  return Json{{"epsilon_n", r.epsilon_n}, {"delta_n", r.delta_n}, {"step_distance", r.step_distance}};
}

inline Json to_json(const StabilizationTrace& t) {
  Json its = Json::array();
  for (const auto& r : t.iterations) its.push_back(to_json(r));
  Json j{{"iterations", std::move(its)},
         {"epsilon0", t.epsilon0},
         {"total_distance", t.total_distance},
         {"final_defect", t.final_defect},
         {"converged", t.converged},
         {"certified_regime", t.certified_regime},
         {"kazhdan_bound", t.kazhdan_bound},
         {"kazhdan_ok", t.kazhdan_ok},
         {"measured_kappa1", t.measured_kappa1},
         {"measured_kappa2", t.measured_kappa2},
         {"series_bound", t.series_bound}};
  j["theory"] = t.theory ? to_json(*t.theory) : Json(nullptr);
  return j;
}

inline Json to_json(const DixmierReport& r) {
  return Json{{"input_mult_defect", r.input_mult_defect},
              {"psi_sup", r.psi_sup},
              {"unit_defect", r.unit_defect},
              {"distance", r.distance},
              {"bound", r.bound},
              {"unitary_ok", r.unitary_ok},
              {"distance_ok", r.distance_ok},
              {"pass", r.pass()}};
}

}  // namespace ulamlab
