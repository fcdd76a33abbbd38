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

// Declarative instance recipes. A GenSpec is a small tree; leaves name exact
// representations or random maps, inner nodes perturb, compress, conjugate
// or twist their base. Seeds left out of the JSON are filled from the run
// seed, so one recipe expands into a seeded corpus.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ulamlab/generators.hpp"
#include "ulamlab/serialize.hpp"

namespace ulamlab {

struct GenSpec {
  enum class Kind {
    kRegular,
    kTrivial,
    kCharacter,
    kRep,
    kDirectSum,
    kConjugated,
    kPerturbed,
    kCompressed,
    kTwisted,
    kRandomMap,
  };

  Kind kind = Kind::kRegular;
  std::vector<GenSpec> children;  // base (one entry) or direct_sum parts
  std::optional<std::uint64_t> seed;
  std::size_t dim = 1;       // trivial, rep, random_map
  long k = 0;                // character
  double theta = 0.0;        // perturbed
  std::size_t sub_dim = 1;   // compressed
  double bound = 1.0;        // twisted
  double sup = 1.0;          // random_map

  const GenSpec& base() const { return children.front(); }

  static GenSpec regular() { return {}; }
  static GenSpec with_base(Kind kind, GenSpec base) {
    GenSpec s;
    s.kind = kind;
    s.children.push_back(std::move(base));
    return s;
  }
  static GenSpec perturbed(GenSpec base, double theta, std::optional<std::uint64_t> seed = {}) {
    GenSpec s = with_base(Kind::kPerturbed, std::move(base));
    s.theta = theta;
    s.seed = seed;
    return s;
  }
  static GenSpec twisted(GenSpec base, double bound, std::optional<std::uint64_t> seed = {}) {
    GenSpec s = with_base(Kind::kTwisted, std::move(base));
    s.bound = bound;
    s.seed = seed;
    return s;
  }

  bool operator==(const GenSpec&) const = default;
};

namespace detail {

struct KindName {
  GenSpec::Kind kind;
  const char* name;
};

inline constexpr KindName kKindNames[] = {
    {GenSpec::Kind::kRegular, "regular"},       {GenSpec::Kind::kTrivial, "trivial"},
    {GenSpec::Kind::kCharacter, "character"},   {GenSpec::Kind::kRep, "rep"},
    {GenSpec::Kind::kDirectSum, "direct_sum"},  {GenSpec::Kind::kConjugated, "conjugated"},
    {GenSpec::Kind::kPerturbed, "perturbed"},   {GenSpec::Kind::kCompressed, "compressed"},
    {GenSpec::Kind::kTwisted, "twisted"},       {GenSpec::Kind::kRandomMap, "random_map"},
};

inline const char* kind_name(GenSpec::Kind k) {
  for (const auto& kn : kKindNames)
    if (kn.kind == k) return kn.name;
  return "?";
}

template <class T>
T field(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ParameterError("genspec." + where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ParameterError("genspec." + where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace detail

inline Json to_json(const GenSpec& s) {
  using K = GenSpec::Kind;
  Json j{{"kind", detail::kind_name(s.kind)}};
  if (s.seed) j["seed"] = *s.seed;
  switch (s.kind) {
    case K::kRegular: break;
    case K::kTrivial: j["dim"] = s.dim; break;
    case K::kCharacter: j["k"] = s.k; break;
    case K::kRep: j["dim"] = s.dim; break;
    case K::kDirectSum: {
      Json parts = Json::array();
      for (const auto& c : s.children) parts.push_back(to_json(c));
      j["parts"] = std::move(parts);
      break;
    }
    case K::kConjugated: j["base"] = to_json(s.base()); break;
    case K::kPerturbed:
      j["base"] = to_json(s.base());
      j["theta"] = s.theta;
      break;
    case K::kCompressed:
      j["base"] = to_json(s.base());
      j["sub_dim"] = s.sub_dim;
      break;
    case K::kTwisted:
      j["base"] = to_json(s.base());
      j["bound"] = s.bound;
      break;
    case K::kRandomMap:
      j["dim"] = s.dim;
      j["sup"] = s.sup;
      break;
  }
  return j;
}

inline GenSpec genspec_from_json(const Json& j, const std::string& where = "root") {
  using K = GenSpec::Kind;
  if (!j.is_object()) throw ParameterError("genspec." + where + ": expected an object");
  const auto name = detail::field<std::string>(j, "kind", where);
  GenSpec s;
  bool known = false;
  for (const auto& kn : detail::kKindNames) {
    if (name == kn.name) {
      s.kind = kn.kind;
      known = true;
    }
  }
  if (!known) throw ParameterError("genspec." + where + ": unknown kind '" + name + "'");
  if (j.contains("seed")) s.seed = detail::field<std::uint64_t>(j, "seed", where);
  auto base = [&] { s.children.push_back(genspec_from_json(j.at("base"), where + ".base")); };
  auto need_base = [&] {
    if (!j.contains("base")) throw ParameterError("genspec." + where + ": missing field 'base'");
    base();
  };
  switch (s.kind) {
    case K::kRegular: break;
    case K::kTrivial: s.dim = j.contains("dim") ? detail::field<std::size_t>(j, "dim", where) : 1; break;
    case K::kCharacter: s.k = detail::field<long>(j, "k", where); break;
    case K::kRep: s.dim = detail::field<std::size_t>(j, "dim", where); break;
    case K::kDirectSum: {
      const Json& parts = j.contains("parts") ? j.at("parts") : Json();
      if (!parts.is_array() || parts.empty())
        throw ParameterError("genspec." + where + ": 'parts' must be a non-empty array");
      for (std::size_t i = 0; i < parts.size(); ++i)
        s.children.push_back(genspec_from_json(parts[i], where + ".parts[" + std::to_string(i) + "]"));
      break;
    }
    case K::kConjugated: need_base(); break;
    case K::kPerturbed:
      need_base();
      s.theta = detail::field<double>(j, "theta", where);
      if (!(s.theta >= 0.0)) throw ParameterError("genspec." + where + ".theta: must be >= 0");
      break;
    case K::kCompressed:
      need_base();
      s.sub_dim = detail::field<std::size_t>(j, "sub_dim", where);
      break;
    case K::kTwisted:
      need_base();
      s.bound = detail::field<double>(j, "bound", where);
      if (!(s.bound >= 1.0)) throw ParameterError("genspec." + where + ".bound: must be >= 1");
      break;
    case K::kRandomMap:
      s.dim = detail::field<std::size_t>(j, "dim", where);
      s.sup = j.contains("sup") ? detail::field<double>(j, "sup", where) : 1.0;
      if (!(s.sup >= 0.0)) throw ParameterError("genspec." + where + ".sup: must be >= 0");
      break;
  }
  return s;
}

/// Seed policy for one expansion of a recipe: explicit seeds are kept, missing
/// ones derive from the run seed and the node's position, and an optional salt
/// is mixed into every seed actually used.
struct SeedContext {
  std::uint64_t run_seed = 0;
  std::optional<std::uint64_t> salt;

  std::uint64_t resolve(const std::optional<std::uint64_t>& explicit_seed,
                        std::uint64_t node) const {
    const std::uint64_t s = explicit_seed ? *explicit_seed : derive_seed(run_seed, node);
    return salt ? derive_seed(s, mix64(*salt)) : s;
  }
};

namespace detail {

inline GroupMap build(const GenSpec& s, const Domain& domain, const SeedContext& ctx,
                      std::uint64_t node, double* cond) {
  using K = GenSpec::Kind;
  auto child = [&](std::size_t i) {
    return build(s.children[i], domain, ctx, node * 31 + i + 1, cond);
  };
  switch (s.kind) {
    case K::kRegular: return regular_rep(domain);
    case K::kTrivial: return trivial_rep(domain, s.dim);
    case K::kCharacter: return character_rep(domain, s.k);
    case K::kRep: return random_unitary_rep(domain, s.dim, ctx.resolve(s.seed, node));
    case K::kDirectSum: {
      std::vector<GroupMap> parts;
      for (std::size_t i = 0; i < s.children.size(); ++i) parts.push_back(child(i));
      return direct_sum(parts);
    }
    case K::kConjugated: return conjugated(child(0), ctx.resolve(s.seed, node));
    case K::kPerturbed: return perturb_unitary(child(0), s.theta, ctx.resolve(s.seed, node));
    case K::kCompressed: return compress_rep(child(0), s.sub_dim, ctx.resolve(s.seed, node));
    case K::kTwisted: {
      Twisted t = similarity_twist(child(0), s.bound, ctx.resolve(s.seed, node));
      if (cond) *cond = t.cond;
      return std::move(t.map);
    }
    case K::kRandomMap: return random_map(domain, s.dim, s.sup, ctx.resolve(s.seed, node));
  }
  throw ParameterError("genspec: unhandled kind");
}

}  // namespace detail

/// Expands a recipe on `domain`. `cond`, if given, receives the condition
/// number of the outermost similarity twist (1 when there is none).
inline GroupMap build_genspec(const GenSpec& spec, const Domain& domain, const SeedContext& ctx,
                              double* cond = nullptr) {
  if (cond) *cond = 1.0;
  return detail::build(spec, domain, ctx, 0, cond);
}

}  // namespace ulamlab
