#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dgmm/circle.hpp"
#include "dgmm/expr.hpp"

namespace dgmm::io {

using json = nlohmann::ordered_json;

// Reserved module name: the algebra as a module over itself, free on "1".
inline const std::string kAlgebraModule = "A";

inline json rational_json(const Rational& r) { return to_string(r); }

inline Rational rational_from(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::exception& e) {
      fail_validation(where + ": " + e.what());
    }
  }
  fail_validation(where + ": expected an integer or a \"p/q\" string");
}

inline json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(rational_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

inline Matrix matrix_from(const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array() || j.size() != rows)
    fail_validation(where + ": expected " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      fail_validation(where + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rational_from(j[r][c], where);
  }
  return m;
}

inline Vector vector_from(const json& j, std::size_t n, const std::string& where) {
  if (!j.is_array() || j.size() != n) fail_validation(where + ": expected " + std::to_string(n) + " entries");
  Vector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rational_from(j[i], where);
  return v;
}

inline json vector_json(const Vector& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(rational_json(x));
  return out;
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) fail_validation(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail_validation(where + ": field '" + key + "' has the wrong type");
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? field<T>(j, key, where) : fallback;
}

// ---- algebra ----

inline json algebra_json(const Sullivan& a) {
  json gens = json::array();
  for (const auto& g : a.generators())
    gens.push_back({{"name", g.name}, {"degree", g.degree}, {"d", a.polynomial_string(g.d)}});
  return {{"generators", gens}};
}

/// Unchecked: verify reports d^2 != 0 as a witness; other commands call
/// checked_algebra.
inline Sullivan algebra_from(const json& j) {
  const std::string where = "algebra";
  if (!j.is_object()) fail_validation(where + ": expected an object");
  std::vector<Generator> gens;
  json list = j.contains("generators") ? j.at("generators") : json::array();
  if (!list.is_array()) fail_validation(where + ": 'generators' must be an array");
  for (const auto& g : list) gens.push_back({field<std::string>(g, "name", where), field<int>(g, "degree", where), {}});
  Sullivan names_only(gens, Sullivan::Unchecked{});
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string d = field_or<std::string>(list[i], "d", "0", where + " generator " + gens[i].name);
    gens[i].d = parse_polynomial(d, names_only);
  }
  return Sullivan(gens, Sullivan::Unchecked{});
}

inline Sullivan checked_algebra(const Sullivan& a) { return Sullivan(a.generators()); }

// ---- free modules ----

inline json free_module_json(const FreeDgModule& f, bool embed_algebra = false) {
  json out = {{"kind", "free"}};
  if (embed_algebra) out["algebra"] = algebra_json(f.algebra);
  json gens = json::array();
  for (const auto& g : f.generators) {
    json e = {{"name", g.name}, {"degree", g.degree}, {"d", f.element_string(g.d)}};
    if (g.stage) e["stage"] = {g.stage->n, g.stage->q};
    gens.push_back(e);
  }
  out["generators"] = gens;
  return out;
}

inline FreeDgModule free_module_from(const json& j, const Sullivan& doc_algebra, const std::string& name) {
  const std::string where = "module " + name;
  FreeDgModule f;
  f.algebra = j.contains("algebra") ? algebra_from(j.at("algebra")) : doc_algebra;
  json list = j.contains("generators") ? j.at("generators") : json::array();
  if (!list.is_array()) fail_validation(where + ": 'generators' must be an array");
  for (const auto& g : list) {
    FreeGenerator gen{field<std::string>(g, "name", where), field<int>(g, "degree", where), {}, std::nullopt};
    if (g.contains("stage")) {
      auto s = field<std::vector<int>>(g, "stage", where);
      if (s.size() != 2) fail_validation(where + ": stage of " + gen.name + " must be [n, q]");
      gen.stage = Stage{s[0], s[1]};
    }
    f.generators.push_back(std::move(gen));
  }
  auto lookup = [&](const std::string& s) { return f.index_of(s); };
  for (std::size_t i = 0; i < list.size(); ++i)
    f.generators[i].d = parse_module_element(field_or<std::string>(list[i], "d", "0", where), f.algebra, lookup);
  validate_free(f);
  return f;
}

// ---- tabulated modules ----

inline json tabulated_module_json(const DgModule& m, bool embed_algebra = false) {
  json out = {{"kind", "tabulated"}};
  if (embed_algebra) out["algebra"] = algebra_json(m.algebra);
  out["cap"] = m.cap;
  out["basis"] = m.basis;
  json d = json::array();
  for (const auto& x : m.d) d.push_back(matrix_json(x));
  out["d"] = d;
  json act = json::object();
  for (std::size_t g = 0; g < m.algebra.size(); ++g) {
    json blocks = json::array();
    for (const auto& x : m.action[g]) blocks.push_back(matrix_json(x));
    act[m.algebra.generator(g).name] = blocks;
  }
  out["action"] = act;
  if (!m.provenance.empty()) out["provenance"] = m.provenance;
  return out;
}

/// Missing d or action blocks are zero.
inline DgModule tabulated_module_from(const json& j, const Sullivan& doc_algebra, const std::string& name) {
  const std::string where = "module " + name;
  Sullivan a = j.contains("algebra") ? algebra_from(j.at("algebra")) : doc_algebra;
  int cap = field<int>(j, "cap", where);
  if (cap < 0) fail_validation(where + ": negative cap");
  auto basis = field_or<std::vector<std::vector<std::string>>>(j, "basis", {}, where);
  if (basis.size() > static_cast<std::size_t>(cap) + 1) fail_validation(where + ": basis lists degrees past the cap");
  DgModule m = make_module(a, cap, basis);
  m.provenance = field_or<std::string>(j, "provenance", "", where);
  if (j.contains("d")) {
    const json& d = j.at("d");
    if (!d.is_array() || d.size() > static_cast<std::size_t>(cap))
      fail_validation(where + ": 'd' must list at most cap blocks");
    for (std::size_t k = 0; k < d.size(); ++k)
      m.d[k] = matrix_from(d[k], m.dim(static_cast<int>(k) + 1), m.dim(static_cast<int>(k)),
                           where + " d[" + std::to_string(k) + "]");
  }
  if (j.contains("action")) {
    const json& act = j.at("action");
    if (!act.is_object()) fail_validation(where + ": 'action' must map generator names to blocks");
    for (const auto& [gname, blocks] : act.items()) {
      auto g = a.index_of(gname);
      if (!g) fail_validation(where + ": action of unknown generator '" + gname + "'");
      int gd = a.generator(*g).degree;
      if (!blocks.is_array() || blocks.size() > m.action[*g].size())
        fail_validation(where + ": too many action blocks for " + gname);
      for (std::size_t k = 0; k < blocks.size(); ++k)
        m.action[*g][k] = matrix_from(blocks[k], m.dim(static_cast<int>(k) + gd), m.dim(static_cast<int>(k)),
                                      where + " action " + gname + "[" + std::to_string(k) + "]");
    }
  }
  return m;
}

// ---- maps ----

inline json free_map_json(const FreeMap& f, const std::string& source, const FreeDgModule& src,
                          const std::string& target, const FreeDgModule& dst) {
  json images = json::object();
  for (std::size_t g = 0; g < f.images.size(); ++g)
    if (!f.images[g].empty()) images[src.generators[g].name] = module_element_string(f.images[g], dst.algebra, dst.names());
  return {{"kind", "free"}, {"source", source}, {"target", target}, {"degree", f.degree}, {"images", images}};
}

inline FreeMap free_map_from(const json& j, const FreeDgModule& src, const FreeDgModule& dst, const std::string& name) {
  const std::string where = "map " + name;
  FreeMap f{field<int>(j, "degree", where), std::vector<FreeElement>(src.size())};
  json images = j.contains("images") ? j.at("images") : json::object();
  if (!images.is_object()) fail_validation(where + ": 'images' must map generator names to expressions");
  auto lookup = [&](const std::string& s) { return dst.index_of(s); };
  for (const auto& [gname, expr] : images.items()) {
    auto g = src.index_of(gname);
    if (!g) fail_validation(where + ": unknown source generator '" + gname + "'");
    if (!expr.is_string()) fail_validation(where + ": image of " + gname + " must be an expression string");
    f.images[*g] = parse_module_element(expr.get<std::string>(), dst.algebra, lookup);
  }
  return f;
}

inline json tabulated_map_json(const DgModuleMap& f, const std::string& source, const std::string& target) {
  json blocks = json::array();
  for (const auto& b : f.blocks) blocks.push_back(matrix_json(b));
  return {{"kind", "tabulated"}, {"source", source}, {"target", target}, {"degree", f.degree}, {"window", f.window},
          {"blocks", blocks}};
}

inline DgModuleMap tabulated_map_from(const json& j, const DgModule& src, const DgModule& dst, const std::string& name) {
  const std::string where = "map " + name;
  DgModuleMap f = zero_map(src, dst, field<int>(j, "degree", where));
  if (j.contains("window")) {
    int w = field<int>(j, "window", where);
    if (w > f.window) fail_validation(where + ": window " + std::to_string(w) + " exceeds what the modules allow");
    f = truncate(f, w);
  }
  if (j.contains("blocks")) {
    const json& b = j.at("blocks");
    if (!b.is_array() || b.size() > f.blocks.size()) fail_validation(where + ": too many blocks");
    for (std::size_t k = 0; k < b.size(); ++k)
      f.blocks[k] = matrix_from(b[k], dst.dim(static_cast<int>(k) + f.degree), src.dim(static_cast<int>(k)),
                                where + " block " + std::to_string(k));
  }
  return f;
}

inline json free_to_tabulated_json(const FreeToTabulated& f, const std::string& source, const FreeDgModule& src,
                                   const std::string& target) {
  json images = json::object();
  for (std::size_t g = 0; g < f.images.size(); ++g) images[src.generators[g].name] = vector_json(f.images[g]);
  return {{"kind", "free_to_tabulated"}, {"source", source}, {"target", target}, {"degree", f.degree},
          {"images", images}};
}

inline FreeToTabulated free_to_tabulated_from(const json& j, const FreeDgModule& src, const DgModule& dst,
                                              const std::string& name) {
  const std::string where = "map " + name;
  FreeToTabulated f{field<int>(j, "degree", where), {}};
  json images = j.contains("images") ? j.at("images") : json::object();
  for (const auto& g : src.generators)
    f.images.push_back(images.contains(g.name) ? vector_from(images.at(g.name), dst.dim(g.degree + f.degree), where)
                                               : Vector(dst.dim(g.degree + f.degree)));
  for (const auto& [gname, v] : images.items())
    if (!src.index_of(gname)) fail_validation(where + ": unknown source generator '" + gname + "'");
  return f;
}

// ---- documents ----

template <typename T>
struct Named {
  std::string source, target;
  T map;
};

struct ActionSpec {
  bool tabulated = false;
  std::string name;
  std::string relative, i_prime, e_prime;   // basic data route
  std::string omega_b, omega_bf, i, e;      // tabulated route
  int euler_degree = 2;
  Variant variant = Variant::Circle;
  bool fixed_set_empty = false;
  std::optional<int> fixed_components;
};

struct Document {
  Sullivan algebra;
  std::map<std::string, FreeDgModule> free_modules;
  std::map<std::string, DgModule> tabulated_modules;
  std::map<std::string, Named<FreeMap>> free_maps;
  std::map<std::string, Named<DgModuleMap>> tabulated_maps;
  std::map<std::string, Named<FreeToTabulated>> mixed_maps;
  std::optional<ActionSpec> action;
  std::optional<std::string> target;  // minmodel target
  std::optional<int> max_degree;
  std::optional<std::string> format;

  const FreeDgModule& free_module(const std::string& name) const {
    auto it = free_modules.find(name);
    if (it == free_modules.end()) fail_validation("unknown free module '" + name + "'");
    return it->second;
  }
  const DgModule& tabulated_module(const std::string& name) const {
    auto it = tabulated_modules.find(name);
    if (it == tabulated_modules.end()) fail_validation("unknown tabulated module '" + name + "'");
    return it->second;
  }
  bool empty() const {
    return algebra.size() == 0 && free_modules.empty() && tabulated_modules.empty() && free_maps.empty() &&
           tabulated_maps.empty() && mixed_maps.empty() && !action;
  }
};

inline FreeDgModule free_endpoint(const Document& doc, const std::string& name) {
  if (name == kAlgebraModule) return algebra_as_module(doc.algebra);
  return doc.free_module(name);
}

inline ActionSpec action_from(const json& j) {
  const std::string where = "action";
  ActionSpec s;
  s.tabulated = field_or<std::string>(j, "route", "basic", where) == "tabulated";
  s.name = field_or<std::string>(j, "name", "", where);
  if (s.tabulated) {
    s.omega_b = field<std::string>(j, "omega_b", where);
    s.omega_bf = field<std::string>(j, "omega_bf", where);
    s.i = field<std::string>(j, "i", where);
    s.e = field<std::string>(j, "e", where);
  } else {
    s.relative = field<std::string>(j, "relative", where);
    s.e_prime = field<std::string>(j, "e_prime", where);
    s.i_prime = field_or<std::string>(j, "i_prime", "", where);
  }
  s.variant = parse_variant(field_or<std::string>(j, "variant", "circle", where));
  s.euler_degree = field_or<int>(j, "euler_degree", s.variant == Variant::SemifreeS3 ? 4 : 2, where);
  s.fixed_set_empty = field_or<bool>(j, "fixed_set_empty", false, where);
  if (j.contains("fixed_components")) s.fixed_components = field<int>(j, "fixed_components", where);
  if (!s.tabulated && !s.fixed_set_empty && s.i_prime.empty()) fail_validation(where + ": missing i_prime");
  return s;
}

inline json action_json(const ActionSpec& s) {
  json out = json::object();
  if (!s.name.empty()) out["name"] = s.name;
  if (s.tabulated) {
    out["route"] = "tabulated";
    out["omega_b"] = s.omega_b;
    out["omega_bf"] = s.omega_bf;
    out["i"] = s.i;
    out["e"] = s.e;
  } else {
    out["relative"] = s.relative;
    if (!s.i_prime.empty()) out["i_prime"] = s.i_prime;
    out["e_prime"] = s.e_prime;
  }
  out["euler_degree"] = s.euler_degree;
  out["variant"] = to_string(s.variant);
  out["fixed_set_empty"] = s.fixed_set_empty;
  if (s.fixed_components) out["fixed_components"] = *s.fixed_components;
  return out;
}

/// All names are resolved and all shapes checked before returning.
inline Document document_from(const json& j) {
  if (!j.is_object()) fail_validation("input document must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (key != "algebra" && key != "modules" && key != "maps" && key != "action" && key != "options")
      fail_validation("unknown top-level section '" + key + "'");
  Document doc;
  if (j.contains("algebra")) doc.algebra = algebra_from(j.at("algebra"));
  if (j.contains("modules")) {
    if (!j.at("modules").is_object()) fail_validation("'modules' must be an object");
    for (const auto& [name, m] : j.at("modules").items()) {
      if (name == kAlgebraModule) fail_validation("module name '" + kAlgebraModule + "' is reserved for the algebra");
      std::string kind = field<std::string>(m, "kind", "module " + name);
      if (kind == "free")
        doc.free_modules.emplace(name, free_module_from(m, doc.algebra, name));
      else if (kind == "tabulated")
        doc.tabulated_modules.emplace(name, tabulated_module_from(m, doc.algebra, name));
      else
        fail_validation("module " + name + ": unknown kind '" + kind + "'");
    }
  }
  if (j.contains("maps")) {
    if (!j.at("maps").is_object()) fail_validation("'maps' must be an object");
    for (const auto& [name, m] : j.at("maps").items()) {
      const std::string where = "map " + name;
      std::string kind = field<std::string>(m, "kind", where);
      std::string src = field<std::string>(m, "source", where), dst = field<std::string>(m, "target", where);
      if (kind == "free") {
        FreeDgModule s = free_endpoint(doc, src), t = free_endpoint(doc, dst);
        if (!(s.algebra == t.algebra)) fail_validation(where + ": source and target are over different algebras");
        doc.free_maps.emplace(name, Named<FreeMap>{src, dst, free_map_from(m, s, t, name)});
      } else if (kind == "tabulated") {
        const DgModule &s = doc.tabulated_module(src), &t = doc.tabulated_module(dst);
        doc.tabulated_maps.emplace(name, Named<DgModuleMap>{src, dst, tabulated_map_from(m, s, t, name)});
      } else if (kind == "free_to_tabulated") {
        FreeDgModule s = free_endpoint(doc, src);
        doc.mixed_maps.emplace(name, Named<FreeToTabulated>{src, dst, free_to_tabulated_from(m, s, doc.tabulated_module(dst), name)});
      } else {
        fail_validation(where + ": unknown kind '" + kind + "'");
      }
    }
  }
  if (j.contains("action")) doc.action = action_from(j.at("action"));
  if (j.contains("options")) {
    const json& o = j.at("options");
    if (o.contains("max_degree")) doc.max_degree = field<int>(o, "max_degree", "options");
    if (o.contains("format")) doc.format = field<std::string>(o, "format", "options");
    if (o.contains("target")) doc.target = field<std::string>(o, "target", "options");
  }
  return doc;
}

/// Modules whose algebra differs from the document algebra embed their own.
inline json document_json(const Document& doc) {
  json out = json::object();
  out["algebra"] = algebra_json(doc.algebra);
  json mods = json::object();
  for (const auto& [name, f] : doc.free_modules) mods[name] = free_module_json(f, !(f.algebra == doc.algebra));
  for (const auto& [name, m] : doc.tabulated_modules) mods[name] = tabulated_module_json(m, !(m.algebra == doc.algebra));
  if (!mods.empty()) out["modules"] = mods;
  json maps = json::object();
  for (const auto& [name, f] : doc.free_maps)
    maps[name] = free_map_json(f.map, f.source, free_endpoint(doc, f.source), f.target, free_endpoint(doc, f.target));
  for (const auto& [name, f] : doc.tabulated_maps) maps[name] = tabulated_map_json(f.map, f.source, f.target);
  for (const auto& [name, f] : doc.mixed_maps)
    maps[name] = free_to_tabulated_json(f.map, f.source, free_endpoint(doc, f.source), f.target);
  if (!maps.empty()) out["maps"] = maps;
  if (doc.action) out["action"] = action_json(*doc.action);
  json opts = json::object();
  if (doc.max_degree) opts["max_degree"] = *doc.max_degree;
  if (doc.format) opts["format"] = *doc.format;
  if (doc.target) opts["target"] = *doc.target;
  if (!opts.empty()) out["options"] = opts;
  return out;
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail_validation(origin + ": " + e.what());
  }
}

inline Document read_document(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail_validation("cannot open input file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return document_from(parse_json_text(ss.str(), path));
}

// ---- basic data <-> documents ----

inline BasicData basic_data(const Document& doc) {
  if (!doc.action || doc.action->tabulated) fail_validation("document has no basic-data action section");
  const ActionSpec& s = *doc.action;
  BasicData d;
  d.name = s.name;
  d.algebra = checked_algebra(doc.algebra);
  d.relative = doc.free_module(s.relative);
  auto map_into_a = [&](const std::string& name) {
    auto it = doc.free_maps.find(name);
    if (it == doc.free_maps.end()) fail_validation("unknown free map '" + name + "'");
    if (it->second.source != s.relative || it->second.target != kAlgebraModule)
      fail_validation("map " + name + " must go from " + s.relative + " to " + kAlgebraModule);
    return it->second.map;
  };
  d.e_prime = map_into_a(s.e_prime);
  d.i_prime = s.i_prime.empty() ? FreeMap{0, std::vector<FreeElement>(d.relative.size())} : map_into_a(s.i_prime);
  d.euler_degree = s.euler_degree;
  d.variant = s.variant;
  d.fixed_set_empty = s.fixed_set_empty;
  d.fixed_components = s.fixed_components;
  return d;
}

inline Document document_of(const BasicData& d) {
  Document doc;
  doc.algebra = d.algebra;
  doc.free_modules.emplace("M_BF", d.relative);
  doc.free_maps.emplace("e_prime", Named<FreeMap>{"M_BF", kAlgebraModule, d.e_prime});
  ActionSpec s;
  s.name = d.name;
  s.relative = "M_BF";
  s.e_prime = "e_prime";
  if (!d.fixed_set_empty) {
    doc.free_maps.emplace("i_prime", Named<FreeMap>{"M_BF", kAlgebraModule, d.i_prime});
    s.i_prime = "i_prime";
  }
  s.euler_degree = d.euler_degree;
  s.variant = d.variant;
  s.fixed_set_empty = d.fixed_set_empty;
  s.fixed_components = d.fixed_components;
  doc.action = s;
  return doc;
}

inline TabulatedAction tabulated_action(const Document& doc) {
  if (!doc.action || !doc.action->tabulated) fail_validation("document has no tabulated action section");
  const ActionSpec& s = *doc.action;
  TabulatedAction t;
  t.name = s.name;
  t.omega_b = doc.tabulated_module(s.omega_b);
  t.omega_bf = doc.tabulated_module(s.omega_bf);
  auto get = [&](const std::string& name) {
    auto it = doc.tabulated_maps.find(name);
    if (it == doc.tabulated_maps.end()) fail_validation("unknown tabulated map '" + name + "'");
    if (it->second.source != s.omega_bf || it->second.target != s.omega_b)
      fail_validation("map " + name + " must go from " + s.omega_bf + " to " + s.omega_b);
    return it->second.map;
  };
  t.i = get(s.i);
  t.e = get(s.e);
  t.euler_degree = s.euler_degree;
  t.variant = s.variant;
  t.fixed_components = s.fixed_components;
  return t;
}

inline Document document_of(const TabulatedAction& t) {
  Document doc;
  doc.algebra = t.omega_b.algebra;
  doc.tabulated_modules.emplace("Omega_B", t.omega_b);
  doc.tabulated_modules.emplace("Omega_BF", t.omega_bf);
  doc.tabulated_maps.emplace("i", Named<DgModuleMap>{"Omega_BF", "Omega_B", t.i});
  doc.tabulated_maps.emplace("e", Named<DgModuleMap>{"Omega_BF", "Omega_B", t.e});
  ActionSpec s;
  s.tabulated = true;
  s.name = t.name;
  s.omega_b = "Omega_B";
  s.omega_bf = "Omega_BF";
  s.i = "i";
  s.e = "e";
  s.euler_degree = t.euler_degree;
  s.variant = t.variant;
  s.fixed_components = t.fixed_components;
  doc.action = s;
  return doc;
}

}  // namespace dgmm::io
