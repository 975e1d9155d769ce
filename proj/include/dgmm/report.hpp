#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "dgmm/circle.hpp"
#include "dgmm/io.hpp"
#include "dgmm/minmodel.hpp"

namespace dgmm::report {

using io::json;

inline json check_json(const CheckReport& r) {
  json out = {{"ok", r.ok}};
  if (!r.ok) {
    out["violations"] = r.violations;
    if (r.suppressed) out["suppressed"] = r.suppressed;
  }
  return out;
}

inline json dims_json(const GradedDims& g) { return g.dims; }

inline json generator_table(const FreeDgModule& f) {
  json rows = json::array();
  for (const auto& g : f.generators) {
    json r = {{"name", g.name}, {"degree", g.degree}, {"d", f.element_string(g.d)}};
    if (g.stage) r["stage"] = {g.stage->n, g.stage->q};
    rows.push_back(r);
  }
  return rows;
}

inline json cone_model_json(const ConeModel& m) {
  return {{"name", m.name},
          {"map_degree", m.degree},
          {"generator_cap", m.cap},
          {"algebra", io::algebra_json(m.module.algebra)},
          {"generators", generator_table(m.module)},
          {"betti", dims_json(m.betti)},
          {"betti_window", {0, m.betti.window()}},
          {"checks", {{"minimal", check_json(m.minimal)}, {"module", check_json(m.structure)}, {"cone", check_json(m.cone_match)}}},
          {"status", to_string(m.status())}};
}

inline json optional_int(const std::optional<int>& v) { return v ? json(*v) : json(nullptr); }

inline json circle_json(const CircleReport& r) {
  json out = {{"command", "circle"}, {"name", r.name}, {"variant", to_string(r.variant)}, {"max_degree", r.max_degree},
              {"cohomology_window", {0, r.max_degree - 1}}, {"fixed_set_empty", r.fixed_set_empty}};
  if (r.total) out["total_space"] = cone_model_json(*r.total);
  if (r.fixed) out["fixed_set"] = cone_model_json(*r.fixed);
  if (r.equivariant) out["equivariant"] = cone_model_json(*r.equivariant);
  if (r.shared_basis) {
    json rows = json::array();
    for (const auto& row : r.shared_basis->rows) rows.push_back({row.degree, row.total, row.fixed});
    out["shared_basis"] = {{"shift", r.shared_basis->shift}, {"rows", rows}, {"ok", r.shared_basis->ok()}};
  }
  if (r.equivariant_les) {
    json rows = json::array();
    for (const auto& row : r.equivariant_les->les.rows)
      rows.push_back({{"n", row.n}, {"h_base", row.h_n}, {"h_eq", row.h_cone}, {"h_relative", row.h_m},
                      {"h_base_next", row.h_n_next}, {"exact", row.exact}, {"connecting_is_q", row.connecting_is_phi}});
    out["equivariant_les"] = {{"rows", rows}, {"exact", r.equivariant_les->les.exact()},
                              {"matches_model", r.equivariant_les->matches_model}};
  }
  if (r.extension_of_scalars) out["extension_of_scalars"] = check_json(*r.extension_of_scalars);
  if (r.poincare) {
    const auto& p = *r.poincare;
    out["poincare"] = {{"P_Y_pi", p.p_pi.coeffs}, {"P_Y_iota", p.p_iota.coeffs}, {"P_Y_p", p.p_p.coeffs},
                       {"window", {0, p.window_end}}, {"first_bad_fixed", optional_int(p.first_bad_fixed)},
                       {"first_bad_equivariant", optional_int(p.first_bad_equivariant)},
                       {"status", to_string(p.status())}};
  }
  if (r.formality) {
    json f = {{"formal", r.formality->formal}, {"window", {0, r.formality->window_end}},
              {"strings", r.formality->strings}};
    f["witness"] = r.formality->witness ? json(*r.formality->witness) : json(nullptr);
    out["formality"] = f;
  }
  if (r.localization) {
    const auto& l = *r.localization;
    out["localization"] = {{"status", to_string(l.status)}, {"exponent", l.exponent}, {"window", {0, l.window_end}},
                           {"nilpotency", l.nilpotency}, {"unique", l.unique}, {"reason", l.reason}};
  }
  if (r.dimc) {
    const auto& d = *r.dimc;
    out["dimc"] = {{"applicable", d.applicable}, {"reason", d.reason}, {"B", optional_int(d.dimc_b)},
                   {"M", optional_int(d.dimc_m)}, {"F", optional_int(d.dimc_f)}, {"Y_pi", optional_int(d.dimc_y_pi)},
                   {"Y_iota", optional_int(d.dimc_y_iota)}, {"relation", d.relation}, {"status", to_string(d.status)}};
  }
  if (r.naive)
    out["naive_structure"] = {{"axioms", check_json(r.naive->algebra)}, {"betti", dims_json(r.naive->betti)},
                              {"nonzero_products", r.naive->nonzero_products}, {"wedge", r.naive->wedge}};
  if (r.almost_free) {
    const auto& a = *r.almost_free;
    out["almost_free"] = {{"x", a.x_name}, {"chain_isomorphism", check_json(a.chain_iso)},
                          {"multiplicative", check_json(a.multiplicative)}, {"betti_cone", dims_json(a.betti_cone)},
                          {"betti_algebra", dims_json(a.betti_algebra)}, {"status", to_string(a.status())}};
  }
  if (r.smith_gysin) {
    json rows = json::array();
    for (const auto& row : r.smith_gysin->rows)
      rows.push_back({{"r", row.r}, {"relative", row.relative}, {"fixed", row.fixed}, {"lhs", row.lhs()},
                      {"rhs", row.total}, {"holds", row.holds()}});
    out["smith_gysin"] = {{"stabilized", r.smith_gysin->stabilized}, {"rows", rows},
                          {"status", to_string(r.smith_gysin->status())}};
  }
  out["invariants"] = check_json(r.invariants);
  out["status"] = to_string(r.status());
  return out;
}

inline void text_model(std::ostream& os, const ConeModel& m) {
  os << m.name << " model (cone of a degree " << m.degree << " map, generators through degree " << m.cap << ")\n";
  for (const auto& g : m.module.generators)
    os << "  " << g.name << "  deg " << g.degree << "  d = " << m.module.element_string(g.d) << "\n";
  os << "  betti[0.." << m.betti.window() << "] = " << m.betti.str() << "\n";
  os << "  checks: minimal " << (m.minimal.ok ? "ok" : "FAIL: " + m.minimal.first()) << ", module "
     << (m.structure.ok ? "ok" : "FAIL: " + m.structure.first()) << ", cone "
     << (m.cone_match.ok ? "ok" : "FAIL: " + m.cone_match.first()) << "\n";
}

inline std::string circle_text(const CircleReport& r) {
  std::ostringstream os;
  os << "circle " << (r.name.empty() ? "(input)" : r.name) << "  variant " << to_string(r.variant) << "  max degree "
     << r.max_degree << "  cohomology window 0.." << r.max_degree - 1 << "\n";
  for (const auto* m : {&r.total, &r.fixed, &r.equivariant})
    if (*m) text_model(os, **m);
  if (r.shared_basis) {
    os << "shared basis (shift " << r.shared_basis->shift << "): " << (r.shared_basis->ok() ? "ok" : "MISMATCH") << "\n";
    for (const auto& row : r.shared_basis->rows)
      if (row.total != row.fixed) os << "  degree " << row.degree << ": " << row.total << " vs " << row.fixed << "\n";
  }
  if (r.equivariant_les) {
    os << "equivariant long exact sequence: " << (r.equivariant_les->les.exact() ? "exact" : "NOT EXACT")
       << ", H_eq " << (r.equivariant_les->matches_model ? "matches" : "DIFFERS FROM") << " the model\n";
    for (const auto& row : r.equivariant_les->les.rows)
      os << "  n=" << row.n << "  " << row.h_n << " -> " << row.h_cone << " -> " << row.h_m << " -> " << row.h_n_next
         << "\n";
  }
  if (r.extension_of_scalars)
    os << "extension of scalars: " << (r.extension_of_scalars->ok ? "ok" : "FAIL: " + r.extension_of_scalars->first())
       << "\n";
  if (r.poincare) {
    const auto& p = *r.poincare;
    os << "Poincare series (through t^" << p.window_end << ")\n"
       << "  P_Y_pi   = " << p.p_pi.str() << "\n"
       << "  P_Y_iota = " << p.p_iota.str() << "\n"
       << "  P_Y_p    = " << p.p_p.str() << "\n"
       << "  P_Y_pi = 1 - t^2 + t^2 P_Y_iota: "
       << (p.first_bad_fixed ? "fails at t^" + std::to_string(*p.first_bad_fixed) : "holds") << "\n"
       << "  P_Y_pi = (1 - t^2) P_Y_p: "
       << (p.first_bad_equivariant ? "fails at t^" + std::to_string(*p.first_bad_equivariant) : "holds") << "\n";
  }
  if (r.formality) {
    os << "equivariant formality (degrees 0.." << r.formality->window_end << "): "
       << (r.formality->formal ? "formal" : "not formal") << "\n";
    if (r.formality->witness) os << "  witness " << *r.formality->witness << "\n";
    for (const auto& s : r.formality->strings) os << "  string " << s << "\n";
  }
  if (r.localization)
    os << "localization (p = " << r.localization->exponent << "): " << to_string(r.localization->status) << ", "
       << r.localization->reason << "; E^" << r.localization->nilpotency << " = 0\n";
  if (r.dimc) {
    const auto& d = *r.dimc;
    os << "dimc: B " << dimc_string(d.dimc_b) << ", M " << dimc_string(d.dimc_m) << ", F " << dimc_string(d.dimc_f)
       << ", Y_pi " << dimc_string(d.dimc_y_pi) << ", Y_iota " << dimc_string(d.dimc_y_iota) << "\n"
       << "  " << (d.applicable ? "applicable" : "not applicable: " + d.reason) << "; relation " << d.relation << "\n";
  }
  if (r.naive) {
    os << "naive product: axioms " << (r.naive->algebra.ok ? "ok" : "FAIL: " + r.naive->algebra.first()) << ", "
       << (r.naive->wedge ? "all products of positive classes vanish" : "nonzero products:") << "\n";
    for (const auto& s : r.naive->nonzero_products) os << "  " << s << "\n";
  }
  if (r.almost_free) {
    const auto& a = *r.almost_free;
    os << "almost free: A (+) A  ->  A (x) Lambda(" << a.x_name << "), d" << a.x_name << " = Euler class\n"
       << "  chain isomorphism " << (a.chain_iso.ok ? "ok" : "FAIL: " + a.chain_iso.first()) << ", multiplicative "
       << (a.multiplicative.ok ? "ok" : "FAIL: " + a.multiplicative.first()) << "\n"
       << "  betti cone " << a.betti_cone.str() << " | algebra " << a.betti_algebra.str() << "\n";
  }
  if (r.smith_gysin) {
    os << "Smith-Gysin inequality" << (r.smith_gysin->stabilized ? "" : " (sums not stabilized)") << "\n";
    for (const auto& row : r.smith_gysin->rows)
      os << "  r=" << row.r << "  " << row.relative << " + " << row.fixed << " = " << row.lhs()
         << (row.holds() ? " <= " : " > ") << row.total << "\n";
  }
  if (!r.invariants.ok) os << "invariants: FAIL: " << r.invariants.first() << "\n";
  os << "status: " << to_string(r.status()) << "\n";
  return os.str();
}

inline json minmodel_json(const std::string& target, const MinimalModelResult& m) {
  json rows = json::array();
  for (const auto& b : m.betti) rows.push_back({{"degree", b.degree}, {"model", b.model}, {"target", b.target}, {"rank", b.rank}});
  return {{"command", "minmodel"},
          {"target", target},
          {"window", {0, m.window_end}},
          {"generators", generator_table(m.module)},
          {"generators_added", m.generators_added()},
          {"betti", rows},
          {"quasi_isomorphism", m.ok()},
          {"status", m.ok() ? "pass" : "fail"}};
}

inline std::string minmodel_text(const std::string& target, const MinimalModelResult& m) {
  std::ostringstream os;
  os << "minimal model of " << target << " (certified in degrees 0.." << m.window_end << ")\n";
  for (const auto& g : m.module.generators)
    os << "  " << g.name << "  deg " << g.degree << "  stage " << (g.stage ? to_string(*g.stage) : "-") << "  d = "
       << m.module.element_string(g.d) << "\n";
  if (m.module.generators.empty()) os << "  (no generators)\n";
  os << "  degree  H(model)  H(target)  rank rho*\n";
  for (const auto& b : m.betti)
    os << "  " << b.degree << "  " << b.model << "  " << b.target << "  " << b.rank << "\n";
  os << "status: " << (m.ok() ? "pass" : "fail") << "\n";
  return os.str();
}

}  // namespace dgmm::report
