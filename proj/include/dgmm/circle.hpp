#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgmm/cdga.hpp"
#include "dgmm/dgmodule.hpp"
#include "dgmm/error.hpp"
#include "dgmm/free_module.hpp"
#include "dgmm/graded.hpp"
#include "dgmm/linalg.hpp"
#include "dgmm/minmodel.hpp"

namespace dgmm {

enum class Status { Pass, Fail, Inconclusive, NotApplicable };

inline std::string to_string(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Inconclusive: return "inconclusive";
    case Status::NotApplicable: return "not_applicable";
  }
  return "?";
}

/// Fail dominates Inconclusive, which dominates Pass.
inline Status worst(Status a, Status b) {
  auto rank = [](Status s) {
    switch (s) {
      case Status::Fail: return 3;
      case Status::Inconclusive: return 2;
      case Status::Pass: return 1;
      default: return 0;
    }
  };
  return rank(a) >= rank(b) ? a : b;
}

inline Status status_of(const CheckReport& r) { return r.ok ? Status::Pass : Status::Fail; }

enum class Variant { Circle, SemifreeS3, IsometricFlow };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::Circle: return "circle";
    case Variant::SemifreeS3: return "semifree_s3";
    case Variant::IsometricFlow: return "isometric_flow";
  }
  return "?";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "circle") return Variant::Circle;
  if (s == "semifree_s3") return Variant::SemifreeS3;
  if (s == "isometric_flow") return Variant::IsometricFlow;
  fail_validation("unknown action variant '" + s + "'");
}

/// Orbit-space model A, relative model M(B,F) and the maps i', e' into A
/// (viewed as the free module on its unit).
struct BasicData {
  std::string name;
  Sullivan algebra;
  FreeDgModule relative;
  FreeMap i_prime;
  FreeMap e_prime;
  int euler_degree = 2;
  bool fixed_set_empty = false;
  Variant variant = Variant::Circle;
  std::optional<int> fixed_components;
};

inline CheckReport check_basic_data(const BasicData& d) {
  CheckReport rep;
  try {
    validate_free(d.relative);
  } catch (const Error& e) {
    rep.fail(e.what());
    return rep;
  }
  if (!(d.relative.algebra == d.algebra)) rep.fail("relative model is over a different algebra");
  int want = d.variant == Variant::SemifreeS3 ? 4 : 2;
  if (d.euler_degree != want)
    rep.fail("variant " + to_string(d.variant) + " needs Euler degree " + std::to_string(want) + ", got " +
             std::to_string(d.euler_degree));
  if (d.e_prime.degree != d.euler_degree)
    rep.fail("e' has degree " + std::to_string(d.e_prime.degree) + ", expected " + std::to_string(d.euler_degree));
  FreeDgModule a = algebra_as_module(d.algebra);
  if (!rep.ok) return rep;
  rep.merge(check_free_map(d.e_prime, d.relative, a), "e': ");
  if (!d.fixed_set_empty) {
    if (d.i_prime.degree != 0) rep.fail("i' must have degree 0");
    rep.merge(check_free_map(d.i_prime, d.relative, a), "i': ");
    for (const auto& g : d.relative.generators)
      if (g.degree < 1) rep.fail("relative generator " + g.name + " has degree " + std::to_string(g.degree) + " < 1");
  }
  rep.merge(verify_minimal(d.relative), "relative model: ");
  return rep;
}

inline void require_valid(const BasicData& d) {
  CheckReport r = check_basic_data(d);
  if (!r.ok) fail_validation("basic data: " + r.first());
}

/// Generators of degree <= max_degree, with differentials reindexed.
inline FreeDgModule truncate_generators(const FreeDgModule& f, int max_degree, std::vector<std::optional<std::size_t>>* map = nullptr) {
  std::vector<std::optional<std::size_t>> remap(f.size());
  FreeDgModule out{f.algebra, {}};
  for (std::size_t g = 0; g < f.size(); ++g)
    if (f.generators[g].degree <= max_degree) {
      remap[g] = out.size();
      out.generators.push_back(f.generators[g]);
    }
  for (auto& gen : out.generators) {
    FreeElement d;
    for (const auto& [h, p] : gen.d) {
      if (!remap[h]) fail_validation("d(" + gen.name + ") involves a generator above degree " + std::to_string(max_degree));
      d[*remap[h]] = p;
    }
    gen.d = std::move(d);
  }
  if (map) *map = remap;
  return out;
}

inline FreeMap truncate_map(const FreeMap& f, const std::vector<std::optional<std::size_t>>& remap, std::size_t size) {
  FreeMap out{f.degree, std::vector<FreeElement>(size)};
  for (std::size_t g = 0; g < remap.size() && g < f.images.size(); ++g)
    if (remap[g]) out.images[*remap[g]] = f.images[g];
  return out;
}

inline std::vector<Stage> stages_of(const FreeDgModule& f) {
  if (std::all_of(f.generators.begin(), f.generators.end(), [](const auto& g) { return g.stage.has_value(); })) {
    std::vector<Stage> s;
    for (const auto& g : f.generators) s.push_back(*g.stage);
    return s;
  }
  auto s = derive_stages(f);
  if (!s) fail_validation("relative model has no stage filtration");
  return *s;
}

inline std::string fresh_name(const Sullivan& a, const std::string& base) {
  std::string name = base;
  for (int i = 1; a.index_of(name); ++i) name = base + std::to_string(i);
  return name;
}

/// Cone A (+)_phi M, truncated to generators of degree <= cap, with its
/// checks: stage filtration, module axioms, and agreement (up to the diagonal
/// sign change) with the tabulated cone of the materialized map.
struct ConeModel {
  std::string name;
  FreeDgModule module;
  int degree = 0;
  int cap = 0;
  CheckReport minimal;
  CheckReport structure;
  CheckReport cone_match;
  GradedDims betti;  // degrees 0..cap-1

  Status status() const { return minimal.ok && structure.ok && cone_match.ok ? Status::Pass : Status::Fail; }
};

inline ConeModel build_cone_model(const std::string& name, const FreeMap& phi, const FreeDgModule& m_free,
                                  const std::string& prefix, int cap) {
  const Sullivan& a = m_free.algebra;
  const int p = phi.degree;
  FreeDgModule n_free = algebra_as_module(a);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < m_free.size(); ++i) names.push_back(fresh_name(a, prefix + std::to_string(i)));
  FreeDgModule full = with_stages(free_cone(phi, n_free, m_free, names), cone_stages({Stage{0, 1}}, stages_of(m_free), p));

  ConeModel out;
  out.name = name;
  out.degree = p;
  out.cap = cap;
  out.module = truncate_generators(full, cap);
  out.minimal = verify_minimal(out.module);
  FreeBasis b = free_basis(out.module, cap);
  DgModule mat = materialize(out.module, cap, &b);
  out.structure = verify_dgmodule(mat);
  out.betti = betti(mat);

  FreeBasis mb = free_basis(m_free, cap + 1 - p);
  DgModule mm = materialize(m_free, cap + 1 - p, &mb);
  FreeBasis nb = free_basis(n_free, cap);
  DgModule nm = materialize(n_free, cap, &nb);
  DgModule tab = cone(materialize(phi, m_free, mb, n_free, nb), nm, mm);
  if (tab.cap != cap) {
    out.cone_match.fail("tabulated cone stops at degree " + std::to_string(tab.cap));
    return out;
  }
  std::vector<Matrix> s;
  for (int k = 0; k <= cap; ++k) {
    if (tab.dim(k) != mat.dim(k)) out.cone_match.fail("cone dimensions differ in degree " + std::to_string(k));
    s.push_back(free_cone_comparison(out.module, b, 1, p, k));
  }
  if (!out.cone_match.ok) return out;
  for (int k = 0; k < cap; ++k)
    if (!(s[static_cast<std::size_t>(k + 1)] * mat.d[static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(k)] ==
          tab.d[static_cast<std::size_t>(k)]))
      out.cone_match.fail("differential differs from the tabulated cone in degree " + std::to_string(k));
  for (std::size_t g = 0; g < a.size(); ++g) {
    int gd = a.generator(g).degree;
    for (int k = 0; k + gd <= cap; ++k)
      if (!(s[static_cast<std::size_t>(k + gd)] * mat.action[g][static_cast<std::size_t>(k)] * s[static_cast<std::size_t>(k)] ==
            tab.action[g][static_cast<std::size_t>(k)]))
        out.cone_match.fail("action of " + a.generator(g).name + " differs from the tabulated cone in degree " +
                            std::to_string(k));
  }
  return out;
}

inline ConeModel model_of_total_space(const BasicData& d, int cap) {
  require_valid(d);
  return build_cone_model("total_space", d.e_prime, d.relative, "c", cap);
}

inline ConeModel model_of_fixed_set(const BasicData& d, int cap) {
  require_valid(d);
  if (d.fixed_set_empty) fail_precondition("the fixed point set is empty; use the almost-free model instead");
  return build_cone_model("fixed_set", d.i_prime, d.relative, "g", cap);
}

/// Generator counts without the unit.
inline GradedDims cone_generator_counts(const ConeModel& m) {
  GradedDims c = generator_counts(m.module, m.cap);
  if (c.window() >= 0) --c[0];
  return c;
}

struct SharedBasisRow {
  int degree = 0;  // k
  long long total = 0;  // generators of M(M) in degree k + shift
  long long fixed = 0;  // generators of M(F) in degree k
};

struct SharedBasisReport {
  int shift = 2;
  std::vector<SharedBasisRow> rows;
  bool ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const SharedBasisRow& r) { return r.total == r.fixed; });
  }
};

inline SharedBasisReport shared_basis_check(const ConeModel& total, const ConeModel& fixed) {
  SharedBasisReport rep;
  rep.shift = total.degree - fixed.degree;
  GradedDims t = cone_generator_counts(total), f = cone_generator_counts(fixed);
  for (int k = 0; k + rep.shift <= std::min(t.window(), f.window() + rep.shift); ++k)
    rep.rows.push_back({k, t.at(k + rep.shift), f.at(k)});
  return rep;
}

/// A (x) Lambda(e), M(B,F) (x) Lambda(e) and q'(b) = e'(b) + i'(b) e.
struct EquivariantData {
  Sullivan algebra;
  std::size_t e_index = 0;
  FreeDgModule relative;
  FreeMap q_prime;
};

inline EquivariantData equivariant_data(const BasicData& d) {
  EquivariantData out;
  out.algebra = adjoin_polynomial_generator(d.algebra, fresh_name(d.algebra, "e"), d.euler_degree);
  out.e_index = d.algebra.size();
  const std::size_t n = out.algebra.size();
  out.relative.algebra = out.algebra;
  auto extend = [&](const FreeElement& x) {
    FreeElement y;
    for (const auto& [g, p] : x) y[g] = extend_polynomial(p, n);
    return y;
  };
  for (const auto& g : d.relative.generators) out.relative.generators.push_back({g.name, g.degree, extend(g.d), g.stage});
  Polynomial e_poly{{out.algebra.generator_monomial(out.e_index), Rational(1)}};
  out.q_prime.degree = d.euler_degree;
  for (std::size_t g = 0; g < d.relative.size(); ++g) {
    FreeElement img = extend(d.e_prime.images.at(g));
    for (const auto& [h, p] : extend(d.i_prime.images.at(g))) {
      FreeElement t;
      Polynomial pe = out.algebra.multiply(p, e_poly);
      if (!pe.empty()) t[h] = pe;
      add_scaled(img, t);
    }
    out.q_prime.images.push_back(std::move(img));
  }
  return out;
}

inline ConeModel equivariant_model(const BasicData& d, int cap) {
  require_valid(d);
  if (d.fixed_set_empty) fail_precondition("the fixed point set is empty; the equivariant minimal model is A itself");
  EquivariantData ed = equivariant_data(d);
  return build_cone_model("equivariant", ed.q_prime, ed.relative, "c", cap);
}

struct EquivariantLesReport {
  ConeLes les;
  bool matches_model = false;  // H_eq from the sequence equals H of the equivariant model
  Status status() const { return les.exact() && matches_model ? Status::Pass : Status::Fail; }
};

inline EquivariantLesReport equivariant_les(const BasicData& d, const ConeModel& equivariant) {
  EquivariantData ed = equivariant_data(d);
  const int cap = equivariant.cap;
  const int p = ed.q_prime.degree;
  FreeDgModule n_free = algebra_as_module(ed.algebra);
  FreeBasis nb = free_basis(n_free, cap);
  FreeBasis mb = free_basis(ed.relative, cap + 1 - p);
  DgModule nm = materialize(n_free, cap, &nb);
  DgModule mm = materialize(ed.relative, cap + 1 - p, &mb);
  EquivariantLesReport rep;
  rep.les = cone_les(materialize(ed.q_prime, ed.relative, mb, n_free, nb), nm, mm);
  rep.matches_model = true;
  for (const auto& row : rep.les.rows)
    if (row.n <= equivariant.betti.window() && static_cast<long long>(row.h_cone) != equivariant.betti.at(row.n))
      rep.matches_model = false;
  return rep;
}

/// Setting e to zero in the equivariant model must give M(M) generator by
/// generator.
inline CheckReport extension_of_scalars_check(const ConeModel& equivariant, const ConeModel& total, std::size_t e_index) {
  CheckReport rep;
  const auto& eq = equivariant.module;
  const auto& tm = total.module;
  if (eq.size() != tm.size()) {
    rep.fail("equivariant model has " + std::to_string(eq.size()) + " generators, M(M) has " + std::to_string(tm.size()));
    return rep;
  }
  for (std::size_t g = 0; g < eq.size(); ++g) {
    const auto &x = eq.generators[g], &y = tm.generators[g];
    if (x.name != y.name || x.degree != y.degree) {
      rep.fail("generator " + x.name + " does not match " + y.name);
      continue;
    }
    FreeElement reduced;
    for (const auto& [h, p] : x.d) {
      Polynomial r = drop_generator(p, e_index);
      if (!r.empty()) reduced[h] = r;
    }
    if (reduced != y.d)
      rep.fail("d(" + x.name + ") mod e = " + tm.element_string(reduced) + ", expected " + tm.element_string(y.d));
  }
  return rep;
}

struct PoincareReport {
  PoincareSeries p_pi, p_iota, p_p;
  int window_end = -1;
  std::optional<int> first_bad_fixed;        // 1 - P_pi = t^2 (1 - P_iota)
  std::optional<int> first_bad_equivariant;  // P_pi = (1 - t^2) P_p
  Status status() const { return !first_bad_fixed && !first_bad_equivariant ? Status::Pass : Status::Fail; }
};

inline PoincareReport poincare_relations(const ConeModel& total, const ConeModel& fixed, const ConeModel& equivariant) {
  PoincareReport rep;
  const int w = std::min({total.cap, fixed.cap, equivariant.cap});
  rep.window_end = w;
  rep.p_pi = PoincareSeries::from_dims(fiber_cohomology(total.module, w));
  rep.p_iota = PoincareSeries::from_dims(fiber_cohomology(fixed.module, w));
  rep.p_p = PoincareSeries::from_dims(fiber_cohomology(equivariant.module, w)).over_one_minus_t2();
  for (int k = 0; k <= w; ++k) {
    long long rhs = (k == 0 ? 1 : 0) - (k == 2 ? 1 : 0) + rep.p_iota.at(k - 2);
    if (!rep.first_bad_fixed && rep.p_pi.at(k) != rhs) rep.first_bad_fixed = k;
    long long eq = rep.p_p.at(k) - rep.p_p.at(k - 2);
    if (!rep.first_bad_equivariant && rep.p_pi.at(k) != eq) rep.first_bad_equivariant = k;
  }
  return rep;
}

/// H(B), H(B,F) and the induced i*, e* in degrees 0..cap-1.
struct BasicCohomology {
  int cap = 0;
  int euler_degree = 2;
  FreeDgModule relative;
  FreeBasis relative_basis;
  std::vector<CohomologyGroup> base, rel;
  std::vector<Matrix> i_star;  // H^k(B,F) -> H^k(B)
  std::vector<Matrix> e_star;  // H^k(B,F) -> H^{k+de}(B), for k + de <= cap - 1

  const CohomologyGroup& rel_at(int k) const { return rel.at(static_cast<std::size_t>(k)); }
  std::size_t rel_dim(int k) const { return k < 0 || k >= cap ? 0 : rel_at(k).betti; }
  std::size_t base_dim(int k) const { return k < 0 || k >= cap ? 0 : base.at(static_cast<std::size_t>(k)).betti; }

  std::string class_string(int k, const Vector& coords) const {
    const auto& g = rel_at(k);
    Vector chain(g.chain_dim);
    for (std::size_t i = 0; i < coords.size(); ++i) chain = chain + coords[i] * g.representatives[i];
    return relative.element_string(from_vector(chain, relative_basis, k));
  }
};

inline BasicCohomology basic_cohomology(const BasicData& d, int cap) {
  BasicCohomology bc;
  bc.cap = cap;
  bc.euler_degree = d.euler_degree;
  bc.relative = d.relative;
  FreeDgModule a = algebra_as_module(d.algebra);
  FreeBasis ab = free_basis(a, cap);
  bc.relative_basis = free_basis(d.relative, cap);
  DgModule am = materialize(a, cap, &ab);
  DgModule rm = materialize(d.relative, cap, &bc.relative_basis);
  bc.base = module_cohomology(am);
  bc.rel = module_cohomology(rm);
  DgModuleMap e = materialize(d.e_prime, d.relative, bc.relative_basis, a, ab);
  for (int k = 0; k + d.euler_degree < cap; ++k)
    bc.e_star.push_back(induced_map(e.block(k), bc.rel_at(k), bc.base[static_cast<std::size_t>(k + d.euler_degree)]));
  if (!d.fixed_set_empty) {
    DgModuleMap i = materialize(d.i_prime, d.relative, bc.relative_basis, a, ab);
    for (int k = 0; k < cap; ++k) bc.i_star.push_back(induced_map(i.block(k), bc.rel_at(k), bc.base[static_cast<std::size_t>(k)]));
  }
  return bc;
}

struct FormalityReport {
  bool formal = true;
  int window_end = -1;               // total degrees 0..window_end examined
  std::vector<std::string> strings;  // an extension for each basis class of Ker e*
  std::optional<std::string> witness;
};

/// Surjectivity of Ker q* -> Ker e*, [sum a_n e^n] |-> [a_0], per total
/// degree r. q*(sum a_n e^n) has e^n-component e* a_n + i* a_{n-1}.
inline FormalityReport formality_check(const BasicCohomology& bc) {
  FormalityReport rep;
  const int de = bc.euler_degree;
  rep.window_end = bc.cap - 1 - de;
  for (int r = 0; r <= rep.window_end; ++r) {
    std::vector<int> src;  // H-degrees of a_0, a_1, ...
    for (int j = r; j >= 0; j -= de) src.push_back(j);
    std::vector<std::size_t> src_off{0}, dst_off{0};
    for (int j : src) src_off.push_back(src_off.back() + bc.rel_dim(j));
    std::vector<int> dst;
    for (int j = r + de; j >= 0; j -= de) dst.push_back(j);
    for (int j : dst) dst_off.push_back(dst_off.back() + bc.base_dim(j));
    Matrix q(dst_off.back(), src_off.back());
    for (std::size_t n = 0; n < src.size(); ++n) {
      if (bc.rel_dim(src[n]) == 0) continue;
      q.set_block(dst_off[n], src_off[n], bc.e_star.at(static_cast<std::size_t>(src[n])));
      q.set_block(dst_off[n + 1], src_off[n], bc.i_star.at(static_cast<std::size_t>(src[n])));
    }
    const std::size_t d0 = bc.rel_dim(r);
    if (d0 == 0) continue;
    std::vector<Vector> ker_q = kernel_basis(q);
    std::vector<Vector> heads;
    for (const auto& v : ker_q) heads.push_back(Vector(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(d0)));
    Matrix head_mat = Matrix::from_columns(heads, d0);
    LinearSolver head_solver(head_mat);
    for (const auto& target : kernel_basis(bc.e_star.at(static_cast<std::size_t>(r)))) {
      auto c = head_solver.solve(target);
      if (!c) {
        rep.formal = false;
        if (!rep.witness) rep.witness = "degree " + std::to_string(r) + ": [" + bc.class_string(r, target) + "]";
        continue;
      }
      Vector full = Matrix::from_columns(ker_q, src_off.back()) * *c;
      std::string s = "degree " + std::to_string(r) + ":";
      for (std::size_t n = 0; n < src.size(); ++n) {
        Vector part(full.begin() + static_cast<std::ptrdiff_t>(src_off[n]), full.begin() + static_cast<std::ptrdiff_t>(src_off[n + 1]));
        if (is_zero(part)) continue;
        s += (n == 0 ? " [" : " + [") + bc.class_string(src[n], part) + "]";
        if (n > 0) s += " e" + (n > 1 ? "^" + std::to_string(n) : std::string());
      }
      rep.strings.push_back(s);
    }
  }
  return rep;
}

struct LocalizationReport {
  Status status = Status::Inconclusive;
  int exponent = 1;
  int window_end = -1;
  int nilpotency = 0;  // least m with E^m = 0
  bool unique = true;  // E determined by i* E = e*
  std::string reason;
};

/// nabla = e + E on H(B,F) (x) Q[e, 1/e], where E (cup with the Euler
/// form) is pinned down on cohomology by i* E = e*. The inverse is the
/// explicit series with exponent p; nabla nabla^{-1} = id is checked on
/// each parity of total degree.
inline LocalizationReport localization_check(const BasicCohomology& bc, int exponent) {
  if (exponent < 1) fail_validation("localization exponent must be positive");
  LocalizationReport rep;
  rep.exponent = exponent;
  rep.window_end = bc.cap - 1;
  const int de = bc.euler_degree;
  const int w = rep.window_end;
  for (int j = std::max(0, w - de + 1); j <= w; ++j)
    if (bc.rel_dim(j) != 0) {
      rep.reason = "H(B,F) does not vanish in degree " + std::to_string(j) + " near the top of the window";
      return rep;
    }
  // Block layout: H^0(B,F), H^1(B,F), ... in one vector space.
  std::vector<std::size_t> off{0};
  for (int j = 0; j <= w; ++j) off.push_back(off.back() + bc.rel_dim(j));
  const std::size_t dim = off.back();
  Matrix e_mat(dim, dim);
  for (int j = 0; j + de <= w; ++j) {
    if (bc.rel_dim(j) == 0 || bc.rel_dim(j + de) == 0) {
      if (bc.rel_dim(j) != 0 && !bc.e_star.at(static_cast<std::size_t>(j)).is_zero() && bc.rel_dim(j + de) == 0) {
        rep.reason = "no E with i* E = e* from degree " + std::to_string(j);
        return rep;
      }
      continue;
    }
    const Matrix& i_next = bc.i_star.at(static_cast<std::size_t>(j + de));
    if (rank(i_next) != i_next.cols()) rep.unique = false;
    LinearSolver s(i_next);
    const Matrix& e = bc.e_star.at(static_cast<std::size_t>(j));
    for (std::size_t c = 0; c < e.cols(); ++c) {
      auto x = s.solve(e.column(c));
      if (!x) {
        rep.reason = "no E with i* E = e* from degree " + std::to_string(j);
        return rep;
      }
      for (std::size_t r = 0; r < x->size(); ++r) e_mat(off[static_cast<std::size_t>(j + de)] + r, off[static_cast<std::size_t>(j)] + c) = (*x)[r];
    }
  }
  // Powers of E until it vanishes.
  std::vector<Matrix> pw{Matrix::identity(dim)};
  while (!pw.back().is_zero()) pw.push_back(e_mat * pw.back());
  rep.nilpotency = static_cast<int>(pw.size()) - 1;
  auto power = [&](int m) { return m < static_cast<int>(pw.size()) ? pw[static_cast<std::size_t>(m)] : Matrix(dim, dim); };
  // nabla^{-1} = sum_{n>=0} sum_{j<p} (-1)^{(n+1)p-1-j} e^{-p(n+1)+j} E^{p(n+1)-j-1}; the powers of e
  // are bookkeeping between total degrees, so only the E part enters the matrix.
  const int p = exponent;
  Matrix inv(dim, dim);
  for (int n = 0; p * n <= rep.nilpotency; ++n)
    for (int j = 0; j < p; ++j) {
      int m = p * (n + 1) - j - 1;
      inv = inv + power(m).scaled(((n + 1) * p - 1 - j) % 2 == 0 ? 1 : -1);
    }
  Matrix nabla = Matrix::identity(dim) + e_mat;
  if (rank(nabla) != dim) {
    rep.status = Status::Fail;
    rep.reason = "nabla is not bijective";
    return rep;
  }
  if (!(nabla * inv == Matrix::identity(dim)) || !(inv * nabla == Matrix::identity(dim))) {
    rep.status = Status::Fail;
    rep.reason = "the inverse series does not invert nabla";
    return rep;
  }
  rep.status = Status::Pass;
  // Every solution E raises degree, so I + E is invertible whichever is chosen.
  rep.reason = rep.unique ? "bijective" : "bijective for every admissible E; inverse series checked on one";
  return rep;
}

/// Largest degree with nonzero entry, provided the last `margin` window
/// degrees vanish.
inline std::optional<int> top_degree(const GradedDims& g, int margin = 2) {
  for (int k = std::max(0, g.window() - margin + 1); k <= g.window(); ++k)
    if (g.at(k) != 0) return std::nullopt;
  int top = -1;
  for (int k = 0; k <= g.window(); ++k)
    if (g.at(k) != 0) top = k;
  return top;
}

struct DimcReport {
  bool applicable = false;
  std::string reason;
  std::optional<int> dimc_b, dimc_m, dimc_f, dimc_y_pi, dimc_y_iota;
  std::string relation;  // equal | plus_two | neither | inconclusive
  Status status = Status::NotApplicable;
};

inline std::string dimc_string(const std::optional<int>& d) { return d ? std::to_string(*d) : "unbounded"; }

inline DimcReport dimc_relation(const BasicCohomology& bc, const ConeModel& total, const ConeModel& fixed) {
  DimcReport rep;
  GradedDims hb;
  for (const auto& g : bc.base) hb.dims.push_back(static_cast<long long>(g.betti));
  rep.dimc_b = top_degree(hb);
  rep.dimc_m = top_degree(total.betti);
  rep.dimc_f = top_degree(fixed.betti);
  rep.dimc_y_pi = top_degree(fiber_cohomology(total.module, total.cap));
  rep.dimc_y_iota = top_degree(fiber_cohomology(fixed.module, fixed.cap));
  rep.applicable = rep.dimc_b && rep.dimc_y_pi;
  if (!rep.applicable) {
    rep.reason = !rep.dimc_b ? "dimc(B) is not finite within the window" : "dimc(Y_pi) is not finite within the window";
  }
  if (!rep.dimc_m || !rep.dimc_f) {
    rep.relation = "inconclusive";
    rep.status = rep.applicable ? Status::Inconclusive : Status::NotApplicable;
    return rep;
  }
  if (*rep.dimc_m == *rep.dimc_f)
    rep.relation = "equal";
  else if (*rep.dimc_m == *rep.dimc_f + 2)
    rep.relation = "plus_two";
  else
    rep.relation = "neither";
  if (rep.applicable) rep.status = rep.relation == "neither" ? Status::Fail : Status::Pass;
  return rep;
}

/// Multiplication on a tabulated cone A (+)_phi M: degree n holds A^n then
/// M^{n+1-p}, and (a, b)(a', b') = (aa', (-1)^{|a|} a b' + (-1)^{|a'||b|} a' b).
class ConeProduct {
 public:
  ConeProduct(const Sullivan& a, const DgModule& m_mod, int p, int cap)
      : a_(a), m_(m_mod), p_(p), cap_(cap), ab_(enumerate_basis(a, cap)) {}

  std::size_t a_dim(int n) const { return ab_.dim(n); }
  std::size_t m_dim(int n) const { return m_.dim(n + 1 - p_); }
  std::size_t dim(int n) const { return a_dim(n) + m_dim(n); }

  Vector multiply(const Vector& x, int n, const Vector& y, int m) const {
    Vector out(dim(n + m));
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (sgn(x[i]) == 0) continue;
      for (std::size_t j = 0; j < y.size(); ++j) {
        if (sgn(y[j]) == 0) continue;
        out = out + (x[i] * y[j]) * basis_product(n, i, m, j);
      }
    }
    return out;
  }

  Vector basis_product(int n, std::size_t i, int m, std::size_t j) const {
    if (n + m > cap_) throw std::out_of_range("product lands past the cap");
    Vector out(dim(n + m));
    const bool left_a = i < a_dim(n), right_a = j < a_dim(m);
    if (!left_a && !right_a) return out;
    if (left_a && right_a) {
      auto [s, mono] = a_.multiply(ab_.at(n)[i], ab_.at(m)[j]);
      if (s != 0) out[ab_.index_of(mono, n + m)] = s;
      return out;
    }
    const std::size_t base = a_dim(n + m);
    if (left_a) {
      const Monomial& alpha = ab_.at(n)[i];
      int bd = m + 1 - p_;
      Vector v = monomial_action(m_, alpha, bd).column(j - a_dim(m));
      Rational s = a_.degree(alpha) % 2 == 0 ? 1 : -1;
      for (std::size_t r = 0; r < v.size(); ++r) out[base + r] = s * v[r];
      return out;
    }
    const Monomial& alpha = ab_.at(m)[j];
    int bd = n + 1 - p_;
    Vector v = monomial_action(m_, alpha, bd).column(i - a_dim(n));
    Rational s = (a_.degree(alpha) * bd) % 2 == 0 ? 1 : -1;
    for (std::size_t r = 0; r < v.size(); ++r) out[base + r] = s * v[r];
    return out;
  }

 private:
  Sullivan a_;
  DgModule m_;
  int p_;
  int cap_;
  AlgebraBasis ab_;
};

/// Unit, associativity, graded commutativity and Leibniz of the cone
/// product against the cone differential, on basis elements.
inline CheckReport verify_cone_algebra(const ConeProduct& cp, const DgModule& cone_mod) {
  CheckReport rep;
  const int cap = cone_mod.cap;
  auto sign = [](int k) { return Rational(k % 2 == 0 ? 1 : -1); };
  for (int n = 0; n <= cap; ++n)
    for (std::size_t i = 0; i < cp.dim(n); ++i) {
      Vector x = unit_vector(cp.dim(n), i), one = unit_vector(cp.dim(0), 0);
      if (cp.multiply(one, 0, x, n) != x || cp.multiply(x, n, one, 0) != x)
        rep.fail("unit fails on " + cone_mod.basis[static_cast<std::size_t>(n)][i]);
    }
  for (int n = 1; n <= cap; ++n)
    for (int m = 1; n + m <= cap; ++m)
      for (std::size_t i = 0; i < cp.dim(n); ++i)
        for (std::size_t j = 0; j < cp.dim(m); ++j) {
          Vector x = unit_vector(cp.dim(n), i), y = unit_vector(cp.dim(m), j);
          Vector xy = cp.multiply(x, n, y, m);
          if (xy != sign(n * m) * cp.multiply(y, m, x, n))
            rep.fail("not graded commutative on " + cone_mod.basis[static_cast<std::size_t>(n)][i] + ", " +
                     cone_mod.basis[static_cast<std::size_t>(m)][j]);
          if (n + m + 1 <= cap) {
            Vector lhs = cone_mod.differential(n + m) * xy;
            Vector rhs = cp.multiply(cone_mod.differential(n) * x, n + 1, y, m) +
                         sign(n) * cp.multiply(x, n, cone_mod.differential(m) * y, m + 1);
            if (lhs != rhs)
              rep.fail("Leibniz fails on " + cone_mod.basis[static_cast<std::size_t>(n)][i] + ", " +
                       cone_mod.basis[static_cast<std::size_t>(m)][j]);
          }
          for (int l = 1; n + m + l <= cap; ++l)
            for (std::size_t k = 0; k < cp.dim(l); ++k) {
              Vector z = unit_vector(cp.dim(l), k);
              if (cp.multiply(xy, n + m, z, l) != cp.multiply(x, n, cp.multiply(y, m, z, l), m + l))
                rep.fail("not associative on " + cone_mod.basis[static_cast<std::size_t>(n)][i] + ", " +
                         cone_mod.basis[static_cast<std::size_t>(m)][j] + ", " +
                         cone_mod.basis[static_cast<std::size_t>(l)][k]);
            }
        }
  return rep;
}

/// The tabulated cone A (+)_phi M of basic data, with A and M materialized.
struct TabulatedCone {
  DgModule a_mod, m_mod, cone_mod;
};

inline TabulatedCone tabulated_cone(const FreeMap& phi, const FreeDgModule& m_free, int cap) {
  const int p = phi.degree;
  FreeDgModule a = algebra_as_module(m_free.algebra);
  FreeBasis ab = free_basis(a, cap);
  FreeBasis mb = free_basis(m_free, cap + 1 - p);
  TabulatedCone t{materialize(a, cap, &ab), materialize(m_free, cap + 1 - p, &mb), {}};
  t.cone_mod = cone(materialize(phi, m_free, mb, a, ab), t.a_mod, t.m_mod);
  return t;
}

struct NaiveReport {
  CheckReport algebra;                      // product axioms
  std::vector<std::string> nonzero_products;
  GradedDims betti;
  bool wedge = false;                       // every product of positive classes vanishes
  Status status() const { return status_of(algebra); }
};

/// M(M) = A (+)_0 M(B,F) with the naive product; cohomology ring table on
/// classes of positive degree.
inline NaiveReport naive_structure(const BasicData& d, int cap) {
  require_valid(d);
  for (const auto& img : d.e_prime.images)
    if (!img.empty()) fail_precondition("the naive product needs e' = 0");
  TabulatedCone t = tabulated_cone(d.e_prime, d.relative, cap);
  ConeProduct cp(d.algebra, t.m_mod, d.euler_degree, cap);
  NaiveReport rep;
  rep.algebra = verify_cone_algebra(cp, t.cone_mod);
  auto h = module_cohomology(t.cone_mod);
  rep.betti = betti(h);
  for (int n = 1; n < cap; ++n)
    for (int m = n; n + m < cap; ++m)
      for (std::size_t i = 0; i < h[static_cast<std::size_t>(n)].betti; ++i)
        for (std::size_t j = 0; j < h[static_cast<std::size_t>(m)].betti; ++j) {
          Vector prod = cp.multiply(h[static_cast<std::size_t>(n)].representatives[i], n,
                                    h[static_cast<std::size_t>(m)].representatives[j], m);
          auto cls = h[static_cast<std::size_t>(n + m)].classify(prod);
          if (!cls) {
            rep.algebra.fail("product of cocycles is not a cocycle in degree " + std::to_string(n + m));
            continue;
          }
          if (!is_zero(*cls))
            rep.nonzero_products.push_back("H^" + std::to_string(n) + "[" + std::to_string(i) + "] * H^" +
                                           std::to_string(m) + "[" + std::to_string(j) + "] != 0");
        }
  rep.wedge = rep.nonzero_products.empty();
  return rep;
}

struct AlmostFreeReport {
  std::string x_name;
  Polynomial euler;         // e in A
  CheckReport chain_iso;    // (a, b) |-> a + x b is an isomorphism of complexes
  CheckReport multiplicative;
  GradedDims betti_cone, betti_algebra;
  Status status() const {
    return chain_iso.ok && multiplicative.ok && betti_cone == betti_algebra ? Status::Pass : Status::Fail;
  }
};

/// F empty: M(M) = A (+)_{e'} A against the Sullivan algebra A (x) Lambda(x)
/// with dx = e.
inline AlmostFreeReport almost_free_model(const BasicData& d, int cap) {
  require_valid(d);
  if (!d.fixed_set_empty) fail_precondition("the almost-free model needs an empty fixed point set");
  if (d.relative.size() != 1 || d.relative.generators[0].degree != 0 || !d.relative.generators[0].d.empty() ||
      d.euler_degree != 2)
    fail_precondition("the almost-free model needs M(B,F) free on one degree 0 cocycle and a degree 2 e'");
  AlmostFreeReport rep;
  const Sullivan& a = d.algebra;
  const FreeElement& img = d.e_prime.images.at(0);
  if (!img.empty()) rep.euler = img.begin()->second;
  rep.x_name = fresh_name(a, "x");
  std::vector<Generator> gens;
  for (const auto& g : a.generators()) gens.push_back({g.name, g.degree, extend_polynomial(g.d, a.size() + 1)});
  gens.push_back({rep.x_name, 1, extend_polynomial(rep.euler, a.size() + 1)});
  Sullivan ax(std::move(gens));
  AlgebraBasis xb = enumerate_basis(ax, cap);
  AlgebraBasis ab = enumerate_basis(a, cap);
  Monomial x_mono = ax.generator_monomial(a.size());

  TabulatedCone t = tabulated_cone(d.e_prime, d.relative, cap);
  ConeProduct cp(a, t.m_mod, 2, cap);
  // Psi_n: C^n -> (A (x) Lambda x)^n.
  std::vector<Matrix> psi;
  for (int n = 0; n <= cap; ++n) {
    Matrix m(xb.dim(n), cp.dim(n));
    for (std::size_t i = 0; i < ab.dim(n); ++i) m(xb.index_of(extend_monomial(ab.at(n)[i], ax.size()), n), i) = 1;
    if (n >= 1)
      for (std::size_t i = 0; i < ab.dim(n - 1); ++i) {
        auto [s, mono] = ax.multiply(x_mono, extend_monomial(ab.at(n - 1)[i], ax.size()));
        if (s != 0) m(xb.index_of(mono, n), ab.dim(n) + i) = s;
      }
    psi.push_back(m);
  }
  for (int n = 0; n <= cap; ++n)
    if (psi[static_cast<std::size_t>(n)].rows() != psi[static_cast<std::size_t>(n)].cols() ||
        rank(psi[static_cast<std::size_t>(n)]) != psi[static_cast<std::size_t>(n)].cols())
      rep.chain_iso.fail("the map is not bijective in degree " + std::to_string(n));
  for (int n = 0; n < cap; ++n)
    if (!(differential_matrix(ax, xb, n) * psi[static_cast<std::size_t>(n)] ==
          psi[static_cast<std::size_t>(n + 1)] * t.cone_mod.differential(n)))
      rep.chain_iso.fail("the map does not commute with d in degree " + std::to_string(n));
  for (int n = 0; n <= cap; ++n)
    for (int m = 0; n + m <= cap; ++m) {
      Matrix prod = product_matrix(ax, xb, n, m);
      for (std::size_t i = 0; i < cp.dim(n); ++i)
        for (std::size_t j = 0; j < cp.dim(m); ++j) {
          Vector lhs = psi[static_cast<std::size_t>(n + m)] * cp.basis_product(n, i, m, j);
          Vector u = psi[static_cast<std::size_t>(n)].column(i), v = psi[static_cast<std::size_t>(m)].column(j);
          Vector rhs(xb.dim(n + m));
          for (std::size_t r = 0; r < u.size(); ++r)
            for (std::size_t c = 0; c < v.size(); ++c)
              if (sgn(u[r]) != 0 && sgn(v[c]) != 0) rhs = rhs + (u[r] * v[c]) * prod.column(r * v.size() + c);
          if (lhs != rhs)
            rep.multiplicative.fail("the map is not multiplicative on " + t.cone_mod.basis[static_cast<std::size_t>(n)][i] +
                                    ", " + t.cone_mod.basis[static_cast<std::size_t>(m)][j]);
        }
    }
  rep.betti_cone = betti(t.cone_mod);
  for (int n = 0; n < cap; ++n)
    rep.betti_algebra.dims.push_back(static_cast<long long>(
        cohomology_at(n == 0 ? Matrix(1, 0) : differential_matrix(ax, xb, n - 1), differential_matrix(ax, xb, n), n).betti));
  return rep;
}

struct SmithGysinRow {
  int r = 0;
  long long relative = 0;  // H^{r-1}(B,F), 0 for r = 0
  long long fixed = 0;     // sum_i H^{r+2i}(F)
  long long total = 0;     // sum_i H^{r+2i}(M)
  long long lhs() const { return relative + fixed; }
  bool holds() const { return lhs() <= total; }
};

struct SmithGysinReport {
  bool stabilized = false;
  std::vector<SmithGysinRow> rows;
  Status status() const {
    if (!stabilized) return Status::Inconclusive;
    return std::all_of(rows.begin(), rows.end(), [](const SmithGysinRow& r) { return r.holds(); }) ? Status::Pass
                                                                                                  : Status::Fail;
  }
};

inline SmithGysinReport smith_gysin_inequality(const BasicData& d, const BasicCohomology& bc, const ConeModel& total,
                                               const ConeModel& fixed, int max_r) {
  if (d.variant != Variant::IsometricFlow) fail_precondition("the Smith-Gysin inequality is stated for isometric flows");
  if (d.fixed_set_empty) fail_precondition("the Smith-Gysin inequality needs a nonempty fixed point set");
  SmithGysinReport rep;
  const int w = std::min(total.betti.window(), fixed.betti.window());
  // Classes of the total space can sit euler_degree + 1 above the relative
  // classes they come from, so two quiet degrees do not show stabilization.
  const int margin = d.euler_degree + 2;
  rep.stabilized = top_degree(total.betti.truncated(w), margin).has_value() &&
                   top_degree(fixed.betti.truncated(w), margin).has_value();
  for (int r = 0; r <= max_r && r <= w; ++r) {
    SmithGysinRow row;
    row.r = r;
    row.relative = r == 0 ? 0 : static_cast<long long>(bc.rel_dim(r - 1));
    for (int k = r; k <= w; k += 2) {
      row.fixed += fixed.betti.at(k);
      row.total += total.betti.at(k);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

/// Semifree S^3 actions: both cones with the degree-4 Euler map.
inline std::pair<ConeModel, ConeModel> semifree_s3_models(const BasicData& d, int cap) {
  require_valid(d);
  if (d.variant != Variant::SemifreeS3 || d.euler_degree != 4) fail_validation("semifree S^3 models need e' of degree 4");
  return {model_of_total_space(d, cap), model_of_fixed_set(d, cap)};
}

/// Stand-ins for the forms on B and on (B,F) with the maps i and e.
struct TabulatedAction {
  std::string name;
  DgModule omega_b, omega_bf;
  DgModuleMap i, e;
  int euler_degree = 2;
  Variant variant = Variant::Circle;
  std::optional<int> fixed_components;
};

struct TabulatedRoute {
  BasicData data;
  int max_degree = -1;  // largest cone window the modelled maps support
  MorphismModel i_model, e_model;
  ConeQuis total_quis, fixed_quis;
  Status status() const {
    bool ok = i_model.homotopy_ok && e_model.homotopy_ok && total_quis.commutes && total_quis.quis() &&
              fixed_quis.commutes && fixed_quis.quis();
    return ok ? Status::Pass : Status::Fail;
  }
};

/// Minimal models of the stand-ins, models i', e' of the maps, and the
/// cone quasi-isomorphisms Phi for both cones.
inline TabulatedRoute basic_data_from_tabulated(const TabulatedAction& t, const KSOptions& opt = {}) {
  const Sullivan& a = t.omega_b.algebra;
  CheckReport rep = verify_dgmodule(t.omega_b);
  rep.merge(verify_dgmodule(t.omega_bf));
  if (!rep.ok) fail_validation("stand-in module: " + rep.first());
  rep.merge(check_map(t.i, t.omega_bf, t.omega_b), "i: ");
  rep.merge(check_map(t.e, t.omega_bf, t.omega_b), "e: ");
  if (!rep.ok) fail_validation(rep.first());
  if (t.i.degree != 0 || t.e.degree != t.euler_degree) fail_validation("i must have degree 0 and e the Euler degree");

  MinimalModelResult mb = minimal_model(t.omega_b, opt);
  if (!mb.ok() || mb.module.size() != 1 || mb.module.generators[0].degree != 0 || !mb.module.generators[0].d.empty())
    fail_precondition("the stand-in for the forms on B is not modelled by A itself");
  MinimalModelResult mbf = minimal_model(t.omega_bf, opt);
  if (!mbf.ok()) fail_precondition("the minimal model of the relative stand-in is not a quasi-isomorphism");

  FreeDgModule n_free = algebra_as_module(a);
  TabulatedRoute out;
  out.i_model = model_of_morphism(t.i, t.omega_bf, t.omega_b, mbf.module, mbf.rho, n_free, mb.rho);
  out.e_model = model_of_morphism(t.e, t.omega_bf, t.omega_b, mbf.module, mbf.rho, n_free, mb.rho);
  const int w = std::min(out.i_model.source_window, out.e_model.source_window);
  std::vector<std::optional<std::size_t>> remap;
  FreeDgModule rel = truncate_generators(mbf.module, w, &remap);
  for (std::size_t g = 0; g < rel.size(); ++g) rel.generators[g].name = fresh_name(a, "b" + std::to_string(g));

  BasicData& d = out.data;
  d.name = t.name;
  d.algebra = a;
  d.relative = rel;
  d.i_prime = truncate_map(out.i_model.phi_prime, remap, rel.size());
  d.e_prime = truncate_map(out.e_model.phi_prime, remap, rel.size());
  d.euler_degree = t.euler_degree;
  d.variant = t.variant;
  d.fixed_components = t.fixed_components;
  out.max_degree = w - 1;

  FreeToTabulated rho_m{0, std::vector<Vector>(rel.size())};
  for (std::size_t g = 0; g < remap.size(); ++g)
    if (remap[g]) rho_m.images[*remap[g]] = mbf.rho.images[g];
  FreeBasis sb = free_basis(rel, w + 1);
  DgModule ms = materialize(rel, w + 1, &sb);
  FreeBasis nb = free_basis(n_free, t.omega_b.cap);
  DgModule ns = materialize(n_free, t.omega_b.cap, &nb);
  DgModuleMap rm = truncate(materialize(rho_m, rel, sb, t.omega_bf), w);
  DgModuleMap rn = materialize(mb.rho, n_free, nb, t.omega_b);
  auto quis = [&](const DgModuleMap& phi, const MorphismModel& model, const FreeMap& phi_prime) {
    FreeToTabulated h{model.h.degree, std::vector<Vector>(rel.size())};
    for (std::size_t g = 0; g < remap.size(); ++g)
      if (remap[g]) h.images[*remap[g]] = model.h.images[g];
    DgModuleMap hm = materialize(h, rel, sb, t.omega_b);
    DgModuleMap pm = truncate(materialize(phi_prime, rel, sb, n_free, nb), w);
    return cone_quis(phi, t.omega_bf, t.omega_b, pm, ms, ns, rm, rn, hm);
  };
  out.total_quis = quis(t.e, out.e_model, d.e_prime);
  out.fixed_quis = quis(t.i, out.i_model, d.i_prime);
  return out;
}

struct CircleOptions {
  int max_degree = 12;
  int localization_exponent = 1;
};

struct CircleReport {
  std::string name;
  Variant variant = Variant::Circle;
  int max_degree = 0;
  bool fixed_set_empty = false;
  std::optional<ConeModel> total, fixed, equivariant;
  std::optional<SharedBasisReport> shared_basis;
  std::optional<EquivariantLesReport> equivariant_les;
  std::optional<CheckReport> extension_of_scalars;
  std::optional<PoincareReport> poincare;
  std::optional<FormalityReport> formality;
  std::optional<LocalizationReport> localization;
  std::optional<DimcReport> dimc;
  std::optional<NaiveReport> naive;
  std::optional<AlmostFreeReport> almost_free;
  std::optional<SmithGysinReport> smith_gysin;
  CheckReport invariants;

  Status status() const {
    Status s = status_of(invariants);
    for (const auto* m : {&total, &fixed, &equivariant})
      if (*m) s = worst(s, (*m)->status());
    if (shared_basis) s = worst(s, shared_basis->ok() ? Status::Pass : Status::Fail);
    if (equivariant_les) s = worst(s, equivariant_les->status());
    if (extension_of_scalars) s = worst(s, status_of(*extension_of_scalars));
    if (poincare) s = worst(s, poincare->status());
    if (localization) s = worst(s, localization->status);
    if (dimc) s = worst(s, dimc->status);
    if (naive) s = worst(s, naive->status());
    if (almost_free) s = worst(s, almost_free->status());
    if (smith_gysin) s = worst(s, smith_gysin->status());
    return s;
  }
};

inline CircleReport run_circle(const BasicData& d, const CircleOptions& opt = {}) {
  require_valid(d);
  const int cap = opt.max_degree;
  if (cap < 4) fail_validation("max degree must be at least 4");
  CircleReport rep;
  rep.name = d.name;
  rep.variant = d.variant;
  rep.max_degree = cap;
  rep.fixed_set_empty = d.fixed_set_empty;
  rep.total = model_of_total_space(d, cap);
  if (rep.total->betti.at(0) != 1) rep.invariants.fail("H^0 of the total space model is not one-dimensional");
  if (d.fixed_set_empty) {
    rep.almost_free = almost_free_model(d, cap);
    return rep;
  }
  rep.fixed = model_of_fixed_set(d, cap);
  if (d.fixed_components && rep.fixed->betti.at(0) != *d.fixed_components)
    rep.invariants.fail("H^0 of the fixed set model has dimension " + std::to_string(rep.fixed->betti.at(0)) +
                        ", expected " + std::to_string(*d.fixed_components) + " components");
  BasicCohomology bc = basic_cohomology(d, cap);
  if (d.variant != Variant::SemifreeS3) {
    rep.shared_basis = shared_basis_check(*rep.total, *rep.fixed);
    rep.equivariant = equivariant_model(d, cap);
    rep.equivariant_les = equivariant_les(d, *rep.equivariant);
    rep.extension_of_scalars = extension_of_scalars_check(*rep.equivariant, *rep.total, d.algebra.size());
    rep.poincare = poincare_relations(*rep.total, *rep.fixed, *rep.equivariant);
    rep.formality = formality_check(bc);
    rep.localization = localization_check(bc, opt.localization_exponent);
  }
  rep.dimc = dimc_relation(bc, *rep.total, *rep.fixed);
  bool euler_zero = std::all_of(d.e_prime.images.begin(), d.e_prime.images.end(), [](const auto& x) { return x.empty(); });
  if (euler_zero) rep.naive = naive_structure(d, cap);
  if (d.variant == Variant::IsometricFlow) rep.smith_gysin = smith_gysin_inequality(d, bc, *rep.total, *rep.fixed, cap - 1);
  return rep;
}

}  // namespace dgmm
