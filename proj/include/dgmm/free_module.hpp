#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgmm/cdga.hpp"
#include "dgmm/dgmodule.hpp"
#include "dgmm/error.hpp"
#include "dgmm/expr.hpp"

namespace dgmm {

/// Position (n, q) in the exhaustive filtration of a KS-extension; a
/// generator of stage (n, q) has degree n.
struct Stage {
  int n = 0;
  int q = 0;
  auto operator<=>(const Stage&) const = default;
};

inline std::string to_string(const Stage& s) { return "(" + std::to_string(s.n) + "," + std::to_string(s.q) + ")"; }

struct FreeGenerator {
  std::string name;
  int degree = 0;
  FreeElement d;
  std::optional<Stage> stage;
};

/// A-dg module that is free as a graded A-module on a generator table.
struct FreeDgModule {
  Sullivan algebra;
  std::vector<FreeGenerator> generators;

  std::size_t size() const { return generators.size(); }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (generators[i].name == name) return i;
    return std::nullopt;
  }

  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& g : generators) out.push_back(g.name);
    return out;
  }

  std::string element_string(const FreeElement& x) const { return module_element_string(x, algebra, names()); }

  bool operator==(const FreeDgModule& o) const {
    if (!(algebra == o.algebra) || generators.size() != o.generators.size()) return false;
    for (std::size_t i = 0; i < generators.size(); ++i) {
      const auto &a = generators[i], &b = o.generators[i];
      if (a.name != b.name || a.degree != b.degree || a.d != b.d || a.stage != b.stage) return false;
    }
    return true;
  }
};

/// The algebra as a module over itself, free on the unit.
inline FreeDgModule algebra_as_module(const Sullivan& a) {
  return FreeDgModule{a, {FreeGenerator{"1", 0, {}, Stage{0, 1}}}};
}

/// Degree of a homogeneous element, nullopt for zero.
inline std::optional<int> element_degree(const FreeDgModule& f, const FreeElement& x) {
  std::optional<int> deg;
  for (const auto& [g, p] : x)
    for (const auto& [m, c] : p) {
      int k = f.algebra.degree(m) + f.generators.at(g).degree;
      if (deg && *deg != k) fail_validation("inhomogeneous module element " + f.element_string(x));
      deg = k;
    }
  return deg;
}

/// Structural validation of the generator table (names, degrees, d degrees).
inline void validate_free(const FreeDgModule& f) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto& g = f.generators[i];
    if (g.name.empty()) fail_validation("module generator with empty name");
    if (g.degree < 0) fail_validation("module generator " + g.name + " has negative degree");
    if (f.algebra.index_of(g.name)) fail_validation("module generator " + g.name + " clashes with an algebra generator");
    for (std::size_t j = 0; j < i; ++j)
      if (f.generators[j].name == g.name) fail_validation("duplicate module generator " + g.name);
    for (const auto& [h, p] : g.d)
      if (h >= f.size()) fail_validation("d(" + g.name + ") references an unknown generator");
    auto deg = element_degree(f, g.d);
    if (deg && *deg != g.degree + 1)
      fail_validation("d(" + g.name + ") = " + f.element_string(g.d) + " has degree " + std::to_string(*deg) +
                      ", expected " + std::to_string(g.degree + 1));
  }
}

/// m * x with the monomial on the left.
inline FreeElement multiply(const Sullivan& a, const Monomial& m, const FreeElement& x) {
  FreeElement out;
  for (const auto& [g, p] : x) {
    Polynomial q = a.multiply(m, p);
    if (!q.empty()) out[g] = std::move(q);
  }
  return out;
}

inline FreeElement multiply(const Sullivan& a, const Polynomial& p, const FreeElement& x) {
  FreeElement out;
  for (const auto& [m, c] : p) add_scaled(out, multiply(a, m, x), c);
  return out;
}

/// d(sum p_h h) = sum (d p_h) h + (-1)^{|p_h|} p_h dh.
inline FreeElement differential(const FreeDgModule& f, const FreeElement& x) {
  const Sullivan& a = f.algebra;
  FreeElement out;
  for (const auto& [h, p] : x)
    for (const auto& [m, c] : p) {
      FreeElement t;
      Polynomial dm = a.differential(m);
      if (!dm.empty()) t[h] = dm;
      add_scaled(t, multiply(a, m, f.generators[h].d), a.degree(m) % 2 == 0 ? 1 : -1);
      add_scaled(out, t, c);
    }
  return out;
}

/// Basis of a free module in degrees 0..cap: pairs (generator, monomial),
/// generator-major, monomials in algebra-basis order.
struct FreeBasis {
  int cap = -1;
  AlgebraBasis algebra_basis;
  std::vector<std::vector<std::pair<std::size_t, Monomial>>> elements;
  std::vector<std::map<std::pair<std::size_t, Monomial>, std::size_t>> index;

  std::size_t dim(int k) const {
    if (k < 0 || k > cap) return 0;
    return elements[static_cast<std::size_t>(k)].size();
  }
};

inline FreeBasis free_basis(const FreeDgModule& f, int cap) {
  FreeBasis b;
  b.cap = cap;
  b.algebra_basis = enumerate_basis(f.algebra, std::max(cap, 0));
  b.elements.assign(static_cast<std::size_t>(std::max(cap, -1) + 1), {});
  b.index.assign(b.elements.size(), {});
  for (int k = 0; k <= cap; ++k) {
    auto& el = b.elements[static_cast<std::size_t>(k)];
    for (std::size_t g = 0; g < f.size(); ++g) {
      int r = k - f.generators[g].degree;
      if (r < 0) continue;
      for (const auto& m : b.algebra_basis.at(r)) el.emplace_back(g, m);
    }
    for (std::size_t i = 0; i < el.size(); ++i) b.index[static_cast<std::size_t>(k)][el[i]] = i;
  }
  return b;
}

inline Vector to_vector(const FreeElement& x, const FreeBasis& b, const FreeDgModule& f, int k) {
  Vector v(b.dim(k));
  for (const auto& [g, p] : x)
    for (const auto& [m, c] : p) {
      if (f.algebra.degree(m) + f.generators[g].degree != k)
        throw std::invalid_argument("element term outside degree " + std::to_string(k));
      v[b.index[static_cast<std::size_t>(k)].at({g, m})] += c;
    }
  return v;
}

inline FreeElement from_vector(const Vector& v, const FreeBasis& b, int k) {
  FreeElement x;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (sgn(v[i]) == 0) continue;
    const auto& [g, m] = b.elements[static_cast<std::size_t>(k)][i];
    add_term(x[g], m, v[i]);
    if (x[g].empty()) x.erase(g);
  }
  return x;
}

inline std::string free_label(const FreeDgModule& f, std::size_t g, const Monomial& m) {
  const std::string& name = f.generators[g].name;
  std::string mono = f.algebra.monomial_string(m);
  if (name == "1") return mono;
  return mono == "1" ? name : mono + "*" + name;
}

/// Tabulated truncation of a free module in degrees 0..cap.
inline DgModule materialize(const FreeDgModule& f, int cap, const FreeBasis* given = nullptr) {
  FreeBasis local;
  if (!given) local = free_basis(f, cap);
  const FreeBasis& b = given ? *given : local;
  const Sullivan& a = f.algebra;
  std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(cap) + 1);
  for (int k = 0; k <= cap; ++k)
    for (const auto& [g, m] : b.elements[static_cast<std::size_t>(k)]) labels[static_cast<std::size_t>(k)].push_back(free_label(f, g, m));
  DgModule out = make_module(a, cap, labels);
  out.provenance = "free";
  for (int k = 0; k < cap; ++k) {
    Matrix& dk = out.d[static_cast<std::size_t>(k)];
    const auto& el = b.elements[static_cast<std::size_t>(k)];
    for (std::size_t c = 0; c < el.size(); ++c) {
      FreeElement x;
      x[el[c].first] = Polynomial{{el[c].second, Rational(1)}};
      Vector v = to_vector(differential(f, x), b, f, k + 1);
      for (std::size_t r = 0; r < v.size(); ++r) dk(r, c) = v[r];
    }
  }
  for (std::size_t gi = 0; gi < a.size(); ++gi) {
    Monomial x = a.generator_monomial(gi);
    int gd = a.generator(gi).degree;
    for (int k = 0; k + gd <= cap; ++k) {
      Matrix& act = out.action[gi][static_cast<std::size_t>(k)];
      const auto& el = b.elements[static_cast<std::size_t>(k)];
      for (std::size_t c = 0; c < el.size(); ++c) {
        auto [s, xm] = a.multiply(x, el[c].second);
        if (s == 0) continue;
        act(b.index[static_cast<std::size_t>(k + gd)].at({el[c].first, xm}), c) = s;
      }
    }
  }
  return out;
}

/// A-linear map between free modules, given on generators.
struct FreeMap {
  int degree = 0;
  std::vector<FreeElement> images;
};

/// A-linear map from a free module into a tabulated one, given on generators.
struct FreeToTabulated {
  int degree = 0;
  std::vector<Vector> images;  // images[g] in X^{|g| + degree}
};

inline int koszul(int a_degree, int p) { return (a_degree * p) % 2 == 0 ? 1 : -1; }

/// phi(sum p_h h) = sum (-1)^{|m| p} m phi(h) over the monomials m of p_h.
inline FreeElement apply(const FreeMap& phi, const Sullivan& a, const FreeElement& x) {
  FreeElement out;
  for (const auto& [h, p] : x)
    for (const auto& [m, c] : p) add_scaled(out, multiply(a, m, phi.images.at(h)), c * koszul(a.degree(m), phi.degree));
  return out;
}

inline Vector apply(const FreeToTabulated& phi, const FreeDgModule& src, const DgModule& x_mod, const FreeElement& x,
                    int target_degree) {
  Vector out(x_mod.dim(target_degree));
  const Sullivan& a = src.algebra;
  for (const auto& [h, p] : x)
    for (const auto& [m, c] : p) {
      int hd = src.generators[h].degree + phi.degree;
      if (hd < 0) continue;
      Vector img = monomial_action(x_mod, m, hd) * phi.images.at(h);
      out = out + (c * koszul(a.degree(m), phi.degree)) * img;
    }
  return out;
}

inline DgModuleMap materialize(const FreeMap& phi, const FreeDgModule& src, const FreeBasis& sb, const FreeDgModule& dst,
                               const FreeBasis& db) {
  const Sullivan& a = src.algebra;
  DgModuleMap out;
  out.degree = phi.degree;
  out.window = std::min(sb.cap, db.cap - phi.degree);
  for (int k = 0; k <= out.window; ++k) {
    int t = k + phi.degree;
    Matrix blk(db.dim(t), sb.dim(k));
    if (t >= 0) {
      const auto& el = sb.elements[static_cast<std::size_t>(k)];
      for (std::size_t c = 0; c < el.size(); ++c) {
        const auto& [g, m] = el[c];
        FreeElement img = multiply(a, m, phi.images.at(g));
        Vector v = to_vector(img, db, dst, t);
        Rational s = koszul(a.degree(m), phi.degree);
        for (std::size_t r = 0; r < v.size(); ++r) blk(r, c) = s * v[r];
      }
    }
    out.blocks.push_back(blk);
  }
  return out;
}

inline DgModuleMap materialize(const FreeToTabulated& phi, const FreeDgModule& src, const FreeBasis& sb,
                               const DgModule& x_mod) {
  const Sullivan& a = src.algebra;
  DgModuleMap out;
  out.degree = phi.degree;
  out.window = std::min(sb.cap, x_mod.cap - phi.degree);
  for (int k = 0; k <= out.window; ++k) {
    int t = k + phi.degree;
    Matrix blk(x_mod.dim(t), sb.dim(k));
    if (t >= 0) {
      const auto& el = sb.elements[static_cast<std::size_t>(k)];
      for (std::size_t c = 0; c < el.size(); ++c) {
        const auto& [g, m] = el[c];
        int hd = src.generators[g].degree + phi.degree;
        if (hd < 0) continue;
        Vector v = monomial_action(x_mod, m, hd) * phi.images.at(g);
        Rational s = koszul(a.degree(m), phi.degree);
        for (std::size_t r = 0; r < v.size(); ++r) blk(r, c) = s * v[r];
      }
    }
    out.blocks.push_back(blk);
  }
  return out;
}

/// Generator-level chain and degree check of a free map: d phi(g) = (-1)^p phi(dg).
inline CheckReport check_free_map(const FreeMap& phi, const FreeDgModule& src, const FreeDgModule& dst) {
  CheckReport rep;
  if (phi.images.size() != src.size()) {
    rep.fail("map has " + std::to_string(phi.images.size()) + " images for " + std::to_string(src.size()) + " generators");
    return rep;
  }
  for (std::size_t g = 0; g < src.size(); ++g) {
    auto deg = element_degree(dst, phi.images[g]);
    if (deg && *deg != src.generators[g].degree + phi.degree)
      rep.fail("image of " + src.generators[g].name + " has degree " + std::to_string(*deg) + ", expected " +
               std::to_string(src.generators[g].degree + phi.degree));
  }
  if (!rep.ok) return rep;
  for (std::size_t g = 0; g < src.size(); ++g) {
    FreeElement lhs = differential(dst, phi.images[g]);
    FreeElement rhs = apply(phi, src.algebra, src.generators[g].d);
    add_scaled(lhs, rhs, phi.degree % 2 == 0 ? -1 : 1);
    if (!lhs.empty())
      rep.fail("map does not commute with d on " + src.generators[g].name + ": defect " + dst.element_string(lhs));
  }
  return rep;
}

/// Free model of N (+)_phi M for phi: M -> N between free modules. The new
/// generator for g in M is (0, g), of degree |g| + p - 1, with
/// d(0,g) = phi(g) + (-1)^{p-1} sum (-1)^{|alpha|(p-1)} alpha (0,h) for dg = sum alpha h.
/// Its basis element alpha*(0,g) equals (-1)^{|alpha|(p-1)} (0, alpha g) in
/// the tabulated cone.
inline FreeDgModule free_cone(const FreeMap& phi, const FreeDgModule& n_mod, const FreeDgModule& m_mod,
                              const std::vector<std::string>& names = {}) {
  const int p = phi.degree;
  const Sullivan& a = n_mod.algebra;
  FreeDgModule out{a, n_mod.generators};
  const std::size_t off = n_mod.size();
  for (std::size_t g = 0; g < m_mod.size(); ++g) {
    const auto& src = m_mod.generators[g];
    if (src.degree + p - 1 < 0) fail_validation("cone generator for " + src.name + " would have negative degree");
    FreeGenerator c;
    c.name = names.empty() ? "s(" + src.name + ")" : names.at(g);
    c.degree = src.degree + p - 1;
    c.d = phi.images.at(g);
    for (const auto& [h, poly] : src.d)
      for (const auto& [m, coef] : poly) {
        Rational s = coef * koszul(a.degree(m), p - 1) * ((p - 1) % 2 == 0 ? 1 : -1);
        FreeElement t;
        t[off + h] = Polynomial{{m, Rational(1)}};
        add_scaled(c.d, t, s);
      }
    out.generators.push_back(std::move(c));
  }
  return out;
}

/// Sign change taking the materialized free cone to the tabulated cone of
/// the materialized map, per basis element of cone degree k.
inline Matrix free_cone_comparison(const FreeDgModule& cone_mod, const FreeBasis& b, std::size_t n_generators, int p,
                                   int k) {
  Matrix s = Matrix::identity(b.dim(k));
  const auto& el = b.elements[static_cast<std::size_t>(k)];
  for (std::size_t i = 0; i < el.size(); ++i)
    if (el[i].first >= n_generators) s(i, i) = koszul(cone_mod.algebra.degree(el[i].second), p - 1);
  return s;
}

/// Stages forced by the differential: a degree-n generator sits at
/// q = 1 + max q over the degree-n generators in its differential. Fails on
/// cycles and on terms with a scalar coefficient.
inline std::optional<std::vector<Stage>> derive_stages(const FreeDgModule& f, CheckReport* why = nullptr) {
  const Sullivan& a = f.algebra;
  std::vector<int> q(f.size(), 0), state(f.size(), 0);
  bool ok = true;
  std::function<int(std::size_t)> visit = [&](std::size_t g) -> int {
    if (state[g] == 2) return q[g];
    if (state[g] == 1) {
      ok = false;
      if (why) why->fail("cyclic dependency through " + f.generators[g].name);
      return 0;
    }
    state[g] = 1;
    int best = 0;
    for (const auto& [h, p] : f.generators[g].d) {
      for (const auto& [m, c] : p) {
        if (a.degree(m) == 0) {
          ok = false;
          if (why) why->fail("d(" + f.generators[g].name + ") has the scalar term " + to_string(c) + "*" + f.generators[h].name);
        }
      }
      if (f.generators[h].degree == f.generators[g].degree) best = std::max(best, visit(h));
      if (f.generators[h].degree > f.generators[g].degree) {
        ok = false;
        if (why) why->fail("d(" + f.generators[g].name + ") involves the higher generator " + f.generators[h].name);
      }
    }
    state[g] = 2;
    q[g] = best + 1;
    return q[g];
  };
  for (std::size_t g = 0; g < f.size(); ++g) visit(g);
  if (!ok) return std::nullopt;
  std::vector<Stage> out;
  for (std::size_t g = 0; g < f.size(); ++g) out.push_back({f.generators[g].degree, q[g]});
  return out;
}

/// Minimality: every generator of stage (n, q) has degree n and its
/// differential lies in the span of strictly earlier stages with no scalar
/// coefficients. Declared stages are checked; missing ones are derived.
/// Generators before `first_generator` form the base of a relative extension
/// and are exempt: they count as earlier than every stage and may appear
/// with scalar coefficients.
inline CheckReport verify_minimal(const FreeDgModule& f, std::size_t first_generator = 0) {
  CheckReport rep;
  std::vector<Stage> stages;
  bool declared = std::all_of(f.generators.begin() + static_cast<std::ptrdiff_t>(std::min(first_generator, f.size())),
                              f.generators.end(), [](const auto& g) { return g.stage.has_value(); });
  if (declared) {
    for (const auto& g : f.generators) stages.push_back(g.stage.value_or(Stage{-1, 0}));
  } else if (first_generator == 0) {
    auto s = derive_stages(f, &rep);
    if (!s) {
      if (rep.ok) rep.fail("no exhaustive stage filtration exists");
      return rep;
    }
    stages = *s;
  } else {
    rep.fail("relative extension without declared stages");
    return rep;
  }
  const Sullivan& a = f.algebra;
  for (std::size_t g = first_generator; g < f.size(); ++g) {
    const auto& gen = f.generators[g];
    if (stages[g].n != gen.degree)
      rep.fail(gen.name + " has degree " + std::to_string(gen.degree) + " but stage " + to_string(stages[g]));
    for (const auto& [h, p] : gen.d) {
      if (h < first_generator) continue;
      if (!(stages[h] < stages[g]))
        rep.fail("d(" + gen.name + ") involves " + f.generators[h].name + " of stage " + to_string(stages[h]) +
                 ", not earlier than " + to_string(stages[g]));
      for (const auto& [m, c] : p)
        if (a.degree(m) == 0)
          rep.fail("d(" + gen.name + ") has the scalar term " + to_string(c) + "*" + f.generators[h].name);
    }
  }
  return rep;
}

inline FreeDgModule with_stages(FreeDgModule f, const std::vector<Stage>& stages) {
  for (std::size_t g = 0; g < f.size(); ++g) f.generators[g].stage = stages.at(g);
  return f;
}

/// Generator counts per degree, degrees 0..window_end.
inline GradedDims generator_counts(const FreeDgModule& f, int window_end) {
  GradedDims out(static_cast<std::size_t>(std::max(window_end, 0)));
  if (window_end < 0) return GradedDims();
  for (const auto& g : f.generators)
    if (g.degree <= window_end) ++out[g.degree];
  return out;
}

}  // namespace dgmm
