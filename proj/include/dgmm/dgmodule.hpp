#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "dgmm/cdga.hpp"
#include "dgmm/error.hpp"
#include "dgmm/graded.hpp"
#include "dgmm/linalg.hpp"

namespace dgmm {

/// A-dg module given degree by degree in degrees 0..cap. The differential
/// is known out of every degree below the cap, so cohomology is certified
/// in degrees 0..cap-1. The action is stored per algebra generator;
/// monomials act by composition.
struct DgModule {
  Sullivan algebra;
  int cap = -1;
  std::vector<std::vector<std::string>> basis;
  std::vector<Matrix> d;                    // d[k]: M^k -> M^{k+1}, k < cap
  std::vector<std::vector<Matrix>> action;  // action[g][k]: M^k -> M^{k+|g|}, k+|g| <= cap
  std::string provenance;

  std::size_t dim(int k) const {
    if (k < 0 || k > cap) return 0;
    return basis[static_cast<std::size_t>(k)].size();
  }

  int window_end() const { return cap - 1; }

  /// d out of degree k; an empty matrix for k < 0.
  Matrix differential(int k) const {
    if (k < 0) return Matrix(dim(0), 0);
    if (k >= cap) throw std::out_of_range("differential out of degree " + std::to_string(k) + " is past the cap");
    return d[static_cast<std::size_t>(k)];
  }

  const Matrix& generator_action(std::size_t g, int k) const {
    return action.at(g).at(static_cast<std::size_t>(k));
  }

  bool operator==(const DgModule& o) const {
    return algebra == o.algebra && cap == o.cap && basis == o.basis && d == o.d && action == o.action;
  }
};

/// Module with the given labels and all structure maps zero.
inline DgModule make_module(const Sullivan& a, int cap, std::vector<std::vector<std::string>> labels) {
  if (cap < 0) throw std::invalid_argument("negative module cap");
  labels.resize(static_cast<std::size_t>(cap) + 1);
  DgModule m;
  m.algebra = a;
  m.cap = cap;
  m.basis = std::move(labels);
  for (int k = 0; k < cap; ++k) m.d.emplace_back(m.dim(k + 1), m.dim(k));
  m.action.resize(a.size());
  for (std::size_t g = 0; g < a.size(); ++g) {
    int gd = a.generator(g).degree;
    for (int k = 0; k + gd <= cap; ++k) m.action[g].emplace_back(m.dim(k + gd), m.dim(k));
  }
  return m;
}

/// Action of a monomial M^k -> M^{k+|m|}, composed from generator actions.
inline Matrix monomial_action(const DgModule& mod, const Monomial& m, int k) {
  const Sullivan& a = mod.algebra;
  int md = a.degree(m);
  if (k + md > mod.cap) throw std::out_of_range("monomial action lands past the cap");
  std::size_t i = 0;
  while (i < m.size() && m[i] == 0) ++i;
  if (i == m.size()) return Matrix::identity(mod.dim(k));
  Monomial rest = m;
  --rest[i];
  return mod.generator_action(i, k + a.degree(rest)) * monomial_action(mod, rest, k);
}

inline Matrix polynomial_action(const DgModule& mod, const Polynomial& p, int poly_degree, int k) {
  Matrix out(mod.dim(k + poly_degree), mod.dim(k));
  for (const auto& [m, c] : p) out = out + monomial_action(mod, m, k).scaled(c);
  return out;
}

inline CheckReport verify_dgmodule(const DgModule& mod) {
  CheckReport rep;
  const Sullivan& a = mod.algebra;
  if (static_cast<int>(mod.basis.size()) != mod.cap + 1) {
    rep.fail("basis table does not cover degrees 0.." + std::to_string(mod.cap));
    return rep;
  }
  for (int k = 0; k < mod.cap; ++k) {
    const Matrix& dk = mod.d.at(static_cast<std::size_t>(k));
    if (dk.rows() != mod.dim(k + 1) || dk.cols() != mod.dim(k)) rep.fail("d in degree " + std::to_string(k) + " has wrong shape");
  }
  if (mod.action.size() != a.size()) rep.fail("action table does not match the algebra generators");
  for (std::size_t g = 0; g < mod.action.size() && g < a.size(); ++g) {
    int gd = a.generator(g).degree;
    for (int k = 0; k + gd <= mod.cap; ++k) {
      if (static_cast<std::size_t>(k) >= mod.action[g].size()) {
        rep.fail("missing action of " + a.generator(g).name + " on degree " + std::to_string(k));
        continue;
      }
      const Matrix& m = mod.action[g][static_cast<std::size_t>(k)];
      if (m.rows() != mod.dim(k + gd) || m.cols() != mod.dim(k))
        rep.fail("action of " + a.generator(g).name + " on degree " + std::to_string(k) + " has wrong shape");
    }
  }
  if (!rep.ok) return rep;

  auto label = [&](int k, std::size_t c) { return mod.basis[static_cast<std::size_t>(k)][c]; };
  auto first_nonzero_col = [](const Matrix& m) -> std::size_t {
    for (std::size_t c = 0; c < m.cols(); ++c)
      for (std::size_t r = 0; r < m.rows(); ++r)
        if (sgn(m(r, c)) != 0) return c;
    return 0;
  };

  for (int k = 0; k + 2 <= mod.cap; ++k) {
    Matrix dd = mod.d[static_cast<std::size_t>(k + 1)] * mod.d[static_cast<std::size_t>(k)];
    if (!dd.is_zero()) rep.fail("d^2 != 0 on " + label(k, first_nonzero_col(dd)) + " (degree " + std::to_string(k) + ")");
  }

  AlgebraBasis ab = enumerate_basis(a, std::max(mod.cap, 0));
  // Associativity: x (m v) = (x m) v for generators x and basis monomials m.
  for (std::size_t g = 0; g < a.size(); ++g) {
    int gd = a.generator(g).degree;
    Monomial x = a.generator_monomial(g);
    for (int md = 0; md + gd <= mod.cap; ++md)
      for (const auto& m : ab.at(md))
        for (int k = 0; k + md + gd <= mod.cap; ++k) {
          auto [s, xm] = a.multiply(x, m);
          Matrix lhs = mod.generator_action(g, k + md) * monomial_action(mod, m, k);
          Matrix rhs = s == 0 ? Matrix(lhs.rows(), lhs.cols()) : monomial_action(mod, xm, k).scaled(s);
          if (!(lhs == rhs))
            rep.fail("action not associative: " + a.generator(g).name + " * (" + a.monomial_string(m) + " * " +
                     label(k, first_nonzero_col(lhs - rhs)) + ")");
        }
  }
  // Leibniz: d(m v) = (dm) v + (-1)^{|m|} m dv.
  for (int md = 1; md <= mod.cap; ++md)
    for (const auto& m : ab.at(md))
      for (int k = 0; k + md + 1 <= mod.cap; ++k) {
        Matrix lhs = mod.d[static_cast<std::size_t>(k + md)] * monomial_action(mod, m, k);
        Matrix rhs = polynomial_action(mod, a.differential(m), md + 1, k) +
                     (monomial_action(mod, m, k + 1) * mod.d[static_cast<std::size_t>(k)]).scaled(md % 2 == 0 ? 1 : -1);
        if (!(lhs == rhs))
          rep.fail("Leibniz fails for " + a.monomial_string(m) + " on " + label(k, first_nonzero_col(lhs - rhs)));
      }
  return rep;
}

/// Cohomology groups in degrees 0..cap-1.
inline std::vector<CohomologyGroup> module_cohomology(const DgModule& mod) {
  std::vector<CohomologyGroup> out;
  for (int k = 0; k < mod.cap; ++k) out.push_back(cohomology_at(mod.differential(k - 1), mod.differential(k), k));
  return out;
}

inline GradedDims betti(const std::vector<CohomologyGroup>& groups) {
  GradedDims g;
  for (const auto& h : groups) g.dims.push_back(static_cast<long long>(h.betti));
  return g;
}

inline GradedDims betti(const DgModule& mod) { return betti(module_cohomology(mod)); }

inline CohomologyGroup zero_group(int degree) {
  return cohomology_at(Matrix(0, 0), Matrix(0, 0), degree);
}

/// Degree-p A-linear map, phi(a m) = (-1)^{|a| p} a phi(m) and
/// d phi = (-1)^p phi d. blocks[k]: M^k -> N^{k+p} for k = 0..window.
struct DgModuleMap {
  int degree = 0;
  int window = -1;
  std::vector<Matrix> blocks;

  const Matrix& block(int k) const {
    if (k < 0 || k > window) throw std::out_of_range("map block " + std::to_string(k) + " outside window");
    return blocks[static_cast<std::size_t>(k)];
  }
};

inline int map_window(const DgModule& src, const DgModule& dst, int p) { return std::min(src.cap, dst.cap - p); }

inline DgModuleMap zero_map(const DgModule& src, const DgModule& dst, int p) {
  DgModuleMap f;
  f.degree = p;
  f.window = map_window(src, dst, p);
  for (int k = 0; k <= f.window; ++k) f.blocks.emplace_back(dst.dim(k + p), src.dim(k));
  return f;
}

inline DgModuleMap identity_map(const DgModule& m) {
  DgModuleMap f;
  f.window = m.cap;
  for (int k = 0; k <= m.cap; ++k) f.blocks.push_back(Matrix::identity(m.dim(k)));
  return f;
}

inline DgModuleMap scaled(const DgModuleMap& f, const Rational& c) {
  DgModuleMap out = f;
  for (auto& b : out.blocks) b = b.scaled(c);
  return out;
}

inline DgModuleMap operator+(const DgModuleMap& f, const DgModuleMap& g) {
  if (f.degree != g.degree) throw std::invalid_argument("adding maps of different degrees");
  DgModuleMap out;
  out.degree = f.degree;
  out.window = std::min(f.window, g.window);
  for (int k = 0; k <= out.window; ++k) out.blocks.push_back(f.block(k) + g.block(k));
  return out;
}

inline DgModuleMap operator-(const DgModuleMap& f, const DgModuleMap& g) { return f + scaled(g, -1); }

/// g o f. When f lands in negative degrees the composite block is zero and
/// its row count comes from `dst`.
inline DgModuleMap compose(const DgModuleMap& g, const DgModuleMap& f, const DgModule* dst = nullptr) {
  DgModuleMap out;
  out.degree = f.degree + g.degree;
  out.window = std::min(f.window, g.window - f.degree);
  for (int k = 0; k <= out.window; ++k) {
    int mid = k + f.degree;
    if (mid < 0) {
      if (!dst && k + out.degree >= 0) throw std::invalid_argument("compose: target module needed for negative degrees");
      out.blocks.emplace_back(dst ? dst->dim(k + out.degree) : 0, f.block(k).cols());
      continue;
    }
    out.blocks.push_back(g.block(mid) * f.block(k));
  }
  return out;
}

/// Shapes, chain condition and A-linearity with the degree-p signs.
inline CheckReport check_map(const DgModuleMap& f, const DgModule& src, const DgModule& dst) {
  CheckReport rep;
  const int p = f.degree;
  if (f.window > map_window(src, dst, p) || static_cast<int>(f.blocks.size()) != f.window + 1) {
    rep.fail("map window exceeds what source and target support");
    return rep;
  }
  for (int k = 0; k <= f.window; ++k)
    if (f.block(k).rows() != dst.dim(k + p) || f.block(k).cols() != src.dim(k))
      rep.fail("map block in degree " + std::to_string(k) + " has wrong shape");
  if (!rep.ok) return rep;
  const Rational chain_sign = p % 2 == 0 ? 1 : -1;
  for (int k = 0; k + 1 <= f.window; ++k) {
    if (k + p < 0) continue;
    Matrix lhs = dst.differential(k + p) * f.block(k);
    Matrix rhs = (f.block(k + 1) * src.differential(k)).scaled(chain_sign);
    if (!(lhs == rhs)) rep.fail("map does not commute with d in source degree " + std::to_string(k));
  }
  const Sullivan& a = src.algebra;
  for (std::size_t g = 0; g < a.size(); ++g) {
    int gd = a.generator(g).degree;
    Rational s = (gd * p) % 2 == 0 ? 1 : -1;
    for (int k = 0; k + gd <= f.window; ++k) {
      if (k + p < 0) continue;
      Matrix lhs = f.block(k + gd) * src.generator_action(g, k);
      Matrix rhs = (dst.generator_action(g, k + p) * f.block(k)).scaled(s);
      if (!(lhs == rhs))
        rep.fail("map is not A-linear for " + a.generator(g).name + " in source degree " + std::to_string(k));
    }
  }
  return rep;
}

/// M[-p]: degree k moves to k+p, the action picks up (-1)^{|a| p} and the
/// differential (-1)^p.
inline DgModule shift(const DgModule& m, int p) {
  for (int k = 0; k < -p && k <= m.cap; ++k)
    if (m.dim(k) != 0)
      fail_validation("shift by " + std::to_string(p) + " would move degree " + std::to_string(k) + " below zero");
  const Sullivan& a = m.algebra;
  int cap = m.cap + p;
  if (cap < 0) fail_validation("shift leaves no degrees in the window");
  std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(cap) + 1);
  for (int k = 0; k <= cap; ++k)
    if (k - p >= 0 && k - p <= m.cap) labels[static_cast<std::size_t>(k)] = m.basis[static_cast<std::size_t>(k - p)];
  DgModule out = make_module(a, cap, labels);
  out.provenance = m.provenance;
  Rational ds = p % 2 == 0 ? 1 : -1;
  for (int k = 0; k < cap; ++k)
    if (k - p >= 0) out.d[static_cast<std::size_t>(k)] = m.d[static_cast<std::size_t>(k - p)].scaled(ds);
  for (std::size_t g = 0; g < a.size(); ++g) {
    int gd = a.generator(g).degree;
    Rational s = (gd * p) % 2 == 0 ? 1 : -1;
    for (int k = 0; k + gd <= cap; ++k)
      if (k - p >= 0) out.action[g][static_cast<std::size_t>(k)] = m.action[g][static_cast<std::size_t>(k - p)].scaled(s);
  }
  return out;
}

/// N (+)_phi M = N (+) M[1-p] with a.(y,x) = (ay, (-1)^{|a|(p-1)} ax) and
/// d(y,x) = (dy + phi x, (-1)^{p-1} dx). In cone degree n the basis lists
/// N^n first, then M^{n+1-p}.
inline DgModule cone(const DgModuleMap& phi, const DgModule& n_mod, const DgModule& m_mod) {
  const int p = phi.degree;
  for (int k = 0; k < 1 - p && k <= m_mod.cap; ++k)
    if (m_mod.dim(k) != 0)
      fail_validation("cone of a degree " + std::to_string(p) + " map needs the source to vanish below degree " +
                      std::to_string(1 - p));
  const Sullivan& a = n_mod.algebra;
  int cap = std::min({n_mod.cap, m_mod.cap + p - 1, phi.window + p});
  if (cap < 0) fail_validation("cone window is empty");
  auto mdeg = [&](int n) { return n + 1 - p; };
  std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(cap) + 1);
  for (int n = 0; n <= cap; ++n) {
    auto& l = labels[static_cast<std::size_t>(n)];
    l = n_mod.basis[static_cast<std::size_t>(n)];
    if (mdeg(n) >= 0)
      for (const auto& s : m_mod.basis[static_cast<std::size_t>(mdeg(n))]) l.push_back("s(" + s + ")");
  }
  DgModule c = make_module(a, cap, labels);
  c.provenance = "cone";
  Rational ms = (p - 1) % 2 == 0 ? 1 : -1;
  for (int n = 0; n < cap; ++n) {
    Matrix& dn = c.d[static_cast<std::size_t>(n)];
    std::size_t nn = n_mod.dim(n), nn1 = n_mod.dim(n + 1);
    dn.set_block(0, 0, n_mod.differential(n));
    if (mdeg(n) >= 0) {
      dn.set_block(0, nn, phi.block(mdeg(n)));
      dn.set_block(nn1, nn, m_mod.differential(mdeg(n)).scaled(ms));
    }
  }
  for (std::size_t g = 0; g < a.size(); ++g) {
    int gd = a.generator(g).degree;
    Rational s = (gd * (p - 1)) % 2 == 0 ? 1 : -1;
    for (int n = 0; n + gd <= cap; ++n) {
      Matrix& act = c.action[g][static_cast<std::size_t>(n)];
      act.set_block(0, 0, n_mod.generator_action(g, n));
      if (mdeg(n) >= 0) act.set_block(n_mod.dim(n + gd), n_mod.dim(n), m_mod.generator_action(g, mdeg(n)).scaled(s));
    }
  }
  return c;
}

/// N -> cone, y |-> (y, 0).
inline DgModuleMap cone_inclusion(const DgModule& c, const DgModule& n_mod) {
  DgModuleMap f;
  f.window = c.cap;
  for (int k = 0; k <= c.cap; ++k) {
    Matrix b(c.dim(k), n_mod.dim(k));
    b.set_block(0, 0, Matrix::identity(n_mod.dim(k)));
    f.blocks.push_back(b);
  }
  return f;
}

/// cone -> M[1-p], (y, x) |-> x, as matrices C^n -> M^{n+1-p}.
inline std::vector<Matrix> cone_projection(const DgModule& c, const DgModule& n_mod, const DgModule& m_mod, int p) {
  std::vector<Matrix> out;
  for (int n = 0; n <= c.cap; ++n) {
    int k = n + 1 - p;
    Matrix b(m_mod.dim(k), c.dim(n));
    if (k >= 0) b.set_block(0, n_mod.dim(n), Matrix::identity(m_mod.dim(k)));
    out.push_back(b);
  }
  return out;
}

struct ConeLesRow {
  int n = 0;
  std::size_t h_n = 0, h_cone = 0, h_m = 0, h_n_next = 0;  // H^n(N), H^n(C), H^{n+1-p}(M), H^{n+1}(N)
  std::size_t rank_incl = 0, rank_proj = 0, rank_phi = 0;
  bool exact = false;
  bool connecting_is_phi = false;
};

struct ConeLes {
  int degree = 0;
  int window_end = -1;
  std::vector<ConeLesRow> rows;
  bool exact() const {
    return std::all_of(rows.begin(), rows.end(), [](const ConeLesRow& r) { return r.exact && r.connecting_is_phi; });
  }
};

/// H^n(N) -> H^n(C) -> H^{n+1-p}(M) -> H^{n+1}(N), checked node by node:
/// consecutive composites vanish and ranks add up, so image = kernel.
/// The connecting map is recomputed by lifting (0, x) and compared to phi_*.
inline ConeLes cone_les(const DgModuleMap& phi, const DgModule& n_mod, const DgModule& m_mod) {
  const int p = phi.degree;
  DgModule c = cone(phi, n_mod, m_mod);
  auto hn = module_cohomology(n_mod);
  auto hm = module_cohomology(m_mod);
  auto hc = module_cohomology(c);
  auto group = [](const std::vector<CohomologyGroup>& gs, int k) {
    return k < 0 ? zero_group(k) : gs.at(static_cast<std::size_t>(k));
  };
  auto proj = cone_projection(c, n_mod, m_mod, p);
  DgModuleMap incl = cone_inclusion(c, n_mod);
  ConeLes les;
  les.degree = p;
  int end = std::min({static_cast<int>(hc.size()) - 2, static_cast<int>(hm.size()) - 1 + p - 1,
                      static_cast<int>(hn.size()) - 2});
  les.window_end = end;
  auto incl_star = [&](int n) { return induced_map(incl.block(n), group(hn, n), group(hc, n)); };
  for (int n = 0; n <= end; ++n) {
    ConeLesRow row;
    row.n = n;
    int k = n + 1 - p;
    CohomologyGroup gN = group(hn, n), gC = group(hc, n), gM = group(hm, k), gN1 = group(hn, n + 1);
    row.h_n = gN.betti;
    row.h_cone = gC.betti;
    row.h_m = gM.betti;
    row.h_n_next = gN1.betti;
    Matrix i_star = incl_star(n);
    Matrix p_star = induced_map(proj[static_cast<std::size_t>(n)], gC, gM);
    Matrix phi_star = k >= 0 ? induced_map(phi.block(k), gM, gN1) : Matrix(gN1.betti, 0);
    Matrix i_next = incl_star(n + 1);
    row.rank_incl = rank(i_star);
    row.rank_proj = rank(p_star);
    row.rank_phi = rank(phi_star);
    bool composites =
        (p_star * i_star).is_zero() && (phi_star * p_star).is_zero() && (i_next * phi_star).is_zero();
    bool at_cone = row.rank_incl == gC.betti - row.rank_proj;
    bool at_m = row.rank_proj == gM.betti - row.rank_phi;
    bool at_n1 = row.rank_phi == gN1.betti - rank(i_next);
    row.exact = composites && at_cone && at_m && at_n1;
    // Connecting map: D(0, x) = (phi x, (-1)^{p-1} dx) and dx = 0 on cocycles.
    row.connecting_is_phi = true;
    if (k >= 0 && n + 1 <= c.cap) {
      for (std::size_t i = 0; i < gM.betti; ++i) {
        Vector lift(c.dim(n));
        for (std::size_t j = 0; j < m_mod.dim(k); ++j) lift[n_mod.dim(n) + j] = gM.representatives[i][j];
        Vector image = c.differential(n) * lift;
        Vector y(image.begin(), image.begin() + static_cast<std::ptrdiff_t>(n_mod.dim(n + 1)));
        Vector rest(image.begin() + static_cast<std::ptrdiff_t>(n_mod.dim(n + 1)), image.end());
        auto cls = gN1.classify(y);
        if (!cls || !is_zero(rest) || *cls != phi_star.column(i)) row.connecting_is_phi = false;
      }
    }
    les.rows.push_back(row);
  }
  return les;
}

/// (-1)^p dh + hd = psi - phi in every degree the data covers; p = |phi|.
inline bool is_homotopy(const DgModuleMap& h, const DgModuleMap& phi, const DgModuleMap& psi, const DgModule& src,
                        const DgModule& dst) {
  const int p = phi.degree;
  if (psi.degree != p || h.degree != p - 1) throw std::invalid_argument("is_homotopy: inconsistent degrees");
  int end = std::min({phi.window, psi.window, h.window - 1, dst.cap - p});
  Rational s = p % 2 == 0 ? 1 : -1;
  for (int k = 0; k <= end; ++k) {
    if (k + p < 0) continue;
    Matrix dh = k + p - 1 >= 0 ? dst.differential(k + p - 1) * h.block(k) : Matrix(dst.dim(k + p), src.dim(k));
    Matrix lhs = dh.scaled(s) + h.block(k + 1) * src.differential(k);
    Matrix rhs = psi.block(k) - phi.block(k);
    if (lhs.rows() != rhs.rows() || lhs.cols() != rhs.cols()) throw std::invalid_argument("is_homotopy: shape mismatch");
    if (!(lhs == rhs)) return false;
  }
  return true;
}

/// Applies an invertible change of basis P_k in every degree:
/// d'_k = P_{k+1} d_k P_k^{-1} and likewise for the action.
inline DgModule change_basis(const DgModule& m, const std::vector<Matrix>& p, const std::vector<Matrix>& p_inv) {
  DgModule out = m;
  for (int k = 0; k < m.cap; ++k)
    out.d[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k + 1)] * m.d[static_cast<std::size_t>(k)] *
                                         p_inv[static_cast<std::size_t>(k)];
  for (std::size_t g = 0; g < m.algebra.size(); ++g) {
    int gd = m.algebra.generator(g).degree;
    for (int k = 0; k + gd <= m.cap; ++k)
      out.action[g][static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k + gd)] *
                                                   m.action[g][static_cast<std::size_t>(k)] *
                                                   p_inv[static_cast<std::size_t>(k)];
  }
  return out;
}

}  // namespace dgmm
