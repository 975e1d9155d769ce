#pragma once

#include <string>
#include <vector>

#include "dgmm/circle.hpp"
#include "dgmm/expr.hpp"

namespace dgmm::fixtures {

inline FreeElement times(const Sullivan& a, const std::string& poly, std::size_t g) {
  return FreeElement{{g, parse_polynomial(poly, a)}};
}

/// Relative model with generators b_0, b_1, ... where b_0, b_1 are cocycles
/// of degrees d0, d1 and d b_{n+2} = a b_n. Generated through degree `top`.
inline FreeDgModule periodic_relative(const Sullivan& alg, int d0, int d1, int top) {
  const int step = alg.generator(0).degree - 1;
  FreeDgModule m{alg, {}};
  for (std::size_t n = 0;; ++n) {
    int deg = n < 2 ? (n == 0 ? d0 : d1) : m.generators[n - 2].degree + step;
    if (deg > top) break;
    FreeElement d;
    if (n >= 2) d = times(alg, alg.generator(0).name, n - 2);
    m.generators.push_back({"b" + std::to_string(n), deg, d, std::nullopt});
  }
  return with_stages(m, *derive_stages(m));
}

inline FreeMap single_hit(const FreeDgModule& m, const Sullivan& a, int degree, std::size_t hit) {
  FreeMap f{degree, std::vector<FreeElement>(m.size())};
  if (hit < m.size()) f.images[hit] = times(a, a.generator(0).name, 0);
  return f;
}

/// The suspension of the Hopf action on S^4: B = S^4 / S^1 modelled by
/// Lambda(a), |a| = 3, F = S^0.
inline BasicData s4_hopf(int max_degree = 12) {
  Sullivan a({Generator{"a", 3, {}}});
  BasicData d;
  d.name = "s4_hopf";
  d.algebra = a;
  d.relative = periodic_relative(a, 1, 3, max_degree + 1);
  d.e_prime = single_hit(d.relative, a, 2, 0);
  d.i_prime = single_hit(d.relative, a, 0, 1);
  d.fixed_components = 2;
  return d;
}

inline BasicData flow_s4(int max_degree = 12) {
  BasicData d = s4_hopf(max_degree);
  d.name = "flow_s4";
  d.variant = Variant::IsometricFlow;
  return d;
}

/// CP^n with the circle action fixing CP^0 and CP^{n-1}: B contractible,
/// H(B,F) in degrees 1, 3, ..., 2n-1, and i' = e' = 0.
inline BasicData cpn(int n) {
  Sullivan a;
  BasicData d;
  d.name = n == 2 ? "cp2" : "cp" + std::to_string(n);
  d.algebra = a;
  d.relative.algebra = a;
  for (int k = 0; k < n; ++k) d.relative.generators.push_back({"b" + std::to_string(k), 2 * k + 1, {}, Stage{2 * k + 1, 1}});
  d.e_prime = FreeMap{2, std::vector<FreeElement>(static_cast<std::size_t>(n))};
  d.i_prime = FreeMap{0, std::vector<FreeElement>(static_cast<std::size_t>(n))};
  d.fixed_components = 2;
  return d;
}

inline BasicData cp2() { return cpn(2); }

/// Free Hopf action on S^3 over S^2 = Lambda(u, w), dw = u^2, with Euler
/// class u.
inline BasicData almost_free_hopf() {
  Sullivan a({Generator{"u", 2, {}}, Generator{"w", 3, {}}});
  a = Sullivan({Generator{"u", 2, {}}, Generator{"w", 3, parse_polynomial("u^2", a)}});
  BasicData d;
  d.name = "almost_free_hopf";
  d.algebra = a;
  d.relative = FreeDgModule{a, {FreeGenerator{"m", 0, {}, Stage{0, 1}}}};
  d.e_prime = FreeMap{2, {times(a, "u", 0)}};
  d.i_prime = FreeMap{0, {FreeElement{}}};
  d.fixed_set_empty = true;
  return d;
}

/// A class in Ker e* with no string: b0 restricts to a nonzero class on F
/// and nothing cancels it.
inline BasicData nonformal_synthetic() {
  Sullivan a({Generator{"a", 3, {}}});
  BasicData d;
  d.name = "nonformal_synthetic";
  d.algebra = a;
  d.relative = FreeDgModule{a, {FreeGenerator{"b0", 3, {}, Stage{3, 1}}}};
  d.e_prime = FreeMap{2, {FreeElement{}}};
  d.i_prime = FreeMap{0, {times(a, "a", 0)}};
  return d;
}

/// Suspension of the Hopf S^3 action on S^7: B = S^5, F = S^0, Euler
/// degree 4.
inline BasicData semifree_s3(int max_degree = 12) {
  Sullivan a({Generator{"a", 5, {}}});
  BasicData d;
  d.name = "semifree_s3";
  d.algebra = a;
  d.relative = periodic_relative(a, 1, 5, max_degree + 1);
  d.e_prime = single_hit(d.relative, a, 4, 0);
  d.i_prime = single_hit(d.relative, a, 0, 1);
  d.euler_degree = 4;
  d.variant = Variant::SemifreeS3;
  d.fixed_components = 2;
  return d;
}

/// Stand-ins for the forms of the S^4 example: Lambda(a) for B and the
/// cohomology of (B, F) with zero action, i(beta3) = a, e(beta1) = a.
inline TabulatedAction s4_tabulated(int cap = 14) {
  Sullivan a({Generator{"a", 3, {}}});
  TabulatedAction t;
  t.name = "s4_tabulated";
  FreeDgModule af = algebra_as_module(a);
  t.omega_b = materialize(af, cap);
  t.omega_bf = make_module(a, cap, {{}, {"beta1"}, {}, {"beta3"}});
  t.i = zero_map(t.omega_bf, t.omega_b, 0);
  t.i.blocks[3](0, 0) = 1;
  t.e = zero_map(t.omega_bf, t.omega_b, 2);
  t.e.blocks[1](0, 0) = 1;
  t.fixed_components = 2;
  return t;
}

inline std::vector<std::string> names() {
  return {"s4_hopf", "cp2", "almost_free_hopf", "flow_s4", "nonformal_synthetic", "semifree_s3"};
}

inline BasicData by_name(const std::string& name, int max_degree = 12) {
  if (name == "s4_hopf") return s4_hopf(max_degree);
  if (name == "flow_s4") return flow_s4(max_degree);
  if (name == "cp2") return cp2();
  if (name == "almost_free_hopf") return almost_free_hopf();
  if (name == "nonformal_synthetic") return nonformal_synthetic();
  if (name == "semifree_s3") return semifree_s3(max_degree);
  fail_validation("unknown fixture '" + name + "'");
}

}  // namespace dgmm::fixtures
