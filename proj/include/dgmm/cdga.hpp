#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgmm/error.hpp"
#include "dgmm/linalg.hpp"
#include "dgmm/rational.hpp"

namespace dgmm {

/// Exponent vector over the generators, in declaration order. Odd
/// generators carry exponent 0 or 1.
using Monomial = std::vector<int>;
using Polynomial = std::map<Monomial, Rational>;

struct Generator {
  std::string name;
  int degree = 1;
  Polynomial d;
};

inline void add_term(Polynomial& p, const Monomial& m, const Rational& c) {
  if (sgn(c) == 0) return;
  auto [it, inserted] = p.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) p.erase(it);
  }
}

inline void add_scaled(Polynomial& p, const Polynomial& q, const Rational& c = 1) {
  for (const auto& [m, v] : q) add_term(p, m, c * v);
}

inline Polynomial scaled(const Polynomial& p, const Rational& c) {
  Polynomial out;
  add_scaled(out, p, c);
  return out;
}

/// Free graded-commutative algebra on named generators with a differential.
class Sullivan {
 public:
  struct Unchecked {};

  Sullivan() = default;

  explicit Sullivan(std::vector<Generator> gens) : gens_(std::move(gens)) {
    normalize();
    validate();
  }

  /// Skips the structural checks; used to hand malformed data to verify_cdga.
  Sullivan(std::vector<Generator> gens, Unchecked) : gens_(std::move(gens)) { normalize(); }

  std::size_t size() const { return gens_.size(); }
  const std::vector<Generator>& generators() const { return gens_; }
  const Generator& generator(std::size_t i) const { return gens_.at(i); }
  bool is_odd(std::size_t i) const { return gens_.at(i).degree % 2 != 0; }

  std::optional<std::size_t> index_of(const std::string& name) const {
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].name == name) return i;
    return std::nullopt;
  }

  Monomial unit() const { return Monomial(gens_.size(), 0); }

  Monomial generator_monomial(std::size_t i) const {
    Monomial m = unit();
    m.at(i) = 1;
    return m;
  }

  Polynomial constant(const Rational& c) const {
    Polynomial p;
    add_term(p, unit(), c);
    return p;
  }

  int degree(const Monomial& m) const {
    int d = 0;
    for (std::size_t i = 0; i < m.size(); ++i) d += m[i] * gens_[i].degree;
    return d;
  }

  /// Sign and product of two monomials; sign 0 when an odd generator repeats.
  std::pair<int, Monomial> multiply(const Monomial& a, const Monomial& b) const {
    Monomial out(gens_.size(), 0);
    int sign = 1;
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      out[i] = a[i] + b[i];
      if (is_odd(i) && out[i] > 1) return {0, {}};
    }
    // Moving each odd factor of b leftwards past the odd factors of a with a
    // larger index costs one sign per pair.
    int odd_a_above = 0;
    for (std::size_t j = gens_.size(); j-- > 0;) {
      if (!is_odd(j)) continue;
      if (b[j] == 1 && odd_a_above % 2 == 1) sign = -sign;
      if (a[j] == 1) ++odd_a_above;
    }
    return {sign, out};
  }

  Polynomial multiply(const Polynomial& p, const Polynomial& q) const {
    Polynomial out;
    for (const auto& [m1, c1] : p)
      for (const auto& [m2, c2] : q) {
        auto [s, m] = multiply(m1, m2);
        if (s != 0) add_term(out, m, s * c1 * c2);
      }
    return out;
  }

  Polynomial multiply(const Monomial& m, const Polynomial& q) const {
    Polynomial out;
    for (const auto& [m2, c2] : q) {
      auto [s, r] = multiply(m, m2);
      if (s != 0) add_term(out, r, s * c2);
    }
    return out;
  }

  /// Leibniz expansion from the first generator present: m = x_i * m'.
  Polynomial differential(const Monomial& m) const {
    std::size_t i = 0;
    while (i < m.size() && m[i] == 0) ++i;
    if (i == m.size()) return {};
    Monomial rest = m;
    --rest[i];
    Polynomial out = multiply(gens_[i].d, Polynomial{{rest, Rational(1)}});
    Polynomial tail = multiply(generator_monomial(i), differential(rest));
    add_scaled(out, tail, gens_[i].degree % 2 == 0 ? 1 : -1);
    return out;
  }

  Polynomial differential(const Polynomial& p) const {
    Polynomial out;
    for (const auto& [m, c] : p) add_scaled(out, differential(m), c);
    return out;
  }

  /// Homogeneous degree of p, or nullopt for zero / inhomogeneous input.
  std::optional<int> degree(const Polynomial& p) const {
    std::optional<int> d;
    for (const auto& [m, c] : p) {
      int k = degree(m);
      if (d && *d != k) return std::nullopt;
      d = k;
    }
    return d;
  }

  std::string monomial_string(const Monomial& m) const {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i] == 0) continue;
      if (!s.empty()) s += "*";
      s += gens_[i].name;
      if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s.empty() ? "1" : s;
  }

  /// Renders as a sum parseable by the expression reader.
  std::string polynomial_string(const Polynomial& p) const {
    if (p.empty()) return "0";
    std::string s;
    // Higher-degree monomials of the first generators first, matching basis order.
    std::vector<std::pair<Monomial, Rational>> terms(p.begin(), p.end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (const auto& [m, c] : terms) {
      bool neg = sgn(c) < 0;
      Rational a = neg ? Rational(-c) : c;
      std::string mono = monomial_string(m);
      std::string term;
      if (mono == "1")
        term = to_string(a);
      else
        term = (a == 1 ? "" : to_string(a) + "*") + mono;
      if (s.empty())
        s = (neg ? "-" : "") + term;
      else
        s += (neg ? " - " : " + ") + term;
    }
    return s;
  }

  bool operator==(const Sullivan& o) const {
    if (gens_.size() != o.gens_.size()) return false;
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (gens_[i].name != o.gens_[i].name || gens_[i].degree != o.gens_[i].degree || gens_[i].d != o.gens_[i].d)
        return false;
    return true;
  }

 private:
  void normalize() {
    for (auto& g : gens_) {
      Polynomial clean;
      for (const auto& [m, c] : g.d) {
        if (m.size() != gens_.size()) fail_validation("generator " + g.name + ": monomial of wrong arity");
        bool zero = false;
        for (std::size_t i = 0; i < m.size(); ++i) {
          if (m[i] < 0) fail_validation("generator " + g.name + ": negative exponent");
          if (gens_[i].degree % 2 != 0 && m[i] > 1) zero = true;
        }
        if (!zero) add_term(clean, m, c);
      }
      g.d = std::move(clean);
    }
  }

  void validate() const {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      const auto& g = gens_[i];
      if (g.name.empty()) fail_validation("generator with empty name");
      if (g.degree < 1) fail_validation("generator " + g.name + " must have degree >= 1");
      for (std::size_t j = 0; j < i; ++j)
        if (gens_[j].name == g.name) fail_validation("duplicate generator name " + g.name);
      for (const auto& [m, c] : g.d)
        if (degree(m) != g.degree + 1)
          fail_validation("d(" + g.name + ") must have degree " + std::to_string(g.degree + 1) + ", found term " +
                          monomial_string(m) + " of degree " + std::to_string(degree(m)));
    }
    for (std::size_t i = 0; i < gens_.size(); ++i)
      if (!differential(gens_[i].d).empty())
        fail_validation("d(d(" + gens_[i].name + ")) = " + polynomial_string(differential(gens_[i].d)) + " != 0");
  }

  std::vector<Generator> gens_;
};

/// Per-degree monomial basis in degrees 0..cap, each degree sorted in
/// descending lexicographic order of exponent vectors (so powers of the
/// first-declared generators come first).
struct AlgebraBasis {
  int cap = -1;
  std::vector<std::vector<Monomial>> by_degree;
  std::vector<std::map<Monomial, std::size_t>> index;

  std::size_t dim(int k) const {
    if (k < 0 || k > cap) return 0;
    return by_degree[static_cast<std::size_t>(k)].size();
  }
  const std::vector<Monomial>& at(int k) const { return by_degree.at(static_cast<std::size_t>(k)); }
  std::size_t index_of(const Monomial& m, int k) const {
    const auto& idx = index.at(static_cast<std::size_t>(k));
    auto it = idx.find(m);
    if (it == idx.end()) throw std::out_of_range("monomial not in basis");
    return it->second;
  }
};

inline AlgebraBasis enumerate_basis(const Sullivan& a, int cap) {
  if (cap < 0) throw std::invalid_argument("negative degree cap");
  AlgebraBasis b;
  b.cap = cap;
  b.by_degree.assign(static_cast<std::size_t>(cap) + 1, {});
  Monomial cur(a.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int deg) {
    if (i == a.size()) {
      b.by_degree[static_cast<std::size_t>(deg)].push_back(cur);
      return;
    }
    int gd = a.generator(i).degree;
    int max_e = a.is_odd(i) ? 1 : (cap - deg) / gd;
    for (int e = 0; e <= max_e && deg + e * gd <= cap; ++e) {
      cur[i] = e;
      rec(i + 1, deg + e * gd);
    }
    cur[i] = 0;
  };
  rec(0, 0);
  for (auto& v : b.by_degree) std::sort(v.begin(), v.end(), std::greater<>());
  for (auto& v : b.by_degree) {
    std::map<Monomial, std::size_t> idx;
    for (std::size_t i = 0; i < v.size(); ++i) idx[v[i]] = i;
    b.index.push_back(std::move(idx));
  }
  return b;
}

/// Coordinates of a homogeneous polynomial of degree k in the basis.
inline Vector to_vector(const Polynomial& p, const AlgebraBasis& b, const Sullivan& a, int k) {
  Vector v(b.dim(k));
  for (const auto& [m, c] : p) {
    if (a.degree(m) != k) throw std::invalid_argument("polynomial term outside degree " + std::to_string(k));
    v[b.index_of(m, k)] += c;
  }
  return v;
}

inline Polynomial from_vector(const Vector& v, const AlgebraBasis& b, int k) {
  Polynomial p;
  for (std::size_t i = 0; i < v.size(); ++i) add_term(p, b.at(k)[i], v[i]);
  return p;
}

/// basis_i (x) basis_j -> basis_{i+j}; column index is r * dim_j + s.
inline Matrix product_matrix(const Sullivan& a, const AlgebraBasis& b, int i, int j) {
  if (i < 0 || j < 0) throw std::invalid_argument("negative degree");
  if (i + j > b.cap)
    fail_validation("product of degrees " + std::to_string(i) + " and " + std::to_string(j) +
                    " lands above the degree cap " + std::to_string(b.cap));
  Matrix m(b.dim(i + j), b.dim(i) * b.dim(j));
  for (std::size_t r = 0; r < b.dim(i); ++r)
    for (std::size_t s = 0; s < b.dim(j); ++s) {
      auto [sign, prod] = a.multiply(b.at(i)[r], b.at(j)[s]);
      if (sign != 0) m(b.index_of(prod, i + j), r * b.dim(j) + s) = sign;
    }
  return m;
}

/// d: A^k -> A^{k+1}; needs k + 1 <= cap.
inline Matrix differential_matrix(const Sullivan& a, const AlgebraBasis& b, int k) {
  if (k + 1 > b.cap) fail_validation("differential out of degree " + std::to_string(k) + " needs a larger cap");
  Matrix m(b.dim(k + 1), b.dim(k));
  for (std::size_t c = 0; c < b.dim(k); ++c) {
    Vector v = to_vector(a.differential(b.at(k)[c]), b, a, k + 1);
    for (std::size_t r = 0; r < v.size(); ++r) m(r, c) = v[r];
  }
  return m;
}

/// Checks degree, d^2 = 0 and the Leibniz rule on all basis pairs whose
/// products stay within the cap.
inline CheckReport verify_cdga(const Sullivan& a, int cap) {
  CheckReport rep;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& g = a.generator(i);
    if (g.degree < 1) rep.fail("generator " + g.name + " has degree " + std::to_string(g.degree) + " < 1");
    for (const auto& [m, c] : g.d)
      if (a.degree(m) != g.degree + 1)
        rep.fail("d(" + g.name + ") has term " + a.monomial_string(m) + " of degree " +
                 std::to_string(a.degree(m)) + ", expected " + std::to_string(g.degree + 1));
  }
  if (!rep.ok) return rep;
  AlgebraBasis b = enumerate_basis(a, cap);
  for (int k = 0; k + 2 <= cap; ++k)
    for (const auto& m : b.at(k)) {
      Polynomial dd = a.differential(a.differential(m));
      if (!dd.empty()) rep.fail("d(d(" + a.monomial_string(m) + ")) = " + a.polynomial_string(dd));
    }
  for (int i = 0; i <= cap; ++i)
    for (int j = 0; i + j + 1 <= cap; ++j)
      for (const auto& x : b.at(i))
        for (const auto& y : b.at(j)) {
          Polynomial xy = a.multiply(Polynomial{{x, Rational(1)}}, Polynomial{{y, Rational(1)}});
          Polynomial lhs = a.differential(xy);
          Polynomial rhs = a.multiply(a.differential(x), Polynomial{{y, Rational(1)}});
          add_scaled(rhs, a.multiply(x, a.differential(y)), i % 2 == 0 ? 1 : -1);
          if (lhs != rhs)
            rep.fail("Leibniz fails on (" + a.monomial_string(x) + ", " + a.monomial_string(y) + ")");
        }
  return rep;
}

inline Monomial extend_monomial(const Monomial& m, std::size_t new_size) {
  Monomial out(m);
  out.resize(new_size, 0);
  return out;
}

inline Polynomial extend_polynomial(const Polynomial& p, std::size_t new_size) {
  Polynomial out;
  for (const auto& [m, c] : p) out.emplace(extend_monomial(m, new_size), c);
  return out;
}

/// A (x) Q[name] with d(name) = 0; the new generator is appended last.
inline Sullivan adjoin_polynomial_generator(const Sullivan& a, const std::string& name, int degree = 2) {
  if (a.index_of(name)) fail_validation("generator name '" + name + "' already used");
  if (degree < 2 || degree % 2 != 0) fail_validation("adjoined polynomial generator needs positive even degree");
  std::vector<Generator> gens;
  for (const auto& g : a.generators()) gens.push_back({g.name, g.degree, extend_polynomial(g.d, a.size() + 1)});
  gens.push_back({name, degree, {}});
  return Sullivan(std::move(gens));
}

/// Sets generator `idx` to zero and removes it from the exponent vectors.
inline Polynomial drop_generator(const Polynomial& p, std::size_t idx) {
  Polynomial out;
  for (const auto& [m, c] : p) {
    if (m.at(idx) != 0) continue;
    Monomial r = m;
    r.erase(r.begin() + static_cast<std::ptrdiff_t>(idx));
    add_term(out, r, c);
  }
  return out;
}

}  // namespace dgmm
