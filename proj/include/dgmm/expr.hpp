#pragma once

#include <cctype>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgmm/cdga.hpp"
#include "dgmm/error.hpp"
#include "dgmm/rational.hpp"

namespace dgmm {

/// One summand of an expression: coefficient times an ordered product.
struct ParsedTerm {
  Rational coefficient = 1;
  std::vector<std::pair<std::string, int>> factors;  // name, exponent
};

/// Reads sums of products such as "a*b0 - 3/2*e^2*c1". Coefficients are
/// integers or p/q literals; there are no parentheses.
class ExpressionParser {
 public:
  explicit ExpressionParser(std::string text) : s_(std::move(text)) {}

  std::vector<ParsedTerm> parse() {
    std::vector<ParsedTerm> terms;
    skip();
    if (pos_ == s_.size()) error("empty expression");
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (peek('+') || peek('-')) {
        sign = s_[pos_] == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        error("expected '+' or '-'");
      }
      ParsedTerm t = term();
      t.coefficient *= sign;
      terms.push_back(std::move(t));
      first = false;
      skip();
    }
    return terms;
  }

 private:
  ParsedTerm term() {
    ParsedTerm t;
    factor(t);
    skip();
    while (peek('*')) {
      ++pos_;
      skip();
      factor(t);
      skip();
    }
    return t;
  }

  void factor(ParsedTerm& t) {
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::string num = digits();
      skip();
      std::string den = "1";
      if (peek('/')) {
        ++pos_;
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected denominator");
        den = digits();
      }
      try {
        t.coefficient *= parse_rational(num + "/" + den);
      } catch (const std::invalid_argument& e) {
        error(e.what());
      }
      return;
    }
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '\''))
        ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      skip();
      int exponent = 1;
      if (peek('^')) {
        ++pos_;
        skip();
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) error("expected exponent");
        exponent = std::stoi(digits());
      }
      t.factors.emplace_back(name, exponent);
      return;
    }
    if (pos_ < s_.size() && s_[pos_] == '.') error("decimal literals are not supported; write p/q");
    error("expected a coefficient or a generator name");
  }

  std::string digits() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') error("decimal literals are not supported; write p/q");
    return s_.substr(start, pos_ - start);
  }

  bool peek(char c) const { return pos_ < s_.size() && s_[pos_] == c; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail_validation("expression \"" + s_ + "\", column " + std::to_string(pos_ + 1) + ": " + msg);
  }

  std::string s_;
  std::size_t pos_ = 0;
};

inline Polynomial parse_polynomial(const std::string& text, const Sullivan& a) {
  Polynomial out;
  for (const auto& t : ExpressionParser(text).parse()) {
    Polynomial p = a.constant(t.coefficient);
    for (const auto& [name, e] : t.factors) {
      auto idx = a.index_of(name);
      if (!idx) fail_validation("expression \"" + text + "\": unknown algebra generator '" + name + "'");
      for (int k = 0; k < e; ++k) p = a.multiply(p, Polynomial{{a.generator_monomial(*idx), Rational(1)}});
    }
    add_scaled(out, p);
  }
  return out;
}

/// Element of a free module: generator index -> coefficient polynomial.
using FreeElement = std::map<std::size_t, Polynomial>;

inline void add_scaled(FreeElement& x, const FreeElement& y, const Rational& c = 1) {
  for (const auto& [g, p] : y) {
    auto& slot = x[g];
    add_scaled(slot, p, c);
    if (slot.empty()) x.erase(g);
  }
}

/// Reads "alpha*g + ..." where the module generator g is the rightmost factor
/// of every term and all other factors are algebra generators.
inline FreeElement parse_module_element(const std::string& text, const Sullivan& a,
                                        const std::function<std::optional<std::size_t>(const std::string&)>& gen) {
  FreeElement out;
  for (const auto& t : ExpressionParser(text).parse()) {
    // A module free on the unit (named "1") takes plain algebra terms.
    auto unit = gen("1");
    bool implicit_unit = unit && (t.factors.empty() || !gen(t.factors.back().first));
    if (t.factors.empty() && !implicit_unit) {
      if (sgn(t.coefficient) == 0) continue;
      fail_validation("expression \"" + text + "\": term without a module generator");
    }
    std::optional<std::size_t> g = unit;
    std::size_t algebra_factors = t.factors.size();
    if (!implicit_unit) {
      const auto& [last, last_exp] = t.factors.back();
      g = gen(last);
      if (!g) fail_validation("expression \"" + text + "\": rightmost factor '" + last + "' is not a module generator");
      if (last_exp != 1) fail_validation("expression \"" + text + "\": module generator raised to a power");
      --algebra_factors;
    }
    Polynomial p = a.constant(t.coefficient);
    for (std::size_t i = 0; i < algebra_factors; ++i) {
      const auto& [name, e] = t.factors[i];
      if (gen(name)) fail_validation("expression \"" + text + "\": module generator '" + name + "' must be rightmost");
      auto idx = a.index_of(name);
      if (!idx) fail_validation("expression \"" + text + "\": unknown algebra generator '" + name + "'");
      for (int k = 0; k < e; ++k) p = a.multiply(p, Polynomial{{a.generator_monomial(*idx), Rational(1)}});
    }
    FreeElement term;
    if (!p.empty()) term[*g] = p;
    add_scaled(out, term);
  }
  return out;
}

inline std::string module_element_string(const FreeElement& x, const Sullivan& a,
                                         const std::vector<std::string>& gen_names) {
  std::string s;
  for (const auto& [g, p] : x) {
    std::vector<std::pair<Monomial, Rational>> terms(p.begin(), p.end());
    std::sort(terms.begin(), terms.end(), [](const auto& l, const auto& r) { return l.first > r.first; });
    for (const auto& [m, c] : terms) {
      bool neg = sgn(c) < 0;
      Rational abs_c = neg ? Rational(-c) : c;
      std::string mono = a.monomial_string(m);
      std::string term;
      if (gen_names.at(g) == "1") {
        term = mono == "1" ? to_string(abs_c) : (abs_c == 1 ? "" : to_string(abs_c) + "*") + mono;
      } else {
        term = abs_c == 1 ? "" : to_string(abs_c) + "*";
        if (mono != "1") term += mono + "*";
        term += gen_names.at(g);
      }
      if (s.empty())
        s = (neg ? "-" : "") + term;
      else
        s += (neg ? " - " : " + ") + term;
    }
  }
  return s.empty() ? "0" : s;
}

}  // namespace dgmm
