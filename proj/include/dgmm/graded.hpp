#pragma once

#include <algorithm>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dgmm {

/// Dimensions in degrees 0..window(). Degrees past the window are unknown,
/// not zero.
struct GradedDims {
  std::vector<long long> dims;

  GradedDims() = default;
  explicit GradedDims(std::size_t window_end) : dims(window_end + 1, 0) {}
  explicit GradedDims(std::vector<long long> d) : dims(std::move(d)) {}

  int window() const { return static_cast<int>(dims.size()) - 1; }
  long long at(int k) const {
    if (k < 0) return 0;
    if (k > window()) throw std::out_of_range("degree " + std::to_string(k) + " outside window");
    return dims[static_cast<std::size_t>(k)];
  }
  long long& operator[](int k) { return dims.at(static_cast<std::size_t>(k)); }
  bool operator==(const GradedDims& o) const { return dims == o.dims; }

  GradedDims truncated(int end) const {
    GradedDims out;
    for (int k = 0; k <= end && k <= window(); ++k) out.dims.push_back(dims[static_cast<std::size_t>(k)]);
    return out;
  }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
    return os.str();
  }
};

/// Truncated polynomial in t; coefficients beyond window() are unknown.
struct PoincareSeries {
  std::vector<long long> coeffs;

  PoincareSeries() = default;
  explicit PoincareSeries(std::vector<long long> c) : coeffs(std::move(c)) {}
  static PoincareSeries from_dims(const GradedDims& g) { return PoincareSeries(g.dims); }

  int window() const { return static_cast<int>(coeffs.size()) - 1; }
  long long at(int k) const {
    if (k < 0) return 0;
    return coeffs.at(static_cast<std::size_t>(k));
  }

  PoincareSeries operator+(const PoincareSeries& o) const {
    PoincareSeries out;
    int w = std::min(window(), o.window());
    for (int k = 0; k <= w; ++k) out.coeffs.push_back(at(k) + o.at(k));
    return out;
  }

  PoincareSeries operator-(const PoincareSeries& o) const {
    PoincareSeries out;
    int w = std::min(window(), o.window());
    for (int k = 0; k <= w; ++k) out.coeffs.push_back(at(k) - o.at(k));
    return out;
  }

  /// Multiplication by c * t^shift; the window grows by `shift`.
  PoincareSeries times_monomial(long long c, int shift) const {
    PoincareSeries out;
    for (int k = 0; k <= window() + shift; ++k) out.coeffs.push_back(k - shift >= 0 ? c * at(k - shift) : 0);
    return out;
  }

  PoincareSeries truncated(int end) const {
    PoincareSeries out;
    for (int k = 0; k <= end && k <= window(); ++k) out.coeffs.push_back(at(k));
    return out;
  }

  /// Multiplication by 1/(1 - t^2), exact within the window.
  PoincareSeries over_one_minus_t2() const {
    PoincareSeries out;
    for (int k = 0; k <= window(); ++k) out.coeffs.push_back(at(k) + (k >= 2 ? out.at(k - 2) : 0));
    return out;
  }

  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (int k = 0; k <= window(); ++k) {
      long long c = at(k);
      if (c == 0) continue;
      os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
      long long a = c < 0 ? -c : c;
      if (k == 0)
        os << a;
      else {
        if (a != 1) os << a;
        os << "t" << (k > 1 ? "^" + std::to_string(k) : "");
      }
      first = false;
    }
    if (first) os << "0";
    os << " + O(t^" << window() + 1 << ")";
    return os.str();
  }
};

}  // namespace dgmm
