#pragma once

// Reference computations for the tests. Written independently of the
// library's rref: plain Gaussian elimination on a copy of the entries.

#include <cstddef>
#include <vector>

#include "dgmm/dgmodule.hpp"
#include "dgmm/matrix.hpp"

namespace oracle {

using dgmm::Matrix;
using dgmm::Rational;

inline std::size_t rank(const Matrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m(r, c);
  std::size_t rk = 0;
  for (std::size_t c = 0; c < m.cols() && rk < m.rows(); ++c) {
    std::size_t piv = rk;
    while (piv < m.rows() && a[piv][c] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[rk]);
    for (std::size_t r = rk + 1; r < m.rows(); ++r) {
      if (a[r][c] == 0) continue;
      Rational f = a[r][c] / a[rk][c];
      for (std::size_t k = c; k < m.cols(); ++k) a[r][k] -= f * a[rk][k];
    }
    ++rk;
  }
  return rk;
}

/// Gauss-Jordan inverse; the matrix must be invertible.
inline Matrix inverse(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::vector<Rational>> a(n, std::vector<Rational>(2 * n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) a[r][c] = m(r, c);
    a[r][n + r] = 1;
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (a[piv][c] == 0) ++piv;
    std::swap(a[piv], a[c]);
    Rational inv = 1 / a[c][c];
    for (auto& x : a[c]) x *= inv;
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t k = 0; k < 2 * n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  Matrix out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = a[r][n + c];
  return out;
}

/// dim H^k = dim C^k - rank d_k - rank d_{k-1}, degrees 0..cap-1.
inline std::vector<long long> betti(const dgmm::DgModule& m) {
  std::vector<long long> out;
  for (int k = 0; k < m.cap; ++k) {
    long long in = k == 0 ? 0 : static_cast<long long>(oracle::rank(m.d[static_cast<std::size_t>(k - 1)]));
    long long outr = static_cast<long long>(oracle::rank(m.d[static_cast<std::size_t>(k)]));
    out.push_back(static_cast<long long>(m.dim(k)) - outr - in);
  }
  return out;
}

}  // namespace oracle
