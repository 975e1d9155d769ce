#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "dgmm/error.hpp"
#include "dgmm/matrix.hpp"

namespace dgmm {

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;
  Matrix transform;  // transform * input == reduced
};

/// Gauss-Jordan elimination. The pivot in each column is the first
/// remaining row with a nonzero entry, so the result is deterministic.
inline RrefResult rref(const Matrix& m) {
  RrefResult out{m, {}, Matrix::identity(m.rows())};
  Matrix& r = out.reduced;
  Matrix& t = out.transform;
  std::size_t row = 0;
  for (std::size_t col = 0; col < r.cols() && row < r.rows(); ++col) {
    std::size_t sel = row;
    while (sel < r.rows() && sgn(r(sel, col)) == 0) ++sel;
    if (sel == r.rows()) continue;
    if (sel != row) {
      for (std::size_t c = 0; c < r.cols(); ++c) std::swap(r(sel, c), r(row, c));
      for (std::size_t c = 0; c < t.cols(); ++c) std::swap(t(sel, c), t(row, c));
    }
    Rational inv = 1 / r(row, col);
    if (inv != 1) {
      for (std::size_t c = 0; c < r.cols(); ++c) r(row, c) *= inv;
      for (std::size_t c = 0; c < t.cols(); ++c) t(row, c) *= inv;
    }
    for (std::size_t other = 0; other < r.rows(); ++other) {
      if (other == row || sgn(r(other, col)) == 0) continue;
      Rational f = r(other, col);
      for (std::size_t c = col; c < r.cols(); ++c)
        if (sgn(r(row, c)) != 0) r(other, c) -= f * r(row, c);
      for (std::size_t c = 0; c < t.cols(); ++c)
        if (sgn(t(row, c)) != 0) t(other, c) -= f * t(row, c);
    }
    out.pivots.push_back(col);
    ++row;
  }
  return out;
}

inline std::size_t rank(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  // Eliminating on the thinner side is cheaper and rank is transpose-invariant.
  return m.rows() <= m.cols() ? rref(m).pivots.size() : rref(m.transpose()).pivots.size();
}

/// Basis of ker(m), one vector per free column in ascending order.
inline std::vector<Vector> kernel_basis(const Matrix& m) {
  RrefResult r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector v(m.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) v[r.pivots[i]] = -r.reduced(i, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Reusable solver for a x = b with a fixed coefficient matrix. Returns the
/// particular solution with all free variables set to zero.
class LinearSolver {
 public:
  LinearSolver() = default;
  explicit LinearSolver(const Matrix& a) : cols_(a.cols()), rows_(a.rows()), r_(rref(a)) {}

  std::size_t rank() const { return r_.pivots.size(); }
  std::size_t cols() const { return cols_; }

  std::optional<Vector> solve(const Vector& b) const {
    if (b.size() != rows_) throw std::invalid_argument("right-hand side has wrong length");
    Vector c = r_.transform * b;
    for (std::size_t i = r_.pivots.size(); i < c.size(); ++i)
      if (sgn(c[i]) != 0) return std::nullopt;
    Vector x(cols_);
    for (std::size_t i = 0; i < r_.pivots.size(); ++i) x[r_.pivots[i]] = c[i];
    return x;
  }

 private:
  std::size_t cols_ = 0;
  std::size_t rows_ = 0;
  RrefResult r_;
};

inline std::optional<Vector> solve(const Matrix& a, const Vector& b) { return LinearSolver(a).solve(b); }

/// Echelon basis (nonzero rows of the reduced form) of the span of `vectors`.
inline std::vector<Vector> span_basis(const std::vector<Vector>& vectors, std::size_t ambient) {
  if (vectors.empty()) return {};
  RrefResult r = rref(Matrix::from_rows(vectors, ambient));
  std::vector<Vector> out;
  for (std::size_t i = 0; i < r.pivots.size(); ++i) out.push_back(r.reduced.row(i));
  return out;
}

struct QuotientSection {
  std::vector<Vector> representatives;  // section images of the quotient basis
  Matrix projection;                    // ambient -> quotient coordinates
  std::vector<std::size_t> sub_pivots;
};

/// Quotient of Q^ambient by span(sub). Representatives are the standard
/// basis vectors at the non-pivot coordinates of the echelonized sub; the
/// projection kills sub and sends representative i to the i-th unit vector.
inline QuotientSection quotient_with_section(const std::vector<Vector>& sub, std::size_t ambient) {
  for (const auto& v : sub)
    if (v.size() != ambient) throw std::invalid_argument("subspace vector outside ambient space");
  QuotientSection out;
  RrefResult r = sub.empty() ? RrefResult{Matrix(0, ambient), {}, Matrix()}
                             : rref(Matrix::from_rows(sub, ambient));
  out.sub_pivots = r.pivots;
  std::vector<bool> is_pivot(ambient, false);
  for (auto p : r.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < ambient; ++j)
    if (!is_pivot[j]) free.push_back(j);
  out.projection = Matrix(free.size(), ambient);
  for (std::size_t q = 0; q < free.size(); ++q) {
    std::size_t j = free[q];
    out.representatives.push_back(unit_vector(ambient, j));
    out.projection(q, j) = 1;
    for (std::size_t i = 0; i < r.pivots.size(); ++i) out.projection(q, r.pivots[i]) -= r.reduced(i, j);
  }
  return out;
}

/// H^n of a complex C^{n-1} -> C^n -> C^{n+1}, with chosen representatives.
struct CohomologyGroup {
  int degree = 0;
  std::size_t chain_dim = 0;
  std::size_t betti = 0;
  std::vector<Vector> representatives;
  std::vector<Vector> boundary_basis;
  Matrix cycles;      // columns span Z^n
  Matrix projection;  // cycle coordinates -> class coordinates
  LinearSolver cycle_solver;

  /// Class coordinates of a cocycle, or nullopt if it is not a cocycle.
  std::optional<Vector> classify(const Vector& cocycle) const {
    if (cocycle.size() != chain_dim) throw std::invalid_argument("classify: wrong chain dimension");
    if (chain_dim == 0) return Vector{};
    auto y = cycle_solver.solve(cocycle);
    if (!y) return std::nullopt;
    return projection * *y;
  }

  bool is_coboundary(const Vector& cocycle) const {
    auto c = classify(cocycle);
    return c && dgmm::is_zero(*c);
  }
};

/// d_in: C^{n-1} -> C^n and d_out: C^n -> C^{n+1}. Throws a validation
/// error on a shape mismatch or when d_out * d_in != 0.
inline CohomologyGroup cohomology_at(const Matrix& d_in, const Matrix& d_out, int degree) {
  if (d_in.rows() != d_out.cols())
    fail_validation("cohomology at degree " + std::to_string(degree) + ": differential shapes do not compose");
  if (!(d_out * d_in).is_zero())
    fail_validation("cohomology at degree " + std::to_string(degree) + ": d o d != 0");
  CohomologyGroup h;
  h.degree = degree;
  h.chain_dim = d_out.cols();
  std::vector<Vector> z = kernel_basis(d_out);
  h.cycles = Matrix::from_columns(z, h.chain_dim);
  h.cycle_solver = LinearSolver(h.cycles);
  h.boundary_basis = span_basis([&] {
    std::vector<Vector> cols;
    for (std::size_t c = 0; c < d_in.cols(); ++c) cols.push_back(d_in.column(c));
    return cols;
  }(), h.chain_dim);
  std::vector<Vector> in_cycle_coords;
  for (const auto& b : h.boundary_basis) {
    auto y = h.cycle_solver.solve(b);
    if (!y) fail_validation("cohomology: boundary is not a cycle");
    in_cycle_coords.push_back(*y);
  }
  QuotientSection q = quotient_with_section(in_cycle_coords, z.size());
  h.projection = q.projection;
  h.betti = q.representatives.size();
  for (const auto& r : q.representatives) h.representatives.push_back(h.cycles * r);
  return h;
}

/// Matrix of the map induced on cohomology by a chain-level matrix f.
inline Matrix induced_map(const Matrix& f, const CohomologyGroup& src, const CohomologyGroup& dst) {
  Matrix out(dst.betti, src.betti);
  for (std::size_t i = 0; i < src.betti; ++i) {
    auto c = dst.classify(f * src.representatives[i]);
    if (!c) fail_validation("induced map: image of a cocycle is not a cocycle in degree " +
                            std::to_string(dst.degree));
    for (std::size_t r = 0; r < dst.betti; ++r) out(r, i) = (*c)[r];
  }
  return out;
}

}  // namespace dgmm
