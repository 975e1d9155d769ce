#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "dgmm/dgmodule.hpp"
#include "dgmm/error.hpp"
#include "dgmm/free_module.hpp"
#include "dgmm/linalg.hpp"

namespace dgmm {

struct KSOptions {
  int max_batches = 64;                // per degree, before giving up
  std::optional<std::uint64_t> seed;   // randomizes the section choice when set
  bool check_invariants = true;
};

/// Differential of the relative complex C^j = N^j (+) X^{j-1},
/// D = [[d, 0], [rho, -d]].
inline Matrix relative_differential(const DgModule& n_mod, const DgModuleMap& rho, const DgModule& x_mod, int j) {
  Matrix dn = n_mod.differential(j);
  Matrix r = j >= 0 ? rho.block(j) : Matrix(x_mod.dim(j), 0);
  Matrix dx = x_mod.differential(j - 1).scaled(-1);
  return block2x2(dn, Matrix(dn.rows(), dx.cols()), r, dx);
}

struct RelativeClass {
  FreeElement t;  // dv
  Vector t_vector;
  Vector x;       // rho(v)
};

struct RelativeCohomology {
  int n = 0;
  std::vector<RelativeClass> classes;
};

/// Classes of H^{n+1} of the relative complex of rho: N -> X, each with a
/// representative (t, x): dt = 0 and rho(t) = dx. With `rng` set the
/// representatives are recombined unitriangularly and moved by boundaries.
inline RelativeCohomology relative_cohomology(const FreeDgModule& n_free, const FreeToTabulated& rho,
                                              const DgModule& x_mod, int n, std::mt19937_64* rng = nullptr) {
  if (n < 0 || n + 1 > x_mod.cap)
    fail_validation("relative cohomology in degree " + std::to_string(n + 1) + " needs the target past its cap " +
                    std::to_string(x_mod.cap));
  FreeBasis b = free_basis(n_free, n + 2);
  DgModule nm = materialize(n_free, n + 2, &b);
  DgModuleMap r = materialize(rho, n_free, b, x_mod);
  Matrix d_in = relative_differential(nm, r, x_mod, n);
  Matrix d_out = relative_differential(nm, r, x_mod, n + 1);
  CohomologyGroup h = cohomology_at(d_in, d_out, n + 1);
  std::vector<Vector> reps = h.representatives;
  if (rng) {
    std::uniform_int_distribution<int> coef(-2, 2);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) reps[i] = reps[i] + Rational(coef(*rng)) * h.representatives[j];
      for (std::size_t c = 0; c < d_in.cols(); ++c) reps[i] = reps[i] + Rational(coef(*rng)) * d_in.column(c);
    }
  }
  RelativeCohomology out;
  out.n = n;
  const std::size_t nd = nm.dim(n + 1);
  for (const auto& v : reps) {
    RelativeClass c;
    c.t_vector.assign(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(nd));
    c.x.assign(v.begin() + static_cast<std::ptrdiff_t>(nd), v.end());
    c.t = from_vector(c.t_vector, b, n + 1);
    out.classes.push_back(std::move(c));
  }
  return out;
}

struct KSBatch {
  Stage stage;
  std::vector<std::string> names;
};

/// A KS-extension N of the base under construction, with rho: N -> X.
struct KSState {
  FreeDgModule module;
  FreeToTabulated rho;
  std::size_t base_size = 0;
  std::vector<Vector> base_images;  // phi on the base generators
  Stage stage{0, 1};                // next batch to compute
  std::vector<KSBatch> batches;
  CheckReport invariants;
};

/// Stage condition, rho restricted to the base equals phi, and rho commutes
/// with d on every generator the target window covers.
inline CheckReport check_ks_invariants(const KSState& s, const DgModule& x_mod) {
  CheckReport rep;
  rep.merge(verify_minimal(s.module, s.base_size), "stage condition: ");
  if (s.rho.images.size() != s.module.size()) {
    rep.fail("rho has " + std::to_string(s.rho.images.size()) + " images for " + std::to_string(s.module.size()) +
             " generators");
    return rep;
  }
  for (std::size_t g = 0; g < s.base_size; ++g)
    if (s.rho.images[g] != s.base_images.at(g)) rep.fail("rho differs from phi on " + s.module.generators[g].name);
  for (std::size_t g = 0; g < s.module.size(); ++g) {
    const auto& gen = s.module.generators[g];
    if (gen.degree + 1 > x_mod.cap) continue;
    if (s.rho.images[g].size() != x_mod.dim(gen.degree)) {
      rep.fail("rho(" + gen.name + ") has the wrong length");
      continue;
    }
    Vector lhs = x_mod.differential(gen.degree) * s.rho.images[g];
    Vector rhs = apply(s.rho, s.module, x_mod, gen.d, gen.degree + 1);
    if (lhs != rhs) rep.fail("rho does not commute with d on " + gen.name);
  }
  return rep;
}

inline KSState ks_start(const FreeDgModule& base, const FreeToTabulated& phi, const DgModule& x_mod) {
  if (phi.degree != 0) fail_validation("KS-factorization needs a degree 0 map");
  if (phi.images.size() != base.size()) fail_validation("phi must give one image per base generator");
  for (std::size_t g = 0; g < base.size(); ++g)
    if (phi.images[g].size() != x_mod.dim(base.generators[g].degree))
      fail_validation("phi(" + base.generators[g].name + ") has the wrong length");
  KSState s;
  s.module = base;
  s.rho = phi;
  s.base_size = base.size();
  s.base_images = phi.images;
  return s;
}

/// One batch V(n, q) = H^{n+1}(N(n, q-1), X). A nonempty batch is adjoined
/// with dv = t_v and rho(v) = x_v; an empty one moves on to degree n + 1.
inline KSState ks_step(const KSState& in, const DgModule& x_mod, const KSOptions& opt = {},
                       std::mt19937_64* rng = nullptr) {
  KSState s = in;
  const int n = s.stage.n;
  if (n + 1 > x_mod.cap) return s;
  if (s.stage.q > opt.max_batches)
    fail_inconclusive("more than " + std::to_string(opt.max_batches) + " batches in degree " + std::to_string(n));
  RelativeCohomology rel = relative_cohomology(s.module, s.rho, x_mod, n, rng);
  if (rel.classes.empty()) {
    s.stage = Stage{n + 1, 1};
  } else {
    KSBatch batch{s.stage, {}};
    int count = 0;
    for (std::size_t g = s.base_size; g < s.module.size(); ++g)
      if (s.module.generators[g].degree == n) ++count;
    for (auto& c : rel.classes) {
      std::string name;
      do {
        name = "v" + std::to_string(n) + "_" + std::to_string(count++);
      } while (s.module.index_of(name) || s.module.algebra.index_of(name));
      s.module.generators.push_back(FreeGenerator{name, n, std::move(c.t), s.stage});
      s.rho.images.push_back(std::move(c.x));
      batch.names.push_back(name);
    }
    s.batches.push_back(std::move(batch));
    s.stage = Stage{n, s.stage.q + 1};
  }
  s.invariants = opt.check_invariants ? check_ks_invariants(s, x_mod) : CheckReport{};
  return s;
}

struct BettiRow {
  int degree = 0;
  std::size_t model = 0;
  std::size_t target = 0;
  std::size_t rank = 0;  // of rho_*
  bool iso() const { return model == target && rank == model; }
};

struct MinimalModelResult {
  FreeDgModule module;
  FreeToTabulated rho;
  std::size_t base_size = 0;
  int window_end = -1;  // rho_* is certified in degrees 0..window_end
  std::vector<BettiRow> betti;
  std::vector<KSBatch> batches;

  bool ok() const {
    return std::all_of(betti.begin(), betti.end(), [](const BettiRow& r) { return r.iso(); });
  }
  std::size_t generators_added() const { return module.size() - base_size; }
};

/// Betti comparison of rho: N -> X in degrees 0..cap(X)-1.
inline std::vector<BettiRow> compare_cohomology(const FreeDgModule& n_free, const FreeToTabulated& rho,
                                                const DgModule& x_mod) {
  const int k = x_mod.cap;
  FreeBasis b = free_basis(n_free, k);
  DgModule nm = materialize(n_free, k, &b);
  DgModuleMap r = materialize(rho, n_free, b, x_mod);
  auto hn = module_cohomology(nm);
  auto hx = module_cohomology(x_mod);
  std::vector<BettiRow> rows;
  for (int d = 0; d < k; ++d) {
    BettiRow row;
    row.degree = d;
    row.model = hn[static_cast<std::size_t>(d)].betti;
    row.target = hx[static_cast<std::size_t>(d)].betti;
    row.rank = rank(induced_map(r.block(d), hn[static_cast<std::size_t>(d)], hx[static_cast<std::size_t>(d)]));
    rows.push_back(row);
  }
  return rows;
}

/// Minimal KS-factorization M -> N -> X of phi: M -> X. Requires H^0(phi)
/// injective; rho_* is then an isomorphism in degrees below cap(X).
inline MinimalModelResult minimal_factorization(const FreeDgModule& base, const FreeToTabulated& phi,
                                                const DgModule& x_mod, const KSOptions& opt = {}) {
  validate_free(base);
  if (x_mod.cap < 1) fail_validation("target window must reach degree 1");
  KSState s = ks_start(base, phi, x_mod);

  FreeBasis b1 = free_basis(base, 1);
  DgModule m1 = materialize(base, 1, &b1);
  CohomologyGroup h0m = cohomology_at(m1.differential(-1), m1.differential(0), 0);
  CohomologyGroup h0x = cohomology_at(x_mod.differential(-1), x_mod.differential(0), 0);
  Matrix phi0 = induced_map(materialize(phi, base, b1, x_mod).block(0), h0m, h0x);
  auto lost = kernel_basis(phi0);
  if (!lost.empty()) {
    std::string cls;
    for (const auto& v : lost) {
      Vector chain = Matrix::from_columns(h0m.representatives, m1.dim(0)) * v;
      if (!cls.empty()) cls += "; ";
      cls += module_element_string(from_vector(chain, b1, 0), base.algebra, base.names());
    }
    fail_precondition("H^0(phi) is not injective; kernel spanned by: " + cls);
  }

  std::optional<std::mt19937_64> rng;
  if (opt.seed) rng.emplace(*opt.seed);
  while (s.stage.n + 1 <= x_mod.cap) {
    s = ks_step(s, x_mod, opt, rng ? &*rng : nullptr);
    if (!s.invariants.ok) fail_validation("KS invariant violated at stage " + to_string(s.stage) + ": " + s.invariants.first());
  }

  MinimalModelResult out;
  out.module = std::move(s.module);
  out.rho = std::move(s.rho);
  out.base_size = s.base_size;
  out.window_end = x_mod.cap - 1;
  out.batches = std::move(s.batches);
  out.betti = compare_cohomology(out.module, out.rho, x_mod);
  return out;
}

inline MinimalModelResult minimal_model(const DgModule& x_mod, const KSOptions& opt = {}) {
  return minimal_factorization(FreeDgModule{x_mod.algebra, {}}, FreeToTabulated{0, {}}, x_mod, opt);
}

/// Cohomology of the homotopy fiber, read off a minimal model as its
/// generator counts (base generators excluded).
inline GradedDims fiber_cohomology(const FreeDgModule& model, int window_end, std::size_t first_generator = 0) {
  CheckReport rep = verify_minimal(model, first_generator);
  if (!rep.ok) fail_precondition("fiber cohomology needs a minimal model: " + rep.first());
  if (window_end < 0) return GradedDims();
  GradedDims out(static_cast<std::size_t>(window_end));
  for (std::size_t g = first_generator; g < model.size(); ++g)
    if (model.generators[g].degree <= window_end) ++out[model.generators[g].degree];
  return out;
}

/// Generator indices in stage order (declared or derived), ties by position.
inline std::vector<std::size_t> stage_order(const FreeDgModule& f) {
  std::vector<Stage> stages;
  bool declared = std::all_of(f.generators.begin(), f.generators.end(), [](const auto& g) { return g.stage.has_value(); });
  if (declared) {
    for (const auto& g : f.generators) stages.push_back(*g.stage);
  } else {
    auto s = derive_stages(f);
    if (!s) fail_precondition("module has no stage filtration");
    stages = *s;
  }
  std::vector<std::size_t> order(f.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) { return stages[l] < stages[r]; });
  return order;
}

inline DgModuleMap truncate(const DgModuleMap& f, int window) {
  DgModuleMap out = f;
  out.window = std::min(f.window, window);
  out.blocks.resize(static_cast<std::size_t>(std::max(out.window + 1, 0)));
  return out;
}

struct SectionLift {
  FreeToTabulated sigma;  // N -> X
  int window_end = -1;
  DgModuleMap sigma_map;  // materialized on degrees 0..window_end
  CheckReport check;      // rho sigma = id, sigma a chain map, A-linear
};

/// For a quasi-isomorphism rho: X -> N onto a minimal N (materialized on
/// the basis `nb`), builds sigma: N -> X with rho sigma = id, generator by
/// generator in stage order: sigma(g) solves rho x = g, dx = sigma(dg).
inline SectionLift lift_section(const DgModuleMap& rho, const DgModule& x_mod, const FreeDgModule& n_free,
                                const FreeBasis& nb) {
  if (rho.degree != 0) fail_validation("lift_section needs a degree 0 map");
  CheckReport minimal = verify_minimal(n_free);
  if (!minimal.ok) fail_precondition("lift_section needs a minimal target: " + minimal.first());
  SectionLift out;
  out.window_end = std::min({x_mod.cap - 1, rho.window, nb.cap});
  out.sigma.images.resize(n_free.size());
  const Monomial unit(n_free.algebra.size(), 0);
  for (std::size_t g = 0; g < n_free.size(); ++g) out.sigma.images[g] = Vector(x_mod.dim(n_free.generators[g].degree));
  for (std::size_t g : stage_order(n_free)) {
    const auto& gen = n_free.generators[g];
    const int k = gen.degree;
    if (k > out.window_end) continue;
    Matrix a = vstack(rho.block(k), x_mod.differential(k));
    Vector target = unit_vector(nb.dim(k), nb.index[static_cast<std::size_t>(k)].at({g, unit}));
    Vector rhs = concat(target, apply(out.sigma, n_free, x_mod, gen.d, k + 1));
    auto x = solve(a, rhs);
    if (!x)
      fail_precondition("no lift for " + gen.name + ": rho is not a surjective quasi-isomorphism in degree " +
                        std::to_string(k));
    out.sigma.images[g] = *x;
  }
  FreeBasis sb = free_basis(n_free, out.window_end);
  out.sigma_map = materialize(out.sigma, n_free, sb, x_mod);
  DgModule ns = materialize(n_free, std::max(out.window_end, 0), &sb);
  out.check = check_map(out.sigma_map, ns, x_mod);
  for (int k = 0; k <= out.window_end; ++k)
    if (!(rho.block(k) * out.sigma_map.block(k) == Matrix::identity(nb.dim(k))))
      out.check.fail("rho sigma != id in degree " + std::to_string(k));
  return out;
}

struct MorphismModel {
  FreeMap phi_prime;  // M' -> N'
  FreeToTabulated h;  // M' -> N, degree p - 1
  int source_window = -1;  // generators of degree <= source_window are modelled
  bool homotopy_ok = false;
  CheckReport check;
};

/// Given phi: M -> N of degree p and models rho_M: M' -> M, rho_N: N' -> N,
/// finds phi': M' -> N' and h with dh + (-1)^p hd = rho_N phi' - phi rho_M,
/// generator by generator, until the windows stop covering a degree.
inline MorphismModel model_of_morphism(const DgModuleMap& phi, const DgModule& m_mod, const DgModule& n_mod,
                                       const FreeDgModule& m_free, const FreeToTabulated& rho_m,
                                       const FreeDgModule& n_free, const FreeToTabulated& rho_n) {
  const int p = phi.degree;
  if (rho_m.degree != 0 || rho_n.degree != 0) fail_validation("model maps must have degree 0");
  if (rho_m.images.size() != m_free.size() || rho_n.images.size() != n_free.size())
    fail_validation("model maps must give one image per generator");
  const Sullivan& a = m_free.algebra;
  const Rational sp = p % 2 == 0 ? 1 : -1;
  const int ncap = n_mod.cap;
  FreeBasis nb = free_basis(n_free, ncap);
  DgModule nm = materialize(n_free, ncap, &nb);
  DgModuleMap rn = materialize(rho_n, n_free, nb, n_mod);

  MorphismModel out;
  out.phi_prime.degree = p;
  out.phi_prime.images.assign(m_free.size(), {});
  out.h.degree = p - 1;
  for (std::size_t g = 0; g < m_free.size(); ++g) {
    int t = m_free.generators[g].degree + p - 1;
    out.h.images.push_back(Vector(n_mod.dim(t)));
  }
  int covered = -1;
  for (std::size_t g : stage_order(m_free)) {
    const auto& gen = m_free.generators[g];
    const int k = gen.degree;
    const int t = k + p;
    if (k > phi.window || k > m_mod.cap || t + 1 > ncap || t > rn.window) break;
    covered = std::max(covered, k);
    if (t < 0) continue;
    Matrix dn = nm.differential(t);
    Matrix dN = n_mod.differential(t - 1).scaled(-1);
    Matrix sys = block2x2(dn, Matrix(dn.rows(), dN.cols()), rn.block(t), dN);
    Vector c1 = sp * to_vector(apply(out.phi_prime, a, gen.d), nb, n_free, t + 1);
    Vector c2 = phi.block(k) * rho_m.images.at(g) + sp * apply(out.h, m_free, n_mod, gen.d, t);
    auto sol = solve(sys, concat(c1, c2));
    if (!sol) fail_precondition("cannot model the morphism on " + gen.name + "; are the inputs minimal models?");
    Vector y(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(dn.cols()));
    Vector z(sol->begin() + static_cast<std::ptrdiff_t>(dn.cols()), sol->end());
    out.phi_prime.images[g] = from_vector(y, nb, t);
    out.h.images[g] = z;
  }
  out.source_window = covered;

  // Verification on the modelled window.
  const int w = covered;
  if (w < 0) {
    out.homotopy_ok = true;
    return out;
  }
  FreeBasis sb = free_basis(m_free, w + 1);
  DgModule ms = materialize(m_free, w + 1, &sb);
  DgModuleMap rm = truncate(materialize(rho_m, m_free, sb, m_mod), w);
  DgModuleMap pp = truncate(materialize(out.phi_prime, m_free, sb, n_free, nb), w);
  DgModuleMap hh = materialize(out.h, m_free, sb, n_mod);
  DgModuleMap lhs = compose(truncate(phi, w), rm, &n_mod);
  DgModuleMap rhs = compose(rn, pp, &n_mod);
  out.homotopy_ok = p % 2 == 0 ? is_homotopy(hh, lhs, rhs, ms, n_mod) : is_homotopy(hh, rhs, lhs, ms, n_mod);
  if (!out.homotopy_ok) out.check.fail("homotopy identity fails");
  out.check.merge(check_map(pp, ms, nm), "phi': ");
  return out;
}

struct ConeQuisRow {
  int degree = 0;
  std::size_t source = 0, target = 0, rank = 0;
  bool iso() const { return source == target && rank == source; }
};

struct ConeQuis {
  std::vector<Matrix> blocks;  // Phi_n: C'^n -> C^n
  int window_end = -1;         // quis certified in degrees 0..window_end
  bool commutes = false;
  std::vector<ConeQuisRow> rows;
  bool quis() const {
    return std::all_of(rows.begin(), rows.end(), [](const ConeQuisRow& r) { return r.iso(); });
  }
};

/// Phi = [[rho_N, h], [0, rho_M]] from the cone of phi' to the cone of phi,
/// checked against both cone differentials and on cohomology. No check of
/// the homotopy itself; see cone_quis.
inline ConeQuis cone_map(const DgModuleMap& phi, const DgModule& m_mod, const DgModule& n_mod, const DgModuleMap& phi_prime,
                         const DgModule& mp_mod, const DgModule& np_mod, const DgModuleMap& rho_m,
                         const DgModuleMap& rho_n, const DgModuleMap& h) {
  const int p = phi.degree;
  DgModule target = cone(phi, n_mod, m_mod);
  DgModule source = cone(phi_prime, np_mod, mp_mod);
  int end = std::min({target.cap, source.cap, rho_n.window, rho_m.window + p - 1, h.window + p - 1});
  ConeQuis out;
  for (int n = 0; n <= end; ++n) {
    int k = n + 1 - p;
    Matrix blk(target.dim(n), source.dim(n));
    blk.set_block(0, 0, rho_n.block(n));
    if (k >= 0) {
      blk.set_block(0, np_mod.dim(n), h.block(k));
      blk.set_block(n_mod.dim(n), np_mod.dim(n), rho_m.block(k));
    }
    out.blocks.push_back(blk);
  }
  out.commutes = true;
  for (int n = 0; n + 1 <= end; ++n)
    if (!(target.differential(n) * out.blocks[static_cast<std::size_t>(n)] ==
          out.blocks[static_cast<std::size_t>(n + 1)] * source.differential(n)))
      out.commutes = false;
  out.window_end = end - 1;
  if (!out.commutes) return out;
  for (int n = 0; n <= out.window_end; ++n) {
    CohomologyGroup hs = cohomology_at(source.differential(n - 1), source.differential(n), n);
    CohomologyGroup ht = cohomology_at(target.differential(n - 1), target.differential(n), n);
    ConeQuisRow row{n, hs.betti, ht.betti, rank(induced_map(out.blocks[static_cast<std::size_t>(n)], hs, ht))};
    out.rows.push_back(row);
  }
  return out;
}

/// cone_map behind the precondition that h is a homotopy from phi rho_M to
/// rho_N phi' in the sense produced by model_of_morphism.
inline ConeQuis cone_quis(const DgModuleMap& phi, const DgModule& m_mod, const DgModule& n_mod,
                          const DgModuleMap& phi_prime, const DgModule& mp_mod, const DgModule& np_mod,
                          const DgModuleMap& rho_m, const DgModuleMap& rho_n, const DgModuleMap& h) {
  const int p = phi.degree;
  int w = std::min({phi_prime.window, rho_m.window, h.window - 1});
  DgModuleMap lhs = compose(truncate(phi, w), truncate(rho_m, w), &n_mod);
  DgModuleMap rhs = compose(rho_n, truncate(phi_prime, w), &n_mod);
  bool ok = p % 2 == 0 ? is_homotopy(h, lhs, rhs, mp_mod, n_mod) : is_homotopy(h, rhs, lhs, mp_mod, n_mod);
  if (!ok) fail_precondition("cone_quis: h is not a homotopy between phi rho_M and rho_N phi'");
  return cone_map(phi, m_mod, n_mod, phi_prime, mp_mod, np_mod, rho_m, rho_n, h);
}

/// Stages W(n, q) of the cone N (+)_phi M of minimal modules: N keeps its
/// stages and the generator (0, g), g of stage (m, r), sits at
/// (m + p - 1, r + Q) with Q the last stage of N in that degree.
inline std::vector<Stage> cone_stages(const std::vector<Stage>& n_stages, const std::vector<Stage>& m_stages, int p) {
  std::vector<Stage> out = n_stages;
  for (const auto& s : m_stages) {
    int n = s.n + p - 1;
    int q = 0;
    for (const auto& t : n_stages)
      if (t.n == n) q = std::max(q, t.q);
    out.push_back(Stage{n, s.q + q});
  }
  return out;
}

}  // namespace dgmm
