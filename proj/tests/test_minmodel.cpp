#include <catch_amalgamated.hpp>

#include "dgmm/cli.hpp"
#include "dgmm/circle.hpp"
#include "dgmm/fixtures.hpp"
#include "dgmm/minmodel.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace dgmm;

namespace {

std::vector<long long> model_betti(const MinimalModelResult& r, int cap) {
  return oracle::betti(materialize(r.module, cap));
}

// Materialized inputs of cone_quis for a modelled morphism.
struct ConeInputs {
  DgModule ms, ns;
  DgModuleMap rho_m, rho_n, phi_prime, h;
};

ConeInputs cone_inputs(const DgModule& src, const DgModule& dst, const MinimalModelResult& rm,
                       const MinimalModelResult& rn, const FreeMap& phi_prime, const FreeToTabulated& h, int w) {
  ConeInputs c;
  FreeBasis sb = free_basis(rm.module, w + 1), nb = free_basis(rn.module, dst.cap);
  c.ms = materialize(rm.module, w + 1, &sb);
  c.ns = materialize(rn.module, dst.cap, &nb);
  c.rho_m = truncate(materialize(rm.rho, rm.module, sb, src), w);
  c.rho_n = materialize(rn.rho, rn.module, nb, dst);
  c.phi_prime = truncate(materialize(phi_prime, rm.module, sb, rn.module, nb), w);
  c.h = materialize(h, rm.module, sb, dst);
  return c;
}

}  // namespace

TEST_CASE("minimal model of the cohomology of S^4", "[minmodel]") {
  DgModule x = cli::s4_cohomology(13);
  MinimalModelResult r = minimal_model(x);
  REQUIRE(r.ok());
  CHECK(r.window_end == 12);
  CHECK(verify_minimal(r.module).ok);
  // Same generator pattern as the cone model of the total space, unit included.
  ConeModel total = model_of_total_space(fixtures::s4_hopf(), 12);
  GradedDims cone_counts = generator_counts(total.module, 12);
  CHECK(generator_counts(r.module, 12) == cone_counts);
  CHECK(r.module.generators[0].name == "v0_0");
  CHECK(r.module.element_string(r.module.generators[1].d) == "a*v0_0");
  CHECK(model_betti(r, 13) == oracle::betti(x));
}

TEST_CASE("models agree with the reference cohomology", "[minmodel][property]") {
  gen::Rng rng(31);
  for (int t = 0; t < 60; ++t) {
    Sullivan a = t % 2 == 0 ? gen::exterior_a(3) : gen::polynomial_e();
    DgModule x = gen::random_module(rng, a, 8, 4);
    MinimalModelResult r = minimal_model(x);
    INFO("trial " << t);
    REQUIRE(r.ok());
    REQUIRE(verify_minimal(r.module).ok);
    auto hn = model_betti(r, 8), hx = oracle::betti(x);
    REQUIRE(hn == hx);
    for (const auto& row : r.betti) REQUIRE(row.target == hx[static_cast<std::size_t>(row.degree)]);
  }
}

TEST_CASE("a minimal module is its own model", "[minmodel][property]") {
  // Generator counts are invariants of the minimal model, so a model of a
  // materialized minimal module reproduces them below the cap.
  gen::Rng rng(32);
  for (int t = 0; t < 40; ++t) {
    Sullivan a = t % 2 == 0 ? gen::exterior_a(3) : gen::polynomial_e();
    MinimalModelResult first = minimal_model(gen::random_module(rng, a, 8, 3));
    DgModule x = gen::scramble(rng, materialize(first.module, 8));
    MinimalModelResult again = minimal_model(x);
    REQUIRE(again.ok());
    REQUIRE(generator_counts(again.module, 7) == generator_counts(first.module, 7));
  }
}

TEST_CASE("randomized section choices give isomorphic models", "[minmodel][property]") {
  gen::Rng rng(33);
  for (int t = 0; t < 20; ++t) {
    DgModule x = gen::random_module(rng, gen::exterior_a(3), 8, 4);
    MinimalModelResult plain = minimal_model(x);
    KSOptions opt;
    opt.seed = 1000 + static_cast<std::uint64_t>(t);
    MinimalModelResult seeded = minimal_model(x, opt);
    REQUIRE(seeded.ok());
    REQUIRE(generator_counts(seeded.module, 8) == generator_counts(plain.module, 8));
    REQUIRE(fiber_cohomology(seeded.module, 7) == fiber_cohomology(plain.module, 7));
  }
}

TEST_CASE("factorization needs H^0 injective", "[minmodel]") {
  Sullivan a = gen::exterior_a(3);
  DgModule x = make_module(a, 6, {{"x0"}});
  FreeDgModule base{a, {{"m", 0, {}, Stage{0, 1}}}};
  FreeToTabulated zero{0, {Vector{0}}};
  try {
    minimal_factorization(base, zero, x);
    FAIL("expected a precondition failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
    CHECK(std::string(e.what()).find("m") != std::string::npos);
  }
  FreeToTabulated id{0, {Vector{1}}};
  MinimalModelResult r = minimal_factorization(base, id, x);
  REQUIRE(r.ok());
  // X has a x0 = 0, so the class a m must be killed.
  REQUIRE(r.generators_added() >= 1);
  CHECK(r.module.element_string(r.module.generators[1].d) == "a*m");
}

TEST_CASE("sections of a surjective model map", "[minmodel][property]") {
  gen::Rng rng(34);
  for (int t = 0; t < 30; ++t) {
    Sullivan a = t % 2 == 0 ? gen::exterior_a(3) : gen::polynomial_e();
    MinimalModelResult mm = minimal_model(gen::random_module(rng, a, 8, 3));
    FreeBasis nb = free_basis(mm.module, 8);
    DgModule nm = materialize(mm.module, 8, &nb);
    DgModule xs = gen::direct_sum(nm, gen::block(a, 8, 3, rng.uniform(0, 7), 9));
    std::vector<Matrix> p;
    DgModule x = gen::scramble(rng, xs, &p);
    DgModuleMap rho = zero_map(x, nm, 0);
    for (int k = 0; k <= rho.window; ++k) {
      Matrix proj(nm.dim(k), xs.dim(k));
      proj.set_block(0, 0, Matrix::identity(nm.dim(k)));
      rho.blocks[static_cast<std::size_t>(k)] = proj * oracle::inverse(p[static_cast<std::size_t>(k)]);
    }
    SectionLift s = lift_section(rho, x, mm.module, nb);
    REQUIRE(s.check.ok);
    REQUIRE(s.window_end == 7);
  }
}

TEST_CASE("lifting fails without surjectivity", "[minmodel]") {
  // rho: 0 -> N is not onto, so no section exists.
  Sullivan a = gen::exterior_a(3);
  FreeDgModule n{a, {{"v", 0, {}, Stage{0, 1}}}};
  FreeBasis nb = free_basis(n, 6);
  DgModule nm = materialize(n, 6, &nb);
  DgModule x = make_module(a, 6, {});
  DgModuleMap rho = zero_map(x, nm, 0);
  CHECK_THROWS_AS(lift_section(rho, x, n, nb), Error);
}

TEST_CASE("models of random morphisms", "[minmodel][property]") {
  gen::Rng rng(35);
  for (int t = 0; t < 30; ++t) {
    Sullivan a = t % 2 == 0 ? gen::exterior_a(3) : gen::polynomial_e();
    int p = rng.uniform(-1, 3);
    gen::RandomMap m = gen::random_map(rng, a, 8, p);
    MinimalModelResult rm = minimal_model(m.src), rn = minimal_model(m.dst);
    MorphismModel mod = model_of_morphism(m.phi, m.src, m.dst, rm.module, rm.rho, rn.module, rn.rho);
    INFO("trial " << t << " p = " << p);
    REQUIRE(mod.homotopy_ok);
    REQUIRE(mod.check.ok);
    REQUIRE(check_free_map(mod.phi_prime, rm.module, rn.module).ok);

    if (mod.source_window < 1) continue;
    ConeInputs c = cone_inputs(m.src, m.dst, rm, rn, mod.phi_prime, mod.h, mod.source_window);
    ConeQuis q = cone_quis(m.phi, m.src, m.dst, c.phi_prime, c.ms, c.ns, c.rho_m, c.rho_n, c.h);
    REQUIRE(q.commutes);
    REQUIRE(q.quis());
  }
}

TEST_CASE("a wrong homotopy is caught", "[minmodel]") {
  // phi: X -> X[-1] the identity matrices, X the cohomology of S^4.
  DgModule x = cli::s4_cohomology(9), y = shift(x, 1);
  DgModuleMap phi = zero_map(x, y, 1);
  for (int k = 0; k <= phi.window; ++k) phi.blocks[static_cast<std::size_t>(k)] = Matrix::identity(x.dim(k));
  REQUIRE(check_map(phi, x, y).ok);
  MinimalModelResult rm = minimal_model(x), rn = minimal_model(y);
  MorphismModel mod = model_of_morphism(phi, x, y, rm.module, rm.rho, rn.module, rn.rho);
  REQUIRE(mod.homotopy_ok);
  const int w = mod.source_window;
  REQUIRE(w >= 4);

  ConeInputs good = cone_inputs(x, y, rm, rn, mod.phi_prime, mod.h, w);
  ConeQuis q = cone_quis(phi, x, y, good.phi_prime, good.ms, good.ns, good.rho_m, good.rho_n, good.h);
  CHECK(q.commutes);
  CHECK(q.quis());

  // Dropping phi'(v0_0) breaks the homotopy identity on the unit class.
  FreeMap bad_phi = mod.phi_prime;
  bad_phi.images[0].clear();
  ConeInputs bad = cone_inputs(x, y, rm, rn, bad_phi, mod.h, w);
  CHECK_THROWS_AS(cone_quis(phi, x, y, bad.phi_prime, bad.ms, bad.ns, bad.rho_m, bad.rho_n, bad.h), Error);
  ConeQuis unchecked = cone_map(phi, x, y, bad.phi_prime, bad.ms, bad.ns, bad.rho_m, bad.rho_n, bad.h);
  CHECK_FALSE((unchecked.commutes && unchecked.quis()));
}
