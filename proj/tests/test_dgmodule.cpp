#include <catch_amalgamated.hpp>

#include "dgmm/dgmodule.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace dgmm;

namespace {

std::vector<long long> library_betti(const DgModule& m) { return betti(m).dims; }

}  // namespace

TEST_CASE("generated modules satisfy the axioms", "[dgmodule][property]") {
  gen::Rng rng(11);
  for (int t = 0; t < 100; ++t) {
    Sullivan a = t % 2 == 0 ? gen::exterior_a(3) : gen::polynomial_e();
    DgModule m = gen::random_module(rng, a, 8, 4);
    CheckReport r = verify_dgmodule(m);
    INFO("trial " << t << ": " << r.first());
    REQUIRE(r.ok);
  }
}

TEST_CASE("cohomology matches the reference and ignores the basis", "[dgmodule][property]") {
  gen::Rng rng(12);
  for (int t = 0; t < 100; ++t) {
    Sullivan a = t % 2 == 0 ? gen::exterior_a(3) : gen::polynomial_e();
    DgModule m = gen::random_module(rng, a, 8, 4);
    REQUIRE(library_betti(m) == oracle::betti(m));
    REQUIRE(library_betti(gen::scramble(rng, m)) == oracle::betti(m));
  }
}

TEST_CASE("block cohomology", "[dgmodule]") {
  Sullivan a = gen::exterior_a(3);
  // Free pair y -> z: acyclic.
  CHECK(oracle::betti(gen::block(a, 8, 3, 1, 0)) == std::vector<long long>(8, 0));
  // Twisted block x, a x, y with dy = a x: H = Q in the degree of x.
  std::vector<long long> want(8, 0);
  want[2] = 1;
  CHECK(library_betti(gen::block(a, 8, 4, 2, 0)) == want);
}

TEST_CASE("violations name a witness", "[dgmodule]") {
  Sullivan a = gen::exterior_a(3);
  DgModule m = gen::block(a, 8, 2, 0, 0);  // x, a x
  REQUIRE(verify_dgmodule(m).ok);

  // d(a x) = q while -a dx = 0.
  DgModule bad_leibniz = gen::direct_sum(m, gen::block(a, 8, 0, 4, 1));
  bad_leibniz.d[3](0, 0) = 1;
  CheckReport r = verify_dgmodule(bad_leibniz);
  CHECK_FALSE(r.ok);
  CHECK(r.first().find("Leibniz") != std::string::npos);

  DgModule bad_dd = gen::direct_sum(gen::block(a, 8, 0, 0, 0), gen::direct_sum(gen::block(a, 8, 0, 1, 1), gen::block(a, 8, 0, 2, 2)));
  bad_dd.d[0](0, 0) = 1;
  bad_dd.d[1](0, 0) = 1;
  r = verify_dgmodule(bad_dd);
  CHECK_FALSE(r.ok);
  CHECK(r.first().find("d^2") != std::string::npos);

  DgModule bad_shape = m;
  bad_shape.d[0] = Matrix(3, 3);
  CHECK_FALSE(verify_dgmodule(bad_shape).ok);
}

TEST_CASE("shift signs and round trips", "[dgmodule][property]") {
  gen::Rng rng(13);
  Sullivan a = gen::exterior_a(3);
  for (int t = 0; t < 50; ++t) {
    DgModule m = gen::random_module(rng, a, 8, 3);
    for (int p = 0; p <= 3; ++p) {
      DgModule s = shift(m, p);
      REQUIRE(verify_dgmodule(s).ok);
      REQUIRE(s.cap == m.cap + p);
      REQUIRE(shift(s, -p) == m);
      // The identity Y -> Y[-p] is a degree-p chain map.
      DgModuleMap id = zero_map(m, s, p);
      for (int k = 0; k <= id.window; ++k) id.blocks[static_cast<std::size_t>(k)] = Matrix::identity(m.dim(k));
      REQUIRE(check_map(id, m, s).ok);
    }
    // Shifting below degree zero is refused when it would lose a class.
    if (m.dim(0) != 0) REQUIRE_THROWS_AS(shift(m, -1), Error);
  }
}

TEST_CASE("chain map checks catch sign errors", "[dgmodule]") {
  Sullivan a = gen::exterior_a(3);
  DgModule m = gen::block(a, 8, 3, 0, 0);  // free pair: y, z = dy, a y, a z
  DgModule s = shift(m, 1);
  DgModuleMap id = zero_map(m, s, 1);
  for (int k = 0; k <= id.window; ++k) id.blocks[static_cast<std::size_t>(k)] = Matrix::identity(m.dim(k));
  CHECK(check_map(id, m, s).ok);
  // Against the unshifted signs the same matrices fail.
  DgModule wrong = s;
  for (auto& d : wrong.d) d = d.scaled(-1);
  CHECK_FALSE(check_map(id, m, wrong).ok);
}

TEST_CASE("cone long exact sequence on random maps", "[dgmodule][property]") {
  gen::Rng rng(14);
  for (int t = 0; t < 40; ++t) {
    Sullivan a = t % 2 == 0 ? gen::exterior_a(3) : gen::polynomial_e();
    int p = rng.uniform(-1, 3);
    gen::RandomMap m = gen::random_map(rng, a, 7, p);
    REQUIRE(check_map(m.phi, m.src, m.dst).ok);
    DgModule c = cone(m.phi, m.dst, m.src);
    REQUIRE(verify_dgmodule(c).ok);
    ConeLes les = cone_les(m.phi, m.dst, m.src);
    REQUIRE(les.exact());
    for (const auto& row : les.rows) REQUIRE(row.h_cone == row.rank_incl + row.rank_proj);
  }
}

TEST_CASE("cone of an isomorphism is acyclic", "[dgmodule][property]") {
  gen::Rng rng(15);
  for (int t = 0; t < 30; ++t) {
    Sullivan a = t % 2 == 0 ? gen::exterior_a(3) : gen::polynomial_e();
    DgModule m = shift(gen::random_module(rng, a, 7, 3), 1);
    DgModuleMap id = identity_map(m);
    DgModule c = cone(id, m, m);
    auto b = oracle::betti(c);
    for (int k = 0; k < c.cap; ++k) REQUIRE(b[static_cast<std::size_t>(k)] == 0);
  }
}

TEST_CASE("homotopies", "[dgmodule]") {
  Sullivan a = gen::exterior_a(3);
  DgModule m = gen::block(a, 8, 3, 1, 0);  // acyclic free pair y -> z in degrees 1, 2
  // The identity of an acyclic module is null-homotopic: h(z) = y, h(a z) = -a y.
  DgModuleMap h = zero_map(m, m, -1);
  h.blocks[2](0, 0) = 1;
  h.blocks[5](0, 0) = -1;
  DgModuleMap zero = zero_map(m, m, 0), id = identity_map(m);
  CHECK(is_homotopy(h, zero, id, m, m));
  h.blocks[5](0, 0) = 1;
  CHECK_FALSE(is_homotopy(h, zero, id, m, m));
}

TEST_CASE("change of basis preserves structure", "[dgmodule][property]") {
  gen::Rng rng(16);
  for (int t = 0; t < 30; ++t) {
    DgModule m = gen::random_module(rng, gen::polynomial_e(), 8, 4);
    std::vector<Matrix> p;
    DgModule s = gen::scramble(rng, m, &p);
    REQUIRE(verify_dgmodule(s).ok);
    DgModuleMap f = zero_map(m, s, 0);
    for (int k = 0; k <= f.window; ++k) f.blocks[static_cast<std::size_t>(k)] = p[static_cast<std::size_t>(k)];
    REQUIRE(check_map(f, m, s).ok);
  }
}
