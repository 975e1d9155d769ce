#include <catch_amalgamated.hpp>

#include "dgmm/circle.hpp"
#include "dgmm/fixtures.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace dgmm;

namespace {

GradedDims dims(std::vector<long long> head, int window_end) {
  head.resize(static_cast<std::size_t>(window_end) + 1, 0);
  return GradedDims(head);
}

const FreeGenerator& generator(const ConeModel& m, const std::string& name) {
  auto i = m.module.index_of(name);
  REQUIRE(i);
  return m.module.generators[*i];
}

}  // namespace

TEST_CASE("basic data validation", "[circle]") {
  CHECK(check_basic_data(fixtures::s4_hopf()).ok);
  BasicData d = fixtures::s4_hopf();
  d.e_prime.degree = 4;
  CHECK_FALSE(check_basic_data(d).ok);
  CHECK_THROWS_AS(require_valid(d), Error);

  BasicData v = fixtures::s4_hopf();
  v.variant = Variant::SemifreeS3;
  CheckReport r = check_basic_data(v);
  CHECK_FALSE(r.ok);
  CHECK(r.first().find("Euler degree") != std::string::npos);

  BasicData other = fixtures::s4_hopf();
  other.relative.algebra = gen::polynomial_e();
  CHECK_FALSE(check_basic_data(other).ok);

  CHECK(parse_variant("semifree_s3") == Variant::SemifreeS3);
  CHECK_THROWS_AS(parse_variant("torus"), Error);
}

TEST_CASE("S^4 cone models", "[circle]") {
  BasicData d = fixtures::s4_hopf();
  ConeModel total = model_of_total_space(d, 12), fixed = model_of_fixed_set(d, 12);
  CHECK(total.status() == Status::Pass);
  CHECK(fixed.status() == Status::Pass);
  CHECK(total.betti == dims({1, 0, 0, 0, 1}, 11));
  CHECK(fixed.betti == dims({2}, 11));
  CHECK(generator(total, "c0").degree == 2);
  CHECK(total.module.element_string(generator(total, "c0").d) == "a");
  CHECK(total.module.element_string(generator(total, "c5").d) == "a*c3");
  CHECK(fixed.module.element_string(generator(fixed, "g1").d) == "a");
  CHECK(fixed.module.element_string(generator(fixed, "g0").d) == "0");
  // The models are correct as modules: compare with the reference cohomology.
  CHECK(oracle::betti(materialize(total.module, 12)) == total.betti.dims);
}

TEST_CASE("S^4 equivariant data", "[circle]") {
  BasicData d = fixtures::s4_hopf();
  ConeModel total = model_of_total_space(d, 12), fixed = model_of_fixed_set(d, 12);
  ConeModel eq = equivariant_model(d, 12);
  CHECK(eq.status() == Status::Pass);
  CHECK(eq.module.element_string(generator(eq, "c1").d) == "a*e");
  EquivariantData ed = equivariant_data(d);
  CHECK(extension_of_scalars_check(eq, total, ed.e_index).ok);
  EquivariantLesReport les = equivariant_les(d, eq);
  CHECK(les.les.exact());
  CHECK(les.matches_model);
  SharedBasisReport sb = shared_basis_check(total, fixed);
  CHECK(sb.ok());
  PoincareReport p = poincare_relations(total, fixed, eq);
  CHECK(p.status() == Status::Pass);
  CHECK(p.p_pi.truncated(6).coeffs == std::vector<long long>{1, 0, 1, 0, 2, 0, 2});
  CHECK(p.p_iota.truncated(4).coeffs == std::vector<long long>{2, 0, 2, 0, 2});
  CHECK(p.p_p.truncated(6).coeffs == std::vector<long long>{1, 0, 2, 0, 4, 0, 6});
}

TEST_CASE("S^4 verdicts", "[circle]") {
  CircleReport rep = run_circle(fixtures::s4_hopf());
  CHECK(rep.status() == Status::Pass);
  REQUIRE(rep.formality);
  CHECK(rep.formality->formal);
  REQUIRE(rep.localization);
  CHECK(rep.localization->status == Status::Pass);
  CHECK(rep.localization->nilpotency == 2);
  REQUIRE(rep.dimc);
  CHECK_FALSE(rep.dimc->applicable);
  CHECK(rep.dimc->relation == "neither");
  CHECK_FALSE(rep.smith_gysin);
  CHECK_FALSE(rep.almost_free);
}

TEST_CASE("localization with other exponents", "[circle]") {
  BasicCohomology bc = basic_cohomology(fixtures::s4_hopf(), 12);
  for (int p = 1; p <= 3; ++p) {
    LocalizationReport l = localization_check(bc, p);
    CHECK(l.status == Status::Pass);
    CHECK(l.exponent == p);
  }
}

TEST_CASE("formality witness on the counterexample", "[circle]") {
  CircleReport rep = run_circle(fixtures::nonformal_synthetic());
  REQUIRE(rep.formality);
  CHECK_FALSE(rep.formality->formal);
  REQUIRE(rep.formality->witness);
  CHECK(*rep.formality->witness == "degree 3: [b0]");
  // Not formal is a verdict, not a failure.
  CHECK(rep.status() != Status::Fail);
}

TEST_CASE("CP^2", "[circle]") {
  CircleReport rep = run_circle(fixtures::cp2());
  CHECK(rep.status() == Status::Pass);
  CHECK(rep.total->betti == dims({1, 0, 1, 0, 1}, 11));
  CHECK(rep.fixed->betti == dims({2, 0, 1}, 11));
  REQUIRE(rep.dimc);
  CHECK(rep.dimc->relation == "plus_two");
  REQUIRE(rep.naive);
  CHECK(rep.naive->wedge);
  CHECK(rep.naive->algebra.ok);
}

TEST_CASE("CP^3 keeps the pattern", "[circle]") {
  CircleReport rep = run_circle(fixtures::cpn(3));
  CHECK(rep.status() == Status::Pass);
  CHECK(rep.total->betti == dims({1, 0, 1, 0, 1, 0, 1}, 11));
  CHECK(rep.fixed->betti == dims({2, 0, 1, 0, 1}, 11));
}

TEST_CASE("almost free Hopf action", "[circle]") {
  BasicData d = fixtures::almost_free_hopf();
  CircleReport rep = run_circle(d);
  CHECK_FALSE(rep.fixed);
  REQUIRE(rep.almost_free);
  CHECK(rep.almost_free->chain_iso.ok);
  CHECK(rep.almost_free->multiplicative.ok);
  CHECK(rep.almost_free->betti_cone == dims({1, 0, 0, 1}, 11));
  CHECK(rep.almost_free->betti_cone == rep.almost_free->betti_algebra);
  CHECK_THROWS_AS(model_of_fixed_set(d, 12), Error);
}

TEST_CASE("Smith-Gysin on the flow", "[circle]") {
  CircleReport rep = run_circle(fixtures::flow_s4());
  REQUIRE(rep.smith_gysin);
  CHECK(rep.smith_gysin->status() == Status::Pass);
  REQUIRE(rep.smith_gysin->rows.size() >= 3);
  const auto& r0 = rep.smith_gysin->rows[0];
  CHECK(r0.relative == 0);
  CHECK(r0.fixed == 2);
  CHECK(r0.total == 2);
  const auto& r2 = rep.smith_gysin->rows[2];
  CHECK(r2.relative == 1);
  CHECK(r2.total == 1);
}

TEST_CASE("semifree S^3 variant", "[circle]") {
  CircleReport rep = run_circle(fixtures::semifree_s3());
  CHECK(rep.status() == Status::Pass);
  CHECK(rep.total->betti == dims({1, 0, 0, 0, 0, 0, 0, 0, 1}, 11));
  CHECK(rep.fixed->betti == dims({2}, 11));
  CHECK_FALSE(rep.equivariant);
}

TEST_CASE("tabulated route reproduces the basic data", "[circle]") {
  TabulatedRoute r = basic_data_from_tabulated(fixtures::s4_tabulated());
  CHECK(r.status() == Status::Pass);
  CHECK(r.i_model.homotopy_ok);
  CHECK(r.e_model.homotopy_ok);
  CHECK(r.total_quis.quis());
  CHECK(r.fixed_quis.quis());
  CHECK(r.max_degree >= 8);
  CircleOptions opt;
  opt.max_degree = r.max_degree;
  CircleReport rep = run_circle(r.data, opt);
  CHECK(rep.status() == Status::Pass);
  CHECK(rep.total->betti == dims({1, 0, 0, 0, 1}, r.max_degree - 1));
}

TEST_CASE("windows are monotone", "[circle]") {
  // Verdicts found in a small window persist in larger ones.
  for (int n : {6, 8, 10, 12}) {
    CircleOptions opt;
    opt.max_degree = n;
    CircleReport rep = run_circle(fixtures::s4_hopf(n), opt);
    INFO("max_degree " << n);
    CHECK(rep.status() == Status::Pass);
    CHECK(rep.formality->formal);
    CHECK(rep.total->betti == dims({1, 0, 0, 0, 1}, n - 1));
  }
  CircleOptions small;
  small.max_degree = 3;
  CHECK_THROWS_AS(run_circle(fixtures::s4_hopf(3), small), Error);
}

TEST_CASE("invariants on random basic data", "[circle][property]") {
  gen::Rng rng(41);
  for (int t = 0; t < 40; ++t) {
    BasicData d = gen::random_basic_data(rng, 9);
    REQUIRE(check_basic_data(d).ok);
    const int cap = 10;
    ConeModel total = model_of_total_space(d, cap), fixed = model_of_fixed_set(d, cap);
    ConeModel eq = equivariant_model(d, cap);
    INFO("trial " << t);
    REQUIRE(total.status() == Status::Pass);
    REQUIRE(fixed.status() == Status::Pass);
    REQUIRE(eq.status() == Status::Pass);
    // Both cones contain the unit, so H^0 is at least one-dimensional.
    REQUIRE(total.betti.at(0) >= 1);
    REQUIRE(oracle::betti(materialize(total.module, cap)) == total.betti.dims);
    REQUIRE(oracle::betti(materialize(fixed.module, cap)) == fixed.betti.dims);
    REQUIRE(shared_basis_check(total, fixed).ok());
    REQUIRE(poincare_relations(total, fixed, eq).status() == Status::Pass);
    REQUIRE(extension_of_scalars_check(eq, total, equivariant_data(d).e_index).ok);
    EquivariantLesReport les = equivariant_les(d, eq);
    REQUIRE(les.les.exact());
    REQUIRE(les.matches_model);
  }
}
