// Runs the ten acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "dgmm/cli.hpp"
#include "dgmm/dgmm.hpp"
#include "support/gen.hpp"
#include "support/oracle.hpp"

using namespace dgmm;
using json = nlohmann::ordered_json;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

json circle_machine(const std::string& fixture) {
  std::ostringstream out, err;
  int code = cli::run({"circle", "--fixture", fixture, "--format", "machine"}, out, err);
  if (code != 0) throw std::runtime_error("dgmm circle exited " + std::to_string(code) + ": " + err.str());
  return json::parse(out.str());
}

struct Gen {
  std::string name;
  int degree;
  std::string d;
};

void check_table(Outcome& o, const json& gens, const std::vector<Gen>& want, std::size_t extra_allowed,
                 const std::function<bool(const json&)>& extra_ok) {
  o.require(gens.size() >= want.size() && gens.size() <= want.size() + extra_allowed,
            "unexpected generator count " + std::to_string(gens.size()));
  if (!o.ok) return;
  for (std::size_t i = 0; i < want.size(); ++i) {
    const auto& g = gens[i];
    o.require(g["name"] == want[i].name && g["degree"] == want[i].degree && g["d"] == want[i].d,
              "generator " + std::to_string(i) + " is " + g.dump() + ", want " + want[i].name + " deg " +
                  std::to_string(want[i].degree) + " d = " + want[i].d);
  }
  for (std::size_t i = want.size(); i < gens.size(); ++i) o.require(extra_ok(gens[i]), "extra generator " + gens[i].dump());
}

void check_betti(Outcome& o, const json& betti, const std::vector<long long>& want) {
  std::vector<long long> got = betti.get<std::vector<long long>>();
  o.require(got == want, "betti " + betti.dump());
}

std::vector<long long> padded(std::vector<long long> head, std::size_t n) {
  head.resize(n, 0);
  return head;
}

// The intro table of the S^4 total space: 1, c0 .. c9.
std::vector<Gen> s4_table(const std::string& prefix, const std::vector<int>& degrees, const std::string& d0,
                          const std::string& d1) {
  std::vector<Gen> out{{"1", 0, "0"}};
  for (std::size_t n = 0; n < degrees.size(); ++n) {
    std::string d = n == 0 ? d0 : n == 1 ? d1 : "a*" + prefix + std::to_string(n - 2);
    out.push_back({prefix + std::to_string(n), degrees[n], d});
  }
  return out;
}

Outcome criterion1() {
  Outcome o;
  json r = circle_machine("s4_hopf");
  const json& t = r["total_space"];
  auto want = s4_table("c", {2, 4, 4, 6, 6, 8, 8, 10, 10, 12}, "a", "0");
  // c10 sits in degree 12 under the same rule; it is the only generator allowed beyond the table.
  check_table(o, t["generators"], want, 1,
              [](const json& g) { return g["name"] == "c10" && g["degree"] == 12 && g["d"] == "a*c8"; });
  check_betti(o, t["betti"], padded({1, 0, 0, 0, 1}, 12));
  o.require(t["status"] == "pass", "total space checks " + t["checks"].dump());
  return o;
}

Outcome criterion2() {
  Outcome o;
  json r = circle_machine("s4_hopf");
  const json& f = r["fixed_set"];
  std::vector<Gen> want{{"1", 0, "0"}};
  for (int n = 0;; ++n) {
    int deg = 2 * ((n + 1) / 2);
    if (deg > 12) break;
    std::string d = n == 0 ? "0" : n == 1 ? "a" : "a*g" + std::to_string(n - 2);
    want.push_back({"g" + std::to_string(n), deg, d});
  }
  check_table(o, f["generators"], want, 0, [](const json&) { return false; });
  check_betti(o, f["betti"], padded({2}, 12));
  o.require(f["status"] == "pass", "fixed set checks " + f["checks"].dump());
  return o;
}

Outcome criterion3() {
  Outcome o;
  json r = circle_machine("s4_hopf");
  const json& e = r["equivariant"];
  const json& algebra = e["algebra"]["generators"];
  std::vector<std::string> names;
  for (const auto& g : algebra) names.push_back(g["name"]);
  o.require(names == std::vector<std::string>{"a", "e"} || names == std::vector<std::string>{"e", "a"},
            "equivariant algebra " + algebra.dump());
  const json& gens = e["generators"];
  const json& total = r["total_space"]["generators"];
  o.require(gens.size() == total.size(), "equivariant model has " + std::to_string(gens.size()) + " generators");
  for (std::size_t i = 0; o.ok && i < gens.size(); ++i) {
    o.require(gens[i]["name"] == total[i]["name"] && gens[i]["degree"] == total[i]["degree"],
              "generator mismatch at " + std::to_string(i));
    if (gens[i]["name"] == "c1")
      o.require(gens[i]["d"] == "a*e" || gens[i]["d"] == "e*a", "dc1 = " + gens[i]["d"].get<std::string>());
    else
      o.require(gens[i]["d"] == total[i]["d"], "d" + gens[i]["name"].get<std::string>() + " differs from the total space");
  }
  o.require(e["status"] == "pass", "equivariant model checks " + e["checks"].dump());
  o.require(r["extension_of_scalars"]["ok"] == true, "extension of scalars " + r["extension_of_scalars"].dump());

  // The library report agrees with the printed one.
  CircleReport rep = run_circle(fixtures::s4_hopf());
  o.require(rep.extension_of_scalars && rep.extension_of_scalars->ok, "extension_of_scalars_check failed");
  return o;
}

Outcome criterion4() {
  Outcome o;
  CircleReport rep = run_circle(fixtures::s4_hopf());
  o.require(rep.poincare.has_value(), "no Poincare report");
  if (!o.ok) return o;
  const auto& p = *rep.poincare;
  o.require(p.window_end >= 10, "Poincare window ends at " + std::to_string(p.window_end));
  // Independent recomputation of both identities from the reported series.
  for (int k = 0; k <= 10 && o.ok; ++k) {
    long long rhs1 = (k == 0 ? 1 : 0) - (k == 2 ? 1 : 0) + p.p_iota.at(k - 2);
    o.require(p.p_pi.at(k) == rhs1, "P_pi = 1 - t^2 + t^2 P_iota fails at t^" + std::to_string(k));
    long long rhs2 = p.p_p.at(k) - p.p_p.at(k - 2);
    o.require(p.p_pi.at(k) == rhs2, "P_pi = (1 - t^2) P_p fails at t^" + std::to_string(k));
  }
  o.require(!p.first_bad_fixed && !p.first_bad_equivariant, "library reports a mismatch");
  // The series come from the models: P_pi counts generators of the total space.
  GradedDims c = cone_generator_counts(*rep.total);
  for (int k = 0; k <= 10 && o.ok; ++k)
    o.require(p.p_pi.at(k) == (k == 0 ? 1 : 0) + c.at(k), "P_pi does not match the generator count at t^" + std::to_string(k));
  return o;
}

Outcome criterion5() {
  Outcome o;
  CircleReport rep = run_circle(fixtures::cp2());
  o.require(rep.total && rep.fixed && rep.naive, "missing reports");
  if (!o.ok) return o;
  o.require(rep.total->betti.truncated(4) == GradedDims(std::vector<long long>{1, 0, 1, 0, 1}),
            "Betti(M) = " + rep.total->betti.str());
  for (int k = 5; k <= rep.total->betti.window(); ++k) o.require(rep.total->betti.at(k) == 0, "Betti(M) beyond 4");
  o.require(rep.fixed->betti.truncated(2) == GradedDims(std::vector<long long>{2, 0, 1}), "Betti(F) = " + rep.fixed->betti.str());
  for (int k = 3; k <= rep.fixed->betti.window(); ++k) o.require(rep.fixed->betti.at(k) == 0, "Betti(F) beyond 2");
  o.require(rep.naive->algebra.ok, "naive product axioms: " + rep.naive->algebra.first());
  o.require(rep.naive->wedge && rep.naive->nonzero_products.empty(), "naive ring has a nonzero positive product");
  o.require(rep.status() == Status::Pass, "cp2 status " + to_string(rep.status()));
  return o;
}

Outcome criterion6() {
  Outcome o;
  CircleReport rep = run_circle(fixtures::almost_free_hopf());
  o.require(rep.almost_free.has_value(), "no almost-free report");
  if (!o.ok) return o;
  const auto& af = *rep.almost_free;
  o.require(af.chain_iso.ok, "chain isomorphism: " + af.chain_iso.first());
  o.require(af.multiplicative.ok, "multiplicativity: " + af.multiplicative.first());
  std::vector<long long> s3 = padded({1, 0, 0, 1}, static_cast<std::size_t>(af.betti_cone.window() + 1));
  o.require(af.betti_cone.dims == s3, "Betti(cone) = " + af.betti_cone.str());
  o.require(af.betti_algebra.dims == s3, "Betti(A(x)Lambda(x)) = " + af.betti_algebra.str());
  return o;
}

// H(minimal model) against the oracle, and sections of a surjective model map.
Outcome criterion7() {
  Outcome o;
  gen::Rng rng(20261015);
  const int cap = 8;
  std::vector<Sullivan> algebras{gen::exterior_a(3), gen::polynomial_e()};
  int count = 0;
  for (int trial = 0; trial < 120 && o.ok; ++trial) {
    const Sullivan& a = algebras[static_cast<std::size_t>(trial % 2)];
    DgModule x = gen::random_module(rng, a, cap, 4);
    o.require(verify_dgmodule(x).ok, "generator produced an invalid module");
    if (!o.ok) break;
    std::vector<long long> hx = oracle::betti(x);
    MinimalModelResult mm = minimal_model(x);
    o.require(mm.window_end == cap - 1, "window ends at " + std::to_string(mm.window_end));
    o.require(verify_minimal(mm.module).ok, "model is not minimal");
    FreeBasis nb = free_basis(mm.module, cap);
    DgModule nm = materialize(mm.module, cap, &nb);
    std::vector<long long> hn = oracle::betti(nm);
    for (int k = 0; k < cap && o.ok; ++k)
      o.require(hn[static_cast<std::size_t>(k)] == hx[static_cast<std::size_t>(k)] && static_cast<long long>(mm.betti[static_cast<std::size_t>(k)].target) == hx[static_cast<std::size_t>(k)] && mm.betti[static_cast<std::size_t>(k)].iso(),
                "trial " + std::to_string(trial) + ": H^" + std::to_string(k) + " differs");

    // X' = N (+) acyclic, scrambled; rho the projection onto N.
    DgModule acyc = gen::empty_module(a, cap);
    for (int b = 0; b < 2; ++b) acyc = gen::direct_sum(acyc, gen::block(a, cap, rng.coin() ? 1 : 3, rng.uniform(0, cap - 1), b));
    DgModule xs = gen::direct_sum(nm, acyc);
    std::vector<Matrix> p;
    DgModule xp = gen::scramble(rng, xs, &p);
    DgModuleMap rho = zero_map(xp, nm, 0);
    for (int k = 0; k <= rho.window; ++k) {
      Matrix proj(nm.dim(k), xs.dim(k));
      proj.set_block(0, 0, Matrix::identity(nm.dim(k)));
      rho.blocks[static_cast<std::size_t>(k)] = proj * oracle::inverse(p[static_cast<std::size_t>(k)]);
    }
    o.require(check_map(rho, xp, nm).ok, "projection is not a chain map");
    SectionLift s = lift_section(rho, xp, mm.module, nb);
    o.require(s.check.ok, "trial " + std::to_string(trial) + ": section check " + s.check.first());
    for (int k = 0; k <= s.window_end && o.ok; ++k)
      o.require(rho.block(k) * s.sigma_map.block(k) == Matrix::identity(nm.dim(k)), "rho sigma != id");
    ++count;
  }
  o.require(count >= 100, "only " + std::to_string(count) + " modules checked");
  if (o.ok) o.detail = std::to_string(count) + " modules";
  return o;
}

Outcome criterion8() {
  Outcome o;
  gen::Rng rng(8);
  const int cap = 8;
  std::vector<Sullivan> algebras{gen::exterior_a(3), gen::polynomial_e()};
  int maps = 0, homotopies = 0, nodes = 0;
  for (int trial = 0; trial < 60 && o.ok; ++trial) {
    const Sullivan& a = algebras[static_cast<std::size_t>(trial % 2)];
    int p = rng.uniform(-1, 3);
    gen::RandomMap m = gen::random_map(rng, a, cap, p);
    o.require(check_map(m.phi, m.src, m.dst).ok, "generated map is not a chain map");
    if (!o.ok) break;

    ConeLes les = cone_les(m.phi, m.dst, m.src);
    o.require(!les.rows.empty(), "empty long exact sequence");
    nodes += static_cast<int>(les.rows.size());
    for (const auto& row : les.rows)
      o.require(row.exact && row.connecting_is_phi, "trial " + std::to_string(trial) + ": LES fails at node " + std::to_string(row.n));

    // Round trips up then down, and down then up on a module that has room.
    const int q = std::abs(p) + 1;
    DgModule up = shift(m.src, q);
    o.require(shift(up, -q) == m.src, "shift by " + std::to_string(q) + " and back is not bit-identical");
    o.require(shift(shift(up, -q), q) == up, "shift by " + std::to_string(-q) + " and back is not bit-identical");

    // Model the map and validate the emitted homotopy.
    MinimalModelResult rm = minimal_model(m.src), rn = minimal_model(m.dst);
    MorphismModel mm = model_of_morphism(m.phi, m.src, m.dst, rm.module, rm.rho, rn.module, rn.rho);
    o.require(mm.homotopy_ok && mm.check.ok, "trial " + std::to_string(trial) + ": model_of_morphism " + mm.check.first());
    if (mm.source_window >= 0) {
      const int w = mm.source_window;
      FreeBasis sb = free_basis(rm.module, w + 1);
      DgModule ms = materialize(rm.module, w + 1, &sb);
      FreeBasis nb = free_basis(rn.module, m.dst.cap);
      DgModuleMap r_m = truncate(materialize(rm.rho, rm.module, sb, m.src), w);
      DgModuleMap r_n = materialize(rn.rho, rn.module, nb, m.dst);
      DgModuleMap pp = truncate(materialize(mm.phi_prime, rm.module, sb, rn.module, nb), w);
      DgModuleMap h = materialize(mm.h, rm.module, sb, m.dst);
      DgModuleMap lhs = compose(truncate(m.phi, w), r_m, &m.dst);
      DgModuleMap rhs = compose(r_n, pp, &m.dst);
      bool ok = p % 2 == 0 ? is_homotopy(h, lhs, rhs, ms, m.dst) : is_homotopy(h, rhs, lhs, ms, m.dst);
      o.require(ok, "trial " + std::to_string(trial) + ": is_homotopy rejects h");
      ++homotopies;
    }
    ++maps;
  }
  if (o.ok)
    o.detail = std::to_string(maps) + " maps, " + std::to_string(nodes) + " LES nodes, " + std::to_string(homotopies) +
               " homotopies";
  return o;
}

Outcome criterion9() {
  Outcome o;
  BasicData s4 = fixtures::s4_hopf();
  BasicCohomology bc = basic_cohomology(s4, 12);
  FormalityReport f = formality_check(bc);
  o.require(f.formal, "s4_hopf reported not formal: " + f.witness.value_or(""));
  LocalizationReport l = localization_check(bc, 1);
  o.require(l.status == Status::Pass, "localization: " + to_string(l.status) + " (" + l.reason + ")");
  o.require(l.window_end >= 0, "empty localization window");
  BasicData bad = fixtures::nonformal_synthetic();
  FormalityReport g = formality_check(basic_cohomology(bad, 12));
  o.require(!g.formal && g.witness && !g.witness->empty(), "counterexample not detected");
  if (o.ok) o.detail = "witness " + *g.witness;
  return o;
}

Outcome criterion10() {
  Outcome o;
  CircleReport rep = run_circle(fixtures::flow_s4());
  o.require(rep.smith_gysin.has_value(), "no Smith-Gysin report");
  if (!o.ok) return o;
  std::string rows;
  for (int r = 0; r <= 2; ++r) {
    const SmithGysinRow* row = nullptr;
    for (const auto& x : rep.smith_gysin->rows)
      if (x.r == r) row = &x;
    o.require(row != nullptr, "row r = " + std::to_string(r) + " missing");
    if (!row) break;
    o.require(row->relative + row->fixed <= row->total, "inequality fails at r = " + std::to_string(r));
    rows += (r ? ", " : "") + std::to_string(row->relative) + "+" + std::to_string(row->fixed) +
            "<=" + std::to_string(row->total);
  }
  if (o.ok) o.detail = rows;
  return o;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"S4 total-space model", criterion1},  {"S4 fixed-set model", criterion2},
      {"S4 equivariant model", criterion3},  {"Poincare identities", criterion4},
      {"CP2 fixture", criterion5},           {"almost-free reduction", criterion6},
      {"oracle equivalence", criterion7},    {"cone calculus", criterion8},
      {"formality and localization", criterion9}, {"Smith-Gysin inequality", criterion10}};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.ok) ++failed;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (o.ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << " (" << secs << " s)";
    if (!o.detail.empty()) line << ": " << o.detail;
    std::cout << line.str() << "\n";
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
