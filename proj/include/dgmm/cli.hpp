#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dgmm/circle.hpp"
#include "dgmm/fixtures.hpp"
#include "dgmm/io.hpp"
#include "dgmm/minmodel.hpp"
#include "dgmm/report.hpp"

namespace dgmm::cli {

using io::json;

enum ExitCode { kSuccess = 0, kValidation = 1, kPrecondition = 2, kInconclusive = 3 };

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Validation: return kValidation;
    case ErrorKind::Precondition: return kPrecondition;
    case ErrorKind::Inconclusive: return kInconclusive;
  }
  return kValidation;
}

inline int exit_code(Status s) {
  if (s == Status::Fail) return kValidation;
  if (s == Status::Inconclusive) return kInconclusive;
  return kSuccess;
}

/// H(S^4) over Lambda(a), |a| = 3, with zero action: the stand-in whose
/// minimal model is the S^4 total-space model.
inline DgModule s4_cohomology(int cap) {
  Sullivan a({Generator{"a", 3, {}}});
  std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(cap) + 1);
  labels[0] = {"x0"};
  if (cap >= 4) labels[4] = {"x4"};
  DgModule m = make_module(a, cap, labels);
  m.provenance = "cohomology of S^4";
  return m;
}

inline std::vector<std::string> fixture_names() {
  auto n = fixtures::names();
  n.push_back("s4_tabulated");
  n.push_back("s4_cohomology");
  return n;
}

inline io::Document fixture_document(const std::string& name, int max_degree) {
  if (name == "s4_tabulated") return io::document_of(fixtures::s4_tabulated(max_degree + 2));
  if (name == "s4_cohomology") {
    io::Document doc;
    doc.tabulated_modules.emplace("H_S4", s4_cohomology(max_degree + 1));
    doc.algebra = doc.tabulated_modules.at("H_S4").algebra;
    doc.target = "H_S4";
    return doc;
  }
  return io::document_of(fixtures::by_name(name, max_degree));
}

struct Options {
  std::string command;
  std::string input;
  std::string fixture;
  std::optional<int> max_degree;
  std::string format;  // empty: the document option, else text
  std::string target;
  std::string what = "input";
  std::string output;
  int exponent = 1;
  std::optional<std::uint64_t> seed;
};

inline json verify_json(const std::vector<std::pair<std::string, CheckReport>>& checks) {
  json rows = json::array();
  bool ok = true;
  for (const auto& [name, r] : checks) {
    json row = report::check_json(r);
    row["object"] = name;
    rows.push_back(row);
    ok = ok && r.ok;
  }
  return {{"command", "verify"}, {"checks", rows}, {"status", ok ? "pass" : "fail"}};
}

inline int cmd_verify(const io::Document& doc, int max_degree, const Options& opt, std::ostream& out) {
  std::vector<std::pair<std::string, CheckReport>> checks;
  CheckReport alg = verify_cdga(doc.algebra, max_degree);
  checks.emplace_back("algebra", alg);
  if (alg.ok) {
    for (const auto& [name, f] : doc.free_modules) {
      CheckReport r;
      try {
        validate_free(f);
        r.merge(verify_dgmodule(materialize(f, max_degree)));
        if (!derive_stages(f, &r) && r.ok) r.fail("no stage filtration");
      } catch (const Error& e) {
        r.fail(e.what());
      }
      checks.emplace_back("module " + name, r);
    }
    for (const auto& [name, m] : doc.tabulated_modules) checks.emplace_back("module " + name, verify_dgmodule(m));
    for (const auto& [name, f] : doc.free_maps)
      checks.emplace_back("map " + name, check_free_map(f.map, io::free_endpoint(doc, f.source), io::free_endpoint(doc, f.target)));
    for (const auto& [name, f] : doc.tabulated_maps)
      checks.emplace_back("map " + name, check_map(f.map, doc.tabulated_module(f.source), doc.tabulated_module(f.target)));
    if (doc.action && !doc.action->tabulated) checks.emplace_back("action", check_basic_data(io::basic_data(doc)));
  }
  json j = verify_json(checks);
  if (opt.format == "machine") {
    out << j.dump(2) << "\n";
  } else {
    for (const auto& [name, r] : checks) {
      out << name << ": " << (r.ok ? "ok" : "FAIL") << "\n";
      for (const auto& v : r.violations) out << "  " << v << "\n";
      if (r.suppressed) out << "  (" << r.suppressed << " more)\n";
    }
    if (checks.size() == 1 && doc.empty()) out << "(empty document)\n";
    out << "status: " << j["status"].get<std::string>() << "\n";
  }
  return j["status"] == "pass" ? kSuccess : kValidation;
}

inline std::string pick_target(const io::Document& doc, const Options& opt) {
  if (!opt.target.empty()) return opt.target;
  if (doc.target) return *doc.target;
  if (doc.tabulated_modules.size() == 1) return doc.tabulated_modules.begin()->first;
  fail_validation("minmodel needs --target: the document has " + std::to_string(doc.tabulated_modules.size()) +
                  " tabulated modules");
}

inline MinimalModelResult run_minmodel(const io::Document& doc, const std::string& target, const Options& opt) {
  KSOptions ks;
  ks.seed = opt.seed;
  const DgModule& x = doc.tabulated_module(target);
  io::checked_algebra(x.algebra);
  CheckReport r = verify_dgmodule(x);
  if (!r.ok) fail_validation("module " + target + ": " + r.first());
  return minimal_model(x, ks);
}

inline int cmd_minmodel(const io::Document& doc, const Options& opt, std::ostream& out) {
  std::string target = pick_target(doc, opt);
  MinimalModelResult m = run_minmodel(doc, target, opt);
  if (opt.format == "machine")
    out << report::minmodel_json(target, m).dump(2) << "\n";
  else
    out << report::minmodel_text(target, m);
  return m.ok() ? kSuccess : kValidation;
}

struct CircleRun {
  BasicData data;
  CircleReport report;
  std::optional<TabulatedRoute> route;
};

inline CircleRun run_circle_command(const io::Document& doc, int max_degree, const Options& opt) {
  if (!doc.action) fail_validation("the document has no action section");
  CircleRun run;
  int cap = max_degree;
  if (doc.action->tabulated) {
    TabulatedAction t = io::tabulated_action(doc);
    io::checked_algebra(t.omega_b.algebra);
    run.route = basic_data_from_tabulated(t, KSOptions{64, opt.seed, true});
    run.data = run.route->data;
    if (run.route->max_degree < cap) cap = run.route->max_degree;
  } else {
    run.data = io::basic_data(doc);
  }
  run.report = run_circle(run.data, CircleOptions{cap, opt.exponent});
  return run;
}

inline json route_json(const TabulatedRoute& r) {
  return {{"status", to_string(r.status())},
          {"max_degree", r.max_degree},
          {"i_homotopy", r.i_model.homotopy_ok},
          {"e_homotopy", r.e_model.homotopy_ok},
          {"total_cone_quis", r.total_quis.commutes && r.total_quis.quis()},
          {"fixed_cone_quis", r.fixed_quis.commutes && r.fixed_quis.quis()},
          {"relative_model", report::generator_table(r.data.relative)}};
}

inline int cmd_circle(const io::Document& doc, int max_degree, const Options& opt, std::ostream& out) {
  CircleRun run = run_circle_command(doc, max_degree, opt);
  Status s = run.report.status();
  if (run.route) s = worst(s, run.route->status());
  if (opt.format == "machine") {
    json j = report::circle_json(run.report);
    if (run.route) j["tabulated_route"] = route_json(*run.route);
    j["status"] = to_string(s);
    out << j.dump(2) << "\n";
  } else {
    if (run.route)
      out << "tabulated route: " << to_string(run.route->status()) << ", modelled through degree "
          << run.route->max_degree << "\n";
    std::string text = report::circle_text(run.report);
    if (run.route) text = text.substr(0, text.rfind("status: ")) + "status: " + to_string(s) + "\n";
    out << text;
  }
  return exit_code(s);
}

/// A document whose modules and maps are the computed objects; importing
/// it reproduces them exactly.
inline io::Document export_document(const io::Document& doc, int max_degree, const Options& opt) {
  if (opt.what == "input") return doc;
  io::Document ex;
  ex.algebra = doc.algebra;
  if (opt.what == "minmodel") {
    std::string target = pick_target(doc, opt);
    MinimalModelResult m = run_minmodel(doc, target, opt);
    ex.algebra = m.module.algebra;
    ex.tabulated_modules.emplace(target, doc.tabulated_module(target));
    ex.free_modules.emplace("model", m.module);
    ex.mixed_maps.emplace("rho", io::Named<FreeToTabulated>{"model", target, m.rho});
    return ex;
  }
  if (opt.what == "models") {
    CircleRun run = run_circle_command(doc, max_degree, opt);
    ex.algebra = run.data.algebra;
    for (const auto* m : {&run.report.total, &run.report.fixed, &run.report.equivariant})
      if (*m) {
        ex.free_modules.emplace((*m)->name, (*m)->module);
        ex.tabulated_modules.emplace((*m)->name + "_tabulated", materialize((*m)->module, (*m)->cap));
      }
    return ex;
  }
  fail_validation("unknown export target '" + opt.what + "' (input, models, minmodel)");
}

inline int cmd_export(const io::Document& doc, int max_degree, const Options& opt, std::ostream& out) {
  std::string text = io::document_json(export_document(doc, max_degree, opt)).dump(2) + "\n";
  if (opt.output.empty() || opt.output == "-") {
    out << text;
  } else {
    std::ofstream f(opt.output);
    if (!f) fail_validation("cannot write '" + opt.output + "'");
    f << text;
  }
  return kSuccess;
}

inline int dispatch(const Options& opt, std::ostream& out) {
  if (!opt.input.empty() && !opt.fixture.empty()) fail_validation("give either --input or --fixture, not both");
  int max_degree = opt.max_degree.value_or(12);
  io::Document doc;
  if (!opt.fixture.empty()) {
    doc = fixture_document(opt.fixture, max_degree);
  } else if (!opt.input.empty()) {
    doc = io::read_document(opt.input);
    if (!opt.max_degree && doc.max_degree) max_degree = *doc.max_degree;
  } else if (opt.command != "verify") {
    fail_validation("no input: use --input PATH or --fixture NAME");
  }
  if (max_degree < 1) fail_validation("--max-degree must be positive");
  Options o = opt;
  if (o.format.empty()) o.format = doc.format.value_or("text");
  if (o.format != "text" && o.format != "machine") fail_validation("format must be text or machine");
  if (o.command == "verify") return cmd_verify(doc, max_degree, o, out);
  if (o.command == "minmodel") return cmd_minmodel(doc, o, out);
  if (o.command == "circle") return cmd_circle(doc, max_degree, o, out);
  if (o.command == "export") return cmd_export(doc, max_degree, o, out);
  fail_validation("unknown command '" + o.command + "'");
}

/// Parses arguments and runs one command. Errors go to `err`; the return
/// value is the process exit code.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Minimal models of dg modules over Sullivan algebras and of circle actions", "dgmm"};
  app.require_subcommand(1);
  Options opt;
  std::optional<int> max_degree;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", opt.input, "input document (JSON)");
    sub->add_option("--fixture", opt.fixture, "built-in dataset")->check(CLI::IsMember(fixture_names()));
    sub->add_option("--max-degree", max_degree, "largest generator degree (default 12)");
    sub->add_option("--format", opt.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    sub->add_option("--seed", opt.seed, "randomize section choices in the model construction");
  };
  auto* verify = app.add_subcommand("verify", "check algebra, module and map axioms");
  auto* minmodel = app.add_subcommand("minmodel", "minimal model of a tabulated module");
  auto* circle = app.add_subcommand("circle", "models and reports for a circle action");
  auto* exp = app.add_subcommand("export", "write computed objects as an input document");
  for (auto* s : {verify, minmodel, circle, exp}) add_common(s);
  minmodel->add_option("--target", opt.target, "module to model");
  exp->add_option("--target", opt.target, "module to model (with --what minmodel)");
  circle->add_option("--exponent", opt.exponent, "nilpotency exponent p for the localization check");
  exp->add_option("--what", opt.what, "input, models or minmodel")->check(CLI::IsMember({"input", "models", "minmodel"}));
  exp->add_option("--output", opt.output, "output path (default stdout)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  }
  opt.max_degree = max_degree;
  for (auto* s : {verify, minmodel, circle, exp})
    if (s->parsed()) opt.command = s->get_name();
  try {
    return dispatch(opt, out);
  } catch (const Error& e) {
    const char* kind = e.kind() == ErrorKind::Validation     ? "validation error"
                       : e.kind() == ErrorKind::Precondition ? "precondition failed"
                                                             : "inconclusive";
    err << kind << ": " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  }
}

}  // namespace dgmm::cli
