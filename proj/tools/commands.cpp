#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "persuade/constraints.hpp"
#include "persuade/errors.hpp"
#include "persuade/fixtures.hpp"
#include "persuade/io.hpp"
#include "persuade/objectives.hpp"
#include "persuade/solver.hpp"

namespace persuade::cli {

namespace {

struct SolveArgs {
  std::string instance;
  double eps = 0.05;
  std::string mode = "bi";
  std::optional<double> slater_margin;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string grid_csv;
  std::size_t grid_multiple = 1;
};

struct ConvertArgs {
  std::string instance;
  std::string scheme;
  std::string out;
};

struct VerifyArgs {
  std::string instance;
  std::string scheme;
  double tol = 1e-9;
};

struct FixtureArgs {
  std::string id;
  bool verify = false;
  std::string out;
  std::string scheme_out;
};

void emit(const json& doc, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") out << doc.dump(2) << '\n';
  else write_json_file(path, doc);
}

void write_grid_csv(const std::string& path, const ProblemInstance& inst, const SolveReport& report,
                    const SolveArgs& args) {
  const double inner = report.mode == SolveMode::SingleCriteria && inst.count(ConstraintMode::ExAnte) > 0
                           ? args.eps / 2.0
                           : args.eps;
  ApproxOptions approx;
  approx.grid_multiple = args.grid_multiple;
  GriddedUtility gu = build_upper_approx(inst.utility, inst.k, inner / 2.0, report.lipschitz_bound, approx);
  std::ofstream csv(path);
  if (!csv) throw InvalidInput(path + ": cannot open file for writing");
  csv << "value";
  for (std::size_t w = 0; w < inst.k; ++w) csv << ",q" << w;
  csv << '\n' << std::setprecision(17);
  const auto values = gu.point_values();
  for (std::size_t v = 0; v < gu.num_points(); ++v) {
    csv << values[v];
    for (double x : gu.point(v)) csv << ',' << x;
    csv << '\n';
  }
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  ProblemInstance inst = load_instance(args.instance);
  SolveOptions opts;
  opts.grid_multiple = args.grid_multiple;
  SolveReport report;
  if (args.mode == "bi") {
    report = bi_criteria_solve(inst, args.eps, opts);
  } else {
    if (!args.slater_margin) throw InvalidInput("--mode single needs --slater-margin");
    report = single_criteria_solve(inst, args.eps, *args.slater_margin, opts);
  }
  json doc = scheme_to_json(report.scheme);
  doc["value"] = report.value;
  doc["report"] = report_to_json(report);
  if (args.seed) doc["report"]["seed"] = *args.seed;
  emit(doc, args.out, out);
  if (!args.grid_csv.empty()) write_grid_csv(args.grid_csv, inst, report, args);
  err << "solve: value " << report.value << ", support " << report.scheme.size() << ", max violation "
      << report.max_violation << '\n';
  return kOk;
}

int cmd_convert(const ConvertArgs& args, std::ostream& out, std::ostream& err) {
  ProblemInstance inst = load_instance(args.instance);
  SignalingScheme scheme = load_scheme(args.scheme);
  for (std::size_t j = 0; j < inst.constraints.size(); ++j) {
    if (!inst.constraints[j].is_convex()) {
      throw InvalidInput("/constraints/" + std::to_string(j) + ": kind " + inst.constraints[j].kind_name() +
                         " is not convex");
    }
  }
  ProblemInstance ante = inst;
  for (auto& c : ante.constraints) c.mode = ConstraintMode::ExAnte;
  VerifyReport before = verify_scheme(ante, scheme);
  if (!before.valid) {
    err << "convert: the input scheme does not satisfy the constraints in expectation\n";
    out << verify_report_to_json(before).dump(2) << '\n';
    return kInfeasible;
  }
  ProblemInstance post = inst;
  for (auto& c : post.constraints) c.mode = ConstraintMode::ExPost;
  SignalingScheme result = ex_ante_to_ex_post(scheme, inst.constraints, inst.prior);
  VerifyReport after = verify_scheme(post, result);
  json doc = scheme_to_json(result);
  doc["value"] = after.utility;
  doc["report"] = json{{"value_before", before.utility},
                       {"value_after", after.utility},
                       {"ratio", before.utility > 0.0 ? after.utility / before.utility : 1.0},
                       {"verify", verify_report_to_json(after)}};
  emit(doc, args.out, out);
  return after.valid ? kOk : kInfeasible;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream&) {
  ProblemInstance inst = load_instance(args.instance);
  SignalingScheme scheme = load_scheme(args.scheme);
  if (scheme.dim() != inst.k) throw InvalidInput("scheme dimension differs from the instance's k");
  VerifyReport rep = verify_scheme(inst, scheme, args.tol);
  out << verify_report_to_json(rep).dump(2) << '\n';
  return rep.valid ? kOk : kInfeasible;
}

int cmd_fixture(const FixtureArgs& args, std::ostream& out, std::ostream&) {
  FixtureId id = FixtureId::parse(args.id);
  Fixture fx = build_fixture(id);
  if (!args.out.empty() || !args.verify) emit(instance_to_json(fx.instance), args.out, out);
  if (!args.scheme_out.empty()) {
    if (!fx.reference) throw InvalidInput("fixture " + id.to_string() + " has no reference scheme");
    write_json_file(args.scheme_out, scheme_to_json(*fx.reference));
  }
  if (!args.verify) return kOk;
  FixtureReport rep = verify_fixture(id);
  json checks = json::array();
  for (const auto& c : rep.checks) {
    checks.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"pass", c.pass}});
  }
  out << json{{"id", id.to_string()}, {"pass", rep.pass}, {"checks", checks}}.dump(2) << '\n';
  return rep.pass ? kOk : kInfeasible;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bayesian persuasion with ex-ante and ex-post constraints"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Solve an instance with the grid LP");
  s->add_option("instance", solve.instance, "Instance JSON file")->required();
  s->add_option("--eps", solve.eps, "Accuracy parameter")->check(CLI::PositiveNumber);
  s->add_option("--mode", solve.mode, "bi or single")->check(CLI::IsMember({"bi", "single"}));
  s->add_option("--slater-margin", solve.slater_margin, "Certified Slater margin (single mode)");
  s->add_option("--seed", solve.seed, "Seed recorded in the report");
  s->add_option("--out", solve.out, "Output scheme file (default: stdout)");
  s->add_option("--grid-csv", solve.grid_csv, "Write the gridded utility table as CSV");
  s->add_option("--grid-multiple", solve.grid_multiple, "Round the grid denominator up to a multiple of this")
      ->check(CLI::PositiveNumber);

  ConvertArgs convert;
  auto* c = app.add_subcommand("convert", "Pool an ex-ante scheme into an ex-post one");
  c->add_option("instance", convert.instance, "Instance JSON file")->required();
  c->add_option("scheme", convert.scheme, "Scheme JSON file")->required();
  c->add_option("--out", convert.out, "Output scheme file (default: stdout)");

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check a scheme against an instance");
  v->add_option("instance", verify.instance, "Instance JSON file")->required();
  v->add_option("scheme", verify.scheme, "Scheme JSON file")->required();
  v->add_option("--tol", verify.tol, "Tolerance")->check(CLI::NonNegativeNumber);

  FixtureArgs fixture;
  auto* f = app.add_subcommand("fixture", "Write or verify a built-in fixture");
  f->add_option("id", fixture.id, "Fixture id, e.g. example1:0.1666 or prop3:2,2")->required();
  f->add_flag("--verify", fixture.verify, "Run the fixture's reference checks");
  f->add_option("--out", fixture.out, "Instance output file");
  f->add_option("--scheme-out", fixture.scheme_out, "Reference scheme output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }

  try {
    if (s->parsed()) return cmd_solve(solve, out, err);
    if (c->parsed()) return cmd_convert(convert, out, err);
    if (v->parsed()) return cmd_verify(verify, out, err);
    return cmd_fixture(fixture, out, err);
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const InvalidInput& e) {
    err << "input error: " << e.what() << '\n';
    return kInputError;
  } catch (const ResourceLimit& e) {
    err << "resource limit: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace persuade::cli
