#include "loewner/cli.hpp"

#include "loewner/classifier.hpp"
#include "loewner/gallery.hpp"
#include "loewner/io.hpp"

#include "CLI11.hpp"

#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

namespace loewner::cli {

namespace {

std::string now_iso8601() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot write output file '" + out_path + "'");
  f << text;
}

nlohmann::json with_meta(nlohmann::json j, bool no_meta) {
  if (!no_meta) j["meta"] = {{"generated", now_iso8601()}, {"tool", "loewner"}};
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

TypeIRep as_rep(const io::Model& model) {
  if (const auto* rep = std::get_if<TypeIRep>(&model)) return *rep;
  return from_discrete_measure(std::get<DiscreteMeasure>(model));
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Vector-moment calculus for two-variable Pick functions"};
  app.require_subcommand(1);
  int exit_code = 0;

  // ── eval ────────────────────────────────────────────────────────────
  struct {
    std::string rep, z, out;
  } ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate the function at one point");
  eval_cmd->add_option("--rep", ev.rep, "model JSON file")->required();
  eval_cmd->add_option("--z", ev.z, "point 'a+bi,c+di' in the bi-half-plane")->required();
  eval_cmd->add_option("--out", ev.out, "output file (default stdout)");
  eval_cmd->callback([&] {
    const io::Model model = io::load_model(ev.rep);
    const auto [z1, z2] = io::parse_complex_pair(ev.z);
    if (!(z1.imag() > 0.0) || !(z2.imag() > 0.0))
      throw std::invalid_argument(
          "eval: --z must lie in the bi-half-plane (Im > 0 in both coordinates)");
    const Complex h =
        std::visit([&](const auto& m) { return evaluate(m, HalfPlanePoint2{z1, z2}); }, model);
    emit(ev.out, io::format_complex(h) + "\n");
  });

  // ── moments ─────────────────────────────────────────────────────────
  struct {
    std::string rep, b, out;
    int max_order = 5;
  } mo;
  auto* moments_cmd = app.add_subcommand("moments", "Moment table along one direction (CSV)");
  moments_cmd->add_option("--rep", mo.rep, "model JSON file")->required();
  moments_cmd->add_option("--b", mo.b, "direction 'b1,b2' in the open quadrant")->required();
  moments_cmd->add_option("--max-order", mo.max_order, "highest order k")->check(CLI::Range(1, 64));
  moments_cmd->add_option("--out", mo.out, "output file (default stdout)");
  moments_cmd->callback([&] {
    const io::Model model = io::load_model(mo.rep);
    const Direction b = io::parse_direction(mo.b);
    std::ostringstream table;
    io::write_moment_csv(table, model, b, mo.max_order);
    emit(mo.out, table.str());
  });

  // ── telescope ───────────────────────────────────────────────────────
  struct {
    std::string rep, b, out;
    int max_N = 3;
    double s0 = 10.0, ratio = 2.0;
    int levels = 20;
  } te;
  auto* telescope_cmd =
      app.add_subcommand("telescope", "Telescoping-identity residuals along one ray (CSV)");
  telescope_cmd->add_option("--rep", te.rep, "model JSON file")->required();
  telescope_cmd->add_option("--b", te.b, "direction 'b1,b2'")->required();
  telescope_cmd->add_option("--max-N", te.max_N, "largest depth N")->check(CLI::Range(1, 16));
  telescope_cmd->add_option("--s0", te.s0, "grid base height")->check(CLI::PositiveNumber);
  telescope_cmd->add_option("--ratio", te.ratio, "grid ratio");
  telescope_cmd->add_option("--levels", te.levels, "grid levels")->check(CLI::Range(4, 64));
  telescope_cmd->add_option("--out", te.out, "output file (default stdout)");
  telescope_cmd->callback([&] {
    const TypeIRep rep = as_rep(io::load_model(te.rep));
    const Direction b = io::parse_direction(te.b);
    const RayGrid grid{b, te.s0, te.ratio, te.levels};
    validate(grid);
    std::ostringstream table;
    io::write_telescope_csv(table, rep, b, grid, te.max_N);
    emit(te.out, table.str());
  });

  // ── residues ────────────────────────────────────────────────────────
  struct {
    std::string rep, out;
    int max_order = 4;
    double s0 = 10.0, ratio = 2.0;
    int levels = 20;
    bool strict = false, no_meta = false;
  } re;
  auto* residues_cmd = app.add_subcommand("residues", "Residue ladder of ray coefficients (JSON)");
  residues_cmd->add_option("--rep", re.rep, "model JSON file")->required();
  residues_cmd->add_option("--max-order", re.max_order, "requested ladder depth")
      ->check(CLI::Range(1, 16));
  residues_cmd->add_option("--s0", re.s0, "grid base height")->check(CLI::PositiveNumber);
  residues_cmd->add_option("--ratio", re.ratio, "grid ratio");
  residues_cmd->add_option("--levels", re.levels, "grid levels")->check(CLI::Range(4, 64));
  residues_cmd->add_option("--out", re.out, "output file (default stdout)");
  residues_cmd->add_flag("--strict", re.strict, "exit 2 when the ladder stops early");
  residues_cmd->add_flag("--no-meta", re.no_meta, "omit the meta block");
  residues_cmd->callback([&] {
    const io::Model model = io::load_model(re.rep);
    const RayGrid grid{{1.0, 1.0}, re.s0, re.ratio, re.levels};
    const auto dirs = default_directions(re.max_order);
    const ResidueLadder ladder = std::visit(
        [&](const auto& m) { return residue_ladder(m, re.max_order, dirs, grid); }, model);
    emit(re.out, with_meta(io::to_json(ladder), re.no_meta).dump(2) + "\n");
    if (re.strict && ladder.stop != LadderStop::Completed) exit_code = 2;
  });

  // ── classify ────────────────────────────────────────────────────────
  struct {
    std::string rep, report;
    int max_N = 3;
    double tol_poly_opt = tol_poly;
    bool strict = false, no_meta = false;
  } cl;
  auto* classify_cmd =
      app.add_subcommand("classify", "Order-N class membership through all three routes (JSON)");
  classify_cmd->add_option("--rep", cl.rep, "model JSON file")->required();
  classify_cmd->add_option("--max-N", cl.max_N, "largest order to classify")
      ->check(CLI::Range(1, 8));
  classify_cmd->add_option("--tol-poly", cl.tol_poly_opt, "polynomial fit tolerance")
      ->check(CLI::PositiveNumber);
  classify_cmd->add_option("--report", cl.report, "report file (default stdout)");
  classify_cmd->add_flag("--strict", cl.strict, "exit 2 on any Indeterminate verdict");
  classify_cmd->add_flag("--no-meta", cl.no_meta, "omit the meta block");
  classify_cmd->callback([&] {
    const io::Model model = io::load_model(cl.rep);
    ProfileOptions opt;
    opt.max_N = cl.max_N;
    opt.fit_tol = cl.tol_poly_opt;
    const ClassificationReport report =
        std::visit([&](const auto& m) { return loewner_profile(m, opt); }, model);
    emit(cl.report, with_meta(io::to_json(report), cl.no_meta).dump(2) + "\n");
    if (cl.strict) {
      for (const auto& e : report.entries)
        if (e.op == Verdict::Indeterminate || e.fn == Verdict::Indeterminate ||
            e.bd == Verdict::Indeterminate)
          exit_code = 2;
    }
  });

  // ── counterexample ──────────────────────────────────────────────────
  struct {
    int n = 3;
    double t = 0.5;
    std::string out;
  } ce;
  auto* counterexample_cmd =
      app.add_subcommand("counterexample", "Emit a cyclic-shift family member (model JSON)");
  counterexample_cmd->add_option("--n", ce.n, "family index (dimension 2(n-1))")->required();
  counterexample_cmd->add_option("--t", ce.t, "perturbation weight in (0, 1]")->required();
  counterexample_cmd->add_option("--out", ce.out, "output file (default stdout)");
  counterexample_cmd->callback([&] {
    const TypeIRep rep = counterexample_rep({ce.n, ce.t});
    const std::string text = io::to_json(rep).dump(2) + "\n";
    emit(ce.out, text);
  });

  // ── report ──────────────────────────────────────────────────────────
  struct {
    std::vector<std::string> inputs;
    std::string out;
    bool no_meta = false;
  } rp;
  auto* report_cmd = app.add_subcommand("report", "Merge JSON outputs into one document");
  report_cmd->add_option("inputs", rp.inputs, "JSON files to merge")->required()->expected(-1);
  report_cmd->add_option("--out", rp.out, "output file (default stdout)");
  report_cmd->add_flag("--no-meta", rp.no_meta, "omit the meta block");
  report_cmd->callback([&] {
    nlohmann::json reports = nlohmann::json::array();
    for (const auto& path : rp.inputs) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(read_file(path));
      } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("report input '" + path + "': not valid JSON (" + e.what() +
                                    ")");
      }
      std::string kind = "unknown";
      if (j.is_object()) {
        if (j.contains("kind") && j["kind"].is_string()) kind = j["kind"].get<std::string>();
        else if (j.contains("measure")) kind = "measure";
        else if (j.contains("dim") && j.contains("A")) kind = "rep";
      }
      reports.push_back(nlohmann::json{{"path", path}, {"kind", kind}, {"content", std::move(j)}});
    }
    nlohmann::json merged{{"kind", "report"}, {"reports", std::move(reports)}};
    emit(rp.out, with_meta(std::move(merged), rp.no_meta).dump(2) + "\n");
  });

  // ── dispatch ────────────────────────────────────────────────────────
  std::vector<std::string> full;
  full.reserve(args.size() + 1);
  full.emplace_back("loewner");
  full.insert(full.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(full.size());
  for (const auto& a : full) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    // SingularMatrix, NotHermitian, NotReal, OrderTooHigh, DegenerateDesign:
    // all trace back to inputs that violate a documented precondition.
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? argc - 1 : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args);
}

}  // namespace loewner::cli
