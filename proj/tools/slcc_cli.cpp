// Command-line driver: check/norm/eq judgments in surface files, fibrancy
// reports for finite marked categories, model checking, and JSON/DOT exports.
//
// Exit codes: 0 all passed, 1 failure, 2 undecided (engine Unknown), 64 usage.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "slcc/elaborate.hpp"

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) slcc::fail(slcc::Err::UsageError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_diags(const slcc::ElabResult& r) {
  for (const auto& d : r.diags) {
    const char* sev = d.sev == slcc::Diagnostic::Error ? "error" : "warning";
    std::cerr << sev << " at " << d.span.line << ":" << d.span.col << ": " << d.message << "\n";
    if (!d.detail.empty()) std::cerr << "  " << d.detail << "\n";
  }
  for (const auto& line : r.output) std::cout << line << "\n";
}

int run_elaborate(const std::string& file, slcc::ElabOptions opt,
                  std::optional<slcc::SJudgment::K> only, const std::string& target_ctx = "") {
  slcc::SurfaceFile f = slcc::parse(slurp(file));
  if (only) {
    for (auto& b : f.blocks) {
      if (!target_ctx.empty() && b.ctx != target_ctx) {
        b.judgments.clear();
        continue;
      }
      std::vector<slcc::SJudgment> keep;
      for (auto& j : b.judgments)
        if (j.k == *only) keep.push_back(j);
      b.judgments = std::move(keep);
    }
  }
  slcc::ElabResult r = slcc::elaborate(f, std::move(opt));
  print_diags(r);
  return r.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"strict lcc kernel: judgment checking over finitely presented "
               "strict lcc categories"};
  app.require_subcommand(1);
  app.fallthrough();

  long long budget = 10000;
  unsigned seed = 0;
  bool trace = false;
  app.add_option("--budget", budget, "rewrite steps per query")->capture_default_str();
  app.add_option("--seed", seed, "seed for randomized checks")->capture_default_str();
  app.add_flag("--trace", trace, "print rewrite traces");

  std::string file, target, model_name;

  auto* check = app.add_subcommand("check", "elaborate and check all judgments");
  check->add_option("file", file)->required();

  auto* norm = app.add_subcommand("norm", "run norm judgments");
  norm->add_option("file", file)->required();
  norm->add_option("--target", target, "restrict to judgment blocks in this context");

  auto* eqc = app.add_subcommand("eq", "run eq judgments");
  eqc->add_option("file", file)->required();

  auto* fib = app.add_subcommand("fibrancy", "fibrancy report for a finite marked category");
  fib->add_option("file", file)->required();

  auto* mc = app.add_subcommand("model-check", "evaluate eq judgments in a finite model");
  mc->add_option("file", file)->required();
  mc->add_option("--model", model_name, "chain2, chain3, diamond or cube")->required();

  auto* ej = app.add_subcommand("export-json", "presentation/context JSON for a surface file");
  ej->add_option("file", file)->required();

  auto* ed = app.add_subcommand("export-dot", "DOT export (finite category or sketch)");
  ed->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 64;
  }

  slcc::ElabOptions opt;
  opt.budget = budget;
  opt.trace = trace;

  try {
    if (*check) return run_elaborate(file, opt, std::nullopt);
    if (*norm) return run_elaborate(file, opt, slcc::SJudgment::Norm, target);
    if (*eqc) return run_elaborate(file, opt, slcc::SJudgment::EqJ);

    if (*fib) {
      auto j = nlohmann::json::parse(slurp(file));
      slcc::FinCat C = slcc::fincat_from_json(j);
      slcc::FibrancyReport R = slcc::is_fibrant(C);
      if (R.fibrant) {
        std::cout << "fibrant: markings coincide with the universal diagrams\n";
        return 0;
      }
      for (const auto& v : R.violations) std::cout << "violation: " << v << "\n";
      return 1;
    }

    if (*mc) {
      if (!slcc::builtin_model(model_name)) {
        std::cerr << "unknown model '" << model_name << "'\n";
        return 64;
      }
      slcc::SurfaceFile f = slcc::parse(slurp(file));
      f.models.clear();
      f.models.push_back(model_name);
      slcc::ElabResult r = slcc::elaborate(f, opt);
      print_diags(r);
      return r.exit_code();
    }

    if (*ej) {
      slcc::SurfaceFile f = slcc::parse(slurp(file));
      slcc::Elaborator el(opt);
      slcc::ElabResult r = el.run(f);
      slcc::ordered_json out;
      auto sk = slcc::ordered_json::object();
      for (const auto& [name, pres] : el.sketch_map())
        sk[name] = slcc::presentation_to_json(*pres);
      out["sketches"] = sk;
      auto cx = slcc::ordered_json::object();
      for (const auto& [name, ctx] : el.context_map()) cx[name] = slcc::context_to_json(ctx);
      out["contexts"] = cx;
      std::cout << out.dump(2) << "\n";
      return r.failed ? 1 : 0;
    }

    if (*ed) {
      if (file.size() > 5 && file.substr(file.size() - 5) == ".json") {
        auto j = nlohmann::json::parse(slurp(file));
        slcc::FinCat C = slcc::fincat_from_json(j);
        std::cout << slcc::fincat_to_dot(C);
        return 0;
      }
      slcc::SurfaceFile f = slcc::parse(slurp(file));
      for (const auto& s : f.sketches) {
        std::cout << "digraph " << s.name << " {\n";
        for (const auto& o : s.objs) std::cout << "  \"" << o << "\";\n";
        for (const auto& a : s.arrows)
          std::cout << "  \"" << (a.dom.empty() ? "Unit" : a.dom) << "\" -> \""
                    << (a.cod.empty() ? "Unit" : a.cod) << "\" [label=\"" << a.name << "\"];\n";
        std::cout << "}\n";
      }
      return 0;
    }
  } catch (const slcc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code == slcc::Err::UsageError ? 64 : 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 64;
}
