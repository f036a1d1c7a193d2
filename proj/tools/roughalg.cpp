#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roughalg/cli.hpp"

namespace {

int emit(const roughalg::cli::CommandResult& res,
         const std::string& out_file) {
  const std::string text = roughalg::cli::render(res.doc);
  if (out_file.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_file, std::ios::binary);
    out << text;
    if (!out.good()) {
      std::cerr << "cannot write " << out_file << "\n";
      return 2;
    }
  }
  // Mirror failures to stderr so they are visible when stdout is a file.
  if (res.exit_code != 0 && res.doc.contains("error"))
    std::cerr << res.doc["error"].get<std::string>() << "\n";
  return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "signatures, rough integrals, and verification suites for sampled "
      "paths"};
  app.require_subcommand(1);

  roughalg::cli::RunConfig cfg;
  std::vector<double> interval;
  int verbose = 0;

  auto* sig = app.add_subcommand(
      "signature", "truncated signature of a CSV sampled path");
  sig->add_option("--path", cfg.path_file, "CSV file t,x1,...,xd")
      ->required();
  auto* sig_depth =
      sig->add_option("--depth", cfg.depth, "truncation depth (default 2)");
  sig->add_option("--interval", interval, "restrict to [S, T]")->expected(2);
  sig->add_option("--out", cfg.out_file, "write the JSON here");
  sig->add_flag("-v,--verbose", verbose, "echo the configuration");

  auto* integ = app.add_subcommand(
      "integrate", "rough integral of a polynomial one form along the path");
  integ->add_option("--path", cfg.path_file, "CSV file t,x1,...,xd")
      ->required();
  integ->add_option("--one-form", cfg.one_form_file, "one form JSON")
      ->required();
  integ->add_option("--p", cfg.p, "p-variation regime (default 1.0)");
  integ->add_option("--depth", cfg.depth,
                    "depth of the returned group element (default 1)");
  integ->add_option("--tol", cfg.tol, "sewing tolerance (default 1e-9)");
  integ->add_option("--interval", interval, "integrate over [S, T]")
      ->expected(2);
  integ->add_option("--out", cfg.out_file, "write the JSON here");
  integ->add_flag("-v,--verbose", verbose, "echo the configuration");

  auto* ver =
      app.add_subcommand("verify", "run a self contained verification suite");
  ver->add_option("--suite", cfg.suite,
                  "hopf | signature | changevar | effects")
      ->required();
  ver->add_option("--seed", cfg.seed, "suite seed (default 0)");
  auto* ver_depth =
      ver->add_option("--depth", cfg.depth, "override the suite depth");
  auto* ver_tol = ver->add_option(
      "--tol", cfg.tol, "scale on the suite tolerances (default 1)");
  ver->add_option("--out", cfg.out_file, "write the report here");
  ver->add_flag("-v,--verbose", verbose, "echo the configuration");

  auto* veff = app.add_subcommand(
      "verify-effects",
      "run the slowly varying one form invariants on supplied data");
  veff->add_option("--path", cfg.path_file, "CSV file t,x1,...,xd")
      ->required();
  veff->add_option("--one-form", cfg.one_form_file, "one form JSON")
      ->required();
  veff->add_option("--p", cfg.p, "p-variation regime (default 1.0)");
  veff->add_option("--tol", cfg.tol,
                   "convergence tolerance (default 1e-9)");
  veff->add_option("--out", cfg.out_file, "write the report here");
  veff->add_flag("-v,--verbose", verbose, "echo the configuration");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (sig->parsed()) {
    cfg.command = "signature";
    if (sig_depth->count() == 0) cfg.depth = 2;
  } else if (integ->parsed()) {
    cfg.command = "integrate";
  } else if (ver->parsed()) {
    cfg.command = "verify";
    cfg.depth_set = ver_depth->count() > 0;
    cfg.tol_set = ver_tol->count() > 0;
  } else {
    cfg.command = "verify-effects";
  }
  if (interval.size() == 2) {
    cfg.has_interval = true;
    cfg.interval_lo = interval[0];
    cfg.interval_hi = interval[1];
  }
  cfg.verbosity = 1 + verbose;

  return emit(roughalg::cli::execute(cfg), cfg.out_file);
}
