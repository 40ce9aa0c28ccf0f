#include <CLI11.hpp>
#include <iostream>

#include "vqg/cli/commands.hpp"

using namespace vqg::cli;

int main(int argc, char** argv) {
  CLI::App app{"Vertex quantum group checker"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  RunOptions opt;
  std::string file, suite, window, left, right, sector;
  int max_weight = 0, truncation = 0;
  bool no_cache = false;

  auto common = [&](CLI::App* c) {
    c->add_option("file", file, "algebra definition (TOML)")->required();
    c->add_option("--truncation", truncation, "grade bound overriding the file");
    c->add_flag("--no-cache", no_cache, "do not read or write the OPE cache");
  };

  auto* check = app.add_subcommand("check", "run one verification suite");
  common(check);
  check->add_option("--suite", suite, "suite name")->required();
  check->add_option("--window", window, "exponent window lo:hi");
  check->add_option("--format", opt.format, "text or json");
  check->add_flag("--timings", opt.timings, "include wall-clock timings");

  auto* ope = app.add_subcommand("ope", "render Y(left, z) right");
  common(ope);
  ope->add_option("--left", left, "state expression")->required();
  ope->add_option("--right", right, "state expression")->required();
  ope->add_option("--window", window, "exponent window lo:hi");

  auto* dims = app.add_subcommand("dims", "graded dimensions of a sector");
  dims->add_option("file", file, "algebra definition (TOML)")->required();
  dims->add_option("--sector", sector, "lattice class c1,...,cr")->required();
  dims->add_option("--max-weight", max_weight, "largest weight")->required();

  auto* report = app.add_subcommand("report", "run every applicable suite");
  common(report);
  report->add_option("--format", opt.format, "text or json");
  report->add_flag("--timings", opt.timings, "include wall-clock timings");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (truncation != 0) opt.truncation = truncation;
  opt.use_cache = !no_cache;
  if (!window.empty()) {
    try {
      opt.window = parse_window(window);
    } catch (const std::invalid_argument& ex) {
      std::cerr << "error: " << ex.what() << "\n";
      return 2;
    }
  }

  Outcome o;
  if (check->parsed())
    o = cmd_check(file, suite, opt);
  else if (ope->parsed())
    o = cmd_ope(file, left, right, opt);
  else if (dims->parsed())
    o = cmd_dims(file, sector, max_weight);
  else
    o = cmd_report(file, opt);
  std::cout << o.out;
  std::cerr << o.err;
  return o.exit_code;
}
