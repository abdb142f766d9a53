#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace {

using namespace voidinspect;
using namespace voidinspect::cli;

struct Flags {
  std::vector<std::string> inputs;
  std::string config;
  std::string method;
  std::string out;
  std::string truth;
  bool overlay = false;
  bool dump_edges = false;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  int count = 1;
};

int resolve_jobs(const Flags& f, int from_config) {
  if (f.jobs) return *f.jobs;
  if (const char* env = std::getenv("VOIDINSPECT_JOBS"); env && *env) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(env, &used);
      if (used == std::string(env).size()) return n;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("VOIDINSPECT_JOBS must be an integer, got '") + env + "'");
  }
  return from_config;
}

Invocation build(const Flags& f) {
  Invocation inv;
  if (!f.config.empty()) inv.config = load_config(f.config);
  RunConfig& cfg = inv.config;
  if (!f.method.empty()) cfg.methods = parse_methods(f.method);
  if (!f.out.empty()) cfg.out = f.out;
  if (f.overlay) cfg.overlay = true;
  if (f.dump_edges) cfg.dump_edges = true;
  if (f.seed) cfg.synth.seed = *f.seed;
  cfg.jobs = resolve_jobs(f, cfg.jobs);
  cfg.validate();
  for (const std::string& s : f.inputs) inv.inputs.emplace_back(s);
  if (!f.truth.empty()) inv.truth_dir = f.truth;
  inv.count = f.count;
  return inv;
}

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON config file");
  cmd->add_option("--out", f.out, "Output directory (default .)");
  cmd->add_option("--jobs", f.jobs, "Worker threads (fallback: VOIDINSPECT_JOBS)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BGA solder ball void inspection"};
  app.require_subcommand(1);
  Flags f;

  auto* inspect = app.add_subcommand("inspect", "Detect voids in radiographs");
  inspect->add_option("inputs", f.inputs, "Image files or directories");
  add_common(inspect, f);
  inspect->add_option("--method", f.method, "proposed | baseline | both");
  inspect->add_flag("--overlay", f.overlay, "Write overlay PNGs");
  inspect->add_flag("--dump-edges", f.dump_edges, "Write per-ball edge masks");

  auto* synth = app.add_subcommand("synth", "Generate synthetic images with ground truth");
  add_common(synth, f);
  synth->add_option("--seed", f.seed, "First seed");
  synth->add_option("--count", f.count, "Number of images");

  auto* eval = app.add_subcommand("eval", "Score reports against ground truth");
  eval->add_option("inputs", f.inputs, "Report JSON files or directories");
  add_common(eval, f);
  eval->add_option("--truth", f.truth, "Directory holding <image>.truth.json (default: next to the report)");

  auto* compare = app.add_subcommand("compare", "Compare both methods on synthetic images");
  compare->add_option("inputs", f.inputs, "Image files or directories");
  add_common(compare, f);
  compare->add_option("--truth", f.truth, "Directory holding <image>.truth.json (default: next to the image)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    const Invocation inv = build(f);
    if (inspect->parsed()) return cmd_inspect(inv, std::cout, std::cerr);
    if (synth->parsed()) return cmd_synth(inv, std::cout, std::cerr);
    if (eval->parsed()) return cmd_eval(inv, std::cout, std::cerr);
    return cmd_compare(inv, std::cout, std::cerr);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
