#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

using namespace harmtree::cli;

namespace {

void add_tree_options(CLI::App* cmd, TreeSource& tree) {
  cmd->add_option("--tree", tree.file, "Tree file (or a function file with an embedded tree)");
  cmd->add_option("--branching", tree.branching, "Children per vertex for a generated tree")->capture_default_str();
  cmd->add_option("--weights", tree.weights, "Comma-separated child weights, e.g. 1/4,3/4 (default uniform)");
  cmd->add_option("--random-tree", tree.random_seed, "Generate random branching and weights from this seed");
  cmd->add_option("--max-branching", tree.max_branching, "Upper branching bound for --random-tree");
}

void add_target_options(CLI::App* cmd, TargetSpec& target) {
  cmd->add_option("--target", target.file, "Step function file");
  cmd->add_option("--target-const", target.constant, "Constant target, comma-separated coordinates");
  cmd->add_option("--target-index", target.index, "Use h_k of the target enumeration");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact construction and verification of frequently universal harmonic functions on trees"};
  app.require_subcommand(1);

  GenTreeConfig gen;
  auto* gen_cmd = app.add_subcommand("gen-tree", "Write a tree file");
  add_tree_options(gen_cmd, gen.tree);
  gen_cmd->add_option("--depth", gen.tree.depth, "Tree depth")->required();
  gen_cmd->add_option("--out", gen.out, "Output file (default stdout)");

  ScheduleConfig sched;
  auto* sched_cmd = app.add_subcommand("schedule", "Report l(k), r_k and their identities up to a horizon");
  sched_cmd->add_option("--horizon", sched.horizon, "Number of steps K")->required();
  sched_cmd->add_option("--out", sched.out, "Output file (default stdout)");

  BuildConfig build;
  auto* build_cmd = app.add_subcommand("build", "Build a frequently universal harmonic function");
  add_tree_options(build_cmd, build.tree);
  build_cmd->add_option("--depth", build.depth, "Depth budget D (default: tree depth)");
  build_cmd->add_option("--space", build.space.kind, "scalar | product | weighted_product")->capture_default_str();
  build_cmd->add_option("--dim", build.space.dim, "Dimension of product spaces")->capture_default_str();
  build_cmd->add_option("--targets-seed", build.targets_seed, "Seed of the target enumeration")->capture_default_str();
  build_cmd->add_option("--out", build.out, "Function file")->required();
  build_cmd->add_option("--log", build.log, "Build log file (default stdout)");
  build_cmd->add_option("--log-sacrificed", build.log_sacrificed, "Sacrificed vertices listed per step")
      ->capture_default_str();

  BuildXConfig bx;
  auto* bx_cmd = app.add_subcommand("build-x", "Build a witness whose hit set has upper density near 1");
  add_tree_options(bx_cmd, bx.tree);
  add_target_options(bx_cmd, bx.target);
  bx_cmd->add_option("--depth", bx.depth, "Depth of the witness (default: tree depth)");
  bx_cmd->add_option("--space", bx.space.kind, "scalar | product | weighted_product")->capture_default_str();
  bx_cmd->add_option("--dim", bx.space.dim, "Dimension of product spaces")->capture_default_str();
  bx_cmd->add_option("--targets-seed", bx.targets_seed, "Seed for --target-index")->capture_default_str();
  bx_cmd->add_option("--epsilon", bx.epsilon, "Ball radius, an exact fraction")->required();
  bx_cmd->add_option("--m", bx.m, "Required hit fraction is above 1 - 1/m")->capture_default_str();
  bx_cmd->add_option("--out", bx.out, "Function file");
  bx_cmd->add_option("--log", bx.log, "Checkpoint report (default stdout)");

  SpanConfig span;
  auto* span_cmd = app.add_subcommand("span", "Check that a linear combination of components stays universal");
  add_tree_options(span_cmd, span.tree);
  add_target_options(span_cmd, span.target);
  span_cmd->add_option("--function", span.function, "Prebuilt product-valued function file");
  span_cmd->add_option("--dim", span.dim, "Number of components built")->capture_default_str();
  span_cmd->add_option("--depth", span.depth, "Depth budget for the build");
  span_cmd->add_option("--targets-seed", span.targets_seed, "Seed of the target enumeration")->capture_default_str();
  span_cmd->add_option("--coeffs", span.coefficients, "Coefficients a_1..a_s, comma-separated")->required();
  span_cmd->add_option("--M", span.M, "Target radius is 2^-M")->capture_default_str();
  span_cmd->add_option("--horizon", span.horizon, "Largest level inspected (default: depth)");
  span_cmd->add_option("--out", span.out, "Report file (default stdout)");

  AnalyzeConfig an;
  auto* an_cmd = app.add_subcommand("analyze", "Hit set and density profile of a function for one ball");
  an_cmd->add_option("--function", an.function, "Function file")->required();
  add_target_options(an_cmd, an.target);
  an_cmd->add_option("--targets-seed", an.targets_seed, "Seed for --target-index")->capture_default_str();
  an_cmd->add_option("--epsilon", an.epsilon, "Ball radius, an exact fraction")->required();
  an_cmd->add_option("--horizon", an.horizon, "Largest level N (default: function depth)");
  an_cmd->add_option("--checkpoints", an.checkpoints, "Comma-separated levels (default: N/2..N)");
  an_cmd->add_option("--out", an.out, "Report file (default stdout)");
  an_cmd->add_option("--csv", an.csv, "Also write a per-level CSV table");

  VerifyConfig ver;
  auto* ver_cmd = app.add_subcommand("verify", "Exact checks on a function file");
  ver_cmd->add_option("--function", ver.function, "Function file")->required();
  ver_cmd->add_option("--out", ver.out, "Report file (default stdout)");

  ExportConfig ex;
  auto* ex_cmd = app.add_subcommand("export", "Write the boundary trace of a function at one level");
  ex_cmd->add_option("--function", ex.function, "Function file")->required();
  ex_cmd->add_option("--level", ex.level, "Trace level n")->required();
  ex_cmd->add_option("--format", ex.format, "json | csv")->capture_default_str();
  ex_cmd->add_option("--out", ex.out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen_cmd) return cmd_gen_tree(gen, std::cout);
    if (*sched_cmd) return cmd_schedule(sched, std::cout);
    if (*build_cmd) return cmd_build(build, std::cout);
    if (*bx_cmd) return cmd_build_x(bx, std::cout);
    if (*span_cmd) return cmd_span(span, std::cout);
    if (*an_cmd) return cmd_analyze(an, std::cout);
    if (*ver_cmd) return cmd_verify(ver, std::cout);
    if (*ex_cmd) return cmd_export(ex, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
