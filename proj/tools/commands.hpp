#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "harmtree/io.hpp"
#include "harmtree/step_function.hpp"
#include "harmtree/targets.hpp"
#include "harmtree/tree.hpp"
#include "harmtree/value_space.hpp"

namespace harmtree::cli {

/// A tree file, or a generated tree.
struct TreeSource {
  std::string file;
  std::uint32_t branching = 2;
  std::uint32_t depth = 0;
  std::string weights;        // comma-separated fractions; empty means uniform
  std::optional<std::uint64_t> random_seed;
  std::uint32_t max_branching = 0;  // random trees: branching in [branching, max_branching]
};

/// What a ball is centered on. Exactly one of the fields is used.
struct TargetSpec {
  std::string file;                 // step function document
  std::string constant;             // comma-separated coordinates
  std::optional<std::uint64_t> index;  // h_k of the enumeration
};

struct SpaceSpec {
  std::string kind = "scalar";  // scalar | product | weighted_product
  std::size_t dim = 1;
};

struct GenTreeConfig {
  TreeSource tree;
  std::string out;
};

struct ScheduleConfig {
  std::uint64_t horizon = 0;
  std::string out;
};

struct BuildConfig {
  TreeSource tree;
  SpaceSpec space;
  std::optional<std::uint32_t> depth;
  std::uint64_t targets_seed = 0;
  std::string out;
  std::string log;
  std::uint64_t log_sacrificed = 1024;
};

struct BuildXConfig {
  TreeSource tree;
  SpaceSpec space;
  TargetSpec target;
  std::uint64_t targets_seed = 0;
  std::string epsilon;
  std::uint32_t m = 2;
  std::optional<std::uint32_t> depth;
  std::string out;
  std::string log;
};

struct SpanConfig {
  TreeSource tree;
  std::size_t dim = 2;
  std::optional<std::uint32_t> depth;
  std::uint64_t targets_seed = 0;
  std::string function;  // prebuilt product-valued function; built on the fly otherwise
  std::string coefficients;
  TargetSpec target;
  std::uint32_t M = 1;
  std::optional<std::uint32_t> horizon;
  std::string out;
};

struct AnalyzeConfig {
  std::string function;
  TargetSpec target;
  std::uint64_t targets_seed = 0;
  std::string epsilon;
  std::optional<std::uint32_t> horizon;
  std::string checkpoints;  // comma-separated levels; empty means [N/2, N]
  std::string out;
  std::string csv;
};

struct VerifyConfig {
  std::string function;
  std::string out;
};

struct ExportConfig {
  std::string function;
  std::uint32_t level = 0;
  std::string format = "json";  // json | csv
  std::string out;
};

Tree load_tree(const TreeSource& source);
ValueSpace make_space(const SpaceSpec& spec);
StepFunction load_target(const Tree& tree, const ValueSpace& space, const TargetSpec& spec, std::uint64_t seed);
std::vector<Rational> parse_fraction_list(const std::string& text);

// Each command writes its report to `out` (or the configured file) and
// returns the process exit status: 0 iff every exact check passed.
int cmd_gen_tree(const GenTreeConfig& config, std::ostream& out);
int cmd_schedule(const ScheduleConfig& config, std::ostream& out);
int cmd_build(const BuildConfig& config, std::ostream& out);
int cmd_build_x(const BuildXConfig& config, std::ostream& out);
int cmd_span(const SpanConfig& config, std::ostream& out);
int cmd_analyze(const AnalyzeConfig& config, std::ostream& out);
int cmd_verify(const VerifyConfig& config, std::ostream& out);
int cmd_export(const ExportConfig& config, std::ostream& out);

}  // namespace harmtree::cli
