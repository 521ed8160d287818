#include "commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "harmtree/boundary_measure.hpp"
#include "harmtree/builder.hpp"
#include "harmtree/density.hpp"
#include "harmtree/genericity.hpp"
#include "harmtree/harmonic.hpp"
#include "harmtree/scheduler.hpp"

namespace harmtree::cli {

namespace {

void put(Json& j, const std::string& key, const Rational& q) {
  j[key] = to_string(q);
  j[key + "_approx"] = approx(q);
}

void emit(const Json& doc, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << doc.dump(2) << '\n';
  } else {
    write_json_file(path, doc);
  }
}

std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) throw std::invalid_argument("empty entry in list \"" + text + "\"");
    out.push_back(item);
  }
  return out;
}

Json tree_summary(const Tree& tree) {
  Json j;
  j["depth"] = tree.depth();
  j["vertex_count"] = tree.vertex_count();
  j["shape_count"] = tree.shape_count();
  return j;
}

Json diagnostics_json(const std::vector<Diagnostic>& diags) {
  Json j = Json::array();
  for (const auto& d : diags) j.push_back({{"kind", d.kind}, {"vertex", d.vertex}, {"message", d.message}});
  return j;
}

Json index_list(const std::vector<std::uint32_t>& v) {
  Json j = Json::array();
  for (auto n : v) j.push_back(n);
  return j;
}

HarmonicFunction load_function(const std::string& path, Tree& tree) {
  const Json doc = read_json_file(path);
  tree = tree_of_function_document(doc);
  return harmonic_from_json(tree, doc);
}

std::uint32_t resolve_depth(const Tree& tree, const std::optional<std::uint32_t>& depth) {
  const std::uint32_t d = depth.value_or(tree.depth());
  if (d > tree.depth()) {
    throw std::invalid_argument("depth budget " + std::to_string(d) + " exceeds tree depth " +
                                std::to_string(tree.depth()));
  }
  return d;
}

Json step_json(const Tree& tree, const BuildStep& step, std::uint64_t limit) {
  Json j;
  j["k"] = step.k;
  j["s"] = step.s;
  j["n"] = step.ell;
  j["r"] = step.r;
  j["target_index"] = step.ell;
  put(j, "radius", step.radius);
  put(j, "achieved_distance", step.achieved_distance);
  put(j, "final_distance", step.final_distance);
  j["member"] = step.member;
  put(j, "bad_mass", step.bad_mass);
  put(j, "max_path_probability", step.extension.max_path_probability);
  j["sacrificed_count"] = step.extension.sacrificed_count;
  Json sac = Json::array();
  for (const auto& x : sacrificed(tree, step.extension, limit)) {
    sac.push_back({{"v", tree.ordinal(x.v)}, {"w", tree.ordinal(x.w)}, {"probability", to_string(x.probability)}});
  }
  j["sacrificed"] = std::move(sac);
  j["sacrificed_truncated"] = step.extension.sacrificed_count > limit;
  return j;
}

Json hit_report_json(const HitReport& report, const Rational& epsilon, const std::vector<std::uint32_t>& checkpoints) {
  Json j;
  j["horizon"] = report.horizon;
  put(j, "epsilon", epsilon);
  j["indices"] = index_list(report.indices);
  Json profile = Json::array();
  for (std::uint32_t n = 0; n <= report.horizon; ++n) {
    Json row;
    row["n"] = n;
    if (report.distances[n]) put(row, "distance", *report.distances[n]);
    row["hit"] = report.contains(n);
    put(row, "density", report.profile[n]);
    profile.push_back(std::move(row));
  }
  j["profile"] = std::move(profile);
  j["checkpoints"] = index_list(checkpoints);
  put(j, "lower_density_estimate", lower_density_estimate(report, checkpoints));
  put(j, "upper_density_estimate", upper_density_estimate(report, checkpoints));
  j["note"] = "density estimates are min/max of the running density over the checkpoints, not limits";
  return j;
}

}  // namespace

std::vector<Rational> parse_fraction_list(const std::string& text) {
  std::vector<Rational> out;
  for (const auto& item : split(text)) out.push_back(parse_rational(item));
  return out;
}

Tree load_tree(const TreeSource& source) {
  if (!source.file.empty()) {
    const Json doc = read_json_file(source.file);
    if (doc.is_object() && doc.contains("tree")) return tree_of_function_document(doc);
    return tree_from_json(doc);
  }
  if (source.depth == 0) throw std::invalid_argument("give --tree FILE or a positive --depth");
  if (source.random_seed) {
    return random_tree(source.branching, std::max(source.branching, source.max_branching), source.depth,
                       *source.random_seed);
  }
  if (source.weights.empty()) return build_homogeneous(source.branching, source.depth);
  return build_homogeneous(source.branching, source.depth, parse_fraction_list(source.weights));
}

ValueSpace make_space(const SpaceSpec& spec) {
  if (spec.kind == "scalar") {
    if (spec.dim != 1) throw DimensionError("the scalar space has dimension 1");
    return ValueSpace::scalar();
  }
  if (spec.kind == "product") return ValueSpace::product(spec.dim);
  if (spec.kind == "weighted_product") return ValueSpace::weighted_product(spec.dim);
  return ValueSpace::parse(spec.kind);
}

StepFunction load_target(const Tree& tree, const ValueSpace& space, const TargetSpec& spec, std::uint64_t seed) {
  const int given = !spec.file.empty() + !spec.constant.empty() + spec.index.has_value();
  if (given != 1) throw std::invalid_argument("give exactly one of --target, --target-const, --target-index");
  if (!spec.file.empty()) {
    auto h = step_function_from_json(tree, read_json_file(spec.file));
    if (!(h.space() == space)) {
      throw DimensionError("target lives in " + h.space().name() + ", expected " + space.name());
    }
    return h;
  }
  if (!spec.constant.empty()) {
    Value v(parse_fraction_list(spec.constant));
    space.require(v);
    return StepFunction::constant(space, v);
  }
  return TargetEnumeration(tree, space, seed).target(*spec.index);
}

int cmd_gen_tree(const GenTreeConfig& config, std::ostream& out) {
  const Tree tree = load_tree(config.tree);
  const auto diags = validate(tree);
  emit(tree_to_json(tree), config.out, out);
  return diags.empty() ? 0 : 1;
}

int cmd_schedule(const ScheduleConfig& config, std::ostream& out) {
  if (config.horizon < 1) throw std::invalid_argument("--horizon must be at least 1");
  const auto schedule = Schedule::up_to(config.horizon);
  bool ok = true;
  Json doc;
  doc["horizon"] = config.horizon;
  Json rows = Json::array();
  for (std::uint64_t k = 1; k <= config.horizon; ++k) {
    rows.push_back({{"k", k}, {"ell", schedule.ell[k - 1]}, {"r", schedule.r[k - 1]}});
  }
  doc["steps"] = std::move(rows);

  std::uint32_t top = 0;
  while ((std::uint64_t{1} << (top + 1)) <= config.horizon) ++top;
  Json powers = Json::array();
  for (std::uint32_t N = 0; N <= top; ++N) {
    const auto value = schedule.r[(std::uint64_t{1} << N) - 1];
    const auto expected = (std::uint64_t{1} << (N + 1)) - 1;
    ok = ok && value == expected;
    powers.push_back({{"N", N}, {"r", value}, {"expected", expected}, {"ok", value == expected}});
  }
  doc["powers_of_two"] = std::move(powers);

  Json counts = Json::array();
  for (std::uint32_t N = 1; N <= top; ++N) {
    for (std::uint32_t m = 1; m <= N; ++m) {
      std::uint64_t count = 0;
      for (std::uint64_t k = 1; k <= (std::uint64_t{1} << N); ++k) count += schedule.ell[k - 1] == m;
      const auto expected = std::uint64_t{1} << (N - m);
      ok = ok && count == expected;
      counts.push_back({{"N", N}, {"m", m}, {"count", count}, {"expected", expected}, {"ok", count == expected}});
    }
  }
  doc["ell_counts"] = std::move(counts);

  Json densities = Json::array();
  const auto bound = schedule.r.back();
  for (std::uint32_t m = 1; m <= top; ++m) {
    const auto levels = hit_levels(m, bound);
    const Rational expected = pow2(-static_cast<long>(m) - 1);
    for (const auto& c : levels.checkpoints) {
      Json row{{"m", m}, {"N", c.N}, {"horizon", c.horizon}, {"count", c.count}};
      put(row, "ratio", c.ratio);
      row["expected"] = to_string(expected);
      row["ok"] = c.ratio == expected;
      ok = ok && c.ratio == expected;
      densities.push_back(std::move(row));
    }
  }
  doc["checkpoint_densities"] = std::move(densities);
  doc["ok"] = ok;
  emit(doc, config.out, out);
  return ok ? 0 : 1;
}

int cmd_build(const BuildConfig& config, std::ostream& out) {
  TreeSource source = config.tree;
  if (source.file.empty() && source.depth == 0 && config.depth) source.depth = *config.depth;
  const Tree tree = load_tree(source);
  const ValueSpace space = make_space(config.space);
  const std::uint32_t depth = resolve_depth(tree, config.depth);
  const TargetEnumeration targets(tree, space, config.targets_seed);
  const auto result = build_frequently_universal(tree, targets, depth);

  if (!config.out.empty()) write_json_file(config.out, harmonic_to_json(tree, result.f));

  Json log;
  log["command"] = "build";
  log["tree"] = tree_summary(tree);
  log["space"] = space.name();
  log["depth_budget"] = depth;
  log["targets_seed"] = config.targets_seed;
  log["function_depth"] = result.f.depth();
  log["node_count"] = result.f.node_count();
  Json steps = Json::array();
  for (const auto& step : result.log) steps.push_back(step_json(tree, step, config.log_sacrificed));
  log["steps"] = std::move(steps);
  Json hits = Json::object();
  for (const auto& step : result.log) {
    auto& list = hits[std::to_string(step.ell)];
    if (list.is_null()) list = Json::array();
    list.push_back(step.r);
  }
  log["hit_levels_by_target"] = std::move(hits);
  log["harmonic_diagnostics"] = diagnostics_json(result.harmonic_diagnostics);
  log["verified"] = result.verified();
  emit(log, config.log, out);
  return result.verified() ? 0 : 1;
}

int cmd_build_x(const BuildXConfig& config, std::ostream& out) {
  TreeSource source = config.tree;
  if (source.file.empty() && source.depth == 0 && config.depth) source.depth = *config.depth;
  const Tree tree = load_tree(source);
  const ValueSpace space = make_space(config.space);
  const std::uint32_t depth = resolve_depth(tree, config.depth);
  if (config.epsilon.empty()) throw std::invalid_argument("--epsilon is required");
  const Rational epsilon = parse_rational(config.epsilon);
  const StepFunction target = load_target(tree, space, config.target, config.targets_seed);
  const auto w = build_x_class_witness(tree, target, epsilon, config.m, depth);

  if (!config.out.empty()) write_json_file(config.out, harmonic_to_json(tree, w.f));
  Json log;
  log["command"] = "build-x";
  log["tree"] = tree_summary(tree);
  log["space"] = space.name();
  log["m"] = config.m;
  put(log, "epsilon", epsilon);
  log["n1"] = w.n1;
  log["sigma"] = w.sigma;
  log["N0"] = w.N0;
  log["hits"] = index_list(w.hits.indices);
  log["hit_count"] = w.hits.count_up_to(w.N0);
  put(log, "hit_fraction", w.hit_fraction);
  put(log, "threshold", w.threshold);
  log["achieved"] = w.achieved();
  emit(log, config.log, out);
  return w.achieved() ? 0 : 1;
}

int cmd_span(const SpanConfig& config, std::ostream& out) {
  Tree tree = build_homogeneous(2, 1);
  std::optional<HarmonicFunction> F;
  std::optional<TargetEnumeration> targets;
  if (!config.function.empty()) {
    F = load_function(config.function, tree);
  } else {
    TreeSource source = config.tree;
    if (source.file.empty() && source.depth == 0 && config.depth) source.depth = *config.depth;
    tree = load_tree(source);
    const std::uint32_t depth = resolve_depth(tree, config.depth);
    targets.emplace(tree, ValueSpace::product(config.dim), config.targets_seed);
    auto built = build_vector_universal(tree, config.dim, *targets, depth);
    if (!built.verified()) throw std::runtime_error("vector build failed its own verification");
    F = std::move(built.f);
  }
  if (config.coefficients.empty()) throw std::invalid_argument("--coeffs is required");
  const auto coeffs = parse_fraction_list(config.coefficients);
  const StepFunction h = load_target(tree, ValueSpace::scalar(), config.target, config.targets_seed);
  const std::uint32_t horizon = config.horizon.value_or(F->depth());
  const auto report = combine_and_verify(tree, *F, coeffs, h, config.M, horizon);

  Json doc;
  doc["command"] = "span";
  Json cs = Json::array();
  for (const auto& a : coeffs) cs.push_back(to_string(a));
  doc["coefficients"] = std::move(cs);
  doc["M"] = config.M;
  doc["horizon"] = horizon;
  put(doc, "epsilon", report.vee.epsilon);
  put(doc, "bound", report.bound);
  Json radii = Json::array();
  for (const auto& b : report.vee.ball.factors) radii.push_back(to_string(b.radius));
  doc["radii"] = std::move(radii);
  doc["vee_hits"] = index_list(report.vee_hits);
  doc["target_hits"] = index_list(report.target_hits);
  doc["exceptions"] = index_list(report.exceptions);
  doc["inclusion_holds"] = report.inclusion_holds();
  Json entries = Json::array();
  for (const auto& e : report.entries) {
    Json row{{"n", e.n}, {"in_vee", e.in_vee}};
    put(row, "distance", e.distance);
    row["in_target"] = e.in_target;
    entries.push_back(std::move(row));
  }
  doc["entries"] = std::move(entries);
  bool ok = report.inclusion_holds() && report.harmonic_diagnostics.empty();
  if (targets) {
    const auto sure = guaranteed_vee_hits(tree, report.vee, *targets, horizon);
    doc["guaranteed_vee_hits"] = index_list(sure);
    for (auto n : sure) ok = ok && std::binary_search(report.vee_hits.begin(), report.vee_hits.end(), n);
  }
  doc["harmonic_diagnostics"] = diagnostics_json(report.harmonic_diagnostics);
  doc["ok"] = ok;
  emit(doc, config.out, out);
  return ok ? 0 : 1;
}

int cmd_analyze(const AnalyzeConfig& config, std::ostream& out) {
  Tree tree = build_homogeneous(2, 1);
  const HarmonicFunction f = load_function(config.function, tree);
  if (config.epsilon.empty()) throw std::invalid_argument("--epsilon is required");
  const Rational epsilon = parse_rational(config.epsilon);
  const StepFunction h = load_target(tree, f.space(), config.target, config.targets_seed);
  const std::uint32_t N = config.horizon.value_or(f.depth());
  const auto report = hit_set(tree, f, Ball{h, epsilon}, N);
  std::vector<std::uint32_t> checkpoints;
  if (!config.checkpoints.empty()) {
    for (const auto& item : split(config.checkpoints)) checkpoints.push_back(static_cast<std::uint32_t>(std::stoul(item)));
  } else {
    checkpoints = default_checkpoints(N);
  }
  Json doc = hit_report_json(report, epsilon, checkpoints);
  emit(doc, config.out, out);
  if (!config.csv.empty()) {
    std::ofstream csv(config.csv, std::ios::binary | std::ios::trunc);
    if (!csv) throw std::runtime_error(config.csv + ": cannot write file");
    csv << "n,distance,distance_approx,hit,running_density\n";
    for (std::uint32_t n = 0; n <= N; ++n) {
      csv << n << ',' << to_string(*report.distances[n]) << ',' << approx(*report.distances[n]) << ','
          << (report.contains(n) ? 1 : 0) << ',' << to_string(report.profile[n]) << '\n';
    }
  }
  return 0;
}

int cmd_verify(const VerifyConfig& config, std::ostream& out) {
  Tree tree = build_homogeneous(2, 1);
  const HarmonicFunction f = load_function(config.function, tree);
  bool ok = true;
  Json doc;
  doc["command"] = "verify";
  doc["tree"] = tree_summary(tree);
  doc["space"] = f.space().name();
  doc["depth"] = f.depth();
  doc["interior_depth"] = f.interior_depth();

  Json measures = Json::array();
  for (std::uint32_t n = 0; n <= f.depth(); ++n) {
    Rational total;
    for (const auto& entry : shape_mass(tree, n)) total += entry.second;
    ok = ok && total == 1;
    measures.push_back({{"level", n}, {"total", to_string(total)}, {"ok", total == 1}});
  }
  doc["measure_sums"] = std::move(measures);

  const auto diags = check_harmonic(tree, f);
  ok = ok && diags.empty();
  doc["harmonic_diagnostics"] = diagnostics_json(diags);

  Json martingale = Json::array();
  const int top = f.interior_depth() + 1;
  auto check = [&](std::uint32_t n, std::uint32_t m) {
    const bool good = martingale_check(tree, f, n, m);
    ok = ok && good;
    martingale.push_back({{"n", n}, {"m", m}, {"ok", good}});
  };
  if (diags.empty()) {
    for (int n = 0; n < top; ++n) check(static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(n) + 1);
    if (top > 1) check(0, static_cast<std::uint32_t>(top));
  }
  doc["martingale"] = std::move(martingale);
  doc["ok"] = ok;
  emit(doc, config.out, out);
  return ok ? 0 : 1;
}

int cmd_export(const ExportConfig& config, std::ostream& out) {
  Tree tree = build_homogeneous(2, 1);
  const HarmonicFunction f = load_function(config.function, tree);
  const StepFunction trace = boundary_trace(tree, f, config.level);
  if (config.format == "json") {
    emit(step_function_to_json(tree, trace), config.out, out);
    return 0;
  }
  if (config.format != "csv") throw std::invalid_argument("--format must be json or csv");
  std::ofstream file;
  if (!config.out.empty() && config.out != "-") {
    file.open(config.out, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error(config.out + ": cannot write file");
  }
  std::ostream& sink = file.is_open() ? file : out;
  sink << "sector,measure";
  for (std::size_t j = 0; j < f.space().dim(); ++j) sink << ",value_" << j;
  sink << '\n';
  const auto values = trace.sector_values(tree, config.level);
  for (std::uint64_t i = 0; i < values.size(); ++i) {
    sink << i << ',' << to_string(sector_measure(tree, Vertex{config.level, i}));
    for (std::size_t j = 0; j < values[i].dim(); ++j) sink << ',' << to_string(values[i][j]);
    sink << '\n';
  }
  return 0;
}

}  // namespace harmtree::cli
