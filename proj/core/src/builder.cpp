#include "harmtree/builder.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>

#include "harmtree/boundary_measure.hpp"
#include "harmtree/scheduler.hpp"

namespace harmtree {

namespace {

/// Child c of a step-function node; leaves stand for themselves below their level.
NodeId step_child(const Tree& tree, ShapeId s, const NodeStore& store, NodeId id, std::size_t c) {
  const Node& n = store[id];
  if (n.children.empty()) return id;
  if (n.children.size() != tree.shape(s).children.size()) {
    throw std::invalid_argument("target does not fit the tree's branching");
  }
  return n.children[c];
}

PathChoice greedy_path(const Tree& tree, ShapeId s, std::uint32_t n) {
  PathChoice out;
  out.probability = 1;
  ShapeId cur = s;
  for (std::uint32_t i = 0; i < n; ++i) {
    const auto& sh = tree.shape(cur);
    if (sh.children.empty()) throw std::out_of_range("tree ends above the extension depth");
    std::size_t best = 0;
    for (std::size_t c = 1; c < sh.children.size(); ++c) {
      if (sh.weights[c] <= sh.weights[best]) best = c;
    }
    out.path.push_back(static_cast<std::uint32_t>(best));
    out.probability *= sh.weights[best];
    cur = sh.children[best];
  }
  return out;
}

}  // namespace

std::vector<Sacrifice> sacrificed(const Tree& tree, const ExtensionReport& report, std::uint64_t limit) {
  std::vector<Sacrifice> out;
  const std::uint64_t count = std::min(limit, tree.level_size(report.s));
  out.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    const Vertex v{report.s, i};
    const auto& choice = report.choices.at(tree.shape_of(v));
    auto path = tree.path(v);
    path.insert(path.end(), choice.path.begin(), choice.path.end());
    out.push_back({v, tree.at_path(path), choice.probability});
  }
  return out;
}

Extension extend_step(const Tree& tree, const HarmonicFunction& phi, const StepFunction& h, std::uint32_t n) {
  const std::uint32_t s = phi.depth();
  if (n < 1) throw std::invalid_argument("extension length n must be at least 1");
  if (static_cast<std::uint64_t>(s) + n > tree.depth()) {
    throw std::out_of_range("depth overflow: s + n = " + std::to_string(std::uint64_t{s} + n) +
                            " exceeds tree depth " + std::to_string(tree.depth()));
  }
  if (h.level() > s + n) {
    throw std::invalid_argument("target level " + std::to_string(h.level()) + " exceeds s + n = " +
                                std::to_string(s + n));
  }
  if (!(h.space() == phi.space())) throw DimensionError("target and function live in different spaces");
  if (phi.interior_depth() < static_cast<int>(s) - 1) {
    throw std::invalid_argument("phi is only asserted harmonic to level " + std::to_string(phi.interior_depth()) +
                                ", extension needs level " + std::to_string(static_cast<int>(s) - 1));
  }
  if (auto diags = check_harmonic(tree, phi); !diags.empty()) {
    throw std::invalid_argument("phi is not harmonic: " + diags.front().message);
  }

  const std::uint32_t bottom = s + n;
  const auto& ps = phi.store();
  const auto& hs = h.store();
  NodeBuilder nb;

  std::unordered_map<ShapeId, PathChoice> choice_memo;
  auto choice = [&](ShapeId shape) -> const PathChoice& {
    auto it = choice_memo.find(shape);
    if (it == choice_memo.end()) it = choice_memo.emplace(shape, greedy_path(tree, shape, n)).first;
    return it->second;
  };

  // Off-path subtrees: every vertex is the q-average of its children, leaves copy h.
  std::unordered_map<std::tuple<ShapeId, NodeId, std::uint32_t>, NodeId, IdTupleHash> sub_memo;
  auto sub = [&](auto&& self, ShapeId shape, NodeId hn, std::uint32_t at) -> NodeId {
    if (at == bottom) return nb.leaf(hs[hn].value);
    const auto key = std::make_tuple(shape, hn, at);
    if (auto it = sub_memo.find(key); it != sub_memo.end()) return it->second;
    const auto& sh = tree.shape(shape);
    if (sh.children.empty()) throw std::out_of_range("tree ends above the extension depth");
    std::vector<NodeId> kids;
    Value mean = zero(h.space());
    for (std::size_t c = 0; c < sh.children.size(); ++c) {
      kids.push_back(self(self, sh.children[c], step_child(tree, shape, hs, hn, c), at + 1));
      mean += sh.weights[c] * nb[kids.back()].value;
    }
    const NodeId out = nb.make(std::move(mean), std::move(kids));
    sub_memo.emplace(key, out);
    return out;
  };

  std::unordered_map<std::tuple<ShapeId, NodeId, NodeId>, NodeId, IdTupleHash> complete_memo;
  auto complete = [&](ShapeId shape, NodeId pn, NodeId hn) -> NodeId {
    const auto key = std::make_tuple(shape, pn, hn);
    if (auto it = complete_memo.find(key); it != complete_memo.end()) return it->second;
    const auto& pc = choice(shape);
    std::vector<ShapeId> shapes{shape};
    std::vector<NodeId> hnodes{hn};
    std::vector<Value> vals{ps[pn].value};
    std::vector<std::vector<NodeId>> kids(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      const auto& sh = tree.shape(shapes[i]);
      const std::uint32_t p = pc.path[i];
      Value rest = zero(h.space());
      kids[i].resize(sh.children.size());
      for (std::size_t c = 0; c < sh.children.size(); ++c) {
        if (c == p) continue;
        kids[i][c] = sub(sub, sh.children[c], step_child(tree, shapes[i], hs, hnodes[i], c), s + i + 1);
        rest += sh.weights[c] * nb[kids[i][c]].value;
      }
      vals.push_back(Rational(1 / sh.weights[p]) * (vals[i] - rest));
      shapes.push_back(sh.children[p]);
      hnodes.push_back(step_child(tree, shapes[i], hs, hnodes[i], p));
    }
    NodeId node = nb.leaf(vals[n]);
    for (std::uint32_t i = n; i-- > 0;) {
      kids[i][pc.path[i]] = node;
      node = nb.make(vals[i], std::move(kids[i]));
    }
    complete_memo.emplace(key, node);
    return node;
  };

  std::unordered_map<std::tuple<ShapeId, NodeId, NodeId>, NodeId, IdTupleHash> copy_memo;
  auto copy = [&](auto&& self, ShapeId shape, NodeId pn, NodeId hn, std::uint32_t at) -> NodeId {
    if (at == s) return complete(shape, pn, hn);
    const auto key = std::make_tuple(shape, pn, hn);
    if (auto it = copy_memo.find(key); it != copy_memo.end()) return it->second;
    const auto& sh = tree.shape(shape);
    const auto& pk = ps[pn].children;
    if (pk.size() != sh.children.size()) throw std::invalid_argument("phi does not fit the tree's branching");
    std::vector<NodeId> kids;
    for (std::size_t c = 0; c < sh.children.size(); ++c) {
      kids.push_back(self(self, sh.children[c], pk[c], step_child(tree, shape, hs, hn, c), at + 1));
    }
    const NodeId out = nb.make(ps[pn].value, std::move(kids));
    copy_memo.emplace(key, out);
    return out;
  };

  const NodeId root = copy(copy, tree.root_shape(), phi.root(), h.root(), 0);
  Extension out{HarmonicFunction(phi.space(), bottom, static_cast<int>(bottom) - 1, nb.finish(), root), {}};

  auto& report = out.report;
  report.s = s;
  report.n = n;
  report.sacrificed_count = tree.level_size(s);
  for (const auto& [shape, mass] : shape_mass(tree, s)) {
    const auto& pc = choice(shape);
    report.choices.emplace(shape, pc);
    report.bad_mass += mass * pc.probability;
    report.max_path_probability = std::max(report.max_path_probability, pc.probability);
  }
  report.achieved_distance = l0_distance(tree, boundary_trace(tree, out.psi, bottom), h);
  return out;
}

bool BuildResult::verified() const {
  return harmonic_diagnostics.empty() && std::all_of(log.begin(), log.end(), [](const BuildStep& s) { return s.member; });
}

BuildResult build_frequently_universal(const Tree& tree, const TargetSource& targets, std::uint32_t depth) {
  if (depth > tree.depth()) {
    throw std::out_of_range("depth budget " + std::to_string(depth) + " exceeds tree depth " +
                            std::to_string(tree.depth()));
  }
  if (depth < r(1)) throw std::invalid_argument("depth budget is below r_1 = 1");
  const auto& space = targets.space();
  const std::uint64_t K = steps_within_depth(depth);

  std::map<std::uint32_t, StepFunction> cache;
  auto target = [&](std::uint32_t index) -> const StepFunction& {
    auto it = cache.find(index);
    if (it == cache.end()) it = cache.emplace(index, targets.target(index)).first;
    return it->second;
  };

  HarmonicFunction f = HarmonicFunction::seed(space, zero(space));
  std::vector<BuildStep> log;
  for (std::uint64_t k = 1; k <= K; ++k) {
    BuildStep step;
    step.k = k;
    step.s = static_cast<std::uint32_t>(r(k - 1));
    step.ell = ell(k);
    step.r = static_cast<std::uint32_t>(r(k));
    step.radius = pow2(-static_cast<long>(step.ell));
    auto ext = extend_step(tree, f, target(step.ell), step.ell);
    step.bad_mass = ext.report.bad_mass;
    step.achieved_distance = ext.report.achieved_distance;
    step.extension = std::move(ext.report);
    f = std::move(ext.psi);
    log.push_back(std::move(step));
  }
  for (auto& step : log) {
    step.final_distance = l0_distance(tree, boundary_trace(tree, f, step.r), target(step.ell));
    step.member = step.final_distance < step.radius;
  }
  auto diags = check_harmonic(tree, f);
  return BuildResult{std::move(f), std::move(log), std::move(diags)};
}

Translation translate(const Tree& tree, const HarmonicFunction& f0, const HarmonicFunction& phi) {
  if (!(f0.space() == phi.space())) throw DimensionError("functions live in different spaces");
  if (phi.depth() > f0.depth()) {
    throw std::invalid_argument("phi is deeper than f0: " + std::to_string(phi.depth()) + " vs " +
                                std::to_string(f0.depth()));
  }
  const HarmonicFunction tail = constant_tail_extend(tree, phi, f0.depth());
  return Translation{add(f0, tail), constant_tail_level(tail)};
}

XWitness build_x_class_witness(const Tree& tree, const StepFunction& target, const Rational& epsilon,
                               std::uint32_t m, std::uint32_t depth) {
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be positive");
  if (m < 1) throw std::invalid_argument("m must be at least 1");
  if (depth > tree.depth()) throw std::out_of_range("depth exceeds tree depth");

  std::uint32_t n1 = std::max<std::uint32_t>(target.level(), 1);
  while (pow2(n1) * epsilon < 1) ++n1;
  const std::uint64_t sigma = std::uint64_t{m - 1} * n1 + 1;
  const std::uint64_t N0 = n1 + sigma;
  if (N0 > depth) {
    throw std::invalid_argument("depth " + std::to_string(depth) + " too small: the run needs N0 = " +
                                std::to_string(N0));
  }

  const auto& space = target.space();
  auto ext = extend_step(tree, HarmonicFunction::seed(space, zero(space)), target, n1);
  XWitness out{constant_tail_extend(tree, ext.psi, depth), n1, static_cast<std::uint32_t>(sigma),
               static_cast<std::uint32_t>(N0), {}, {}, {}};
  out.hits = hit_set(tree, out.f, Ball{target, epsilon}, out.N0);
  out.hit_fraction = out.hits.profile.at(out.N0);
  out.threshold = 1 - Rational(1, m);
  return out;
}

}  // namespace harmtree
