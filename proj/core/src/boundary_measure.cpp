#include "harmtree/boundary_measure.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace harmtree {

namespace {

constexpr std::uint64_t kMaxListed = std::uint64_t{1} << 26;

void check_level(const Tree& tree, std::uint32_t n) {
  if (n > tree.depth()) {
    throw std::out_of_range("level " + std::to_string(n) + " exceeds tree depth " + std::to_string(tree.depth()));
  }
  if (tree.level_size(n) > kMaxListed) throw std::length_error("level too wide to list explicitly");
}

}  // namespace

Rational sector_measure(const Tree& tree, Vertex x) {
  Rational p = 1;
  ShapeId s = tree.root_shape();
  for (auto c : tree.path(x)) {
    const auto& sh = tree.shape(s);
    p *= sh.weights[c];
    s = sh.children[c];
  }
  return p;
}

Rational SectorPartition::total() const {
  Rational sum = 0;
  for (const auto& m : measures) sum += m;
  return sum;
}

SectorPartition level_partition(const Tree& tree, std::uint32_t n) {
  check_level(tree, n);
  SectorPartition out;
  out.level = n;
  out.sectors.reserve(tree.level_size(n));
  out.measures.reserve(tree.level_size(n));
  auto walk = [&](auto&& self, ShapeId s, std::uint32_t at, const Rational& p) -> void {
    if (at == n) {
      out.sectors.push_back(Vertex{n, out.sectors.size()});
      out.measures.push_back(p);
      return;
    }
    const auto& sh = tree.shape(s);
    for (std::size_t c = 0; c < sh.children.size(); ++c) self(self, sh.children[c], at + 1, Rational(p * sh.weights[c]));
  };
  walk(walk, tree.root_shape(), 0, Rational(1));
  return out;
}

std::vector<std::uint64_t> refinement_map(const Tree& tree, std::uint32_t n, std::uint32_t m) {
  if (n >= m) throw std::out_of_range("refinement needs n < m");
  check_level(tree, m);
  std::vector<std::uint64_t> out;
  out.reserve(tree.level_size(m));
  std::uint64_t coarse = 0;
  auto walk = [&](auto&& self, ShapeId s, std::uint32_t at) -> void {
    if (at == m) {
      out.push_back(coarse - 1);
      return;
    }
    if (at == n) ++coarse;
    for (ShapeId c : tree.shape(s).children) self(self, c, at + 1);
  };
  walk(walk, tree.root_shape(), 0);
  return out;
}

std::vector<Rational> push_forward(const SectorPartition& fine, const std::vector<std::uint64_t>& map,
                                   std::uint64_t coarse_size) {
  if (map.size() != fine.measures.size()) throw std::invalid_argument("refinement map does not match partition");
  std::vector<Rational> out(coarse_size, Rational(0));
  for (std::size_t i = 0; i < map.size(); ++i) out.at(map[i]) += fine.measures[i];
  return out;
}

std::vector<std::pair<ShapeId, Rational>> shape_mass(const Tree& tree, std::uint32_t n) {
  if (n > tree.depth()) throw std::out_of_range("level " + std::to_string(n) + " exceeds tree depth");
  std::map<ShapeId, Rational> current{{tree.root_shape(), Rational(1)}};
  for (std::uint32_t level = 0; level < n; ++level) {
    std::map<ShapeId, Rational> next;
    for (const auto& [s, mass] : current) {
      const auto& sh = tree.shape(s);
      for (std::size_t c = 0; c < sh.children.size(); ++c) next[sh.children[c]] += mass * sh.weights[c];
    }
    current = std::move(next);
  }
  return {current.begin(), current.end()};
}

}  // namespace harmtree
