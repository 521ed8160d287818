#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "harmtree/rational.hpp"
#include "harmtree/tree.hpp"

namespace harmtree {

/// p(B_x): product of the transition weights along the geodesic from the root.
Rational sector_measure(const Tree& tree, Vertex x);

/// The level-n partition {B_x : x in T_n} of the boundary with exact measures.
struct SectorPartition {
  std::uint32_t level = 0;
  std::vector<Vertex> sectors;    // T_n in index order
  std::vector<Rational> measures; // aligned with sectors

  Rational total() const;
};

/// Throws std::out_of_range if n exceeds the tree depth, std::length_error
/// if the level is too wide to list.
SectorPartition level_partition(const Tree& tree, std::uint32_t n);

/// For each level-m sector (in index order), the index of its level-n ancestor.
std::vector<std::uint64_t> refinement_map(const Tree& tree, std::uint32_t n, std::uint32_t m);

/// Image measure of a fine partition under a refinement map.
std::vector<Rational> push_forward(const SectorPartition& fine, const std::vector<std::uint64_t>& map,
                                   std::uint64_t coarse_size);

/// Total measure of the level-n sectors grouped by subtree shape. Works at any
/// depth because vertices with the same shape are aggregated, never listed.
std::vector<std::pair<ShapeId, Rational>> shape_mass(const Tree& tree, std::uint32_t n);

}  // namespace harmtree
