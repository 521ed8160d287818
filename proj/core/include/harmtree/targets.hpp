#pragma once

#include <cstdint>
#include <vector>

#include "harmtree/step_function.hpp"
#include "harmtree/tree.hpp"
#include "harmtree/value_space.hpp"

namespace harmtree {

/// A source of approximation targets h_1, h_2, ... with level(h_k) <= k.
class TargetSource {
 public:
  virtual ~TargetSource() = default;
  virtual const ValueSpace& space() const = 0;
  /// h_k for k >= 1.
  virtual StepFunction target(std::uint64_t k) const = 0;
};

/// Dense enumeration of step functions with dyadic values.
///
/// Cells are grouped into blocks indexed by (level L, resolution R) in
/// Cantor-diagonal order (0,0), (0,1), (1,0), (0,2), (1,1), ... Block (L, R)
/// lists every assignment of grid values to the level-L sectors, where the
/// grid is {-R + j 2^-R : 0 <= j <= 2R 2^R} in each coordinate. Blocks whose
/// level exceeds the tree depth are skipped. A nonzero seed rotates the order
/// inside each block.
///
/// The target sequence reads cell c(k) = v2(k) + 1, so cell i appears exactly
/// at k = 2^(i-1) * odd: every cell recurs infinitely often with period 2^i.
/// Cell 1 is the constant 0, hit at every odd k.
class TargetEnumeration final : public TargetSource {
 public:
  TargetEnumeration(Tree tree, ValueSpace space, std::uint64_t seed = 0);

  const ValueSpace& space() const override { return space_; }
  StepFunction target(std::uint64_t k) const override;

  /// Cell index used for h_k.
  static std::uint64_t cell_index(std::uint64_t k);
  /// Gap between consecutive occurrences of a cell.
  static std::uint64_t recurrence_period(std::uint64_t cell);

  /// The i-th cell, i >= 1.
  StepFunction cell(std::uint64_t i) const;

  struct CellInfo {
    std::uint32_t level;
    std::uint32_t resolution;
    std::uint64_t pattern;  // index inside the block after rotation
  };
  CellInfo locate(std::uint64_t i) const;

 private:
  Tree tree_;
  ValueSpace space_;
  std::uint64_t seed_;
};

/// Explicit finite target list; h_k = list[k - 1].
class TargetList final : public TargetSource {
 public:
  TargetList(ValueSpace space, std::vector<StepFunction> targets);
  const ValueSpace& space() const override { return space_; }
  StepFunction target(std::uint64_t k) const override;
  std::size_t size() const { return targets_.size(); }

 private:
  ValueSpace space_;
  std::vector<StepFunction> targets_;
};

}  // namespace harmtree
