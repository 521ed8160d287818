#include "harmtree/targets.hpp"

#include <bit>
#include <limits>
#include <stdexcept>
#include <string>

namespace harmtree {

namespace {

constexpr std::uint64_t kSizeCap = std::uint64_t{1} << 62;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Block b of the Cantor diagonal over (level, resolution).
std::pair<std::uint32_t, std::uint32_t> block_coords(std::uint64_t b) {
  std::uint64_t t = 0;
  while ((t + 1) * (t + 2) / 2 <= b) ++t;
  const auto level = static_cast<std::uint32_t>(b - t * (t + 1) / 2);
  return {level, static_cast<std::uint32_t>(t - level)};
}

std::uint64_t grid_size(std::uint32_t resolution) {
  return 2 * std::uint64_t{resolution} * (std::uint64_t{1} << resolution) + 1;
}

/// grid^digits, saturated at kSizeCap.
std::uint64_t saturating_pow(std::uint64_t grid, std::uint64_t digits) {
  std::uint64_t out = 1;
  for (std::uint64_t i = 0; i < digits && grid > 1; ++i) {
    if (out > kSizeCap / grid) return kSizeCap;
    out *= grid;
  }
  return out;
}

}  // namespace

TargetEnumeration::TargetEnumeration(Tree tree, ValueSpace space, std::uint64_t seed)
    : tree_(std::move(tree)), space_(space), seed_(seed) {}

std::uint64_t TargetEnumeration::cell_index(std::uint64_t k) {
  if (k == 0) throw std::invalid_argument("target indices start at 1");
  return static_cast<std::uint64_t>(std::countr_zero(k)) + 1;
}

std::uint64_t TargetEnumeration::recurrence_period(std::uint64_t cell) {
  if (cell == 0 || cell > 63) throw std::out_of_range("cell index out of range");
  return std::uint64_t{1} << cell;
}

TargetEnumeration::CellInfo TargetEnumeration::locate(std::uint64_t i) const {
  if (i == 0) throw std::invalid_argument("cell indices start at 1");
  std::uint64_t remaining = i - 1;
  for (std::uint64_t b = 0;; ++b) {
    const auto [level, resolution] = block_coords(b);
    if (level > tree_.depth()) continue;
    const auto digits = static_cast<std::uint64_t>(space_.dim()) * tree_.level_size(level);
    const auto size = saturating_pow(grid_size(resolution), digits);
    if (remaining < size) {
      const std::uint64_t offset = seed_ == 0 ? 0 : splitmix64(seed_ ^ splitmix64(b)) % size;
      // size <= 2^62, so the sum cannot wrap.
      const std::uint64_t pattern = (remaining + offset) % size;
      return CellInfo{level, resolution, pattern};
    }
    remaining -= size;
  }
}

StepFunction TargetEnumeration::cell(std::uint64_t i) const {
  const auto info = locate(i);
  const auto grid = grid_size(info.resolution);
  const Rational step = pow2(-static_cast<long>(info.resolution));
  const Rational low = -Rational(info.resolution);
  const std::size_t d = space_.dim();
  return StepFunction::from_function(tree_, space_, info.level, [&](Vertex x) {
    // Digit (sector, coordinate) has weight grid^(sector * d + coordinate).
    std::uint64_t p = info.pattern;
    for (std::uint64_t skip = 0; skip < x.index * d && p > 0; ++skip) p /= grid;
    std::vector<Rational> coords;
    coords.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
      coords.push_back(low + Rational(static_cast<unsigned long>(p % grid)) * step);
      p /= grid;
    }
    return Value(std::move(coords));
  });
}

StepFunction TargetEnumeration::target(std::uint64_t k) const {
  StepFunction h = cell(cell_index(k));
  if (h.level() > k) throw std::logic_error("target level exceeds its index");
  return h;
}

TargetList::TargetList(ValueSpace space, std::vector<StepFunction> targets)
    : space_(space), targets_(std::move(targets)) {
  for (const auto& h : targets_) {
    if (!(h.space() == space_)) throw DimensionError("target list mixes value spaces");
  }
}

StepFunction TargetList::target(std::uint64_t k) const {
  if (k == 0 || k > targets_.size()) {
    throw std::out_of_range("target h_" + std::to_string(k) + " not in list of " + std::to_string(targets_.size()));
  }
  return targets_[k - 1];
}

}  // namespace harmtree
