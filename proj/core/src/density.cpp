#include "harmtree/density.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace harmtree {

namespace {

Rational ratio(std::uint64_t num, std::uint64_t den) {
  Rational q(static_cast<unsigned long>(num), static_cast<unsigned long>(den));
  q.canonicalize();
  return q;
}

void fill_profile(HitReport& report) {
  report.profile.clear();
  report.profile.reserve(report.horizon + 1);
  std::uint64_t count = 0;
  auto it = report.indices.begin();
  for (std::uint32_t n = 0; n <= report.horizon; ++n) {
    while (it != report.indices.end() && *it == n) {
      ++count;
      ++it;
    }
    report.profile.push_back(ratio(count, std::uint64_t{n} + 1));
  }
}

std::vector<std::uint32_t> resolve(const HitReport& report, std::vector<std::uint32_t> checkpoints) {
  if (report.profile.empty()) throw std::invalid_argument("empty horizon");
  if (checkpoints.empty()) checkpoints = default_checkpoints(report.horizon);
  for (auto n : checkpoints) {
    if (n > report.horizon) {
      throw std::out_of_range("checkpoint " + std::to_string(n) + " beyond horizon " +
                              std::to_string(report.horizon));
    }
  }
  return checkpoints;
}

}  // namespace

bool HitReport::contains(std::uint32_t n) const { return std::binary_search(indices.begin(), indices.end(), n); }

std::uint64_t HitReport::count_up_to(std::uint32_t n) const {
  return static_cast<std::uint64_t>(std::upper_bound(indices.begin(), indices.end(), n) - indices.begin());
}

HitReport hit_report(std::uint32_t horizon, const std::function<bool(std::uint32_t)>& member) {
  HitReport out;
  out.horizon = horizon;
  for (std::uint32_t n = 0; n <= horizon; ++n) {
    if (member(n)) out.indices.push_back(n);
  }
  out.distances.assign(horizon + 1, std::nullopt);
  fill_profile(out);
  return out;
}

HitReport hit_set(const Tree& tree, const HarmonicFunction& f, const Ball& ball, std::uint32_t N) {
  if (N > f.depth()) {
    throw std::out_of_range("horizon " + std::to_string(N) + " exceeds the function's depth " +
                            std::to_string(f.depth()));
  }
  if (ball.radius <= 0) throw std::invalid_argument("ball radius must be positive");
  HitReport out;
  out.horizon = N;
  out.distances.reserve(N + 1);
  for (std::uint32_t n = 0; n <= N; ++n) {
    Rational d = l0_distance(tree, boundary_trace(tree, f, n), ball.center);
    if (d < ball.radius) out.indices.push_back(n);
    out.distances.emplace_back(std::move(d));
  }
  fill_profile(out);
  return out;
}

HitReport restrict_to(const HitReport& report, const std::set<std::uint32_t>& theta) {
  HitReport out = report;
  out.indices.clear();
  for (auto n : report.indices) {
    if (theta.count(n)) out.indices.push_back(n);
  }
  fill_profile(out);
  return out;
}

std::vector<std::uint32_t> default_checkpoints(std::uint32_t horizon) {
  std::vector<std::uint32_t> out;
  for (std::uint32_t n = horizon / 2; n <= horizon; ++n) out.push_back(n);
  return out;
}

Rational lower_density_estimate(const HitReport& report, std::vector<std::uint32_t> checkpoints) {
  checkpoints = resolve(report, std::move(checkpoints));
  Rational out = report.profile[checkpoints.front()];
  for (auto n : checkpoints) out = std::min(out, report.profile[n]);
  return out;
}

Rational upper_density_estimate(const HitReport& report, std::vector<std::uint32_t> checkpoints) {
  checkpoints = resolve(report, std::move(checkpoints));
  Rational out = report.profile[checkpoints.front()];
  for (auto n : checkpoints) out = std::max(out, report.profile[n]);
  return out;
}

bool provably_disjoint(const Tree& tree, const Ball& a, const Ball& b) {
  return l0_distance(tree, a.center, b.center) >= a.radius + b.radius;
}

Rational DisjointnessAudit::complement_bound(std::uint32_t n) const { return 1 - second.profile.at(n); }

DisjointnessAudit disjointness_audit(const Tree& tree, const HarmonicFunction& f, const Ball& first,
                                     const Ball& second, std::uint32_t N) {
  DisjointnessAudit out;
  out.center_distance = l0_distance(tree, first.center, second.center);
  out.radius_sum = first.radius + second.radius;
  if (out.center_distance < out.radius_sum) {
    throw std::invalid_argument("balls are not provably disjoint: center distance " +
                                to_string(out.center_distance) + " < radius sum " + to_string(out.radius_sum));
  }
  out.first = hit_set(tree, f, first, N);
  out.second = hit_set(tree, f, second, N);
  for (std::uint32_t n = 0; n <= N; ++n) {
    if (out.first.count_up_to(n) + out.second.count_up_to(n) > std::uint64_t{n} + 1) out.violations.push_back(n);
  }
  return out;
}

}  // namespace harmtree
