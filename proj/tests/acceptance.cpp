// Acceptance checks, one line per criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "harmtree/boundary_measure.hpp"
#include "harmtree/builder.hpp"
#include "harmtree/genericity.hpp"
#include "harmtree/scheduler.hpp"
#include "support/generators.hpp"

using namespace harmtree;

namespace {

const ValueSpace kScalar = ValueSpace::scalar();

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome scheduler_identities() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::uint32_t N = 0; N <= 20; ++N)
    o.require(r(std::uint64_t{1} << N) == (std::uint64_t{2} << N) - 1, "r(2^" + std::to_string(N) + ")");
  for (std::uint32_t N = 1; N <= 16; ++N)
    for (std::uint32_t m = 1; m <= N; ++m)
      o.require(count_ell(N, m) == std::uint64_t{1} << (N - m), "count_ell(" + std::to_string(N) + "," + std::to_string(m) + ")");
  for (std::uint32_t N = 1; N <= 16; ++N) {
    const std::uint64_t p = std::uint64_t{1} << N;
    for (std::uint64_t k = 1; k < p; ++k)
      if (ell(k + p) != ell(k)) o.require(false, "shift identity at N=" + std::to_string(N) + " k=" + std::to_string(k));
  }
  const double s = seconds_since(t0);
  o.require(s < 5.0, "runtime " + std::to_string(s) + " s");
  return o;
}

Outcome checkpoint_density() {
  Outcome o;
  const std::uint64_t bound = r(std::uint64_t{1} << 18);
  for (std::uint32_t m = 1; m <= 4; ++m) {
    const auto h = hit_levels(m, bound);
    std::vector<bool> seen(19, false);
    for (const auto& c : h.checkpoints) {
      if (c.N > 18) continue;
      seen[c.N] = true;
      o.require(c.ratio == pow2(-static_cast<long>(m) - 1),
                "m=" + std::to_string(m) + " N=" + std::to_string(c.N) + " ratio " + to_string(c.ratio));
    }
    for (std::uint32_t N = m; N <= 18; ++N) o.require(seen[N], "missing checkpoint m=" + std::to_string(m) + " N=" + std::to_string(N));
  }
  return o;
}

void check_measures(Outcome& o, const Tree& t, const std::string& label) {
  std::vector<Rational> previous;
  for (std::uint32_t n = 0; n <= t.depth(); ++n) {
    const auto part = level_partition(t, n);
    o.require(part.total() == 1, label + ": level " + std::to_string(n) + " sums to " + to_string(part.total()));
    if (n > 0) {
      const auto pushed = push_forward(part, refinement_map(t, n - 1, n), t.level_size(n - 1));
      o.require(pushed == previous, label + ": fibers of level " + std::to_string(n));
    }
    previous = part.measures;
  }
  const auto deep = push_forward(level_partition(t, t.depth()), refinement_map(t, 0, t.depth()), 1);
  o.require(deep.size() == 1 && deep[0] == 1, label + ": root fiber");
}

Outcome measure_consistency() {
  Outcome o;
  for (std::uint32_t b = 2; b <= 4; ++b) {
    for (std::uint32_t d : {1u, 5u, 10u})
      check_measures(o, build_homogeneous(b, d), "uniform b=" + std::to_string(b) + " d=" + std::to_string(d));
  }
  check_measures(o, build_homogeneous(3, 10, {Rational(1, 2), Rational(1, 3), Rational(1, 6)}), "weighted b=3 d=10");
  std::mt19937_64 rng(20261018);
  for (int trial = 0; trial < 12; ++trial) {
    const std::uint32_t hi = 2 + trial % 3;
    const std::uint32_t depth = hi == 2 ? 10 : (hi == 3 ? 8 : 6);
    check_measures(o, random_tree(2, hi, depth, rng()), "random trial " + std::to_string(trial));
  }
  return o;
}

Outcome martingale() {
  Outcome o;
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Tree t = trial % 5 == 4 ? random_tree(2, 3, 10, rng()) : random_tree(2, 2, 10, rng());
    const auto space = trial % 3 == 0 ? ValueSpace::product(2) : kScalar;
    const auto f = gen::harmonic(rng, t, space, 10);
    o.require(check_harmonic(t, f).empty(), "generator produced a non-harmonic function");
    for (std::uint32_t m = 1; m <= 10; ++m) {
      const auto top = boundary_trace(t, f, m);
      for (std::uint32_t n = 0; n < m; ++n) {
        const bool ok = same_function(t, conditional_expectation(t, top, n), boundary_trace(t, f, n));
        o.require(ok, "trial " + std::to_string(trial) + " (n,m)=(" + std::to_string(n) + "," + std::to_string(m) + ")");
      }
    }
  }
  return o;
}

Outcome extension_step() {
  Outcome o;
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const std::uint32_t s = rng() % 4;
    const std::uint32_t n = 1 + rng() % 4;
    const Tree t = random_tree(2, 3, s + n, rng());
    const auto space = trial % 4 == 0 ? ValueSpace::weighted_product(2) : kScalar;
    const auto phi = gen::harmonic(rng, t, space, s);
    const auto h = gen::step(rng, t, space, rng() % (s + n + 1));
    const auto ext = extend_step(t, phi, h, n);
    const std::string at = "trial " + std::to_string(trial);
    for (std::uint32_t lvl = 0; lvl <= s; ++lvl)
      o.require(same_function(t, boundary_trace(t, ext.psi, lvl), boundary_trace(t, phi, lvl)), at + ": does not extend phi");
    o.require(ext.psi.interior_depth() == static_cast<int>(s + n) - 1, at + ": interior depth");
    o.require(check_harmonic(t, ext.psi).empty(), at + ": harmonic diagnostics");
    const Rational radius = pow2(-static_cast<long>(n));
    for (const auto& sc : sacrificed(t, ext.report, std::uint64_t{1} << 20))
      o.require(sc.probability <= radius, at + ": path probability " + to_string(sc.probability));
    const Rational d = l0_distance(t, boundary_trace(t, ext.psi, s + n), h);
    o.require(d == ext.report.achieved_distance, at + ": reported distance");
    o.require(d < radius, at + ": distance " + to_string(d));
  }
  return o;
}

Outcome deep_build() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const Tree t = build_homogeneous(2, 31);
  const TargetEnumeration targets(t, kScalar, 0);
  const auto res = build_frequently_universal(t, targets, 31);
  const double s = seconds_since(t0);
  o.require(res.log.size() == steps_within_depth(31), "step count");
  for (const auto& st : res.log) {
    const Rational d = l0_distance(t, boundary_trace(t, res.f, st.r), targets.target(st.ell));
    o.require(d < pow2(-static_cast<long>(st.ell)), "r_k = " + std::to_string(st.r) + " distance " + to_string(d));
  }
  o.require(res.verified(), "build not verified");
  o.require(check_harmonic(t, res.f).empty(), "harmonic diagnostics");
  o.require(s < 30.0, "runtime " + std::to_string(s) + " s");
  o.detail = o.pass ? std::to_string(res.log.size()) + " memberships, " + std::to_string(s) + " s" : o.detail;
  return o;
}

Outcome translation() {
  Outcome o;
  std::mt19937_64 rng(7);
  const Tree t = build_homogeneous(2, 15);
  const TargetEnumeration targets(t, kScalar, 7);
  const auto f0 = build_frequently_universal(t, targets, 15).f;
  for (int trial = 0; trial < 3; ++trial) {
    const auto phi = gen::harmonic(rng, t, kScalar, 1 + trial, 2);
    const auto tr = translate(t, f0, phi);
    const auto omega = boundary_trace(t, constant_tail_extend(t, phi, f0.depth()), tr.n0);
    for (std::uint32_t m = 1; m <= 4; ++m) {
      const Ball v{targets.target(m), pow2(-static_cast<long>(m))};
      const auto lhs = hit_set(t, tr.f, v, 15);
      const auto rhs = hit_set(t, f0, Ball{subtract(t, v.center, omega), v.radius}, 15);
      for (std::uint32_t n = tr.n0; n <= 15; ++n)
        o.require(lhs.contains(n) == rhs.contains(n), "trial " + std::to_string(trial) + " m=" + std::to_string(m) + " n=" + std::to_string(n));
    }
  }
  return o;
}

Outcome x_witness() {
  Outcome o;
  const Tree t = build_homogeneous(2, 16);
  for (std::uint32_t m : {2u, 4u}) {
    const auto target = StepFunction::constant(kScalar, Value::scalar(1));
    const Rational eps(1, 4);
    const auto w = build_x_class_witness(t, target, eps, m, 16);
    const std::string at = "m=" + std::to_string(m);
    o.require(w.achieved(), at + ": fraction " + to_string(w.hit_fraction));
    o.require(w.hit_fraction > 1 - Rational(1, m), at + ": threshold");
    o.require(w.hit_fraction == Rational(static_cast<unsigned long>(w.hits.count_up_to(w.N0))) / (w.N0 + 1), at + ": fraction recount");
    // rho~(1, 4) = 3/4 >= 1/2 + 1/4.
    const Ball v1{StepFunction::constant(kScalar, Value::scalar(4)), Rational(1, 2)};
    const Ball v2{target, eps};
    const auto audit = disjointness_audit(t, w.f, v1, v2, w.N0);
    o.require(audit.holds(), at + ": counting inequality");
    o.require(audit.first.profile[w.N0] <= audit.complement_bound(w.N0), at + ": complement bound");
    o.require(audit.first.profile[w.N0] < Rational(1, m), at + ": V1 fraction not below 1/m");
  }
  return o;
}

Outcome span_inclusion() {
  Outcome o;
  const Tree t = build_homogeneous(2, 15);
  const ValueSpace p4 = ValueSpace::product(4);
  auto vec = [&](Rational a, Rational b, Rational c, Rational d) { return StepFunction::constant(p4, Value{a, b, c, d}); };
  const TargetList targets(p4, {vec(0, 0, 0, 0), vec(1, -1, Rational(1, 2), 0), vec(-1, 2, 0, Rational(1, 4)),
                                vec(0, 0, 0, Rational(3, 2))});
  const auto built = build_vector_universal(t, 4, targets, 15);
  o.require(built.verified(), "vector build not verified");
  const auto& F = built.f;
  const auto h4 = targets.target(4);

  std::mt19937_64 rng(9);
  const std::vector<Rational> pool{-2, -1, Rational(-1, 2), 0, Rational(1, 2), 1, 2, 3};
  int guaranteed_instances = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t s = 1 + rng() % 4;
    std::vector<Rational> a;
    for (std::size_t i = 0; i < s; ++i) a.push_back(pool[rng() % pool.size()]);
    while (a.back() == 0) a.back() = pool[rng() % pool.size()];
    const std::uint32_t M = 1 + rng() % 4;
    StepFunction h = StepFunction::constant(kScalar, Value::scalar(0));
    switch (rng() % 3) {
      case 0: h = scale(a.back(), component(h4, s - 1)); break;
      case 1: break;
      default: h = gen::step(rng, t, kScalar, rng() % 3, 2);
    }
    const auto rep = combine_and_verify(t, F, a, h, M, 15);
    const std::string at = "trial " + std::to_string(trial);
    o.require(rep.exceptions.empty(), at + ": " + std::to_string(rep.exceptions.size()) + " exceptions");
    o.require(rep.harmonic_diagnostics.empty(), at + ": combination not harmonic");
    const auto sure = guaranteed_vee_hits(t, rep.vee, targets, 15);
    if (!sure.empty()) {
      ++guaranteed_instances;
      o.require(!rep.vee_hits.empty(), at + ": guaranteed hit missing");
      for (auto n : sure)
        o.require(std::find(rep.vee_hits.begin(), rep.vee_hits.end(), n) != rep.vee_hits.end(),
                  at + ": guaranteed level " + std::to_string(n) + " not hit");
    }
  }
  o.require(guaranteed_instances > 0, "no instance had a guaranteed hit");
  if (o.pass) o.detail = std::to_string(guaranteed_instances) + " of 20 instances with guaranteed hits";
  return o;
}

Outcome densification() {
  Outcome o;
  std::mt19937_64 rng(10);
  const Tree t = build_homogeneous(2, 15);
  const ValueSpace p3 = ValueSpace::product(3);
  const TargetEnumeration targets(t, p3, 10);
  const auto F = build_vector_universal(t, 3, targets, 15).f;
  std::vector<HarmonicFunction> phi;
  for (int i = 0; i < 3; ++i) phi.push_back(constant_tail_extend(t, gen::harmonic(rng, t, kScalar, 2 + i, 5), 15));
  const auto dz = densify(t, F, phi);
  for (const auto& c : dz.components) {
    o.require(c.distance.value < c.limit, "component " + std::to_string(c.index) + " distance " + to_string(c.distance.value));
    o.require(c.verified(), "component " + std::to_string(c.index) + " with truncation bound");
  }
  o.require(check_harmonic(t, dz.sum).empty(), "F + G not harmonic");
  for (std::uint32_t m = 1; m <= 4; ++m) {
    const auto chk = shifted_hit_check(t, F, dz, Ball{targets.target(m), pow2(-static_cast<long>(m))}, 15);
    o.require(chk.equal(), "shifted hit sets differ for h_" + std::to_string(m));
  }
  return o;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const auto dir = std::filesystem::temp_directory_path() / "harmtree_acceptance";
  std::filesystem::create_directories(dir);
  std::string outputs[2][2];
  for (int run = 0; run < 2; ++run) {
    cli::BuildConfig cfg;
    cfg.tree.branching = 2;
    cfg.tree.depth = 15;
    cfg.space = {"product", 2};
    cfg.targets_seed = 11;
    cfg.out = (dir / ("f" + std::to_string(run) + ".json")).string();
    cfg.log = (dir / ("log" + std::to_string(run) + ".json")).string();
    std::ostringstream sink;
    o.require(cli::cmd_build(cfg, sink) == 0, "build run " + std::to_string(run) + " failed");
    outputs[run][0] = slurp(cfg.out);
    outputs[run][1] = slurp(cfg.log);
  }
  o.require(!outputs[0][0].empty() && outputs[0][0] == outputs[1][0], "function files differ");
  o.require(!outputs[0][1].empty() && outputs[0][1] == outputs[1][1], "logs differ");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"scheduler identities", scheduler_identities},
      {"checkpoint density", checkpoint_density},
      {"measure consistency", measure_consistency},
      {"martingale property", martingale},
      {"extension step", extension_step},
      {"depth-31 frequently universal build", deep_build},
      {"translation hit sets", translation},
      {"X-class witness and disjointness", x_witness},
      {"span inclusion", span_inclusion},
      {"densification", densification},
      {"build determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.pass;
    std::printf("criterion %2zu %s  %s (%.2f s)%s%s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                seconds_since(t0), o.detail.empty() ? "" : ": ", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
