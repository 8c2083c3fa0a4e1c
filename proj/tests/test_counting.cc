#include <doctest.h>

#include <vector>

#include "tt/counting.hpp"

using namespace tt;

namespace {

DyadicInterval di(std::int64_t s, std::int64_t i) { return {s, Int(i)}; }

// two levels, two layers (see the builder tests for the full hand trace)
ScaleProfile ladder_a() {
  ScaleProfile p;
  p.levels = 2;
  p.height = 2;
  p.gen = {{1, 2}, {3, 4}};
  p.subdiv = 1;
  p.floor_gen = 1;
  p.sigma = 10;
  p.freq_base_exp = 20;
  p.resolution = 12;
  p.branch_cap = 2;
  p.host_cap = 2;
  p.top_width = 1;
  return p;
}

// three layers on quarter slots, shared last pair
ScaleProfile ladder_b() {
  ScaleProfile p = ladder_a();
  p.height = 3;
  p.gen = {{1, 2}, {4, 5}};
  p.subdiv = 2;
  p.resolution = 14;
  return p;
}

// three nested levels
ScaleProfile ladder_c() {
  ScaleProfile p = ladder_a();
  p.levels = 3;
  p.gen = {{1, 2}, {3, 4}, {5, 6}};
  p.resolution = 14;
  return p;
}

MeasurableSet cover(std::int64_t R, const std::vector<DyadicInterval>& parts) {
  MeasurableSet s(R);
  for (const auto& I : parts) s = set_union(s, MeasurableSet::from_dyadic(R, I));
  return s;
}

// layer-1 and deepest-layer footprints of the hand profiles
MeasurableSet slots_a() { return cover(12, {di(2, 0), di(2, 2)}); }
MeasurableSet deep_a() {
  return cover(12, {di(5, 1), di(5, 3), di(5, 5), di(5, 7),
                    di(5, 17), di(5, 19), di(5, 21), di(5, 23)});
}
MeasurableSet slots_b() {
  return cover(14, {di(4, 0), di(4, 1), di(4, 2), di(4, 8), di(4, 9), di(4, 10)});
}
MeasurableSet deep_b() {
  return cover(14, {di(6, 1), di(6, 3), di(6, 5), di(6, 7), di(6, 9), di(6, 11),
                    di(6, 33), di(6, 35), di(6, 37), di(6, 39), di(6, 41), di(6, 43)});
}

StepFunction ind(const MeasurableSet& s) { return StepFunction::indicator(s); }

bool integer_valued(const StepFunction& f) {
  for (const auto& run : f.runs())
    if (rat_den(run.value) != 1) return false;
  return true;
}

Tile tile(std::int64_t s, std::int64_t t_idx, std::int64_t f_idx) {
  return Tile{DyadicInterval{s, Int(t_idx)}, DyadicInterval{-s, Int(f_idx)}};
}

}  // namespace

TEST_CASE("bin densities from tiny hand universes") {
  // one tile [0,1/2) x [2048,2050), assignment hits an eighth of it: the
  // density at its mass is 2^{1-n} on the time leg
  const std::int64_t R = 6;
  const Rat v = Rat(2049);
  TileUniverse U;
  U.tiles = {tile(1, 0, 1024)};
  U.lin.freqs = {v};
  U.lin.N = StepFunction(R, {StepFunction::Run{Int(0), Int(4), v}});  // [0,1/16)
  REQUIRE(U.validate().empty());

  const StepFunction f = nu_bar(3, U);  // |E| = |I|/8 puts the tile at mass 3
  CHECK(f == Rat(1, 4) * ind(MeasurableSet::from_dyadic(R, di(1, 0))));
  CHECK(f.integral() == Rat(1, 8));

  CHECK(nu_bar(1, U).runs().empty());  // nothing at other masses
  CHECK(nu_bar(5, U).runs().empty());
  CHECK_THROWS_AS(nu_bar(0, U), std::invalid_argument);

  // two tiles whose times tile [0,1) at the same mass: density identically 1
  TileUniverse U2;
  U2.tiles = {tile(1, 0, 1024), tile(1, 1, 1024)};
  U2.lin.freqs = {v};
  U2.lin.N = StepFunction(R, {StepFunction::Run{Int(0), Int(16), v},
                              StepFunction::Run{Int(32), Int(48), v}});
  REQUIRE(U2.validate().empty());
  const StepFunction g = nu_bar(1, U2);
  CHECK(g == ind(MeasurableSet::from_interval(R, Rat(0), Rat(1))));
  CHECK(g.linf_norm() == Rat(1));
}

TEST_CASE("two-level ladder: level means by hand") {
  const Cme c = build_cme(ladder_a());

  // each layer contributes exactly 1 over its tops at every window mass, so
  // the level mean counts stacked layers
  const StepFunction nu1 = nu_level(c, 1);
  CHECK(nu1 == ind(slots_a()) + ind(deep_a()));
  CHECK(nu1.integral() == Rat(3, 4));
  CHECK(nu1.linf_norm() == Rat(2));
  CHECK(integer_valued(nu1));

  const StepFunction nu2 = nu_level(c, 2);
  const MeasurableSet top_deep = cover(12, {di(2, 1), di(2, 3)});
  CHECK(nu2 == ind(MeasurableSet::from_interval(12, Rat(0), Rat(1))) + ind(top_deep));
  CHECK(nu2.integral() == Rat(3, 2));
  CHECK(nu2.linf_norm() == Rat(2));

  CHECK(dyadic_bmo_norm(nu1) == Rat(3, 4));
  CHECK(dyadic_bmo_norm(nu2) == Rat(1, 2));

  // owned and global densities agree where the bins are level-pure
  for (std::int64_t m = 1; m <= 2; ++m)
    CHECK(nu_bar(m, c.universe) == nu_bar_owned(c, 1, m));
  for (std::int64_t m = 3; m <= 4; ++m)
    CHECK(nu_bar(m, c.universe) == nu_bar_owned(c, 2, m));

  const StepFunction nu = nu_grand(c);
  CHECK(nu == cellwise_max(nu1, nu2));
  CHECK(nu.integral() == Rat(7, 4));
  CHECK(weak_l1_norm(nu) == Rat(3, 2));
  CHECK(nu_grand(c, 1) == nu1);

  CHECK_THROWS_AS(nu_level(c, 3), std::invalid_argument);
  CHECK_THROWS_AS(nu_level(c, 1, 2), std::invalid_argument);  // window eaten
}

TEST_CASE("two-level ladder: level sets, nesting, witnesses") {
  const Cme c = build_cme(ladder_a());
  const LevelSetTree t1 = level_sets(c, 1);
  const LevelSetTree t2 = level_sets(c, 2);

  CHECK(t1.comps.at(1) == std::vector<DyadicInterval>{di(2, 0), di(2, 2)});
  CHECK(t1.comps.at(2) ==
        std::vector<DyadicInterval>{di(5, 1), di(5, 3), di(5, 5), di(5, 7),
                                    di(5, 17), di(5, 19), di(5, 21), di(5, 23)});
  CHECK(t2.comps.at(1) == std::vector<DyadicInterval>{di(0, 0)});
  CHECK(t2.comps.at(2) == std::vector<DyadicInterval>{di(2, 1), di(2, 3)});
  CHECK(t1.sets.at(2) == deep_a());

  const NestingReport rep = nesting_check({t1, t2});
  CHECK(rep.nesting);
  CHECK(rep.decay);
  CHECK(rep.worst_decay == Rat(2));
  CHECK(rep.violations.empty());

  std::string why;
  CHECK(component_witness(c, t1, &why));
  CHECK(component_witness(c, t2, &why));
  CHECK(base_sandwich(c, 1));
  CHECK(base_sandwich(c, 2));

  // a tree whose components belong to the other level is refused
  LevelSetTree wrong = t2;
  wrong.level = 1;
  CHECK_FALSE(component_witness(c, wrong, &why));
  CHECK(!why.empty());
}

TEST_CASE("three-layer ladder: stacks jump over the shared pair") {
  const Cme c = build_cme(ladder_b());

  // the last two layers share their tops, so the stack goes 1 -> 3 with no
  // 2-only region
  const StepFunction nu1 = nu_level(c, 1);
  CHECK(nu1 == ind(slots_b()) + Rat(2) * ind(deep_b()));
  CHECK(nu1.integral() == Rat(3, 4));
  CHECK(nu1.linf_norm() == Rat(3));
  CHECK(nu1.super_level(Rat(2), false) == nu1.super_level(Rat(3), false));

  const MeasurableSet top_deep = cover(14, {di(2, 1), di(2, 3)});
  const StepFunction nu2 = nu_level(c, 2);
  CHECK(nu2 == ind(MeasurableSet::from_interval(14, Rat(0), Rat(1))) +
                   Rat(2) * ind(top_deep));

  // adjacent slot bases merge into larger dyadic components at depth 1;
  // deeper components are single tops
  const LevelSetTree t1 = level_sets(c, 1);
  CHECK(t1.comps.at(1) ==
        std::vector<DyadicInterval>{di(3, 0), di(4, 2), di(3, 4), di(4, 10)});
  CHECK(t1.comps.at(2).size() == 12);
  CHECK(t1.comps.at(2) == t1.comps.at(3));
  const LevelSetTree t2 = level_sets(c, 2);
  CHECK(t2.comps.at(1) == std::vector<DyadicInterval>{di(0, 0)});
  CHECK(t2.comps.at(2) == std::vector<DyadicInterval>{di(2, 1), di(2, 3)});

  const NestingReport rep = nesting_check({t1, t2});
  CHECK(rep.nesting);
  CHECK(rep.decay);
  CHECK(rep.worst_decay == Rat(8));  // the shared pair fills its own depth

  CHECK(component_witness(c, t1));
  CHECK(component_witness(c, t2));
  CHECK(base_sandwich(c, 1));
  CHECK(base_sandwich(c, 2));

  const StepFunction nu = nu_grand(c);
  CHECK(nu.integral() == Rat(19, 8));
  CHECK(weak_l1_norm(nu) == Rat(33, 16));

  // global density at a floor mass picks up the top tower's floored layers
  CHECK(nu_bar(1, c.universe) ==
        nu_bar_owned(c, 1, 1) + Rat(2) * ind(top_deep));
}

TEST_CASE("counting report: high sets sit on the deepest layers") {
  const Cme c = build_cme(ladder_b());
  const CountingReport rep = counting_report(c);

  REQUIRE(rep.high.size() == 4);  // masses 1,2 and 4,5
  CHECK(rep.high[0].mass == 1);
  CHECK(rep.high[0].level == 1);
  CHECK(rep.high[0].measure == Rat(3, 16));
  CHECK(rep.high[1].mass == 2);
  CHECK(rep.high[1].measure == Rat(3, 16));
  CHECK(rep.high[2].mass == 4);
  CHECK(rep.high[2].level == 2);
  CHECK(rep.high[2].measure == Rat(1, 2));
  CHECK(rep.high[3].mass == 5);
  CHECK(rep.high[3].measure == Rat(1, 2));
  CHECK(rep.high_disjoint);
  CHECK(rep.high_match_deep);
  CHECK(rep.min_high == Rat(3, 16));

  REQUIRE(rep.levels.size() == 2);
  CHECK(rep.levels[0].bmo == Rat(9, 8));
  CHECK(rep.levels[0].linf == Rat(3));
  CHECK(rep.levels[0].super_measure.at(1) == Rat(3, 8));
  CHECK(rep.levels[0].super_measure.at(2) == Rat(3, 16));
  CHECK(rep.levels[0].super_measure.at(3) == Rat(3, 16));
  CHECK(rep.levels[1].bmo == Rat(1));
  CHECK(rep.levels[1].linf == Rat(3));
  CHECK(rep.levels[1].super_measure.at(1) == Rat(1));
  CHECK(rep.levels[1].super_measure.at(2) == Rat(1, 2));
  CHECK(rep.levels[1].super_measure.at(3) == Rat(1, 2));

  CHECK(rep.sandwich);
  CHECK(rep.jn_monotone);
  CHECK(rep.jn_rate > 0.0);
  CHECK(rep.nu_l1 == Rat(19, 8));
  CHECK(rep.nu_weak == Rat(33, 16));
  CHECK(rep.nu_weak <= rep.nu_l1);

  const CountingReport ra = counting_report(build_cme(ladder_a()));
  REQUIRE(ra.high.size() == 4);
  CHECK(ra.high[0].measure == Rat(1, 4));
  CHECK(ra.high[2].measure == Rat(1, 2));
  CHECK(ra.high_disjoint);
  CHECK(ra.high_match_deep);
  CHECK(ra.min_high == Rat(1, 4));
  CHECK(ra.levels[0].bmo == Rat(3, 4));
  CHECK(ra.sandwich);
  CHECK(ra.nu_weak <= ra.nu_l1);
}

TEST_CASE("three nested levels: truncations and the report") {
  const Cme c = build_cme(ladder_c());

  const StepFunction g1 = nu_grand(c, 1);
  const StepFunction g2 = nu_grand(c, 2);
  const StepFunction g3 = nu_grand(c, 3);
  CHECK(g1 == nu_level(c, 1));
  CHECK(cellwise_max(g1, g2) == g2);
  CHECK(cellwise_max(g2, g3) == g3);
  CHECK(g3 == nu_grand(c));
  CHECK(g1.integral() <= g2.integral());
  CHECK(g2.integral() <= g3.integral());
  CHECK(weak_l1_norm(g3) <= g3.integral());

  const CountingReport rep = counting_report(c);
  REQUIRE(rep.high.size() == 6);
  CHECK(rep.high[0].measure == Rat(1, 8));
  CHECK(rep.high[2].measure == Rat(1, 4));
  CHECK(rep.high[4].measure == Rat(1, 2));
  CHECK(rep.high_disjoint);
  CHECK(rep.high_match_deep);
  CHECK(rep.min_high == Rat(1, 8));
  CHECK(rep.sandwich);
  CHECK(rep.jn_monotone);

  std::vector<LevelSetTree> trees;
  for (std::int64_t j = 1; j <= 3; ++j) trees.push_back(level_sets(c, j));
  const NestingReport nr = nesting_check(trees);
  CHECK(nr.nesting);
  CHECK(nr.decay);
  for (const auto& t : trees) CHECK(component_witness(c, t));
}

TEST_CASE("level means ignore the window offset on ladder output") {
  // every layer spans its whole mass window, so dropping leading masses
  // rescales a constant total: the mean is unchanged
  const Cme c = build_cme(ladder_b());
  CHECK(nu_level(c, 1, 1) == nu_level(c, 1));
  CHECK(nu_level(c, 2, 1) == nu_level(c, 2));
  CHECK_THROWS_AS(nu_level(c, 1, 2), std::invalid_argument);

  const CountingReport shifted = counting_report(c, 1);
  CHECK(shifted.nu_l1 == Rat(19, 8));
  CHECK(shifted.sandwich);
}

TEST_CASE("nesting detector flags interleaved and bloated level sets") {
  const std::int64_t R = 10;
  const auto box = [&](const Rat& lo, const Rat& hi) {
    return ind(MeasurableSet::from_interval(R, lo, hi));
  };

  // overlapping but non-nested supports across levels
  const LevelSetTree ta = level_sets_of(box(Rat(0), Rat(1, 2)), 1, 1);
  const LevelSetTree tb = level_sets_of(box(Rat(1, 4), Rat(3, 4)), 2, 1);
  const NestingReport bad = nesting_check({ta, tb});
  CHECK_FALSE(bad.nesting);
  CHECK(bad.violations.size() == 1);

  // a depth-10 set as large as its enclosing component busts the decay bound
  const LevelSetTree tc = level_sets_of(box(Rat(0), Rat(1, 2)), 2, 1);
  const LevelSetTree td = level_sets_of(Rat(10) * box(Rat(0), Rat(1, 2)), 1, 10);
  const NestingReport fat = nesting_check({tc, td});
  CHECK(fat.nesting);
  CHECK_FALSE(fat.decay);
  CHECK(fat.worst_decay == Rat(1024));

  // a single tree is vacuously consistent
  CHECK(nesting_check({ta}).nesting);
  CHECK(nesting_check({ta}).decay);
}
