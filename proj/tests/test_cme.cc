#include <doctest.h>

#include <algorithm>
#include <vector>

#include "tt/cme.hpp"

using namespace tt;

namespace {

DyadicInterval di(std::int64_t s, std::int64_t i) { return {s, Int(i)}; }

// ladder frequency with base exponent 20, step 10 (both test profiles use it)
Rat fr(std::int64_t m) { return pow2r(20 + 10 * m); }

// two levels, two layers: the smallest ladder with a nontrivial rotation.
// Hand trace: top tower over [0,1) with generation (3,4), four child towers
// with generation (1,2) in the left halves of [0,1/4) and [1/2,3/4).
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

// three layers on quarter slots: exercises the cyclic wrap, the shared last
// layer pair, a window that is a strict prefix of the host block, and a
// cell budget that packs [0,1) exactly (no sentinel left over).
ScaleProfile ladder_b() {
  ScaleProfile p;
  p.levels = 2;
  p.height = 3;
  p.gen = {{1, 2}, {4, 5}};
  p.subdiv = 2;
  p.floor_gen = 1;
  p.sigma = 10;
  p.freq_base_exp = 20;
  p.resolution = 14;
  p.branch_cap = 2;
  p.host_cap = 2;
  p.top_width = 1;
  return p;
}

// three nested levels, windows partition exactly at both hand-offs
ScaleProfile ladder_c() {
  ScaleProfile p;
  p.levels = 3;
  p.height = 2;
  p.gen = {{1, 2}, {3, 4}, {5, 6}};
  p.subdiv = 1;
  p.floor_gen = 1;
  p.sigma = 10;
  p.freq_base_exp = 20;
  p.resolution = 14;
  p.branch_cap = 2;
  p.host_cap = 2;
  p.top_width = 1;
  return p;
}

MeasurableSet iv(std::int64_t R, const Rat& lo, const Rat& hi) {
  return MeasurableSet::from_interval(R, lo, hi);
}

Rat measure_at(const StepFunction& f, const Rat& v) {
  Rat s(0);
  for (const auto& run : f.runs())
    if (run.value == v) s += Rat(run.end - run.begin) / pow2r(f.resolution());
  return s;
}

bool passes(const CmeReport& rep, const std::string& name) {
  const CmeCheck* ch = rep.find(name);
  REQUIRE(ch != nullptr);
  return ch->pass;
}

}  // namespace

TEST_CASE("profile validation rejects malformed ladders") {
  CHECK(ladder_a().validate().empty());
  CHECK(ladder_b().validate().empty());
  CHECK(ladder_c().validate().empty());

  ScaleProfile p = ladder_a();
  p.gen = {{1, 2}};
  CHECK(!p.validate().empty());  // one pair per level

  p = ladder_a();
  p.gen = {{2, 3}, {4, 5}};
  CHECK(!p.validate().empty());  // lowest level must start at floor_gen

  p = ladder_a();
  p.gen = {{1, 4}, {3, 5}};
  CHECK(!p.validate().empty());  // overlapping generations

  p = ladder_a();
  p.gen = {{1, 3}, {3, 4}};  // hosting needs r2 >= n1 + lg(height)
  CHECK(!p.validate().empty());

  p = ladder_b();
  p.subdiv = 1;  // 2 slots cannot carry 3 towers
  CHECK(!p.validate().empty());

  p = ladder_a();
  p.sigma = 4;
  CHECK(!p.validate().empty());

  CHECK_THROWS_AS(build_cme(p), std::invalid_argument);
}

TEST_CASE("layer generation: nominal pairs, floored last pair") {
  const ScaleProfile a = ladder_a();
  CHECK(layer_generation(a, 2, 1) == GenPair{3, 4});
  CHECK(layer_generation(a, 2, 2) == GenPair{3, 4});  // height 2: no floor
  CHECK(layer_generation(a, 1, 1) == GenPair{1, 2});

  const ScaleProfile b = ladder_b();
  CHECK(layer_generation(b, 2, 1) == GenPair{4, 5});
  CHECK(layer_generation(b, 2, 2) == GenPair{1, 5});  // last two layers drop
  CHECK(layer_generation(b, 2, 3) == GenPair{1, 5});
  CHECK(layer_generation(b, 1, 2) == GenPair{1, 2});  // already at the floor

  ScaleProfile four = ladder_b();
  four.height = 4;
  four.gen = {{1, 2}, {4, 5}};
  CHECK(layer_generation(four, 2, 2) == GenPair{4, 5});
  CHECK(layer_generation(four, 2, 3) == GenPair{1, 5});
  CHECK(layer_generation(four, 2, 4) == GenPair{1, 5});
}

TEST_CASE("two-level ladder: towers, windows, and the block rotation") {
  const Cme c = build_cme(ladder_a());

  REQUIRE(c.towers.size() == 5);
  CHECK(c.towers_by_level.at(2) == std::vector<std::size_t>{0});
  CHECK(c.towers_by_level.at(1) == std::vector<std::size_t>{1, 2, 3, 4});

  // top tower: layer 1 over [0,1), layer 2 over the right children of its
  // bottoms, frequency window split into the two 8-blocks
  const TowerRecord& top = c.towers[0];
  CHECK(top.level == 2);
  CHECK(!top.host_j.has_value());
  REQUIRE(top.layers.size() == 2);
  CHECK(top.layers[0].params.tops == std::vector<DyadicInterval>{di(0, 0)});
  CHECK(top.layers[0].params.r == 3);
  CHECK(top.layers[0].params.n == 4);
  REQUIRE(top.layers[0].params.alphas.size() == 8);
  CHECK(top.layers[0].params.alphas.front() == fr(0));
  CHECK(top.layers[0].params.alphas.back() == fr(7));
  CHECK(top.layers[1].params.tops ==
        std::vector<DyadicInterval>{di(2, 1), di(2, 3)});
  CHECK(top.layers[1].params.alphas.front() == fr(8));
  CHECK(top.layers[1].params.alphas.back() == fr(15));

  // children: one pair of towers in each hosting interval, windows anchored
  // at the host bottom's slice of the parent block
  const auto& t1 = c.towers[1];
  const auto& t2 = c.towers[2];
  const auto& t3 = c.towers[3];
  const auto& t4 = c.towers[4];
  CHECK(t1.host_j == di(2, 0));
  CHECK(t2.host_j == di(2, 0));
  CHECK(t3.host_j == di(2, 2));
  CHECK(t4.host_j == di(2, 2));
  CHECK(t1.parent_tower == 0);
  CHECK(t1.parent_layer == 1);
  CHECK(t1.window_start == 0);
  CHECK(t3.window_start == 4);
  CHECK(t1.sub_index == 1);
  CHECK(t2.sub_index == 2);
  CHECK(t1.rotation == 0);
  CHECK(t2.rotation == 1);

  CHECK(t1.layers[0].params.tops == std::vector<DyadicInterval>{di(3, 0)});
  CHECK(t2.layers[0].params.tops == std::vector<DyadicInterval>{di(3, 1)});
  CHECK(t3.layers[0].params.tops == std::vector<DyadicInterval>{di(3, 4)});
  CHECK(t4.layers[0].params.tops == std::vector<DyadicInterval>{di(3, 5)});

  // the rotation: tower 1 carries blocks (B1,B2), its slot sibling (B2,B1)
  CHECK(t1.layers[0].params.alphas == std::vector<Rat>{fr(0), fr(1)});
  CHECK(t1.layers[1].params.alphas == std::vector<Rat>{fr(2), fr(3)});
  CHECK(t2.layers[0].params.alphas == std::vector<Rat>{fr(2), fr(3)});
  CHECK(t2.layers[1].params.alphas == std::vector<Rat>{fr(0), fr(1)});
  CHECK(t3.layers[0].params.alphas == std::vector<Rat>{fr(4), fr(5)});
  CHECK(t4.layers[1].params.alphas == std::vector<Rat>{fr(4), fr(5)});

  // cascade geometry of tower 1: layer 2 tops are the right children of the
  // layer 1 bottoms
  CHECK(t1.layers[1].params.tops ==
        std::vector<DyadicInterval>{di(5, 1), di(5, 3)});
  CHECK(t2.layers[1].params.tops ==
        std::vector<DyadicInterval>{di(5, 5), di(5, 7)});

  CHECK(c.universe.tiles.size() == 96);
  CHECK(c.tile_tower.size() == 96);
  CHECK(c.tile_level.size() == 96);
  CHECK(c.chains.size() == 48);
  CHECK(c.sentinel_freq == pow2r(180));
  REQUIRE(c.lin.freqs.size() == 17);
  CHECK(c.lin.freqs.front() == fr(0));
  CHECK(c.lin.freqs.back() == c.sentinel_freq);
  CHECK(c.lin.validate().empty());
}

TEST_CASE("two-level ladder: chain cells by hand") {
  const Cme c = build_cme(ladder_a());
  const std::int64_t R = 12;

  // children are solved first, towers in creation order, layers bottom-up.
  // tower 1, layer 1, chain 1: first claim ever made, leftmost cells of its
  // host [0,1/16), half of it
  REQUIRE(c.chains.size() == 48);
  const ChainSolution& s0 = c.chains[0];
  CHECK(s0.tower == 1);
  CHECK(s0.layer == 0);
  CHECK(s0.chain == 0);
  CHECK(s0.absorbed == Rat(0));
  CHECK(s0.cells == iv(R, Rat(0), Rat(1, 32)));

  CHECK(c.chains[1].cells == iv(R, Rat(1, 16), Rat(3, 32)));

  // tower 1, layer 2, first chain: host is the left quarter of the right
  // child [1/32,2/32); its cells start where the host starts
  const ChainSolution& s2 = c.chains[2];
  CHECK(s2.tower == 1);
  CHECK(s2.layer == 1);
  CHECK(s2.absorbed == Rat(0));
  CHECK(s2.cells == iv(R, Rat(4, 128), Rat(5, 128)));

  // top tower, layer 1, first chain (frequency index 0, host [0,1/2)):
  // absorbs the three solved structures below it (1/32 + 1/128 + 1/128) and
  // tops up with fresh cells from [1/4,...), the first stretch clear of the
  // children's shielded stacks
  const ChainSolution& st = c.chains[24];
  CHECK(st.tower == 0);
  CHECK(st.layer == 0);
  CHECK(st.chain == 0);
  CHECK(st.absorbed == Rat(6, 128));
  CHECK(st.cells.measure() == Rat(1, 16));
  CHECK(set_intersect(st.cells, iv(R, Rat(1, 4), Rat(1, 2))) ==
        iv(R, Rat(1, 4), Rat(17, 64)));

  // every chain keeps its cells inside its host at exactly the target size
  for (const ChainSolution& s : c.chains) {
    const ChainConstraint& cc =
        c.towers[s.tower].layers[s.layer].constraints[s.chain];
    CHECK(s.cells.subset_of(MeasurableSet::from_dyadic(R, cc.host)));
    CHECK(s.cells.measure() == cc.measure);
    CHECK(s.absorbed <= cc.measure);
  }

  // spot values of the frequency assignment
  CHECK(c.lin.N.value_at(Rat(1, 256)) == fr(0));
  CHECK(c.lin.N.value_at(Rat(2, 32)) == fr(1));
  CHECK(c.lin.N.value_at(Rat(5, 128)) == c.sentinel_freq);
  CHECK(c.lin.N.value_at(Rat(1, 4)) == fr(0));
  CHECK(measure_at(c.lin.N, c.sentinel_freq) == Rat(1, 4));
  CHECK(c.lin.N.support().measure() == Rat(1));

  // shared E-set along a chain: the two tiles of tower 1's first chain see
  // exactly the solver's cells
  const Usgtf& f = c.towers[1].layers[0];
  CHECK(e_set(f.levels.at(1)[0], c.lin) == s0.cells);
  CHECK(e_set(f.levels.at(2)[0], c.lin) == s0.cells);
  CHECK(restricted_mass(f.levels.at(1)[0], c.lin) == Rat(1, 2));
  CHECK(mass(f.levels.at(1)[0], c.universe) == Rat(1, 2));
}

TEST_CASE("two-level ladder: full validation report") {
  const Cme c = build_cme(ladder_a());
  const CmeReport rep = validate_cme(c);
  for (const CmeCheck& ch : rep.checks) {
    INFO(ch.name, ": ", ch.detail);
    CHECK(ch.pass);
  }
  CHECK(rep.ok);
  CHECK(rep.tiles_per_level.at(1) == 48);
  CHECK(rep.tiles_per_level.at(2) == 48);
  CHECK(rep.min_mass == Rat(1, 16));
  CHECK(rep.last_layer_basis_measure.at(1) == Rat(1, 4));
  CHECK(rep.last_layer_basis_measure.at(2) == Rat(1, 2));

  // mass bins: one per generation exponent, each with a quarter of the
  // tiles; the widest bin is all maximal (distinct frequency blocks)
  const Classification cl = classify(c.universe);
  CHECK(cl.p_zero.empty());
  CHECK(cl.p_bar_zero.empty());
  CHECK(cl.floor_violations.empty());
  REQUIRE(cl.bins.size() == 4);
  for (const auto& [w, idx] : cl.bins) CHECK(idx.size() == 24);
  CHECK(cl.maximal.at(4).size() == 24);
}

TEST_CASE("three-layer ladder: wrap, prefix window, shared last pair") {
  const Cme c = build_cme(ladder_b());

  REQUIRE(c.towers.size() == 7);
  CHECK(c.towers_by_level.at(1).size() == 6);

  const TowerRecord& top = c.towers[0];
  REQUIRE(top.layers.size() == 3);
  CHECK(top.layers[0].params.r == 4);
  CHECK(top.layers[0].params.n == 5);
  CHECK(top.layers[1].params.r == 1);
  CHECK(top.layers[1].params.n == 5);
  // the last two layers share tops and bottoms
  CHECK(top.layers[1].params.tops ==
        std::vector<DyadicInterval>{di(2, 1), di(2, 3)});
  CHECK(top.layers[2].params.tops == top.layers[1].params.tops);
  CHECK(top.layers[1].i_btm() == top.layers[2].i_btm());
  // but carry consecutive blocks of sixteen frequencies
  CHECK(top.layers[0].params.alphas.front() == fr(0));
  CHECK(top.layers[1].params.alphas.front() == fr(16));
  CHECK(top.layers[2].params.alphas.front() == fr(32));
  CHECK(top.layers[2].params.alphas.back() == fr(47));

  // three towers per hosting interval on the quarter slots
  const auto& kids = c.towers_by_level.at(1);
  CHECK(c.towers[kids[0]].layers[0].params.tops ==
        std::vector<DyadicInterval>{di(4, 0)});
  CHECK(c.towers[kids[1]].layers[0].params.tops ==
        std::vector<DyadicInterval>{di(4, 1)});
  CHECK(c.towers[kids[2]].layers[0].params.tops ==
        std::vector<DyadicInterval>{di(4, 2)});
  CHECK(c.towers[kids[3]].layers[0].params.tops ==
        std::vector<DyadicInterval>{di(4, 8)});
  CHECK(c.towers[kids[3]].window_start == 8);

  // the child window is a strict prefix of the host block: six of the eight
  // parent frequencies, rotated one block per layer, wrapping at the end
  const TowerRecord& rot0 = c.towers[kids[0]];
  const TowerRecord& rot2 = c.towers[kids[2]];
  CHECK(rot0.layers[0].params.alphas == std::vector<Rat>{fr(0), fr(1)});
  CHECK(rot0.layers[1].params.alphas == std::vector<Rat>{fr(2), fr(3)});
  CHECK(rot0.layers[2].params.alphas == std::vector<Rat>{fr(4), fr(5)});
  CHECK(rot2.layers[0].params.alphas == std::vector<Rat>{fr(4), fr(5)});
  CHECK(rot2.layers[1].params.alphas == std::vector<Rat>{fr(0), fr(1)});
  CHECK(rot2.layers[2].params.alphas == std::vector<Rat>{fr(2), fr(3)});

  // children also share their last-pair tops
  CHECK(rot0.layers[1].params.tops == rot0.layers[2].params.tops);

  CHECK(c.universe.tiles.size() == 472);
  CHECK(c.chains.size() == 140);
}

TEST_CASE("three-layer ladder: absorption is exactly the target") {
  const Cme c = build_cme(ladder_b());
  const std::int64_t R = 14;

  // the six child towers contribute 10 chains each; the top tower's first
  // layer starts at chain 60, one chain per frequency index 0..15
  for (std::int64_t m = 0; m < 16; ++m) {
    const ChainSolution& s = c.chains[60 + m];
    CHECK(s.tower == 0);
    CHECK(s.layer == 0);
    const bool hosted = (m < 6) || (m >= 8 && m < 14);
    if (hosted) {
      // the cells of the structures below add up to the requirement exactly
      CHECK(s.absorbed == Rat(1, 32));
      CHECK(s.cells.measure() == Rat(1, 32));
    } else {
      CHECK(s.absorbed == Rat(0));
      CHECK(s.cells.measure() == Rat(1, 32));
    }
  }
  // the unhosted frequencies fill the one empty slot of each hosting
  // interval, left to right
  CHECK(c.chains[66].cells == iv(R, Rat(3, 16), Rat(7, 32)));
  CHECK(c.chains[67].cells == iv(R, Rat(7, 32), Rat(1, 4)));
  CHECK(c.chains[74].cells == iv(R, Rat(11, 16), Rat(23, 32)));
  CHECK(c.chains[75].cells == iv(R, Rat(23, 32), Rat(3, 4)));

  // the budget packs the whole interval: nothing is left for the sentinel
  CHECK(measure_at(c.lin.N, c.sentinel_freq) == Rat(0));
  CHECK(c.lin.N.support().measure() == Rat(1));
}

TEST_CASE("three-layer ladder: full validation report") {
  const Cme c = build_cme(ladder_b());
  const CmeReport rep = validate_cme(c);
  for (const CmeCheck& ch : rep.checks) {
    INFO(ch.name, ": ", ch.detail);
    CHECK(ch.pass);
  }
  CHECK(rep.ok);
  CHECK(rep.tiles_per_level.at(1) == 120);
  CHECK(rep.tiles_per_level.at(2) == 352);
  CHECK(rep.min_mass == Rat(1, 32));
  CHECK(rep.last_layer_basis_measure.at(1) == Rat(3, 16));
  CHECK(rep.last_layer_basis_measure.at(2) == Rat(1, 2));
}

TEST_CASE("three-level ladder validates") {
  const Cme c = build_cme(ladder_c());
  REQUIRE(c.towers.size() == 21);
  CHECK(c.towers_by_level.at(3).size() == 1);
  CHECK(c.towers_by_level.at(2).size() == 4);
  CHECK(c.towers_by_level.at(1).size() == 16);
  CHECK(c.universe.tiles.size() == 576);

  const CmeReport rep = validate_cme(c);
  for (const CmeCheck& ch : rep.checks) {
    INFO(ch.name, ": ", ch.detail);
    CHECK(ch.pass);
  }
  CHECK(rep.ok);
  CHECK(rep.tiles_per_level.at(1) == 192);
  CHECK(rep.tiles_per_level.at(2) == 192);
  CHECK(rep.tiles_per_level.at(3) == 192);
  CHECK(rep.min_mass == Rat(1, 64));
}

TEST_CASE("single-layer ladder degenerates cleanly") {
  ScaleProfile p = ladder_a();
  p.height = 1;
  p.subdiv = 0;
  REQUIRE(p.validate().empty());
  const Cme c = build_cme(p);

  // one tower per hosting interval, carrying the full window unrotated
  REQUIRE(c.towers.size() == 3);
  CHECK(c.towers[1].layers.size() == 1);
  CHECK(c.towers[1].layers[0].params.tops ==
        std::vector<DyadicInterval>{di(2, 0)});
  CHECK(c.towers[2].layers[0].params.tops ==
        std::vector<DyadicInterval>{di(2, 2)});

  const CmeReport rep = validate_cme(c);
  for (const CmeCheck& ch : rep.checks) {
    INFO(ch.name, ": ", ch.detail);
    CHECK(ch.pass);
  }
  CHECK(rep.ok);
}

TEST_CASE("corrupted layer frequencies are caught and localized") {
  Cme c = build_cme(ladder_a());
  // overwrite tower 2's second layer with its first layer's frequencies
  UsgtfParams q = c.towers[2].layers[1].params;
  q.alphas = c.towers[2].layers[0].params.alphas;
  c.towers[2].layers[1] = build_usgtf(q);

  const CmeReport rep = validate_cme(c);
  CHECK(!rep.ok);
  CHECK(!passes(rep, "frequency-blocks"));
  CHECK(!passes(rep, "sibling-blocks"));
  CHECK(!passes(rep, "incomparability"));
  CHECK(!passes(rep, "e-sharing"));
  // the damage does not leak into unrelated checks
  CHECK(passes(rep, "profile"));
  CHECK(passes(rep, "tower-shape"));
  CHECK(passes(rep, "usgtf-levels"));
  CHECK(passes(rep, "layer-nesting"));
  CHECK(passes(rep, "hosting"));
  CHECK(passes(rep, "masses"));
}

TEST_CASE("geometry floors: resolution and base frequency") {
  ScaleProfile p = ladder_a();
  p.resolution = 6;  // finest chain allotment needs 7 bits
  CHECK_THROWS_AS(build_cme(p), std::invalid_argument);

  p = ladder_a();
  p.resolution = 7;
  CHECK_NOTHROW(build_cme(p));

  p = ladder_a();
  p.freq_base_exp = 11;  // finest window needs 12
  CHECK_THROWS_AS(build_cme(p), std::invalid_argument);
}

TEST_CASE("builds are deterministic") {
  const Cme c1 = build_cme(ladder_a());
  const Cme c2 = build_cme(ladder_a());
  CHECK(c1.lin.N.runs() == c2.lin.N.runs());
  CHECK(c1.lin.freqs == c2.lin.freqs);
  CHECK(c1.universe.tiles == c2.universe.tiles);
  REQUIRE(c1.chains.size() == c2.chains.size());
  for (std::size_t i = 0; i < c1.chains.size(); ++i) {
    CHECK(c1.chains[i].cells == c2.chains[i].cells);
    CHECK(c1.chains[i].absorbed == c2.chains[i].absorbed);
  }
}

TEST_CASE("normal/boundary split: width-one tops leave no margin") {
  const Cme c = build_cme(ladder_a());
  const NormalSplit sp = normal_boundary_split(c.towers[0].layers[0]);
  CHECK(sp.normal.empty());
  CHECK(sp.boundary.size() == 16);
}

TEST_CASE("normal/boundary split: wide tops admit interior tiles") {
  // five adjacent tops of length 1/8 and a deep generation: the star of a
  // tile fits inside [0,5/8) only when the tile is small and central
  UsgtfParams q;
  for (std::int64_t i = 0; i < 5; ++i) q.tops.push_back(di(3, i));
  q.r = 1;
  q.n = 6;
  q.sigma = 10;
  for (std::int64_t m = 0; m < 32; ++m) q.alphas.push_back(fr(m));
  const Usgtf f = build_usgtf(q);
  REQUIRE(f.chain_count() == 160);
  REQUIRE(f.all_tiles().size() == 960);

  // chain 80 = third top, seventeenth frequency: bottom [80/256, 81/256)
  CHECK(f.constraints[80].host == di(8, 80));

  const NormalSplit sp = normal_boundary_split(f);
  CHECK(sp.normal.size() + sp.boundary.size() == 960);
  std::vector<bool> is_normal(960, false);
  for (std::size_t i : sp.normal) is_normal[i] = true;

  // all_tiles stacks levels 1..6, one tile per chain each
  auto idx = [](std::int64_t level, std::size_t chain) {
    return static_cast<std::size_t>((level - 1) * 160 + chain);
  };

  // the two coarsest levels never fit: 8.5 tile lengths overshoot the ends
  for (std::size_t ch = 0; ch < 160; ++ch) {
    CHECK(!is_normal[idx(5, ch)]);
    CHECK(!is_normal[idx(6, ch)]);
  }

  // a central bottom fits, the leftmost one does not
  CHECK(is_normal[idx(1, 80)]);
  CHECK(!is_normal[idx(1, 0)]);

  // level 4 straddles the cutoff: star reaching exactly the left edge is
  // still inside, touching the right endpoint is not
  CHECK(is_normal[idx(4, 64)]);   // time [17/64 - 17/64, ...]: closes at 0
  CHECK(!is_normal[idx(4, 88)]);  // star ends exactly at 5/8

  bool any4 = false;
  for (std::size_t ch = 0; ch < 160; ++ch) any4 |= is_normal[idx(4, ch)];
  CHECK(any4);
}
