#include <doctest.h>

#include <vector>

#include "tt/structures.hpp"

using namespace tt;

namespace {

DyadicInterval di(std::int64_t s, std::int64_t i) { return {s, Int(i)}; }

Rat p2(std::int64_t e) { return pow2r(e); }

UsgtfParams simple_params() {
  UsgtfParams p;
  p.tops = {di(0, 0)};
  p.alphas = {p2(12), p2(22)};
  p.r = 1;
  p.n = 2;
  return p;
}

}  // namespace

TEST_CASE("top-forest builder: hand-traced level stack") {
  Usgtf f = build_usgtf(simple_params());
  CHECK(f.chain_count() == 2);

  // top level: both frequencies over the full top interval
  REQUIRE(f.levels.at(2).size() == 2);
  CHECK(f.levels.at(2)[0] == tile_from_alpha(di(0, 0), p2(12)));
  CHECK(f.levels.at(2)[1] == tile_from_alpha(di(0, 0), p2(22)));

  // bottom level: frequency u sits over the u-th half
  REQUIRE(f.levels.at(1).size() == 2);
  CHECK(f.levels.at(1)[0] == tile_from_alpha(di(1, 0), p2(12)));
  CHECK(f.levels.at(1)[1] == tile_from_alpha(di(1, 1), p2(22)));

  CHECK(f.i_btm() == std::vector<DyadicInterval>{di(1, 0), di(1, 1)});

  // chains run downward in the order, one shared E-set obligation each
  for (std::size_t c = 0; c < 2; ++c) {
    CHECK(tile_leq(f.levels.at(1)[c], f.levels.at(2)[c]));
    CHECK(f.constraints[c].chain == c);
    CHECK(f.constraints[c].host == di(1, static_cast<std::int64_t>(c)));
    CHECK(f.constraints[c].measure == Rat(1, 4));  // 2^-r |host|
    CHECK(f.constraints[c].alpha == f.levels.at(1)[c].alpha());
  }
}

TEST_CASE("top-forest builder: degenerate generation and counts") {
  // r = n: single level, bottoms are the tops themselves
  UsgtfParams p;
  p.tops = {di(2, 0), di(2, 2)};
  p.alphas = {p2(12), p2(22)};
  p.r = p.n = 2;
  Usgtf f = build_usgtf(p);
  CHECK(f.levels.size() == 1);
  CHECK(f.levels.at(2).size() == 4);
  CHECK(f.i_btm() == p.tops);

  // every level carries (#tops) 2^{n-1} tiles; bottom times repeat per block
  UsgtfParams q;
  q.tops = {di(0, 0)};
  q.alphas = {p2(12), p2(22), p2(32), p2(42)};
  q.r = 1;
  q.n = 3;
  Usgtf g = build_usgtf(q);
  for (std::int64_t j = 1; j <= 3; ++j) CHECK(g.levels.at(j).size() == 4);
  // level r: one frequency per quarter
  for (std::size_t c = 0; c < 4; ++c)
    CHECK(g.levels.at(1)[c].time == di(2, static_cast<std::int64_t>(c)));

  // exactly one bottom tile strictly below each top tile
  for (const Tile& top : g.levels.at(3)) {
    int below = 0;
    for (const Tile& bot : g.levels.at(1))
      if (tile_lt(bot, top)) ++below;
    CHECK(below == 1);
  }

  // rejected parameter sets
  UsgtfParams bad = simple_params();
  bad.alphas = {p2(12)};
  CHECK_THROWS(build_usgtf(bad));
  bad = simple_params();
  bad.alphas = {p2(12), p2(20)};  // ratio below 2^sigma
  CHECK_THROWS(build_usgtf(bad));
  bad = simple_params();
  bad.alphas = {Rat(3), p2(22)};  // off the level-r grid
  CHECK_THROWS(build_usgtf(bad));
}

TEST_CASE("builder round-trip and self-recognition") {
  for (UsgtfParams p : {simple_params(), [] {
         UsgtfParams q;
         q.tops = {di(1, 0), di(1, 1)};
         q.alphas = {p2(13), p2(23), p2(33), p2(43)};
         q.r = 2;
         q.n = 3;
         return q;
       }()}) {
    Usgtf f = build_usgtf(p);
    UsgtfParams back = derive_params(f.levels);
    CHECK(back.tops == p.tops);
    CHECK(back.alphas == p.alphas);
    CHECK(back.r == p.r);
    CHECK(back.n == p.n);
    CHECK(is_usgtf(f.levels, p.r, p.n));

    // rebuilding from derived params reproduces the tiles exactly
    back.sigma = p.sigma;
    CHECK(build_usgtf(back).levels == f.levels);
  }
}

TEST_CASE("trees and sparse trees") {
  // a frequency column over a nested time chain is a tree
  const Rat a = p2(12);
  Tile A = tile_from_alpha(di(0, 0), a);
  Tile B = tile_from_alpha(di(1, 0), a);
  Tile C = tile_from_alpha(di(2, 0), a);
  std::vector<Tile> U = {A, B, C};
  CHECK(is_tree({A}, A, U));
  CHECK(is_tree({A, B, C}, A, U));
  CHECK(is_tree({B, C}, A, U));
  // gap: B lies between C and A inside the universe but not in the set
  CHECK_FALSE(is_tree({A, C}, A, U));
  CHECK(is_tree({A, C}, A, {A, C}));

  // packing along a single branch: 1 + 1/2 + 1/4 = 7/4
  CHECK(is_sparse_tree({A, B, C}, A, U, Rat(7, 4)));
  CHECK_FALSE(is_sparse_tree({A, B, C}, A, U, Rat(17, 10)));

  // full dyadic time tree of depth 2: every level contributes |I_top|
  std::vector<Tile> full = {A};
  for (int k = 0; k < 2; ++k) full.push_back(tile_from_alpha(di(1, k), a));
  for (int k = 0; k < 4; ++k) full.push_back(tile_from_alpha(di(2, k), a));
  CHECK(is_sparse_tree(full, A, full, Rat(3)));
  CHECK_FALSE(is_sparse_tree(full, A, full, Rat(29, 10)));

  // 4 disjoint same-scale leaves under one top: sum = 2 |I_top|
  std::vector<Tile> leaves;
  for (int k = 0; k < 4; ++k) leaves.push_back(tile_from_alpha(di(2, k), a));
  std::vector<Tile> tree = leaves;
  tree.push_back(A);
  CHECK(is_sparse_tree(tree, A, tree, Rat(2)));
  CHECK_FALSE(is_sparse_tree(tree, A, tree, Rat(3, 2)));
}

TEST_CASE("forest decomposition, separation, counting bound") {
  const Rat a = p2(12);
  // single tree
  Tile A = tile_from_alpha(di(0, 0), a);
  Tile C = tile_from_alpha(di(2, 0), a);
  auto rep1 = forest_check({A, C}, 2);
  CHECK(rep1.tops.size() == 1);
  CHECK(rep1.trees[0].size() == 2);
  CHECK(rep1.counting_linf == Rat(1));
  CHECK(rep1.verdict);

  // 4 disjoint-time singleton trees at generation 2
  std::vector<Tile> leaves;
  for (int k = 0; k < 4; ++k) leaves.push_back(tile_from_alpha(di(2, k), a));
  auto rep2 = forest_check(leaves, 2);
  CHECK(rep2.tops.size() == 4);
  CHECK(rep2.counting_linf == Rat(1));
  CHECK(rep2.verdict);

  // 2^n + 1 tops stacked over one time interval: counting bound fails
  std::vector<Tile> stacked;
  for (int u = 0; u < 5; ++u)
    stacked.push_back(tile_from_alpha(di(2, 0), p2(12 + 10 * u)));
  auto rep3 = forest_check(stacked, 2);
  CHECK(rep3.separated);
  CHECK(rep3.counting_linf == Rat(5));
  CHECK_FALSE(rep3.verdict);

  // engineered dilation overlap: fine wide-frequency tile over a coarse top
  Tile wide = tile_from_alpha(di(4, 0), Rat(4096));
  Tile top = tile_from_alpha(di(0, 0), Rat(4112));
  auto rep4 = forest_check({wide, top}, 2);
  CHECK(rep4.tops.size() == 2);
  CHECK_FALSE(rep4.separated);
  CHECK_FALSE(rep4.verdict);
  CHECK(rep4.violating.first == 0);   // the wide tile
  CHECK(rep4.violating.second == 1);  // against the coarse top
}

TEST_CASE("interval-collection precedence") {
  std::vector<DyadicInterval> B = {di(1, 0), di(1, 1)};
  CHECK(prec({di(2, 0), di(2, 3)}, B));
  CHECK(prec(B, B));  // containment read non-strictly
  CHECK_FALSE(prec({di(0, 0)}, B));
}

TEST_CASE("towers: valid stack and named violations") {
  UsgtfParams p1;
  p1.tops = {di(0, 0)};
  p1.alphas = {p2(12), p2(22)};
  p1.r = 1;
  p1.n = 2;
  UsgtfParams p2_;
  p2_.tops = {di(2, 0), di(2, 2)};  // inside [0,1/2) and [1/2,1)
  p2_.alphas = {p2(33), p2(43)};
  p2_.r = 1;
  p2_.n = 2;
  Usgtf f1 = build_usgtf(p1), f2 = build_usgtf(p2_);

  auto rep = tower_check({f1, f2});
  CHECK(rep.ok);
  CHECK(rep.height == 2);
  CHECK(rep.basis == p1.tops);

  // single layer: height-1 tower
  auto rep1 = tower_check({f1});
  CHECK(rep1.ok);
  CHECK(rep1.height == 1);

  // shared frequency
  UsgtfParams p3 = p2_;
  p3.alphas = {p2(22), p2(43)};
  auto rep2 = tower_check({f1, build_usgtf(p3)});
  CHECK_FALSE(rep2.ok);
  CHECK(rep2.violation.find("frequency") != std::string::npos);

  // second layer not inside the first layer's bottoms
  UsgtfParams p4 = p2_;
  p4.tops = {di(0, 0)};
  auto rep3 = tower_check({f1, build_usgtf(p4)});
  CHECK_FALSE(rep3.ok);
  CHECK(rep3.violation.find("bottoms") != std::string::npos);

  // comparable tiles across layers despite distinct frequencies
  UsgtfParams q1;
  q1.tops = {di(1, 0)};
  q1.alphas = {Rat(4098)};
  q1.r = q1.n = 1;
  UsgtfParams q2;
  q2.tops = {di(2, 0)};
  q2.alphas = {Rat(4096)};  // window [4096,4100) swallows [4098,4100)
  q2.r = q2.n = 1;
  auto rep4 = tower_check({build_usgtf(q1), build_usgtf(q2)});
  CHECK_FALSE(rep4.ok);
  CHECK(rep4.violation.find("comparable") != std::string::npos);
}

TEST_CASE("multi-towers: disjoint bases") {
  UsgtfParams a;
  a.tops = {di(1, 0)};
  a.alphas = {p2(12)};
  a.r = a.n = 1;
  UsgtfParams b = a;
  b.tops = {di(1, 1)};
  b.alphas = {p2(22)};

  CHECK(multitower_check({{build_usgtf(a)}, {build_usgtf(b)}}).ok);

  UsgtfParams c = a;
  c.tops = {di(2, 1)};  // inside a's basis
  c.alphas = {p2(32)};
  auto rep = multitower_check({{build_usgtf(a)}, {build_usgtf(c)}});
  CHECK_FALSE(rep.ok);
  CHECK(rep.violation.find("overlap") != std::string::npos);
}

TEST_CASE("embedding between top-forests") {
  UsgtfParams lo;
  lo.tops = {di(2, 0)};
  lo.alphas = {p2(13), p2(23)};
  lo.r = 1;
  lo.n = 2;
  UsgtfParams hi;
  hi.tops = {di(0, 0)};
  hi.alphas = {p2(13), p2(23), p2(33), p2(43)};
  hi.r = 2;
  hi.n = 3;
  Usgtf f_lo = build_usgtf(lo), f_hi = build_usgtf(hi);

  CHECK(embeds(f_lo, f_hi));
  CHECK_FALSE(embeds(f_lo, f_lo));  // generation clause: n > r
  CHECK_FALSE(embeds(f_hi, f_lo));

  // frequency outside the receiving family
  UsgtfParams stray = lo;
  stray.alphas = {p2(13), Rat(3) * p2(23)};
  CHECK_FALSE(embeds(build_usgtf(stray), f_hi));

  CHECK(embeds_tower({f_lo}, {f_hi}));
}

TEST_CASE("saturation relative to a supplied universe") {
  Usgtf f = build_usgtf(simple_params());
  // universe = the structure itself, split by level: closed by construction
  std::map<std::int64_t, std::vector<Tile>> uni = f.levels;
  CHECK(is_saturated_in(f.levels, uni));

  // a universe tile strictly above a family member must belong to the family
  Tile member = f.levels.at(1)[0];  // [0,1/2) x [2^12, 2^12+2)
  Tile above = tile_from_alpha(di(0, 0), p2(12));
  std::map<std::int64_t, std::vector<Tile>> uni2;
  uni2[1] = {member, above};
  CHECK_FALSE(is_saturated_in({{1, {member}}}, uni2));
  CHECK(is_saturated_in({{1, {member, above}}}, uni2));
}
