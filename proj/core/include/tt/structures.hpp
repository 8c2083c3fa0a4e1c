// Structure taxonomy over tiles: trees, sparse trees, forests with counting
// functions, the top-forest builder (tops + frequencies -> full level stack
// with shared E-set constraints), towers, multi-towers, and the embedding
// relation between them.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tt/tiles.hpp"

namespace tt {

struct UsgtfParams {
  std::vector<DyadicInterval> tops;  // disjoint, equal length, left to right
  std::vector<Rat> alphas;           // strictly increasing, 2^{n-1} many
  std::int64_t r = 1, n = 1;         // generation, 1 <= r <= n
  std::int64_t sigma = 10;           // frequency separation exponent

  std::vector<std::string> validate() const;
  bool operator==(const UsgtfParams&) const = default;
};

// one E-set obligation shared by a whole chain of nested tiles
struct ChainConstraint {
  std::size_t chain;    // top_index * 2^{n-1} + (u-1)
  DyadicInterval host;  // the chain's bottom interval
  Rat measure;          // required |E| = 2^-r |host|
  Rat alpha;            // frequency shared along the chain
};

// Top-forest: every tree is a single tile.  Built from params alone; level j
// holds one tile per chain, so levels[j][c] follows chain c downward as j
// drops from n to r.
struct Usgtf {
  UsgtfParams params;
  std::map<std::int64_t, std::vector<Tile>> levels;  // keys r..n
  std::vector<ChainConstraint> constraints;

  std::size_t chain_count() const;
  std::vector<DyadicInterval> i_btm() const;  // bottoms of all tops, in order
  std::vector<Tile> all_tiles() const;
};

Usgtf build_usgtf(const UsgtfParams& params);

// read tops/alphas/generation back off a level stack (sigma keeps its default)
UsgtfParams derive_params(const std::map<std::int64_t, std::vector<Tile>>& levels);

// order-convex subset of the universe sitting below one top
bool is_tree(const std::vector<Tile>& p, const Tile& top,
             const std::vector<Tile>& universe);
// additionally: packing sum over nested time legs bounded by C |I_P|
bool is_sparse_tree(const std::vector<Tile>& p, const Tile& top,
                    const std::vector<Tile>& universe, const Rat& c);

struct ForestReport {
  std::vector<std::size_t> tops;               // indices into p, greedy order
  std::vector<std::vector<std::size_t>> trees; // tile indices per top
  StepFunction counting;                       // sum of top-interval indicators
  Rat counting_linf;
  bool separated = true;
  std::pair<std::size_t, std::size_t> violating{0, 0};  // (tile, foreign top)
  bool verdict = false;
};

// decompose into maximal trees, test the dilated-tile separation and the
// L-infinity bound c_f 2^n on the counting function
ForestReport forest_check(const std::vector<Tile>& p, std::int64_t n,
                          const Rat& c_f = Rat(1));

// every tile of `lower` sits below some tile of `upper`
bool dominated_level_pair(const std::vector<Tile>& lower,
                          const std::vector<Tile>& upper);

// level stack is a top-forest: per-level forests with singleton trees and
// equal top lengths, lower levels dominated by higher ones
bool is_usgtf(const std::map<std::int64_t, std::vector<Tile>>& levels,
              std::int64_t r, std::int64_t n, const Rat& c_f = Rat(1));

// closure of each level under passing up/down the order within its own
// weight class of the ambient universe
bool is_saturated_in(const std::map<std::int64_t, std::vector<Tile>>& levels,
                     const std::map<std::int64_t, std::vector<Tile>>& universe_by_weight);

// every member of a fits inside some member of b (non-strict containment)
bool prec(const std::vector<DyadicInterval>& a, const std::vector<DyadicInterval>& b);

struct TowerReport {
  bool ok = true;
  std::string violation;  // names the clause on failure
  std::int64_t height = 0;
  std::vector<DyadicInterval> basis;  // tops of the first layer
};

// layers nest downward: tops of layer l+1 inside bottoms of layer l, no
// order relation and no shared frequency across layers
TowerReport tower_check(const std::vector<Usgtf>& t);

struct MultiTowerReport {
  bool ok = true;
  std::string violation;
};

MultiTowerReport multitower_check(const std::vector<std::vector<Usgtf>>& m);

// generation gap n1 <= r2 plus domination of f1's top level by f2's bottom
bool embeds(const Usgtf& f1, const Usgtf& f2);
bool embeds_tower(const std::vector<Usgtf>& t1, const std::vector<Usgtf>& t2);

}  // namespace tt
