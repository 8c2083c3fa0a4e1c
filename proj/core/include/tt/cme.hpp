// The multi-tower chain builder: a configurable ladder of levels, each level
// a multi-tower of top-forests nested inside the previous one, plus the
// derived frequency assignment N that realizes every chain's E-set with the
// exact declared measure.  Knob naming:
//   levels    L   how many nested generations the chain has
//   height    h   layers per tower
//   gen(j)    (r_j, n_j)  mass-exponent window of level j, ascending in j
//   subdiv    s   each hosting interval J splits into 2^s slots, h of which
//                 carry one tower each
//   floor_gen g0  lower generation used by the shared last layer pair and by
//                 every layer of the lowest level
//   freq_base_exp / sigma   frequencies are 2^(freq_base_exp + sigma*m)
//   branch_cap / host_cap   desk-scale caps on cascade fan-out and on how
//                 many bottoms per structure host child towers
//   top_width w   the top level starts from w adjacent equal intervals
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tt/structures.hpp"

namespace tt {

struct GenPair {
  std::int64_t lower = 1, upper = 1;
  bool operator==(const GenPair&) const = default;
};

struct ScaleProfile {
  std::int64_t levels = 2;
  std::int64_t height = 2;
  std::vector<GenPair> gen;  // gen[j-1] for level j
  std::int64_t subdiv = 1;
  std::int64_t floor_gen = 1;
  std::int64_t sigma = 10;
  std::int64_t freq_base_exp = 34;
  std::int64_t resolution = 20;
  std::int64_t branch_cap = 2;
  std::int64_t host_cap = 2;
  std::int64_t top_width = 1;

  std::vector<std::string> validate() const;  // empty means well-formed
  bool operator==(const ScaleProfile&) const = default;
};

// generation used by layer l of a level-j tower: nominal gen(j), except that
// for h >= 3 the last two layers drop their lower end to floor_gen
GenPair layer_generation(const ScaleProfile& p, std::int64_t level, std::int64_t l);

struct TowerRecord {
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::int64_t level = 1;      // 1..L, L is the top
  std::vector<Usgtf> layers;   // 1..height
  std::size_t parent_tower = npos;
  std::int64_t parent_layer = 0;           // 1-based layer inside the host
  std::optional<DyadicInterval> host_j;    // hosting interval (left child of
                                           // a parent bottom); none at the top
  std::int64_t sub_index = 0;              // which of the 2^s slots of host_j
  std::int64_t window_start = 0;           // first frequency index m of the
                                           // tower's h-block window
  std::int64_t rotation = 0;               // cyclic shift of layer blocks
};

// realized E-set of one chain: cells inherited from lower levels plus the
// fresh cells this chain claimed
struct ChainSolution {
  std::size_t tower = 0;
  std::size_t layer = 0;  // 0-based into TowerRecord::layers
  std::size_t chain = 0;  // index into Usgtf::constraints
  MeasurableSet cells;
  Rat absorbed;  // measure contributed by already-solved lower chains
};

struct Cme {
  ScaleProfile profile;
  std::vector<TowerRecord> towers;  // top tower first, then levels downward
  std::map<std::int64_t, std::vector<std::size_t>> towers_by_level;
  Linearization lin;
  TileUniverse universe;                  // all tiles, same order as towers
  std::vector<std::size_t> tile_tower;    // owner tower per universe tile
  std::vector<std::int64_t> tile_level;   // mass exponent per universe tile
  std::vector<ChainSolution> chains;      // solver order: levels ascending
  Rat sentinel_freq;                      // value of N on unclaimed cells
};

Cme build_cme(const ScaleProfile& profile);

// the layers of one tower; base_tops seeds layer 1, the frequency window is
// the h consecutive blocks starting at index window_start, rotated by
// `rotation` blocks across the layers
std::vector<Usgtf> build_tower_layers(const ScaleProfile& p, std::int64_t level,
                                      const std::vector<DyadicInterval>& base_tops,
                                      std::int64_t window_start,
                                      std::int64_t rotation);

struct CmeCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct CmeReport {
  bool ok = true;
  std::vector<CmeCheck> checks;
  std::map<std::int64_t, std::size_t> tiles_per_level;
  std::map<std::int64_t, Rat> last_layer_basis_measure;
  Rat min_mass{0};

  void add(const std::string& name, bool pass, const std::string& detail = "");
  const CmeCheck* find(const std::string& name) const;
};

CmeReport validate_cme(const Cme& c);

// tiles whose star region stays inside the union of the structure's tops
// versus the rest; indices follow f.all_tiles() order
struct NormalSplit {
  std::vector<std::size_t> normal, boundary;
};
NormalSplit normal_boundary_split(const Usgtf& f);

}  // namespace tt
