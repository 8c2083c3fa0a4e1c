// Counting functions: per-mass densities read off the maximal tiles of a
// bin, per-level means over the mass windows of a ladder, their grand
// supremum, and the level-set combinatorics (maximal dyadic components,
// cross-level nesting, top-interval witnesses) that tie the level sets back
// to the towers that produced them.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tt/cme.hpp"

namespace tt {

// density of the bin-n maximal tiles: 2^{1-n} * sum of their top indicators
StepFunction nu_bar(std::int64_t n, const TileUniverse& U);
StepFunction nu_bar(std::int64_t n, const TileUniverse& U, const Classification& cl);

// same shape restricted to the level-j tiles of a ladder at mass n; within
// one level the bin tiles are pairwise incomparable, so no maximality filter
StepFunction nu_bar_owned(const Cme& c, std::int64_t j, std::int64_t n);

// mean of the owned densities over level j's mass window.  `offset` drops
// that many masses from the low end of the window (hand-off guard against
// neighbouring generations); the normalization follows the shrunken width.
StepFunction nu_level(const Cme& c, std::int64_t j, std::int64_t offset = 0);

// cell-wise max of nu_level over levels 1..k; k = -1 takes every level
StepFunction nu_grand(const Cme& c, std::int64_t k = -1);

struct LevelSetTree {
  std::int64_t level = 1;
  StepFunction nu;
  // per threshold l = 1..l_max: {nu >= l} and its maximal dyadic pieces
  std::map<std::int64_t, MeasurableSet> sets;
  std::map<std::int64_t, std::vector<DyadicInterval>> comps;
};

LevelSetTree level_sets_of(const StepFunction& nu, std::int64_t level, std::int64_t l_max);
LevelSetTree level_sets(const Cme& c, std::int64_t j, std::int64_t offset = 0);

// Cross-level component relations, all exact:
//   nesting  a component of a lower level never strictly contains one of a
//            higher level (dyadic pieces are otherwise nested or disjoint)
//   decay    inside any component, the lower level's threshold-l pieces fill
//            less than a 2^{-l+10} fraction
struct NestingReport {
  bool nesting = true;
  bool decay = true;
  Rat worst_decay{0};  // max over pairs of 2^{l2} |C1 cap level sets| / |C1|
  std::vector<std::string> violations;
};
NestingReport nesting_check(const std::vector<LevelSetTree>& trees);

// union of the layer-m tops over the level-j towers
MeasurableSet layer_footprint(const Cme& c, std::int64_t j, std::int64_t m);

// Every component of {nu_j >= l} is a union of whole layer-l tops of level-j
// towers, and from l = 2 upward it is exactly one such top.  (At l = 1
// adjacent slot towers tile their hosting interval, so the component is the
// run of their bases.)
bool component_witness(const Cme& c, const LevelSetTree& tree, std::string* why = nullptr);

// {nu_j >= m}  subseteq  layer-m footprint  subseteq  {nu_j > m/2}
bool base_sandwich(const Cme& c, std::int64_t j, std::string* why = nullptr);

struct LevelCountingStats {
  std::int64_t level = 1;
  Rat bmo{0};                                 // dyadic BMO of nu_level
  Rat linf{0};                                // peak stack, = height on builds
  std::map<std::int64_t, Rat> super_measure;  // l -> |{nu_j >= l}|
};

struct MassHighSet {
  std::int64_t mass = 1;
  std::int64_t level = 1;  // owner: the level whose window holds the mass
  Rat measure{0};          // |{nu_bar_mass >= height}|
};

// One-stop summary used by the height sweeps: grand-sup norms, per-level
// stats, and the deep sets {nu_bar_m >= h} with their cross-level behaviour.
struct CountingReport {
  Rat nu_l1{0};
  Rat nu_weak{0};
  std::vector<LevelCountingStats> levels;
  std::vector<MassHighSet> high;
  bool high_disjoint = true;   // high sets of different levels never meet
  bool high_match_deep = true; // each equals its level's deepest footprint
  Rat min_high{0};
  bool sandwich = true;        // base_sandwich at every level
  bool jn_monotone = true;     // tail |{nu_j > g}| nonincreasing, empty at h
  double jn_rate = 0.0;        // least-squares exponential decay rate
};
CountingReport counting_report(const Cme& c, std::int64_t offset = 0);

}  // namespace tt
