// Area-one time-frequency tiles over the dyadic grid, the measurable
// frequency assignment N, E-sets, restricted and damped full mass, the
// tile partial order, and the weight-bin partition of a finite universe.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tt/dyadic.hpp"

namespace tt {

// P = [omega, I]: dyadic time interval I inside [0,1) paired with a dyadic
// frequency interval omega on [0, inf) of reciprocal length, |omega||I| = 1.
struct Tile {
  DyadicInterval time;  // scale >= 0
  DyadicInterval freq;  // scale = -time.scale, index >= 0

  Rat alpha() const { return freq.lo(); }  // left frequency endpoint

  bool operator==(const Tile&) const = default;
  auto operator<=>(const Tile&) const = default;
};

// P = I x alpha: alpha must sit on the frequency grid of step 1/|I|
Tile tile_from_alpha(const DyadicInterval& time, const Rat& alpha);
bool tile_area_one(const Tile& P);

// P1 <= P2 iff I1 inside I2 and omega1 contains omega2; strict additionally
// needs |I1| < |I2|
bool tile_leq(const Tile& P1, const Tile& P2);
bool tile_lt(const Tile& P1, const Tile& P2);

// real (non-dyadic) frequency interval, half-open
struct FreqWindow {
  Rat lo, hi;
  bool contains(const Rat& x) const { return lo <= x && x < hi; }
};

// center-preserving dilation of omega_P by a > 0; time leg unchanged
FreqWindow tile_dilate(const Rat& a, const Tile& P);

// distance between the closures, 0 on overlap
Rat window_distance(const FreqWindow& A, const FreqWindow& B);

// Measurable frequency assignment x -> N(x).  Values come from a fixed
// finite frequency list; cells not covered by a run of N are unassigned and
// never enter an E-set (the step function drops zero runs, so they simply
// do not appear).
struct Linearization {
  StepFunction N;
  std::vector<Rat> freqs;   // strictly increasing, positive
  std::int64_t sigma = 10;  // consecutive frequencies differ by >= 2^sigma

  std::vector<std::string> validate() const;  // empty means well-formed
};

struct TileUniverse {
  std::vector<Tile> tiles;
  Linearization lin;
  int n0 = 10;                       // damping exponent in the mass sup
  std::int64_t mass_floor_exp = 60;  // classify flags full mass < 2^-this

  std::vector<std::string> validate() const;
};

// E(P) = {x in I_P : N(x) in omega_P}, exact at the resolution of N
MeasurableSet e_set(const Tile& P, const Linearization& lin);

// A0(P) = |E(P)| / |I_P|
Rat restricted_mass(const Tile& P, const Linearization& lin);

// A(P) = sup over universe tiles P' with I_P inside I_P' of
//   A0(P') / (1 + dist(10 omega, 10 omega') / |omega|)^n0,
// an exact rational (0 if the pool is somehow empty).  Linear scan; classify
// batches the same sup through an ancestor index instead.
Rat mass(const Tile& P, const TileUniverse& U);

struct Classification {
  std::vector<Rat> a0;  // restricted mass, universe order
  std::vector<Rat> a;   // full mass
  std::vector<std::size_t> p_zero;      // 0 lands in 100 omega
  std::vector<std::size_t> p_bar_zero;  // remaining tiles with A0 = 0
  std::vector<std::size_t> p_main;      // everything else
  // weight n holds the p_main tiles with A in (2^-n-1, 2^-n]
  std::map<std::int64_t, std::vector<std::size_t>> bins;
  // maximal elements of each bin under the tile order
  std::map<std::int64_t, std::vector<std::size_t>> maximal;
  std::vector<std::size_t> floor_violations;  // p_main tiles below the floor
};

Classification classify(const TileUniverse& U);

}  // namespace tt
