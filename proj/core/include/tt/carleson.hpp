// Oscillatory tile operators.  A smooth odd bump partitions the reciprocal
// kernel into dyadic scales; each tile applies one scale against a measurable
// phase, cut to the tile's E-set.  Oscillation integrals are taken in a
// companion-frequency model: the combinatorial side keeps the true ladder
// frequencies, the phase side maps them through an order- and dyadic-ratio-
// preserving reduction so every period is representable on the working grid.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "tt/cme.hpp"

namespace tt {

using Cplx = std::complex<double>;

// eta: C^2 even mollified step, 1 on [-4,4], 0 outside (-8,8), nonincreasing
// in |y| (quintic ramp on 4 <= |y| <= 8); psi(y) = (eta(y) - eta(2y))/y.
struct Kernel {
  double eta(double y) const;
  double psi(double y) const;
  double psi_k(std::int64_t k, double y) const;  // 2^k psi(2^k y)
  // sum_{k=0}^K psi_k(y); telescopes to (eta(y) - eta(2^{K+1} y))/y
  double partial_sum(std::int64_t K, double y) const;
};
Kernel make_kernel();

// complex-valued step function on cells of resolution res; runs sorted,
// disjoint, zero-valued runs dropped
struct CStep {
  struct Run {
    Int begin, end;
    Cplx value;
  };
  std::int64_t res = 0;
  std::vector<Run> runs;

  CStep() = default;
  explicit CStep(std::int64_t resolution) : res(resolution) {}
  CStep(std::int64_t resolution, std::vector<Run> rs);

  Cplx value_at_cell(const Int& cell) const;
  Cplx value_at(const Rat& x) const;
  double l1() const;        // integral of |value|
  double max_abs() const;   // max over cells
  Cplx integral() const;
  MeasurableSet support() const;
  StepFunction real_part() const;  // double values held exactly
  StepFunction imag_part() const;
  CStep restricted(const MeasurableSet& a) const;
  CStep refined(std::int64_t r2) const;
};

CStep cstep_add(const CStep& a, const CStep& b);
CStep cstep_scale(const Cplx& c, const CStep& f);
// integral of a * g over the common domain (g real)
Cplx cstep_inner(const CStep& a, const StepFunction& g);

// companion frequencies 2^e for the phase side of one tower: consecutive even
// exponents starting a little below the tower's deepest bottom length, ranked
// in three tiers (alignment-layer frequencies owning an interior tile, other
// alignment-layer frequencies, the rest) so the frequencies that anchor sign
// constraints keep the shortest periods
struct FrequencyReduction {
  std::map<Rat, std::int64_t> exponent;  // true frequency -> e

  bool has(const Rat& alpha) const { return exponent.count(alpha) != 0; }
  std::int64_t exponent_of(const Rat& alpha) const;
  Rat reduced(const Rat& alpha) const;  // 2^exponent_of
};

FrequencyReduction reduce_tower(const Cme& c, std::size_t tower);

// one reduction per tower plus tile lookups resolved against the universe
struct CmeReduction {
  std::vector<FrequencyReduction> per_tower;

  const FrequencyReduction& of_tower(std::size_t t) const;
  Rat reduced_for_tile(const Cme& c, std::size_t tile_index) const;
};
CmeReduction reduce_cme(const Cme& c);

// exact oscillation primitives: arguments reduced mod 1 in rational
// arithmetic before any floating evaluation
Cplx unit_phase(const Rat& turns);                            // e^{2 pi i t}
Cplx exp_integral(const Rat& a, const Rat& lo, const Rat& hi);  // of e^{-2 pi i a y}
double cos_integral(const Rat& a, const Rat& lo, const Rat& hi);
double abs_cos_integral(const Rat& a, const Rat& lo, const Rat& hi);

struct QuadSpec {
  std::int64_t out_res = -1;  // output resolution; -1 picks a default
  // y-pieces (x-pieces for the adjoint) live at scale >= tile scale + margin
  std::int64_t work_margin = 6;
  // phase frequencies pass through this map when present (the owning tower's)
  const FrequencyReduction* reduction = nullptr;
};

// {int e^{-2 pi i N(x) y} psi_k(x-y) f(y) dy} chi_{E(P)}(x), k the tile scale;
// values at cell centers, pieces = cells, per-cell exact phase factor.  At the
// default output resolution (the assignment grid) the support is exactly
// E(P); a coarser out_res keeps the cells whose center lies in E(P)
CStep t_p(const StepFunction& f, const Tile& P, const Linearization& lin,
          const Kernel& ker, const QuadSpec& q = {});

// adjoint: int_{E(P)} e^{2 pi i N(x) y} psi_k(x-y) g(x) dx as a cell average
// in y over the star region of the tile's time leg
CStep t_p_star(const StepFunction& g, const Tile& P, const Linearization& lin,
               const Kernel& ker, const QuadSpec& q = {});

// demodulated adjoint profile v_P(y) = int_{E(P)} psi_k(x-y) dx; with the
// phase constant on E(P) the adjoint of the unit function is e^{2 pi i a y}
// times this real, oscillation-free shape
double v_profile(const Tile& P, const Linearization& lin, const Kernel& ker,
                 double y, std::int64_t work_margin = 6);

// a weighted set per level, the shape both bucket routing and the alignment
// ratio consume
struct LevelSet {
  std::int64_t level = 1;
  MeasurableSet set;
  Rat weight{1};
};

// routing classes for one (tile, level) pair inside the main grouping
enum class PairClass { low, low_lower_normal, high, member_normal, member_boundary };

struct BucketCounts {
  std::size_t zero_window = 0;  // tiles whose dilated frequency window holds 0
  std::size_t zero_mass = 0;    // remaining tiles of vanishing restricted mass
  std::size_t main = 0;
  // per level: [low, low_lower_normal, high, member_normal, member_boundary]
  std::map<std::int64_t, std::array<std::size_t, 5>> pairs;
};

// the six applied partial operators; their tile routing partitions every
// (tile, level) contribution exactly once
struct Decomposition {
  CStep t_o;         // zero-window tiles, whole input
  CStep t_zero;      // zero-mass tiles, whole input
  CStep t_r_low;     // mass at or below the level window, non-members
  CStep t_r_high;    // mass above the level window
  CStep t_r_bd;      // member boundary tiles
  CStep t_m;         // member normal tiles
  CStep t_r_low_nm;  // slice of t_r_low owned by lower-level normal tiles
  CStep whole;       // unpartitioned sum over all tiles and levels
  BucketCounts counts;
  double partition_gap;  // max cell gap between whole and the bucket sum
};

Decomposition decompose(const Cme& c, const std::vector<LevelSet>& levels,
                        const Kernel& ker, const QuadSpec& q = {});

// int Re(chi_F T_P^*(1)) over (1/500-style) int |chi_F T_P^*(1)|, evaluated
// run-exact in the companion phase
struct AlignmentResult {
  double numerator = 0, denominator = 0;
  double ratio = 0;
  bool vacuous = false;  // zero denominator
};
AlignmentResult key_alignment(const Cme& c, std::size_t tile_index,
                              const MeasurableSet& f_set,
                              const CmeReduction& red, const Kernel& ker,
                              std::int64_t work_margin = 6);

// direct lacunary evaluation: sup_j of the modulated periodic-kernel
// convolution, principal value by symmetric exclusion, cross-checked against
// the analytic coefficient route
struct DirectOptions {
  std::int64_t out_res = 8;
  Rat exclusion{0};           // 0: one output cell width
  std::int64_t fourier_terms = 1 << 14;
  std::int64_t quad_per_cell = 8;
};
struct DirectResult {
  StepFunction sup_quad;     // p.v. route
  StepFunction sup_fourier;  // coefficient route
  MeasurableSet jump_cells;  // output cells near jumps of f, excluded from gap
  double max_gap = 0;        // max |difference| away from jump cells
};
DirectResult c_lac_direct(const StepFunction& f, const std::vector<Int>& seq,
                          const DirectOptions& opt = {});

// base profile with a flat-top transform: phi_hat = 1 on [-plateau, plateau],
// quintic ramp to 0 at |xi| = cutoff; phi tabulated by inverse transform
struct WavePacket {
  double plateau = 0.07, cutoff = 0.1;
  double dx = 0;                // table step
  std::vector<double> table;    // phi(j dx), j = -half..half
  std::int64_t half = 0;
  double tail_mass = 0;         // estimated |phi| mass beyond the table

  double phi_hat(double xi) const;
  double phi(double x) const;  // linear interpolation, 0 past the table
};
WavePacket make_wave_packet(std::int64_t table_scale = 12, double span = 16.0);

// discretized model sum over the translated-dilated grid within a scale range
struct LtGrid {
  double y = 0, lambda = 0, mu = 0;  // grid shifts: space, scale, frequency
  std::int64_t m_min = 0, m_max = 4;
  std::int64_t out_res = 8;
  std::int64_t n_span = 0;  // extra spatial positions beyond the unit window
};
StepFunction lt_single_scale(const StepFunction& f, const Rat& xi,
                             std::int64_t m, const WavePacket& wp,
                             const LtGrid& g);
StepFunction lt_model(const StepFunction& f, const Rat& xi,
                      const WavePacket& wp, const LtGrid& g);

// the reconstruction constant: integrate over the dilation parameter the
// squared transform mass of the packets whose upper window covers 0,
// evaluated at each sample frequency; the spread measures constancy
struct ReconstructionReport {
  std::vector<double> values;
  double mean = 0;
  double spread = 0;      // (max-min)/mean
  double edge_share = 0;  // boundary-scale share of the mean
  bool edge_warning = false;
};
ReconstructionReport reconstruction_constancy(const WavePacket& wp,
                                              const std::vector<double>& xis,
                                              std::int64_t m_min,
                                              std::int64_t m_max,
                                              int lambda_points = 32,
                                              double mu = 0);

}  // namespace tt
