// Exact dyadic geometry: dyadic intervals, finite unions of resolution-R cells
// (measurable sets), and piecewise-constant step functions, all over arbitrary
// precision dyadic rationals.  Convention: everything is half-open [a,b); a
// cell c at resolution R is [c 2^-R, (c+1) 2^-R).  Cell indices may be
// negative so adjoint supports living left of 0 stay representable; the set
// constructions themselves stay inside [0,1).
#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "tt/rational.hpp"

namespace tt {

struct DyadicInterval {
  // length 2^-scale, left endpoint index*2^-scale; negative scale gives the
  // long intervals used on the frequency axis
  std::int64_t scale = 0;
  Int index = 0;

  Rat lo() const { return Rat(index) * pow2r(-scale); }
  Rat hi() const { return Rat(index + 1) * pow2r(-scale); }
  Rat length() const { return pow2r(-scale); }
  Rat center() const { return (lo() + hi()) / 2; }

  DyadicInterval left_child() const { return {scale + 1, index * 2}; }
  DyadicInterval right_child() const { return {scale + 1, index * 2 + 1}; }
  DyadicInterval parent() const { return {scale - 1, index >> 1}; }
  // ancestor with length 2^-s (s <= scale)
  DyadicInterval ancestor_at(std::int64_t s) const {
    return {s, index >> static_cast<unsigned>(scale - s)};
  }

  bool contains(const DyadicInterval& o) const {
    if (o.scale < scale) return false;
    return (o.index >> static_cast<unsigned>(o.scale - scale)) == index;
  }
  bool contains_point(const Rat& x) const { return lo() <= x && x < hi(); }
  bool disjoint_from(const DyadicInterval& o) const {
    return !contains(o) && !o.contains(*this);
  }

  bool operator==(const DyadicInterval& o) const = default;
  // total order for use as map keys: by (scale, index)
  auto operator<=>(const DyadicInterval& o) const {
    if (auto c = scale <=> o.scale; c != 0) return c;
    return index.compare(o.index) <=> 0;
  }
};

std::pair<DyadicInterval, DyadicInterval> children(const DyadicInterval& I);
// the 2^m equal dyadic pieces of J, left to right
std::vector<DyadicInterval> subintervals(const DyadicInterval& J, std::int64_t m);

struct RealInterval {
  Rat lo, hi;  // half-open unless stated otherwise at the use site
  Rat length() const { return hi - lo; }
  Rat center() const { return (lo + hi) / 2; }
  bool contains_closed(const Rat& x) const { return lo <= x && x <= hi; }
};

// I* = [c-17/2|I|, c-3/2|I|] u [c+3/2|I|, c+17/2|I|], two closed components;
// where an adjoint tile operator at scale |I| can live
struct StarRegion {
  RealInterval left, right;
  Rat measure() const { return left.length() + right.length(); }
  bool contains_closed(const Rat& x) const {
    return left.contains_closed(x) || right.contains_closed(x);
  }
};
StarRegion star(const DyadicInterval& I);

struct CellRun {
  Int begin, end;  // half-open cell-index range, begin < end
  bool operator==(const CellRun&) const = default;
};

class MeasurableSet {
 public:
  MeasurableSet() = default;
  explicit MeasurableSet(std::int64_t resolution) : res_(resolution) {}
  // runs need not be sorted or disjoint; they are normalized
  MeasurableSet(std::int64_t resolution, std::vector<CellRun> runs);

  static MeasurableSet from_dyadic(std::int64_t R, const DyadicInterval& I);
  // [lo, hi) with both endpoints exactly representable at resolution R
  static MeasurableSet from_interval(std::int64_t R, const Rat& lo, const Rat& hi);

  std::int64_t resolution() const { return res_; }
  const std::vector<CellRun>& runs() const { return runs_; }
  bool empty() const { return runs_.empty(); }
  Rat measure() const;
  Int cell_count() const;

  bool contains_cell(const Int& cell) const;  // at own resolution
  bool contains_point(const Rat& x) const;

  MeasurableSet refined(std::int64_t R2) const;  // R2 >= resolution

  bool subset_of(const MeasurableSet& o) const;
  bool disjoint_with(const MeasurableSet& o) const;
  bool operator==(const MeasurableSet& o) const;

  friend MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b);
  friend MeasurableSet set_intersect(const MeasurableSet& a, const MeasurableSet& b);
  friend MeasurableSet set_diff(const MeasurableSet& a, const MeasurableSet& b);

  // maximal dyadic intervals whose cell range is entirely inside the set
  std::vector<DyadicInterval> maximal_dyadic_components() const;
  // connected components as runs
  std::vector<CellRun> components() const { return runs_; }

 private:
  std::int64_t res_ = 0;
  std::vector<CellRun> runs_;  // sorted, disjoint, gap-separated
  void normalize();
};

class StepFunction {
 public:
  struct Run {
    Int begin, end;
    Rat value;  // nonzero after normalization
    bool operator==(const Run&) const = default;
  };

  StepFunction() = default;
  explicit StepFunction(std::int64_t resolution) : res_(resolution) {}
  StepFunction(std::int64_t resolution, std::vector<Run> runs);

  static StepFunction zero(std::int64_t R) { return StepFunction(R); }
  static StepFunction indicator(const MeasurableSet& A);
  static StepFunction constant(std::int64_t R, const Rat& c, const DyadicInterval& on);

  std::int64_t resolution() const { return res_; }
  const std::vector<Run>& runs() const { return runs_; }

  Rat value_at_cell(const Int& cell) const;
  Rat value_at(const Rat& x) const;

  Rat integral() const;
  Rat l1_norm() const;
  Rat linf_norm() const;
  Rat integral_over(const MeasurableSet& A) const;

  StepFunction refined(std::int64_t R2) const;
  StepFunction abs() const;
  MeasurableSet support() const;

  // {|f| > lam} (strict) or {|f| >= lam}
  MeasurableSet super_level(const Rat& lam, bool strict = true) const;

  StepFunction restricted(const MeasurableSet& A) const;

  friend StepFunction operator+(const StepFunction& a, const StepFunction& b);
  friend StepFunction operator-(const StepFunction& a, const StepFunction& b);
  friend StepFunction operator*(const Rat& c, const StepFunction& f);
  // cell-wise max of |a|,|b| promoted to common resolution
  friend StepFunction cellwise_max(const StepFunction& a, const StepFunction& b);
  friend StepFunction pointwise_product(const StepFunction& a, const StepFunction& b);

  bool operator==(const StepFunction& o) const;

 private:
  std::int64_t res_ = 0;
  std::vector<Run> runs_;
  void normalize();
};

// sup_l l |{|f| >= l}|, exact (attained at a value of |f|)
Rat weak_l1_norm(const StepFunction& f);

// sup over dyadic I inside [0,1), scales 0..R, of mean oscillation
Rat dyadic_bmo_norm(const StepFunction& f);

// dyadic uncentered maximal function over the tree of [0,1); support of f
// must lie inside [0,1)
StepFunction hl_maximal(const StepFunction& f);

}  // namespace tt
