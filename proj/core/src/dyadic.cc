#include "tt/dyadic.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace tt {

Int scale_to_cells(const Rat& q, std::int64_t R) {
  Rat scaled = q * pow2r(R);
  if (rat_den(scaled) != 1)
    throw std::invalid_argument("value not representable at resolution " +
                                std::to_string(R) + ": " + to_string(q));
  return rat_num(scaled);
}

std::pair<DyadicInterval, DyadicInterval> children(const DyadicInterval& I) {
  return {I.left_child(), I.right_child()};
}

std::vector<DyadicInterval> subintervals(const DyadicInterval& J, std::int64_t m) {
  if (m < 0) throw std::invalid_argument("subintervals: m < 0");
  std::vector<DyadicInterval> out;
  Int count = pow2i(m);
  out.reserve(count.convert_to<std::size_t>());
  Int base = J.index << static_cast<unsigned>(m);
  for (Int i = 0; i < count; ++i) out.push_back({J.scale + m, base + i});
  return out;
}

StarRegion star(const DyadicInterval& I) {
  Rat c = I.center(), len = I.length();
  return StarRegion{
      RealInterval{c - Rat(17, 2) * len, c - Rat(3, 2) * len},
      RealInterval{c + Rat(3, 2) * len, c + Rat(17, 2) * len},
  };
}

// ---- MeasurableSet ----

MeasurableSet::MeasurableSet(std::int64_t resolution, std::vector<CellRun> runs)
    : res_(resolution), runs_(std::move(runs)) {
  normalize();
}

void MeasurableSet::normalize() {
  std::erase_if(runs_, [](const CellRun& r) { return r.begin >= r.end; });
  std::sort(runs_.begin(), runs_.end(),
            [](const CellRun& a, const CellRun& b) { return a.begin < b.begin; });
  std::vector<CellRun> merged;
  for (auto& r : runs_) {
    if (!merged.empty() && r.begin <= merged.back().end)
      merged.back().end = std::max(merged.back().end, r.end);
    else
      merged.push_back(r);
  }
  runs_ = std::move(merged);
}

MeasurableSet MeasurableSet::from_dyadic(std::int64_t R, const DyadicInterval& I) {
  if (I.scale > R)
    throw std::invalid_argument("interval finer than resolution");
  Int b = I.index << static_cast<unsigned>(R - I.scale);
  Int e = (I.index + 1) << static_cast<unsigned>(R - I.scale);
  return MeasurableSet(R, {CellRun{b, e}});
}

MeasurableSet MeasurableSet::from_interval(std::int64_t R, const Rat& lo, const Rat& hi) {
  if (hi <= lo) return MeasurableSet(R);
  return MeasurableSet(R, {CellRun{scale_to_cells(lo, R), scale_to_cells(hi, R)}});
}

Rat MeasurableSet::measure() const { return Rat(cell_count()) * pow2r(-res_); }

Int MeasurableSet::cell_count() const {
  Int n = 0;
  for (auto& r : runs_) n += r.end - r.begin;
  return n;
}

bool MeasurableSet::contains_cell(const Int& cell) const {
  auto it = std::upper_bound(
      runs_.begin(), runs_.end(), cell,
      [](const Int& c, const CellRun& r) { return c < r.begin; });
  if (it == runs_.begin()) return false;
  --it;
  return cell < it->end;
}

bool MeasurableSet::contains_point(const Rat& x) const {
  Rat cellr = x * pow2r(res_);
  Int cell = rat_num(cellr) / rat_den(cellr);
  if (cellr < 0 && rat_den(cellr) != 1) cell -= 1;  // floor for negatives
  return contains_cell(cell);
}

MeasurableSet MeasurableSet::refined(std::int64_t R2) const {
  if (R2 < res_) throw std::invalid_argument("refined: coarser resolution");
  if (R2 == res_) return *this;
  unsigned sh = static_cast<unsigned>(R2 - res_);
  MeasurableSet out(R2);
  out.runs_.reserve(runs_.size());
  for (auto& r : runs_) out.runs_.push_back({r.begin << sh, r.end << sh});
  return out;
}

namespace {
// merge-sweep over two normalized run lists at one resolution
template <class Keep>
std::vector<CellRun> sweep(const std::vector<CellRun>& a,
                           const std::vector<CellRun>& b, Keep keep) {
  std::vector<Int> cuts;
  cuts.reserve(2 * (a.size() + b.size()));
  for (auto& r : a) { cuts.push_back(r.begin); cuts.push_back(r.end); }
  for (auto& r : b) { cuts.push_back(r.begin); cuts.push_back(r.end); }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<CellRun> out;
  std::size_t ia = 0, ib = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Int& lo = cuts[i];
    while (ia < a.size() && a[ia].end <= lo) ++ia;
    while (ib < b.size() && b[ib].end <= lo) ++ib;
    bool ina = ia < a.size() && a[ia].begin <= lo;
    bool inb = ib < b.size() && b[ib].begin <= lo;
    if (keep(ina, inb)) {
      if (!out.empty() && out.back().end == lo)
        out.back().end = cuts[i + 1];
      else
        out.push_back({lo, cuts[i + 1]});
    }
  }
  return out;
}

std::pair<MeasurableSet, MeasurableSet> to_common(const MeasurableSet& a,
                                                  const MeasurableSet& b) {
  std::int64_t R = std::max(a.resolution(), b.resolution());
  return {a.refined(R), b.refined(R)};
}
}  // namespace

MeasurableSet set_union(const MeasurableSet& a, const MeasurableSet& b) {
  auto [x, y] = to_common(a, b);
  return MeasurableSet(x.resolution(),
                       sweep(x.runs(), y.runs(), [](bool p, bool q) { return p || q; }));
}

MeasurableSet set_intersect(const MeasurableSet& a, const MeasurableSet& b) {
  auto [x, y] = to_common(a, b);
  return MeasurableSet(x.resolution(),
                       sweep(x.runs(), y.runs(), [](bool p, bool q) { return p && q; }));
}

MeasurableSet set_diff(const MeasurableSet& a, const MeasurableSet& b) {
  auto [x, y] = to_common(a, b);
  return MeasurableSet(x.resolution(),
                       sweep(x.runs(), y.runs(), [](bool p, bool q) { return p && !q; }));
}

bool MeasurableSet::subset_of(const MeasurableSet& o) const {
  return set_diff(*this, o).empty();
}

bool MeasurableSet::disjoint_with(const MeasurableSet& o) const {
  return set_intersect(*this, o).empty();
}

bool MeasurableSet::operator==(const MeasurableSet& o) const {
  auto [x, y] = to_common(*this, o);
  return x.runs() == y.runs();
}

std::vector<DyadicInterval> MeasurableSet::maximal_dyadic_components() const {
  // greedy: from the left edge of each remaining segment take the largest
  // dyadic interval that is aligned there and fits
  std::vector<DyadicInterval> out;
  for (auto& r : runs_) {
    Int b = r.begin;
    while (b < r.end) {
      std::int64_t fit = floor_log2(r.end - b);
      std::int64_t align =
          b == 0 ? fit
                 : static_cast<std::int64_t>(boost::multiprecision::lsb(
                       b < 0 ? Int(-b) : b));
      std::int64_t t = std::min(fit, align);
      out.push_back({res_ - t, b / pow2i(t)});
      b += pow2i(t);
    }
  }
  return out;
}

// ---- StepFunction ----

StepFunction::StepFunction(std::int64_t resolution, std::vector<Run> runs)
    : res_(resolution), runs_(std::move(runs)) {
  normalize();
}

void StepFunction::normalize() {
  std::erase_if(runs_, [](const Run& r) { return r.begin >= r.end || r.value == 0; });
  std::sort(runs_.begin(), runs_.end(),
            [](const Run& a, const Run& b) { return a.begin < b.begin; });
  for (std::size_t i = 0; i + 1 < runs_.size(); ++i)
    if (runs_[i].end > runs_[i + 1].begin)
      throw std::invalid_argument("StepFunction: overlapping runs");
  std::vector<Run> merged;
  for (auto& r : runs_) {
    if (!merged.empty() && merged.back().end == r.begin &&
        merged.back().value == r.value)
      merged.back().end = r.end;
    else
      merged.push_back(r);
  }
  runs_ = std::move(merged);
}

StepFunction StepFunction::indicator(const MeasurableSet& A) {
  StepFunction f(A.resolution());
  for (auto& r : A.runs()) f.runs_.push_back({r.begin, r.end, Rat(1)});
  return f;
}

StepFunction StepFunction::constant(std::int64_t R, const Rat& c,
                                    const DyadicInterval& on) {
  return c * indicator(MeasurableSet::from_dyadic(R, on));
}

Rat StepFunction::value_at_cell(const Int& cell) const {
  auto it = std::upper_bound(
      runs_.begin(), runs_.end(), cell,
      [](const Int& c, const Run& r) { return c < r.begin; });
  if (it == runs_.begin()) return 0;
  --it;
  return cell < it->end ? it->value : Rat(0);
}

Rat StepFunction::value_at(const Rat& x) const {
  Rat cellr = x * pow2r(res_);
  Int cell = rat_num(cellr) / rat_den(cellr);
  if (cellr < 0 && rat_den(cellr) != 1) cell -= 1;
  return value_at_cell(cell);
}

Rat StepFunction::integral() const {
  Rat s = 0;
  for (auto& r : runs_) s += r.value * Rat(r.end - r.begin);
  return s * pow2r(-res_);
}

Rat StepFunction::l1_norm() const {
  Rat s = 0;
  for (auto& r : runs_) s += rat_abs(r.value) * Rat(r.end - r.begin);
  return s * pow2r(-res_);
}

Rat StepFunction::linf_norm() const {
  Rat m = 0;
  for (auto& r : runs_) m = std::max(m, rat_abs(r.value));
  return m;
}

Rat StepFunction::integral_over(const MeasurableSet& A) const {
  StepFunction g = restricted(A);
  return g.integral();
}

StepFunction StepFunction::refined(std::int64_t R2) const {
  if (R2 < res_) throw std::invalid_argument("refined: coarser resolution");
  if (R2 == res_) return *this;
  unsigned sh = static_cast<unsigned>(R2 - res_);
  StepFunction out(R2);
  out.runs_.reserve(runs_.size());
  for (auto& r : runs_) out.runs_.push_back({r.begin << sh, r.end << sh, r.value});
  return out;
}

StepFunction StepFunction::abs() const {
  StepFunction out(res_);
  out.runs_ = runs_;
  for (auto& r : out.runs_) r.value = rat_abs(r.value);
  out.normalize();
  return out;
}

MeasurableSet StepFunction::support() const {
  std::vector<CellRun> rs;
  rs.reserve(runs_.size());
  for (auto& r : runs_) rs.push_back({r.begin, r.end});
  return MeasurableSet(res_, std::move(rs));
}

MeasurableSet StepFunction::super_level(const Rat& lam, bool strict) const {
  if (strict ? lam < 0 : lam <= 0)
    throw std::invalid_argument("super_level: threshold keeps the set finite only for lam >= 0 (>) / lam > 0 (>=)");
  std::vector<CellRun> rs;
  for (auto& r : runs_) {
    Rat a = rat_abs(r.value);
    if (strict ? a > lam : a >= lam) rs.push_back({r.begin, r.end});
  }
  return MeasurableSet(res_, std::move(rs));
}

StepFunction StepFunction::restricted(const MeasurableSet& A) const {
  std::int64_t R = std::max(res_, A.resolution());
  StepFunction f = refined(R);
  MeasurableSet B = A.refined(R);
  StepFunction out(R);
  std::size_t ib = 0;
  const auto& bruns = B.runs();
  for (auto& r : f.runs_) {
    while (ib < bruns.size() && bruns[ib].end <= r.begin) ++ib;
    for (std::size_t j = ib; j < bruns.size() && bruns[j].begin < r.end; ++j) {
      Int b = std::max(r.begin, bruns[j].begin);
      Int e = std::min(r.end, bruns[j].end);
      if (b < e) out.runs_.push_back({b, e, r.value});
    }
  }
  out.normalize();
  return out;
}

namespace {
template <class Op>
StepFunction combine(const StepFunction& a, const StepFunction& b, Op op) {
  std::int64_t R = std::max(a.resolution(), b.resolution());
  StepFunction x = a.refined(R), y = b.refined(R);
  std::vector<Int> cuts;
  for (auto& r : x.runs()) { cuts.push_back(r.begin); cuts.push_back(r.end); }
  for (auto& r : y.runs()) { cuts.push_back(r.begin); cuts.push_back(r.end); }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<StepFunction::Run> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Rat v = op(x.value_at_cell(cuts[i]), y.value_at_cell(cuts[i]));
    if (v != 0) out.push_back({cuts[i], cuts[i + 1], v});
  }
  return StepFunction(R, std::move(out));
}
}  // namespace

StepFunction operator+(const StepFunction& a, const StepFunction& b) {
  return combine(a, b, [](const Rat& u, const Rat& v) { return u + v; });
}

StepFunction operator-(const StepFunction& a, const StepFunction& b) {
  return combine(a, b, [](const Rat& u, const Rat& v) { return u - v; });
}

StepFunction operator*(const Rat& c, const StepFunction& f) {
  StepFunction out(f.resolution());
  if (c == 0) return out;
  out.runs_ = f.runs_;
  for (auto& r : out.runs_) r.value *= c;
  return out;
}

StepFunction cellwise_max(const StepFunction& a, const StepFunction& b) {
  return combine(a, b, [](const Rat& u, const Rat& v) {
    return std::max(rat_abs(u), rat_abs(v));
  });
}

StepFunction pointwise_product(const StepFunction& a, const StepFunction& b) {
  return combine(a, b, [](const Rat& u, const Rat& v) { return u * v; });
}

bool StepFunction::operator==(const StepFunction& o) const {
  std::int64_t R = std::max(res_, o.res_);
  return refined(R).runs_ == o.refined(R).runs_;
}

// ---- norms on step functions ----

Rat weak_l1_norm(const StepFunction& f) {
  // collect (|value|, cell count), sort by value descending, cumulate
  std::vector<std::pair<Rat, Int>> lev;
  for (auto& r : f.runs())
    if (r.value != 0) lev.push_back({rat_abs(r.value), r.end - r.begin});
  std::sort(lev.begin(), lev.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  Rat best = 0;
  Int cum = 0;
  for (std::size_t i = 0; i < lev.size(); ++i) {
    cum += lev[i].second;
    if (i + 1 < lev.size() && lev[i + 1].first == lev[i].first) continue;
    best = std::max(best, lev[i].first * Rat(cum));
  }
  return best * pow2r(-f.resolution());
}

namespace {

struct BmoVisit {
  const std::vector<StepFunction::Run>* runs;  // materialized over [0,1): gaps as 0
  std::int64_t R;
  Rat best = 0;

  // runs in [lo_idx, hi_idx) all intersect the node [b,e)
  void visit(const Int& b, const Int& e, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 1) return;  // constant on the node: zero oscillation, prune
    Rat integral = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& r = (*runs)[i];
      Int bb = std::max(b, r.begin), ee = std::min(e, r.end);
      integral += r.value * Rat(ee - bb);
    }
    Rat len(e - b);
    Rat mean = integral / len;
    Rat osc = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      const auto& r = (*runs)[i];
      Int bb = std::max(b, r.begin), ee = std::min(e, r.end);
      osc += rat_abs(r.value - mean) * Rat(ee - bb);
    }
    best = std::max(best, osc / len);
    if (e - b <= 1) return;
    Int mid = (b + e) / 2;
    std::size_t cut = lo;
    while (cut < hi && (*runs)[cut].end <= mid) ++cut;
    // left child covers runs [lo, cut or cut+1), right child [cut, hi)
    std::size_t lhi = cut;
    if (cut < hi && (*runs)[cut].begin < mid) lhi = cut + 1;
    visit(b, mid, lo, lhi);
    visit(mid, e, cut, hi);
  }
};

// materialize f on [0,1) with explicit zero runs filling gaps
std::vector<StepFunction::Run> materialize_unit(const StepFunction& f) {
  Int total = pow2i(f.resolution());
  std::vector<StepFunction::Run> rs;
  Int pos = 0;
  for (auto& r : f.runs()) {
    if (r.end <= 0 || r.begin >= total) continue;
    Int b = std::max(r.begin, Int(0)), e = std::min(r.end, total);
    if (pos < b) rs.push_back({pos, b, Rat(0)});
    rs.push_back({b, e, r.value});
    pos = e;
  }
  if (pos < total) rs.push_back({pos, total, Rat(0)});
  return rs;
}

}  // namespace

Rat dyadic_bmo_norm(const StepFunction& f) {
  auto rs = materialize_unit(f);
  BmoVisit v{&rs, f.resolution()};
  v.visit(0, pow2i(f.resolution()), 0, rs.size());
  return v.best;
}

StepFunction hl_maximal(const StepFunction& f) {
  for (auto& r : f.runs())
    if (r.begin < 0 || r.end > pow2i(f.resolution()))
      throw std::invalid_argument("hl_maximal: support must lie in [0,1)");
  StepFunction a = f.abs();
  auto rs = materialize_unit(a);
  std::vector<StepFunction::Run> out;
  // descend the dyadic tree carrying the best ancestor average
  std::function<void(const Int&, const Int&, std::size_t, std::size_t, Rat)> go =
      [&](const Int& b, const Int& e, std::size_t lo, std::size_t hi, Rat carried) {
        Rat integral = 0;
        for (std::size_t i = lo; i < hi; ++i) {
          const auto& r = rs[i];
          Int bb = std::max(b, r.begin), ee = std::min(e, r.end);
          integral += r.value * Rat(ee - bb);
        }
        Rat avg = integral / Rat(e - b);
        Rat best = std::max(carried, avg);
        if (hi - lo <= 1) {
          // constant below: every deeper dyadic average equals the value
          Rat v = std::max(best, hi > lo ? rs[lo].value : Rat(0));
          if (v != 0) out.push_back({b, e, v});
          return;
        }
        Int mid = (b + e) / 2;
        std::size_t cut = lo;
        while (cut < hi && rs[cut].end <= mid) ++cut;
        std::size_t lhi = cut;
        if (cut < hi && rs[cut].begin < mid) lhi = cut + 1;
        go(b, mid, lo, lhi, best);
        go(mid, e, cut, hi, best);
      };
  go(0, pow2i(f.resolution()), 0, rs.size(), 0);
  return StepFunction(f.resolution(), std::move(out));
}

}  // namespace tt
