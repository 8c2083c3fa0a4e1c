#include "tt/carleson.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tt {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// quintic ramp 1 -> 0 over [0,1], C^2 at both ends
double ramp(double u) {
  if (u <= 0) return 1.0;
  if (u >= 1) return 0.0;
  return 1.0 - u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
}

// floor as an integer, exact
Int rat_floor(const Rat& q) {
  Int n = rat_num(q), d = rat_den(q);
  if (n >= 0) return n / d;
  return -((-n + d - 1) / d);
}

Rat rat_frac(const Rat& q) { return q - Rat(rat_floor(q)); }

Rat cell_lo(std::int64_t res, const Int& c) { return Rat(c) * pow2r(-res); }
Rat cell_center(std::int64_t res, const Int& c) {
  return Rat(2 * c + 1) * pow2r(-res - 1);
}

// first cell index whose interval meets [lo, ...) and one past the last
// meeting (..., hi] at resolution res
Int cell_floor(const Rat& x, std::int64_t res) { return rat_floor(x * pow2r(res)); }
Int cell_ceil(const Rat& x, std::int64_t res) {
  const Rat t = x * pow2r(res);
  const Int f = rat_floor(t);
  return Rat(f) == t ? f : f + 1;
}

}  // namespace

double Kernel::eta(double y) const {
  const double a = std::fabs(y);
  if (a <= 4.0) return 1.0;
  if (a >= 8.0) return 0.0;
  return ramp((a - 4.0) / 4.0);
}

double Kernel::psi(double y) const {
  if (y == 0.0) return 0.0;
  const double d = eta(y) - eta(2.0 * y);
  return d == 0.0 ? 0.0 : d / y;
}

double Kernel::psi_k(std::int64_t k, double y) const {
  const double s = std::ldexp(1.0, static_cast<int>(k));
  return s * psi(s * y);
}

double Kernel::partial_sum(std::int64_t K, double y) const {
  double t = 0.0;
  for (std::int64_t k = 0; k <= K; ++k) t += psi_k(k, y);
  return t;
}

Kernel make_kernel() { return {}; }

CStep::CStep(std::int64_t resolution, std::vector<Run> rs) : res(resolution) {
  std::sort(rs.begin(), rs.end(),
            [](const Run& a, const Run& b) { return a.begin < b.begin; });
  for (auto& r : rs) {
    if (r.begin >= r.end || r.value == Cplx{}) continue;
    if (!runs.empty() && r.begin < runs.back().end)
      throw std::invalid_argument("CStep: overlapping runs");
    if (!runs.empty() && runs.back().end == r.begin &&
        runs.back().value == r.value) {
      runs.back().end = r.end;
    } else {
      runs.push_back(r);
    }
  }
}

Cplx CStep::value_at_cell(const Int& cell) const {
  auto it = std::upper_bound(
      runs.begin(), runs.end(), cell,
      [](const Int& c, const Run& r) { return c < r.begin; });
  if (it == runs.begin()) return {};
  --it;
  return cell < it->end ? it->value : Cplx{};
}

Cplx CStep::value_at(const Rat& x) const { return value_at_cell(cell_floor(x, res)); }

double CStep::l1() const {
  double s = 0.0;
  for (const auto& r : runs) s += std::abs(r.value) * to_double(Int(r.end - r.begin));
  return std::ldexp(s, static_cast<int>(-res));
}

double CStep::max_abs() const {
  double m = 0.0;
  for (const auto& r : runs) m = std::max(m, std::abs(r.value));
  return m;
}

Cplx CStep::integral() const {
  Cplx s{};
  for (const auto& r : runs) s += r.value * to_double(Int(r.end - r.begin));
  return s * std::ldexp(1.0, static_cast<int>(-res));
}

MeasurableSet CStep::support() const {
  std::vector<CellRun> rs;
  for (const auto& r : runs) rs.push_back(CellRun{r.begin, r.end});
  return MeasurableSet(res, std::move(rs));
}

StepFunction CStep::real_part() const {
  std::vector<StepFunction::Run> rs;
  for (const auto& r : runs)
    rs.push_back(StepFunction::Run{r.begin, r.end, Rat(r.value.real())});
  return StepFunction(res, std::move(rs));
}

StepFunction CStep::imag_part() const {
  std::vector<StepFunction::Run> rs;
  for (const auto& r : runs)
    rs.push_back(StepFunction::Run{r.begin, r.end, Rat(r.value.imag())});
  return StepFunction(res, std::move(rs));
}

CStep CStep::refined(std::int64_t r2) const {
  if (r2 < res) throw std::invalid_argument("CStep::refined: coarser target");
  const unsigned sh = static_cast<unsigned>(r2 - res);
  CStep out(r2);
  for (const auto& r : runs)
    out.runs.push_back(Run{r.begin << sh, r.end << sh, r.value});
  return out;
}

CStep CStep::restricted(const MeasurableSet& a) const {
  const std::int64_t R = std::max(res, a.resolution());
  const CStep f = refined(R);
  const MeasurableSet m = a.refined(R);
  CStep out(R);
  std::size_t i = 0, j = 0;
  while (i < f.runs.size() && j < m.runs().size()) {
    const auto& fr = f.runs[i];
    const auto& mr = m.runs()[j];
    const Int lo = std::max(fr.begin, mr.begin), hi = std::min(fr.end, mr.end);
    if (lo < hi) out.runs.push_back(Run{lo, hi, fr.value});
    (fr.end < mr.end ? i : j) += 1;
  }
  return out;
}

CStep cstep_add(const CStep& a, const CStep& b) {
  const std::int64_t R = std::max(a.res, b.res);
  const CStep fa = a.refined(R), fb = b.refined(R);
  std::vector<Int> cuts;
  for (const auto& r : fa.runs) {
    cuts.push_back(r.begin);
    cuts.push_back(r.end);
  }
  for (const auto& r : fb.runs) {
    cuts.push_back(r.begin);
    cuts.push_back(r.end);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<CStep::Run> rs;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Cplx v = fa.value_at_cell(cuts[i]) + fb.value_at_cell(cuts[i]);
    if (v != Cplx{}) rs.push_back(CStep::Run{cuts[i], cuts[i + 1], v});
  }
  return CStep(R, std::move(rs));
}

CStep cstep_scale(const Cplx& c, const CStep& f) {
  CStep out(f.res);
  if (c == Cplx{}) return out;
  for (const auto& r : f.runs) out.runs.push_back({r.begin, r.end, c * r.value});
  return out;
}

Cplx cstep_inner(const CStep& a, const StepFunction& g) {
  const std::int64_t R = std::max(a.res, g.resolution());
  const CStep fa = a.refined(R);
  const StepFunction fg = g.refined(R);
  Cplx s{};
  std::size_t i = 0, j = 0;
  while (i < fa.runs.size() && j < fg.runs().size()) {
    const auto& ar = fa.runs[i];
    const auto& gr = fg.runs()[j];
    const Int lo = std::max(ar.begin, gr.begin), hi = std::min(ar.end, gr.end);
    if (lo < hi) s += ar.value * to_double(gr.value) * to_double(Int(hi - lo));
    (ar.end < gr.end ? i : j) += 1;
  }
  return s * std::ldexp(1.0, static_cast<int>(-R));
}

std::int64_t FrequencyReduction::exponent_of(const Rat& alpha) const {
  auto it = exponent.find(alpha);
  if (it == exponent.end())
    throw std::invalid_argument("FrequencyReduction: unmapped frequency " +
                                to_string(alpha));
  return it->second;
}

Rat FrequencyReduction::reduced(const Rat& alpha) const {
  return pow2r(exponent_of(alpha));
}

FrequencyReduction reduce_tower(const Cme& c, std::size_t tower) {
  const TowerRecord& tr = c.towers.at(tower);
  const std::int64_t h = static_cast<std::int64_t>(tr.layers.size());
  // the coarsest companion completes exactly one period per deepest bottom
  const std::int64_t base = tr.layers.back().i_btm().front().scale;
  // three tiers, each sorted ascending: alignment-layer frequencies owning an
  // interior (star-inside-tops) tile, the other alignment-layer frequencies,
  // then everything else; interior ones anchor sign constraints, so they get
  // the shortest companion periods.  Within the anchor tier consecutive
  // exponents differ by 8: a quarter-period cell of one anchor then spans a
  // whole number of periods of the next, so every 2^-5-grain slice of it meets
  // the finer sign pattern identically and the fractal set built against these
  // constraints distributes exactly evenly at that grain
  std::vector<Rat> live, elig, rest;
  for (std::int64_t li = 0; li < h; ++li) {
    const bool aligned = h >= 3 && li <= h - 3;
    if (!aligned) {
      for (const Rat& a : tr.layers[li].params.alphas) rest.push_back(a);
      continue;
    }
    const Usgtf& f = tr.layers[li];
    const auto tiles = f.all_tiles();
    std::vector<Rat> layer_live;
    for (std::size_t i : normal_boundary_split(f).normal)
      layer_live.push_back(tiles[i].alpha());
    for (const Rat& a : f.params.alphas) {
      const bool lv =
          std::find(layer_live.begin(), layer_live.end(), a) != layer_live.end();
      (lv ? live : elig).push_back(a);
    }
  }
  std::sort(live.begin(), live.end());
  std::sort(elig.begin(), elig.end());
  std::sort(rest.begin(), rest.end());
  FrequencyReduction red;
  std::int64_t e = base;
  for (const Rat& a : live)
    if (red.exponent.emplace(a, e).second) e += 8;
  for (const std::vector<Rat>* tier : {&elig, &rest})
    for (const Rat& a : *tier)
      if (red.exponent.emplace(a, e).second) e += 2;
  return red;
}

const FrequencyReduction& CmeReduction::of_tower(std::size_t t) const {
  return per_tower.at(t);
}

Rat CmeReduction::reduced_for_tile(const Cme& c, std::size_t tile_index) const {
  return per_tower.at(c.tile_tower.at(tile_index))
      .reduced(c.universe.tiles.at(tile_index).alpha());
}

CmeReduction reduce_cme(const Cme& c) {
  CmeReduction r;
  for (std::size_t t = 0; t < c.towers.size(); ++t)
    r.per_tower.push_back(reduce_tower(c, t));
  return r;
}

Cplx unit_phase(const Rat& turns) {
  const double f = to_double(rat_frac(turns));
  return {std::cos(kTwoPi * f), std::sin(kTwoPi * f)};
}

Cplx exp_integral(const Rat& a, const Rat& lo, const Rat& hi) {
  if (a == 0) return {to_double(hi - lo), 0.0};
  const Cplx elo = std::conj(unit_phase(a * lo));
  const Cplx ehi = std::conj(unit_phase(a * hi));
  return (elo - ehi) / Cplx{0.0, kTwoPi * to_double(a)};
}

double cos_integral(const Rat& a, const Rat& lo, const Rat& hi) {
  if (a == 0) return to_double(hi - lo);
  const double slo = std::sin(kTwoPi * to_double(rat_frac(a * lo)));
  const double shi = std::sin(kTwoPi * to_double(rat_frac(a * hi)));
  return (shi - slo) / (kTwoPi * to_double(a));
}

namespace {

// int_0^{u/2} |cos 2 pi v| dv for u in [0,1]
double half_wave_partial(double u) {
  const double w = 0.5 * u;
  if (w <= 0.25) return std::sin(kTwoPi * w) / kTwoPi;
  return (2.0 - std::sin(kTwoPi * w)) / kTwoPi;
}

}  // namespace

double abs_cos_integral(const Rat& a, const Rat& lo, const Rat& hi) {
  if (a == 0) return to_double(hi - lo);
  if (a < 0) return abs_cos_integral(-a, lo, hi);
  const Rat tlo = 2 * a * lo, thi = 2 * a * hi;
  const Int mlo = rat_floor(tlo), mhi = rat_floor(thi);
  const double whole = to_double(Int(mhi - mlo)) / std::numbers::pi;
  const double part =
      half_wave_partial(to_double(rat_frac(thi))) -
      half_wave_partial(to_double(rat_frac(tlo)));
  return (whole + part) / to_double(a);
}

namespace {

// per-cell integrals of e^{-2 pi i a y} walked along consecutive cells
struct PhaseWalk {
  Cplx cur;   // integral over the current cell
  Cplx q;     // multiplier to the next cell
  bool flat;  // a == 0: integrals equal the cell width

  PhaseWalk(const Rat& a, std::int64_t res, const Int& first) {
    const Rat w = pow2r(-res);
    flat = a == 0;
    if (flat) {
      cur = {to_double(w), 0.0};
      q = {1.0, 0.0};
    } else {
      q = std::conj(unit_phase(a * w));
      const Cplx e0 = std::conj(unit_phase(a * cell_lo(res, first)));
      cur = e0 * (Cplx{1.0, 0.0} - q) / Cplx{0.0, kTwoPi * to_double(a)};
    }
  }
  void advance() { cur *= q; }
};

Rat reduced_freq(const Rat& raw, const QuadSpec& q) {
  if (q.reduction != nullptr && q.reduction->has(raw)) return q.reduction->reduced(raw);
  return raw;
}

}  // namespace

CStep t_p(const StepFunction& f, const Tile& P, const Linearization& lin,
          const Kernel& ker, const QuadSpec& q) {
  const std::int64_t k = P.time.scale;
  const std::int64_t lres = lin.N.resolution();
  // output may be coarser than the assignment grid; membership of a coarse
  // cell is decided by its center
  const std::int64_t out = q.out_res < 0 ? lres : q.out_res;
  CStep result(out);
  const MeasurableSet E = e_set(P, lin);
  if (E.empty() || f.runs().empty()) return result;
  const std::int64_t wr = std::max(f.resolution(), k + q.work_margin);
  const StepFunction fw = f.refined(wr);
  const Rat inner = pow2r(1 - k), outer = pow2r(3 - k);  // 2*2^-k, 8*2^-k

  // candidate output cells paired with the assignment value at their center
  std::vector<std::pair<Int, Rat>> cells;
  if (out >= lres) {
    const MeasurableSet Eo = E.refined(out);
    const unsigned sh = static_cast<unsigned>(out - lres);
    for (const auto& er : Eo.runs())
      for (Int c = er.begin; c < er.end; ++c)
        cells.emplace_back(c, lin.N.value_at_cell(c >> sh));
  } else {
    const Int c0 = cell_floor(P.time.lo(), out), c1 = cell_ceil(P.time.hi(), out);
    for (Int c = c0; c < c1; ++c) {
      const Rat x = cell_center(out, c);
      if (E.contains_point(x)) cells.emplace_back(c, lin.N.value_at(x));
    }
  }

  for (const auto& [c, nval] : cells) {
    const Rat x = cell_center(out, c);
    const Rat a = reduced_freq(nval, q);
    // a frequency whose period divides the quadrature cell integrates to zero
    // exactly on every cell; skip the whole window walk
    if (a != 0 && rat_frac(a * pow2r(-wr)) == 0) continue;
    Cplx acc{};
    for (int side = 0; side < 2; ++side) {
      const Rat wlo = side == 0 ? x - outer : x + inner;
      const Rat whi = side == 0 ? x - inner : x + outer;
      const Int clo = cell_floor(wlo, wr), chi = cell_ceil(whi, wr);
      // runs of f meeting the window
      auto it = std::upper_bound(
          fw.runs().begin(), fw.runs().end(), clo,
          [](const Int& v, const StepFunction::Run& r) { return v < r.end; });
      for (; it != fw.runs().end() && it->begin < chi; ++it) {
        const Int lo = std::max(it->begin, clo), hi = std::min(it->end, chi);
        if (lo >= hi) continue;
        const double fv = to_double(it->value);
        const double xd = to_double(x);
        PhaseWalk ph(a, wr, lo);
        for (Int cc = lo; cc < hi; ++cc, ph.advance()) {
          const double w = ker.psi_k(k, xd - to_double(cell_center(wr, cc)));
          if (w != 0.0) acc += fv * w * ph.cur;
        }
      }
    }
    if (acc != Cplx{}) result.runs.push_back(CStep::Run{c, c + 1, acc});
  }
  result = CStep(out, std::move(result.runs));
  return result;
}

CStep t_p_star(const StepFunction& g, const Tile& P, const Linearization& lin,
               const Kernel& ker, const QuadSpec& q) {
  const std::int64_t k = P.time.scale;
  const std::int64_t lres = lin.N.resolution();
  const std::int64_t out = q.out_res < 0 ? k + q.work_margin + 4 : q.out_res;
  CStep result(out);
  const MeasurableSet E = e_set(P, lin);
  if (E.empty() || g.runs().empty()) return result;
  // the x quadrature never needs to resolve E's own grid: each E run is cut
  // exactly at the work cells and partial pieces keep their true width and
  // midpoint, so the E measure stays exact however fine the assignment grid is
  const std::int64_t xr = std::max(g.resolution(), k + q.work_margin);
  const Rat inner = pow2r(1 - k), outer = pow2r(3 - k);
  const StarRegion st = star(P.time);
  const Int ybase = cell_floor(st.left.lo, out);
  const Int yend = cell_ceil(st.right.hi, out);
  std::vector<Cplx> acc(static_cast<std::size_t>(Int(yend - ybase)), Cplx{});
  const double out_scale = to_double(pow2r(out));

  for (const auto& er : E.runs()) {
    const Rat rlo = cell_lo(E.resolution(), er.begin);
    const Rat rhi = cell_lo(E.resolution(), er.end);
    for (Int c = cell_floor(rlo, xr); c < cell_ceil(rhi, xr); ++c) {
      const Rat plo = std::max(rlo, cell_lo(xr, c));
      const Rat phi = std::min(rhi, cell_lo(xr, c + 1));
      if (plo >= phi) continue;
      const Rat x = (plo + phi) / 2;
      const Rat gv = g.value_at(x);
      if (gv == 0) continue;
      const Rat a = reduced_freq(lin.N.value_at(x), q);
      // phase averages over whole output cells vanish when the period divides
      if (a != 0 && rat_frac(a * pow2r(-out)) == 0) continue;
      const double xd = to_double(x);
      const double coeff = to_double(gv) * to_double(phi - plo) * out_scale;
      for (int side = 0; side < 2; ++side) {
        const Rat wlo = side == 0 ? x - outer : x + inner;
        const Rat whi = side == 0 ? x - inner : x + outer;
        Int lo = std::max(cell_floor(wlo, out), ybase);
        Int hi = std::min(cell_ceil(whi, out), yend);
        if (lo >= hi) continue;
        // cell averages of e^{+2 pi i a y}: conjugate walk
        PhaseWalk ph(-a, out, lo);
        for (Int cc = lo; cc < hi; ++cc, ph.advance()) {
          const double w = ker.psi_k(k, xd - to_double(cell_center(out, cc)));
          if (w != 0.0)
            acc[static_cast<std::size_t>(Int(cc - ybase))] += coeff * w * ph.cur;
        }
      }
    }
  }
  std::vector<CStep::Run> rs;
  for (std::size_t i = 0; i < acc.size(); ++i)
    if (acc[i] != Cplx{})
      rs.push_back(CStep::Run{ybase + Int(i), ybase + Int(i) + 1, acc[i]});
  return CStep(out, std::move(rs));
}

double v_profile(const Tile& P, const Linearization& lin, const Kernel& ker,
                 double y, std::int64_t work_margin) {
  const std::int64_t k = P.time.scale;
  const std::int64_t xr = std::max(lin.N.resolution(), k + work_margin);
  const MeasurableSet E = e_set(P, lin).refined(xr);
  const double w = std::ldexp(1.0, static_cast<int>(-xr));
  // psi_k vanishes past |x - y| = 8 2^-k; prune whole runs, then cells
  const double rad_out = std::ldexp(8.0, static_cast<int>(-k));
  double s = 0.0;
  for (const auto& r : E.runs()) {
    const double rlo = to_double(Int(r.begin)) * w, rhi = to_double(Int(r.end)) * w;
    if (rhi < y - rad_out || rlo > y + rad_out) continue;
    for (Int c = r.begin; c < r.end; ++c) {
      const double x = (to_double(Int(c)) + 0.5) * w;
      if (std::fabs(x - y) > rad_out) continue;
      s += ker.psi_k(k, x - y) * w;
    }
  }
  return s;
}

}  // namespace tt
