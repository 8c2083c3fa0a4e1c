#include "tt/counting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tt {
namespace {

std::string itag(const DyadicInterval& I) {
  return I.index.str() + "@" + std::to_string(I.scale);
}

StepFunction scaled_top_sum(std::int64_t R, std::int64_t n,
                            const std::vector<DyadicInterval>& tops) {
  StepFunction f = StepFunction::zero(R);
  for (const auto& I : tops)
    f = f + StepFunction::indicator(MeasurableSet::from_dyadic(R, I));
  return pow2r(1 - n) * f;
}

GenPair window_of(const Cme& c, std::int64_t j, std::int64_t offset) {
  if (j < 1 || j > c.profile.levels)
    throw std::invalid_argument("no such level");
  GenPair g = c.profile.gen[static_cast<std::size_t>(j - 1)];
  if (offset < 0 || g.lower + offset > g.upper)
    throw std::invalid_argument("offset eats the whole mass window");
  g.lower += offset;
  return g;
}

}  // namespace

StepFunction nu_bar(std::int64_t n, const TileUniverse& U) {
  return nu_bar(n, U, classify(U));
}

StepFunction nu_bar(std::int64_t n, const TileUniverse& U, const Classification& cl) {
  if (n < 1) throw std::invalid_argument("mass exponent must be positive");
  const std::int64_t R = U.lin.N.resolution();
  std::vector<DyadicInterval> tops;
  if (auto it = cl.maximal.find(n); it != cl.maximal.end())
    for (std::size_t i : it->second) tops.push_back(U.tiles[i].time);
  return scaled_top_sum(R, n, tops);
}

StepFunction nu_bar_owned(const Cme& c, std::int64_t j, std::int64_t n) {
  if (n < 1) throw std::invalid_argument("mass exponent must be positive");
  const std::int64_t R = c.lin.N.resolution();
  std::vector<DyadicInterval> tops;
  for (std::size_t i = 0; i < c.universe.tiles.size(); ++i)
    if (c.tile_level[i] == n && c.towers[c.tile_tower[i]].level == j)
      tops.push_back(c.universe.tiles[i].time);
  return scaled_top_sum(R, n, tops);
}

StepFunction nu_level(const Cme& c, std::int64_t j, std::int64_t offset) {
  const GenPair w = window_of(c, j, offset);
  StepFunction f = StepFunction::zero(c.lin.N.resolution());
  for (std::int64_t n = w.lower; n <= w.upper; ++n)
    f = f + nu_bar_owned(c, j, n);
  return (Rat(1) / Rat(w.upper - w.lower + 1)) * f;
}

StepFunction nu_grand(const Cme& c, std::int64_t k) {
  if (k < 0 || k > c.profile.levels) k = c.profile.levels;
  StepFunction g = StepFunction::zero(c.lin.N.resolution());
  for (std::int64_t j = 1; j <= k; ++j) g = cellwise_max(g, nu_level(c, j));
  return g;
}

LevelSetTree level_sets_of(const StepFunction& nu, std::int64_t level, std::int64_t l_max) {
  LevelSetTree t;
  t.level = level;
  t.nu = nu;
  for (std::int64_t l = 1; l <= l_max; ++l) {
    MeasurableSet s = nu.super_level(Rat(l), /*strict=*/false);
    t.comps[l] = s.maximal_dyadic_components();
    t.sets[l] = std::move(s);
  }
  return t;
}

LevelSetTree level_sets(const Cme& c, std::int64_t j, std::int64_t offset) {
  return level_sets_of(nu_level(c, j, offset), j, c.profile.height);
}

NestingReport nesting_check(const std::vector<LevelSetTree>& trees) {
  NestingReport rep;
  const Rat slack = pow2r(10);
  for (const auto& ta : trees) {
    for (const auto& tb : trees) {
      if (tb.level > ta.level) continue;  // only finer-inside-coarser applies
      for (const auto& [l1, ca] : ta.comps) {
        for (const DyadicInterval& C1 : ca) {
          for (const auto& [l2, cb] : tb.comps) {
            Rat filled{0};
            for (const DyadicInterval& Cb : cb) {
              if (tb.level < ta.level && Cb.contains(C1) && Cb != C1) {
                rep.nesting = false;
                rep.violations.push_back("level " + std::to_string(tb.level) +
                                         " comp " + itag(Cb) + " swallows level " +
                                         std::to_string(ta.level) + " comp " + itag(C1));
              }
              if (C1.contains(Cb)) filled += Cb.length();
            }
            if (&ta == &tb && l2 == l1) continue;  // a set always fills itself
            Rat ratio = pow2r(l2) * filled / C1.length();
            rep.worst_decay = std::max(rep.worst_decay, ratio);
            if (ratio >= slack) {
              rep.decay = false;
              rep.violations.push_back("comp " + itag(C1) + " of level " +
                                       std::to_string(ta.level) + " over-filled at depth " +
                                       std::to_string(l2) + " of level " +
                                       std::to_string(tb.level));
            }
          }
        }
      }
    }
  }
  return rep;
}

MeasurableSet layer_footprint(const Cme& c, std::int64_t j, std::int64_t m) {
  const std::int64_t R = c.lin.N.resolution();
  MeasurableSet out(R);
  auto it = c.towers_by_level.find(j);
  if (it == c.towers_by_level.end() || m < 1) return out;
  for (std::size_t tw : it->second) {
    const auto& layers = c.towers[tw].layers;
    if (m > static_cast<std::int64_t>(layers.size())) continue;
    for (const auto& I : layers[static_cast<std::size_t>(m - 1)].params.tops)
      out = set_union(out, MeasurableSet::from_dyadic(R, I));
  }
  return out;
}

bool component_witness(const Cme& c, const LevelSetTree& tree, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  auto it = c.towers_by_level.find(tree.level);
  if (it == c.towers_by_level.end()) return fail("no towers at this level");
  for (const auto& [l, comps] : tree.comps) {
    std::vector<DyadicInterval> tops;
    for (std::size_t tw : it->second) {
      const auto& layers = c.towers[tw].layers;
      if (l <= static_cast<std::int64_t>(layers.size())) {
        const auto& t = layers[static_cast<std::size_t>(l - 1)].params.tops;
        tops.insert(tops.end(), t.begin(), t.end());
      }
    }
    for (const DyadicInterval& C : comps) {
      std::size_t exact = 0;
      Rat inside{0};
      for (const DyadicInterval& T : tops) {
        if (T == C) ++exact;
        if (T.contains(C) && T != C)
          return fail("depth " + std::to_string(l) + " comp " + itag(C) +
                      " splits a top");
        if (C.contains(T)) inside += T.length();
      }
      if (l >= 2 && exact != 1)
        return fail("depth " + std::to_string(l) + " comp " + itag(C) + " matches " +
                    std::to_string(exact) + " tops");
      if (l == 1 && inside != C.length())
        return fail("base comp " + itag(C) + " is not a run of whole tops");
    }
  }
  return true;
}

bool base_sandwich(const Cme& c, std::int64_t j, std::string* why) {
  const StepFunction nu = nu_level(c, j);
  for (std::int64_t m = 1; m <= c.profile.height; ++m) {
    const MeasurableSet hi = nu.super_level(Rat(m), /*strict=*/false);
    const MeasurableSet fp = layer_footprint(c, j, m);
    const MeasurableSet lo = nu.super_level(Rat(m) / 2, /*strict=*/true);
    if (!hi.subset_of(fp) || !fp.subset_of(lo)) {
      if (why)
        *why = "layer " + std::to_string(m) + " of level " + std::to_string(j);
      return false;
    }
  }
  return true;
}

CountingReport counting_report(const Cme& c, std::int64_t offset) {
  CountingReport rep;
  const Classification cl = classify(c.universe);
  const std::int64_t h = c.profile.height;

  StepFunction grand = StepFunction::zero(c.lin.N.resolution());
  double num = 0.0, den = 0.0;
  for (std::int64_t j = 1; j <= c.profile.levels; ++j) {
    const StepFunction nu = nu_level(c, j, offset);
    grand = cellwise_max(grand, nu);

    LevelCountingStats st;
    st.level = j;
    st.bmo = dyadic_bmo_norm(nu);
    st.linf = nu.linf_norm();
    for (std::int64_t l = 1; l <= h; ++l)
      st.super_measure[l] = nu.super_level(Rat(l), false).measure();
    rep.levels.push_back(std::move(st));

    if (!base_sandwich(c, j)) rep.sandwich = false;

    // tail of the distribution on a half-integer grid; must vanish at the
    // stack height, and the exponential fit uses the interior points
    Rat prev{2};
    for (std::int64_t g2 = 1; g2 <= 2 * h; ++g2) {
      const Rat gamma = Rat(g2) / 2;
      const Rat tail = nu.super_level(gamma, true).measure();
      if (tail > prev) rep.jn_monotone = false;
      prev = tail;
      if (tail > 0 && tail < 1) {
        const double g = static_cast<double>(g2) / 2.0;
        num -= g * std::log(tail.convert_to<double>());
        den += g * g;
      }
      if (g2 == 2 * h && tail != 0) rep.jn_monotone = false;
    }
  }
  if (den > 0) rep.jn_rate = num / den;
  rep.nu_l1 = grand.integral();
  rep.nu_weak = weak_l1_norm(grand);

  std::vector<MeasurableSet> high_sets;
  std::vector<std::int64_t> high_levels;
  bool first = true;
  for (std::int64_t j = 1; j <= c.profile.levels; ++j) {
    const GenPair w = c.profile.gen[static_cast<std::size_t>(j - 1)];
    const MeasurableSet deep = layer_footprint(c, j, h);
    for (std::int64_t m = w.lower; m <= w.upper; ++m) {
      const MeasurableSet hs = nu_bar(m, c.universe, cl).super_level(Rat(h), false);
      MassHighSet row;
      row.mass = m;
      row.level = j;
      row.measure = hs.measure();
      if (!(hs == deep)) rep.high_match_deep = false;
      if (first || row.measure < rep.min_high) rep.min_high = row.measure;
      first = false;
      rep.high.push_back(row);
      high_sets.push_back(hs);
      high_levels.push_back(j);
    }
  }
  for (std::size_t a = 0; a < high_sets.size(); ++a)
    for (std::size_t b = a + 1; b < high_sets.size(); ++b)
      if (high_levels[a] != high_levels[b] &&
          !high_sets[a].disjoint_with(high_sets[b]))
        rep.high_disjoint = false;
  return rep;
}

}  // namespace tt
