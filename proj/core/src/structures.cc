#include "tt/structures.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace tt {

namespace {

bool window_contains(const FreqWindow& outer, const FreqWindow& inner) {
  return outer.lo <= inner.lo && inner.hi <= outer.hi;
}

// 2P <= 10P' in the dilated sense used by the separation clause
bool dilated_leq(const Tile& P, const Tile& Pp) {
  return Pp.time.contains(P.time) &&
         window_contains(tile_dilate(Rat(2), P), tile_dilate(Rat(10), Pp));
}

std::vector<Rat> sorted_alphas(const Usgtf& f) {
  std::vector<Rat> a = f.params.alphas;
  std::sort(a.begin(), a.end());
  return a;
}

}  // namespace

std::vector<std::string> UsgtfParams::validate() const {
  std::vector<std::string> bad;
  if (r < 1 || r > n) bad.push_back("generation must satisfy 1 <= r <= n");
  if (tops.empty()) bad.push_back("no top intervals");
  for (std::size_t i = 0; i < tops.size(); ++i) {
    if (tops[i].scale != tops[0].scale) bad.push_back("tops of unequal length");
    if (i && tops[i - 1].index >= tops[i].index)
      bad.push_back("tops not in left-to-right order");
  }
  const std::size_t want = std::size_t{1} << static_cast<unsigned>(n - 1);
  if (alphas.size() != want)
    bad.push_back("need exactly 2^{n-1} frequencies, got " +
                  std::to_string(alphas.size()));
  for (std::size_t u = 0; u + 1 < alphas.size(); ++u)
    if (alphas[u + 1] < alphas[u] * pow2r(sigma))
      bad.push_back("frequencies not 2^sigma separated at position " +
                    std::to_string(u));
  // the widest frequency leg in the stack sits at level r
  if (!tops.empty()) {
    const Rat grid = pow2r(tops[0].scale + (n - r));
    for (const Rat& a : alphas)
      if (a <= 0 || rat_den(a / grid) != 1) {
        bad.push_back("frequency off the level-r grid");
        break;
      }
  }
  return bad;
}

std::size_t Usgtf::chain_count() const {
  return params.tops.size() << static_cast<unsigned>(params.n - 1);
}

std::vector<DyadicInterval> Usgtf::i_btm() const {
  std::vector<DyadicInterval> out;
  for (const auto& top : params.tops)
    for (const auto& I : subintervals(top, params.n - params.r)) out.push_back(I);
  return out;
}

std::vector<Tile> Usgtf::all_tiles() const {
  std::vector<Tile> out;
  for (const auto& [j, ts] : levels) out.insert(out.end(), ts.begin(), ts.end());
  return out;
}

Usgtf build_usgtf(const UsgtfParams& params) {
  if (auto bad = params.validate(); !bad.empty())
    throw std::invalid_argument("build_usgtf: " + bad.front());
  Usgtf f;
  f.params = params;
  const std::int64_t r = params.r, n = params.n;
  const std::size_t per_top = std::size_t{1} << static_cast<unsigned>(n - 1);
  const std::int64_t sb = params.tops[0].scale + (n - r);

  for (std::size_t ti = 0; ti < params.tops.size(); ++ti) {
    const DyadicInterval& top = params.tops[ti];
    for (std::size_t u = 1; u <= per_top; ++u) {
      // frequency u lives over bottom block ceil(u / 2^{r-1})
      const std::size_t blk = (u - 1) >> static_cast<unsigned>(r - 1);
      const DyadicInterval bottom{
          sb, top.index * (Int(1) << static_cast<unsigned>(n - r)) + Int(blk)};
      const Rat& alpha = params.alphas[u - 1];
      for (std::int64_t j = r; j <= n; ++j) {
        Tile t = tile_from_alpha(bottom.ancestor_at(top.scale + (n - j)), alpha);
        f.levels[j].push_back(t);
      }
      f.constraints.push_back(ChainConstraint{
          ti * per_top + (u - 1), bottom, pow2r(-r) * bottom.length(), alpha});
    }
  }
  return f;
}

UsgtfParams derive_params(const std::map<std::int64_t, std::vector<Tile>>& levels) {
  if (levels.empty()) throw std::invalid_argument("derive_params: empty stack");
  UsgtfParams p;
  p.r = levels.begin()->first;
  p.n = levels.rbegin()->first;
  std::set<DyadicInterval> tops;
  std::set<Rat> alphas;
  for (const Tile& t : levels.rbegin()->second) {
    tops.insert(t.time);
    alphas.insert(t.alpha());
  }
  p.tops.assign(tops.begin(), tops.end());
  p.alphas.assign(alphas.begin(), alphas.end());
  return p;
}

bool is_tree(const std::vector<Tile>& p, const Tile& top,
             const std::vector<Tile>& universe) {
  for (const Tile& P : p)
    if (!tile_leq(P, top)) return false;
  for (const Tile& Q : universe) {
    if (std::find(p.begin(), p.end(), Q) != p.end()) continue;
    bool below = false, above = false;
    for (const Tile& P : p) {
      below = below || tile_leq(P, Q);
      above = above || tile_leq(Q, P);
    }
    if (below && above) return false;  // convexity gap
  }
  return true;
}

bool is_sparse_tree(const std::vector<Tile>& p, const Tile& top,
                    const std::vector<Tile>& universe, const Rat& c) {
  if (!is_tree(p, top, universe)) return false;
  for (const Tile& P : p) {
    Rat sum(0);
    for (const Tile& Pp : p)
      if (P.time.contains(Pp.time)) sum += Pp.time.length();
    if (sum > c * P.time.length()) return false;
  }
  return true;
}

ForestReport forest_check(const std::vector<Tile>& p, std::int64_t n,
                          const Rat& c_f) {
  ForestReport rep;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < p.size(); ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < p.size(); ++j)
      if (p[i] != p[j] && tile_leq(p[i], p[j])) {
        maximal = false;
        break;
      }
    if (maximal) order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (p[a].time.lo() != p[b].time.lo()) return p[a].time.lo() < p[b].time.lo();
    if (p[a].alpha() != p[b].alpha()) return p[a].alpha() < p[b].alpha();
    return a < b;
  });
  // drop duplicate maximal tiles so each top appears once
  for (std::size_t i : order) {
    bool dup = false;
    for (std::size_t t : rep.tops) dup = dup || p[t] == p[i];
    if (!dup) rep.tops.push_back(i);
  }

  rep.trees.resize(rep.tops.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t t = 0; t < rep.tops.size(); ++t)
      if (tile_leq(p[i], p[rep.tops[t]])) {
        rep.trees[t].push_back(i);
        break;
      }

  rep.separated = true;
  for (std::size_t t = 0; t < rep.tops.size() && rep.separated; ++t)
    for (std::size_t i : rep.trees[t]) {
      for (std::size_t tp = 0; tp < rep.tops.size(); ++tp) {
        if (tp == t) continue;
        if (dilated_leq(p[i], p[rep.tops[tp]])) {
          rep.separated = false;
          rep.violating = {i, rep.tops[tp]};
          break;
        }
      }
      if (!rep.separated) break;
    }

  std::int64_t res = 0;
  for (std::size_t t : rep.tops) res = std::max(res, p[t].time.scale);
  StepFunction counting(res);
  for (std::size_t t : rep.tops)
    counting = counting +
               StepFunction::indicator(MeasurableSet::from_dyadic(res, p[t].time));
  rep.counting = counting;
  rep.counting_linf = counting.linf_norm();
  rep.verdict = rep.separated && rep.counting_linf <= c_f * pow2r(n);
  return rep;
}

bool dominated_level_pair(const std::vector<Tile>& lower,
                          const std::vector<Tile>& upper) {
  for (const Tile& P : lower) {
    bool ok = false;
    for (const Tile& Q : upper) ok = ok || tile_leq(P, Q);
    if (!ok) return false;
  }
  return true;
}

bool is_usgtf(const std::map<std::int64_t, std::vector<Tile>>& levels,
              std::int64_t r, std::int64_t n, const Rat& c_f) {
  if (levels.empty() || levels.begin()->first != r || levels.rbegin()->first != n)
    return false;
  for (std::int64_t j = r; j <= n; ++j)
    if (!levels.count(j) || levels.at(j).empty()) return false;
  for (const auto& [j, tiles] : levels) {
    ForestReport rep = forest_check(tiles, j, c_f);
    if (!rep.verdict) return false;
    for (const auto& tree : rep.trees)
      if (tree.size() != 1) return false;  // every tree is its own top
    for (std::size_t t : rep.tops)
      if (tiles[t].time.scale != tiles[rep.tops[0]].time.scale)
        return false;  // uniform top length within the level
  }
  for (auto it = levels.begin(); it != levels.end(); ++it)
    for (auto jt = std::next(it); jt != levels.end(); ++jt)
      if (!dominated_level_pair(it->second, jt->second)) return false;
  return true;
}

bool is_saturated_in(const std::map<std::int64_t, std::vector<Tile>>& levels,
                     const std::map<std::int64_t, std::vector<Tile>>& universe_by_weight) {
  for (const auto& [j, mine] : levels) {
    auto it = universe_by_weight.find(j);
    if (it == universe_by_weight.end()) continue;
    for (const Tile& Q : it->second) {
      if (std::find(mine.begin(), mine.end(), Q) != mine.end()) continue;
      for (const Tile& P : mine)
        if (tile_lt(P, Q) || tile_lt(Q, P)) return false;
    }
  }
  return true;
}

bool prec(const std::vector<DyadicInterval>& a, const std::vector<DyadicInterval>& b) {
  for (const auto& aj : a) {
    bool hit = false;
    for (const auto& bk : b) hit = hit || bk.contains(aj);
    if (!hit) return false;
  }
  return true;
}

TowerReport tower_check(const std::vector<Usgtf>& t) {
  TowerReport rep;
  if (t.empty()) {
    rep.ok = false;
    rep.violation = "empty tower";
    return rep;
  }
  rep.height = static_cast<std::int64_t>(t.size());
  rep.basis = t.front().params.tops;

  for (const Usgtf& f : t)
    if (f.params.r != t[0].params.r || f.params.n != t[0].params.n) {
      rep.ok = false;
      rep.violation = "mixed generations";
      return rep;
    }
  for (std::size_t l = 0; l + 1 < t.size(); ++l)
    if (!prec(t[l + 1].params.tops, t[l].i_btm())) {
      rep.ok = false;
      rep.violation = "layer " + std::to_string(l + 2) +
                      " tops not inside layer " + std::to_string(l + 1) +
                      " bottoms";
      return rep;
    }
  // frequency disjointness first: a shared frequency always produces
  // comparable tiles as well, and the specific diagnosis is more useful
  for (std::size_t l = 0; l < t.size(); ++l)
    for (std::size_t lp = l + 1; lp < t.size(); ++lp) {
      std::vector<Rat> a = sorted_alphas(t[l]), b = sorted_alphas(t[lp]);
      std::vector<Rat> common;
      std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                            std::back_inserter(common));
      if (!common.empty()) {
        rep.ok = false;
        rep.violation = "shared frequency across layers " + std::to_string(l + 1) +
                        "," + std::to_string(lp + 1);
        return rep;
      }
    }
  for (std::size_t l = 0; l < t.size(); ++l) {
    const auto tl = t[l].all_tiles();
    for (std::size_t lp = l + 1; lp < t.size(); ++lp) {
      for (const Tile& P : tl)
        for (const Tile& Pp : t[lp].all_tiles())
          if (tile_leq(P, Pp) || tile_leq(Pp, P)) {
            rep.ok = false;
            rep.violation = "comparable tiles across layers " +
                            std::to_string(l + 1) + "," + std::to_string(lp + 1);
            return rep;
          }
    }
  }
  return rep;
}

MultiTowerReport multitower_check(const std::vector<std::vector<Usgtf>>& m) {
  MultiTowerReport rep;
  std::vector<std::vector<DyadicInterval>> bases;
  for (std::size_t i = 0; i < m.size(); ++i) {
    TowerReport tr = tower_check(m[i]);
    if (!tr.ok) {
      rep.ok = false;
      rep.violation = "tower " + std::to_string(i + 1) + ": " + tr.violation;
      return rep;
    }
    if (i && (m[i][0].params.r != m[0][0].params.r ||
              m[i][0].params.n != m[0][0].params.n)) {
      rep.ok = false;
      rep.violation = "mixed generations across towers";
      return rep;
    }
    bases.push_back(tr.basis);
  }
  for (std::size_t i = 0; i < bases.size(); ++i)
    for (std::size_t j = i + 1; j < bases.size(); ++j)
      for (const auto& a : bases[i])
        for (const auto& b : bases[j])
          if (!a.disjoint_from(b)) {
            rep.ok = false;
            rep.violation = "bases of towers " + std::to_string(i + 1) + "," +
                            std::to_string(j + 1) + " overlap";
            return rep;
          }
  return rep;
}

bool embeds(const Usgtf& f1, const Usgtf& f2) {
  if (f1.params.n > f2.params.r) return false;
  return dominated_level_pair(f1.levels.at(f1.params.n), f2.levels.at(f2.params.r));
}

bool embeds_tower(const std::vector<Usgtf>& t1, const std::vector<Usgtf>& t2) {
  if (t1.empty() || t2.empty()) return false;
  const std::int64_t n1 = t1[0].params.n, r2 = t2[0].params.r;
  if (n1 > r2) return false;
  std::vector<Tile> top_level, bottom_level;
  for (const Usgtf& f : t1) {
    const auto& ts = f.levels.at(n1);
    top_level.insert(top_level.end(), ts.begin(), ts.end());
  }
  for (const Usgtf& f : t2) {
    const auto& ts = f.levels.at(r2);
    bottom_level.insert(bottom_level.end(), ts.begin(), ts.end());
  }
  return dominated_level_pair(top_level, bottom_level);
}

}  // namespace tt
