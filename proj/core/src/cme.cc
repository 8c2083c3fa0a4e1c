#include "tt/cme.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>

namespace tt {

namespace {

std::int64_t ceil_log2(std::int64_t v) {
  std::int64_t c = 0;
  while ((std::int64_t{1} << c) < v) ++c;
  return c;
}

std::string tower_tag(std::size_t tw, std::size_t layer0) {
  return "tower " + std::to_string(tw) + " layer " + std::to_string(layer0 + 1);
}

}  // namespace

std::vector<std::string> ScaleProfile::validate() const {
  std::vector<std::string> bad;
  if (levels < 1) bad.push_back("levels must be >= 1");
  if (height < 1) bad.push_back("height must be >= 1");
  if (sigma < 10) bad.push_back("sigma must be >= 10");
  if (subdiv < 0 || (std::int64_t{1} << subdiv) < height)
    bad.push_back("2^subdiv must cover the height");
  if (floor_gen < 1) bad.push_back("floor_gen must be >= 1");
  if (resolution < 1) bad.push_back("resolution must be >= 1");
  if (freq_base_exp < 1) bad.push_back("freq_base_exp must be >= 1");
  if (branch_cap < 1) bad.push_back("branch_cap must be >= 1");
  if (host_cap < 1) bad.push_back("host_cap must be >= 1");
  if (top_width < 1) bad.push_back("top_width must be >= 1");
  if (static_cast<std::int64_t>(gen.size()) != levels) {
    bad.push_back("gen needs exactly one pair per level");
    return bad;
  }
  for (std::int64_t j = 1; j <= levels; ++j) {
    const GenPair& g = gen[j - 1];
    if (g.lower < 1 || g.upper <= g.lower)
      bad.push_back("level " + std::to_string(j) + ": need 1 <= lower < upper");
    if (g.upper > 24)
      bad.push_back("level " + std::to_string(j) + ": upper too large for a desk build");
  }
  if (!gen.empty() && gen.front().lower != floor_gen)
    bad.push_back("lowest level must start at floor_gen");
  for (std::int64_t j = 2; j <= levels; ++j) {
    if (gen[j - 2].upper > gen[j - 1].lower)
      bad.push_back("gen must be non-overlapping and ascending at level " +
                    std::to_string(j));
    // the h child blocks of size 2^{n_{j-1}-1} must fit inside one hosting
    // block, 2^{r_j - 1} wide
    if (gen[j - 1].lower < gen[j - 2].upper + ceil_log2(height))
      bad.push_back("level " + std::to_string(j) +
                    ": lower generation too small to host the child window");
  }
  return bad;
}

GenPair layer_generation(const ScaleProfile& p, std::int64_t level, std::int64_t l) {
  GenPair g = p.gen[level - 1];
  if (p.height >= 3 && l >= p.height - 1) g.lower = p.floor_gen;
  return g;
}

std::vector<Usgtf> build_tower_layers(const ScaleProfile& p, std::int64_t level,
                                      const std::vector<DyadicInterval>& base_tops,
                                      std::int64_t window_start,
                                      std::int64_t rotation) {
  const std::int64_t h = p.height;
  const std::int64_t B = std::int64_t{1} << (p.gen[level - 1].upper - 1);
  std::vector<Usgtf> layers;
  std::vector<DyadicInterval> tops = base_tops;
  for (std::int64_t l = 1; l <= h; ++l) {
    const GenPair g = layer_generation(p, level, l);
    if (l > 1) {
      if (p.height >= 3 && l == h) {
        tops = layers.back().params.tops;  // last two layers share tops
      } else {
        const Usgtf& prev = layers.back();
        const std::int64_t per_top =
            std::int64_t{1} << (prev.params.n - prev.params.r);
        const auto bots = prev.i_btm();
        const std::int64_t take = std::min(per_top, p.branch_cap);
        std::vector<DyadicInterval> next;
        for (std::size_t t = 0; t < prev.params.tops.size(); ++t)
          for (std::int64_t b = 0; b < take; ++b)
            next.push_back(bots[t * per_top + b].right_child());
        tops = next;
      }
    }
    UsgtfParams par;
    par.tops = tops;
    par.r = g.lower;
    par.n = g.upper;
    par.sigma = p.sigma;
    const std::int64_t blk = window_start + ((rotation + l - 1) % h) * B;
    for (std::int64_t m = blk; m < blk + B; ++m)
      par.alphas.push_back(pow2r(p.freq_base_exp + p.sigma * m));
    layers.push_back(build_usgtf(par));
  }
  return layers;
}

namespace {

// allot cells to every chain, lowest level first.  A chain first absorbs the
// cells already carrying its frequency inside its host (lower structures draw
// on the host's own frequency block, so their cells count toward the host
// chain's measure), then claims the leftmost free cells for the rest.  Fresh
// cells must stay clear of every solved chain's tile stack, otherwise they
// would silently enlarge that chain's E-sets.
void solve_chains(Cme& c) {
  const std::int64_t R = c.profile.resolution;
  std::map<Rat, MeasurableSet> allotted, shielded;
  MeasurableSet occupied(R);
  for (std::int64_t j = 1; j <= c.profile.levels; ++j) {
    for (std::size_t tw : c.towers_by_level.at(j)) {
      const TowerRecord& tr = c.towers[tw];
      for (std::size_t li = 0; li < tr.layers.size(); ++li) {
        const Usgtf& f = tr.layers[li];
        for (std::size_t ci = 0; ci < f.constraints.size(); ++ci) {
          const ChainConstraint& cc = f.constraints[ci];
          const MeasurableSet host = MeasurableSet::from_dyadic(R, cc.host);
          MeasurableSet cells(R);
          Rat got(0);
          if (auto it = allotted.find(cc.alpha); it != allotted.end()) {
            cells = set_intersect(it->second, host);
            got = cells.measure();
          }
          if (got > cc.measure)
            throw std::runtime_error("build_cme: chain over-subscribed at " +
                                     tower_tag(tw, li) + " chain " +
                                     std::to_string(ci));
          if (got < cc.measure) {
            MeasurableSet free = set_diff(host, occupied);
            if (auto it = shielded.find(cc.alpha); it != shielded.end())
              free = set_diff(free, it->second);
            Int need = scale_to_cells(cc.measure - got, R);
            std::vector<CellRun> taken;
            for (const auto& run : free.runs()) {
              if (need == 0) break;
              const Int len = std::min(Int(run.end - run.begin), need);
              taken.push_back(CellRun{run.begin, run.begin + len});
              need -= len;
            }
            if (need != 0)
              throw std::runtime_error("build_cme: no room for the E-set of " +
                                       tower_tag(tw, li) + " chain " +
                                       std::to_string(ci));
            const MeasurableSet fresh(R, std::move(taken));
            occupied = set_union(occupied, fresh);
            auto& slot =
                allotted.try_emplace(cc.alpha, MeasurableSet(R)).first->second;
            slot = set_union(slot, fresh);
            cells = set_union(cells, fresh);
          }
          auto& sh =
              shielded.try_emplace(cc.alpha, MeasurableSet(R)).first->second;
          sh = set_union(sh, MeasurableSet::from_dyadic(
                                 R, f.levels.at(f.params.n)[ci].time));
          c.chains.push_back(ChainSolution{tw, li, ci, std::move(cells), got});
        }
      }
    }
  }

  std::vector<StepFunction::Run> nruns;
  for (const auto& [alpha, cells] : allotted)
    for (const auto& run : cells.runs())
      nruns.push_back(StepFunction::Run{run.begin, run.end, alpha});
  const MeasurableSet rest =
      set_diff(MeasurableSet::from_dyadic(R, DyadicInterval{0, 0}), occupied);
  for (const auto& run : rest.runs())
    nruns.push_back(StepFunction::Run{run.begin, run.end, c.sentinel_freq});
  c.lin.N = StepFunction(R, std::move(nruns));
}

}  // namespace

Cme build_cme(const ScaleProfile& p) {
  if (auto bad = p.validate(); !bad.empty())
    throw std::invalid_argument("build_cme: " + bad.front());
  Cme c;
  c.profile = p;
  const std::int64_t L = p.levels, h = p.height;

  std::int64_t t0 = 0;
  while ((std::int64_t{1} << t0) < p.top_width) ++t0;
  std::vector<DyadicInterval> tops0;
  for (std::int64_t i = 0; i < p.top_width; ++i)
    tops0.push_back(DyadicInterval{t0, Int(i)});

  {
    TowerRecord top;
    top.level = L;
    top.layers = build_tower_layers(p, L, tops0, 0, 0);
    c.towers_by_level[L].push_back(0);
    c.towers.push_back(std::move(top));
  }

  for (std::int64_t j = L - 1; j >= 1; --j) {
    const std::int64_t host_layers = h >= 3 ? h - 2 : 1;
    const std::int64_t bc = std::int64_t{1} << (p.gen[j - 1].upper - 1);
    const std::vector<std::size_t> parents = c.towers_by_level.at(j + 1);
    for (std::size_t pt : parents) {
      for (std::int64_t pl = 1; pl <= host_layers; ++pl) {
        // copy out everything needed before c.towers can reallocate
        const std::int64_t r_p = c.towers[pt].layers[pl - 1].params.r;
        const std::int64_t n_p = c.towers[pt].layers[pl - 1].params.n;
        const std::int64_t per_top = std::int64_t{1} << (n_p - r_p);
        const std::int64_t pblock = std::int64_t{1} << (r_p - 1);
        const std::int64_t layer_start =
            c.towers[pt].window_start +
            ((c.towers[pt].rotation + pl - 1) % h) *
                (std::int64_t{1} << (n_p - 1));
        const auto bots = c.towers[pt].layers[pl - 1].i_btm();
        if (h * bc > pblock)
          throw std::invalid_argument(
              "build_cme: child frequency window wider than the host block");
        const std::int64_t take = std::min<std::int64_t>(
            static_cast<std::int64_t>(bots.size()), p.host_cap);
        for (std::int64_t bi = 0; bi < take; ++bi) {
          const DyadicInterval J = bots[bi].left_child();
          const std::int64_t bstart = layer_start + (bi % per_top) * pblock;
          const auto slots = subintervals(J, p.subdiv);
          for (std::int64_t r = 1; r <= h; ++r) {
            TowerRecord tr;
            tr.level = j;
            tr.parent_tower = pt;
            tr.parent_layer = pl;
            tr.host_j = J;
            tr.sub_index = r;
            tr.window_start = bstart;
            tr.rotation = r - 1;
            tr.layers = build_tower_layers(p, j, {slots[r - 1]}, bstart, r - 1);
            c.towers_by_level[j].push_back(c.towers.size());
            c.towers.push_back(std::move(tr));
          }
        }
      }
    }
  }

  // geometry-dependent floors on resolution and base frequency
  std::int64_t sb_max = 0, need_r = 0;
  for (const auto& tr : c.towers)
    for (const auto& f : tr.layers) {
      const std::int64_t sb = f.params.tops[0].scale + (f.params.n - f.params.r);
      sb_max = std::max(sb_max, sb);
      need_r = std::max(need_r, sb + f.params.r);
    }
  if (p.resolution < need_r)
    throw std::invalid_argument(
        "build_cme: resolution too coarse for the finest chain allotment");
  if (p.freq_base_exp < sb_max + 6)
    throw std::invalid_argument(
        "build_cme: base frequency too low for the finest windows");

  const std::int64_t m_count = h * (std::int64_t{1} << (p.gen[L - 1].upper - 1));
  c.sentinel_freq = pow2r(p.freq_base_exp + p.sigma * m_count);
  for (std::int64_t m = 0; m <= m_count; ++m)
    c.lin.freqs.push_back(pow2r(p.freq_base_exp + p.sigma * m));
  c.lin.sigma = p.sigma;

  solve_chains(c);

  c.universe.lin = c.lin;
  c.universe.n0 = 10;
  c.universe.mass_floor_exp = p.gen[L - 1].upper;
  for (std::size_t tw = 0; tw < c.towers.size(); ++tw)
    for (const auto& f : c.towers[tw].layers)
      for (const auto& [lev, ts] : f.levels)
        for (const Tile& t : ts) {
          c.universe.tiles.push_back(t);
          c.tile_tower.push_back(tw);
          c.tile_level.push_back(lev);
        }
  return c;
}

void CmeReport::add(const std::string& name, bool pass, const std::string& detail) {
  checks.push_back(CmeCheck{name, pass, detail});
  ok = ok && pass;
}

const CmeCheck* CmeReport::find(const std::string& name) const {
  for (const auto& ch : checks)
    if (ch.name == name) return &ch;
  return nullptr;
}

namespace {

MeasurableSet footprint(std::int64_t R, const std::vector<DyadicInterval>& iv) {
  MeasurableSet s(R);
  for (const auto& I : iv) s = set_union(s, MeasurableSet::from_dyadic(R, I));
  return s;
}

// expected first frequency index of a layer's block
std::int64_t block_start(const TowerRecord& tr, std::int64_t l, std::int64_t h,
                         std::int64_t B) {
  return tr.window_start + ((tr.rotation + l - 1) % h) * B;
}

}  // namespace

CmeReport validate_cme(const Cme& c) {
  CmeReport rep;
  const ScaleProfile& p = c.profile;
  const std::int64_t h = p.height, L = p.levels, R = p.resolution;

  rep.add("profile", p.validate().empty());

  for (std::size_t i = 0; i < c.universe.tiles.size(); ++i)
    ++rep.tiles_per_level[c.towers[c.tile_tower[i]].level];

  {  // every tower fully laid out, level bookkeeping consistent
    bool ok = true;
    std::size_t counted = 0;
    for (const auto& [lev, idxs] : c.towers_by_level) {
      counted += idxs.size();
      for (std::size_t tw : idxs)
        ok = ok && c.towers[tw].level == lev &&
             static_cast<std::int64_t>(c.towers[tw].layers.size()) == h;
    }
    rep.add("tower-shape", ok && counted == c.towers.size());
  }

  {  // each layer is a well-formed top-forest of its declared generation
    bool ok = true;
    std::string detail;
    for (std::size_t tw = 0; tw < c.towers.size() && ok; ++tw)
      for (std::size_t li = 0; li < c.towers[tw].layers.size() && ok; ++li) {
        const Usgtf& f = c.towers[tw].layers[li];
        const GenPair g = layer_generation(p, c.towers[tw].level, li + 1);
        if (f.params.r != g.lower || f.params.n != g.upper ||
            !is_usgtf(f.levels, f.params.r, f.params.n)) {
          ok = false;
          detail = tower_tag(tw, li);
        }
      }
    rep.add("usgtf-levels", ok, detail);
  }

  {  // layers nest downward; for h >= 3 the last two share tops and bottoms
    bool ok = true;
    std::string detail;
    for (std::size_t tw = 0; tw < c.towers.size() && ok; ++tw) {
      const auto& ls = c.towers[tw].layers;
      for (std::size_t li = 0; li + 1 < ls.size() && ok; ++li) {
        const bool shared = h >= 3 && static_cast<std::int64_t>(li) + 2 == h;
        const bool good = shared
                              ? ls[li + 1].params.tops == ls[li].params.tops &&
                                    ls[li + 1].i_btm() == ls[li].i_btm()
                              : prec(ls[li + 1].params.tops, ls[li].i_btm());
        if (!good) {
          ok = false;
          detail = tower_tag(tw, li) + " -> " + std::to_string(li + 2);
        }
      }
    }
    rep.add("layer-nesting", ok, detail);
  }

  {  // frequency blocks: recomputed, disjoint within a tower
    bool ok = true;
    std::string detail;
    for (std::size_t tw = 0; tw < c.towers.size() && ok; ++tw) {
      const TowerRecord& tr = c.towers[tw];
      const std::int64_t B = std::int64_t{1} << (p.gen[tr.level - 1].upper - 1);
      std::set<std::int64_t> starts;
      for (std::size_t li = 0; li < tr.layers.size() && ok; ++li) {
        const std::int64_t blk = block_start(tr, li + 1, h, B);
        starts.insert(blk);
        std::vector<Rat> want;
        for (std::int64_t m = blk; m < blk + B; ++m)
          want.push_back(pow2r(p.freq_base_exp + p.sigma * m));
        if (tr.layers[li].params.alphas != want) {
          ok = false;
          detail = tower_tag(tw, li);
        }
      }
      if (ok && static_cast<std::int64_t>(starts.size()) != h) {
        ok = false;
        detail = "tower " + std::to_string(tw) + " blocks collide";
      }
    }
    rep.add("frequency-blocks", ok, detail);
  }

  {  // towers sharing a hosting interval rotate through one window: distinct
    // slots and rotations, equal start, no block reuse at a fixed layer
    bool ok = true;
    std::map<std::tuple<std::size_t, std::int64_t, std::int64_t, std::string>,
             std::vector<std::size_t>>
        groups;
    for (std::size_t tw = 0; tw < c.towers.size(); ++tw) {
      const TowerRecord& tr = c.towers[tw];
      if (!tr.host_j) continue;
      groups[{tr.parent_tower, tr.parent_layer, tr.host_j->scale,
              tr.host_j->index.str()}]
          .push_back(tw);
    }
    for (const auto& [key, tws] : groups) {
      if (static_cast<std::int64_t>(tws.size()) != h) ok = false;
      std::set<std::int64_t> subs, rots;
      for (std::size_t tw : tws) {
        subs.insert(c.towers[tw].sub_index);
        rots.insert(c.towers[tw].rotation);
        if (c.towers[tw].window_start != c.towers[tws.front()].window_start)
          ok = false;
      }
      if (subs.size() != tws.size() || rots.size() != tws.size()) ok = false;
      for (std::int64_t l = 1; l <= h; ++l) {
        // compare what the layers actually carry, not the recorded rotation
        std::set<Rat> blocks;
        for (std::size_t tw : tws)
          blocks.insert(c.towers[tw].layers[l - 1].params.alphas.front());
        if (blocks.size() != tws.size()) ok = false;
      }
    }
    rep.add("sibling-blocks", ok);
  }

  std::int64_t sb_max = 0;
  for (const auto& t : c.universe.tiles) sb_max = std::max(sb_max, t.time.scale);
  bool straddle_free = true;
  {  // no tile's frequency leg is wide enough to reach a second frequency
    Rat min_gap(0);
    for (std::size_t i = 0; i + 1 < c.lin.freqs.size(); ++i) {
      const Rat gap = c.lin.freqs[i + 1] - c.lin.freqs[i];
      if (min_gap == 0 || gap < min_gap) min_gap = gap;
    }
    straddle_free = min_gap > pow2r(sb_max);
    rep.add("no-straddle", straddle_free);
  }

  {  // within a tower, tiles of different layers are incomparable.  Small
    // towers get the literal pairwise check; larger ones rely on the
    // straddle-free certificate (comparable tiles would have to share a
    // frequency, and layer blocks are disjoint)
    bool ok = true;
    std::string detail;
    for (std::size_t tw = 0; tw < c.towers.size() && ok; ++tw) {
      const auto& ls = c.towers[tw].layers;
      std::size_t total = 0;
      for (const auto& f : ls) total += f.all_tiles().size();
      if (total > 4000) {
        if (!straddle_free || !rep.find("frequency-blocks")->pass) {
          ok = false;
          detail = "tower " + std::to_string(tw) + " certificate unavailable";
        }
        continue;
      }
      for (std::size_t a = 0; a < ls.size() && ok; ++a)
        for (std::size_t b = a + 1; b < ls.size() && ok; ++b)
          for (const Tile& ta : ls[a].all_tiles()) {
            for (const Tile& tb : ls[b].all_tiles())
              if (tile_leq(ta, tb) || tile_leq(tb, ta)) {
                ok = false;
                detail = tower_tag(tw, a) + " vs " + std::to_string(b + 1);
                break;
              }
            if (!ok) break;
          }
    }
    rep.add("incomparability", ok, detail);
  }

  {  // bases of towers at one level are pairwise disjoint
    bool ok = true;
    for (const auto& [lev, idxs] : c.towers_by_level) {
      std::vector<MeasurableSet> bases;
      for (std::size_t tw : idxs)
        bases.push_back(footprint(R, c.towers[tw].layers[0].params.tops));
      for (std::size_t a = 0; a < bases.size() && ok; ++a)
        for (std::size_t b = a + 1; b < bases.size() && ok; ++b)
          ok = bases[a].disjoint_with(bases[b]);
      if (!ok) break;
    }
    rep.add("bases-disjoint", ok);
  }

  {  // every hosted tower sits in a slot of a left-child of one of the first
    // host_cap bottoms of its parent layer, with the window anchored at that
    // bottom's own frequency block
    bool ok = true;
    std::string detail;
    for (std::size_t tw = 0; tw < c.towers.size() && ok; ++tw) {
      const TowerRecord& tr = c.towers[tw];
      if (!tr.host_j) {
        if (tr.level != L) {
          ok = false;
          detail = "tower " + std::to_string(tw) + " has no host";
        }
        continue;
      }
      const TowerRecord& par = c.towers[tr.parent_tower];
      const Usgtf& pf = par.layers[tr.parent_layer - 1];
      const std::int64_t per_top = std::int64_t{1} << (pf.params.n - pf.params.r);
      const std::int64_t pblock = std::int64_t{1} << (pf.params.r - 1);
      const std::int64_t B_p = std::int64_t{1} << (pf.params.n - 1);
      const std::int64_t lstart = block_start(par, tr.parent_layer, h, B_p);
      const auto bots = pf.i_btm();
      const std::int64_t take = std::min<std::int64_t>(
          static_cast<std::int64_t>(bots.size()), p.host_cap);
      bool found = false;
      for (std::int64_t bi = 0; bi < take && !found; ++bi)
        found = *tr.host_j == bots[bi].left_child() &&
                tr.window_start == lstart + (bi % per_top) * pblock;
      const std::int64_t B_c = std::int64_t{1} << (p.gen[tr.level - 1].upper - 1);
      const bool window_fits = tr.window_start >= lstart && h * B_c <= pblock;
      const bool slot_ok =
          tr.sub_index >= 1 && tr.sub_index <= h &&
          tr.layers[0].params.tops ==
              std::vector<DyadicInterval>{
                  subintervals(*tr.host_j, p.subdiv)[tr.sub_index - 1]} &&
          par.level == tr.level + 1 && tr.parent_layer >= 1 &&
          tr.parent_layer <= (h >= 3 ? h - 2 : 1);
      if (!found || !window_fits || !slot_ok) {
        ok = false;
        detail = "tower " + std::to_string(tw);
      }
    }
    rep.add("hosting", ok, detail);
  }

  {  // adjacent levels embed: top generation of level j sits under the lower
    // generation of level j+1
    bool ok = true;
    std::string detail;
    for (std::int64_t j = 1; j + 1 <= L && ok; ++j) {
      std::vector<Tile> lower, upper;
      for (std::size_t tw : c.towers_by_level.at(j))
        for (const auto& f : c.towers[tw].layers) {
          const auto& ts = f.levels.at(f.params.n);
          lower.insert(lower.end(), ts.begin(), ts.end());
        }
      for (std::size_t tw : c.towers_by_level.at(j + 1))
        for (const auto& f : c.towers[tw].layers) {
          const auto& ts = f.levels.at(p.gen[j].lower);
          upper.insert(upper.end(), ts.begin(), ts.end());
        }
      if (!dominated_level_pair(lower, upper)) {
        ok = false;
        detail = "levels " + std::to_string(j) + " -> " + std::to_string(j + 1);
      }
    }
    rep.add("chain-embedding", ok, detail);
  }

  {  // cross-level tops: a lower level's top never strictly contains a
    // higher level's top
    bool ok = true;
    std::map<std::int64_t, std::vector<DyadicInterval>> tops_at;
    for (const auto& tr : c.towers)
      for (const auto& f : tr.layers)
        for (const auto& t : f.params.tops) tops_at[tr.level].push_back(t);
    for (std::int64_t lo = 1; lo < L && ok; ++lo)
      for (std::int64_t hi = lo + 1; hi <= L && ok; ++hi)
        for (const auto& a : tops_at[lo]) {
          for (const auto& b : tops_at[hi])
            if (a.contains(b) && a != b) {
              ok = false;
              break;
            }
          if (!ok) break;
        }
    rep.add("top-nesting", ok);
  }

  {  // within a tower, top lengths drop along the layers, except for the
    // shared last pair; record the scale ladder
    bool ok = true;
    std::string detail;
    for (std::size_t tw = 0; tw < c.towers.size(); ++tw) {
      const auto& ls = c.towers[tw].layers;
      std::string ladder;
      for (std::size_t li = 0; li < ls.size(); ++li) {
        const std::int64_t s = ls[li].params.tops[0].scale;
        ladder += (li ? "," : "") + std::to_string(s);
        if (li == 0) continue;
        const std::int64_t prev = ls[li - 1].params.tops[0].scale;
        const bool shared = h >= 3 && static_cast<std::int64_t>(li) + 1 == h;
        if (shared ? s != prev : s <= prev) ok = false;
      }
      if (tw == 0) detail = ladder;
    }
    rep.add("layer-length-drop", ok, detail);
  }

  {  // deepest-layer bases are pairwise disjoint across levels.  With a
    // single layer the base layer is also the hosting layer, so the
    // cross-level clause only applies from height two upward.
    bool ok = true;
    std::map<std::int64_t, MeasurableSet> deep;
    for (const auto& [lev, idxs] : c.towers_by_level) {
      MeasurableSet s(R);
      for (std::size_t tw : idxs)
        s = set_union(s, footprint(R, c.towers[tw].layers.back().params.tops));
      rep.last_layer_basis_measure[lev] = s.measure();
      deep.emplace(lev, std::move(s));
    }
    for (auto it = deep.begin(); it != deep.end(); ++it) {
      if (it->second.empty()) ok = false;
      if (h < 2) continue;
      for (auto jt = std::next(it); jt != deep.end(); ++jt)
        if (!it->second.disjoint_with(jt->second)) ok = false;
    }
    rep.add("deep-bases-disjoint", ok);
  }

  {  // no two constructed tiles coincide
    std::vector<Tile> sorted = c.universe.tiles;
    std::sort(sorted.begin(), sorted.end());
    rep.add("no-duplicate-tiles",
            std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }

  {  // the assignment is well-formed and covers all of [0,1)
    rep.add("linearization", c.lin.validate().empty() &&
                                 c.lin.N.support().measure() == 1);
  }

  {  // per chain: cells inside the host, exact measure, absorption bounded
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < c.chains.size() && ok; ++i) {
      const ChainSolution& s = c.chains[i];
      const Usgtf& f = c.towers[s.tower].layers[s.layer];
      const ChainConstraint& cc = f.constraints[s.chain];
      if (!s.cells.subset_of(MeasurableSet::from_dyadic(R, cc.host)) ||
          s.cells.measure() != cc.measure || s.absorbed > cc.measure) {
        ok = false;
        detail = "chain " + std::to_string(i);
      }
    }
    rep.add("chain-solutions", ok, detail);
  }

  {  // the E-sets read back off N agree along every chain and match the
    // solver's cells
    bool ok = true;
    std::string detail;
    for (std::size_t i = 0; i < c.chains.size() && ok; ++i) {
      const ChainSolution& s = c.chains[i];
      const Usgtf& f = c.towers[s.tower].layers[s.layer];
      for (std::int64_t j = f.params.r; j <= f.params.n && ok; ++j) {
        const MeasurableSet e = e_set(f.levels.at(j)[s.chain], c.lin);
        if (!(e == s.cells)) {
          ok = false;
          detail = "chain " + std::to_string(i) + " level " + std::to_string(j);
        }
      }
    }
    rep.add("e-sharing", ok, detail);
  }

  {  // classification puts every tile exactly where it was built: restricted
    // and full mass both equal the declared power of two
    const Classification cls = classify(c.universe);
    bool ok = cls.p_zero.empty() && cls.p_bar_zero.empty() &&
              cls.floor_violations.empty();
    std::string detail;
    for (std::size_t i = 0; i < c.universe.tiles.size() && ok; ++i) {
      const Rat want = pow2r(-c.tile_level[i]);
      if (cls.a0[i] != want || cls.a[i] != want) {
        ok = false;
        detail = "tile " + std::to_string(i);
      }
    }
    if (ok) {
      for (const auto& [w, idxs] : cls.bins)
        for (std::size_t i : idxs)
          if (c.tile_level[i] != w) {
            ok = false;
            detail = "bin " + std::to_string(w);
          }
    }
    rep.min_mass = Rat(1);
    for (const Rat& a : cls.a)
      if (a > 0 && a < rep.min_mass) rep.min_mass = a;
    rep.add("masses", ok, detail);
  }

  {  // greedy peeling by maximal top-footprints recovers the layer order
    bool ok = true;
    std::string detail;
    for (const auto& [lev, idxs] : c.towers_by_level) {
      struct Unit {
        std::size_t tower, layer;
        MeasurableSet fp;
        bool taken = false;
      };
      std::vector<Unit> units;
      for (std::size_t tw : idxs)
        for (std::size_t li = 0; li < c.towers[tw].layers.size(); ++li)
          units.push_back(Unit{tw, li,
                               footprint(R, c.towers[tw].layers[li].params.tops),
                               false});
      std::size_t remaining = units.size();
      std::int64_t round = 0;
      while (remaining > 0) {
        ++round;
        std::vector<std::size_t> picked;
        for (std::size_t u = 0; u < units.size(); ++u) {
          if (units[u].taken) continue;
          bool maximal = true;
          for (std::size_t v = 0; v < units.size() && maximal; ++v)
            if (v != u && !units[v].taken &&
                units[u].fp.subset_of(units[v].fp) &&
                !(units[u].fp == units[v].fp))
              maximal = false;
          if (!maximal) continue;
          bool clear = true;
          for (std::size_t q : picked)
            if (!units[u].fp.disjoint_with(units[q].fp)) clear = false;
          if (clear) picked.push_back(u);
        }
        if (picked.empty()) {
          ok = false;
          detail = "level " + std::to_string(lev) + " stalls";
          break;
        }
        for (std::size_t u : picked) {
          if (static_cast<std::int64_t>(units[u].layer) + 1 != round) {
            ok = false;
            detail = "level " + std::to_string(lev) + " round " +
                     std::to_string(round);
          }
          units[u].taken = true;
          --remaining;
        }
        if (!ok) break;
      }
      if (ok && round != h) {
        ok = false;
        detail = "level " + std::to_string(lev) + " peels in " +
                 std::to_string(round) + " rounds";
      }
      if (!ok) break;
    }
    rep.add("layer-peeling", ok, detail);
  }

  return rep;
}

NormalSplit normal_boundary_split(const Usgtf& f) {
  // merge the tops (sorted, equal length) into maximal half-open segments
  std::vector<RealInterval> comp;
  for (const auto& t : f.params.tops) {
    if (!comp.empty() && comp.back().hi == t.lo())
      comp.back().hi = t.hi();
    else
      comp.push_back(RealInterval{t.lo(), t.hi()});
  }
  const auto inside = [&](const RealInterval& seg) {
    for (const auto& cpt : comp)
      if (cpt.lo <= seg.lo && seg.hi < cpt.hi) return true;
    return false;
  };
  NormalSplit out;
  const auto tiles = f.all_tiles();
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const StarRegion st = star(tiles[i].time);
    if (inside(st.left) && inside(st.right))
      out.normal.push_back(i);
    else
      out.boundary.push_back(i);
  }
  return out;
}

}  // namespace tt
