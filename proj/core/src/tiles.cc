#include "tt/tiles.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace tt {

namespace {

Rat pow_n(const Rat& b, int e) {
  Rat r(1);
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// one damped summand of the mass sup: P' seen from P.  `best` is the sup so
// far; terms that provably cannot beat it are skipped via a cheap power-of-two
// lower bound on the damping factor, so the exact big-rational power only runs
// for genuine candidates.  Returning 0 for a skipped term never changes the
// sup.
Rat damped_term(const Tile& P, const Tile& Pp, const Rat& a0p, int n0,
                const Rat& best) {
  if (a0p == 0 || a0p <= best) return Rat(0);
  const Rat d = window_distance(tile_dilate(Rat(10), P), tile_dilate(Rat(10), Pp));
  if (d == 0) return a0p;
  const Rat q = d / P.freq.length();
  // q > 2^lb, so the damping factor exceeds 2^{lb n0}
  const std::int64_t lb = floor_log2(rat_num(q)) - floor_log2(rat_den(q)) - 1;
  if (lb > 0 && best > 0 &&
      a0p <= best * pow2r(lb * static_cast<std::int64_t>(n0)))
    return Rat(0);
  return a0p / pow_n(1 + q, n0);
}

std::int64_t weight_of(const Rat& a) {
  if (a <= 0 || a > 1) throw std::logic_error("weight_of: mass outside (0,1]");
  std::int64_t n = 0;
  while (a <= pow2r(-n - 1)) ++n;
  return n;
}

}  // namespace

Tile tile_from_alpha(const DyadicInterval& time, const Rat& alpha) {
  if (alpha < 0) throw std::invalid_argument("tile_from_alpha: negative alpha");
  const Rat idx = alpha * time.length();  // alpha / |omega|
  if (rat_den(idx) != 1)
    throw std::invalid_argument("tile_from_alpha: alpha off the frequency grid");
  return Tile{time, DyadicInterval{-time.scale, rat_num(idx)}};
}

bool tile_area_one(const Tile& P) { return P.freq.scale == -P.time.scale; }

bool tile_leq(const Tile& P1, const Tile& P2) {
  return P2.time.contains(P1.time) && P1.freq.contains(P2.freq);
}

bool tile_lt(const Tile& P1, const Tile& P2) {
  return tile_leq(P1, P2) && P1.time.scale > P2.time.scale;
}

FreqWindow tile_dilate(const Rat& a, const Tile& P) {
  if (a <= 0) throw std::invalid_argument("tile_dilate: factor must be positive");
  const Rat c = P.freq.center();
  const Rat half = a * P.freq.length() / 2;
  return FreqWindow{c - half, c + half};
}

Rat window_distance(const FreqWindow& A, const FreqWindow& B) {
  const Rat gap = std::max(A.lo, B.lo) - std::min(A.hi, B.hi);
  return gap > 0 ? gap : Rat(0);
}

std::vector<std::string> Linearization::validate() const {
  std::vector<std::string> bad;
  for (std::size_t i = 0; i + 1 < freqs.size(); ++i) {
    if (freqs[i + 1] <= freqs[i]) bad.push_back("frequency list not increasing");
    if (freqs[i + 1] < freqs[i] * pow2r(sigma))
      bad.push_back("frequency ratio below 2^sigma at position " + std::to_string(i));
  }
  for (const auto& f : freqs)
    if (f <= 0) {
      bad.push_back("nonpositive frequency in list");
      break;
    }
  const Int cells = Int(1) << static_cast<unsigned>(N.resolution());
  for (const auto& run : N.runs()) {
    if (run.begin < 0 || run.end > cells) {
      bad.push_back("assignment leaves [0,1)");
      break;
    }
  }
  for (const auto& run : N.runs()) {
    if (!std::binary_search(freqs.begin(), freqs.end(), run.value)) {
      bad.push_back("assignment value outside the frequency list");
      break;
    }
  }
  return bad;
}

std::vector<std::string> TileUniverse::validate() const {
  std::vector<std::string> bad;
  std::set<std::int64_t> scales;
  for (std::size_t i = 0; i < tiles.size(); ++i) {
    const Tile& P = tiles[i];
    const std::string tag = "tile " + std::to_string(i) + ": ";
    if (!tile_area_one(P)) bad.push_back(tag + "area not one");
    if (P.time.scale < 0 || P.time.index < 0 ||
        P.time.index >= (Int(1) << static_cast<unsigned>(std::max<std::int64_t>(
                             P.time.scale, 0))))
      bad.push_back(tag + "time interval leaves [0,1)");
    if (P.freq.index < 0) bad.push_back(tag + "negative frequency");
    if (P.time.scale > lin.N.resolution())
      bad.push_back(tag + "finer than the assignment resolution");
    scales.insert(P.time.scale);
  }
  for (auto it = scales.begin(); it != scales.end(); ++it) {
    auto nx = std::next(it);
    if (nx != scales.end() && *nx - *it < 10) {
      bad.push_back("time scales closer than 2^10 apart");
      break;
    }
  }
  for (auto& m : lin.validate()) bad.push_back("assignment: " + m);
  return bad;
}

MeasurableSet e_set(const Tile& P, const Linearization& lin) {
  const std::int64_t R = lin.N.resolution();
  if (P.time.scale < 0 || P.time.scale > R)
    throw std::invalid_argument("e_set: tile scale outside [0, resolution]");
  const unsigned up = static_cast<unsigned>(R - P.time.scale);
  const Int lo = P.time.index << up;
  const Int hi = (P.time.index + 1) << up;
  const Rat wlo = P.freq.lo(), whi = P.freq.hi();
  std::vector<CellRun> runs;
  for (const auto& run : lin.N.runs()) {
    if (run.end <= lo || run.begin >= hi) continue;
    if (run.value < wlo || run.value >= whi) continue;
    runs.push_back(CellRun{std::max(run.begin, lo), std::min(run.end, hi)});
  }
  return MeasurableSet(R, std::move(runs));
}

Rat restricted_mass(const Tile& P, const Linearization& lin) {
  return e_set(P, lin).measure() / P.time.length();
}

Rat mass(const Tile& P, const TileUniverse& U) {
  Rat best(0);
  for (const Tile& Pp : U.tiles) {
    if (!Pp.time.contains(P.time)) continue;
    best = std::max(best, damped_term(P, Pp, restricted_mass(Pp, U.lin), U.n0, best));
  }
  return best;
}

Classification classify(const TileUniverse& U) {
  const std::size_t n = U.tiles.size();
  Classification out;
  out.a0.resize(n);
  out.a.assign(n, Rat(0));

  std::map<DyadicInterval, std::vector<std::size_t>> by_time;
  std::set<std::int64_t> scales;
  for (std::size_t i = 0; i < n; ++i) {
    out.a0[i] = restricted_mass(U.tiles[i], U.lin);
    by_time[U.tiles[i].time].push_back(i);
    scales.insert(U.tiles[i].time.scale);
  }

  // the sup only sees tiles on ancestor intervals, so walk those directly;
  // nearest first, so the undamped same-interval term seeds the sup and the
  // skip bound in damped_term cuts off the far candidates
  for (std::size_t i = 0; i < n; ++i) {
    const Tile& P = U.tiles[i];
    for (auto sit = scales.rbegin(); sit != scales.rend(); ++sit) {
      if (*sit > P.time.scale) continue;
      auto it = by_time.find(P.time.ancestor_at(*sit));
      if (it == by_time.end()) continue;
      for (std::size_t j : it->second)
        out.a[i] =
            std::max(out.a[i], damped_term(P, U.tiles[j], out.a0[j], U.n0, out.a[i]));
    }
  }

  const Rat floor = pow2r(-U.mass_floor_exp);
  for (std::size_t i = 0; i < n; ++i) {
    if (tile_dilate(Rat(100), U.tiles[i]).contains(Rat(0))) {
      out.p_zero.push_back(i);
    } else if (out.a0[i] == 0) {
      out.p_bar_zero.push_back(i);
    } else {
      out.p_main.push_back(i);
      out.bins[weight_of(out.a[i])].push_back(i);
      if (out.a[i] < floor) out.floor_violations.push_back(i);
    }
  }

  for (const auto& [w, idxs] : out.bins) {
    for (std::size_t i : idxs) {
      bool top = true;
      for (std::size_t j : idxs) {
        if (U.tiles[i] != U.tiles[j] && tile_leq(U.tiles[i], U.tiles[j])) {
          top = false;
          break;
        }
      }
      if (top) out.maximal[w].push_back(i);
    }
  }
  return out;
}

}  // namespace tt
