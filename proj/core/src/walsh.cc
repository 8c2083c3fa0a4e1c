#include "tt/walsh.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tt {

namespace {

std::int64_t cells_at(std::int64_t R) { return std::int64_t{1} << R; }

void require_resolution(std::int64_t n, std::int64_t R) {
  if (n < 0) throw std::invalid_argument("walsh: index must be nonnegative");
  if (R < 0 || R > 40) throw std::invalid_argument("walsh: bad resolution");
  if (n >= cells_at(R))
    throw std::invalid_argument("walsh: resolution too coarse for the index");
}

void require_unit_support(const StepFunction& f) {
  if (f.runs().empty()) return;
  if (f.runs().front().begin < 0 ||
      f.runs().back().end > Int(cells_at(f.resolution())))
    throw std::invalid_argument("walsh: support must lie in [0,1)");
}

std::vector<Rat> dense(const StepFunction& f) {
  require_unit_support(f);
  std::vector<Rat> v(static_cast<std::size_t>(cells_at(f.resolution())));
  for (const auto& r : f.runs()) {
    for (Int c = r.begin; c < r.end; ++c)
      v[static_cast<std::size_t>(std::int64_t(c))] = r.value;
  }
  return v;
}

StepFunction undense(std::int64_t R, const std::vector<Rat>& v) {
  std::vector<StepFunction::Run> runs;
  std::int64_t i = 0;
  const std::int64_t n = static_cast<std::int64_t>(v.size());
  while (i < n) {
    if (v[static_cast<std::size_t>(i)] == 0) {
      ++i;
      continue;
    }
    std::int64_t j = i + 1;
    while (j < n && v[static_cast<std::size_t>(j)] == v[static_cast<std::size_t>(i)]) ++j;
    runs.push_back({Int(i), Int(j), v[static_cast<std::size_t>(i)]});
    i = j;
  }
  return StepFunction(R, std::move(runs));
}

int sign_at(std::int64_t n, std::int64_t R, std::int64_t cell) {
  int parity = 0;
  for (int i = 0; (n >> i) != 0; ++i)
    if ((n >> i) & 1) parity ^= static_cast<int>((cell >> (R - 1 - i)) & 1);
  return parity ? -1 : 1;
}

}  // namespace

int walsh_at_cell(std::int64_t n, std::int64_t R, const Int& cell) {
  require_resolution(n, R);
  if (cell < 0 || cell >= Int(cells_at(R))) return 0;
  return sign_at(n, R, std::int64_t(cell));
}

StepFunction walsh(std::int64_t n, std::int64_t R) {
  require_resolution(n, R);
  std::vector<Rat> v(static_cast<std::size_t>(cells_at(R)));
  for (std::int64_t c = 0; c < cells_at(R); ++c)
    v[static_cast<std::size_t>(c)] = sign_at(n, R, c);
  return undense(R, v);
}

StepFunction walsh_packet_base(std::int64_t n, std::int64_t l, std::int64_t j,
                               std::int64_t R) {
  if (j < 0 || j > R) throw std::invalid_argument("walsh packet: bad scale");
  if (l < 0 || l >= cells_at(j))
    throw std::invalid_argument("walsh packet: bad translation");
  require_resolution(n, R - j);
  StepFunction local = walsh(n, R - j);
  std::vector<StepFunction::Run> runs;
  const Int off = Int(l) * pow2i(R - j);
  for (const auto& r : local.runs())
    runs.push_back({r.begin + off, r.end + off, r.value});
  return StepFunction(R, std::move(runs));
}

Rat packet_l2sq(const StepFunction& base, std::int64_t j) {
  Rat acc(0);
  for (const auto& r : base.runs())
    acc += r.value * r.value * Rat(r.end - r.begin);
  return acc * pow2r(j - base.resolution());
}

Rat walsh_coeff(const StepFunction& f, std::int64_t n) {
  require_unit_support(f);
  require_resolution(n, f.resolution());
  const std::int64_t R = f.resolution();
  Rat acc(0);
  for (const auto& r : f.runs())
    for (Int c = r.begin; c < r.end; ++c)
      acc += r.value * sign_at(n, R, std::int64_t(c));
  return acc * pow2r(-R);
}

StepFunction partial_sum_direct(const StepFunction& f, std::int64_t n) {
  require_unit_support(f);
  require_resolution(n, f.resolution());
  const std::int64_t R = f.resolution();
  const std::vector<Rat> fv = dense(f);
  std::vector<Rat> acc(fv.size());
  for (std::int64_t k = 0; k <= n; ++k) {
    Rat coeff(0);
    for (std::int64_t c = 0; c < cells_at(R); ++c)
      coeff += fv[static_cast<std::size_t>(c)] * sign_at(k, R, c);
    coeff *= pow2r(-R);
    if (coeff == 0) continue;
    for (std::int64_t c = 0; c < cells_at(R); ++c)
      acc[static_cast<std::size_t>(c)] += coeff * sign_at(k, R, c);
  }
  return undense(R, acc);
}

StepFunction partial_sum_bitiles(const StepFunction& f, std::int64_t n) {
  require_unit_support(f);
  require_resolution(n, f.resolution());
  const std::int64_t R = f.resolution();
  const std::vector<Rat> fv = dense(f);
  std::vector<Rat> acc(fv.size());
  const std::int64_t np1 = n + 1;
  for (std::int64_t j = 0; (np1 >> j) != 0; ++j) {
    if (!((np1 >> j) & 1)) continue;
    const std::int64_t pkt = (np1 >> j) - 1;  // local index of the lower son
    const std::int64_t w = cells_at(R - j);   // cells per time interval
    for (std::int64_t l = 0; l < cells_at(j); ++l) {
      Rat coeff(0);
      for (std::int64_t c = 0; c < w; ++c)
        coeff += fv[static_cast<std::size_t>(l * w + c)] * sign_at(pkt, R - j, c);
      coeff *= pow2r(-R);
      if (coeff == 0) continue;
      // projection weight 2^j = squared sqrt(2)-power of the packet
      const Rat amp = coeff * pow2r(j);
      for (std::int64_t c = 0; c < w; ++c)
        acc[static_cast<std::size_t>(l * w + c)] += amp * sign_at(pkt, R - j, c);
    }
  }
  return undense(R, acc);
}

StepFunction conditional_expectation(const StepFunction& f, std::int64_t L) {
  require_unit_support(f);
  const std::int64_t R = f.resolution();
  if (L < 0 || L > R) throw std::invalid_argument("walsh: bad expectation scale");
  const std::vector<Rat> fv = dense(f);
  std::vector<Rat> acc(fv.size());
  const std::int64_t w = cells_at(R - L);
  for (std::int64_t l = 0; l < cells_at(L); ++l) {
    Rat mean(0);
    for (std::int64_t c = 0; c < w; ++c)
      mean += fv[static_cast<std::size_t>(l * w + c)];
    mean /= w;
    for (std::int64_t c = 0; c < w; ++c)
      acc[static_cast<std::size_t>(l * w + c)] = mean;
  }
  return undense(R, acc);
}

bool recursions_check(std::int64_t j, std::int64_t l, std::int64_t m,
                      std::int64_t R) {
  if (j < 0 || R < j + 1 || l < 0 || l >= cells_at(j) || m < 0 ||
      m >= cells_at(R - j - 1))
    throw std::invalid_argument("walsh recursion: parameters out of range");
  const StepFunction upper = walsh_packet_base(2 * m + 1, l, j, R);
  const StepFunction lower = walsh_packet_base(2 * m, l, j, R);
  const StepFunction left = walsh_packet_base(m, 2 * l, j + 1, R);
  const StepFunction right = walsh_packet_base(m, 2 * l + 1, j + 1, R);
  // sqrt(2) powers cancel: (sqrt2)^j base = (1/sqrt2)(sqrt2)^{j+1} base
  return upper == left - right && lower == left + right;
}

bool product_identity(int L, std::int64_t R) {
  if (L < 0 || R < L) throw std::invalid_argument("walsh product: bad order");
  StepFunction sum(R);
  for (std::int64_t k = 0; k < cells_at(L); ++k) sum = sum + walsh(k, R);
  StepFunction prod = walsh(0, R);
  for (int i = 0; i < L; ++i)
    prod = pointwise_product(prod, walsh(0, R) + walsh(std::int64_t{1} << i, R));
  return sum == prod;
}

bool difference_identity(int L, int M, const StepFunction& f) {
  if (M < 0 || L <= M) throw std::invalid_argument("walsh difference: need L > M >= 0");
  const std::int64_t R = f.resolution();
  require_resolution(cells_at(L) - 1, R);
  const StepFunction lhs = partial_sum_direct(f, cells_at(L) - 1) -
                           partial_sum_direct(f, cells_at(L) - cells_at(M) - 1);
  // literal kernel: prod_{i=M}^{L-1} r_{2^i}(x) r_{2^i}(y) *
  //                 prod_{i=0}^{M-1} (1 + r_{2^i}(x) r_{2^i}(y))
  const std::vector<Rat> fv = dense(f);
  std::vector<Rat> acc(fv.size());
  for (std::int64_t x = 0; x < cells_at(R); ++x) {
    Rat row(0);
    for (std::int64_t y = 0; y < cells_at(R); ++y) {
      if (fv[static_cast<std::size_t>(y)] == 0) continue;
      std::int64_t k = 1;
      for (int i = M; i < L; ++i)
        k *= sign_at(std::int64_t{1} << i, R, x) * sign_at(std::int64_t{1} << i, R, y);
      for (int i = 0; i < M && k != 0; ++i)
        k *= 1 + sign_at(std::int64_t{1} << i, R, x) * sign_at(std::int64_t{1} << i, R, y);
      if (k != 0) row += Rat(k) * fv[static_cast<std::size_t>(y)];
    }
    acc[static_cast<std::size_t>(x)] = row * pow2r(-R);
  }
  return lhs == undense(R, acc);
}

StepFunction c_w(const StepFunction& f, const std::vector<std::int64_t>& seq) {
  StepFunction out(f.resolution());
  for (std::int64_t n : seq) out = cellwise_max(out, partial_sum_direct(f, n));
  return out;
}

StepFunction single_scale_model(const StepFunction& f, std::int64_t j) {
  require_unit_support(f);
  const std::int64_t R = f.resolution();
  if (j < 0 || j > R) throw std::invalid_argument("walsh: bad model scale");
  // literal membership of 2^j selects the scale-j bitiles only, whose lower
  // sons are the flat packets: the sum collapses to cell averaging
  const std::vector<Rat> fv = dense(f);
  std::vector<Rat> acc(fv.size());
  const std::int64_t w = cells_at(R - j);
  for (std::int64_t l = 0; l < cells_at(j); ++l) {
    Rat coeff(0);
    for (std::int64_t c = 0; c < w; ++c)
      coeff += fv[static_cast<std::size_t>(l * w + c)];
    coeff *= pow2r(-R);
    const Rat amp = coeff * pow2r(j);
    for (std::int64_t c = 0; c < w; ++c)
      acc[static_cast<std::size_t>(l * w + c)] = amp;
  }
  return undense(R, acc);
}

double pv_cot_apply(const StepFunction& g, double x, double delta,
                    int pts_per_cell) {
  if (pts_per_cell <= 0) throw std::invalid_argument("pv quadrature: bad point count");
  require_unit_support(g);
  const std::int64_t R = g.resolution();
  const double h = 1.0 / std::ldexp(double(pts_per_cell), static_cast<int>(R));
  double acc = 0.0;
  for (const auto& r : g.runs()) {
    const double v = to_double(r.value);
    const std::int64_t p0 = std::int64_t(r.begin) * pts_per_cell;
    const std::int64_t p1 = std::int64_t(r.end) * pts_per_cell;
    for (std::int64_t p = p0; p < p1; ++p) {
      const double y = (double(p) + 0.5) * h;
      double d = std::fabs(x - y);
      d = std::min(d, 1.0 - d);
      if (d < delta) continue;
      acc += v * 1.0 / std::tan(M_PI * (x - y));
    }
  }
  return acc * h;
}

std::vector<double> c_aw(const StepFunction& f,
                         const std::vector<std::int64_t>& seq,
                         int pts_per_cell) {
  require_unit_support(f);
  const std::int64_t R = f.resolution();
  const std::int64_t N = cells_at(R);
  const double delta = std::ldexp(1.0, -static_cast<int>(R));
  std::vector<double> out(static_cast<std::size_t>(N), 0.0);
  const std::vector<Rat> fv = dense(f);
  for (std::int64_t n : seq) {
    require_resolution(n, R);
    // g_n(y) = w_n(-y) f(y); -y mod 1 maps cell k onto cell N-1-k
    std::vector<Rat> gv(static_cast<std::size_t>(N));
    for (std::int64_t k = 0; k < N; ++k)
      gv[static_cast<std::size_t>(k)] =
          fv[static_cast<std::size_t>(k)] * sign_at(n, R, N - 1 - k);
    const StepFunction g = undense(R, gv);
    for (std::int64_t c = 0; c < N; ++c) {
      const double x = (2.0 * double(c) + 1.0) * std::ldexp(1.0, -static_cast<int>(R) - 1);
      const double val =
          std::fabs(double(sign_at(n, R, c)) * pv_cot_apply(g, x, delta, pts_per_cell));
      auto& slot = out[static_cast<std::size_t>(c)];
      slot = std::max(slot, val);
    }
  }
  return out;
}

double WalshColumnReport::ratio() const {
  if (reference == 0)
    return column_sum == 0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::fabs(to_double(column_sum / reference));
}

WalshColumnReport walsh_column(const MeasurableSet& F, const MeasurableSet& E,
                               std::int64_t a0, std::int64_t j_lo,
                               std::int64_t j_hi) {
  const std::int64_t R = std::max(F.resolution(), E.resolution());
  if (a0 < 1 || a0 >= cells_at(R))
    throw std::invalid_argument("walsh column: frequency out of range");
  if (j_lo < 0 || j_hi < j_lo || a0 >= cells_at(j_hi + 1))
    throw std::invalid_argument(
        "walsh column: scales must span up to the top bit of the frequency");
  const StepFunction chiF = StepFunction::indicator(F.refined(R));
  require_unit_support(chiF);
  // w_{a0} restricted to E
  std::vector<Rat> wev(static_cast<std::size_t>(cells_at(R)));
  for (const auto& run : E.refined(R).runs())
    for (Int c = run.begin; c < run.end; ++c)
      wev[static_cast<std::size_t>(std::int64_t(c))] = sign_at(a0, R, std::int64_t(c));
  const StepFunction wE = undense(R, wev);
  require_unit_support(StepFunction::indicator(E.refined(R)));

  WalshColumnReport rep;
  rep.a0 = a0;
  rep.column_sum = Rat(0);
  rep.telescoped = Rat(0);
  rep.density_ref = Rat(0);
  std::int64_t n_plus_1 = 0;
  const MeasurableSet ER = E.refined(R);
  const MeasurableSet FR = F.refined(R);
  for (std::int64_t j = j_lo; j <= j_hi; ++j) {
    if (!((a0 >> j) & 1)) continue;
    rep.scales.push_back(j);
    n_plus_1 += cells_at(j);
    const std::int64_t pkt = (a0 >> j) - 1;
    for (std::int64_t l = 0; l < cells_at(j); ++l) {
      const StepFunction base = walsh_packet_base(pkt, l, j, R);
      const Rat t1 = pointwise_product(chiF, base).integral();
      const Rat t2 = pointwise_product(base, wE).integral();
      if (t1 != 0 && t2 != 0) rep.column_sum += pow2r(j) * t1 * t2;
      // density reference over column tiles meeting E
      const DyadicInterval I{j, Int(l)};
      const MeasurableSet Icells = MeasurableSet::from_dyadic(R, I);
      if (!Icells.disjoint_with(ER)) {
        const Rat dens = set_intersect(FR, Icells).measure() / I.length();
        rep.density_ref = std::max(rep.density_ref, dens);
      }
    }
  }
  rep.reference = rep.density_ref * ER.measure();
  if (n_plus_1 > 0) {
    const StepFunction W = partial_sum_bitiles(chiF, n_plus_1 - 1);
    rep.telescoped = pointwise_product(W, wE).integral();
  }
  return rep;
}

}  // namespace tt
