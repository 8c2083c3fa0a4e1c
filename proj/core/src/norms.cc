#include "tt/norms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace tt {

double ll2(double x) {
  if (x <= 2.0) return 1.0;
  return std::log2(std::log2(x));
}

double l4l2(double x) { return ll2(ll2(x)); }

FundamentalFunction phi_identity() {
  FundamentalFunction phi;
  phi.name = "identity";
  phi.eval_d = [](double t) { return t; };
  phi.eval_exact = [](const Rat& t) { return t; };
  return phi;
}

FundamentalFunction phi_lloglog() {
  FundamentalFunction phi;
  phi.name = "lloglog";
  phi.eval_d = [](double t) { return t * ll2(4.0 / t); };
  return phi;
}

FundamentalFunction phi_zero() {
  FundamentalFunction phi;
  phi.name = "phi0";
  phi.eval_d = [](double s) { return s * ll2(17.0 / s) * l4l2(17.0 / s); };
  return phi;
}

FundamentalFunction phi_zero_lll_sq() {
  FundamentalFunction phi;
  phi.name = "phi0_lll_sq";
  phi.eval_d = [](double s) {
    double lll = std::log2(ll2(4.0 / s));
    return s * ll2(17.0 / s) * l4l2(17.0 / s) * lll * lll;
  };
  return phi;
}

bool phi_monotone_on_grid(const FundamentalFunction& phi, int depth) {
  const std::int64_t n = std::int64_t{1} << depth;
  double prev = 0.0;
  for (std::int64_t i = 1; i <= n / 8; ++i) {
    const double v = phi.at(double(i) / double(n));
    if (!(v > 0.0) || v + 1e-15 < prev) return false;
    prev = v;
  }
  return true;
}

Rat distribution(const StepFunction& f, const Rat& lam) {
  if (lam < 0) throw std::invalid_argument("distribution: level must be >= 0");
  return f.abs().super_level(lam, /*strict=*/true).measure();
}

Rat Rearrangement::value_at(const Rat& t) const {
  if (t < 0) throw std::invalid_argument("rearrangement: t must be >= 0");
  for (std::size_t i = 0; i < breakpoints.size(); ++i)
    if (t < breakpoints[i]) return values[i];
  return Rat(0);
}

Rat Rearrangement::partial_integral(const Rat& t) const {
  Rat acc(0);
  Rat prev(0);
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (t <= breakpoints[i]) {
      if (t > prev) acc += values[i] * (t - prev);
      return acc;
    }
    acc += values[i] * (breakpoints[i] - prev);
    prev = breakpoints[i];
  }
  return acc;
}

Rat Rearrangement::total_integral() const {
  Rat acc(0);
  Rat prev(0);
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    acc += values[i] * (breakpoints[i] - prev);
    prev = breakpoints[i];
  }
  return acc;
}

Rearrangement rearrange(const StepFunction& f) {
  const StepFunction a = f.abs();
  const Rat cell = pow2r(-a.resolution());
  std::map<Rat, Rat, std::greater<Rat>> mass;  // value -> measure, descending
  for (const auto& run : a.runs())
    mass[run.value] += Rat(run.end - run.begin) * cell;
  Rearrangement r;
  Rat cum(0);
  for (const auto& [v, m] : mass) {
    if (v == 0) continue;
    cum += m;
    r.values.push_back(v);
    r.breakpoints.push_back(cum);
  }
  return r;
}

double lorentz_norm(const StepFunction& f, const FundamentalFunction& phi) {
  const Rearrangement r = rearrange(f);
  double acc = 0.0;
  double prev_phi = 0.0;
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    const double cur_phi = phi(r.breakpoints[i]);
    acc += to_double(r.values[i]) * (cur_phi - prev_phi);
    prev_phi = cur_phi;
  }
  return acc;
}

Rat lorentz_norm_exact(const StepFunction& f, const FundamentalFunction& phi) {
  if (!phi.eval_exact)
    throw std::invalid_argument("lorentz_norm_exact: phi has no exact evaluator");
  const Rearrangement r = rearrange(f);
  Rat acc(0);
  Rat prev_phi(0);
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    const Rat cur_phi = phi.eval_exact(r.breakpoints[i]);
    acc += r.values[i] * (cur_phi - prev_phi);
    prev_phi = cur_phi;
  }
  return acc;
}

double marcinkiewicz_norm(const StepFunction& f, const FundamentalFunction& phi) {
  const Rearrangement r = rearrange(f);
  std::vector<Rat> cand;
  for (const Rat& t : r.breakpoints)
    if (t > 0 && t <= 1) cand.push_back(t);
  cand.push_back(Rat(1));
  for (const Rat& t : phi.grid)
    if (t > 0 && t <= 1) cand.push_back(t);
  double best = 0.0;
  for (const Rat& t : cand) {
    const double denom = phi(t);
    if (!(denom > 0.0)) continue;
    best = std::max(best, to_double(r.partial_integral(t)) / denom);
  }
  return best;
}

namespace {

double w_part_term(const WPart& p) {
  if (p.l1 <= 0) throw std::invalid_argument("w_norm: part with nonpositive L1");
  return to_double(p.l1) * ll2(to_double(4 * p.linf / p.l1));
}

}  // namespace

double w_norm_upper(const std::vector<WPart>& parts,
                    const std::vector<std::size_t>& ordering) {
  if (ordering.size() != parts.size())
    throw std::invalid_argument("w_norm_upper: ordering size mismatch");
  std::vector<bool> seen(parts.size(), false);
  double acc = 0.0;
  for (std::size_t j = 0; j < ordering.size(); ++j) {
    const std::size_t idx = ordering[j];
    if (idx >= parts.size() || seen[idx])
      throw std::invalid_argument("w_norm_upper: ordering is not a permutation");
    seen[idx] = true;
    acc += (1.0 + std::log2(double(j + 1))) * w_part_term(parts[idx]);
  }
  return acc;
}

double w_norm_best(const std::vector<WPart>& parts) {
  std::vector<double> terms(parts.size());
  for (std::size_t i = 0; i < parts.size(); ++i) terms[i] = w_part_term(parts[i]);
  std::vector<std::size_t> order(parts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // largest contribution gets the smallest position factor
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return terms[a] > terms[b]; });
  return w_norm_upper(parts, order);
}

double v_norm_eval(const std::vector<double>& weights,
                   const std::vector<int>& sigma) {
  if (sigma.size() != weights.size())
    throw std::invalid_argument("v_norm_eval: sigma size mismatch");
  double acc = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j)
    acc += weights[j] * std::log2(double(sigma[j] + 1));
  return acc;
}

double v_norm(const std::vector<double>& weights) {
  const std::size_t k = weights.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return weights[a] > weights[b];
  });
  std::vector<int> sigma(k);
  for (std::size_t pos = 0; pos < k; ++pos) sigma[order[pos]] = int(pos) + 1;
  return v_norm_eval(weights, sigma);
}

namespace {

// integrand after s = 2^-u: ln2 * [phi0/phi](2^-u) / ((u+2) ll2(2^(u+2)))
double growth_integrand_u(const FundamentalFunction& phi, double u) {
  static const FundamentalFunction phi0 = phi_zero();
  const double s = std::exp2(-u);
  const double ratio = phi0.at(s) / phi.at(s);
  return std::log(2.0) * ratio / ((u + 2.0) * ll2(std::exp2(u + 2.0)));
}

double growth_panel(const FundamentalFunction& phi, double u0, double u1) {
  constexpr int kPoints = 64;
  const double h = (u1 - u0) / kPoints;
  double acc = 0.0;
  for (int i = 0; i < kPoints; ++i)
    acc += growth_integrand_u(phi, u0 + (i + 0.5) * h);
  return acc * h;
}

}  // namespace

GrowthResult growth_integral(const FundamentalFunction& phi, double eps,
                             double tol, int extra_halvings) {
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("growth_integral: eps must lie in (0,1)");
  GrowthResult res;
  res.tol = tol;
  const double U0 = -std::log2(eps);
  // integral on [eps, 1], panel per unit of u plus the fractional remainder
  double acc = 0.0;
  double u = 0.0;
  while (u + 1.0 <= U0) {
    acc += growth_panel(phi, u, u + 1.0);
    u += 1.0;
  }
  if (u < U0) acc += growth_panel(phi, u, U0);
  res.value = acc;
  res.sweep.push_back(acc);
  bool growing = true;
  double inc = 0.0;
  for (int k = 0; k < extra_halvings; ++k) {
    inc = growth_panel(phi, U0 + k, U0 + k + 1);
    if (!(inc > 0.0)) growing = false;
    acc += inc;
    res.sweep.push_back(acc);
  }
  res.last_increment = inc;
  res.convergent = !(growing && inc > tol);
  return res;
}

}  // namespace tt
