// Rearrangement-invariant functionals: distribution function, decreasing
// rearrangement, Lorentz / Marcinkiewicz norms against a fundamental function,
// the W-functional upper bound, the permutation-infimum V functional, and the
// slowly-divergent growth integral that separates the critical spaces.
// All logs are base 2.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tt/dyadic.hpp"

namespace tt {

// log2 log2 x, clamped to 1 for x <= 2 (guards the domain edge t ~ 1; the
// arguments 4/t, 17/t stay >= 4 in-domain so the clamp never fires there)
double ll2(double x);
// four-fold iterated log2 = ll2(ll2(x)) with the same guard
double l4l2(double x);

struct FundamentalFunction {
  std::string name;
  std::function<double(double)> eval_d;        // t in (0,1]
  std::function<Rat(const Rat&)> eval_exact;   // optional exact path
  std::vector<Rat> grid;                       // extra sup candidates in (0,1]

  double zero_limit = 0.0;                     // value assigned at t = 0

  double at(double t) const { return t == 0 ? zero_limit : eval_d(t); }
  double operator()(const Rat& t) const { return at(to_double(t)); }
};

FundamentalFunction phi_identity();      // phi(t) = t, exact
FundamentalFunction phi_lloglog();       // mu(t) = t ll2(4/t)         (L loglog L)
FundamentalFunction phi_zero();          // phi0(s) = s ll2(17/s) l4l2(17/s)
FundamentalFunction phi_zero_lll_sq();   // phi0(s) * (log2 ll2(4/s))^2, convergent probe

// checks phi > 0 and nondecreasing on a dyadic grid over (0, 1/8]. The literal
// formulas for mu and phi0 dip near t = 1 (the four-fold log of 17/s nearly
// vanishes there); every evaluation in the constructions happens at small t,
// so the monotonicity contract is checked on that range only.
bool phi_monotone_on_grid(const FundamentalFunction& phi, int depth);

// |{|f| > lam}|, exact
Rat distribution(const StepFunction& f, const Rat& lam);

struct Rearrangement {
  std::vector<Rat> breakpoints;  // t_1 < ... < t_m, cumulative measures (t_0 = 0)
  std::vector<Rat> values;       // v_1 > ... > v_m > 0, f* = v_i on [t_{i-1}, t_i)

  Rat value_at(const Rat& t) const;          // f*(t), 0 past the last breakpoint
  Rat partial_integral(const Rat& t) const;  // int_0^t f*
  Rat total_integral() const;
};
Rearrangement rearrange(const StepFunction& f);

// int_0^1 f* d(phi)  =  sum v_i (phi(t_i) - phi(t_{i-1})), phi(0) = 0
double lorentz_norm(const StepFunction& f, const FundamentalFunction& phi);
Rat lorentz_norm_exact(const StepFunction& f, const FundamentalFunction& phi);

// sup_t (1/phi(t)) int_0^t f*, evaluated over rearrangement breakpoints,
// t = 1, and phi's own grid
double marcinkiewicz_norm(const StepFunction& f, const FundamentalFunction& phi);

struct WPart {
  Rat l1;    // > 0
  Rat linf;  // >= l1 on a probability space
};
// sum over positions j=1.. of (1+log2 j) * l1_j * ll2(4 linf_j / l1_j) with the
// parts taken in the given order
double w_norm_upper(const std::vector<WPart>& parts,
                    const std::vector<std::size_t>& ordering);
// minimum over orderings of a fixed decomposition: weights descending against
// (1+log2 j) ascending; an upper bound for the full W-norm infimum
double w_norm_best(const std::vector<WPart>& parts);

// evaluate sum_j a_j log2(sigma(j)+1); sigma[j] in {1..k}, a permutation
double v_norm_eval(const std::vector<double>& weights,
                   const std::vector<int>& sigma);
// exact infimum over permutations via the rearrangement inequality:
// weights sorted descending against log2(2), log2(3), ...
double v_norm(const std::vector<double>& weights);

struct GrowthResult {
  double value = 0;               // integral on [eps, 1]
  bool convergent = false;        // verdict of the cutoff-halving sweep
  std::vector<double> sweep;      // values at eps, eps/2, ..., eps/2^H
  double last_increment = 0;
  double tol = 0;
};
// int_eps^1 phi0(s)/phi(s) ds / (s log2(4/s) ll2(4/s)); the sweep continues
// halving the cutoff 30 more times and flags divergence when increments stay
// above tol while growing
GrowthResult growth_integral(const FundamentalFunction& phi, double eps,
                             double tol = 1.5e-3, int extra_halvings = 30);

}  // namespace tt
