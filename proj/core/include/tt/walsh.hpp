// Exact Walsh system on [0,1): Walsh functions from the bit-parity rule,
// rational wave-packet profiles (the sqrt(2)-power carried as an exponent),
// the partial-sum bitile identity, the product/difference recursions, the
// lacunary Walsh-Carleson operator, its averaged cot-kernel variant, and the
// frequency-column probe contrasting discrete and continuous behavior.
#pragma once

#include <cstdint>
#include <vector>

#include "tt/dyadic.hpp"

namespace tt {

// w_n on the cell: (-1)^(sum of bits of n against the leading bits of the
// cell); 0 outside [0,1). Cell-center evaluation: centers have an odd final
// bit that no Rademacher factor with n < 2^R ever reads, so the value is the
// constant the function takes on the open cell.
int walsh_at_cell(std::int64_t n, std::int64_t R, const Int& cell);
StepFunction walsh(std::int64_t n, std::int64_t R);  // requires 2^R > n

// rational profile of the wave packet 2^{j/2} w_n(2^j x - l) at resolution R:
// the returned function is w_n(2^j x - l) on [l 2^-j, (l+1) 2^-j); the
// sqrt(2)^j factor is bookkept by the caller (squares stay rational)
StepFunction walsh_packet_base(std::int64_t n, std::int64_t l, std::int64_t j,
                               std::int64_t R);
// ||2^{j/2} base||_2^2, exact
Rat packet_l2sq(const StepFunction& base, std::int64_t j);

Rat walsh_coeff(const StepFunction& f, std::int64_t n);  // <f, w_n>

// route A: sum_{k=0}^{n} <f,w_k> w_k
StepFunction partial_sum_direct(const StepFunction& f, std::int64_t n);
// route B: sum over bitiles R with n+1 in omega_{R_u} of the projection onto
// the lower-son packet. The bitile condition reads n+1, not n: the scale-j
// term exists exactly when bit j of n+1 is set, which reproduces
// sum_{k=0}^{n} (checked exact against route A; with the literal n the sum
// ends at n-1 and the conditional-expectation identity fails).
StepFunction partial_sum_bitiles(const StepFunction& f, std::int64_t n);

// conditional expectation onto dyadic cells of scale L (averages)
StepFunction conditional_expectation(const StepFunction& f, std::int64_t L);

// upper/lower-son recursions for the bitile with time [l 2^-j, (l+1) 2^-j)
// and frequency [2^{j+1} m, 2^{j+1}(m+1)):
//   w_{R_u} = (1/sqrt2)(w_{left son} - w_{right son})
//   w_{R_l} = (1/sqrt2)(w_{left son} + w_{right son})
// verified exactly on rational profiles (the sqrt(2) powers cancel)
bool recursions_check(std::int64_t j, std::int64_t l, std::int64_t m,
                      std::int64_t R);

// sum_{n=0}^{2^L-1} w_n == prod_{i=0}^{L-1} (1 + w_{2^i}), exact
bool product_identity(int L, std::int64_t R);
// W_{2^L-1} f - W_{2^L-2^M-1} f equals the Rademacher product kernel applied
// to f, exact (L > M)
bool difference_identity(int L, int M, const StepFunction& f);

// sup_j |W_{n_j} f|, exact
StepFunction c_w(const StepFunction& f, const std::vector<std::int64_t>& seq);

// the single bitile scale selected by literal membership 2^j in omega_{R_u}:
// equals the conditional expectation at scale j (the discrete boundary
// effect: a pure-power frequency sees one scale only)
StepFunction single_scale_model(const StepFunction& f, std::int64_t j);

// averaged Walsh-Carleson model: sup_j |int w_{n_j}(x) w_{n_j}(-y)
// cot(pi(x-y)) f(y) dy|, principal value with a symmetric one-cell exclusion,
// composite midpoint quadrature; evaluated at cell centers
std::vector<double> c_aw(const StepFunction& f,
                         const std::vector<std::int64_t>& seq,
                         int pts_per_cell = 8);

// p.v. int_{[0,1)} g(y) cot(pi(x-y)) dy at x (periodic), excluding |x-y| <
// delta symmetrically; shared by the averaged Walsh model and the direct
// Fourier-side evaluations
double pv_cot_apply(const StepFunction& g, double x, double delta,
                    int pts_per_cell);

// Frequency column at a0: one bitile per scale j in [j_lo, j_hi] with
// bit_j(a0) = 1, upper son containing a0. column_sum accumulates
//   sum_l 2^j <chi_F, base_l> <base_l w_{a0}, chi_E>
// over the column scales; when the column reaches the top bit of a0 this
// telescopes to a single partial-sum inner product <W_n chi_F, w_{a0} chi_E>
// with n+1 = sum of 2^j over the column scales -- the discrete cancellation
// that keeps the column bounded while its continuous counterpart grows
// linearly with height.
struct WalshColumnReport {
  std::int64_t a0 = 0;
  std::vector<std::int64_t> scales;
  Rat column_sum;
  Rat telescoped;
  Rat density_ref;  // sup over column tiles meeting E of int_I chi_F / |I|
  Rat reference;    // density_ref * |E|
  double ratio() const;
};
WalshColumnReport walsh_column(const MeasurableSet& F, const MeasurableSet& E,
                               std::int64_t a0, std::int64_t j_lo,
                               std::int64_t j_hi);

}  // namespace tt
