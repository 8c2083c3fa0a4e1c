// Arbitrary-precision integers and rationals used throughout the core.
// Everything geometric is a dyadic rational; cpp_rational keeps set algebra,
// measures and mass ratios exact so structural checks never need tolerances.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace tt {

// et_off: plain value semantics (no expression templates), so results feed
// std::max / std::sort / structured code without surprises
using Int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                          boost::multiprecision::et_off>;
using Rat = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<
        boost::multiprecision::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

// 2^e as an integer, e >= 0
inline Int pow2i(std::int64_t e) {
  Int r = 1;
  return r << static_cast<unsigned>(e);
}

// 2^e as a rational, e arbitrary sign
inline Rat pow2r(std::int64_t e) {
  if (e >= 0) return Rat(pow2i(e));
  return Rat(1, pow2i(-e));
}

// floor(log2 n) for n > 0
inline std::int64_t floor_log2(const Int& n) {
  return static_cast<std::int64_t>(boost::multiprecision::msb(n));
}

// exact: is n a power of two?
inline bool is_pow2(const Int& n) {
  return n > 0 && (n & (n - 1)) == 0;
}

inline double to_double(const Rat& q) { return q.convert_to<double>(); }
inline double to_double(const Int& n) { return n.convert_to<double>(); }

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline std::string to_string(const Int& n) { return n.str(); }
inline std::string to_string(const Rat& q) {
  if (rat_den(q) == 1) return rat_num(q).str();
  return rat_num(q).str() + "/" + rat_den(q).str();
}

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

// largest m with q an integer multiple of 2^-m, for dyadic q (den a power of 2)
inline std::int64_t dyadic_denom_exp(const Rat& q) {
  return floor_log2(rat_den(q));
}

inline bool is_dyadic(const Rat& q) { return is_pow2(rat_den(q)); }

// q * 2^R, exact when q is dyadic at resolution <= R; asserts exactness
Int scale_to_cells(const Rat& q, std::int64_t R);

}  // namespace tt
