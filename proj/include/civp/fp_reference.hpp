#pragma once

// Standalone IEEE-754 binary multiply, written from the standard as the
// reference the tiled implementation is checked against. Kept deliberately
// disjoint from the rest of the library: raw 64-bit limbs and shift-and-jam
// rounding in the softfloat tradition, no WideUint, no tiles, no plans.
//
// Conventions (shared with civp::fp_multiply so comparisons are bit-exact):
//   - tininess detected after normalization, before rounding
//   - underflow flag only when tiny and inexact
//   - NaN result = first NaN operand's pattern with the quiet bit set
//   - inf * 0 = default quiet NaN (sign 0, quiet bit only), invalid flag

#include <cstdint>

namespace civp::ref {

enum class RefRounding { NearestEven, TowardZero, TowardPositive, TowardNegative };

struct RefFlags {
  bool invalid = false;
  bool overflow = false;
  bool underflow = false;
  bool inexact = false;
};

// Raw encoding, little-endian 64-bit halves; hi is 0 for 32/64-bit formats.
struct RefBits {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
};

struct RefFormat {
  int exp_bits;
  int frac_bits;  // total = 1 + exp_bits + frac_bits, <= 128
};

inline constexpr RefFormat kRefSingle{8, 23};
inline constexpr RefFormat kRefDouble{11, 52};
inline constexpr RefFormat kRefQuad{15, 112};

namespace detail {

using u128 = unsigned __int128;

inline u128 to_u128(RefBits b) { return (static_cast<u128>(b.hi) << 64) | b.lo; }

inline RefBits to_bits(u128 v) {
  return RefBits{static_cast<std::uint64_t>(v), static_cast<std::uint64_t>(v >> 64)};
}

struct U256 {
  std::uint64_t w[4];  // little-endian
};

inline U256 mul_u128(u128 a, u128 b) {
  const std::uint64_t a0 = static_cast<std::uint64_t>(a), a1 = static_cast<std::uint64_t>(a >> 64);
  const std::uint64_t b0 = static_cast<std::uint64_t>(b), b1 = static_cast<std::uint64_t>(b >> 64);
  const u128 p00 = static_cast<u128>(a0) * b0;
  const u128 p01 = static_cast<u128>(a0) * b1;
  const u128 p10 = static_cast<u128>(a1) * b0;
  const u128 p11 = static_cast<u128>(a1) * b1;
  U256 r{};
  r.w[0] = static_cast<std::uint64_t>(p00);
  u128 c = (p00 >> 64) + static_cast<std::uint64_t>(p01) + static_cast<std::uint64_t>(p10);
  r.w[1] = static_cast<std::uint64_t>(c);
  c = (c >> 64) + (p01 >> 64) + (p10 >> 64) + static_cast<std::uint64_t>(p11);
  r.w[2] = static_cast<std::uint64_t>(c);
  c = (c >> 64) + (p11 >> 64);
  r.w[3] = static_cast<std::uint64_t>(c);
  return r;
}

inline bool is_zero256(const U256& p) { return (p.w[0] | p.w[1] | p.w[2] | p.w[3]) == 0; }

inline int msb256(const U256& p) {
  for (int i = 3; i >= 0; --i) {
    if (p.w[i]) return i * 64 + 63 - __builtin_clzll(p.w[i]);
  }
  return -1;
}

// Shift right, ORing every shifted-out bit into bit 0. Result must fit 128 bits.
inline u128 shr_jam256(const U256& p, int n) {
  if (n >= 256) return is_zero256(p) ? 0 : 1;
  bool lost = false;
  U256 q = p;
  int whole = n / 64, rem = n % 64;
  for (int i = 0; i < whole; ++i) {
    if (q.w[0]) lost = true;
    q = U256{{q.w[1], q.w[2], q.w[3], 0}};
  }
  if (rem) {
    std::uint64_t carry = 0;
    lost = lost || ((q.w[0] & ((1ull << rem) - 1)) != 0);
    for (int i = 3; i >= 0; --i) {
      std::uint64_t nw = (q.w[i] >> rem) | carry;
      carry = q.w[i] << (64 - rem);
      q.w[i] = nw;
    }
  }
  u128 out = (static_cast<u128>(q.w[1]) << 64) | q.w[0];
  if (lost) out |= 1;
  return out;
}

}  // namespace detail

// Multiply two encodings of the same format. Flags are ORed into `fl`.
inline RefBits ref_multiply(const RefFormat& fmt, RefBits a, RefBits b, RefRounding rm,
                            RefFlags& fl) {
  using namespace detail;
  const int frac = fmt.frac_bits;
  const int sig = frac + 1;
  const int total = 1 + fmt.exp_bits + frac;
  const int bias = (1 << (fmt.exp_bits - 1)) - 1;
  const int emin = 1 - bias, emax = bias;

  const u128 av = to_u128(a), bv = to_u128(b);
  const u128 frac_mask = (static_cast<u128>(1) << frac) - 1;
  const u128 quiet_bit = static_cast<u128>(1) << (frac - 1);
  const std::uint32_t emask = (1u << fmt.exp_bits) - 1;

  const bool sa = ((av >> (total - 1)) & 1) != 0, sb = ((bv >> (total - 1)) & 1) != 0;
  const std::uint32_t ea_field = static_cast<std::uint32_t>((av >> frac)) & emask;
  const std::uint32_t eb_field = static_cast<std::uint32_t>((bv >> frac)) & emask;
  const u128 fa = av & frac_mask, fb = bv & frac_mask;
  const bool sign = sa != sb;

  const bool a_nan = ea_field == emask && fa != 0, b_nan = eb_field == emask && fb != 0;
  const bool a_inf = ea_field == emask && fa == 0, b_inf = eb_field == emask && fb == 0;
  const bool a_zero = ea_field == 0 && fa == 0, b_zero = eb_field == 0 && fb == 0;

  const u128 sign_bit = static_cast<u128>(1) << (total - 1);
  const u128 exp_all = static_cast<u128>(emask) << frac;
  const auto inf_of = [&](bool s) { return to_bits((s ? sign_bit : 0) | exp_all); };
  const auto max_normal_of = [&](bool s) {
    return to_bits((s ? sign_bit : 0) | (static_cast<u128>(emask - 1) << frac) | frac_mask);
  };

  if (a_nan || b_nan) {
    const bool a_snan = a_nan && !(fa & quiet_bit), b_snan = b_nan && !(fb & quiet_bit);
    if (a_snan || b_snan) fl.invalid = true;
    return to_bits((a_nan ? av : bv) | quiet_bit);
  }
  if ((a_inf && b_zero) || (b_inf && a_zero)) {
    fl.invalid = true;
    return to_bits(exp_all | quiet_bit);  // default quiet NaN
  }
  if (a_inf || b_inf) return inf_of(sign);
  if (a_zero || b_zero) return to_bits(sign ? sign_bit : 0);

  const int ea = ea_field ? static_cast<int>(ea_field) - bias : emin;
  const int eb = eb_field ? static_cast<int>(eb_field) - bias : emin;
  const u128 hidden = static_cast<u128>(1) << frac;
  const u128 ma = fa | (ea_field ? hidden : 0);
  const u128 mb = fb | (eb_field ? hidden : 0);

  const U256 prod = mul_u128(ma, mb);
  const int t = msb256(prod);
  const int exp_lead = ea + eb - 2 * frac + t;

  if (exp_lead > emax) {
    fl.overflow = true;
    fl.inexact = true;
    if (rm == RefRounding::NearestEven) return inf_of(sign);
    if (rm == RefRounding::TowardZero) return max_normal_of(sign);
    if (rm == RefRounding::TowardPositive) return sign ? max_normal_of(true) : inf_of(false);
    return sign ? inf_of(true) : max_normal_of(false);
  }

  const bool tiny = exp_lead < emin;
  int shift = t - (sig + 1);
  if (tiny) shift += emin - exp_lead;
  int e_res = tiny ? emin : exp_lead;

  // Q: candidate mantissa in bits [2, sig+1], round bit 1, sticky bit 0.
  u128 q;
  if (shift > 0) {
    q = shr_jam256(prod, shift);
  } else {
    q = ((static_cast<u128>(prod.w[1]) << 64) | prod.w[0]) << (-shift);
  }

  const unsigned round_bits = static_cast<unsigned>(q & 3);
  const bool inexact = round_bits != 0;
  u128 m = q >> 2;
  bool up = false;
  switch (rm) {
    case RefRounding::NearestEven:
      up = round_bits == 3 || (round_bits == 2 && (m & 1));
      break;
    case RefRounding::TowardZero:
      break;
    case RefRounding::TowardPositive:
      up = !sign && inexact;
      break;
    case RefRounding::TowardNegative:
      up = sign && inexact;
      break;
  }
  if (up) m += 1;
  if (m >> sig) {
    m >>= 1;
    e_res += 1;
  }

  if (e_res > emax) {  // post-rounding carry pushed past the top
    fl.overflow = true;
    fl.inexact = true;
    if (rm == RefRounding::NearestEven) return inf_of(sign);
    if (rm == RefRounding::TowardZero) return max_normal_of(sign);
    if (rm == RefRounding::TowardPositive) return sign ? max_normal_of(true) : inf_of(false);
    return sign ? inf_of(true) : max_normal_of(false);
  }

  fl.inexact = fl.inexact || inexact;
  fl.underflow = fl.underflow || (tiny && inexact);

  u128 out = sign ? sign_bit : 0;
  if (m == 0) return to_bits(out);
  if (m & hidden) {
    out |= static_cast<u128>(static_cast<std::uint32_t>(e_res + bias)) << frac;
    out |= m & frac_mask;
  } else {
    out |= m;  // subnormal: exponent field 0
  }
  return to_bits(out);
}

}  // namespace civp::ref
