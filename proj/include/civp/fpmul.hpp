#pragma once

// IEEE-754 multiplication (single / double / quadruple) with the significand
// product routed through the tile partition plans. Full packing/unpacking,
// gradual underflow, four rounding modes, and exception flags.
//
// Conventions (must stay in sync with civp::ref::ref_multiply):
//   - tininess detected after normalization, before rounding
//   - underflow flag only when tiny and inexact
//   - NaN result = first NaN operand's pattern with the quiet bit set
//   - inf * 0 = default quiet NaN (sign 0, quiet bit only), invalid flag

#include <string>
#include <string_view>

#include "civp/error.hpp"
#include "civp/partition.hpp"
#include "civp/wideint.hpp"

namespace civp {

enum class FpClass { Zero, Subnormal, Normal, Infinity, NaN };

enum class RoundingMode { NearestEven, TowardZero, TowardPositive, TowardNegative };

struct FpFormat {
  std::string name;
  int total_bits = 0;
  int exp_bits = 0;
  int frac_bits = 0;

  int sig_bits() const { return frac_bits + 1; }
  int bias() const { return (1 << (exp_bits - 1)) - 1; }
  int emin() const { return 1 - bias(); }
  int emax() const { return bias(); }

  friend bool operator==(const FpFormat& a, const FpFormat& b) {
    return a.total_bits == b.total_bits && a.exp_bits == b.exp_bits &&
           a.frac_bits == b.frac_bits;
  }

  static const FpFormat& binary32() {
    static const FpFormat f{"single", 32, 8, 23};
    return f;
  }
  static const FpFormat& binary64() {
    static const FpFormat f{"double", 64, 11, 52};
    return f;
  }
  static const FpFormat& binary128() {
    static const FpFormat f{"quad", 128, 15, 112};
    return f;
  }

  static const FpFormat* by_name(std::string_view name) {
    if (name == "single") return &binary32();
    if (name == "double") return &binary64();
    if (name == "quad") return &binary128();
    return nullptr;
  }
};

struct FpValue {
  FpFormat format;
  WideUint bits;
};

struct Decoded {
  FpClass cls = FpClass::Zero;
  bool negative = false;
  int exponent = 0;        // unbiased; 1-bias for subnormals; 0 for non-finite
  WideUint significand{1};  // sig_bits wide; hidden bit set for normals
};

struct FpFlags {
  bool invalid = false;
  bool overflow = false;
  bool underflow = false;
  bool inexact = false;

  bool any() const { return invalid || overflow || underflow || inexact; }

  std::string to_string() const {
    std::string s;
    const auto add = [&s](const char* name) {
      if (!s.empty()) s += ' ';
      s += name;
    };
    if (invalid) add("invalid");
    if (overflow) add("overflow");
    if (underflow) add("underflow");
    if (inexact) add("inexact");
    return s.empty() ? "none" : s;
  }

  friend bool operator==(const FpFlags& a, const FpFlags& b) {
    return a.invalid == b.invalid && a.overflow == b.overflow && a.underflow == b.underflow &&
           a.inexact == b.inexact;
  }
};

struct FpResult {
  FpValue value;
  FpFlags flags;
};

// Strict interchange form: exactly total_bits/4 hex digits.
inline FpValue fp_from_hex(const FpFormat& fmt, std::string_view hex) {
  if (static_cast<int>(hex.size()) != fmt.total_bits / 4) {
    throw ParseError("format " + fmt.name + " needs exactly " +
                     std::to_string(fmt.total_bits / 4) + " hex digits, got " +
                     std::to_string(hex.size()));
  }
  return FpValue{fmt, WideUint::from_hex(hex, fmt.total_bits)};
}

inline Decoded fp_decode(const FpValue& v) {
  const FpFormat& f = v.format;
  Decoded d;
  d.negative = v.bits.bit(f.total_bits - 1);
  const std::uint64_t e_field = v.bits.slice(f.frac_bits, f.exp_bits).to_u64();
  const std::uint64_t e_mask = (1ull << f.exp_bits) - 1;
  const WideUint frac = v.bits.slice(0, f.frac_bits);
  d.significand = frac.zero_extend(f.sig_bits());
  if (e_field == 0) {
    if (frac.is_zero()) {
      d.cls = FpClass::Zero;
    } else {
      d.cls = FpClass::Subnormal;
      d.exponent = f.emin();
    }
  } else if (e_field == e_mask) {
    d.cls = frac.is_zero() ? FpClass::Infinity : FpClass::NaN;
  } else {
    d.cls = FpClass::Normal;
    d.exponent = static_cast<int>(e_field) - f.bias();
    d.significand = d.significand.add_shifted(WideUint::from_u64(1, 1), f.frac_bits);
  }
  return d;
}

namespace detail {

inline WideUint one_bit(int position, int width) {
  return WideUint(width).add_shifted(WideUint::from_u64(1, 1), position);
}

inline WideUint packed_bits(const FpFormat& f, bool negative, std::uint64_t e_field,
                            const WideUint& frac) {
  WideUint bits = frac.zero_extend(f.total_bits);
  if (e_field) bits = bits.add_shifted(WideUint::from_u64(e_field, f.exp_bits), f.frac_bits);
  if (negative) bits = bits.add_shifted(WideUint::from_u64(1, 1), f.total_bits - 1);
  return bits;
}

inline FpValue zero_value(const FpFormat& f, bool negative) {
  return {f, packed_bits(f, negative, 0, WideUint(f.frac_bits))};
}

inline FpValue inf_value(const FpFormat& f, bool negative) {
  return {f, packed_bits(f, negative, (1ull << f.exp_bits) - 1, WideUint(f.frac_bits))};
}

inline FpValue max_normal_value(const FpFormat& f, bool negative) {
  return {f, packed_bits(f, negative, (1ull << f.exp_bits) - 2, WideUint::ones(f.frac_bits))};
}

inline FpValue default_qnan(const FpFormat& f) {
  return {f, packed_bits(f, false, (1ull << f.exp_bits) - 1, one_bit(f.frac_bits - 1, f.frac_bits))};
}

}  // namespace detail

inline FpValue fp_encode(FpClass cls, bool negative, int exponent, const WideUint& significand,
                         const FpFormat& f) {
  using namespace detail;
  const int frac = f.frac_bits;
  switch (cls) {
    case FpClass::Zero:
      if (!significand.is_zero()) throw RangeError("zero with nonzero significand");
      return zero_value(f, negative);
    case FpClass::Infinity:
      if (!significand.is_zero()) throw RangeError("infinity with nonzero significand");
      return inf_value(f, negative);
    case FpClass::NaN:
      if (significand.is_zero()) throw RangeError("NaN needs a nonzero payload");
      if (significand.msb_index() >= frac) throw RangeError("NaN payload exceeds fraction field");
      return {f, packed_bits(f, negative, (1ull << f.exp_bits) - 1, significand.slice(0, frac))};
    case FpClass::Subnormal:
      if (exponent != f.emin()) {
        throw RangeError("subnormal exponent must be " + std::to_string(f.emin()));
      }
      if (significand.is_zero()) throw RangeError("subnormal needs a nonzero significand");
      if (significand.msb_index() >= frac) throw RangeError("subnormal with hidden bit set");
      return {f, packed_bits(f, negative, 0, significand.slice(0, frac))};
    case FpClass::Normal: {
      if (exponent < f.emin() || exponent > f.emax()) {
        throw RangeError("normal exponent " + std::to_string(exponent) +
                         " outside [" + std::to_string(f.emin()) + "," +
                         std::to_string(f.emax()) + "]");
      }
      if (significand.msb_index() != frac) {
        throw RangeError("normal significand must have the hidden bit as its top bit");
      }
      const std::uint64_t e_field = static_cast<std::uint64_t>(exponent + f.bias());
      return {f, packed_bits(f, negative, e_field, significand.slice(0, frac))};
    }
  }
  throw RangeError("unreachable class");
}

// The significand plan each format's product runs through: one 24x24 tile for
// single, p57 for double, p114 for quad.
inline const PartitionPlan& significand_plan(const FpFormat& f) {
  if (f == FpFormat::binary32()) {
    static const PartitionPlan plan = plan_generic(24, 24, *find_tileset("civp"));
    return plan;
  }
  if (f == FpFormat::binary64()) {
    static const PartitionPlan plan = plan_p57();
    return plan;
  }
  if (f == FpFormat::binary128()) {
    static const PartitionPlan plan = plan_p114();
    return plan;
  }
  throw ContractError("no significand plan for format " + f.name);
}

// Exact 2*sig_bits product of two significands via the format's plan. The
// plan's padded product is wider; the pad-derived top bits are checked to be
// zero before narrowing, not assumed.
inline WideUint sig_multiply(const WideUint& a_sig, const WideUint& b_sig, const FpFormat& f) {
  const int sig = f.sig_bits();
  if (a_sig.width() != sig || b_sig.width() != sig) {
    throw ContractError("significand widths " + std::to_string(a_sig.width()) + "x" +
                        std::to_string(b_sig.width()) + " do not match format " + f.name +
                        " (" + std::to_string(sig) + ")");
  }
  const WideUint full = execute_plan(significand_plan(f), a_sig, b_sig);
  const int want = 2 * sig;
  if (full.width() == want) return full;
  if (full.msb_index() >= want) {
    throw Error("internal: pad-derived product bits nonzero in " + f.name + " plan");
  }
  return full.slice(0, want);
}

inline FpResult fp_multiply(const FpValue& a, const FpValue& b,
                            RoundingMode mode = RoundingMode::NearestEven) {
  using namespace detail;
  const FpFormat& f = a.format;
  if (!(f == b.format)) {
    throw ContractError("format mismatch: " + a.format.name + " vs " + b.format.name);
  }
  const int sig = f.sig_bits(), frac = f.frac_bits;
  const Decoded da = fp_decode(a), db = fp_decode(b);
  const bool sign = da.negative != db.negative;
  FpFlags fl;

  if (da.cls == FpClass::NaN || db.cls == FpClass::NaN) {
    const bool a_snan = da.cls == FpClass::NaN && !da.significand.bit(frac - 1);
    const bool b_snan = db.cls == FpClass::NaN && !db.significand.bit(frac - 1);
    fl.invalid = a_snan || b_snan;
    const FpValue& first = da.cls == FpClass::NaN ? a : b;
    WideUint bits = first.bits;
    if (!bits.bit(frac - 1)) bits = bits.add_shifted(WideUint::from_u64(1, 1), frac - 1);
    return {{f, bits}, fl};
  }
  if ((da.cls == FpClass::Infinity && db.cls == FpClass::Zero) ||
      (da.cls == FpClass::Zero && db.cls == FpClass::Infinity)) {
    fl.invalid = true;
    return {default_qnan(f), fl};
  }
  if (da.cls == FpClass::Infinity || db.cls == FpClass::Infinity) {
    return {inf_value(f, sign), fl};
  }
  if (da.cls == FpClass::Zero || db.cls == FpClass::Zero) {
    return {zero_value(f, sign), fl};
  }

  const WideUint product = sig_multiply(da.significand, db.significand, f);
  const int t = product.msb_index();  // >= 0: both significands nonzero
  const int exp_lead = da.exponent + db.exponent + (t - 2 * frac);

  const auto overflowed = [&]() -> FpResult {
    fl.overflow = true;
    fl.inexact = true;
    switch (mode) {
      case RoundingMode::NearestEven:
        return {inf_value(f, sign), fl};
      case RoundingMode::TowardZero:
        return {max_normal_value(f, sign), fl};
      case RoundingMode::TowardPositive:
        return {sign ? max_normal_value(f, true) : inf_value(f, false), fl};
      case RoundingMode::TowardNegative:
        return {sign ? inf_value(f, true) : max_normal_value(f, false), fl};
    }
    throw Error("unreachable rounding mode");
  };

  if (exp_lead > f.emax()) return overflowed();

  const bool tiny = exp_lead < f.emin();
  const int k = t - (sig - 1) + (tiny ? f.emin() - exp_lead : 0);  // lowest kept product bit
  int e_res = tiny ? f.emin() : exp_lead;

  WideUint kept(sig);
  bool guard = false, sticky = false;
  if (k <= 0) {
    kept = product.shifted_left(-k).slice(0, sig);  // exact, top stays clear
  } else if (k < 2 * sig) {
    const int len = 2 * sig - k < sig ? 2 * sig - k : sig;
    kept = product.slice(k, len).zero_extend(sig);
    guard = product.bit(k - 1);
    sticky = product.any_below(k - 1);
  } else if (k == 2 * sig) {
    guard = product.bit(2 * sig - 1);
    sticky = product.any_below(2 * sig - 1);
  } else {
    sticky = !product.is_zero();
  }

  const bool inexact = guard || sticky;
  bool round_up = false;
  switch (mode) {
    case RoundingMode::NearestEven:
      round_up = guard && (sticky || kept.bit(0));
      break;
    case RoundingMode::TowardZero:
      break;
    case RoundingMode::TowardPositive:
      round_up = !sign && inexact;
      break;
    case RoundingMode::TowardNegative:
      round_up = sign && inexact;
      break;
  }

  WideUint mantissa = kept;
  if (round_up) {
    const WideUint incremented =
        kept.zero_extend(sig + 1).add_shifted(WideUint::from_u64(1, 1), 0);
    if (incremented.bit(sig)) {
      mantissa = one_bit(sig - 1, sig);  // carry collapsed to a power of two
      e_res += 1;
    } else {
      mantissa = incremented.slice(0, sig);
    }
  }

  if (e_res > f.emax()) return overflowed();

  fl.inexact = inexact;
  fl.underflow = tiny && inexact;

  if (mantissa.is_zero()) return {zero_value(f, sign), fl};
  if (mantissa.bit(sig - 1)) {
    return {fp_encode(FpClass::Normal, sign, e_res, mantissa, f), fl};
  }
  return {fp_encode(FpClass::Subnormal, sign, f.emin(), mantissa, f), fl};
}

}  // namespace civp
