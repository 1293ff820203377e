#pragma once

// WideUint: unsigned integers with an explicit declared bit width, the
// substrate for all significand arithmetic. Widths are checked on every
// operation; overflow is always an error, never a wrap. Values are immutable.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "civp/error.hpp"

namespace civp {

class WideUint {
 public:
  // Zero of the given width.
  explicit WideUint(int width) : width_(width) {
    check_width(width);
    limbs_.resize(limb_count(width), 0);
  }

  static WideUint zeros(int width) { return WideUint(width); }

  static WideUint ones(int width) {
    WideUint x(width);
    for (std::uint64_t& l : x.limbs_) l = ~0ull;
    x.mask_top();
    return x;
  }

  static WideUint from_u64(std::uint64_t value, int width) {
    WideUint x(width);
    if (width < 64 && (value >> width) != 0) {
      throw OverflowError("value does not fit declared width " + std::to_string(width));
    }
    x.limbs_[0] = value;
    return x;
  }

  // MSB-first conventional hex. Any digit count is accepted as long as the
  // value fits the declared width.
  static WideUint from_hex(std::string_view hex, int width) {
    check_width(width);
    if (hex.empty()) throw ParseError("empty hex string");
    std::vector<std::uint64_t> limbs(hex.size() / 16 + 2, 0);
    for (std::size_t i = 0; i < hex.size(); ++i) {
      const int v = nibble(hex[i]);
      if (v < 0) throw ParseError(std::string("invalid hex digit '") + hex[i] + "'");
      const int pos = static_cast<int>(4 * (hex.size() - 1 - i));
      limbs[pos / 64] |= static_cast<std::uint64_t>(v) << (pos % 64);
      if (pos % 64 > 60) limbs[pos / 64 + 1] |= static_cast<std::uint64_t>(v) >> (64 - pos % 64);
    }
    int msb = -1;
    for (int i = static_cast<int>(limbs.size()) - 1; i >= 0; --i) {
      if (limbs[i]) {
        msb = i * 64 + 63 - __builtin_clzll(limbs[i]);
        break;
      }
    }
    if (msb >= width) {
      throw OverflowError("hex value needs " + std::to_string(msb + 1) +
                          " bits, exceeds declared width " + std::to_string(width));
    }
    WideUint x(width);
    const std::size_t n = limbs.size() < x.limbs_.size() ? limbs.size() : x.limbs_.size();
    for (std::size_t i = 0; i < n; ++i) x.limbs_[i] = limbs[i];
    return x;
  }

  int width() const { return width_; }

  bool is_zero() const {
    for (std::uint64_t l : limbs_)
      if (l) return false;
    return true;
  }

  bool bit(int i) const {
    if (i < 0 || i >= width_) {
      throw BoundsError("bit index " + std::to_string(i) + " outside width " +
                        std::to_string(width_));
    }
    return (limbs_[i / 64] >> (i % 64)) & 1;
  }

  // Index of the highest set bit, or -1 for zero.
  int msb_index() const {
    for (int i = static_cast<int>(limbs_.size()) - 1; i >= 0; --i) {
      if (limbs_[i]) return i * 64 + 63 - __builtin_clzll(limbs_[i]);
    }
    return -1;
  }

  // True if any bit at index < k is set.
  bool any_below(int k) const {
    if (k <= 0) return false;
    if (k > width_) k = width_;
    const int whole = k / 64;
    for (int i = 0; i < whole; ++i)
      if (limbs_[i]) return true;
    return k % 64 && (limbs_[whole] & ((1ull << (k % 64)) - 1));
  }

  std::uint64_t to_u64() const {
    if (msb_index() >= 64) {
      throw OverflowError("value wider than 64 bits (width " + std::to_string(width_) + ")");
    }
    return limbs_[0];
  }

  // Uppercase, exactly ceil(width/4) digits.
  std::string to_hex() const {
    static const char* digits = "0123456789ABCDEF";
    const int ndig = (width_ + 3) / 4;
    std::string out(static_cast<std::size_t>(ndig), '0');
    for (int d = 0; d < ndig; ++d) {
      const int pos = 4 * d;
      unsigned v = static_cast<unsigned>(limbs_[pos / 64] >> (pos % 64)) & 0xF;
      if (pos % 64 > 60 && pos / 64 + 1 < static_cast<int>(limbs_.size())) {
        v |= static_cast<unsigned>(limbs_[pos / 64 + 1] << (64 - pos % 64)) & 0xF;
      }
      out[static_cast<std::size_t>(ndig - 1 - d)] = digits[v];
    }
    return out;
  }

  // Bits [low, low+len) as a new value of width len.
  WideUint slice(int low, int len) const {
    if (len < 1 || low < 0 || low + len > width_) {
      throw BoundsError("slice [" + std::to_string(low) + "," + std::to_string(low + len) +
                        ") outside width " + std::to_string(width_));
    }
    WideUint out(len);
    for (int i = 0; i < static_cast<int>(out.limbs_.size()); ++i) {
      const int src = low + i * 64;
      std::uint64_t v = limbs_[src / 64] >> (src % 64);
      if (src % 64 && src / 64 + 1 < static_cast<int>(limbs_.size())) {
        v |= limbs_[src / 64 + 1] << (64 - src % 64);
      }
      out.limbs_[i] = v;
    }
    out.mask_top();
    return out;
  }

  // Same value, wider declaration.
  WideUint zero_extend(int new_width) const {
    if (new_width < width_) {
      throw ContractError("zero_extend to narrower width " + std::to_string(new_width) +
                          " from " + std::to_string(width_));
    }
    WideUint out(new_width);
    for (std::size_t i = 0; i < limbs_.size(); ++i) out.limbs_[i] = limbs_[i];
    return out;
  }

  // this + term * 2^shift, exact, result keeps this->width().
  WideUint add_shifted(const WideUint& term, int shift) const {
    if (shift < 0) throw ContractError("negative shift");
    if (term.width_ + shift > width_) {
      throw OverflowError("term of width " + std::to_string(term.width_) + " at shift " +
                          std::to_string(shift) + " does not fit accumulator of width " +
                          std::to_string(width_));
    }
    using u128 = unsigned __int128;
    WideUint out(*this);
    const int word = shift / 64, rem = shift % 64;
    const std::size_t tn = term.limbs_.size();
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i <= tn; ++i) {  // one extra limb catches the shift spill
      std::uint64_t piece = 0;
      if (rem == 0) {
        if (i < tn) piece = term.limbs_[i];
      } else {
        if (i < tn) piece = term.limbs_[i] << rem;
        if (i > 0) piece |= term.limbs_[i - 1] >> (64 - rem);
      }
      if (piece == 0 && carry == 0) continue;
      const std::size_t dst = static_cast<std::size_t>(word) + i;
      if (dst >= out.limbs_.size()) {
        throw OverflowError("accumulation overflows width " + std::to_string(width_));
      }
      const u128 cur = static_cast<u128>(out.limbs_[dst]) + piece + carry;
      out.limbs_[dst] = static_cast<std::uint64_t>(cur);
      carry = static_cast<std::uint64_t>(cur >> 64);
    }
    for (std::size_t k = static_cast<std::size_t>(word) + tn + 1; carry; ++k) {
      if (k >= out.limbs_.size()) {
        throw OverflowError("accumulation overflows width " + std::to_string(width_));
      }
      const u128 cur = static_cast<u128>(out.limbs_[k]) + carry;
      out.limbs_[k] = static_cast<std::uint64_t>(cur);
      carry = static_cast<std::uint64_t>(cur >> 64);
    }
    if (!out.top_clean()) {
      throw OverflowError("accumulation overflows width " + std::to_string(width_));
    }
    return out;
  }

  // Value * 2^k, width grows by k.
  WideUint shifted_left(int k) const {
    if (k < 0) throw ContractError("negative shift");
    WideUint out(width_ + k);
    const int word = k / 64, rem = k % 64;
    for (int i = static_cast<int>(out.limbs_.size()) - 1; i >= word; --i) {
      const int src = i - word;
      std::uint64_t v = 0;
      if (src < static_cast<int>(limbs_.size())) v = rem ? (limbs_[src] << rem) : limbs_[src];
      if (rem && src >= 1 && src - 1 < static_cast<int>(limbs_.size())) {
        v |= limbs_[src - 1] >> (64 - rem);
      }
      out.limbs_[i] = v;
    }
    out.mask_top();
    return out;
  }

  // Numeric equality; declared widths may differ.
  friend bool operator==(const WideUint& a, const WideUint& b) {
    const std::size_t n = a.limbs_.size() > b.limbs_.size() ? a.limbs_.size() : b.limbs_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t la = i < a.limbs_.size() ? a.limbs_[i] : 0;
      const std::uint64_t lb = i < b.limbs_.size() ? b.limbs_[i] : 0;
      if (la != lb) return false;
    }
    return true;
  }
  friend bool operator!=(const WideUint& a, const WideUint& b) { return !(a == b); }

  friend WideUint mul_oracle(const WideUint& a, const WideUint& b);

 private:
  static void check_width(int width) {
    if (width < 1) throw ContractError("width must be >= 1, got " + std::to_string(width));
  }
  static int limb_count(int width) { return (width + 63) / 64; }
  static int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  }
  void mask_top() {
    const int rem = width_ % 64;
    if (rem) limbs_.back() &= (1ull << rem) - 1;
  }
  bool top_clean() const {
    const int rem = width_ % 64;
    return rem == 0 || (limbs_.back() >> rem) == 0;
  }

  int width_;
  std::vector<std::uint64_t> limbs_;
};

// Exact product of width a.width + b.width by schoolbook limb multiplication.
// Shares nothing with the tile/partition machinery it is used to check.
inline WideUint mul_oracle(const WideUint& a, const WideUint& b) {
  using u128 = unsigned __int128;
  WideUint out(a.width_ + b.width_);
  std::vector<std::uint64_t>& r = out.limbs_;
  for (std::size_t i = 0; i < a.limbs_.size(); ++i) {
    if (a.limbs_[i] == 0) continue;
    std::uint64_t carry = 0;
    for (std::size_t j = 0; j < b.limbs_.size(); ++j) {
      if (i + j >= r.size()) break;
      const u128 cur = static_cast<u128>(a.limbs_[i]) * b.limbs_[j] + r[i + j] + carry;
      r[i + j] = static_cast<std::uint64_t>(cur);
      carry = static_cast<std::uint64_t>(cur >> 64);
    }
    for (std::size_t k = i + b.limbs_.size(); carry && k < r.size(); ++k) {
      const u128 cur = static_cast<u128>(r[k]) + carry;
      r[k] = static_cast<std::uint64_t>(cur);
      carry = static_cast<std::uint64_t>(cur >> 64);
    }
  }
  return out;
}

}  // namespace civp
