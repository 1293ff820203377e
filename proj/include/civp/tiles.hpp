#pragma once

// Hardware multiplier primitives: fixed-size tiles, named tile sets, and
// per-invocation utilization accounting. Tiles compute exact products; how
// much of a tile's w*h bit-product array carries significant bits is a
// separate, structural accounting concern.

#include <string>
#include <string_view>
#include <vector>

#include "civp/error.hpp"
#include "civp/wideint.hpp"

namespace civp {

struct TileShape {
  int w = 0;  // operand-A port width
  int h = 0;  // operand-B port width

  long capacity() const { return static_cast<long>(w) * h; }

  std::string label() const { return std::to_string(w) + "x" + std::to_string(h); }

  friend bool operator==(const TileShape& a, const TileShape& b) {
    return a.w == b.w && a.h == b.h;
  }

  // Display order: big tiles first (capacity, then wider port).
  friend bool operator<(const TileShape& a, const TileShape& b) {
    if (a.capacity() != b.capacity()) return a.capacity() > b.capacity();
    if (a.w != b.w) return a.w > b.w;
    return a.h > b.h;
  }
};

struct TileSet {
  std::string name;
  std::vector<TileShape> shapes;
};

// One scheduled use of a tile: how many significant bits each port carries.
struct TileInvocation {
  TileShape shape;
  int a_bits = 0;  // significant bits on the w port, >= 1
  int b_bits = 0;  // significant bits on the h port, >= 1
};

// The proposed set, the plain-18x18 baseline, and the multiplier mix shipped
// in current FPGA families. 25x18 is carried for comparison completeness; no
// decomposition in this model uses it.
inline const std::vector<TileSet>& builtin_tilesets() {
  static const std::vector<TileSet> sets = {
      {"civp", {{24, 24}, {24, 9}, {9, 9}}},
      {"baseline18", {{18, 18}}},
      {"existing-fpga", {{25, 18}, {18, 18}, {9, 9}}},
  };
  return sets;
}

inline const TileSet* find_tileset(std::string_view name) {
  std::string key(name);
  for (char& c : key) c = static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
  if (key == "baseline_18") key = "baseline18";
  if (key == "existing" || key == "existing_fpga" || key == "existingfpga") key = "existing-fpga";
  for (const TileSet& s : builtin_tilesets()) {
    if (s.name == key) return &s;
  }
  return nullptr;
}

// Exact product through one tile, width shape.w + shape.h. Operands may be
// presented in either orientation; a 24x9 block is wired the same both ways.
inline WideUint tile_mul(const TileShape& shape, const WideUint& a, const WideUint& b) {
  if (shape.w < 1 || shape.h < 1) throw TileError("tile " + shape.label() + " is degenerate");
  const bool direct = a.width() <= shape.w && b.width() <= shape.h;
  const bool swapped = a.width() <= shape.h && b.width() <= shape.w;
  if (!direct && !swapped) {
    throw TileError("operands " + std::to_string(a.width()) + "x" + std::to_string(b.width()) +
                    " exceed tile " + shape.label() + " in both orientations");
  }
  const int product_width = shape.w + shape.h;
  if (product_width <= 64) {
    return WideUint::from_u64(a.to_u64() * b.to_u64(), product_width);
  }
  return mul_oracle(a, b).zero_extend(product_width);
}

// Fraction of the tile's bit-product array carrying significant bits.
inline double tile_utilization(const TileInvocation& inv) {
  if (inv.a_bits < 1 || inv.b_bits < 1) {
    throw TileError("degenerate invocation of " + inv.shape.label() +
                    ": zero significant bits (plan should have pruned it)");
  }
  if (inv.a_bits > inv.shape.w || inv.b_bits > inv.shape.h) {
    throw TileError("invocation " + std::to_string(inv.a_bits) + "x" +
                    std::to_string(inv.b_bits) + " exceeds tile " + inv.shape.label());
  }
  return static_cast<double>(inv.a_bits) * inv.b_bits / static_cast<double>(inv.shape.capacity());
}

}  // namespace civp
