#pragma once

// Partition plans: schedules of tile invocations over operand bit-slices
// whose shifted sum reproduces the full product. Carries the two fixed plans
// (57x57 from 53-bit significands, 114x114 from 113-bit significands) and a
// generic planner for arbitrary widths over any tile set.

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "civp/error.hpp"
#include "civp/tiles.hpp"
#include "civp/wideint.hpp"

namespace civp {

struct SliceSpec {
  int low = 0;
  int len = 0;
};

struct PlanStep {
  int a_index = 0;
  int b_index = 0;
  TileShape tile;
  int shift = 0;  // always a_slices[a_index].low + b_slices[b_index].low
};

struct PartitionPlan {
  std::string name;
  std::string tileset_name;
  int a_width = 0;  // true operand widths
  int b_width = 0;
  int a_padded = 0;  // after MSB-side zero padding
  int b_padded = 0;
  std::vector<SliceSpec> a_slices;
  std::vector<SliceSpec> b_slices;
  std::vector<PlanStep> steps;  // complete a x b slice cross product
  int product_width = 0;        // a_padded + b_padded
};

namespace detail {

// Smallest-capacity tile covering the (la, lb) pair in either orientation;
// capacity ties break toward the lexicographically smaller (w, h).
inline const TileShape* best_tile(const std::vector<TileShape>& shapes, int la, int lb) {
  const TileShape* best = nullptr;
  for (const TileShape& s : shapes) {
    if (!((la <= s.w && lb <= s.h) || (la <= s.h && lb <= s.w))) continue;
    if (!best || s.capacity() < best->capacity() ||
        (s.capacity() == best->capacity() &&
         (s.w < best->w || (s.w == best->w && s.h < best->h)))) {
      best = &s;
    }
  }
  return best;
}

inline std::vector<SliceSpec> slices_from_parts(const std::vector<int>& parts) {
  std::vector<SliceSpec> out;
  int low = 0;
  for (int len : parts) {
    out.push_back({low, len});
    low += len;
  }
  return out;
}

inline PartitionPlan make_plan(std::string name, std::string tileset_name, int a_width,
                               int b_width, std::vector<SliceSpec> a_slices,
                               std::vector<SliceSpec> b_slices,
                               const std::vector<TileShape>& shapes) {
  PartitionPlan p;
  p.name = std::move(name);
  p.tileset_name = std::move(tileset_name);
  p.a_width = a_width;
  p.b_width = b_width;
  p.a_slices = std::move(a_slices);
  p.b_slices = std::move(b_slices);
  p.a_padded = p.a_slices.back().low + p.a_slices.back().len;
  p.b_padded = p.b_slices.back().low + p.b_slices.back().len;
  p.product_width = p.a_padded + p.b_padded;
  for (int i = 0; i < static_cast<int>(p.a_slices.size()); ++i) {
    for (int j = 0; j < static_cast<int>(p.b_slices.size()); ++j) {
      const SliceSpec& sa = p.a_slices[i];
      const SliceSpec& sb = p.b_slices[j];
      const TileShape* tile = best_tile(shapes, sa.len, sb.len);
      if (!tile) {
        throw PlanError("no tile in set '" + p.tileset_name + "' covers slice pair " +
                        std::to_string(sa.len) + "x" + std::to_string(sb.len));
      }
      p.steps.push_back({i, j, *tile, sa.low + sb.low});
    }
  }
  return p;
}

// Greedy decomposition: pad the width up to the smallest sum of tile
// dimensions >= width, then peel parts largest dimension first, keeping the
// remainder expressible at every step.
inline std::vector<int> decompose_width(int width, const std::vector<int>& dims_desc) {
  const int max_dim = dims_desc.front();
  const int limit = width + max_dim;
  std::vector<char> reachable(static_cast<std::size_t>(limit) + 1, 0);
  reachable[0] = 1;
  for (int s = 1; s <= limit; ++s) {
    for (int d : dims_desc) {
      if (s >= d && reachable[s - d]) {
        reachable[s] = 1;
        break;
      }
    }
  }
  int padded = width;
  while (!reachable[padded]) ++padded;  // bounded: some multiple of max_dim lands in range
  std::vector<int> parts;
  for (int rem = padded; rem > 0;) {
    for (int d : dims_desc) {
      if (rem >= d && reachable[rem - d]) {
        parts.push_back(d);
        rem -= d;
        break;
      }
    }
  }
  return parts;
}

}  // namespace detail

// 53x53 via 57x57: significands padded with four MSB zeros, sliced 24|24|9
// (low to high), nine steps on four 24x24, four 24x9 and one 9x9 tile.
inline PartitionPlan plan_p57() {
  const std::vector<SliceSpec> slices = {{0, 24}, {24, 24}, {48, 9}};
  return detail::make_plan("p57", "civp", 53, 53, slices, slices,
                           find_tileset("civp")->shapes);
}

// 113x113 via 114x114: one MSB zero pad, two 57-bit halves per operand, four
// 57x57 sub-multiplications each expanded with the p57 step structure. The
// halves carry 57 significant bits, so no inner padding; flattened census is
// sixteen 24x24, sixteen 24x9 and four 9x9 tiles.
inline PartitionPlan plan_p114() {
  std::vector<SliceSpec> slices;
  for (int half = 0; half < 2; ++half) {
    const int base = 57 * half;
    slices.push_back({base + 0, 24});
    slices.push_back({base + 24, 24});
    slices.push_back({base + 48, 9});
  }
  return detail::make_plan("p114", "civp", 113, 113, slices, slices,
                           find_tileset("civp")->shapes);
}

// Uniform-padding construction for arbitrary widths: per-operand slice widths
// are chosen greedily from the set's port dimensions, padding up to the
// smallest reachable sum; each slice pair gets the smallest-capacity tile
// that fits.
inline PartitionPlan plan_generic(int a_width, int b_width, const TileSet& tiles) {
  if (a_width < 1 || b_width < 1) {
    throw ContractError("operand widths must be >= 1, got " + std::to_string(a_width) + "x" +
                        std::to_string(b_width));
  }
  if (tiles.shapes.empty()) throw PlanError("tile set '" + tiles.name + "' is empty");
  std::vector<int> dims;
  for (const TileShape& s : tiles.shapes) {
    if (s.w < 1 || s.h < 1) throw PlanError("tile " + s.label() + " is degenerate");
    dims.push_back(s.w);
    dims.push_back(s.h);
  }
  std::sort(dims.begin(), dims.end(), std::greater<int>());
  dims.erase(std::unique(dims.begin(), dims.end()), dims.end());

  const std::string name =
      tiles.name + " " + std::to_string(a_width) + "x" + std::to_string(b_width);
  return detail::make_plan(
      name, tiles.name, a_width, b_width,
      detail::slices_from_parts(detail::decompose_width(a_width, dims)),
      detail::slices_from_parts(detail::decompose_width(b_width, dims)), tiles.shapes);
}

using TileMulFn = std::function<WideUint(const TileShape&, const WideUint&, const WideUint&)>;

// Run the plan: slice, multiply each pair through its tile, accumulate the
// shifted partial products. The tile product is w+h wide but only its low
// len_a+len_b bits can be nonzero, so it is narrowed before accumulation.
inline WideUint execute_plan(const PartitionPlan& plan, const WideUint& a, const WideUint& b,
                             const TileMulFn& tile_fn) {
  if (a.width() != plan.a_width || b.width() != plan.b_width) {
    throw ContractError("plan '" + plan.name + "' expects operands " +
                        std::to_string(plan.a_width) + "x" + std::to_string(plan.b_width) +
                        ", got " + std::to_string(a.width()) + "x" +
                        std::to_string(b.width()));
  }
  const WideUint ap = a.zero_extend(plan.a_padded);
  const WideUint bp = b.zero_extend(plan.b_padded);
  WideUint acc(plan.product_width);
  for (const PlanStep& step : plan.steps) {
    const SliceSpec& sa = plan.a_slices[static_cast<std::size_t>(step.a_index)];
    const SliceSpec& sb = plan.b_slices[static_cast<std::size_t>(step.b_index)];
    const WideUint product = tile_fn(step.tile, ap.slice(sa.low, sa.len), bp.slice(sb.low, sb.len));
    acc = acc.add_shifted(product.slice(0, sa.len + sb.len), step.shift);
  }
  return acc;
}

inline WideUint execute_plan(const PartitionPlan& plan, const WideUint& a, const WideUint& b) {
  return execute_plan(plan, a, b,
                      [](const TileShape& s, const WideUint& x, const WideUint& y) {
                        return tile_mul(s, x, y);
                      });
}

inline std::map<TileShape, int> plan_census(const PartitionPlan& plan) {
  std::map<TileShape, int> census;
  for (const PlanStep& step : plan.steps) census[step.tile] += 1;
  return census;
}

inline std::string census_to_string(const std::map<TileShape, int>& census) {
  std::string out;
  for (const auto& [shape, count] : census) {
    if (!out.empty()) out += ' ';
    out += shape.label() + ":" + std::to_string(count);
  }
  return out;
}

// Structured text form used by the plan subcommand and the golden tests.
inline std::string plan_to_text(const PartitionPlan& plan) {
  std::string out;
  out += "plan: " + plan.name + "\n";
  out += "tileset: " + plan.tileset_name + "\n";
  out += "a_width: " + std::to_string(plan.a_width) + " (padded to " +
         std::to_string(plan.a_padded) + ")\n";
  out += "b_width: " + std::to_string(plan.b_width) + " (padded to " +
         std::to_string(plan.b_padded) + ")\n";
  out += "product_width: " + std::to_string(plan.product_width) + "\n";
  const auto slice_line = [](const std::vector<SliceSpec>& slices) {
    std::string s;
    for (const SliceSpec& sl : slices) {
      if (!s.empty()) s += ' ';
      s += "[" + std::to_string(sl.low) + "," + std::to_string(sl.low + sl.len) + ")";
    }
    return s;
  };
  out += "a_slices: " + slice_line(plan.a_slices) + "\n";
  out += "b_slices: " + slice_line(plan.b_slices) + "\n";
  out += "steps:\n";
  int n = 0;
  for (const PlanStep& step : plan.steps) {
    const SliceSpec& sa = plan.a_slices[static_cast<std::size_t>(step.a_index)];
    const SliceSpec& sb = plan.b_slices[static_cast<std::size_t>(step.b_index)];
    char buf[128];
    std::snprintf(buf, sizeof(buf), "  %2d: a[%d,%d) * b[%d,%d) -> tile %s shift %d\n", ++n,
                  sa.low, sa.low + sa.len, sb.low, sb.low + sb.len, step.tile.label().c_str(),
                  step.shift);
    out += buf;
  }
  out += "census: " + census_to_string(plan_census(plan)) + "\n";
  out += "tiles: " + std::to_string(plan.steps.size()) + "\n";
  return out;
}

}  // namespace civp
